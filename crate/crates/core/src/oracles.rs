//! Brute-force references, written from the definitions alone.
//!
//! Nothing here depends on the engines; everything is quadratic or worse and
//! meant for small instances.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::label::Label;
use crate::trie::{NodeId, Trie};

/// Maximal palindrome length at each of the `2n - 1` centers of `s`
/// (characters at even indices, gaps at odd ones).
pub fn manacher<T: PartialEq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    // odd radii: d1[i] = number of palindromes centered at i
    let mut d1 = vec![0usize; n];
    let (mut l, mut r) = (0usize, 0usize); // [l, r) rightmost
    for i in 0..n {
        let mut k = if i < r {
            d1[l + r - 1 - i].min(r - i)
        } else {
            1
        };
        while i >= k && i + k < n && s[i - k] == s[i + k] {
            k += 1;
        }
        d1[i] = k;
        if i + k > r {
            l = i + 1 - k;
            r = i + k;
        }
    }
    // even radii: d2[i] = half length of the palindrome centered between i-1 and i
    let mut d2 = vec![0usize; n];
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        let mut k = if i < r { d2[l + r - i].min(r - i) } else { 0 };
        while i > k && i + k < n && s[i - k - 1] == s[i + k] {
            k += 1;
        }
        d2[i] = k;
        if i + k > r {
            l = i - k;
            r = i + k;
        }
    }
    let mut out = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        out.push(2 * d1[i] - 1);
        if i + 1 < n {
            out.push(2 * d2[i + 1]);
        }
    }
    out
}

pub fn is_palindrome<T: PartialEq>(s: &[T]) -> bool {
    s.iter().eq(s.iter().rev())
}

/// Lengths of the nonempty palindromic suffixes of `s`, increasing.
pub fn palindromic_suffixes<T: PartialEq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let m = manacher(s);
    let mut out: Vec<usize> = (0..m.len())
        .filter_map(|k| {
            let len = 2 * n - k - 1;
            (len >= 1 && len <= m[k]).then_some(len)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Length of the longest palindromic suffix of `s`.
pub fn longest_palindromic_suffix<T: PartialEq>(s: &[T]) -> usize {
    (0..=s.len())
        .rev()
        .find(|&l| is_palindrome(&s[s.len() - l..]))
        .unwrap_or(0)
}

fn child_labels(trie: &Trie, v: NodeId, skip: Option<NodeId>) -> BTreeSet<Label> {
    trie.children(v)
        .expect("live node")
        .filter(|&(_, c)| Some(c) != skip)
        .map(|(l, _)| l)
        .collect()
}

/// Lengths of the maximal palindromes ending at `v`: palindromic suffixes
/// of its root path not extended through any child, plus the empty one at
/// internal non-root nodes when no child extends it.
fn maximal_at(trie: &Trie, v: NodeId, skip: Option<NodeId>) -> Vec<usize> {
    if v == trie.root() {
        return Vec::new();
    }
    let path = trie.path_labels(v).expect("live node");
    let kids = child_labels(trie, v, skip);
    let before = |len: usize| (len < path.len()).then(|| path[path.len() - len - 1]);
    let mut lens = palindromic_suffixes(&path);
    if !kids.is_empty() {
        lens.insert(0, 0);
    }
    lens.retain(|&len| before(len).is_none_or(|b| !kids.contains(&b)));
    lens
}

/// Every maximal palindrome as `(end node, length)`, sorted.
pub fn maximal_bruteforce(trie: &Trie) -> Vec<(NodeId, usize)> {
    let mut out = Vec::new();
    for v in trie.nodes() {
        out.extend(maximal_at(trie, v, None).into_iter().map(|len| (v, len)));
    }
    out.sort_unstable();
    out
}

/// All nonempty palindromic substrings of root-to-node paths.
pub fn distinct_bruteforce(trie: &Trie) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for v in trie.nodes() {
        let path = trie.path_labels(v).expect("live node");
        for len in palindromic_suffixes(&path) {
            out.insert(
                path[path.len() - len..]
                    .iter()
                    .map(|l| l.as_char())
                    .collect(),
            );
        }
    }
    out
}

/// Backward string of `v`: its root path read upwards, then the sentinel.
pub fn backward_string(trie: &Trie, v: NodeId) -> Vec<Label> {
    let mut s = trie.path_labels(v).expect("live node");
    s.reverse();
    s.push(Label::SENTINEL);
    s
}

/// Node strings of the compacted trie of all backward strings, the root
/// being the empty string.
pub fn naive_st(trie: &Trie) -> BTreeSet<Vec<Label>> {
    let mut strings: Vec<Vec<Label>> = trie.nodes().map(|v| backward_string(trie, v)).collect();
    strings.sort();
    let mut nodes: BTreeSet<Vec<Label>> = strings.iter().cloned().collect();
    nodes.insert(Vec::new());
    for w in strings.windows(2) {
        let lcp = w[0].iter().zip(&w[1]).take_while(|(a, b)| a == b).count();
        nodes.insert(w[0][..lcp].to_vec());
    }
    nodes
}

/// Marks `(u, c)` of a node-string set: `c·u` is also a node.
pub fn naive_marks(nodes: &BTreeSet<Vec<Label>>) -> BTreeSet<(Vec<Label>, Label)> {
    nodes
        .iter()
        .filter(|w| !w.is_empty() && nodes.contains(&w[1..]))
        .map(|w| (w[1..].to_vec(), w[0]))
        .collect()
}

/// Palindrome bookkeeping by definition: per node, the palindromic
/// suffixes of its root path; globally, how many nodes end each palindrome.
#[derive(Debug, Default, Clone)]
pub struct Census {
    suffixes: HashMap<NodeId, Vec<Vec<Label>>>,
    counts: HashMap<Vec<Label>, usize>,
    maximal: HashMap<NodeId, usize>,
    maximal_total: usize,
}

impl Census {
    pub fn new() -> Self {
        Self::default()
    }

    fn recount(&mut self, trie: &Trie, v: NodeId, skip: Option<NodeId>) {
        let m = maximal_at(trie, v, skip).len();
        let old = self.maximal.insert(v, m).unwrap_or(0);
        self.maximal_total = self.maximal_total + m - old;
    }

    /// Records leaf `v` (already in the trie) and returns the lengths of
    /// palindromes that did not occur before.
    pub fn on_insert(&mut self, trie: &Trie, v: NodeId) -> Vec<usize> {
        let path = trie.path_labels(v).expect("live node");
        let pals: Vec<Vec<Label>> = palindromic_suffixes(&path)
            .into_iter()
            .map(|len| path[path.len() - len..].to_vec())
            .collect();
        let mut fresh = Vec::new();
        for p in &pals {
            let c = self.counts.entry(p.clone()).or_insert(0);
            *c += 1;
            if *c == 1 {
                fresh.push(p.len());
            }
        }
        self.suffixes.insert(v, pals);
        if let Some(u) = trie.parent(v).expect("live node") {
            self.recount(trie, u, None);
        }
        self.recount(trie, v, None);
        fresh
    }

    /// Forgets leaf `v` (still in the trie) and returns the lengths of
    /// palindromes that no longer occur.
    pub fn on_delete(&mut self, trie: &Trie, v: NodeId) -> Vec<usize> {
        let mut gone = Vec::new();
        for p in self.suffixes.remove(&v).unwrap_or_default() {
            let c = self.counts.get_mut(&p).expect("counted palindrome");
            *c -= 1;
            if *c == 0 {
                self.counts.remove(&p);
                gone.push(p.len());
            }
        }
        let m = self.maximal.remove(&v).unwrap_or(0);
        self.maximal_total -= m;
        if let Some(u) = trie.parent(v).expect("live node") {
            self.recount(trie, u, Some(v));
        }
        gone
    }

    /// Number of distinct nonempty palindromes.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn maximal(&self) -> usize {
        self.maximal_total
    }
}

/// Ordered colored list as a plain vector.
#[derive(Debug, Default, Clone)]
pub struct NaiveOrderList {
    items: Vec<(usize, BTreeSet<Label>)>,
}

impl NaiveOrderList {
    pub fn new() -> Self {
        Self::default()
    }

    fn pos(&self, e: usize) -> Option<usize> {
        self.items.iter().position(|(id, _)| *id == e)
    }

    pub fn insert_after(&mut self, after: Option<usize>, e: usize) {
        let at = after.map_or(0, |a| self.pos(a).expect("present") + 1);
        self.items.insert(at, (e, BTreeSet::new()));
    }

    pub fn delete(&mut self, e: usize) {
        let p = self.pos(e).expect("present");
        self.items.remove(p);
    }

    pub fn color(&mut self, e: usize, c: Label) {
        let p = self.pos(e).expect("present");
        self.items[p].1.insert(c);
    }

    pub fn uncolor(&mut self, e: usize, c: Label) {
        let p = self.pos(e).expect("present");
        self.items[p].1.remove(&c);
    }

    pub fn order_less(&self, a: usize, b: usize) -> bool {
        self.pos(a) < self.pos(b)
    }

    pub fn pred(&self, e: usize, c: Label) -> Option<usize> {
        let p = self.pos(e)?;
        self.items[..p]
            .iter()
            .rev()
            .find(|(_, cs)| cs.contains(&c))
            .map(|(id, _)| *id)
    }

    pub fn succ(&self, e: usize, c: Label) -> Option<usize> {
        let p = self.pos(e)?;
        self.items[p + 1..]
            .iter()
            .find(|(_, cs)| cs.contains(&c))
            .map(|(id, _)| *id)
    }

    pub fn ids(&self) -> Vec<usize> {
        self.items.iter().map(|(id, _)| *id).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Colored tree answering nearest-colored-ancestor queries by walking up.
#[derive(Debug, Clone)]
pub struct NaiveNca {
    nodes: BTreeMap<usize, (Option<usize>, Label)>,
    next: usize,
}

impl NaiveNca {
    pub fn new(root_color: Label) -> Self {
        NaiveNca {
            nodes: BTreeMap::from([(0, (None, root_color))]),
            next: 1,
        }
    }

    pub fn insert_leaf(&mut self, u: usize, c: Label) -> usize {
        let id = self.next;
        self.next += 1;
        self.nodes.insert(id, (Some(u), c));
        id
    }

    pub fn delete_leaf(&mut self, v: usize) {
        self.nodes.remove(&v);
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nodes.values().all(|(p, _)| *p != Some(v))
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.nodes.keys().copied().collect()
    }

    /// Nearest proper ancestor of `v` colored `c`.
    pub fn nca(&self, v: usize, c: Label) -> Option<usize> {
        let mut cur = self.nodes[&v].0;
        while let Some(u) = cur {
            let (p, col) = self.nodes[&u];
            if col == c {
                return Some(u);
            }
            cur = p;
        }
        None
    }
}
