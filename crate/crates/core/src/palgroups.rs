//! Maximal palindromes of the trie, kept per node as arithmetic progressions.
//!
//! For every node `u` we store the lengths of the maximal palindromes that
//! end at `u`: the palindromic suffixes of the root path of `u` that no child
//! of `u` extends. Sorted increasingly they split into runs of equal
//! consecutive difference (the difference of the first length is taken
//! against 0), and each run is one [`PalGroup`] `<s, d, t>`. A node holds
//! `O(min(log h, sigma))` groups.
//!
//! Inserting a leaf under `u` with label `a` moves to the leaf exactly the
//! members of `u` preceded by `a`. Inside a group every member but the
//! longest is preceded by the same character, so one or two character
//! comparisons per group decide which members move. The empty palindrome at
//! `u` is tracked separately and moves (as `aa`) when `a` equals the label
//! into `u`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::trie::{NodeId, Trie};

/// Cached preceding character of a group member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cached {
    Unknown,
    /// `Known(None)` means the member spans the whole root path.
    Known(Option<Label>),
}

impl Cached {
    fn or(self, other: Cached) -> Cached {
        match self {
            Cached::Known(_) => self,
            Cached::Unknown => other,
        }
    }
}

/// A run of palindromic suffix lengths `s, s+d, ..., s+(t-1)d`.
///
/// `d` is the gap from the previous member in the owning list (from 0 for
/// the very first member), so for `t >= 2` it is the common difference.
#[derive(Debug, Clone, Copy)]
pub struct PalGroup {
    pub s: usize,
    pub d: usize,
    pub t: usize,
    /// character preceding every member but the longest
    pub pre_inner: Cached,
    /// character preceding the longest member
    pub pre_longest: Cached,
}

impl PartialEq for PalGroup {
    fn eq(&self, other: &Self) -> bool {
        (self.s, self.d, self.t) == (other.s, other.d, other.t)
    }
}

impl Eq for PalGroup {}

impl PalGroup {
    pub fn new(s: usize, d: usize, t: usize) -> Self {
        PalGroup {
            s,
            d,
            t,
            pre_inner: Cached::Unknown,
            pre_longest: Cached::Unknown,
        }
    }

    /// A group whose preceding characters are already known.
    pub fn with_chars(
        s: usize,
        d: usize,
        t: usize,
        inner: Option<Label>,
        longest: Option<Label>,
    ) -> Self {
        PalGroup {
            s,
            d,
            t,
            pre_inner: if t >= 2 {
                Cached::Known(inner)
            } else {
                Cached::Unknown
            },
            pre_longest: Cached::Known(longest),
        }
    }

    pub fn longest(&self) -> usize {
        self.s + (self.t - 1) * self.d
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.t).map(move |i| self.s + i * self.d)
    }
}

/// `<s, d, t>` as reported outside the crate: a leading singleton has no
/// predecessor and is shown with `d = 0`.
pub fn tuples(groups: &[PalGroup]) -> Vec<(usize, usize, usize)> {
    groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            if i == 0 && g.t == 1 {
                (g.s, 0, 1)
            } else {
                (g.s, g.d, g.t)
            }
        })
        .collect()
}

/// A contiguous slice of some group, used while moving members around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub s: usize,
    pub d: usize,
    pub t: usize,
    pub pre_inner: Cached,
    pub pre_longest: Cached,
}

impl Piece {
    fn longest(&self) -> usize {
        self.s + (self.t - 1) * self.d
    }

    fn from_group(g: &PalGroup) -> Self {
        Piece {
            s: g.s,
            d: g.d,
            t: g.t,
            pre_inner: g.pre_inner,
            pre_longest: g.pre_longest,
        }
    }

    fn first_char(&self) -> Cached {
        if self.t >= 2 {
            self.pre_inner
        } else {
            self.pre_longest
        }
    }
}

/// Builds the canonical run decomposition from increasing lengths.
#[derive(Default)]
struct ListBuilder {
    groups: Vec<PalGroup>,
    last_len: usize,
}

impl ListBuilder {
    fn push_one(&mut self, len: usize, ch: Cached) {
        let gap = len - self.last_len;
        match self.groups.last_mut() {
            Some(g) if g.d == gap => {
                g.pre_inner = g.pre_inner.or(g.pre_longest);
                g.pre_longest = ch;
                g.t += 1;
            }
            _ => self.groups.push(PalGroup {
                s: len,
                d: gap,
                t: 1,
                pre_inner: Cached::Unknown,
                pre_longest: ch,
            }),
        }
        self.last_len = len;
    }

    /// Pushes `k` members spaced by `d`, the first at `last_len + d`.
    fn push_run(&mut self, d: usize, k: usize, inner: Cached, longest: Cached) {
        if k == 0 {
            return;
        }
        let s = self.last_len + d;
        match self.groups.last_mut() {
            Some(g) if g.d == d => {
                g.pre_inner = g.pre_inner.or(g.pre_longest).or(inner);
                g.pre_longest = longest;
                g.t += k;
            }
            _ => self.groups.push(PalGroup {
                s,
                d,
                t: k,
                pre_inner: if k >= 2 { inner } else { Cached::Unknown },
                pre_longest: longest,
            }),
        }
        self.last_len = s + (k - 1) * d;
    }

    fn push_piece(&mut self, p: &Piece) {
        self.push_one(p.s, p.first_char());
        if p.t >= 2 {
            self.push_run(p.d, p.t - 1, p.pre_inner, p.pre_longest);
        }
    }

    fn finish(self) -> Vec<PalGroup> {
        self.groups
    }
}

fn build(pieces: &[Piece]) -> Vec<PalGroup> {
    let mut b = ListBuilder::default();
    for p in pieces {
        b.push_piece(p);
    }
    b.finish()
}

/// Merges two increasing, disjoint piece sequences, splitting pieces where
/// the other sequence interleaves.
fn merge_pieces(a: &[Piece], b: &[Piece]) -> Vec<Piece> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    let mut pa = a.first().copied();
    let mut pb = b.first().copied();
    loop {
        match (pa, pb) {
            (None, None) => break,
            (Some(p), None) => {
                out.push(p);
                ia += 1;
                pa = a.get(ia).copied();
            }
            (None, Some(q)) => {
                out.push(q);
                ib += 1;
                pb = b.get(ib).copied();
            }
            (Some(p), Some(q)) => {
                let (lo, hi, lo_is_a) = if p.s < q.s {
                    (p, q, true)
                } else {
                    (q, p, false)
                };
                let rest = if lo.longest() < hi.s {
                    out.push(lo);
                    None
                } else {
                    // members of lo below hi.s, then the remainder of lo
                    let k = (hi.s - lo.s).div_ceil(lo.d);
                    out.push(Piece {
                        t: k,
                        pre_longest: lo.pre_inner,
                        ..lo
                    });
                    Some(Piece {
                        s: lo.s + k * lo.d,
                        t: lo.t - k,
                        ..lo
                    })
                };
                if lo_is_a {
                    pa = rest.or_else(|| {
                        ia += 1;
                        a.get(ia).copied()
                    });
                } else {
                    pb = rest.or_else(|| {
                        ib += 1;
                        b.get(ib).copied()
                    });
                }
            }
        }
    }
    out
}

/// Which members of a group extend with the new character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// every member extends
    All,
    /// all but the longest extend
    AllButLongest,
    /// only the longest extends
    LongestOnly,
    None,
}

/// Result of extending one node's groups by a character.
#[derive(Debug, Clone)]
pub struct Extension {
    /// groups of the new leaf
    pub leaf: Vec<PalGroup>,
    /// groups remaining at the parent
    pub retained: Vec<PalGroup>,
    /// members removed from the parent, at parent lengths
    pub extracted: Vec<Piece>,
    /// the case applied to each parent group, in order
    pub cases: Vec<Case>,
    /// each moved piece after extension, before merging
    pub moved: Vec<(usize, usize, usize)>,
    pub eps_extended: bool,
}

/// Applies one leaf extension to a group list.
///
/// `eps_pre` is the character preceding the empty palindrome at the parent
/// if that palindrome has not been extended yet. `fetch(len)` returns the
/// character preceding the palindromic suffix of length `len`; it is only
/// called for cache misses, and `groups` is updated with what it returns.
pub fn extend(
    groups: &mut [PalGroup],
    eps_pre: Option<Label>,
    a: Label,
    mut fetch: impl FnMut(usize) -> Result<Option<Label>>,
) -> Result<Extension> {
    let mut retained = Vec::new();
    let mut extracted = Vec::new();
    let mut cases = Vec::with_capacity(groups.len());
    for g in groups.iter_mut() {
        let inner = if g.t >= 2 {
            let b = match g.pre_inner {
                Cached::Known(b) => b,
                Cached::Unknown => fetch(g.s)?,
            };
            g.pre_inner = Cached::Known(b);
            Some(b)
        } else {
            None
        };
        let c = match g.pre_longest {
            Cached::Known(c) => c,
            Cached::Unknown => fetch(g.longest())?,
        };
        g.pre_longest = Cached::Known(c);
        let inner_ext = inner == Some(Some(a));
        let longest_ext = c == Some(a);
        let whole = Piece::from_group(g);
        let case = match (inner_ext, longest_ext) {
            (true, true) => {
                extracted.push(whole);
                Case::All
            }
            (true, false) => {
                let b = g.pre_inner;
                extracted.push(Piece {
                    t: g.t - 1,
                    pre_longest: b,
                    ..whole
                });
                retained.push(Piece {
                    s: g.longest(),
                    t: 1,
                    pre_inner: Cached::Unknown,
                    ..whole
                });
                Case::AllButLongest
            }
            (false, true) => {
                extracted.push(Piece {
                    s: g.longest(),
                    t: 1,
                    pre_inner: Cached::Unknown,
                    ..whole
                });
                if g.t >= 2 {
                    let b = g.pre_inner;
                    retained.push(Piece {
                        t: g.t - 1,
                        pre_longest: b,
                        ..whole
                    });
                }
                Case::LongestOnly
            }
            (false, false) => {
                retained.push(whole);
                Case::None
            }
        };
        cases.push(case);
    }

    let eps_extended = eps_pre == Some(a);
    let mut b = ListBuilder::default();
    b.push_one(1, Cached::Unknown);
    if eps_extended {
        b.push_one(2, Cached::Unknown);
    }
    let mut moved = Vec::with_capacity(extracted.len());
    for p in &extracted {
        let shifted = Piece {
            s: p.s + 2,
            pre_inner: Cached::Unknown,
            pre_longest: Cached::Unknown,
            ..*p
        };
        moved.push((
            shifted.s,
            if shifted.t == 1 { 0 } else { shifted.d },
            shifted.t,
        ));
        b.push_piece(&shifted);
    }
    Ok(Extension {
        leaf: b.finish(),
        retained: build(&retained),
        extracted,
        cases,
        moved,
        eps_extended,
    })
}

/// The maximal palindromes ending at one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupList {
    pub groups: Vec<PalGroup>,
    /// whether some child has extended the empty palindrome
    pub eps_consumed: bool,
    children: usize,
    is_root: bool,
}

impl GroupList {
    fn new(groups: Vec<PalGroup>, is_root: bool) -> Self {
        GroupList {
            groups,
            eps_consumed: false,
            children: 0,
            is_root,
        }
    }

    fn eps_counted(&self) -> bool {
        !self.is_root && self.children > 0 && !self.eps_consumed
    }

    /// Number of maximal palindromes ending here, the empty one included.
    pub fn count(&self) -> usize {
        self.groups.iter().map(|g| g.t).sum::<usize>() + usize::from(self.eps_counted())
    }

    /// Member lengths in increasing order (empty palindrome excluded).
    pub fn lengths(&self) -> Vec<usize> {
        self.groups
            .iter()
            .flat_map(|g| g.members().collect::<Vec<_>>())
            .collect()
    }

    pub fn tuples(&self) -> Vec<(usize, usize, usize)> {
        tuples(&self.groups)
    }
}

/// Everything needed to undo one leaf insertion at its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndoRecord {
    pub leaf: NodeId,
    pub parent: NodeId,
    pub extracted: Vec<Piece>,
    pub eps_consumed: bool,
}

/// Group lists of every live trie node.
#[derive(Debug, Clone)]
pub struct PalGroups {
    lists: HashMap<NodeId, GroupList>,
    lps: HashMap<NodeId, usize>,
    maximal: usize,
}

impl Default for PalGroups {
    fn default() -> Self {
        Self::new()
    }
}

impl PalGroups {
    pub fn new() -> Self {
        let mut lists = HashMap::new();
        lists.insert(NodeId::ROOT, GroupList::new(Vec::new(), true));
        PalGroups {
            lists,
            lps: HashMap::new(),
            maximal: 0,
        }
    }

    pub fn groups(&self, v: NodeId) -> Option<&GroupList> {
        self.lists.get(&v)
    }

    /// Builds the groups of `leaf`, just inserted under `parent` with label
    /// `a`, and moves the extended members out of `parent`.
    pub fn on_insert(
        &mut self,
        trie: &Trie,
        parent: NodeId,
        leaf: NodeId,
        a: Label,
    ) -> Result<(usize, UndoRecord)> {
        if self.lists.contains_key(&leaf) {
            return Err(Error::StaleParentState(leaf));
        }
        let list = self
            .lists
            .get_mut(&parent)
            .ok_or(Error::StaleParentState(parent))?;
        let before = list.count();
        let eps_pre = if list.eps_consumed {
            None
        } else {
            trie.label(parent)?
        };
        let ext = extend(&mut list.groups, eps_pre, a, |len| {
            trie.char_before_suffix(parent, len)
        })?;

        list.groups = ext.retained;
        list.eps_consumed |= ext.eps_extended;
        list.children += 1;
        let after = list.count();

        let leaf_list = GroupList::new(ext.leaf, false);
        let lps = leaf_list.groups.last().map(PalGroup::longest).unwrap_or(0);
        self.maximal = self.maximal + after + leaf_list.count() - before;
        self.lists.insert(leaf, leaf_list);
        self.lps.insert(leaf, lps);
        let undo = UndoRecord {
            leaf,
            parent,
            extracted: ext.extracted,
            eps_consumed: ext.eps_extended,
        };
        Ok((lps, undo))
    }

    /// Discards the groups of `leaf` and returns its extended members to the
    /// parent.
    pub fn on_delete(&mut self, leaf: NodeId, undo: UndoRecord) -> Result<()> {
        if undo.leaf != leaf {
            return Err(Error::UndoMismatch {
                expected: undo.leaf,
                got: leaf,
            });
        }
        let leaf_list = self.lists.get(&leaf).ok_or(Error::UnknownNode(leaf))?;
        if leaf_list.children > 0 {
            return Err(Error::NotALeaf(leaf));
        }
        let leaf_count = leaf_list.count();
        let list = self
            .lists
            .get_mut(&undo.parent)
            .ok_or(Error::StaleParentState(undo.parent))?;
        let before = list.count();
        let current: Vec<Piece> = list.groups.iter().map(Piece::from_group).collect();
        list.groups = build(&merge_pieces(&current, &undo.extracted));
        if undo.eps_consumed {
            list.eps_consumed = false;
        }
        list.children -= 1;
        let after = list.count();
        self.maximal = self.maximal + after - before - leaf_count;
        self.lists.remove(&leaf);
        self.lps.remove(&leaf);
        Ok(())
    }

    /// Length of the longest palindromic suffix of `leaf`'s root path, as
    /// computed when it was inserted.
    pub fn longest_pal_suffix(&self, v: NodeId) -> Option<usize> {
        self.lps.get(&v).copied()
    }

    /// All maximal palindromes as `(end node, length)` pairs, sorted.
    pub fn enumerate_maximal(&self) -> Vec<(NodeId, usize)> {
        let mut out = Vec::with_capacity(self.maximal);
        for (&v, list) in &self.lists {
            if list.eps_counted() {
                out.push((v, 0));
            }
            for g in &list.groups {
                out.extend(g.members().map(|len| (v, len)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of maximal palindromes; equals `2N - L`.
    pub fn count_maximal(&self, trie: &Trie) -> Result<usize> {
        if trie.stats().edges == 0 {
            return Err(Error::EmptyTrie);
        }
        Ok(self.maximal)
    }

    /// Maintained count, `0` for the root-only trie.
    pub fn maximal_count(&self) -> usize {
        self.maximal
    }

    /// Total number of stored groups across all nodes.
    pub fn total_groups(&self) -> usize {
        self.lists.values().map(|l| l.groups.len()).sum()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &GroupList)> + '_ {
        self.lists.iter().map(|(&v, l)| (v, l))
    }

    /// DOT rendering of the trie annotated with each node's groups.
    pub fn to_dot(&self, trie: &Trie) -> String {
        let mut s = String::from("digraph groups {\n");
        for v in trie.nodes() {
            let tuples = self
                .lists
                .get(&v)
                .map(|l| {
                    let mut parts: Vec<String> = l
                        .tuples()
                        .iter()
                        .map(|(s, d, t)| format!("<{s},{d},{t}>"))
                        .collect();
                    if l.eps_counted() {
                        parts.insert(0, "eps".to_string());
                    }
                    parts.join(" ")
                })
                .unwrap_or_default();
            s.push_str(&format!("  n{} [label=\"{}: {}\"];\n", v.0, v.0, tuples));
        }
        for v in trie.nodes() {
            for (l, c) in trie.children(v).expect("live node") {
                s.push_str(&format!(
                    "  n{} -> n{} [label=\"{}\"];\n",
                    v.0,
                    c.0,
                    crate::trie::dot_escape(l)
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}
