//! Suffix tree of the backward trie, maintained online.
//!
//! The strings indexed are `str(v, $)`: the root path of every trie node
//! read upwards, followed by a sentinel standing for an edge above the root.
//! Each trie node owns exactly one leaf. A node `u` is *marked* by `c` when
//! the node with string `c·str(u)` exists; marks color both Euler-tour
//! occurrences of `u`, and a new leaf is placed by locating the marked
//! nodes nearest to its parent's leaf in tour order.
//!
//! Edge labels are not stored: a node keeps one trie node whose backward
//! string passes through it, and characters are read through the trie.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::order_list::{ElemId, OrderList};
use crate::trie::{NodeId, Trie};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StId(pub u32);

#[derive(Debug, Clone)]
struct StNode {
    sdepth: usize,
    parent: Option<StId>,
    children: BTreeMap<Label, StId>,
    marks: BTreeMap<Label, StId>,
    marked_from: Option<StId>,
    first: ElemId,
    last: ElemId,
    /// a trie node whose backward string has this node's string as prefix
    rep: NodeId,
    leaf_of: Option<NodeId>,
    live: bool,
}

#[derive(Debug, Clone)]
pub struct SuffixTree {
    nodes: Vec<StNode>,
    tour: OrderList<StId>,
    leaf: HashMap<NodeId, StId>,
    marks: usize,
    self_check: bool,
    checks: u64,
}

pub const ST_ROOT: StId = StId(0);

impl Default for SuffixTree {
    fn default() -> Self {
        Self::new()
    }
}

impl SuffixTree {
    /// The tree of a root-only trie: the root and the leaf `$`.
    pub fn new() -> Self {
        let mut tour = OrderList::new();
        let r0 = tour.insert_after(None, ST_ROOT).unwrap();
        let l0 = tour.insert_after(Some(r0), StId(1)).unwrap();
        let l1 = tour.insert_after(Some(l0), StId(1)).unwrap();
        let r1 = tour.insert_after(Some(l1), ST_ROOT).unwrap();
        let mk = |sdepth, parent, first, last, leaf_of| StNode {
            sdepth,
            parent,
            children: BTreeMap::new(),
            marks: BTreeMap::new(),
            marked_from: None,
            first,
            last,
            rep: NodeId::ROOT,
            leaf_of,
            live: true,
        };
        let mut root = mk(0, None, r0, r1, None);
        root.children.insert(Label::SENTINEL, StId(1));
        // "$" is the sentinel prepended to the empty string: the root is marked
        root.marks.insert(Label::SENTINEL, StId(1));
        tour.color(r0, Label::SENTINEL).unwrap();
        tour.color(r1, Label::SENTINEL).unwrap();
        let mut leaf = mk(1, Some(ST_ROOT), l0, l1, Some(NodeId::ROOT));
        leaf.marked_from = Some(ST_ROOT);
        SuffixTree {
            nodes: vec![root, leaf],
            tour,
            leaf: HashMap::from([(NodeId::ROOT, StId(1))]),
            marks: 1,
            self_check: false,
            checks: 0,
        }
    }

    /// Verify every insertion point against a naive descent from the root.
    pub fn set_self_check(&mut self, on: bool) {
        self.self_check = on;
    }

    /// Number of insertion points verified so far.
    pub fn insertion_checks(&self) -> u64 {
        self.checks
    }

    fn n(&self, x: StId) -> &StNode {
        &self.nodes[x.0 as usize]
    }

    fn nm(&mut self, x: StId) -> &mut StNode {
        &mut self.nodes[x.0 as usize]
    }

    pub fn root(&self) -> StId {
        ST_ROOT
    }

    pub fn leaf(&self, v: NodeId) -> Option<StId> {
        self.leaf.get(&v).copied()
    }

    pub fn leaf_of(&self, x: StId) -> Option<NodeId> {
        self.n(x).leaf_of
    }

    pub fn parent(&self, x: StId) -> Option<StId> {
        self.n(x).parent
    }

    pub fn sdepth(&self, x: StId) -> usize {
        self.n(x).sdepth
    }

    pub fn children(&self, x: StId) -> impl Iterator<Item = StId> + '_ {
        self.n(x).children.values().copied()
    }

    pub fn marks_of(&self, x: StId) -> impl Iterator<Item = (Label, StId)> + '_ {
        self.n(x).marks.iter().map(|(&c, &w)| (c, w))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.live).count()
    }

    pub fn mark_count(&self) -> usize {
        self.marks
    }

    /// Live nodes by handle.
    pub fn nodes(&self) -> impl Iterator<Item = StId> + '_ {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].live)
            .map(|i| StId(i as u32))
    }

    /// Character `i` of the backward string of trie node `v`.
    fn backward_char(trie: &Trie, v: NodeId, i: usize) -> Result<Label> {
        if i == trie.depth(v)? {
            Ok(Label::SENTINEL)
        } else {
            Ok(trie
                .label(trie.ancestor_at(v, i)?)?
                .expect("non-root ancestor"))
        }
    }

    fn char_at(&self, trie: &Trie, x: StId, i: usize) -> Result<Label> {
        Self::backward_char(trie, self.n(x).rep, i)
    }

    /// The string of `x`, sentinel included.
    pub fn string(&self, trie: &Trie, x: StId) -> Result<Vec<Label>> {
        (0..self.n(x).sdepth)
            .map(|i| self.char_at(trie, x, i))
            .collect()
    }

    /// Lowest common ancestor by walking parents.
    pub fn lca(&self, mut a: StId, mut b: StId) -> StId {
        while a != b {
            if self.n(a).sdepth >= self.n(b).sdepth {
                a = self.n(a).parent.expect("non-root");
            } else {
                b = self.n(b).parent.expect("non-root");
            }
        }
        a
    }

    fn add_mark(&mut self, u: StId, c: Label, w: StId) -> Result<()> {
        self.nm(u).marks.insert(c, w);
        self.nm(w).marked_from = Some(u);
        let (f, l) = (self.n(u).first, self.n(u).last);
        self.tour.color(f, c)?;
        self.tour.color(l, c)?;
        self.marks += 1;
        Ok(())
    }

    fn remove_mark(&mut self, u: StId, c: Label) -> Result<()> {
        self.nm(u).marks.remove(&c);
        let (f, l) = (self.n(u).first, self.n(u).last);
        self.tour.uncolor(f, c)?;
        self.tour.uncolor(l, c)?;
        self.marks -= 1;
        Ok(())
    }

    fn push_node(&mut self, node: StNode) -> StId {
        let id = StId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    /// Length of the longest prefix of `v`'s backward string that is a
    /// path in the tree, found by plain descent.
    fn naive_locus_depth(&self, trie: &Trie, v: NodeId) -> Result<usize> {
        let len = trie.depth(v)? + 1;
        let mut cur = ST_ROOT;
        let mut depth = 0;
        loop {
            if depth == len {
                return Ok(depth);
            }
            let c = Self::backward_char(trie, v, depth)?;
            let Some(&next) = self.n(cur).children.get(&c) else {
                return Ok(depth);
            };
            let end = self.n(next).sdepth.min(len);
            while depth < end {
                if self.char_at(trie, next, depth)? != Self::backward_char(trie, v, depth)? {
                    return Ok(depth);
                }
                depth += 1;
            }
            if depth < self.n(next).sdepth {
                return Ok(depth);
            }
            cur = next;
        }
    }

    /// Adds the leaf of `v`, freshly inserted into the trie.
    pub fn on_insert(&mut self, trie: &Trie, v: NodeId) -> Result<()> {
        let u = trie.parent(v)?.ok_or(Error::IsRoot)?;
        let c = trie.label(v)?.expect("non-root");
        let x = self.leaf(u).ok_or(Error::StaleParentState(u))?;
        if self.leaf.contains_key(&v) {
            return Err(Error::StaleParentState(v));
        }
        let first = self.n(x).first;
        let z1 = self
            .tour
            .pred(first, c)?
            .map(|e| *self.tour.payload(e).unwrap());
        let z2 = self
            .tour
            .succ(first, c)?
            .map(|e| *self.tour.payload(e).unwrap());
        let best = [z1, z2]
            .into_iter()
            .flatten()
            .map(|z| (self.lca(x, z), z))
            .max_by_key(|&(l, _)| self.n(l).sdepth);

        let expected = if self.self_check {
            Some(self.naive_locus_depth(trie, v)?)
        } else {
            None
        };

        let locus = match best {
            None => ST_ROOT,
            Some((xp, z)) => {
                let w = *self
                    .n(z)
                    .marks
                    .get(&c)
                    .ok_or_else(|| Error::InconsistentState("unmarked tour hit".into()))?;
                let k = self.n(xp).sdepth + 1;
                let mut g = w;
                while self.n(self.n(g).parent.expect("below the root")).sdepth >= k {
                    g = self.n(g).parent.unwrap();
                }
                if self.n(g).sdepth == k {
                    g
                } else {
                    self.split(trie, g, k, xp, c)?
                }
            }
        };
        if let Some(want) = expected {
            self.checks += 1;
            if want != self.n(locus).sdepth {
                return Err(Error::InconsistentState(format!(
                    "insertion point at depth {} but naive descent reaches {}",
                    self.n(locus).sdepth,
                    want
                )));
            }
        }

        let key = Self::backward_char(trie, v, self.n(locus).sdepth)?;
        if self.n(locus).children.contains_key(&key) {
            return Err(Error::InconsistentState(
                "insertion point already has this child".into(),
            ));
        }
        let before = self.n(locus).last;
        let anchor = self.tour.prev(before)?;
        let y = StId(self.nodes.len() as u32);
        let f = self.tour.insert_after(anchor, y)?;
        let l = self.tour.insert_after(Some(f), y)?;
        self.push_node(StNode {
            sdepth: trie.depth(v)? + 1,
            parent: Some(locus),
            children: BTreeMap::new(),
            marks: BTreeMap::new(),
            marked_from: None,
            first: f,
            last: l,
            rep: v,
            leaf_of: Some(v),
            live: true,
        });
        self.nm(locus).children.insert(key, y);
        self.leaf.insert(v, y);
        self.add_mark(x, c, y)
    }

    /// Splits the edge into `g` at string depth `k`; the new node is the
    /// `c`-link target of `xp`.
    fn split(&mut self, trie: &Trie, g: StId, k: usize, xp: StId, c: Label) -> Result<StId> {
        let p = self.n(g).parent.expect("below the root");
        let key_p = self.char_at(trie, g, self.n(p).sdepth)?;
        let key_g = self.char_at(trie, g, k)?;
        let (gf, gl) = (self.n(g).first, self.n(g).last);
        let anchor = self.tour.prev(gf)?;
        let id = StId(self.nodes.len() as u32);
        let f = self.tour.insert_after(anchor, id)?;
        let l = self.tour.insert_after(Some(gl), id)?;
        let rep = self.n(g).rep;
        self.push_node(StNode {
            sdepth: k,
            parent: Some(p),
            children: BTreeMap::from([(key_g, g)]),
            marks: BTreeMap::new(),
            marked_from: None,
            first: f,
            last: l,
            rep,
            leaf_of: None,
            live: true,
        });
        self.nm(g).parent = Some(id);
        self.nm(p).children.insert(key_p, id);
        self.add_mark(xp, c, id)?;
        Ok(id)
    }

    fn remove_node(&mut self, x: StId) -> Result<()> {
        let (f, l) = (self.n(x).first, self.n(x).last);
        self.tour.delete(f)?;
        self.tour.delete(l)?;
        self.nm(x).live = false;
        Ok(())
    }

    /// Removes the leaf of trie leaf `v`; call before deleting `v` from the
    /// trie.
    pub fn on_delete(&mut self, trie: &Trie, v: NodeId) -> Result<()> {
        if v == NodeId::ROOT {
            return Err(Error::IsRoot);
        }
        if !trie.is_leaf(v)? {
            return Err(Error::NotALeaf(v));
        }
        let y = self.leaf(v).ok_or(Error::UnknownNode(v))?;
        if !self.n(y).marks.is_empty() {
            return Err(Error::InconsistentState(
                "leaf of a trie leaf is marked".into(),
            ));
        }
        let c = trie.label(v)?.expect("non-root");
        let src = self
            .n(y)
            .marked_from
            .ok_or_else(|| Error::InconsistentState("unlinked leaf".into()))?;
        self.remove_mark(src, c)?;
        let p = self.n(y).parent.expect("leaf below root");
        let key = self.char_at(trie, y, self.n(p).sdepth)?;
        self.nm(p).children.remove(&key);
        self.remove_node(y)?;
        self.leaf.remove(&v);

        let mut fix_from = p;
        if p != ST_ROOT && self.n(p).children.len() == 1 {
            if !self.n(p).marks.is_empty() {
                return Err(Error::InconsistentState("unary node still marked".into()));
            }
            let g = *self.n(p).children.values().next().unwrap();
            let pp = self.n(p).parent.expect("non-root");
            let key_p = self.char_at(trie, p, self.n(pp).sdepth)?;
            self.nm(pp).children.insert(key_p, g);
            self.nm(g).parent = Some(pp);
            if let Some(s) = self.n(p).marked_from {
                let c0 = self.char_at(trie, p, 0)?;
                self.remove_mark(s, c0)?;
            }
            self.remove_node(p)?;
            fix_from = pp;
        }
        let mut cur = Some(fix_from);
        while let Some(a) = cur {
            if self.n(a).rep == v {
                let child = *self.n(a).children.values().next().expect("branching node");
                self.nm(a).rep = self.n(child).rep;
            }
            cur = self.n(a).parent;
        }
        Ok(())
    }

    /// Length of the longest suffix of the root path of `v` that also ends
    /// at another node.
    pub fn longest_repeating_suffix_len(&self, v: NodeId) -> Result<usize> {
        let y = self.leaf(v).ok_or(Error::UnknownNode(v))?;
        Ok(self.n(self.n(y).parent.expect("leaf below root")).sdepth)
    }

    /// Whether the suffix of length `p_len` of `v`'s root path occurs
    /// nowhere else.
    pub fn is_unique(&self, v: NodeId, p_len: usize) -> Result<bool> {
        Ok(self.longest_repeating_suffix_len(v)? < p_len)
    }

    /// Node strings, comparable with [`crate::oracles::naive_st`].
    pub fn node_strings(&self, trie: &Trie) -> Result<BTreeSet<Vec<Label>>> {
        self.nodes().map(|x| self.string(trie, x)).collect()
    }

    /// Marks as `(string of marked node, character)`.
    pub fn mark_set(&self, trie: &Trie) -> Result<BTreeSet<(Vec<Label>, Label)>> {
        let mut out = BTreeSet::new();
        for x in self.nodes() {
            let s = self.string(trie, x)?;
            for &c in self.n(x).marks.keys() {
                out.insert((s.clone(), c));
            }
        }
        Ok(out)
    }

    /// Structural self-check: parent/child agreement, branching, string
    /// depths, leaf bijection, tour nesting and colors, mark targets.
    pub fn validate(&self, trie: &Trie) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentState(m));
        self.tour.validate()?;
        let mut strings = HashMap::new();
        for x in self.nodes() {
            strings.insert(x, self.string(trie, x)?);
        }
        for x in self.nodes() {
            let n = self.n(x);
            if x != ST_ROOT && n.leaf_of.is_none() && n.children.len() < 2 {
                return bad(format!("internal node {} is not branching", x.0));
            }
            for (&key, &ch) in &n.children {
                let cn = self.n(ch);
                if !cn.live || cn.parent != Some(x) || cn.sdepth <= n.sdepth {
                    return bad(format!("bad child {} of {}", ch.0, x.0));
                }
                if strings[&ch][n.sdepth] != key || strings[&ch][..n.sdepth] != strings[&x][..] {
                    return bad(format!("edge key mismatch at {}", ch.0));
                }
                if !(self.tour.order_less(n.first, cn.first)?
                    && self.tour.order_less(cn.last, n.last)?)
                {
                    return bad(format!("tour nesting broken at {}", ch.0));
                }
            }
            let colors: Vec<Label> = self.tour.colors(n.first)?.iter().copied().collect();
            let marks: Vec<Label> = n.marks.keys().copied().collect();
            if colors != marks
                || self
                    .tour
                    .colors(n.last)?
                    .iter()
                    .copied()
                    .collect::<Vec<_>>()
                    != marks
            {
                return bad(format!("tour colors differ from marks at {}", x.0));
            }
            for (&c, &w) in &n.marks {
                let mut want = vec![c];
                want.extend_from_slice(&strings[&x]);
                if strings.get(&w) != Some(&want) {
                    return bad(format!("mark {c:?} at {} points to the wrong node", x.0));
                }
            }
        }
        for v in trie.nodes() {
            let Some(y) = self.leaf(v) else {
                return bad(format!("trie node {v} has no leaf"));
            };
            if self.n(y).leaf_of != Some(v)
                || strings[&y] != crate::oracles::backward_string(trie, v)
            {
                return bad(format!("leaf of trie node {v} is wrong"));
            }
        }
        if self.leaf.len() != trie.nodes().count() {
            return bad("leaf map larger than trie".into());
        }
        Ok(())
    }

    /// Checks that the subtree under `w = link(u, c)` is the subtree under
    /// `u` restricted to `c`-marked nodes, with unmarked nodes contracted.
    pub fn check_contraction(&self, u: StId, c: Label) -> Result<bool> {
        let Some(&w) = self.n(u).marks.get(&c) else {
            return Ok(false);
        };
        let mut image = BTreeSet::new();
        let mut stack = vec![(u, u)];
        while let Some((x, anc)) = stack.pop() {
            let mut next_anc = anc;
            if let Some(&t) = self.n(x).marks.get(&c) {
                image.insert(t);
                if x != u {
                    let want = self.n(anc).marks[&c];
                    if self.n(t).parent != Some(want) {
                        return Ok(false);
                    }
                }
                next_anc = x;
            }
            for ch in self.children(x) {
                stack.push((ch, next_anc));
            }
        }
        let mut sub = BTreeSet::new();
        let mut stack = vec![w];
        while let Some(x) = stack.pop() {
            sub.insert(x);
            stack.extend(self.children(x));
        }
        Ok(image == sub)
    }

    /// DOT rendering: tree edges solid and labeled, marks dashed.
    pub fn to_dot(&self, trie: &Trie) -> String {
        let show = |s: &[Label]| -> String {
            s.iter()
                .map(|l| {
                    if l.is_sentinel() {
                        "$".to_string()
                    } else {
                        crate::trie::dot_escape(*l)
                    }
                })
                .collect()
        };
        let mut s = String::from("digraph suffixtree {\n");
        for x in self.nodes() {
            let label = match self.n(x).leaf_of {
                Some(v) => format!("{} (trie {})", x.0, v.0),
                None => x.0.to_string(),
            };
            s.push_str(&format!("  s{} [label=\"{}\"];\n", x.0, label));
        }
        for x in self.nodes() {
            for ch in self.children(x) {
                let from = self.n(x).sdepth;
                let edge: Vec<Label> = (from..self.n(ch).sdepth)
                    .map(|i| self.char_at(trie, ch, i).unwrap_or(Label::SENTINEL))
                    .collect();
                s.push_str(&format!(
                    "  s{} -> s{} [label=\"{}\"];\n",
                    x.0,
                    ch.0,
                    show(&edge)
                ));
            }
        }
        for x in self.nodes() {
            for (c, w) in self.marks_of(x) {
                s.push_str(&format!(
                    "  s{} -> s{} [style=dashed, label=\"{}\"];\n",
                    x.0,
                    w.0,
                    show(&[c])
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{naive_marks, naive_st};

    fn l(c: char) -> Label {
        Label::new(c)
    }

    fn insert(t: &mut Trie, st: &mut SuffixTree, p: NodeId, c: char) -> NodeId {
        let v = t.insert_leaf(p, l(c)).unwrap();
        st.on_insert(t, v).unwrap();
        st.validate(t).unwrap();
        assert_eq!(st.node_strings(t).unwrap(), naive_st(t));
        assert_eq!(st.mark_set(t).unwrap(), naive_marks(&naive_st(t)));
        v
    }

    fn delete(t: &mut Trie, st: &mut SuffixTree, v: NodeId) {
        st.on_delete(t, v).unwrap();
        t.delete_leaf(v).unwrap();
        st.validate(t).unwrap();
        assert_eq!(st.node_strings(t).unwrap(), naive_st(t));
    }

    #[test]
    fn fresh_tree() {
        let t = Trie::new();
        let st = SuffixTree::new();
        assert_eq!(st.node_count(), 2);
        assert_eq!(st.sdepth(st.leaf(NodeId::ROOT).unwrap()), 1);
        st.validate(&t).unwrap();
        assert_eq!(st.node_strings(&t).unwrap(), naive_st(&t));
    }

    #[test]
    fn path_aba() {
        let mut t = Trie::new();
        let mut st = SuffixTree::new();
        st.set_self_check(true);
        let a = insert(&mut t, &mut st, NodeId::ROOT, 'a');
        assert_eq!(st.parent(st.leaf(a).unwrap()), Some(ST_ROOT));
        let b = insert(&mut t, &mut st, a, 'b');
        let x = insert(&mut t, &mut st, b, 'a');
        assert_eq!(st.longest_repeating_suffix_len(x).unwrap(), 1);
        assert!(st.is_unique(x, 3).unwrap());
        assert_eq!(st.insertion_checks(), 3);
    }

    #[test]
    fn repeating_suffix() {
        let mut t = Trie::new();
        let mut st = SuffixTree::new();
        let a = insert(&mut t, &mut st, NodeId::ROOT, 'a');
        assert_eq!(st.longest_repeating_suffix_len(a).unwrap(), 0);
        let aa = insert(&mut t, &mut st, a, 'a');
        assert_eq!(st.longest_repeating_suffix_len(aa).unwrap(), 1);
        assert!(!st.is_unique(aa, 1).unwrap());
    }

    #[test]
    fn lca_basics() {
        let mut t = Trie::new();
        let mut st = SuffixTree::new();
        let a = insert(&mut t, &mut st, NodeId::ROOT, 'a');
        let x = st.leaf(a).unwrap();
        assert_eq!(st.lca(x, x), x);
        assert_eq!(st.lca(x, ST_ROOT), ST_ROOT);
    }

    #[test]
    fn round_trip_and_splice() {
        let mut t = Trie::new();
        let mut st = SuffixTree::new();
        st.set_self_check(true);
        let a = insert(&mut t, &mut st, NodeId::ROOT, 'a');
        let b = insert(&mut t, &mut st, a, 'b');
        let before = st.node_strings(&t).unwrap();
        let marks = st.mark_set(&t).unwrap();
        let x = insert(&mut t, &mut st, b, 'a');
        let y = insert(&mut t, &mut st, NodeId::ROOT, 'b');
        delete(&mut t, &mut st, y);
        delete(&mut t, &mut st, x);
        assert_eq!(st.node_strings(&t).unwrap(), before);
        assert_eq!(st.mark_set(&t).unwrap(), marks);
        assert!(matches!(st.on_delete(&t, a), Err(Error::NotALeaf(_))));
    }

    #[test]
    fn contraction_on_branching_trie() {
        let mut t = Trie::new();
        let mut st = SuffixTree::new();
        st.set_self_check(true);
        let a = insert(&mut t, &mut st, NodeId::ROOT, 'a');
        let ab = insert(&mut t, &mut st, a, 'b');
        insert(&mut t, &mut st, ab, 'a');
        let b = insert(&mut t, &mut st, NodeId::ROOT, 'b');
        insert(&mut t, &mut st, b, 'a');
        insert(&mut t, &mut st, a, 'a');
        for x in st.nodes().collect::<Vec<_>>() {
            for (c, _) in st.marks_of(x).collect::<Vec<_>>() {
                assert!(st.check_contraction(x, c).unwrap());
            }
        }
    }
}
