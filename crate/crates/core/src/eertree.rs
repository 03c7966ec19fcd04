//! Palindromic tree (EERTREE) of the trie read root-to-leaf.
//!
//! Nodes are the distinct palindromes plus the two roots `⊥` (length -1)
//! and `ε`. Every trie node points at the node of its longest palindromic
//! suffix; a new trie leaf adds at most one palindrome, namely its own
//! longest palindromic suffix. The suffix `a·X·a` is found from the parent's
//! pointer `X` by one of three strategies:
//!
//! * `Basic` follows suffix links,
//! * `Quick` follows quick links, skipping runs of suffixes with equal
//!   preceding characters,
//! * `Direct` jumps straight to the answer through direct links, stored
//!   either as persistent maps or as nearest-colored-ancestor queries on the
//!   suffix-link tree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::colored_ancestor::{ColoredAncestor, NcaId};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::persistent_map::PersistentMap;
use crate::trie::{NodeId, Trie};

/// Handle of an EERTREE node.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct EtId(pub u32);

/// The imaginary palindrome of length -1.
pub const BOT: EtId = EtId(0);
/// The empty palindrome.
pub const EPS: EtId = EtId(1);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Backend {
    Persistent,
    Nca,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Strategy {
    Basic,
    Quick,
    Direct(Backend),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Basic => f.write_str("basic"),
            Strategy::Quick => f.write_str("quick"),
            Strategy::Direct(Backend::Persistent) => f.write_str("direct-persistent"),
            Strategy::Direct(Backend::Nca) => f.write_str("direct-nca"),
        }
    }
}

#[derive(Debug, Clone)]
struct EtNode {
    len: isize,
    ext: BTreeMap<Label, EtId>,
    ext_parent: Option<(EtId, Label)>,
    slink: EtId,
    /// character preceding `slink` inside this palindrome
    pre_s: Option<Label>,
    qlink: EtId,
    /// character preceding `qlink` inside this palindrome
    pre_q: Option<Label>,
    /// trie nodes whose longest palindromic suffix is this node
    holders: BTreeSet<NodeId>,
    /// nearest suffix-link ancestor (inclusive) per preceding character
    dmap: PersistentMap<Label, EtId>,
    nca: Option<NcaId>,
    live: bool,
}

impl EtNode {
    fn root(len: isize, slink: EtId) -> Self {
        EtNode {
            len,
            ext: BTreeMap::new(),
            ext_parent: None,
            slink,
            pre_s: None,
            qlink: BOT,
            pre_q: None,
            holders: BTreeSet::new(),
            dmap: PersistentMap::empty(),
            nca: None,
            live: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eertree {
    nodes: Vec<EtNode>,
    /// per trie node: its longest palindromic suffix and the character
    /// before it on the root path
    attach: HashMap<NodeId, (EtId, Option<Label>)>,
    strategy: Strategy,
    nca: Option<ColoredAncestor>,
    nca_owner: HashMap<NcaId, EtId>,
    steps: u64,
    last_steps: u64,
    distinct: usize,
}

impl Eertree {
    pub fn new(strategy: Strategy) -> Self {
        let mut nodes = vec![EtNode::root(-1, BOT), EtNode::root(0, BOT)];
        let mut nca = None;
        let mut nca_owner = HashMap::new();
        if strategy == Strategy::Direct(Backend::Nca) {
            // the two roots carry the sentinel color, which no query uses
            let mut t = ColoredAncestor::new(Label::SENTINEL);
            let e = t
                .insert_leaf(t.root(), Label::SENTINEL)
                .expect("fresh tree");
            nodes[0].nca = Some(t.root());
            nodes[1].nca = Some(e);
            nca_owner.insert(t.root(), BOT);
            nca_owner.insert(e, EPS);
            nca = Some(t);
        }
        let mut attach = HashMap::new();
        attach.insert(NodeId::ROOT, (EPS, None));
        Eertree {
            nodes,
            attach,
            strategy,
            nca,
            nca_owner,
            steps: 0,
            last_steps: 0,
            distinct: 0,
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn node(&self, x: EtId) -> Result<&EtNode> {
        match self.nodes.get(x.0 as usize) {
            Some(n) if n.live => Ok(n),
            _ => Err(Error::InconsistentState(format!(
                "unknown palindrome node {}",
                x.0
            ))),
        }
    }

    fn n(&self, x: EtId) -> &EtNode {
        &self.nodes[x.0 as usize]
    }

    pub fn contains(&self, x: EtId) -> bool {
        self.node(x).is_ok()
    }

    /// Length of `x`; -1 for `⊥`.
    pub fn len(&self, x: EtId) -> isize {
        self.n(x).len
    }

    /// Number of distinct nonempty palindromes.
    pub fn count(&self) -> usize {
        self.distinct
    }

    pub fn is_empty(&self) -> bool {
        self.distinct == 0
    }

    /// Node count including `⊥` and `ε`.
    pub fn node_count(&self) -> usize {
        self.distinct + 2
    }

    pub fn slink(&self, x: EtId) -> EtId {
        self.n(x).slink
    }

    pub fn qlink(&self, x: EtId) -> EtId {
        self.n(x).qlink
    }

    pub fn pre_s(&self, x: EtId) -> Option<Label> {
        self.n(x).pre_s
    }

    pub fn pre_q(&self, x: EtId) -> Option<Label> {
        self.n(x).pre_q
    }

    pub fn ext(&self, x: EtId, a: Label) -> Option<EtId> {
        self.n(x).ext.get(&a).copied()
    }

    pub fn incoming(&self, x: EtId) -> usize {
        self.n(x).holders.len()
    }

    /// Longest palindromic suffix of the root path of `v`.
    pub fn lps(&self, v: NodeId) -> Option<EtId> {
        self.attach.get(&v).map(|&(x, _)| x)
    }

    /// Total link traversals since creation.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Link traversals of the latest insertion.
    pub fn last_steps(&self) -> u64 {
        self.last_steps
    }

    /// Nearest node `y` on the suffix-link path from `x` (inclusive) whose
    /// suffix link is preceded by `c` inside `y`, through the configured
    /// backend, or by scanning when there is none.
    pub fn dlink_ancestor(&self, x: EtId, c: Label) -> Result<Option<EtId>> {
        self.node(x)?;
        match self.strategy {
            Strategy::Direct(Backend::Persistent) => Ok(self.n(x).dmap.get(&c).copied()),
            Strategy::Direct(Backend::Nca) => {
                let t = self.nca.as_ref().expect("nca backend");
                let id = self.n(x).nca.expect("registered node");
                Ok(t.nca_inclusive(id, c)?.map(|y| self.nca_owner[&y]))
            }
            _ => Ok(self.dlink_ancestor_scan(x, c)),
        }
    }

    /// [`Self::dlink_ancestor`] by walking suffix links.
    pub fn dlink_ancestor_scan(&self, x: EtId, c: Label) -> Option<EtId> {
        let mut y = x;
        while y != BOT {
            if self.n(y).pre_s == Some(c) {
                return Some(y);
            }
            y = self.n(y).slink;
        }
        None
    }

    /// Longest proper palindromic suffix of `x` preceded by `c` inside `x`,
    /// `⊥` when there is none.
    pub fn dlink(&self, x: EtId, c: Label) -> Result<EtId> {
        Ok(self.dlink_ancestor(x, c)?.map_or(BOT, |y| self.n(y).slink))
    }

    /// Walks candidates starting at `x`, whose preceding character on the
    /// current path is `ch`, until one is preceded by `a`.
    fn walk(&self, mut x: EtId, mut ch: Option<Label>, a: Label, steps: &mut u64) -> EtId {
        match self.strategy {
            Strategy::Quick => loop {
                if x == BOT || ch == Some(a) {
                    return x;
                }
                *steps += 1;
                let n = self.n(x);
                if n.slink == BOT {
                    return BOT;
                }
                if n.pre_s == Some(a) {
                    return n.slink;
                }
                ch = n.pre_q;
                x = n.qlink;
            },
            _ => loop {
                if x == BOT || ch == Some(a) {
                    return x;
                }
                *steps += 1;
                let n = self.n(x);
                ch = n.pre_s;
                x = n.slink;
            },
        }
    }

    /// Longest proper palindromic suffix `Y` of `x` such that `a·Y·a` is a
    /// suffix of the extended path.
    fn proper_search(&self, x: EtId, a: Label, steps: &mut u64) -> Result<EtId> {
        match self.strategy {
            Strategy::Direct(_) => {
                *steps += 1;
                self.dlink(x, a)
            }
            _ => {
                let n = self.n(x);
                Ok(if x == BOT {
                    BOT
                } else {
                    self.walk(n.slink, n.pre_s, a, steps)
                })
            }
        }
    }

    /// The node `X` such that `a·X·a` (or `a` when `X = ⊥`) is the longest
    /// palindromic suffix after appending `a` below `u`.
    pub fn find_lps(&self, u: NodeId, a: Label) -> Result<EtId> {
        let mut steps = 0;
        self.find_lps_counted(u, a, &mut steps)
    }

    fn find_lps_counted(&self, u: NodeId, a: Label, steps: &mut u64) -> Result<EtId> {
        let &(x, ch) = self.attach.get(&u).ok_or(Error::UnknownNode(u))?;
        match self.strategy {
            Strategy::Direct(_) => {
                *steps += 1;
                if ch == Some(a) {
                    Ok(x)
                } else {
                    self.proper_search(x, a, steps)
                }
            }
            _ => Ok(self.walk(x, ch, a, steps)),
        }
    }

    /// Registers leaf `v`, just inserted under `u` with label `a`, and
    /// returns the length of the new palindrome if one appeared.
    pub fn on_insert(
        &mut self,
        trie: &Trie,
        u: NodeId,
        v: NodeId,
        a: Label,
    ) -> Result<Option<usize>> {
        if self.attach.contains_key(&v) {
            return Err(Error::StaleParentState(v));
        }
        let mut steps = 0;
        let x = self.find_lps_counted(u, a, &mut steps)?;
        let mut created = None;
        let p = match self.n(x).ext.get(&a) {
            Some(&p) => p,
            None => {
                let p = self.create(trie, x, v, a, &mut steps)?;
                created = Some(self.n(p).len as usize);
                p
            }
        };
        let len = self.n(p).len as usize;
        let pre = trie.char_before_suffix(v, len)?;
        self.attach.insert(v, (p, pre));
        self.nodes[p.0 as usize].holders.insert(v);
        self.steps += steps;
        self.last_steps = steps;
        Ok(created)
    }

    fn create(
        &mut self,
        trie: &Trie,
        x: EtId,
        v: NodeId,
        a: Label,
        steps: &mut u64,
    ) -> Result<EtId> {
        let len = self.n(x).len + 2;
        let slink = if len == 1 {
            EPS
        } else {
            let z = self.proper_search(x, a, steps)?;
            self.n(z).ext.get(&a).copied().ok_or_else(|| {
                Error::InconsistentState(format!("missing suffix palindrome below node {}", z.0))
            })?
        };
        let pre_s = trie.char_before_suffix(v, self.n(slink).len as usize)?;
        let s = self.n(slink);
        let (qlink, pre_q) = if slink == EPS {
            (BOT, None)
        } else if s.pre_s != pre_s {
            (s.slink, s.pre_s)
        } else {
            (s.qlink, s.pre_q)
        };
        let id = EtId(self.nodes.len() as u32);
        let dmap = match self.strategy {
            Strategy::Direct(Backend::Persistent) => {
                s.dmap.with_set(pre_s.expect("proper suffix"), id)
            }
            _ => PersistentMap::empty(),
        };
        let nca = match &mut self.nca {
            Some(t) => {
                let parent = self.nodes[slink.0 as usize].nca.expect("registered node");
                let nid = t.insert_leaf(parent, pre_s.expect("proper suffix"))?;
                self.nca_owner.insert(nid, id);
                Some(nid)
            }
            None => None,
        };
        self.nodes.push(EtNode {
            len,
            ext: BTreeMap::new(),
            ext_parent: Some((x, a)),
            slink,
            pre_s,
            qlink,
            pre_q,
            holders: BTreeSet::new(),
            dmap,
            nca,
            live: true,
        });
        self.nodes[x.0 as usize].ext.insert(a, id);
        self.distinct += 1;
        Ok(id)
    }

    /// Unregisters leaf `v` and returns the length of the palindrome that
    /// disappeared with it, if any.
    pub fn on_delete(&mut self, v: NodeId) -> Result<Option<usize>> {
        if v == NodeId::ROOT {
            return Err(Error::IsRoot);
        }
        let (p, _) = self.attach.remove(&v).ok_or(Error::UnknownNode(v))?;
        let node = &mut self.nodes[p.0 as usize];
        node.holders.remove(&v);
        if !node.holders.is_empty() || !node.ext.is_empty() || p == EPS || p == BOT {
            return Ok(None);
        }
        node.live = false;
        let len = node.len as usize;
        let (parent, a) = node.ext_parent.expect("non-root palindrome");
        let nca = node.nca;
        node.dmap = PersistentMap::empty();
        self.nodes[parent.0 as usize].ext.remove(&a);
        if let (Some(t), Some(id)) = (&mut self.nca, nca) {
            t.delete_leaf(id)?;
            self.nca_owner.remove(&id);
        }
        self.distinct -= 1;
        Ok(Some(len))
    }

    /// Live palindrome nodes other than the roots, by handle.
    pub fn palindromes(&self) -> impl Iterator<Item = EtId> + '_ {
        (2..self.nodes.len())
            .filter(|&i| self.nodes[i].live)
            .map(|i| EtId(i as u32))
    }

    /// Every distinct palindrome as `(length, a trie node it ends at)`.
    pub fn distinct(&self) -> Vec<(usize, NodeId)> {
        let mut out: Vec<(usize, NodeId)> = self
            .palindromes()
            .map(|x| {
                let n = self.n(x);
                (
                    n.len as usize,
                    *n.holders.first().expect("live palindrome has a holder"),
                )
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The string of `x`, read off the path of one of its holders.
    pub fn reconstruct(&self, trie: &Trie, x: EtId) -> Result<String> {
        let n = self.node(x)?;
        if n.len <= 0 {
            return Ok(String::new());
        }
        let w = *n
            .holders
            .first()
            .ok_or_else(|| Error::InconsistentState("palindrome without holder".into()))?;
        let path = trie.path_labels(w)?;
        Ok(path[path.len() - n.len as usize..]
            .iter()
            .map(|l| l.as_char())
            .collect())
    }

    /// Checks links, characters and holder counts against strings read from
    /// the trie. Quadratic; meant for small instances.
    pub fn validate(&self, trie: &Trie) -> Result<()> {
        let bad = |m: String| Err(Error::InconsistentState(m));
        let mut by_string: HashMap<Vec<char>, EtId> = HashMap::new();
        for x in self.palindromes() {
            by_string.insert(self.reconstruct(trie, x)?.chars().collect(), x);
        }
        if by_string.len() != self.distinct {
            return bad("duplicate palindromes".into());
        }
        let lookup = |s: &[char]| -> EtId {
            if s.is_empty() {
                EPS
            } else {
                by_string.get(s).copied().unwrap_or(BOT)
            }
        };
        for x in self.palindromes() {
            let s: Vec<char> = self.reconstruct(trie, x)?.chars().collect();
            if !crate::oracles::is_palindrome(&s) {
                return bad(format!("node {} is not a palindrome", x.0));
            }
            let proper: Vec<usize> = (0..s.len())
                .filter(|&l| crate::oracles::is_palindrome(&s[s.len() - l..]))
                .collect();
            let sl = *proper.last().unwrap();
            if lookup(&s[s.len() - sl..]) != self.n(x).slink {
                return bad(format!("wrong suffix link at {}", x.0));
            }
            let b = s[s.len() - sl - 1];
            if self.n(x).pre_s != Some(Label::new(b)) {
                return bad(format!("wrong suffix-link character at {}", x.0));
            }
            let q = proper
                .iter()
                .rev()
                .skip(1)
                .find(|&&l| s[s.len() - l - 1] != b);
            let (want_q, want_pre) = match q {
                Some(&l) if sl > 0 => (
                    lookup(&s[s.len() - l..]),
                    Some(Label::new(s[s.len() - l - 1])),
                ),
                _ => (BOT, None),
            };
            if (want_q, want_pre) != (self.n(x).qlink, self.n(x).pre_q) {
                return bad(format!("wrong quick link at {}", x.0));
            }
        }
        let holders: usize = self
            .nodes
            .iter()
            .filter(|n| n.live)
            .map(|n| n.holders.len())
            .sum();
        if holders + 1 != trie.nodes().count() {
            return bad("holder count differs from trie size".into());
        }
        for v in trie.nodes().filter(|&v| v != trie.root()) {
            let path = trie.path_labels(v)?;
            let want = crate::oracles::longest_palindromic_suffix(&path);
            let (x, pre) = self.attach[&v];
            if self.n(x).len as usize != want || pre != trie.char_before_suffix(v, want)? {
                return bad(format!("wrong longest palindromic suffix at trie node {v}"));
            }
        }
        Ok(())
    }

    /// DOT rendering: extension edges solid, suffix and quick links dashed.
    pub fn to_dot(&self, trie: &Trie) -> String {
        let name = |x: EtId| -> String {
            match x {
                BOT => "⊥".into(),
                EPS => "ε".into(),
                _ => self
                    .reconstruct(trie, x)
                    .unwrap_or_default()
                    .chars()
                    .flat_map(char::escape_default)
                    .collect(),
            }
        };
        let ids: Vec<EtId> = [BOT, EPS].into_iter().chain(self.palindromes()).collect();
        let mut s = String::from("digraph eertree {\n");
        for &x in &ids {
            s.push_str(&format!("  p{} [label=\"{}\"];\n", x.0, name(x)));
        }
        for &x in &ids {
            for (a, y) in &self.n(x).ext {
                s.push_str(&format!(
                    "  p{} -> p{} [label=\"{}\"];\n",
                    x.0,
                    y.0,
                    crate::trie::dot_escape(*a)
                ));
            }
        }
        for &x in &ids {
            if x != BOT {
                s.push_str(&format!(
                    "  p{} -> p{} [style=dashed];\n",
                    x.0,
                    self.n(x).slink.0
                ));
            }
            if self.n(x).len > 1 {
                s.push_str(&format!(
                    "  p{} -> p{} [style=dashed, color=gray, label=\"q\"];\n",
                    x.0,
                    self.n(x).qlink.0
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}
