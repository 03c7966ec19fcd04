//! One session type over all distinct-palindrome engines.
//!
//! A [`Session`] owns the trie, the maximal-palindrome groups and one
//! engine, applies every operation to all of them, and reports an [`Event`]
//! whose fields must not depend on the engine chosen.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eertree::{Backend, Eertree, EtId, Strategy, BOT, EPS};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::oracles::Census;
use crate::palgroups::{PalGroups, UndoRecord};
use crate::suffix_tree::SuffixTree;
use crate::trie::{NodeId, Trie};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EngineKind {
    EertreeBasic,
    EertreeQuick,
    EertreeDirectPersistent,
    EertreeDirectNca,
    SuffixTree,
    Oracle,
}

impl EngineKind {
    pub const ALL: [EngineKind; 6] = [
        EngineKind::EertreeBasic,
        EngineKind::EertreeQuick,
        EngineKind::EertreeDirectPersistent,
        EngineKind::EertreeDirectNca,
        EngineKind::SuffixTree,
        EngineKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::EertreeBasic => "eertree-basic",
            EngineKind::EertreeQuick => "eertree-quick",
            EngineKind::EertreeDirectPersistent => "eertree-direct-persistent",
            EngineKind::EertreeDirectNca => "eertree-direct-nca",
            EngineKind::SuffixTree => "suffixtree",
            EngineKind::Oracle => "oracle",
        }
    }

    pub fn strategy(self) -> Option<Strategy> {
        match self {
            EngineKind::EertreeBasic => Some(Strategy::Basic),
            EngineKind::EertreeQuick => Some(Strategy::Quick),
            EngineKind::EertreeDirectPersistent => Some(Strategy::Direct(Backend::Persistent)),
            EngineKind::EertreeDirectNca => Some(Strategy::Direct(Backend::Nca)),
            _ => None,
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EngineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownEngine(s.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Insert,
    Delete,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NewPalindrome {
    pub len: usize,
    pub end: NodeId,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RemovedPalindrome {
    pub len: usize,
}

/// What one operation did, plus the counters afterwards.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub op: OpKind,
    pub id: NodeId,
    pub parent: NodeId,
    pub label: Label,
    pub new_palindrome: Option<NewPalindrome>,
    pub removed_palindrome: Option<RemovedPalindrome>,
    /// edges
    pub n: usize,
    /// leaves
    pub l: usize,
    /// height
    pub h: usize,
    /// distinct nonempty palindromes
    pub d: usize,
    /// maximal palindromes
    pub maxpal: usize,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Inner {
    Eertree(Eertree),
    SuffixTree {
        st: SuffixTree,
        lps: HashMap<NodeId, usize>,
        distinct: usize,
    },
    Oracle(Census),
}

/// `(group tuples, empty palindrome consumed)` of one node.
pub type GroupEntry = (Vec<(usize, usize, usize)>, bool);
/// Node strings and `(string, mark)` pairs.
pub type SuffixTreeEntry = (BTreeSet<String>, BTreeSet<(String, char)>);

/// Id-independent snapshot of every structure in a session, keyed by path
/// strings; two sessions holding the same trie compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Canonical {
    pub paths: BTreeSet<String>,
    pub groups: BTreeMap<String, GroupEntry>,
    pub eertree: BTreeMap<String, EertreeEntry>,
    pub suffix_tree: Option<SuffixTreeEntry>,
    pub distinct: usize,
    pub maximal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EertreeEntry {
    pub slink: String,
    pub qlink: String,
    pub pre_s: Option<char>,
    pub pre_q: Option<char>,
    pub incoming: usize,
}

#[derive(Debug, Clone)]
pub struct Session {
    kind: EngineKind,
    trie: Trie,
    groups: Option<PalGroups>,
    undo: HashMap<NodeId, UndoRecord>,
    inner: Inner,
    seq: u64,
    fault: bool,
}

impl Session {
    pub fn open(kind: EngineKind) -> Self {
        let inner = match kind {
            EngineKind::SuffixTree => Inner::SuffixTree {
                st: SuffixTree::new(),
                lps: HashMap::new(),
                distinct: 0,
            },
            EngineKind::Oracle => Inner::Oracle(Census::new()),
            k => Inner::Eertree(Eertree::new(k.strategy().expect("eertree kind"))),
        };
        // the oracle counts maximal palindromes by definition instead
        let groups = (kind != EngineKind::Oracle).then(PalGroups::new);
        Session {
            kind,
            trie: Trie::new(),
            groups,
            undo: HashMap::new(),
            inner,
            seq: 0,
            fault: false,
        }
    }

    /// Opens a session by engine name.
    pub fn open_named(name: &str) -> Result<Self> {
        Ok(Self::open(name.parse()?))
    }

    /// Makes the engine drop every new palindrome of length 3 or more.
    /// Used to test the differential harness itself.
    pub fn inject_fault(&mut self) {
        self.fault = true;
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn trie(&self) -> &Trie {
        &self.trie
    }

    pub fn groups(&self) -> Option<&PalGroups> {
        self.groups.as_ref()
    }

    pub fn eertree(&self) -> Option<&Eertree> {
        match &self.inner {
            Inner::Eertree(e) => Some(e),
            _ => None,
        }
    }

    pub fn suffix_tree(&self) -> Option<&SuffixTree> {
        match &self.inner {
            Inner::SuffixTree { st, .. } => Some(st),
            _ => None,
        }
    }

    /// Turns on naive verification of suffix-tree insertion points.
    pub fn set_self_check(&mut self, on: bool) {
        if let Inner::SuffixTree { st, .. } = &mut self.inner {
            st.set_self_check(on);
        }
    }

    /// Link traversals spent by an EERTREE engine so far.
    pub fn chain_steps(&self) -> u64 {
        self.eertree().map_or(0, Eertree::steps)
    }

    /// Link traversals of the latest insertion.
    pub fn last_chain_steps(&self) -> u64 {
        self.eertree().map_or(0, Eertree::last_steps)
    }

    pub fn distinct_count(&self) -> usize {
        match &self.inner {
            Inner::Eertree(e) => e.count(),
            Inner::SuffixTree { distinct, .. } => *distinct,
            Inner::Oracle(c) => c.distinct(),
        }
    }

    pub fn maximal_count(&self) -> usize {
        match (&self.groups, &self.inner) {
            (Some(g), _) => g.maximal_count(),
            (None, Inner::Oracle(c)) => c.maximal(),
            (None, _) => unreachable!("groups exist for every non-oracle engine"),
        }
    }

    /// The palindrome of length `len` ending at `end`.
    pub fn reconstruct(&self, len: usize, end: NodeId) -> Result<String> {
        let path = self.trie.path_labels(end)?;
        if len > path.len() {
            return Err(Error::DistanceOutOfRange {
                k: len,
                depth: path.len(),
            });
        }
        Ok(path[path.len() - len..]
            .iter()
            .map(|l| l.as_char())
            .collect())
    }

    fn event(&mut self, op: OpKind, id: NodeId, parent: NodeId, label: Label) -> Event {
        self.seq += 1;
        let s = self.trie.stats();
        Event {
            seq: self.seq,
            op,
            id,
            parent,
            label,
            new_palindrome: None,
            removed_palindrome: None,
            n: s.edges,
            l: s.leaves,
            h: s.height,
            d: self.distinct_count(),
            maxpal: self.maximal_count(),
        }
    }

    pub fn insert(&mut self, parent: NodeId, label: Label) -> Result<Event> {
        let v = self.trie.insert_leaf(parent, label)?;
        let lps = match &mut self.groups {
            Some(g) => {
                let (lps, undo) = g.on_insert(&self.trie, parent, v, label)?;
                self.undo.insert(v, undo);
                Some(lps)
            }
            None => None,
        };
        let mut new = match &mut self.inner {
            Inner::Eertree(e) => e.on_insert(&self.trie, parent, v, label)?,
            Inner::SuffixTree {
                st,
                lps: table,
                distinct,
            } => {
                st.on_insert(&self.trie, v)?;
                let p = lps.expect("groups present");
                table.insert(v, p);
                if st.is_unique(v, p)? {
                    *distinct += 1;
                    Some(p)
                } else {
                    None
                }
            }
            Inner::Oracle(c) => c.on_insert(&self.trie, v).into_iter().max(),
        };
        if self.fault && new.is_some_and(|len| len >= 3) {
            new = None;
        }
        let mut ev = self.event(OpKind::Insert, v, parent, label);
        ev.new_palindrome = new.map(|len| NewPalindrome { len, end: v });
        Ok(ev)
    }

    pub fn delete(&mut self, v: NodeId) -> Result<Event> {
        if v == NodeId::ROOT {
            return Err(Error::IsRoot);
        }
        if !self.trie.is_leaf(v)? {
            return Err(Error::NotALeaf(v));
        }
        let parent = self.trie.parent(v)?.expect("non-root");
        let label = self.trie.label(v)?.expect("non-root");
        let removed = match &mut self.inner {
            Inner::Eertree(e) => e.on_delete(v)?,
            Inner::SuffixTree { st, lps, distinct } => {
                let p = lps.remove(&v).ok_or(Error::UnknownNode(v))?;
                let unique = st.is_unique(v, p)?;
                st.on_delete(&self.trie, v)?;
                if unique {
                    *distinct -= 1;
                    Some(p)
                } else {
                    None
                }
            }
            Inner::Oracle(c) => c.on_delete(&self.trie, v).into_iter().max(),
        };
        if let Some(g) = &mut self.groups {
            let undo = self.undo.remove(&v).ok_or(Error::UnknownNode(v))?;
            g.on_delete(v, undo)?;
        }
        self.trie.delete_leaf(v)?;
        let mut ev = self.event(OpKind::Delete, v, parent, label);
        ev.removed_palindrome = removed.map(|len| RemovedPalindrome { len });
        Ok(ev)
    }

    /// Snapshot independent of node handles and operation history.
    pub fn canonical(&self) -> Result<Canonical> {
        let t = &self.trie;
        let mut path_of = HashMap::new();
        for v in t.nodes() {
            path_of.insert(v, t.path_string(v)?);
        }
        let paths = path_of.values().cloned().collect();
        let mut groups = BTreeMap::new();
        if let Some(g) = &self.groups {
            for (v, list) in g.nodes() {
                groups.insert(path_of[&v].clone(), (list.tuples(), list.eps_consumed));
            }
        }
        let mut eertree = BTreeMap::new();
        let mut suffix_tree = None;
        match &self.inner {
            Inner::Eertree(e) => {
                let name = |x: EtId| -> Result<String> {
                    Ok(match x {
                        BOT => "⊥".to_string(),
                        EPS => String::new(),
                        _ => e.reconstruct(t, x)?,
                    })
                };
                for x in e.palindromes() {
                    eertree.insert(
                        name(x)?,
                        EertreeEntry {
                            slink: name(e.slink(x))?,
                            qlink: name(e.qlink(x))?,
                            pre_s: e.pre_s(x).map(Label::as_char),
                            pre_q: e.pre_q(x).map(Label::as_char),
                            incoming: e.incoming(x),
                        },
                    );
                }
            }
            Inner::SuffixTree { st, .. } => {
                let show = |s: &[Label]| -> String { s.iter().map(|l| l.as_char()).collect() };
                let nodes = st.node_strings(t)?.iter().map(|s| show(s)).collect();
                let marks = st
                    .mark_set(t)?
                    .iter()
                    .map(|(s, c)| (show(s), c.as_char()))
                    .collect();
                suffix_tree = Some((nodes, marks));
            }
            Inner::Oracle(_) => {}
        }
        Ok(Canonical {
            paths,
            groups,
            eertree,
            suffix_tree,
            distinct: self.distinct_count(),
            maximal: self.maximal_count(),
        })
    }
}
