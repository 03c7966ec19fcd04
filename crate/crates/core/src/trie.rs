//! The dynamic rooted trie, read root-to-leaf.
//!
//! Nodes live in an arena and are addressed by [`NodeId`]. Handles are never
//! reused within a trie, so other structures may keep cross-references to
//! deleted nodes without aliasing a newer node. Each node keeps a binary
//! lifting table so that the ancestor at any distance, and hence any
//! character of its root path, is reachable in `O(log h)` steps.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct TrieNode {
    parent: Option<NodeId>,
    label: Option<Label>,
    depth: usize,
    children: BTreeMap<Label, NodeId>,
    /// `jump[k]` is the ancestor at distance `2^k`.
    jump: Vec<NodeId>,
    live: bool,
}

/// Edge, leaf and height counters of a trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub edges: usize,
    pub leaves: usize,
    pub height: usize,
}

#[derive(Debug, Clone)]
pub struct Trie {
    nodes: Vec<TrieNode>,
    edges: usize,
    leaves: usize,
    /// live node count per depth, used to keep the height under deletion
    depth_count: Vec<usize>,
}

impl Default for Trie {
    fn default() -> Self {
        Self::new()
    }
}

impl Trie {
    pub fn new() -> Self {
        let root = TrieNode {
            parent: None,
            label: None,
            depth: 0,
            children: BTreeMap::new(),
            jump: Vec::new(),
            live: true,
        };
        Trie {
            nodes: vec![root],
            edges: 0,
            leaves: 0,
            depth_count: vec![1],
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId::ROOT
    }

    fn node(&self, v: NodeId) -> Result<&TrieNode> {
        match self.nodes.get(v.index()) {
            Some(n) if n.live => Ok(n),
            _ => Err(Error::UnknownNode(v)),
        }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.node(v).is_ok()
    }

    /// Upper bound (exclusive) on handles issued so far.
    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    /// The handle the next insertion will return.
    pub fn next_id(&self) -> NodeId {
        NodeId(self.nodes.len() as u32)
    }

    pub fn insert_leaf(&mut self, parent: NodeId, label: Label) -> Result<NodeId> {
        if label.is_sentinel() {
            return Err(Error::ReservedLabel);
        }
        let p = self.node(parent)?;
        if p.children.contains_key(&label) {
            return Err(Error::DuplicateEdgeLabel { parent, label });
        }
        let depth = p.depth + 1;
        let parent_was_leaf = p.children.is_empty();

        let id = self.next_id();
        let mut jump = vec![parent];
        let mut k = 0;
        while let Some(&up) = self.nodes[jump[k].index()].jump.get(k) {
            jump.push(up);
            k += 1;
        }
        self.nodes.push(TrieNode {
            parent: Some(parent),
            label: Some(label),
            depth,
            children: BTreeMap::new(),
            jump,
            live: true,
        });
        self.nodes[parent.index()].children.insert(label, id);

        self.edges += 1;
        self.leaves += 1;
        if parent_was_leaf && parent != NodeId::ROOT {
            self.leaves -= 1;
        }
        if self.depth_count.len() <= depth {
            self.depth_count.push(0);
        }
        self.depth_count[depth] += 1;
        Ok(id)
    }

    pub fn delete_leaf(&mut self, v: NodeId) -> Result<()> {
        let n = self.node(v)?;
        let parent = match n.parent {
            None => return Err(Error::IsRoot),
            Some(p) => p,
        };
        if !n.children.is_empty() {
            return Err(Error::NotALeaf(v));
        }
        let label = n.label.expect("non-root node has a label");
        let depth = n.depth;

        self.nodes[v.index()].live = false;
        let p = &mut self.nodes[parent.index()];
        p.children.remove(&label);
        let parent_now_leaf = p.children.is_empty();

        self.edges -= 1;
        self.leaves -= 1;
        if parent_now_leaf && parent != NodeId::ROOT {
            self.leaves += 1;
        }
        self.depth_count[depth] -= 1;
        while self.depth_count.len() > 1 && *self.depth_count.last().unwrap() == 0 {
            self.depth_count.pop();
        }
        Ok(())
    }

    /// Ancestor exactly `k` edges above `v`.
    pub fn ancestor_at(&self, v: NodeId, k: usize) -> Result<NodeId> {
        let depth = self.node(v)?.depth;
        if k > depth {
            return Err(Error::DistanceOutOfRange { k, depth });
        }
        let mut cur = v;
        let mut rest = k;
        let mut bit = 0;
        while rest > 0 {
            if rest & 1 == 1 {
                cur = self.nodes[cur.index()].jump[bit];
            }
            rest >>= 1;
            bit += 1;
        }
        Ok(cur)
    }

    /// The character immediately before the suffix of length `len` of the
    /// root path of `v`, or `None` when that suffix is the whole path.
    pub fn char_before_suffix(&self, v: NodeId, len: usize) -> Result<Option<Label>> {
        let anc = self.ancestor_at(v, len)?;
        Ok(self.nodes[anc.index()].label)
    }

    pub fn parent(&self, v: NodeId) -> Result<Option<NodeId>> {
        Ok(self.node(v)?.parent)
    }

    pub fn label(&self, v: NodeId) -> Result<Option<Label>> {
        Ok(self.node(v)?.label)
    }

    pub fn depth(&self, v: NodeId) -> Result<usize> {
        Ok(self.node(v)?.depth)
    }

    pub fn child(&self, v: NodeId, label: Label) -> Result<Option<NodeId>> {
        Ok(self.node(v)?.children.get(&label).copied())
    }

    pub fn children(&self, v: NodeId) -> Result<impl Iterator<Item = (Label, NodeId)> + '_> {
        Ok(self.node(v)?.children.iter().map(|(&l, &c)| (l, c)))
    }

    pub fn is_leaf(&self, v: NodeId) -> Result<bool> {
        Ok(self.node(v)?.children.is_empty())
    }

    /// Labels on the path from the root down to `v`.
    pub fn path_labels(&self, v: NodeId) -> Result<Vec<Label>> {
        let mut out = Vec::with_capacity(self.node(v)?.depth);
        let mut cur = v;
        while let Some(p) = self.nodes[cur.index()].parent {
            out.push(self.nodes[cur.index()].label.unwrap());
            cur = p;
        }
        out.reverse();
        Ok(out)
    }

    pub fn path_string(&self, v: NodeId) -> Result<String> {
        Ok(self
            .path_labels(v)?
            .into_iter()
            .map(Label::as_char)
            .collect())
    }

    pub fn stats(&self) -> Stats {
        Stats {
            edges: self.edges,
            leaves: self.leaves,
            height: self.depth_count.len() - 1,
        }
    }

    /// Live nodes in increasing handle order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.live)
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Live nodes in depth-first preorder, children visited by label.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![NodeId::ROOT];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.nodes[v.index()].children.values().rev());
        }
        out
    }

    /// DOT rendering with nodes and edges sorted by handle.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph trie {\n");
        for v in self.nodes() {
            s.push_str(&format!("  n{} [label=\"{}\"];\n", v.0, v.0));
        }
        for v in self.nodes() {
            for (l, c) in self.nodes[v.index()].children.iter() {
                s.push_str(&format!(
                    "  n{} -> n{} [label=\"{}\"];\n",
                    v.0,
                    c.0,
                    dot_escape(*l)
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn dot_escape(l: Label) -> String {
    match l.as_char() {
        '"' => "\\\"".to_string(),
        '\\' => "\\\\".to_string(),
        c if c.is_control() => format!("\\\\u{{{:04x}}}", c as u32),
        c => c.to_string(),
    }
}
