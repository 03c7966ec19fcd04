//! Semi-dynamic nearest colored ancestor over a tree that only grows and
//! shrinks at its leaves, with node colors fixed at insertion.
//!
//! Nodes appear twice in an Euler tour kept in an [`OrderList`]; both
//! occurrences carry the node's color. Each node also stores the answer to
//! `nca(node, color(node))` computed when it was inserted. Since colors never
//! change and internal nodes are never inserted, that pointer stays valid for
//! the node's lifetime.

use crate::error::{Error, Result};
use crate::label::Label;
use crate::order_list::{ElemId, OrderList};

/// Handle to a node of the colored tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NcaId(pub u32);

#[derive(Debug, Clone, Copy)]
struct Occurrence {
    node: NcaId,
    opening: bool,
}

#[derive(Debug, Clone)]
struct NcaNode {
    parent: Option<NcaId>,
    color: Label,
    first: ElemId,
    last: ElemId,
    own_nca: Option<NcaId>,
    children: usize,
    live: bool,
}

#[derive(Debug, Clone)]
pub struct ColoredAncestor {
    nodes: Vec<NcaNode>,
    tour: OrderList<Occurrence>,
}

impl ColoredAncestor {
    /// A one-node tree whose root has color `root_color`.
    pub fn new(root_color: Label) -> Self {
        let mut tour = OrderList::new();
        let root = NcaId(0);
        let first = tour
            .insert_after(
                None,
                Occurrence {
                    node: root,
                    opening: true,
                },
            )
            .unwrap();
        let last = tour
            .insert_after(
                Some(first),
                Occurrence {
                    node: root,
                    opening: false,
                },
            )
            .unwrap();
        tour.color(first, root_color).unwrap();
        tour.color(last, root_color).unwrap();
        ColoredAncestor {
            nodes: vec![NcaNode {
                parent: None,
                color: root_color,
                first,
                last,
                own_nca: None,
                children: 0,
                live: true,
            }],
            tour,
        }
    }

    pub fn root(&self) -> NcaId {
        NcaId(0)
    }

    fn node(&self, v: NcaId) -> Result<&NcaNode> {
        match self.nodes.get(v.0 as usize) {
            Some(n) if n.live => Ok(n),
            _ => Err(Error::UnknownElement(v.0 as usize)),
        }
    }

    pub fn color(&self, v: NcaId) -> Result<Label> {
        Ok(self.node(v)?.color)
    }

    pub fn parent(&self, v: NcaId) -> Result<Option<NcaId>> {
        Ok(self.node(v)?.parent)
    }

    pub fn insert_leaf(&mut self, u: NcaId, color: Label) -> Result<NcaId> {
        let before = self.node(u)?.last;
        let id = NcaId(self.nodes.len() as u32);
        let anchor = self.tour.prev(before)?;
        let first = self.tour.insert_after(
            anchor,
            Occurrence {
                node: id,
                opening: true,
            },
        )?;
        let last = self.tour.insert_after(
            Some(first),
            Occurrence {
                node: id,
                opening: false,
            },
        )?;
        self.nodes.push(NcaNode {
            parent: Some(u),
            color,
            first,
            last,
            own_nca: None,
            children: 0,
            live: true,
        });
        self.nodes[u.0 as usize].children += 1;
        // computed before coloring so the node does not see itself
        let own = self.nca(id, color)?;
        self.nodes[id.0 as usize].own_nca = own;
        self.tour.color(first, color)?;
        self.tour.color(last, color)?;
        Ok(id)
    }

    pub fn delete_leaf(&mut self, v: NcaId) -> Result<()> {
        let n = self.node(v)?.clone();
        let parent = n.parent.ok_or(Error::IsRoot)?;
        if n.children > 0 {
            return Err(Error::NotALeaf(crate::trie::NodeId(v.0)));
        }
        self.tour.uncolor(n.first, n.color)?;
        self.tour.uncolor(n.last, n.color)?;
        self.tour.delete(n.first)?;
        self.tour.delete(n.last)?;
        self.nodes[v.0 as usize].live = false;
        self.nodes[parent.0 as usize].children -= 1;
        Ok(())
    }

    /// Nearest proper ancestor of `v` colored `c`.
    pub fn nca(&self, v: NcaId, c: Label) -> Result<Option<NcaId>> {
        let first = self.node(v)?.first;
        let hit = match self.tour.pred(first, c)? {
            None => return Ok(None),
            Some(e) => *self.tour.payload(e)?,
        };
        if hit.opening {
            Ok(Some(hit.node))
        } else {
            Ok(self.nodes[hit.node.0 as usize].own_nca)
        }
    }

    /// Nearest ancestor of `v` colored `c`, `v` itself included.
    pub fn nca_inclusive(&self, v: NcaId, c: Label) -> Result<Option<NcaId>> {
        if self.node(v)?.color == c {
            Ok(Some(v))
        } else {
            self.nca(v, c)
        }
    }

    /// Checks that the tour is a well-nested Euler tour of the tree.
    pub fn validate(&self) -> Result<()> {
        self.tour.validate()?;
        for (i, n) in self.nodes.iter().enumerate() {
            if !n.live {
                continue;
            }
            if !self.tour.order_less(n.first, n.last)? {
                return Err(Error::InconsistentState(format!(
                    "node {i} occurrences out of order"
                )));
            }
            if let Some(p) = n.parent {
                let pn = &self.nodes[p.0 as usize];
                if !(self.tour.order_less(pn.first, n.first)?
                    && self.tour.order_less(n.last, pn.last)?)
                {
                    return Err(Error::InconsistentState(format!(
                        "node {i} not nested in parent"
                    )));
                }
            }
        }
        Ok(())
    }
}
