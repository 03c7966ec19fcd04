//! Order-maintenance list whose elements carry sets of colors.
//!
//! Relative order is answered in `O(1)` from 64-bit tags. When an insertion
//! finds no free tag between its neighbours, the smallest enclosing aligned
//! tag range whose density is below a geometric threshold is relabeled
//! evenly (Bender et al.), which is `O(log n)` amortized.
//!
//! Each color keeps a treap of the elements carrying it. Treap comparisons go
//! through the list order, not stored keys, so relabeling never touches the
//! color indexes. `pred`/`succ` by color therefore cost `O(log m)` expected,
//! where `m` is the total number of (element, color) pairs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::label::Label;

/// Handle to a list element.
pub type ElemId = usize;

const NIL: u32 = u32::MAX;
/// Relabel density threshold base; ranges of size `2^i` may hold at most
/// `(2 / OVERFLOW)^i` elements.
const OVERFLOW: f64 = 1.4;

#[derive(Debug, Clone)]
struct Elem<T> {
    tag: u64,
    prev: Option<ElemId>,
    next: Option<ElemId>,
    colors: BTreeSet<Label>,
    payload: T,
    live: bool,
}

#[derive(Debug, Clone, Copy)]
struct TreapNode {
    elem: ElemId,
    prio: u64,
    left: u32,
    right: u32,
}

#[derive(Debug, Clone)]
pub struct OrderList<T> {
    elems: Vec<Elem<T>>,
    head: Option<ElemId>,
    len: usize,
    treap: Vec<TreapNode>,
    treap_free: Vec<u32>,
    roots: BTreeMap<Label, u32>,
    color_total: usize,
    rng: u64,
    relabels: u64,
}

impl<T> Default for OrderList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> OrderList<T> {
    pub fn new() -> Self {
        OrderList {
            elems: Vec::new(),
            head: None,
            len: 0,
            treap: Vec::new(),
            treap_free: Vec::new(),
            roots: BTreeMap::new(),
            color_total: 0,
            rng: 0x9E37_79B9_7F4A_7C15,
            relabels: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Total number of (element, color) pairs.
    pub fn color_count(&self) -> usize {
        self.color_total
    }

    /// Number of relabeling passes performed so far.
    pub fn relabel_count(&self) -> u64 {
        self.relabels
    }

    fn elem(&self, e: ElemId) -> Result<&Elem<T>> {
        match self.elems.get(e) {
            Some(x) if x.live => Ok(x),
            _ => Err(Error::UnknownElement(e)),
        }
    }

    pub fn contains(&self, e: ElemId) -> bool {
        self.elem(e).is_ok()
    }

    pub fn payload(&self, e: ElemId) -> Result<&T> {
        Ok(&self.elem(e)?.payload)
    }

    pub fn payload_mut(&mut self, e: ElemId) -> Result<&mut T> {
        self.elem(e)?;
        Ok(&mut self.elems[e].payload)
    }

    pub fn colors(&self, e: ElemId) -> Result<&BTreeSet<Label>> {
        Ok(&self.elem(e)?.colors)
    }

    pub fn prev(&self, e: ElemId) -> Result<Option<ElemId>> {
        Ok(self.elem(e)?.prev)
    }

    pub fn next(&self, e: ElemId) -> Result<Option<ElemId>> {
        Ok(self.elem(e)?.next)
    }

    pub fn first(&self) -> Option<ElemId> {
        self.head
    }

    /// Elements in list order.
    pub fn iter(&self) -> impl Iterator<Item = ElemId> + '_ {
        std::iter::successors(self.head, move |&e| self.elems[e].next)
    }

    pub fn order_less(&self, a: ElemId, b: ElemId) -> Result<bool> {
        Ok(self.elem(a)?.tag < self.elem(b)?.tag)
    }

    pub fn cmp(&self, a: ElemId, b: ElemId) -> Result<Ordering> {
        Ok(self.elem(a)?.tag.cmp(&self.elem(b)?.tag))
    }

    /// Inserts a new uncolored element immediately after `after`, or at the
    /// front when `after` is `None`.
    pub fn insert_after(&mut self, after: Option<ElemId>, payload: T) -> Result<ElemId> {
        let (lo, next) = match after {
            Some(a) => {
                let x = self.elem(a)?;
                (Some(x.tag), x.next)
            }
            None => (None, self.head),
        };
        let hi = next.map(|n| self.elems[n].tag);
        let id = self.elems.len();
        // provisional tag; fixed up by relabel when there is no room
        let (tag, room) = match (lo, hi) {
            (None, None) => (1u64 << 63, true),
            (None, Some(h)) => (h / 2, h > 0),
            (Some(l), None) => (l + (u64::MAX - l) / 2 + (u64::MAX - l) % 2, l < u64::MAX),
            (Some(l), Some(h)) => (l + (h - l) / 2, h - l >= 2),
        };
        self.elems.push(Elem {
            tag,
            prev: after,
            next,
            colors: BTreeSet::new(),
            payload,
            live: true,
        });
        match after {
            Some(a) => self.elems[a].next = Some(id),
            None => self.head = Some(id),
        }
        if let Some(n) = next {
            self.elems[n].prev = Some(id);
        }
        self.len += 1;
        if !room {
            self.relabel_around(id);
        }
        Ok(id)
    }

    fn relabel_around(&mut self, e: ElemId) {
        self.relabels += 1;
        // the new element carries its predecessor's tag (or is misplaced at
        // the front), so ranges are anchored on a neighbour with a valid tag
        let anchor = self.elems[e].prev.or(self.elems[e].next).unwrap_or(e);
        let base = self.elems[anchor].tag as u128;
        let mut bits = 1u32;
        loop {
            let size: u128 = 1u128 << bits;
            let start = base & !(size - 1);
            let end = start + size; // exclusive
                                    // walk outward from e collecting the contiguous run in [start, end)
            let mut first = e;
            let mut count: u128 = 1;
            while let Some(p) = self.elems[first].prev {
                let t = self.elems[p].tag as u128;
                if t < start {
                    break;
                }
                first = p;
                count += 1;
            }
            let mut last = e;
            while let Some(n) = self.elems[last].next {
                let t = self.elems[n].tag as u128;
                if t >= end {
                    break;
                }
                last = n;
                count += 1;
            }
            let limit = (2.0 / OVERFLOW).powi(bits as i32);
            if bits == 64 || (count as f64) <= limit {
                let step = size / count;
                debug_assert!(step >= 1, "order list overflow");
                let mut cur = Some(first);
                let mut t = start;
                while let Some(c) = cur {
                    self.elems[c].tag = t as u64;
                    t += step;
                    if c == last {
                        break;
                    }
                    cur = self.elems[c].next;
                }
                return;
            }
            bits += 1;
        }
    }

    /// Removes an uncolored element.
    pub fn delete(&mut self, e: ElemId) -> Result<()> {
        let x = self.elem(e)?;
        if !x.colors.is_empty() {
            return Err(Error::ElementStillColored(e));
        }
        let (prev, next) = (x.prev, x.next);
        match prev {
            Some(p) => self.elems[p].next = next,
            None => self.head = next,
        }
        if let Some(n) = next {
            self.elems[n].prev = prev;
        }
        self.elems[e].live = false;
        self.len -= 1;
        Ok(())
    }

    /// Adds color `c` to `e`; a no-op if already present.
    pub fn color(&mut self, e: ElemId, c: Label) -> Result<()> {
        self.elem(e)?;
        if !self.elems[e].colors.insert(c) {
            return Ok(());
        }
        let root = self.roots.get(&c).copied().unwrap_or(NIL);
        let node = self.alloc(e);
        let (l, r) = self.split(root, e);
        let m = self.merge(l, node);
        let root = self.merge(m, r);
        self.roots.insert(c, root);
        self.color_total += 1;
        Ok(())
    }

    pub fn uncolor(&mut self, e: ElemId, c: Label) -> Result<()> {
        self.elem(e)?;
        if !self.elems[e].colors.remove(&c) {
            return Err(Error::ColorAbsent { elem: e, color: c });
        }
        let root = self.roots[&c];
        let root = self.remove(root, e);
        if root == NIL {
            self.roots.remove(&c);
        } else {
            self.roots.insert(c, root);
        }
        self.color_total -= 1;
        Ok(())
    }

    /// Nearest element strictly before `e` carrying color `c`.
    pub fn pred(&self, e: ElemId, c: Label) -> Result<Option<ElemId>> {
        let key = self.elem(e)?.tag;
        let mut cur = self.roots.get(&c).copied().unwrap_or(NIL);
        let mut best = None;
        while cur != NIL {
            let n = self.treap[cur as usize];
            if self.elems[n.elem].tag < key {
                best = Some(n.elem);
                cur = n.right;
            } else {
                cur = n.left;
            }
        }
        Ok(best)
    }

    /// Nearest element strictly after `e` carrying color `c`.
    pub fn succ(&self, e: ElemId, c: Label) -> Result<Option<ElemId>> {
        let key = self.elem(e)?.tag;
        let mut cur = self.roots.get(&c).copied().unwrap_or(NIL);
        let mut best = None;
        while cur != NIL {
            let n = self.treap[cur as usize];
            if self.elems[n.elem].tag > key {
                best = Some(n.elem);
                cur = n.left;
            } else {
                cur = n.right;
            }
        }
        Ok(best)
    }

    fn next_prio(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.rng;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.rng = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    fn alloc(&mut self, elem: ElemId) -> u32 {
        let node = TreapNode {
            elem,
            prio: self.next_prio(),
            left: NIL,
            right: NIL,
        };
        match self.treap_free.pop() {
            Some(i) => {
                self.treap[i as usize] = node;
                i
            }
            None => {
                self.treap.push(node);
                (self.treap.len() - 1) as u32
            }
        }
    }

    /// Splits into (< key, >= key) by list order.
    fn split(&mut self, root: u32, key: ElemId) -> (u32, u32) {
        if root == NIL {
            return (NIL, NIL);
        }
        let n = self.treap[root as usize];
        if self.elems[n.elem].tag < self.elems[key].tag {
            let (l, r) = self.split(n.right, key);
            self.treap[root as usize].right = l;
            (root, r)
        } else {
            let (l, r) = self.split(n.left, key);
            self.treap[root as usize].left = r;
            (l, root)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.treap[a as usize].prio > self.treap[b as usize].prio {
            let r = self.treap[a as usize].right;
            self.treap[a as usize].right = self.merge(r, b);
            a
        } else {
            let l = self.treap[b as usize].left;
            self.treap[b as usize].left = self.merge(a, l);
            b
        }
    }

    fn remove(&mut self, root: u32, e: ElemId) -> u32 {
        if root == NIL {
            return NIL;
        }
        let n = self.treap[root as usize];
        if n.elem == e {
            self.treap_free.push(root);
            return self.merge(n.left, n.right);
        }
        if self.elems[e].tag < self.elems[n.elem].tag {
            let l = self.remove(n.left, e);
            self.treap[root as usize].left = l;
        } else {
            let r = self.remove(n.right, e);
            self.treap[root as usize].right = r;
        }
        root
    }

    /// Checks tag monotonicity and that every color index holds exactly the
    /// elements carrying that color, in list order.
    pub fn validate(&self) -> Result<()> {
        let mut prev_tag = None;
        let mut seen = 0;
        let mut expected: BTreeMap<Label, Vec<ElemId>> = BTreeMap::new();
        for e in self.iter() {
            let x = &self.elems[e];
            if let Some(p) = prev_tag {
                if p >= x.tag {
                    return Err(Error::InconsistentState("order tags not increasing".into()));
                }
            }
            prev_tag = Some(x.tag);
            for &c in &x.colors {
                expected.entry(c).or_default().push(e);
            }
            seen += 1;
        }
        if seen != self.len {
            return Err(Error::InconsistentState("list length mismatch".into()));
        }
        let mut total = 0;
        for (c, want) in &expected {
            let mut got = Vec::new();
            self.inorder(self.roots.get(c).copied().unwrap_or(NIL), &mut got);
            if &got != want {
                return Err(Error::InconsistentState(format!(
                    "color index {c:?} out of sync"
                )));
            }
            total += got.len();
        }
        if self.roots.len() != expected.len() || total != self.color_total {
            return Err(Error::InconsistentState("stale color index".into()));
        }
        Ok(())
    }

    fn inorder(&self, n: u32, out: &mut Vec<ElemId>) {
        if n == NIL {
            return;
        }
        let t = self.treap[n as usize];
        self.inorder(t.left, out);
        out.push(t.elem);
        self.inorder(t.right, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: char) -> Label {
        Label::new(x)
    }

    #[test]
    fn front_insert_on_empty() {
        let mut l = OrderList::new();
        let a = l.insert_after(None, ()).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.first(), Some(a));
        let b = l.insert_after(Some(a), ()).unwrap();
        assert!(l.order_less(a, b).unwrap());
        let z = l.insert_after(None, ()).unwrap();
        assert!(l.order_less(z, a).unwrap());
        assert_eq!(l.iter().collect::<Vec<_>>(), vec![z, a, b]);
    }

    #[test]
    fn pred_succ_basics() {
        let mut l = OrderList::new();
        let x = l.insert_after(None, ()).unwrap();
        let y = l.insert_after(Some(x), ()).unwrap();
        let z = l.insert_after(Some(y), ()).unwrap();
        assert_eq!(l.pred(z, c('c')).unwrap(), None);
        l.color(x, c('c')).unwrap();
        assert_eq!(l.pred(z, c('c')).unwrap(), Some(x));
        assert_eq!(l.succ(x, c('c')).unwrap(), None);
        assert_eq!(l.pred(x, c('c')).unwrap(), None);
        // idempotent coloring
        l.color(x, c('c')).unwrap();
        assert_eq!(l.color_count(), 1);
        l.uncolor(x, c('c')).unwrap();
        assert_eq!(l.pred(z, c('c')).unwrap(), None);
        assert_eq!(
            l.uncolor(x, c('c')),
            Err(Error::ColorAbsent {
                elem: x,
                color: c('c')
            })
        );
        l.validate().unwrap();
    }

    #[test]
    fn delete_rules() {
        let mut l = OrderList::new();
        let x = l.insert_after(None, ()).unwrap();
        l.color(x, c('a')).unwrap();
        assert_eq!(l.delete(x), Err(Error::ElementStillColored(x)));
        l.uncolor(x, c('a')).unwrap();
        l.delete(x).unwrap();
        assert_eq!(l.delete(x), Err(Error::UnknownElement(x)));
        assert_eq!(l.insert_after(Some(x), ()), Err(Error::UnknownElement(x)));
        assert!(l.is_empty());
    }

    #[test]
    fn adjacent_inserts_force_relabels() {
        let mut l = OrderList::new();
        let first = l.insert_after(None, 0usize).unwrap();
        let mut order = vec![first];
        // always insert right after the first element: worst case for gaps
        for i in 1..5000 {
            let e = l.insert_after(Some(first), i).unwrap();
            order.insert(1, e);
        }
        assert!(l.relabel_count() > 0);
        assert_eq!(l.iter().collect::<Vec<_>>(), order);
        for w in order.windows(2) {
            assert!(l.order_less(w[0], w[1]).unwrap());
        }
        // and at the front
        for _ in 0..200 {
            let e = l.insert_after(None, 0).unwrap();
            order.insert(0, e);
        }
        assert_eq!(l.iter().collect::<Vec<_>>(), order);
        l.validate().unwrap();
    }
}
