//! Fully persistent ordered map built on a path-copying AVL tree.
//!
//! Every update returns a new version and leaves the old one untouched;
//! versions share all subtrees off the copied search path.

use std::cmp::Ordering;
use std::sync::Arc;

#[derive(Debug)]
struct Node<K, V> {
    key: K,
    val: V,
    height: u8,
    size: usize,
    left: Link<K, V>,
    right: Link<K, V>,
}

type Link<K, V> = Option<Arc<Node<K, V>>>;

/// One immutable version of the map.
#[derive(Debug)]
pub struct PersistentMap<K, V> {
    root: Link<K, V>,
}

impl<K, V> Clone for PersistentMap<K, V> {
    fn clone(&self) -> Self {
        PersistentMap {
            root: self.root.clone(),
        }
    }
}

impl<K, V> Default for PersistentMap<K, V> {
    fn default() -> Self {
        PersistentMap { root: None }
    }
}

fn height<K, V>(n: &Link<K, V>) -> u8 {
    n.as_ref().map_or(0, |n| n.height)
}

fn size<K, V>(n: &Link<K, V>) -> usize {
    n.as_ref().map_or(0, |n| n.size)
}

fn mk<K, V>(key: K, val: V, left: Link<K, V>, right: Link<K, V>) -> Arc<Node<K, V>> {
    Arc::new(Node {
        height: 1 + height(&left).max(height(&right)),
        size: 1 + size(&left) + size(&right),
        key,
        val,
        left,
        right,
    })
}

impl<K: Ord + Clone, V: Clone> PersistentMap<K, V> {
    pub fn empty() -> Self {
        PersistentMap { root: None }
    }

    pub fn len(&self) -> usize {
        size(&self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        let mut cur = &self.root;
        while let Some(n) = cur {
            match key.cmp(&n.key) {
                Ordering::Less => cur = &n.left,
                Ordering::Greater => cur = &n.right,
                Ordering::Equal => return Some(&n.val),
            }
        }
        None
    }

    /// New version with `key` mapped to `val`.
    pub fn with_set(&self, key: K, val: V) -> Self {
        PersistentMap {
            root: Some(insert(&self.root, key, val)),
        }
    }

    /// Entries in key order.
    pub fn iter(&self) -> Iter<'_, K, V> {
        let mut it = Iter { stack: Vec::new() };
        it.push_left(&self.root);
        it
    }

    /// Number of tree nodes reachable from `self` that are not shared with
    /// `base`.
    pub fn unshared_nodes(&self, base: &Self) -> usize {
        let mut old = std::collections::HashSet::new();
        collect_ptrs(&base.root, &mut old);
        count_unshared(&self.root, &old)
    }

    /// Tree height; at most `1.45 log2(len + 2)` for AVL trees.
    pub fn height(&self) -> usize {
        height(&self.root) as usize
    }
}

fn collect_ptrs<K, V>(n: &Link<K, V>, out: &mut std::collections::HashSet<*const Node<K, V>>) {
    if let Some(n) = n {
        out.insert(Arc::as_ptr(n));
        collect_ptrs(&n.left, out);
        collect_ptrs(&n.right, out);
    }
}

fn count_unshared<K, V>(
    n: &Link<K, V>,
    old: &std::collections::HashSet<*const Node<K, V>>,
) -> usize {
    match n {
        None => 0,
        Some(n) if old.contains(&Arc::as_ptr(n)) => 0,
        Some(n) => 1 + count_unshared(&n.left, old) + count_unshared(&n.right, old),
    }
}

fn insert<K: Ord + Clone, V: Clone>(n: &Link<K, V>, key: K, val: V) -> Arc<Node<K, V>> {
    match n {
        None => mk(key, val, None, None),
        Some(n) => match key.cmp(&n.key) {
            Ordering::Equal => mk(key, val, n.left.clone(), n.right.clone()),
            Ordering::Less => {
                let l = insert(&n.left, key, val);
                balance(n.key.clone(), n.val.clone(), Some(l), n.right.clone())
            }
            Ordering::Greater => {
                let r = insert(&n.right, key, val);
                balance(n.key.clone(), n.val.clone(), n.left.clone(), Some(r))
            }
        },
    }
}

fn balance<K: Clone, V: Clone>(key: K, val: V, l: Link<K, V>, r: Link<K, V>) -> Arc<Node<K, V>> {
    let (hl, hr) = (height(&l), height(&r));
    if hl > hr + 1 {
        let ln = l.as_ref().unwrap();
        if height(&ln.left) >= height(&ln.right) {
            let new_r = mk(key, val, ln.right.clone(), r);
            mk(ln.key.clone(), ln.val.clone(), ln.left.clone(), Some(new_r))
        } else {
            let lr = ln.right.as_ref().unwrap();
            let new_l = mk(
                ln.key.clone(),
                ln.val.clone(),
                ln.left.clone(),
                lr.left.clone(),
            );
            let new_r = mk(key, val, lr.right.clone(), r);
            mk(lr.key.clone(), lr.val.clone(), Some(new_l), Some(new_r))
        }
    } else if hr > hl + 1 {
        let rn = r.as_ref().unwrap();
        if height(&rn.right) >= height(&rn.left) {
            let new_l = mk(key, val, l, rn.left.clone());
            mk(
                rn.key.clone(),
                rn.val.clone(),
                Some(new_l),
                rn.right.clone(),
            )
        } else {
            let rl = rn.left.as_ref().unwrap();
            let new_l = mk(key, val, l, rl.left.clone());
            let new_r = mk(
                rn.key.clone(),
                rn.val.clone(),
                rl.right.clone(),
                rn.right.clone(),
            );
            mk(rl.key.clone(), rl.val.clone(), Some(new_l), Some(new_r))
        }
    } else {
        mk(key, val, l, r)
    }
}

pub struct Iter<'a, K, V> {
    stack: Vec<&'a Node<K, V>>,
}

impl<'a, K, V> Iter<'a, K, V> {
    fn push_left(&mut self, mut n: &'a Link<K, V>) {
        while let Some(x) = n {
            self.stack.push(x);
            n = &x.left;
        }
    }
}

impl<'a, K, V> Iterator for Iter<'a, K, V> {
    type Item = (&'a K, &'a V);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.stack.pop()?;
        self.push_left(&n.right);
        Some((&n.key, &n.val))
    }
}
