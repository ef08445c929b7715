//! Fixed-capacity bit set over dense node indices.

use std::fmt;

use crate::graph::NodeId;

const WORD_BITS: usize = 64;

/// A set of nodes drawn from a graph with `capacity` nodes.
///
/// All binary operations require both operands to share the same capacity;
/// sets built from the same graph always do.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    words: Vec<u64>,
    capacity: usize,
}

impl NodeSet {
    pub fn new(capacity: usize) -> Self {
        NodeSet {
            words: vec![0; capacity.div_ceil(WORD_BITS)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = NodeSet::new(capacity);
        for i in 0..capacity {
            s.insert(NodeId(i));
        }
        s
    }

    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(capacity: usize, nodes: I) -> Self {
        let mut s = NodeSet::new(capacity);
        for v in nodes {
            s.insert(v);
        }
        s
    }

    /// Builds a set from the low `capacity` bits of `mask`. Only valid for
    /// capacity ≤ 64.
    pub fn from_mask(capacity: usize, mask: u64) -> Self {
        assert!(capacity <= WORD_BITS, "mask sets hold at most 64 nodes");
        let mut s = NodeSet::new(capacity);
        if capacity > 0 {
            let keep = if capacity == WORD_BITS {
                u64::MAX
            } else {
                (1u64 << capacity) - 1
            };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        assert!(
            v.0 < self.capacity,
            "node {} outside set capacity {}",
            v.0,
            self.capacity
        );
        let (w, b) = (v.0 / WORD_BITS, v.0 % WORD_BITS);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: NodeId) -> bool {
        if v.0 >= self.capacity {
            return false;
        }
        let (w, b) = (v.0 / WORD_BITS, v.0 % WORD_BITS);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.capacity && self.words[v.0 / WORD_BITS] & (1 << (v.0 % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        debug_assert_eq!(self.capacity, other.capacity);
        NodeSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
            capacity: self.capacity,
        }
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        debug_assert_eq!(self.capacity, other.capacity);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Cardinality of `self ∪ other` without allocating.
    pub fn union_len(&self, other: &NodeSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(NodeId(wi * WORD_BITS + b))
            })
        })
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cap: usize, xs: &[usize]) -> NodeSet {
        NodeSet::from_nodes(cap, xs.iter().map(|&i| NodeId(i)))
    }

    #[test]
    fn basic_membership() {
        let mut s = NodeSet::new(130);
        assert!(s.is_empty());
        assert!(s.insert(NodeId(0)));
        assert!(s.insert(NodeId(129)));
        assert!(!s.insert(NodeId(129)));
        assert_eq!(s.len(), 2);
        assert!(s.contains(NodeId(129)));
        assert!(!s.contains(NodeId(64)));
        assert!(!s.contains(NodeId(500)));
        assert_eq!(s.to_vec(), vec![NodeId(0), NodeId(129)]);
        assert!(s.remove(NodeId(0)));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn set_algebra() {
        let a = set(70, &[1, 2, 65]);
        let b = set(70, &[2, 3, 65, 69]);
        assert_eq!(a.union(&b), set(70, &[1, 2, 3, 65, 69]));
        assert_eq!(a.intersection(&b), set(70, &[2, 65]));
        assert_eq!(a.difference(&b), set(70, &[1]));
        assert_eq!(a.union_len(&b), 5);
        assert!(set(70, &[2, 65]).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(NodeSet::new(70).is_subset(&a));
    }

    #[test]
    fn mask_round_trip() {
        let s = NodeSet::from_mask(5, 0b1_0110);
        assert_eq!(s, set(5, &[1, 2, 4]));
        // bits beyond capacity are dropped
        assert_eq!(NodeSet::from_mask(3, 0xff).len(), 3);
        assert_eq!(NodeSet::full(64).len(), 64);
    }
}
