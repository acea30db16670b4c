//! Exact running quantiles.
//!
//! [`OracleMultiset`] stores every observation in a B+ tree whose inner nodes
//! carry per-child element counts, giving logarithmic insert, rank and select.
//! It is the ground truth the estimators are scored against and is allowed the
//! O(n) memory they are not.

use crate::error::{check_finite, Error, Result};
use crate::spec::rank_index;

const LEAF_CAP: usize = 256;
const FANOUT: usize = 64;

#[derive(Debug, Clone)]
enum Node {
    Leaf(Vec<f64>),
    /// `seps[i]` is the first key of `children[i + 1]`; keys of `children[i]`
    /// are all `<= seps[i]`.
    Inner {
        children: Vec<usize>,
        counts: Vec<u64>,
        seps: Vec<f64>,
    },
}

/// Ordered multiset with select-by-rank.
#[derive(Debug, Clone)]
pub struct OracleMultiset {
    nodes: Vec<Node>,
    root: usize,
    len: u64,
}

impl Default for OracleMultiset {
    fn default() -> Self {
        Self::new()
    }
}

impl OracleMultiset {
    pub fn new() -> Self {
        OracleMultiset {
            nodes: vec![Node::Leaf(Vec::with_capacity(LEAF_CAP + 1))],
            root: 0,
            len: 0,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        // Normalise -0.0 so ordering by `<` and storage agree.
        let x = if x == 0.0 { 0.0 } else { x };
        if let Some((sibling, sep)) = self.insert_into(self.root, x) {
            let left = self.root;
            let counts = vec![self.node_len(left), self.node_len(sibling)];
            self.root = self.push(Node::Inner {
                children: vec![left, sibling],
                counts,
                seps: vec![sep],
            });
        }
        self.len += 1;
        Ok(())
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn node_len(&self, id: usize) -> u64 {
        match &self.nodes[id] {
            Node::Leaf(keys) => keys.len() as u64,
            Node::Inner { counts, .. } => counts.iter().sum(),
        }
    }

    /// Returns the new right sibling and its first key when `id` split.
    fn insert_into(&mut self, id: usize, x: f64) -> Option<(usize, f64)> {
        let (slot, child) = match &mut self.nodes[id] {
            Node::Leaf(keys) => {
                let pos = keys.partition_point(|&k| k <= x);
                keys.insert(pos, x);
                if keys.len() <= LEAF_CAP {
                    return None;
                }
                let right = keys.split_off(keys.len() / 2);
                let sep = right[0];
                return Some((self.push(Node::Leaf(right)), sep));
            }
            Node::Inner {
                children,
                counts,
                seps,
            } => {
                let slot = seps.partition_point(|&s| s <= x);
                counts[slot] += 1;
                (slot, children[slot])
            }
        };

        let (sibling, sep) = self.insert_into(child, x)?;
        let (child_len, sibling_len) = (self.node_len(child), self.node_len(sibling));
        let Node::Inner {
            children,
            counts,
            seps,
        } = &mut self.nodes[id]
        else {
            unreachable!("slot was taken from an inner node")
        };
        children.insert(slot + 1, sibling);
        counts[slot] = child_len;
        counts.insert(slot + 1, sibling_len);
        seps.insert(slot, sep);
        if children.len() <= FANOUT {
            return None;
        }
        let mid = children.len() / 2;
        let right_children = children.split_off(mid);
        let right_counts = counts.split_off(mid);
        let mut right_seps = seps.split_off(mid - 1);
        let up = right_seps.remove(0);
        let node = Node::Inner {
            children: right_children,
            counts: right_counts,
            seps: right_seps,
        };
        Some((self.push(node), up))
    }

    /// The `rank`-th smallest element, 1-based.
    pub fn select(&self, rank: u64) -> Option<f64> {
        if rank == 0 || rank > self.len {
            return None;
        }
        let mut left = rank - 1;
        let mut id = self.root;
        loop {
            match &self.nodes[id] {
                Node::Leaf(keys) => return Some(keys[left as usize]),
                Node::Inner {
                    children, counts, ..
                } => {
                    let mut slot = 0;
                    while left >= counts[slot] {
                        left -= counts[slot];
                        slot += 1;
                    }
                    id = children[slot];
                }
            }
        }
    }

    fn count_by(&self, x: f64, inclusive: bool) -> u64 {
        let below = |k: f64| if inclusive { k <= x } else { k < x };
        let mut total = 0;
        let mut id = self.root;
        loop {
            match &self.nodes[id] {
                Node::Leaf(keys) => return total + keys.partition_point(|&k| below(k)) as u64,
                Node::Inner {
                    children,
                    counts,
                    seps,
                } => {
                    let slot = seps.partition_point(|&s| below(s));
                    total += counts[..slot].iter().sum::<u64>();
                    id = children[slot];
                }
            }
        }
    }

    /// Number of stored elements strictly below `x`.
    pub fn count_less(&self, x: f64) -> u64 {
        self.count_by(x, false)
    }

    /// Number of stored elements at or below `x`.
    pub fn count_le(&self, x: f64) -> u64 {
        self.count_by(x, true)
    }

    /// Exact q-quantile: the element of rank `ceil(q * n)`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQuantile(q));
        }
        self.select(rank_index(self.len, q)).ok_or(Error::EmptySet)
    }
}

/// Replays a distinct-valued stream and checks that the 1-based rank of the
/// exact q-quantile never moves by anything other than 0 or +1 per datum.
///
/// The rank is measured on the multiset (count of smaller elements plus one)
/// rather than taken from the rank formula, so the check exercises the tree.
pub fn rank_step_check(stream: impl IntoIterator<Item = f64>, q: f64) -> Result<bool> {
    let mut set = OracleMultiset::new();
    let mut prev: Option<u64> = None;
    let mut held = true;
    for x in stream {
        check_finite(x)?;
        if set.count_le(x) > set.count_less(x) {
            return Err(Error::DuplicateValue(x));
        }
        set.insert(x)?;
        let v = set.quantile(q)?;
        let k = set.count_less(v) + 1;
        if let Some(p) = prev {
            held &= k == p || k == p + 1;
        }
        prev = Some(k);
    }
    Ok(held)
}
