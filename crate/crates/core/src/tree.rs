//! Rooted tree of all numerical semigroups, ordered by genus.
//!
//! The children of `S` are the semigroups `S \ {x}` where `x` ranges over the
//! effective generators of `S` (primitives larger than the Frobenius number).
//! Every semigroup of genus `g + 1` arises exactly once this way, so a DFS to
//! depth `G` visits each semigroup of genus `<= G` exactly once.

use thiserror::Error;

use crate::semigroup::{NumericalSemigroup, ELEMENT_BOUND};

/// Default cap on the projected memory of a depth-first enumeration.
pub const DEFAULT_MEMORY_LIMIT: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("genus bound {max_genus} is too large: {reason}")]
    BoundTooLarge { max_genus: u32, reason: String },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeNode {
    pub semigroup: NumericalSemigroup,
    /// Primitives strictly greater than the Frobenius number, ascending.
    pub effective_generators: Vec<u32>,
}

impl TreeNode {
    pub fn root() -> Self {
        TreeNode {
            semigroup: NumericalSemigroup::naturals(),
            effective_generators: vec![1],
        }
    }

    pub fn from_semigroup(semigroup: NumericalSemigroup) -> Self {
        let f = semigroup.frobenius();
        let effective_generators = semigroup
            .primitives()
            .into_iter()
            .filter(|&p| i64::from(p) > f)
            .collect();
        TreeNode {
            semigroup,
            effective_generators,
        }
    }

    /// Frobenius number `c − 1` (−1 for ℕ).
    pub fn frobenius(&self) -> i64 {
        self.semigroup.frobenius()
    }

    pub fn genus(&self) -> u32 {
        self.semigroup.genus()
    }

    pub fn children(&self) -> Vec<TreeNode> {
        self.effective_generators
            .iter()
            .map(|&x| self.child(x))
            .collect()
    }

    /// `S \ {x}` for an effective generator `x`.
    pub fn child(&self, x: u32) -> TreeNode {
        let s = &self.semigroup;
        debug_assert!(self.effective_generators.contains(&x));
        let m = s.multiplicity();
        let genus = s.genus() + 1;
        let m2 = if x == m { m + 1 } else { m };
        let window = (x + 1 + m2) as usize;

        let mut bits = s.window().clone();
        bits.resize(window, true);
        bits.clear(x as usize);
        assert!(
            x < 2 * genus,
            "Frobenius bound violated: F = {x} at genus {genus}"
        );

        // Generators of S above x stay primitive after removing x. The only
        // new primitives are elements x + d whose decompositions all used x.
        let mut effective: Vec<u32> = self
            .effective_generators
            .iter()
            .copied()
            .filter(|&y| y > x)
            .collect();
        let mut added = false;
        for d in 1..=m2 {
            let y = x + d;
            if y as usize >= window || !s.contains(u64::from(d)) || effective.contains(&y) {
                continue;
            }
            let y = y as usize;
            let decomposable = (m2 as usize..=y / 2).any(|a| bits.get(a) && bits.get(y - a));
            if !decomposable {
                effective.push(y as u32);
                added = true;
            }
        }
        if added {
            effective.sort_unstable();
        }
        TreeNode {
            semigroup: NumericalSemigroup::from_window_unchecked(bits, x + 1, m2, genus),
            effective_generators: effective,
        }
    }
}

/// Pending subtree roots of a bounded traversal plus the per-genus counts of
/// everything visited so far.
///
/// `pending` is a DFS stack: the next node processed is the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub max_genus: u32,
    pub pending: Vec<TreeNode>,
    pub counts: Vec<u64>,
}

impl Frontier {
    pub fn new(max_genus: u32) -> Self {
        Self::from_roots(max_genus, vec![TreeNode::root()])
    }

    /// Frontier over the subtrees rooted at `roots`; the first root is
    /// processed first. Roots deeper than `max_genus` are dropped.
    pub fn from_roots(max_genus: u32, roots: Vec<TreeNode>) -> Self {
        let mut pending: Vec<TreeNode> = roots
            .into_iter()
            .filter(|n| n.genus() <= max_genus)
            .collect();
        pending.reverse();
        Frontier {
            max_genus,
            pending,
            counts: vec![0; max_genus as usize + 1],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn expand(&mut self, node: &TreeNode, visit: &mut impl FnMut(&TreeNode)) -> Vec<TreeNode> {
        visit(node);
        self.counts[node.genus() as usize] += 1;
        if node.genus() < self.max_genus {
            node.children()
        } else {
            Vec::new()
        }
    }

    /// Visits the next pending node and pushes its children. Returns false
    /// once nothing is pending.
    pub fn step(&mut self, visit: &mut impl FnMut(&TreeNode)) -> bool {
        let Some(node) = self.pending.pop() else {
            return false;
        };
        let mut children = self.expand(&node, visit);
        // Smallest removed generator on top of the stack.
        children.reverse();
        self.pending.extend(children);
        true
    }

    /// Runs until empty, or until `limit` nodes have been visited by this
    /// call. Returns the number of nodes visited.
    pub fn drain(&mut self, visit: &mut impl FnMut(&TreeNode), limit: Option<u64>) -> u64 {
        let mut visited = 0;
        while limit.is_none_or(|l| visited < l) && self.step(visit) {
            visited += 1;
        }
        visited
    }

    /// Expands pending nodes breadth-first, visiting each expanded node,
    /// until at least `target` are pending or none can be expanded. Each
    /// node is still visited exactly once overall.
    pub fn widen(&mut self, target: usize, visit: &mut impl FnMut(&TreeNode)) {
        while self.pending.len() < target && self.pending.iter().any(|n| n.genus() < self.max_genus)
        {
            let stack = std::mem::take(&mut self.pending);
            // Walk in processing order (top of stack first) and rebuild.
            let mut next = Vec::new();
            for node in stack.into_iter().rev() {
                if node.genus() < self.max_genus {
                    next.extend(self.expand(&node, visit));
                } else {
                    next.push(node);
                }
            }
            next.reverse();
            self.pending = next;
        }
    }

    /// Splits the pending work into `k` disjoint frontiers. Pending nodes are
    /// expanded breadth-first (and visited) until there are at least `k` of
    /// them or nothing is left to expand. Counts so far go to the first shard.
    pub fn split(mut self, k: usize, visit: &mut impl FnMut(&TreeNode)) -> Vec<Frontier> {
        assert!(k >= 1, "split needs at least one shard");
        self.widen(k, visit);
        let mut shards: Vec<Frontier> = (0..k)
            .map(|_| Frontier {
                max_genus: self.max_genus,
                pending: Vec::new(),
                counts: vec![0; self.max_genus as usize + 1],
            })
            .collect();
        shards[0].counts = self.counts;
        // Deal in processing order so each shard keeps a valid DFS stack.
        for (i, node) in self.pending.into_iter().rev().enumerate() {
            shards[i % k].pending.push(node);
        }
        for shard in &mut shards {
            shard.pending.reverse();
        }
        shards
    }
}

/// Adds `other` into `acc`, elementwise.
pub fn merge_counts(acc: &mut Vec<u64>, other: &[u64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0);
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// Upper estimate of DFS memory for genus bound `g`: the stack holds at most
/// `g + 1` children per level, each node carrying a window of `<= 3g + 2`
/// bits and `<= g + 1` effective generators.
pub fn projected_memory(max_genus: u32) -> u64 {
    let g = u64::from(max_genus);
    let stack_nodes = (g + 1) * (g + 2) / 2 + 1;
    let node_bytes = 128 + 4 * (g + 2) + (3 * g + 2).div_ceil(8);
    stack_nodes.saturating_mul(node_bytes)
}

pub fn check_bound(max_genus: u32, limit: u64) -> Result<(), EnumerationError> {
    let projected = projected_memory(max_genus);
    if projected > limit || 3 * u64::from(max_genus) + 2 >= ELEMENT_BOUND {
        return Err(EnumerationError::BoundTooLarge {
            max_genus,
            reason: format!(
                "projected {projected} bytes of traversal state exceeds the limit of {limit}"
            ),
        });
    }
    Ok(())
}

/// Visits every semigroup of genus `<= max_genus` once, in DFS pre-order with
/// children by increasing removed generator. Returns per-genus counts.
pub fn enumerate(
    max_genus: u32,
    mut visitor: impl FnMut(&TreeNode),
) -> Result<Vec<u64>, EnumerationError> {
    check_bound(max_genus, DEFAULT_MEMORY_LIMIT)?;
    let mut frontier = Frontier::new(max_genus);
    frontier.drain(&mut visitor, None);
    Ok(frontier.counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(g: &[u32]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn root_and_first_levels() {
        let root = TreeNode::root();
        assert!(root.semigroup.is_naturals());
        assert_eq!(root.frobenius(), -1);
        let kids = root.children();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].semigroup, gens(&[2, 3]));
        let grand = kids[0].children();
        assert_eq!(grand.len(), 2);
        assert_eq!(grand[0].semigroup, gens(&[3, 4, 5]));
        assert_eq!(grand[1].semigroup, gens(&[2, 5]));
    }

    #[test]
    fn children_of_two_five() {
        let node = TreeNode::from_semigroup(gens(&[2, 5]));
        assert_eq!(node.effective_generators, vec![5]);
        let kids = node.children();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].semigroup, gens(&[2, 7]));
    }

    #[test]
    fn leaf_has_no_children() {
        // F(<3,5>) = 7 exceeds both generators.
        let node = TreeNode::from_semigroup(gens(&[3, 5]));
        assert!(node.effective_generators.is_empty());
        assert!(node.children().is_empty());
    }

    #[test]
    fn incremental_generators_match_recomputation() {
        let mut frontier = Frontier::new(12);
        frontier.drain(
            &mut |n: &TreeNode| {
                let fresh = TreeNode::from_semigroup(n.semigroup.clone());
                assert_eq!(
                    fresh.effective_generators, n.effective_generators,
                    "{:?}",
                    n.semigroup
                );
            },
            None,
        );
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate(0, |_| {}).unwrap(), vec![1]);
        assert_eq!(
            enumerate(8, |_| {}).unwrap(),
            vec![1, 1, 2, 4, 7, 12, 23, 39, 67]
        );
        let mut seen = Vec::new();
        enumerate(2, |n| seen.push(n.semigroup.clone())).unwrap();
        assert_eq!(
            seen,
            vec![gens(&[1]), gens(&[2, 3]), gens(&[3, 4, 5]), gens(&[2, 5])]
        );
    }

    #[test]
    fn split_cases() {
        let mut none = |_: &TreeNode| {};
        let whole = Frontier::new(10);
        let shards = whole.clone().split(1, &mut none);
        assert_eq!(shards, vec![whole]);

        let empty = Frontier::from_roots(5, vec![]);
        let shards = empty.split(3, &mut none);
        assert_eq!(shards.len(), 3);
        assert!(shards.iter().all(|s| s.is_empty() && s.total() == 0));
    }

    #[test]
    fn split_shards_sum_to_whole() {
        let expected = enumerate(12, |_| {}).unwrap();
        for k in [2, 4, 7, 50] {
            let mut total = vec![0; 13];
            for mut shard in Frontier::new(12).split(k, &mut |_| {}) {
                shard.drain(&mut |_| {}, None);
                merge_counts(&mut total, &shard.counts);
            }
            assert_eq!(total, expected, "k = {k}");
        }
    }

    #[test]
    fn drain_with_limit_resumes() {
        let expected = enumerate(11, |_| {}).unwrap();
        let mut f = Frontier::new(11);
        assert_eq!(f.drain(&mut |_| {}, Some(100)), 100);
        let snapshot = f.clone();
        let mut rest = snapshot;
        rest.drain(&mut |_| {}, None);
        assert_eq!(rest.counts, expected);
    }

    #[test]
    fn bound_guard() {
        assert!(check_bound(60, DEFAULT_MEMORY_LIMIT).is_ok());
        assert!(matches!(
            check_bound(100_000, DEFAULT_MEMORY_LIMIT),
            Err(EnumerationError::BoundTooLarge { .. })
        ));
    }
}
