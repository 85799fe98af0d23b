//! Ground-truth engines for desk-scale verification: exhaustive energy
//! minimization over all bipolar states, exhaustive best-path search over
//! permutations, and a label-setting shortest-path baseline.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hopfield::{NetworkState, WeightMatrix};
use crate::scalar::Scalar;
use crate::topology::{ConstellationTopology, DistanceMatrix, NodeId};

/// Caps keeping exhaustive enumeration tractable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Cap for 2^n state enumeration.
    pub max_units: usize,
    /// Cap for n! permutation enumeration.
    pub max_nodes_permutation: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_units: 20,
            max_nodes_permutation: 8,
        }
    }
}

/// Unit `u` is on iff bit `n-1-u` of `index` is set, so ascending indices
/// enumerate states in lexicographic order with -1 < +1.
fn state_from_index(index: u64, n_units: usize) -> NetworkState {
    let mut state = NetworkState::all_off(n_units);
    for u in 0..n_units {
        if index >> (n_units - 1 - u) & 1 == 1 {
            state.set_spin(u, 1);
        }
    }
    state
}

fn energy_of_index<S: Scalar>(w: &WeightMatrix<S>, threshold: S, index: u64, n: usize) -> S {
    let sign = |u: usize| index >> (n - 1 - u) & 1 == 1;
    let mut quadratic = S::zero();
    let mut spin_sum = 0i64;
    for u in 0..n {
        let mut row = S::zero();
        for (v, &weight) in w.row(u).iter().enumerate() {
            if sign(v) {
                row += weight;
            } else {
                row -= weight;
            }
        }
        if sign(u) {
            quadratic += row;
            spin_sum += 1;
        } else {
            quadratic -= row;
            spin_sum -= 1;
        }
    }
    -quadratic / S::from_f64_lossy(2.0) + threshold * S::from_i64(spin_sum).expect("small sum")
}

/// Scans all `2^n_units` bipolar states for a global energy minimizer.
/// Ties resolve to the lexicographically smallest state (-1 before +1).
/// The scan is partitioned across threads; the min-then-lexicographic
/// reduction is associative, so the result never depends on scheduling.
pub fn exhaustive_min_energy<S: Scalar>(
    w: &WeightMatrix<S>,
    threshold: S,
    budget: &OracleBudget,
) -> Result<(NetworkState, S)> {
    let n = w.n_units();
    if n > budget.max_units {
        return Err(Error::OverBudget {
            what: "units",
            required: n,
            cap: budget.max_units,
        });
    }
    if n == 0 || n >= 64 {
        return Err(Error::parameter(format!(
            "state enumeration needs 1..=63 units, got {n}"
        )));
    }
    let total: u64 = 1 << n;
    let (best_energy, best_index) = (0..total)
        .into_par_iter()
        .map(|index| (energy_of_index(w, threshold, index, n), index))
        .reduce(
            || (S::infinity(), u64::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok((state_from_index(best_index, n), best_energy))
}

/// Minimizes open-path cost over all `n!` orders visiting every node once.
/// Ties resolve to the lexicographically smallest permutation.
pub fn exhaustive_best_path<S: Scalar>(
    d: &DistanceMatrix<S>,
    budget: &OracleBudget,
) -> Result<(Vec<NodeId>, S)> {
    let n = d.n();
    if n > budget.max_nodes_permutation {
        return Err(Error::OverBudget {
            what: "nodes",
            required: n,
            cap: budget.max_nodes_permutation,
        });
    }
    if n == 0 {
        return Err(Error::parameter("best-path search needs at least one node"));
    }
    let mut best: Option<(Vec<usize>, S)> = None;
    // Iteration over a sorted base set is lexicographic, so the first
    // strict improvement is also the lexicographically smallest tie.
    for perm in (0..n).permutations(n) {
        let mut cost = S::zero();
        for pair in perm.windows(2) {
            cost += d.get(pair[0], pair[1]);
        }
        match &best {
            Some((_, best_cost)) if !(cost < *best_cost) => {}
            _ => best = Some((perm, cost)),
        }
    }
    let (perm, cost) = best.expect("n >= 1 yields at least one permutation");
    Ok((perm.into_iter().map(NodeId).collect(), cost))
}

/// Path found by the label-setting search.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPath<S> {
    pub nodes: Vec<NodeId>,
    pub cost: S,
}

struct HeapEntry<S> {
    cost: S,
    node: usize,
}

impl<S: Scalar> PartialEq for HeapEntry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.node == other.node
    }
}

impl<S: Scalar> Eq for HeapEntry<S> {}

impl<S: Scalar> Ord for HeapEntry<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse: BinaryHeap is a max-heap, we pop the smallest
        // (cost, node) pair. Costs are finite by construction.
        other
            .cost
            .partial_cmp(&self.cost)
            .expect("link costs are finite")
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl<S: Scalar> PartialOrd for HeapEntry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost path between two constellation nodes under the link
/// costs (Dijkstra). Returns `None` when no path exists.
pub fn shortest_path<S: Scalar>(
    topo: &ConstellationTopology<S>,
    src: NodeId,
    dst: NodeId,
) -> Result<Option<ShortestPath<S>>> {
    let n = topo.n();
    for id in [src, dst] {
        if id.0 >= n {
            return Err(Error::IndexRange {
                what: "node",
                index: id.0,
                bound: n,
            });
        }
    }
    let mut dist: Vec<Option<S>> = vec![None; n];
    let mut pred: Vec<usize> = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src.0] = Some(S::zero());
    heap.push(HeapEntry {
        cost: S::zero(),
        node: src.0,
    });

    while let Some(HeapEntry { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == dst.0 {
            break;
        }
        for next in 0..n {
            if !topo.adjacency().get(node, next) || done[next] {
                continue;
            }
            let candidate = cost + topo.link_costs()[(node, next)];
            // Strict improvement only: the first settled predecessor at a
            // given cost wins, keeping paths deterministic.
            if dist[next].is_none_or(|d| candidate < d) {
                dist[next] = Some(candidate);
                pred[next] = node;
                heap.push(HeapEntry {
                    cost: candidate,
                    node: next,
                });
            }
        }
    }

    let Some(cost) = dist[dst.0] else {
        return Ok(None);
    };
    if !done[dst.0] {
        return Ok(None);
    }
    let mut nodes = vec![NodeId(dst.0)];
    let mut cursor = dst.0;
    while cursor != src.0 {
        cursor = pred[cursor];
        nodes.push(NodeId(cursor));
    }
    nodes.reverse();
    Ok(Some(ShortestPath { nodes, cost }))
}
