//! Threshold-network solver over the node×hop unit grid.
//!
//! Constraints are encoded once into a symmetric weight matrix with zero
//! diagonal; asynchronous single-unit updates under a strict linear
//! threshold then descend the quadratic energy
//! `E(s) = -1/2 s'Ws + theta * sum(s)` until the state freezes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;
use crate::topology::NodeId;
use crate::traffic::{EffectiveDistanceMatrix, RngStream};

/// Resting value of a unit.
pub const OFF_STATE: i8 = -1;

/// Solver parameters for an `n_nodes × n_hops` unit grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<S> {
    pub n_nodes: usize,
    pub n_hops: usize,
    /// Net input must strictly exceed this for a unit to switch on.
    pub threshold: S,
    /// Negative weight enforcing the one-node-per-hop constraints.
    pub inhib_weight: S,
    pub sweeps: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Stop sweeping once a full sweep makes no flips.
    pub early_stop: bool,
    /// Retain the state after every sweep in the result.
    pub record_states: bool,
    /// Run restarts on the thread pool; the outcome is identical either way.
    pub parallel_restarts: bool,
}

impl<S: Scalar> SolverConfig<S> {
    /// Baseline parameters: as many hops as nodes, threshold 31,
    /// inhibitory weight -3, 36 sweeps, one restart.
    pub fn for_nodes(n_nodes: usize) -> Self {
        SolverConfig {
            n_nodes,
            n_hops: n_nodes,
            threshold: S::from_f64_lossy(31.0),
            inhib_weight: S::from_f64_lossy(-3.0),
            sweeps: 36,
            restarts: 1,
            seed: 42,
            early_stop: false,
            record_states: false,
            parallel_restarts: false,
        }
    }

    pub fn n_units(&self) -> usize {
        self.n_nodes * self.n_hops
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::parameter(format!(
                "need at least 2 nodes, got {}",
                self.n_nodes
            )));
        }
        if self.n_hops < 1 {
            return Err(Error::parameter("need at least 1 hop"));
        }
        if self.sweeps < 1 {
            return Err(Error::parameter("need at least 1 sweep"));
        }
        if self.restarts < 1 {
            return Err(Error::parameter("need at least 1 restart"));
        }
        if !self.threshold.is_finite() {
            return Err(Error::parameter("threshold must be finite"));
        }
        if !(self.inhib_weight < S::zero()) || !self.inhib_weight.is_finite() {
            return Err(Error::parameter(format!(
                "inhibitory weight must be negative and finite, got {}",
                self.inhib_weight
            )));
        }
        Ok(())
    }

    /// Grid unit for `(node, hop)`.
    pub fn unit(&self, node: NodeId, hop: usize) -> Result<usize> {
        unit_index(node, hop, self.n_nodes, self.n_hops)
    }
}

/// Flat unit index of `(node, hop)`: `hop * n_nodes + node`. Units within
/// one hop are contiguous, so reshaping the flat state by columns of
/// length `n_nodes` recovers the node×hop grid.
pub fn unit_index(node: NodeId, hop: usize, n_nodes: usize, n_hops: usize) -> Result<usize> {
    if node.0 >= n_nodes {
        return Err(Error::IndexRange {
            what: "node",
            index: node.0,
            bound: n_nodes,
        });
    }
    if hop >= n_hops {
        return Err(Error::IndexRange {
            what: "hop",
            index: hop,
            bound: n_hops,
        });
    }
    Ok(hop * n_nodes + node.0)
}

/// Symmetric connection weights over the unit grid; zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<S> {
    m: SquareMatrix<S>,
}

impl<S: Scalar> WeightMatrix<S> {
    pub fn zeros(n_units: usize) -> Self {
        WeightMatrix {
            m: SquareMatrix::zeros(n_units),
        }
    }

    pub fn n_units(&self) -> usize {
        self.m.n()
    }

    pub fn get(&self, u: usize, v: usize) -> S {
        self.m[(u, v)]
    }

    pub fn row(&self, u: usize) -> &[S] {
        self.m.row(u)
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.m
    }

    /// Sets `w[u1][u2]` and its symmetric twin. The diagonal is untouchable.
    pub fn set_symmetric(&mut self, u1: usize, u2: usize, value: S) -> Result<()> {
        let n = self.m.n();
        for u in [u1, u2] {
            if u >= n {
                return Err(Error::IndexRange {
                    what: "unit",
                    index: u,
                    bound: n,
                });
            }
        }
        if u1 == u2 {
            return Err(Error::parameter(format!(
                "refusing to set diagonal weight at unit {u1}"
            )));
        }
        self.m[(u1, u2)] = value;
        self.m[(u2, u1)] = value;
        Ok(())
    }
}

/// Builds the constraint-encoded weight matrix.
///
/// Unit pairs fall into exactly three classes:
/// same node at different hops and different nodes at the same hop get
/// `inhib_weight`; different nodes at hops exactly one apart get the
/// negated effective distance; everything else (including hop gaps of two
/// or more and the whole diagonal) stays zero.
///
/// The scan runs node-major over ordered pairs and writes both symmetric
/// entries each time, so when the effective matrix is asymmetric the
/// adjacent-hop class resolves to `-d[max(node1,node2)][min(node1,node2)]`
/// (the later write wins).
pub fn build_weights<S: Scalar>(
    effective: &EffectiveDistanceMatrix<S>,
    cfg: &SolverConfig<S>,
) -> Result<WeightMatrix<S>> {
    cfg.validate()?;
    if effective.n() != cfg.n_nodes {
        return Err(Error::Dimension {
            expected: cfg.n_nodes,
            found: effective.n(),
        });
    }
    let mut w = WeightMatrix::zeros(cfg.n_units());
    for node1 in 0..cfg.n_nodes {
        for hop1 in 0..cfg.n_hops {
            for node2 in 0..cfg.n_nodes {
                for hop2 in 0..cfg.n_hops {
                    let value = if node1 == node2 && hop1 != hop2 {
                        // One hop per node.
                        Some(cfg.inhib_weight)
                    } else if hop1 == hop2 && node1 != node2 {
                        // One node per hop.
                        Some(cfg.inhib_weight)
                    } else if node1 != node2 && hop1.abs_diff(hop2) == 1 {
                        // Adjacent hops prefer short links.
                        Some(-effective.get(node1, node2))
                    } else {
                        None
                    };
                    if let Some(value) = value {
                        let u1 = unit_index(NodeId(node1), hop1, cfg.n_nodes, cfg.n_hops)?;
                        let u2 = unit_index(NodeId(node2), hop2, cfg.n_nodes, cfg.n_hops)?;
                        w.set_symmetric(u1, u2, value)?;
                    }
                }
            }
        }
    }
    Ok(w)
}

/// Bipolar activation vector; every entry is -1 or +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkState {
    spins: Vec<i8>,
}

impl NetworkState {
    /// All units at the off value.
    pub fn all_off(n_units: usize) -> Self {
        NetworkState {
            spins: vec![OFF_STATE; n_units],
        }
    }

    pub fn from_spins(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::parameter("state entries must be -1 or +1"));
        }
        Ok(NetworkState { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spin(&self, u: usize) -> i8 {
        self.spins[u]
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn set_spin(&mut self, u: usize, spin: i8) {
        debug_assert!(spin == 1 || spin == -1);
        self.spins[u] = spin;
    }

    pub fn is_on(&self, u: usize) -> bool {
        self.spins[u] == 1
    }

    /// Sum of spins as a signed count.
    pub fn spin_sum(&self) -> i64 {
        self.spins.iter().map(|&s| s as i64).sum()
    }
}

/// All units off. The dynamics always start here.
pub fn init_state<S: Scalar>(cfg: &SolverConfig<S>) -> NetworkState {
    NetworkState::all_off(cfg.n_units())
}

/// Weighted sum of the current activations feeding unit `u`.
pub fn net_input<S: Scalar>(w: &WeightMatrix<S>, state: &NetworkState, u: usize) -> S {
    let mut acc = S::zero();
    for (v, &weight) in w.row(u).iter().enumerate() {
        if state.spin(v) > 0 {
            acc += weight;
        } else {
            acc -= weight;
        }
    }
    acc
}

/// One asynchronous sweep: every unit visited exactly once in a fresh
/// random order; each visit recomputes the net input from the current
/// (partially updated) state and applies the strict threshold rule.
/// Returns the number of units whose value changed.
pub fn async_sweep<S: Scalar>(
    state: &mut NetworkState,
    w: &WeightMatrix<S>,
    threshold: S,
    rng: &mut RngStream,
) -> usize {
    async_sweep_observed(state, w, threshold, rng, |_, _| {})
}

/// [`async_sweep`] with a per-visit observer, called after each unit is
/// updated. Used to audit per-update energy descent.
pub fn async_sweep_observed<S: Scalar>(
    state: &mut NetworkState,
    w: &WeightMatrix<S>,
    threshold: S,
    rng: &mut RngStream,
    mut observe: impl FnMut(usize, &NetworkState),
) -> usize {
    assert_eq!(state.len(), w.n_units(), "state/weight dimension mismatch");
    let order = rng.permutation(state.len());
    let mut flips = 0;
    for u in order {
        let old = state.spin(u);
        let new = if net_input(w, state, u) > threshold {
            1
        } else {
            OFF_STATE
        };
        if new != old {
            flips += 1;
        }
        state.set_spin(u, new);
        observe(u, state);
    }
    flips
}

/// Quadratic energy `E(s) = -1/2 s'Ws + theta * sum(s)`.
pub fn lyapunov_energy<S: Scalar>(state: &NetworkState, w: &WeightMatrix<S>, threshold: S) -> S {
    assert_eq!(state.len(), w.n_units(), "state/weight dimension mismatch");
    let mut quadratic = S::zero();
    for u in 0..state.len() {
        let row_sum = net_input(w, state, u);
        if state.spin(u) > 0 {
            quadratic += row_sum;
        } else {
            quadratic -= row_sum;
        }
    }
    let two = S::from_f64_lossy(2.0);
    let spin_sum = S::from_i64(state.spin_sum()).expect("spin sum fits any scalar");
    -quadratic / two + threshold * spin_sum
}

/// Outcome of one solve: per-sweep energy trace and the best state seen.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult<S> {
    pub energy_trace: Vec<S>,
    pub flips_per_sweep: Vec<usize>,
    /// Per-sweep states, kept only when the config asks for them.
    pub states_per_sweep: Option<Vec<NetworkState>>,
    pub best_sweep_index: usize,
    pub best_state: NetworkState,
    pub best_energy: S,
    /// True when the final executed sweep made no flips.
    pub converged: bool,
}

fn solve_stream<S: Scalar>(
    cfg: &SolverConfig<S>,
    w: &WeightMatrix<S>,
    label: u64,
) -> SolverResult<S> {
    let mut rng = RngStream::substream(cfg.seed, label);
    let mut state = init_state(cfg);
    let mut energy_trace = Vec::with_capacity(cfg.sweeps);
    let mut flips_per_sweep = Vec::with_capacity(cfg.sweeps);
    let mut states_per_sweep = cfg.record_states.then(Vec::new);
    let mut best_energy = S::infinity();
    let mut best_sweep_index = 0;
    let mut best_state = state.clone();

    for sweep in 0..cfg.sweeps {
        let flips = async_sweep(&mut state, w, cfg.threshold, &mut rng);
        let energy = lyapunov_energy(&state, w, cfg.threshold);
        energy_trace.push(energy);
        flips_per_sweep.push(flips);
        if let Some(states) = states_per_sweep.as_mut() {
            states.push(state.clone());
        }
        // Strict comparison keeps the earliest sweep on ties.
        if energy < best_energy {
            best_energy = energy;
            best_sweep_index = sweep;
            best_state = state.clone();
        }
        if cfg.early_stop && flips == 0 {
            break;
        }
    }

    let converged = *flips_per_sweep.last().expect("at least one sweep") == 0;
    SolverResult {
        energy_trace,
        flips_per_sweep,
        states_per_sweep,
        best_sweep_index,
        best_state,
        best_energy,
        converged,
    }
}

/// Runs one solve from the all-off state using sub-stream `(seed, 0)`.
pub fn run_solver<S: Scalar>(
    cfg: &SolverConfig<S>,
    effective: &EffectiveDistanceMatrix<S>,
) -> Result<SolverResult<S>> {
    let w = build_weights(effective, cfg)?;
    Ok(solve_stream(cfg, &w, 0))
}

/// Runs `cfg.restarts` independent solves on sub-streams
/// `(seed, restart_index)` and keeps the lowest best energy, ties broken
/// by the lowest restart index. Serial and parallel execution agree.
pub fn run_restarts<S: Scalar>(
    cfg: &SolverConfig<S>,
    effective: &EffectiveDistanceMatrix<S>,
) -> Result<SolverResult<S>> {
    let w = build_weights(effective, cfg)?;
    let labels: Vec<u64> = (0..cfg.restarts as u64).collect();
    let results: Vec<SolverResult<S>> = if cfg.parallel_restarts {
        labels
            .par_iter()
            .map(|&label| solve_stream(cfg, &w, label))
            .collect()
    } else {
        labels
            .iter()
            .map(|&label| solve_stream(cfg, &w, label))
            .collect()
    };
    Ok(results
        .into_iter()
        .reduce(|best, candidate| {
            if candidate.best_energy < best.best_energy {
                candidate
            } else {
                best
            }
        })
        .expect("restarts >= 1"))
}
