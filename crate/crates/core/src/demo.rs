//! The bundled 6-node reference scenario: fixed planar coordinates, a
//! fixed throughput table, and the baseline solver parameters. The
//! `demo-paper` CLI command runs exactly this instance.

use std::path::Path;

use crate::hopfield::SolverConfig;
use crate::io;
use crate::scalar::Scalar;
use crate::topology::{euclidean_distance_matrix, DistanceMatrix, PlanarTopology};
use crate::traffic::{effective_distances, DistanceMode, EffectiveDistanceMatrix, ThroughputMatrix};

/// The fixed throughput table, as shipped in `data/paper_throughput.csv`.
pub const THROUGHPUT_CSV: &str = include_str!("../data/paper_throughput.csv");

pub const N_NODES: usize = 6;

/// Default seed anchoring the demo's golden artifacts.
pub const DEFAULT_SEED: u64 = 42;

const COORDS: [(f64, f64); N_NODES] = [
    (0.0, 3.0),
    (2.0, 5.0),
    (5.0, 3.0),
    (3.0, 2.0),
    (4.0, 0.0),
    (2.0, 1.0),
];

/// The six demo node locations.
pub fn node_locations<S: Scalar>() -> PlanarTopology<S> {
    let locations = COORDS
        .iter()
        .map(|&(x, y)| (S::from_f64_lossy(x), S::from_f64_lossy(y)))
        .collect();
    PlanarTopology::new(locations).expect("demo coordinates are valid")
}

/// Euclidean distances between the demo nodes.
pub fn base_distances<S: Scalar>() -> DistanceMatrix<S> {
    euclidean_distance_matrix(&node_locations())
}

/// The fixed throughput table.
pub fn throughput<S: Scalar>() -> ThroughputMatrix<S> {
    io::parse_throughput_csv(THROUGHPUT_CSV, Path::new("paper_throughput.csv"))
        .expect("bundled table parses")
}

/// Throughput-scaled, normalized distances in the given mode.
pub fn effective<S: Scalar>(mode: DistanceMode) -> EffectiveDistanceMatrix<S> {
    effective_distances(&base_distances(), &throughput(), mode, false)
        .expect("demo matrices are well-formed")
}

/// Demo solver parameters: 6 nodes, 6 hops, threshold 31, inhibitory
/// weight -3, 36 sweeps, one restart, seed 42.
pub fn solver_config<S: Scalar>() -> SolverConfig<S> {
    let mut cfg = SolverConfig::for_nodes(N_NODES);
    cfg.seed = DEFAULT_SEED;
    cfg
}
