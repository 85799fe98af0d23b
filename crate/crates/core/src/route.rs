//! Decoding activation states into hop-ordered routes.

use crate::error::{Error, Result};
use crate::hopfield::{unit_index, NetworkState, SolverConfig};
use crate::scalar::Scalar;
use crate::topology::{DistanceMatrix, NodeId};

/// Hop-ordered node sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub hops: Vec<NodeId>,
}

impl Route {
    pub fn new(hops: Vec<NodeId>) -> Self {
        Route { hops }
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }
}

/// A hop that does not carry exactly one active node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopViolation {
    pub hop: usize,
    pub active_count: usize,
}

/// Constraint diagnosis for a decoded state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    /// Hops with zero or multiple active nodes.
    pub hop_violations: Vec<HopViolation>,
    /// Nodes active at more than one hop, ascending.
    pub repeated_nodes: Vec<NodeId>,
}

impl ValidityReport {
    fn new(hop_violations: Vec<HopViolation>, repeated_nodes: Vec<NodeId>) -> Self {
        ValidityReport {
            valid: hop_violations.is_empty() && repeated_nodes.is_empty(),
            hop_violations,
            repeated_nodes,
        }
    }
}

/// Collects the active node of every hop. Extraction never fails: hops
/// with zero or multiple active nodes contribute nothing to the route and
/// are reported, as is every node active at more than one hop.
pub fn extract_route<S: Scalar>(
    state: &NetworkState,
    cfg: &SolverConfig<S>,
) -> (Route, ValidityReport) {
    assert_eq!(state.len(), cfg.n_units(), "state/config dimension mismatch");
    let mut hops = Vec::new();
    let mut hop_violations = Vec::new();
    let mut hops_per_node = vec![0usize; cfg.n_nodes];
    for hop in 0..cfg.n_hops {
        let active: Vec<usize> = (0..cfg.n_nodes)
            .filter(|&node| {
                let u = unit_index(NodeId(node), hop, cfg.n_nodes, cfg.n_hops)
                    .expect("scan stays in range");
                state.is_on(u)
            })
            .collect();
        for &node in &active {
            hops_per_node[node] += 1;
        }
        if active.len() == 1 {
            hops.push(NodeId(active[0]));
        } else {
            hop_violations.push(HopViolation {
                hop,
                active_count: active.len(),
            });
        }
    }
    let repeated_nodes = hops_per_node
        .iter()
        .enumerate()
        .filter(|&(_, &count)| count > 1)
        .map(|(node, _)| NodeId(node))
        .collect();
    (Route::new(hops), ValidityReport::new(hop_violations, repeated_nodes))
}

/// Sum of distances along consecutive route hops; zero for routes with at
/// most one hop. Rejects repeated nodes and nodes outside the matrix.
pub fn route_cost<S: Scalar>(route: &Route, d: &DistanceMatrix<S>) -> Result<S> {
    let mut seen = vec![false; d.n()];
    for &NodeId(node) in &route.hops {
        if node >= d.n() {
            return Err(Error::IndexRange {
                what: "node",
                index: node,
                bound: d.n(),
            });
        }
        if seen[node] {
            return Err(Error::InvalidRoute(format!("node {node} visited twice")));
        }
        seen[node] = true;
    }
    let mut cost = S::zero();
    for pair in route.hops.windows(2) {
        cost += d.get(pair[0].0, pair[1].0);
    }
    Ok(cost)
}

/// Node×hop view of a flat state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationGrid {
    pub n_nodes: usize,
    pub n_hops: usize,
    cells: Vec<bool>,
}

impl ActivationGrid {
    pub fn get(&self, node: usize, hop: usize) -> bool {
        self.cells[node * self.n_hops + hop]
    }

    /// Flattens back to the unit ordering; inverse of [`grid_view`].
    pub fn flatten(&self) -> NetworkState {
        let mut state = NetworkState::all_off(self.n_nodes * self.n_hops);
        for node in 0..self.n_nodes {
            for hop in 0..self.n_hops {
                if self.get(node, hop) {
                    state.set_spin(hop * self.n_nodes + node, 1);
                }
            }
        }
        state
    }
}

/// Reshapes a flat state into the node×hop grid (units of one hop form a
/// column).
pub fn grid_view<S: Scalar>(state: &NetworkState, cfg: &SolverConfig<S>) -> ActivationGrid {
    assert_eq!(state.len(), cfg.n_units(), "state/config dimension mismatch");
    let mut cells = vec![false; cfg.n_units()];
    for node in 0..cfg.n_nodes {
        for hop in 0..cfg.n_hops {
            let u = unit_index(NodeId(node), hop, cfg.n_nodes, cfg.n_hops)
                .expect("scan stays in range");
            cells[node * cfg.n_hops + hop] = state.is_on(u);
        }
    }
    ActivationGrid {
        n_nodes: cfg.n_nodes,
        n_hops: cfg.n_hops,
        cells,
    }
}

/// State with `+1` exactly at `(route[h], h)`; the left inverse of
/// [`extract_route`] for valid routes.
pub fn encode_route<S: Scalar>(route: &Route, cfg: &SolverConfig<S>) -> Result<NetworkState> {
    if route.len() > cfg.n_hops {
        return Err(Error::InvalidRoute(format!(
            "route length {} exceeds {} hops",
            route.len(),
            cfg.n_hops
        )));
    }
    let mut state = NetworkState::all_off(cfg.n_units());
    for (hop, &node) in route.hops.iter().enumerate() {
        let u = unit_index(node, hop, cfg.n_nodes, cfg.n_hops)?;
        state.set_spin(u, 1);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{euclidean_distance_matrix, PlanarTopology};

    fn cfg6() -> SolverConfig<f64> {
        SolverConfig::for_nodes(6)
    }

    fn demo_distances() -> DistanceMatrix<f64> {
        let topo = PlanarTopology::new(vec![
            (0.0, 3.0),
            (2.0, 5.0),
            (5.0, 3.0),
            (3.0, 2.0),
            (4.0, 0.0),
            (2.0, 1.0),
        ])
        .unwrap();
        euclidean_distance_matrix(&topo)
    }

    #[test]
    fn diagonal_assignment_decodes_identity_route() {
        let cfg = cfg6();
        let route = Route::new((0..6).map(NodeId).collect());
        let state = encode_route(&route, &cfg).unwrap();
        let (decoded, report) = extract_route(&state, &cfg);
        assert_eq!(decoded, route);
        assert!(report.valid);
        assert!(report.hop_violations.is_empty());
        assert!(report.repeated_nodes.is_empty());
    }

    #[test]
    fn all_off_state_is_all_empty_hops() {
        let cfg = cfg6();
        let state = NetworkState::all_off(cfg.n_units());
        let (route, report) = extract_route(&state, &cfg);
        assert!(route.is_empty());
        assert!(!report.valid);
        assert_eq!(report.hop_violations.len(), 6);
        assert!(report
            .hop_violations
            .iter()
            .all(|v| v.active_count == 0));
    }

    #[test]
    fn double_activation_at_one_hop_is_flagged() {
        let cfg = cfg6();
        let mut state = NetworkState::all_off(cfg.n_units());
        state.set_spin(cfg.unit(NodeId(1), 0).unwrap(), 1);
        state.set_spin(cfg.unit(NodeId(4), 0).unwrap(), 1);
        let (route, report) = extract_route(&state, &cfg);
        assert!(!report.valid);
        assert!(report
            .hop_violations
            .contains(&HopViolation { hop: 0, active_count: 2 }));
        // Hop 0 contributes nothing to the route.
        assert!(route.is_empty());
    }

    #[test]
    fn repeated_node_across_hops_is_flagged() {
        let cfg = cfg6();
        let mut state = NetworkState::all_off(cfg.n_units());
        state.set_spin(cfg.unit(NodeId(2), 0).unwrap(), 1);
        state.set_spin(cfg.unit(NodeId(2), 1).unwrap(), 1);
        let (_, report) = extract_route(&state, &cfg);
        assert!(!report.valid);
        assert_eq!(report.repeated_nodes, vec![NodeId(2)]);
    }

    #[test]
    fn route_cost_examples() {
        let d = demo_distances();
        assert_eq!(route_cost(&Route::new(vec![NodeId(0)]), &d).unwrap(), 0.0);
        assert_eq!(
            route_cost(&Route::new(vec![NodeId(0), NodeId(2)]), &d).unwrap(),
            5.0
        );
        let r = Route::new(vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(route_cost(&r, &d).unwrap(), d.get(0, 1) + d.get(1, 2));
    }

    #[test]
    fn route_cost_rejects_bad_routes() {
        let d = demo_distances();
        assert!(route_cost(&Route::new(vec![NodeId(0), NodeId(0)]), &d).is_err());
        assert!(route_cost(&Route::new(vec![NodeId(9)]), &d).is_err());
    }

    #[test]
    fn reversed_route_costs_match_on_symmetric_distances() {
        let d = demo_distances();
        let r = Route::new(vec![NodeId(0), NodeId(3), NodeId(5), NodeId(1)]);
        let mut rev = r.hops.clone();
        rev.reverse();
        assert_eq!(
            route_cost(&r, &d).unwrap(),
            route_cost(&Route::new(rev), &d).unwrap()
        );
    }

    #[test]
    fn grid_view_round_trips() {
        let mut cfg = SolverConfig::<f64>::for_nodes(3);
        cfg.n_hops = 4;
        let mut state = NetworkState::all_off(cfg.n_units());
        state.set_spin(cfg.unit(NodeId(2), 1).unwrap(), 1);
        let grid = grid_view(&state, &cfg);
        assert!(grid.get(2, 1));
        let set: usize = (0..3)
            .flat_map(|n| (0..4).map(move |h| (n, h)))
            .filter(|&(n, h)| grid.get(n, h))
            .count();
        assert_eq!(set, 1);
        assert_eq!(grid.flatten(), state);
    }

    #[test]
    fn all_off_grid_is_all_false() {
        let cfg = cfg6();
        let grid = grid_view(&NetworkState::all_off(cfg.n_units()), &cfg);
        for node in 0..6 {
            for hop in 0..6 {
                assert!(!grid.get(node, hop));
            }
        }
    }

    #[test]
    fn partial_route_extractable_but_invalid() {
        let cfg = cfg6();
        let route = Route::new(vec![NodeId(3), NodeId(0)]);
        let state = encode_route(&route, &cfg).unwrap();
        let (decoded, report) = extract_route(&state, &cfg);
        assert_eq!(decoded, route);
        assert!(!report.valid);
        assert_eq!(report.hop_violations.len(), 4); // hops 2..6 empty
    }

    #[test]
    fn encode_rejects_oversized_route() {
        let cfg = SolverConfig::<f64>::for_nodes(2);
        let route = Route::new(vec![NodeId(0), NodeId(1), NodeId(0)]);
        assert!(encode_route(&route, &cfg).is_err());
    }
}
