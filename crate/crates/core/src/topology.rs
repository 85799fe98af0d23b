//! Node geometries and constellation graphs.
//!
//! Two topology sources feed the solver: planar point sets (Euclidean
//! distances) and plane/slot constellation grids whose inter-plane links
//! can be severed at the seam between the first and last plane.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{BoolMatrix, SquareMatrix};
use crate::scalar::Scalar;

/// Dense node index in `[0, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(index: usize) -> Self {
        NodeId(index)
    }
}

/// Point set in the plane, abstract length units.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarTopology<S> {
    locations: Vec<(S, S)>,
}

impl<S: Scalar> PlanarTopology<S> {
    pub fn new(locations: Vec<(S, S)>) -> Result<Self> {
        if locations.len() < 2 {
            return Err(Error::parameter(format!(
                "planar topology needs at least 2 nodes, got {}",
                locations.len()
            )));
        }
        if locations
            .iter()
            .any(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::parameter("planar coordinates must be finite"));
        }
        Ok(PlanarTopology { locations })
    }

    pub fn n(&self) -> usize {
        self.locations.len()
    }

    pub fn locations(&self) -> &[(S, S)] {
        &self.locations
    }
}

/// Pairwise node distances; zero diagonal, no NaN entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<S> {
    m: SquareMatrix<S>,
}

impl<S: Scalar> DistanceMatrix<S> {
    /// Wraps a matrix after checking the diagonal is zero and no entry is NaN.
    /// Infinite entries are allowed (disconnected pairs in graph sources).
    pub fn new(m: SquareMatrix<S>) -> Result<Self> {
        for i in 0..m.n() {
            if m[(i, i)] != S::zero() {
                return Err(Error::parameter(format!(
                    "distance matrix diagonal must be zero, d[{i}][{i}] = {}",
                    m[(i, i)]
                )));
            }
        }
        if m.data().iter().any(|v| v.is_nan()) {
            return Err(Error::parameter("distance matrix contains NaN"));
        }
        Ok(DistanceMatrix { m })
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.m[(i, j)]
    }
}

/// Euclidean distances between all node pairs. Symmetric, zero diagonal.
pub fn euclidean_distance_matrix<S: Scalar>(topo: &PlanarTopology<S>) -> DistanceMatrix<S> {
    let n = topo.n();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (xi, yi) = topo.locations()[i];
            let (xj, yj) = topo.locations()[j];
            let dx = xi - xj;
            let dy = yi - yj;
            m[(i, j)] = (dx * dx + dy * dy).sqrt();
        }
    }
    DistanceMatrix::new(m).expect("euclidean construction keeps the diagonal zero")
}

/// Plane/slot grid with ring links inside each plane and slot-aligned links
/// between adjacent planes. With the seam enabled, the plane ring is cut
/// open between plane `P-1` and plane `0`.
#[derive(Debug, Clone)]
pub struct ConstellationTopology<S> {
    planes: usize,
    sats_per_plane: usize,
    seam_enabled: bool,
    intra_plane_cost: S,
    inter_plane_cost: S,
    adjacency: BoolMatrix,
    link_costs: SquareMatrix<S>,
}

impl<S: Scalar> ConstellationTopology<S> {
    pub fn planes(&self) -> usize {
        self.planes
    }

    pub fn sats_per_plane(&self) -> usize {
        self.sats_per_plane
    }

    pub fn seam_enabled(&self) -> bool {
        self.seam_enabled
    }

    pub fn intra_plane_cost(&self) -> S {
        self.intra_plane_cost
    }

    pub fn inter_plane_cost(&self) -> S {
        self.inter_plane_cost
    }

    pub fn n(&self) -> usize {
        self.planes * self.sats_per_plane
    }

    /// Node occupying `slot` of `plane`.
    pub fn node_at(&self, plane: usize, slot: usize) -> NodeId {
        debug_assert!(plane < self.planes && slot < self.sats_per_plane);
        NodeId(plane * self.sats_per_plane + slot)
    }

    pub fn adjacency(&self) -> &BoolMatrix {
        &self.adjacency
    }

    pub fn link_costs(&self) -> &SquareMatrix<S> {
        &self.link_costs
    }

    pub fn max_link_cost(&self) -> S {
        self.link_costs.max_abs()
    }
}

/// Builds a constellation graph.
///
/// Links: each plane is a ring over its slots; slot-aligned satellites of
/// adjacent planes are linked, planes forming a ring that the seam cuts
/// open between plane `P-1` and plane `0`. For `P = 2` the seam pair is the
/// only inter-plane pair, so enabling the seam disconnects the planes.
pub fn build_constellation<S: Scalar>(
    planes: usize,
    sats_per_plane: usize,
    seam: bool,
    intra_cost: S,
    inter_cost: S,
) -> Result<ConstellationTopology<S>> {
    if planes < 2 {
        return Err(Error::parameter(format!(
            "constellation needs at least 2 planes, got {planes}"
        )));
    }
    if sats_per_plane < 2 {
        return Err(Error::parameter(format!(
            "constellation needs at least 2 satellites per plane, got {sats_per_plane}"
        )));
    }
    if intra_cost <= S::zero() || !intra_cost.is_finite() {
        return Err(Error::parameter(format!(
            "intra-plane cost must be positive and finite, got {intra_cost}"
        )));
    }
    if inter_cost <= S::zero() || !inter_cost.is_finite() {
        return Err(Error::parameter(format!(
            "inter-plane cost must be positive and finite, got {inter_cost}"
        )));
    }

    let n = planes * sats_per_plane;
    let mut adjacency = BoolMatrix::falses(n);
    let mut link_costs = SquareMatrix::zeros(n);
    let mut link = |a: usize, b: usize, cost: S| {
        if a != b {
            adjacency.set(a, b, true);
            adjacency.set(b, a, true);
            link_costs[(a, b)] = cost;
            link_costs[(b, a)] = cost;
        }
    };

    let node = |plane: usize, slot: usize| plane * sats_per_plane + slot;

    for p in 0..planes {
        for s in 0..sats_per_plane {
            link(node(p, s), node(p, (s + 1) % sats_per_plane), intra_cost);
        }
    }
    for p in 0..planes {
        let q = (p + 1) % planes;
        // The seam severs the plane pair {0, P-1}. For P = 2 that is the
        // only inter-plane pair.
        if seam && p.min(q) == 0 && p.max(q) == planes - 1 {
            continue;
        }
        for s in 0..sats_per_plane {
            link(node(p, s), node(q, s), inter_cost);
        }
    }

    Ok(ConstellationTopology {
        planes,
        sats_per_plane,
        seam_enabled: seam,
        intra_plane_cost: intra_cost,
        inter_plane_cost: inter_cost,
        adjacency,
        link_costs,
    })
}

/// The constellation's connectivity matrix (symmetric, false diagonal).
pub fn connectivity_matrix<S: Scalar>(topo: &ConstellationTopology<S>) -> BoolMatrix {
    topo.adjacency.clone()
}

/// Distance matrix over a constellation: link cost where linked, a large
/// fill cost for unlinked distinct pairs, zero diagonal.
///
/// `disconnected_cost` may be infinite; when finite it must exceed every
/// link cost, otherwise missing links would look cheaper than real ones.
pub fn cost_matrix<S: Scalar>(
    topo: &ConstellationTopology<S>,
    disconnected_cost: S,
) -> Result<DistanceMatrix<S>> {
    if disconnected_cost.is_nan() {
        return Err(Error::parameter("disconnected cost must not be NaN"));
    }
    if disconnected_cost.is_finite() && disconnected_cost <= topo.max_link_cost() {
        return Err(Error::parameter(format!(
            "disconnected cost {} must exceed the maximum link cost {}",
            disconnected_cost,
            topo.max_link_cost()
        )));
    }
    let n = topo.n();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            m[(i, j)] = if topo.adjacency.get(i, j) {
                topo.link_costs[(i, j)]
            } else {
                disconnected_cost
            };
        }
    }
    DistanceMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_coords() -> PlanarTopology<f64> {
        PlanarTopology::new(vec![
            (0.0, 3.0),
            (2.0, 5.0),
            (5.0, 3.0),
            (3.0, 2.0),
            (4.0, 0.0),
            (2.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn euclidean_demo_values() {
        let d = euclidean_distance_matrix(&demo_coords());
        assert_eq!(d.get(0, 0), 0.0);
        assert_eq!(d.get(0, 2), 5.0);
        assert_eq!(d.get(0, 1), 8.0f64.sqrt());
        assert!(d.matrix().is_symmetric());
    }

    #[test]
    fn planar_rejects_degenerate() {
        assert!(PlanarTopology::new(vec![(0.0f64, 0.0)]).is_err());
        assert!(PlanarTopology::new(vec![(0.0f64, 0.0), (f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn constellation_node_and_edge_counts() {
        let topo = build_constellation(3, 4, true, 1.0f64, 1.0).unwrap();
        assert_eq!(topo.n(), 12);
        // 12 intra-plane ring edges + 8 inter-plane edges.
        assert_eq!(topo.adjacency().edge_count(), 20);

        let open = build_constellation(3, 4, false, 1.0f64, 1.0).unwrap();
        assert_eq!(open.adjacency().edge_count(), 24);
    }

    #[test]
    fn seam_removes_only_first_last_plane_links() {
        let seam = build_constellation(3, 4, true, 1.0f64, 1.0).unwrap();
        let open = build_constellation(3, 4, false, 1.0f64, 1.0).unwrap();
        let mut removed = Vec::new();
        for i in 0..seam.n() {
            for j in i + 1..seam.n() {
                if open.adjacency().get(i, j) && !seam.adjacency().get(i, j) {
                    removed.push((i, j));
                }
            }
        }
        assert_eq!(removed.len(), 4);
        for (i, j) in removed {
            let plane_i = i / 4;
            let plane_j = j / 4;
            assert_eq!((plane_i.min(plane_j), plane_i.max(plane_j)), (0, 2));
            assert_eq!(i % 4, j % 4);
        }
    }

    #[test]
    fn two_plane_seam_disconnects_planes() {
        let seam = build_constellation::<f64>(2, 2, true, 1.0, 1.0).unwrap();
        for i in 0..2 {
            for j in 2..4 {
                assert!(!seam.adjacency().get(i, j));
            }
        }
        // Same-plane nodes stay adjacent either way.
        let open = build_constellation::<f64>(2, 2, false, 1.0, 1.0).unwrap();
        for topo in [&seam, &open] {
            assert!(topo.adjacency().get(0, 1));
            assert!(topo.adjacency().get(2, 3));
        }
        assert!(open.adjacency().get(0, 2));
    }

    #[test]
    fn constellation_rejects_bad_parameters() {
        assert!(build_constellation::<f64>(1, 4, false, 1.0, 1.0).is_err());
        assert!(build_constellation::<f64>(3, 1, false, 1.0, 1.0).is_err());
        assert!(build_constellation::<f64>(3, 4, false, 0.0, 1.0).is_err());
        assert!(build_constellation::<f64>(3, 4, false, 1.0, -2.0).is_err());
    }

    #[test]
    fn connectivity_matrix_is_symmetric_false_diagonal() {
        let topo = build_constellation(4, 3, true, 2.0f64, 5.0).unwrap();
        let c = connectivity_matrix(&topo);
        assert!(c.is_symmetric());
        assert!(c.diagonal_clear());
        assert_eq!(c, *topo.adjacency());
    }

    #[test]
    fn cost_matrix_fills_and_guards() {
        let topo = build_constellation(2, 2, false, 1.0f64, 1.0).unwrap();
        let d = cost_matrix(&topo, 10.0).unwrap();
        assert_eq!(d.get(0, 0), 0.0);
        assert_eq!(d.get(0, 1), 1.0); // ring link
        assert_eq!(d.get(0, 3), 10.0); // unlinked pair
        assert!(cost_matrix(&topo, 1.0).is_err());
        assert!(cost_matrix(&topo, 0.5).is_err());
        assert!(cost_matrix(&topo, f64::INFINITY).is_ok());
    }

    #[test]
    fn link_costs_positive_exactly_on_links() {
        let topo = build_constellation(3, 5, true, 0.5f64, 2.5).unwrap();
        for i in 0..topo.n() {
            for j in 0..topo.n() {
                if topo.adjacency().get(i, j) {
                    assert!(topo.link_costs()[(i, j)] > 0.0);
                } else {
                    assert_eq!(topo.link_costs()[(i, j)], 0.0);
                }
            }
        }
    }
}
