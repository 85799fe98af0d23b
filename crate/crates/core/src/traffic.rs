//! Seedable randomness and throughput-perturbed effective distances.
//!
//! All randomness flows through [`RngStream`], a fixed 64-bit PRNG family
//! (ChaCha8) with explicitly pinned Gaussian and shuffle algorithms, so a
//! given `(seed, label)` reproduces the same values on every platform.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;
use crate::topology::DistanceMatrix;

/// Deterministic random stream. Identical `(seed, label)` pairs produce
/// identical sequences; distinct labels give independent streams.
///
/// Single-owner: a stream is not shareable across threads. Parallel work
/// takes one sub-stream per task instead.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    label: u64,
    rng: ChaCha8Rng,
    spare_gaussian: Option<f64>,
}

impl RngStream {
    /// Stream with label 0.
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent sub-stream identified by `(seed, label)`.
    pub fn substream(seed: u64, label: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(label);
        RngStream {
            seed,
            label,
            rng,
            spare_gaussian: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform double in (0, 1], 53-bit resolution. The open lower end
    /// keeps `ln` finite in the Gaussian transform.
    fn unit_open01(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw via the Box-Muller transform. Draws come in
    /// pairs; the second of each pair is cached.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        let u1 = self.unit_open01();
        let u2 = self.unit_open01();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Uniform integer in `[0, bound)` by rejection sampling.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        // Largest multiple of `bound` representable in 64 bits; draws at or
        // above it would bias the modulo and are rejected.
        let usable = ((1u128 << 64) / bound as u128) * bound as u128;
        loop {
            let r = self.next_u64();
            if (r as u128) < usable {
                return r % bound;
            }
        }
    }

    /// Uniform permutation of `[0, n)` by Fisher-Yates.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        order
    }
}

/// Uniform permutation of `[0, n)`; deterministic per stream state.
pub fn random_permutation(rng: &mut RngStream, n: usize) -> Vec<usize> {
    rng.permutation(n)
}

/// Per-pair channel occupancy fractions. Not required to be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputMatrix<S> {
    m: SquareMatrix<S>,
}

impl<S: Scalar> ThroughputMatrix<S> {
    pub fn new(m: SquareMatrix<S>) -> Result<Self> {
        if !m.all_finite() {
            return Err(Error::parameter("throughput entries must be finite"));
        }
        Ok(ThroughputMatrix { m })
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

    /// All-ones matrix; the identity for elementwise perturbation.
    pub fn ones(n: usize) -> Self {
        ThroughputMatrix {
            m: SquareMatrix::zeros(n).map(|_| S::one()),
        }
    }
}

/// n×n matrix of independent Gaussian draws, row-major fill order.
pub fn sample_gaussian_matrix<S: Scalar>(
    rng: &mut RngStream,
    n: usize,
    mean: S,
    std: S,
) -> Result<ThroughputMatrix<S>> {
    if n < 1 {
        return Err(Error::parameter("matrix dimension must be at least 1"));
    }
    if std < S::zero() || !std.is_finite() || !mean.is_finite() {
        return Err(Error::parameter(format!(
            "gaussian parameters must be finite with std >= 0, got mean {mean}, std {std}"
        )));
    }
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let z = S::from_f64_lossy(rng.next_gaussian());
            m[(i, j)] = mean + std * z;
        }
    }
    ThroughputMatrix::new(m)
}

/// How base distances are combined with throughput.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// Row-by-column matrix product of distances and throughput.
    CodeFaithful,
    /// Entrywise product; each link scaled by its own occupancy.
    Elementwise,
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMode::CodeFaithful => "code-faithful",
            DistanceMode::Elementwise => "elementwise",
        })
    }
}

impl FromStr for DistanceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "code-faithful" => Ok(DistanceMode::CodeFaithful),
            "elementwise" => Ok(DistanceMode::Elementwise),
            other => Err(Error::parameter(format!(
                "unknown distance mode `{other}` (expected `code-faithful` or `elementwise`)"
            ))),
        }
    }
}

/// Throughput-perturbed distances, normalized so the largest absolute
/// entry is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveDistanceMatrix<S> {
    m: SquareMatrix<S>,
    mode: DistanceMode,
}

impl<S: Scalar> EffectiveDistanceMatrix<S> {
    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn mode(&self) -> DistanceMode {
        self.mode
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.m[(i, j)]
    }

    /// Wraps an already-normalized matrix (peak absolute entry 1).
    pub fn from_normalized(m: SquareMatrix<S>, mode: DistanceMode) -> Result<Self> {
        if !m.all_finite() {
            return Err(Error::parameter("effective distances must be finite"));
        }
        if m.max_abs() != S::one() {
            return Err(Error::parameter(format!(
                "matrix is not normalized: peak absolute entry {}",
                m.max_abs()
            )));
        }
        Ok(EffectiveDistanceMatrix { m, mode })
    }
}

/// Combines distances and throughput per `mode`, optionally clamps
/// negative entries to zero, then divides by the peak absolute entry.
///
/// The product may carry negative entries (Gaussian throughput admits
/// negative draws); normalization uses absolute value, so the output
/// range is [-1, 1] with at least one entry of magnitude exactly 1.
pub fn effective_distances<S: Scalar>(
    d: &DistanceMatrix<S>,
    t: &ThroughputMatrix<S>,
    mode: DistanceMode,
    clamp_negative: bool,
) -> Result<EffectiveDistanceMatrix<S>> {
    if d.n() != t.n() {
        return Err(Error::Dimension {
            expected: d.n(),
            found: t.n(),
        });
    }
    if !d.matrix().all_finite() {
        return Err(Error::parameter(
            "effective distances need a finite base matrix",
        ));
    }
    let product = match mode {
        DistanceMode::CodeFaithful => d.matrix().matmul(t.matrix())?,
        DistanceMode::Elementwise => d.matrix().hadamard(t.matrix())?,
    };
    let product = if clamp_negative {
        product.map(|v| if v < S::zero() { S::zero() } else { v })
    } else {
        product
    };
    let peak = product.max_abs();
    if peak == S::zero() {
        return Err(Error::parameter(
            "throughput-scaled distances are all zero; normalization undefined",
        ));
    }
    Ok(EffectiveDistanceMatrix {
        m: product.map(|v| v / peak),
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{euclidean_distance_matrix, PlanarTopology};

    fn line_topology() -> PlanarTopology<f64> {
        PlanarTopology::new(vec![(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]).unwrap()
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::new(7);
        let mut b = RngStream::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn labels_give_distinct_streams() {
        let mut a = RngStream::substream(7, 0);
        let mut b = RngStream::substream(7, 1);
        let va: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let vb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(va, vb);
    }

    #[test]
    fn zero_std_is_degenerate() {
        let mut rng = RngStream::new(1);
        let t = sample_gaussian_matrix(&mut rng, 4, 0.5f64, 0.0).unwrap();
        assert!(t.matrix().data().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn gaussian_matrix_rejects_negative_std() {
        let mut rng = RngStream::new(1);
        assert!(sample_gaussian_matrix(&mut rng, 4, 0.5f64, -0.1).is_err());
        assert!(sample_gaussian_matrix(&mut rng, 0, 0.5f64, 0.1).is_err());
    }

    #[test]
    fn gaussian_matrix_deterministic_per_seed() {
        let mut a = RngStream::new(99);
        let mut b = RngStream::new(99);
        let ta = sample_gaussian_matrix(&mut a, 6, 0.5f64, 0.25).unwrap();
        let tb = sample_gaussian_matrix(&mut b, 6, 0.5f64, 0.25).unwrap();
        assert_eq!(ta, tb);
    }

    #[test]
    fn gaussian_sample_statistics() {
        let mut rng = RngStream::new(2024);
        let n = 10_000;
        let draws: Vec<f64> = (0..n).map(|_| 0.5 + 0.25 * rng.next_gaussian()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        assert!((0.45..=0.55).contains(&mean), "sample mean {mean}");
        assert!((0.20..=0.30).contains(&std), "sample std {std}");
    }

    #[test]
    fn permutation_trivial_and_deterministic() {
        let mut rng = RngStream::new(5);
        assert_eq!(rng.permutation(1), vec![0]);
        let mut a = RngStream::new(5);
        let mut b = RngStream::new(5);
        assert_eq!(a.permutation(36), b.permutation(36));
    }

    #[test]
    fn permutation_is_a_permutation() {
        let mut rng = RngStream::new(11);
        for n in [2usize, 5, 17] {
            let mut p = random_permutation(&mut rng, n);
            p.sort_unstable();
            assert_eq!(p, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn permutation_frequencies_uniform() {
        let mut rng = RngStream::new(12345);
        let mut counts = std::collections::HashMap::new();
        let draws = 60_000;
        for _ in 0..draws {
            *counts.entry(rng.permutation(3)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (perm, count) in counts {
            let freq = count as f64 / draws as f64;
            assert!(
                (freq - 1.0 / 6.0).abs() <= 0.01,
                "permutation {perm:?} frequency {freq}"
            );
        }
    }

    #[test]
    fn elementwise_identity_throughput_normalizes() {
        let d = euclidean_distance_matrix(&line_topology());
        let t = ThroughputMatrix::ones(3);
        let eff = effective_distances(&d, &t, DistanceMode::Elementwise, false).unwrap();
        assert_eq!(eff.matrix().max_abs(), 1.0);
        // Peak base distance is 3; every entry is d/3.
        assert_eq!(eff.get(0, 1), 1.0 / 3.0);
        assert_eq!(eff.get(0, 2), 1.0);
    }

    #[test]
    fn normalization_idempotent_elementwise() {
        let d = euclidean_distance_matrix(&line_topology());
        let t = ThroughputMatrix::ones(3);
        let eff = effective_distances(&d, &t, DistanceMode::Elementwise, false).unwrap();
        let again = effective_distances(
            &DistanceMatrix::new(eff.matrix().clone()).unwrap(),
            &t,
            DistanceMode::Elementwise,
            false,
        )
        .unwrap();
        assert_eq!(again.matrix(), eff.matrix());
    }

    #[test]
    fn all_zero_product_rejected() {
        let d = euclidean_distance_matrix(&line_topology());
        let zeros = ThroughputMatrix::new(SquareMatrix::zeros(3)).unwrap();
        assert!(effective_distances(&d, &zeros, DistanceMode::Elementwise, false).is_err());
        assert!(effective_distances(&d, &zeros, DistanceMode::CodeFaithful, false).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let d = euclidean_distance_matrix(&line_topology());
        let t = ThroughputMatrix::ones(4);
        assert!(effective_distances(&d, &t, DistanceMode::Elementwise, false).is_err());
    }

    #[test]
    fn negative_entries_kept_unless_clamped() {
        let d = euclidean_distance_matrix(&line_topology());
        let mut neg = SquareMatrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                neg[(i, j)] = if (i + j) % 2 == 0 { -1.0 } else { 0.5 };
            }
        }
        let t = ThroughputMatrix::new(neg).unwrap();
        let eff = effective_distances(&d, &t, DistanceMode::Elementwise, false).unwrap();
        assert!(eff.matrix().data().iter().any(|&v| v < 0.0));
        assert!(eff.matrix().data().iter().all(|&v| (-1.0..=1.0).contains(&v)));

        let clamped = effective_distances(&d, &t, DistanceMode::Elementwise, true).unwrap();
        assert!(clamped.matrix().data().iter().all(|&v| v >= 0.0));
        assert_eq!(clamped.matrix().max_abs(), 1.0);
    }

    #[test]
    fn distance_mode_round_trips_names() {
        for mode in [DistanceMode::CodeFaithful, DistanceMode::Elementwise] {
            assert_eq!(mode.to_string().parse::<DistanceMode>().unwrap(), mode);
        }
        assert!("matrixish".parse::<DistanceMode>().is_err());
    }
}
