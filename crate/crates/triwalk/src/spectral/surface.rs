//! Whole-grid eigenphase sheets and their stationary structure.
//!
//! [`build_dispersion_surface`] samples the Brillouin window on an `N x N`
//! grid, diagonalizes the propagator at every node, and stitches the three
//! eigenphase branches into continuous sheets by matching eigenvectors
//! between adjacent nodes (sorting by phase value would manufacture spurious
//! crossings wherever two sheets intersect). [`find_stationary_points`]
//! then locates vanishing-gradient nodes, groups them into connected
//! components, and maps each component's geometry and Hessian rank to the
//! stationary-phase decay taxonomy:
//!
//! | stationary structure            | return probability | class |
//! |---------------------------------|--------------------|-------|
//! | isolated rank-2 points          | `t^-2`             | [`DecayClass::IsolatedNondegenerate`] |
//! | one-dimensional component       | `t^-1`             | [`DecayClass::SaddleLine`] |
//! | isolated point, rank-0 Hessian  | `t^-4/3`           | [`DecayClass::RankZeroHessian`] |
//! | entire sheet stationary         | no decay           | [`DecayClass::FlatBranch`] |
//!
//! Because the shift phases are not `2 pi`-periodic in `k1` and `k2`
//! separately (the window is a patch of a skewed momentum torus, not a
//! torus itself), all finite-difference stencils read from a one-node halo
//! padded around the window rather than wrapping indices.

use super::{grid_momentum, momentum_propagator, wrap_phase, MomentumPoint};
use crate::coin::{CoinMatrix, Verdict};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Adjacent-node eigenvector overlaps at or below this value mean the
/// branch assignment is ambiguous and the node is flagged.
pub const AMBIGUOUS_OVERLAP: f64 = 0.5;

/// Default stationarity threshold for an `n x n` grid.
///
/// Scales like the grid step: near a saddle line the gradient grows
/// linearly away from the line with slope of order the transverse curvature
/// (2/3 for the recurrent reference coin), so capturing the nearest grid
/// column to the line needs a tolerance of at least about `2 pi / (3 n)`;
/// `4 / n` adds a safety factor of roughly two on top of that while staying
/// far below typical propagation-speed gradients of order one. A fixed
/// `n`-independent tolerance fails in both directions at practical sizes.
pub fn default_grad_tol(n: usize) -> f64 {
    4.0 / n as f64
}

/// Which pathology a node exhibited during branch matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagKind {
    /// Best-permutation eigenvector overlap was at most [`AMBIGUOUS_OVERLAP`].
    AmbiguousMatch,
    /// Two eigenvalues coincide within the solver tolerance; the
    /// eigenvectors inside the pair are an arbitrary orthonormal choice.
    DegenerateEigenvalues,
}

/// A grid node that could not be assigned to branches cleanly.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FlaggedNode {
    pub k: MomentumPoint,
    /// Smallest per-branch eigenvector overlap of the best assignment.
    pub min_overlap: f64,
    pub kind: FlagKind,
}

/// Three continuity-tracked eigenphase sheets over the Brillouin window.
///
/// Core nodes are indexed `(i1, i2)` in `0..n`, with momenta given by
/// [`grid_momentum`]; a one-node halo around the core (part of the same
/// matching sweep) supplies neighbors for the finite-difference stencils at
/// the window edges.
pub struct DispersionSurface {
    n: usize,
    step: f64,
    /// Eigenphases on the padded `(n+2) x (n+2)` grid, branch-major.
    omega: Vec<f64>,
    /// Central-difference gradients at core nodes, branch-major.
    grad: Vec<[f64; 2]>,
    flagged: Vec<FlaggedNode>,
}

impl DispersionSurface {
    pub fn grid_size(&self) -> usize {
        self.n
    }

    /// Grid spacing `2 pi / n`.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Momentum of core node `(i1, i2)`.
    pub fn node_momentum(&self, i1: usize, i2: usize) -> MomentumPoint {
        grid_momentum(self.n, i1, i2)
    }

    fn padded_side(&self) -> usize {
        self.n + 2
    }

    fn omega_padded(&self, branch: usize, p1: usize, p2: usize) -> f64 {
        let side = self.padded_side();
        self.omega[(branch * side + p1) * side + p2]
    }

    /// Eigenphase of `branch` at core node `(i1, i2)`, in `(-pi, pi]`.
    pub fn omega(&self, branch: usize, i1: usize, i2: usize) -> f64 {
        assert!(branch < 3 && i1 < self.n && i2 < self.n);
        self.omega_padded(branch, i1 + 1, i2 + 1)
    }

    /// Central-difference gradient `(d omega/d k1, d omega/d k2)` at a core
    /// node. Phase differences are wrapped to `(-pi, pi]` before dividing,
    /// so crossing the branch cut of the phase window does not produce
    /// spurious `2 pi / h` spikes.
    pub fn gradient(&self, branch: usize, i1: usize, i2: usize) -> [f64; 2] {
        assert!(branch < 3 && i1 < self.n && i2 < self.n);
        self.grad[(branch * self.n + i1) * self.n + i2]
    }

    pub fn gradient_norm(&self, branch: usize, i1: usize, i2: usize) -> f64 {
        let [g1, g2] = self.gradient(branch, i1, i2);
        g1.hypot(g2)
    }

    /// Central second differences of the sheet at a core node, as the
    /// symmetric matrix `[[d11, d12], [d12, d22]]`, with the same phase
    /// wrapping as [`Self::gradient`].
    pub fn hessian(&self, branch: usize, i1: usize, i2: usize) -> [[f64; 2]; 2] {
        assert!(branch < 3 && i1 < self.n && i2 < self.n);
        let (p1, p2) = (i1 + 1, i2 + 1);
        let h2 = self.step * self.step;
        let center = self.omega_padded(branch, p1, p2);
        let d = |q1: usize, q2: usize| wrap_phase(self.omega_padded(branch, q1, q2) - center);
        let d11 = (d(p1 + 1, p2) + d(p1 - 1, p2)) / h2;
        let d22 = (d(p1, p2 + 1) + d(p1, p2 - 1)) / h2;
        let d12 = (d(p1 + 1, p2 + 1) - d(p1 + 1, p2 - 1) - d(p1 - 1, p2 + 1)
            + d(p1 - 1, p2 - 1))
            / (4.0 * h2);
        [[d11, d12], [d12, d22]]
    }

    /// Nodes where branch assignment was ambiguous or degenerate.
    pub fn flagged_nodes(&self) -> &[FlaggedNode] {
        &self.flagged
    }
}

/// Singular values of a symmetric 2x2 matrix, descending.
fn symmetric_singular_values(m: [[f64; 2]; 2]) -> [f64; 2] {
    let half_trace = (m[0][0] + m[1][1]) / 2.0;
    let radius = ((m[0][0] - m[1][1]) / 2.0).hypot(m[0][1]);
    let s0 = (half_trace + radius).abs();
    let s1 = (half_trace - radius).abs();
    [s0.max(s1), s0.min(s1)]
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Assigns the freshly diagonalized vectors to branches by maximizing the
/// total overlap with the previous node's branch vectors. Returns the
/// permutation (branch `b` takes new index `perm[b]`) and the smallest
/// per-branch overlap of the winning assignment.
fn match_branches(
    prev: &[Vector3<Complex64>; 3],
    next: &[Vector3<Complex64>; 3],
) -> ([usize; 3], f64) {
    let mut overlap = [[0.0f64; 3]; 3];
    for (b, p) in prev.iter().enumerate() {
        for (j, v) in next.iter().enumerate() {
            overlap[b][j] = p.dotc(v).norm();
        }
    }
    let mut best = PERMUTATIONS[0];
    let mut best_total = f64::NEG_INFINITY;
    for perm in PERMUTATIONS {
        let total: f64 = (0..3).map(|b| overlap[b][perm[b]]).sum();
        if total > best_total {
            best_total = total;
            best = perm;
        }
    }
    let min_overlap = (0..3)
        .map(|b| overlap[b][best[b]])
        .fold(f64::INFINITY, f64::min);
    (best, min_overlap)
}

/// Samples `U(k)` on the padded grid and stitches eigenphase sheets by
/// eigenvector continuity. The sweep runs column by column: each node is
/// matched against the node below it, and the first node of a column
/// against the bottom node of the previous column.
///
/// # Panics
/// If `n < 16`: coarser grids cannot separate the stationary geometries
/// this surface exists to classify.
pub fn build_dispersion_surface(coin: &CoinMatrix, n: usize) -> DispersionSurface {
    assert!(n >= 16, "dispersion grid must be at least 16 x 16");
    let side = n + 2;
    let h = TAU / n as f64;
    let mut omega = vec![0.0f64; 3 * side * side];
    let mut flagged = Vec::new();

    // Padded node (p1, p2) sits at momentum -pi + (p1, p2) * h; core node
    // (i1, i2) is padded (i1 + 1, i2 + 1).
    let node_k = |p1: usize, p2: usize| {
        MomentumPoint::new(-PI + p1 as f64 * h, -PI + p2 as f64 * h)
    };

    let mut column_base: Option<[Vector3<Complex64>; 3]> = None;
    for p1 in 0..side {
        let mut below: Option<[Vector3<Complex64>; 3]> = None;
        for p2 in 0..side {
            let k = node_k(p1, p2);
            let prop = momentum_propagator(coin, &k);
            let reference = if p2 == 0 { &column_base } else { &below };
            let (perm, min_overlap) = match reference {
                Some(prev) => match_branches(prev, &prop.eigenvectors),
                None => ([0, 1, 2], 1.0),
            };
            let mut matched_vectors = [Vector3::zeros(); 3];
            for b in 0..3 {
                omega[(b * side + p1) * side + p2] = prop.eigenphases[perm[b]];
                matched_vectors[b] = prop.eigenvectors[perm[b]];
            }
            if reference.is_some() && min_overlap <= AMBIGUOUS_OVERLAP {
                flagged.push(FlaggedNode {
                    k,
                    min_overlap,
                    kind: FlagKind::AmbiguousMatch,
                });
            }
            if prop.degenerate {
                flagged.push(FlaggedNode {
                    k,
                    min_overlap,
                    kind: FlagKind::DegenerateEigenvalues,
                });
            }
            if p2 == 0 {
                column_base = Some(matched_vectors);
            }
            below = Some(matched_vectors);
        }
    }

    // Central-difference gradients at core nodes from the padded store.
    let mut grad = vec![[0.0f64; 2]; 3 * n * n];
    for b in 0..3 {
        for i1 in 0..n {
            for i2 in 0..n {
                let (p1, p2) = (i1 + 1, i2 + 1);
                let at = |q1: usize, q2: usize| omega[(b * side + q1) * side + q2];
                let g1 = wrap_phase(at(p1 + 1, p2) - at(p1 - 1, p2)) / (2.0 * h);
                let g2 = wrap_phase(at(p1, p2 + 1) - at(p1, p2 - 1)) / (2.0 * h);
                grad[(b * n + i1) * n + i2] = [g1, g2];
            }
        }
    }

    DispersionSurface {
        n,
        step: h,
        omega,
        grad,
        flagged,
    }
}

/// Asymptotic decay class of the return probability predicted by the
/// stationary-phase method from the slowest stationary structure present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayClass {
    /// Only isolated stationary points with full-rank Hessians: `p0 ~ t^-2`.
    IsolatedNondegenerate,
    /// A one-dimensional continuum of stationary points: `p0 ~ t^-1`.
    SaddleLine,
    /// An isolated stationary point whose Hessian vanishes: `p0 ~ t^-4/3`.
    RankZeroHessian,
    /// An entire sheet is stationary (flat): no decay at all.
    FlatBranch,
}

impl DecayClass {
    /// Predicted power-law exponent of `p0(t)`, `None` for a flat branch
    /// (the return probability does not decay).
    pub fn predicted_exponent(self) -> Option<f64> {
        match self {
            DecayClass::IsolatedNondegenerate => Some(-2.0),
            DecayClass::SaddleLine => Some(-1.0),
            DecayClass::RankZeroHessian => Some(-4.0 / 3.0),
            DecayClass::FlatBranch => None,
        }
    }

    /// Larger means slower decay; used to aggregate component classes.
    fn slowness(self) -> u8 {
        match self {
            DecayClass::IsolatedNondegenerate => 0,
            DecayClass::RankZeroHessian => 1,
            DecayClass::SaddleLine => 2,
            DecayClass::FlatBranch => 3,
        }
    }
}

/// One connected component of below-threshold-gradient nodes, reported at
/// its best (smallest-gradient) node.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StationaryPoint {
    pub k: MomentumPoint,
    pub branch: usize,
    /// Core grid indices of the representative node.
    pub node: (usize, usize),
    pub gradient_norm: f64,
    /// Hessian rank at the representative node (thresholded singular values).
    pub hessian_rank: usize,
    /// Singular values of the Hessian, descending.
    pub hessian_singular_values: [f64; 2],
    /// Number of grid nodes in the component.
    pub component_nodes: usize,
    /// Longest bounding-box side of the component, in nodes.
    pub component_extent: usize,
    pub class: DecayClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct StationaryPointReport {
    pub points: Vec<StationaryPoint>,
    /// Slowest decay class among the components; for an empty report the
    /// fastest class, since no slow stationary contribution exists.
    pub decay_class: DecayClass,
    pub grad_tol: f64,
    pub grid_size: usize,
}

/// Thresholds for the stationary-point scan.
#[derive(Clone, Copy, Debug)]
pub struct StationaryOptions {
    /// Nodes with `||grad omega|| < grad_tol` count as stationary.
    pub grad_tol: f64,
    /// A singular value below `hessian_rel_tol * max` is treated as zero.
    pub hessian_rel_tol: f64,
    /// ... but never below this absolute floor: at a rank-0 point the
    /// largest singular value is itself finite-difference noise, and a
    /// purely relative rule could then never report rank zero. The floor
    /// must sit below genuine sheet curvatures (order 0.1 and up for the
    /// reference coins) and above the stencil noise of a flat-to-cubic
    /// sheet (order `h^2`).
    pub hessian_abs_floor: f64,
}

impl StationaryOptions {
    pub fn for_grid(n: usize) -> Self {
        Self {
            grad_tol: default_grad_tol(n),
            hessian_rel_tol: 1e-2,
            hessian_abs_floor: 5e-2,
        }
    }
}

/// Scans the surface for stationary components with the default Hessian
/// thresholds. See [`find_stationary_points_with`].
pub fn find_stationary_points(surface: &DispersionSurface, grad_tol: f64) -> StationaryPointReport {
    let opts = StationaryOptions {
        grad_tol,
        ..StationaryOptions::for_grid(surface.grid_size())
    };
    find_stationary_points_with(surface, &opts)
}

/// Scans the surface for nodes with gradient norm below `opts.grad_tol`,
/// groups them into 8-connected components per branch (no wraparound: the
/// window is not a torus), and classifies each component:
///
/// * more than half of the sheet stationary -> [`DecayClass::FlatBranch`];
/// * bounding box spanning at least half the window -> [`DecayClass::SaddleLine`];
/// * otherwise point-like, classified by Hessian rank at the
///   smallest-gradient node: rank 0 -> [`DecayClass::RankZeroHessian`],
///   else [`DecayClass::IsolatedNondegenerate`].
pub fn find_stationary_points_with(
    surface: &DispersionSurface,
    opts: &StationaryOptions,
) -> StationaryPointReport {
    assert!(opts.grad_tol > 0.0, "gradient tolerance must be positive");
    let n = surface.grid_size();
    let mut points = Vec::new();

    for branch in 0..3 {
        let mut visited = vec![false; n * n];
        for start in 0..n * n {
            let (s1, s2) = (start / n, start % n);
            if visited[start] || surface.gradient_norm(branch, s1, s2) >= opts.grad_tol {
                continue;
            }
            // Flood-fill one component.
            let mut component = Vec::new();
            let mut stack = vec![(s1, s2)];
            visited[start] = true;
            while let Some((i1, i2)) = stack.pop() {
                component.push((i1, i2));
                for d1 in -1i64..=1 {
                    for d2 in -1i64..=1 {
                        let (j1, j2) = (i1 as i64 + d1, i2 as i64 + d2);
                        if j1 < 0 || j2 < 0 || j1 >= n as i64 || j2 >= n as i64 {
                            continue;
                        }
                        let (j1, j2) = (j1 as usize, j2 as usize);
                        let idx = j1 * n + j2;
                        if !visited[idx] && surface.gradient_norm(branch, j1, j2) < opts.grad_tol {
                            visited[idx] = true;
                            stack.push((j1, j2));
                        }
                    }
                }
            }

            let (mut lo1, mut hi1, mut lo2, mut hi2) = (usize::MAX, 0, usize::MAX, 0);
            for &(i1, i2) in &component {
                lo1 = lo1.min(i1);
                hi1 = hi1.max(i1);
                lo2 = lo2.min(i2);
                hi2 = hi2.max(i2);
            }
            let extent = (hi1 - lo1).max(hi2 - lo2) + 1;

            // Representative: smallest gradient norm, ties by scan order.
            let rep = component
                .iter()
                .copied()
                .min_by(|&(a1, a2), &(b1, b2)| {
                    let ga = surface.gradient_norm(branch, a1, a2);
                    let gb = surface.gradient_norm(branch, b1, b2);
                    ga.partial_cmp(&gb)
                        .expect("finite gradients")
                        .then((a1, a2).cmp(&(b1, b2)))
                })
                .expect("component is nonempty");

            let hess = surface.hessian(branch, rep.0, rep.1);
            let sv = symmetric_singular_values(hess);
            let cutoff = (opts.hessian_rel_tol * sv[0]).max(opts.hessian_abs_floor);
            let rank = sv.iter().filter(|&&s| s >= cutoff).count();

            let class = if component.len() * 2 > n * n {
                DecayClass::FlatBranch
            } else if extent >= n / 2 {
                DecayClass::SaddleLine
            } else if rank == 0 {
                DecayClass::RankZeroHessian
            } else {
                DecayClass::IsolatedNondegenerate
            };

            points.push(StationaryPoint {
                k: surface.node_momentum(rep.0, rep.1),
                branch,
                node: rep,
                gradient_norm: surface.gradient_norm(branch, rep.0, rep.1),
                hessian_rank: rank,
                hessian_singular_values: sv,
                component_nodes: component.len(),
                component_extent: extent,
                class,
            });
        }
    }

    let decay_class = points
        .iter()
        .map(|p| p.class)
        .max_by_key(|c| c.slowness())
        .unwrap_or(DecayClass::IsolatedNondegenerate);

    StationaryPointReport {
        points,
        decay_class,
        grad_tol: opts.grad_tol,
        grid_size: n,
    }
}

/// Whether a stationary-structure report is consistent with an algebraic
/// coin classification:
///
/// * trivial generalized permutations carry flat sheets (cyclic relabelings)
///   or purely linear sheets with no stationary nodes at all (relabelings
///   that never return to the original sublattice);
/// * quasi-one-dimensional recurrent coins show saddle lines;
/// * transient coins show at most point-like stationary structure.
pub fn stationary_class_consistent(verdict: &Verdict, report: &StationaryPointReport) -> bool {
    let empty = report.points.is_empty();
    match verdict {
        Verdict::TrivialGeneralizedPermutation => {
            empty || report.decay_class == DecayClass::FlatBranch
        }
        Verdict::QuasiOneDimensionalRecurrent => report.decay_class == DecayClass::SaddleLine,
        Verdict::Transient => {
            empty
                || matches!(
                    report.decay_class,
                    DecayClass::IsolatedNondegenerate | DecayClass::RankZeroHessian
                )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin;
    use crate::spectral::propagator_matrix;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Core column index whose momentum has k1 = 0 (grid of even size n).
    fn zero_column(n: usize) -> usize {
        n / 2 - 1
    }

    #[test]
    fn grover_surface_has_constant_branch_on_zero_column() {
        let n = 64;
        let surface = build_dispersion_surface(&CoinMatrix::grover(), n);
        let i1 = zero_column(n);
        assert_abs_diff_eq!(surface.node_momentum(i1, 0).k1, 0.0, epsilon = 1e-12);
        let flat_branch = (0..3).find(|&b| {
            (0..n).all(|i2| surface.omega(b, i1, i2).abs() < 1e-8)
        });
        assert!(
            flat_branch.is_some(),
            "one sheet must vanish identically on the k1 = 0 line"
        );
    }

    #[test]
    fn crec_sheets_are_constant_along_k2() {
        let n = 64;
        let surface = build_dispersion_surface(&CoinMatrix::recurrent(), n);
        for b in 0..3 {
            for i1 in 0..n {
                let base = surface.omega(b, i1, 0);
                for i2 in 0..n {
                    let dev = wrap_phase(surface.omega(b, i1, i2) - base).abs();
                    assert!(dev < 1e-8, "branch {b} varies along k2 at column {i1}: {dev}");
                    let [_, g2] = surface.gradient(b, i1, i2);
                    assert!(g2.abs() < 1e-6, "d omega/d k2 = {g2} at ({i1}, {i2})");
                }
            }
        }
    }

    #[test]
    fn cyclic_permutation_surface_is_flat_and_cube_is_identity() {
        let cyc = CoinMatrix::permutation([2, 3, 1]).expect("valid permutation");
        let n = 32;
        let surface = build_dispersion_surface(&cyc, n);

        // Each sheet is globally constant at a cube root of unity phase.
        let targets = [0.0, TAU / 3.0, -TAU / 3.0];
        for b in 0..3 {
            let base = surface.omega(b, 0, 0);
            assert!(
                targets.iter().any(|t| (base - t).abs() < 1e-9),
                "sheet value {base} is not a cube-root phase"
            );
            for i1 in 0..n {
                for i2 in 0..n {
                    assert!(wrap_phase(surface.omega(b, i1, i2) - base).abs() < 1e-9);
                }
            }
        }

        // The relabeling closes after three steps: U(k)^3 = I exactly.
        for (k1, k2) in [(0.3, -1.1), (2.0, 0.5), (-2.9, 3.1)] {
            let u = propagator_matrix(&cyc, &MomentumPoint::new(k1, k2));
            let cube = u * u * u;
            let dev = (cube - nalgebra::Matrix3::identity()).norm();
            assert!(dev < 1e-12, "U^3 deviates from identity by {dev}");
        }

        let report = find_stationary_points(&surface, default_grad_tol(n));
        assert_eq!(report.decay_class, DecayClass::FlatBranch);
        assert!(stationary_class_consistent(
            &Verdict::TrivialGeneralizedPermutation,
            &report
        ));
    }

    #[test]
    fn transposition_surface_is_linear_with_no_stationary_nodes() {
        // Swap the first two directions, keep the third: sheets are linear
        // in k with group speeds 1/2, 1/2, and 1 — nowhere stationary.
        let swap = CoinMatrix::permutation([2, 1, 3]).expect("valid permutation");
        let n = 32;
        let surface = build_dispersion_surface(&swap, n);
        let mut min_grad = f64::INFINITY;
        for b in 0..3 {
            for i1 in 0..n {
                for i2 in 0..n {
                    min_grad = min_grad.min(surface.gradient_norm(b, i1, i2));
                }
            }
        }
        assert!(min_grad > 0.3, "smallest gradient norm {min_grad}");

        let report = find_stationary_points(&surface, default_grad_tol(n));
        assert!(report.points.is_empty());
        assert_eq!(report.decay_class, DecayClass::IsolatedNondegenerate);
        assert!(stationary_class_consistent(
            &Verdict::TrivialGeneralizedPermutation,
            &report
        ));
    }

    #[test]
    fn grover_stationary_cluster_at_origin_has_rank_zero_hessian() {
        let n = 128;
        let surface = build_dispersion_surface(&CoinMatrix::grover(), n);
        let report = find_stationary_points(&surface, default_grad_tol(n));
        assert_eq!(report.decay_class, DecayClass::RankZeroHessian);

        let rank_zero: Vec<_> = report
            .points
            .iter()
            .filter(|p| p.class == DecayClass::RankZeroHessian)
            .collect();
        assert_eq!(rank_zero.len(), 1, "exactly one degenerate cluster");
        let p = rank_zero[0];
        assert!(p.k.k1.hypot(p.k.k2) < 0.2, "cluster sits at the origin: {:?}", p.k);
        assert_eq!(p.hessian_rank, 0);
        assert!(
            p.hessian_singular_values[0] < 5e-2,
            "largest Hessian singular value {} should be stencil noise",
            p.hessian_singular_values[0]
        );
        assert!(stationary_class_consistent(&Verdict::Transient, &report));

        // The k = 0 node is on-grid and degenerate (eigenvalue pair -1):
        // it must have been flagged rather than silently assigned.
        assert!(surface
            .flagged_nodes()
            .iter()
            .any(|f| f.kind == FlagKind::DegenerateEigenvalues
                && f.k.k1.hypot(f.k.k2) < 1e-9));
    }

    #[test]
    fn crec_stationary_structure_is_saddle_lines() {
        let n = 64;
        let surface = build_dispersion_surface(&CoinMatrix::recurrent(), n);
        let report = find_stationary_points(&surface, default_grad_tol(n));
        assert_eq!(report.decay_class, DecayClass::SaddleLine);
        let lines: Vec<_> = report
            .points
            .iter()
            .filter(|p| p.class == DecayClass::SaddleLine)
            .collect();
        assert!(!lines.is_empty());
        for line in &lines {
            // Full vertical columns: the extent spans the whole window.
            assert_eq!(line.component_extent, n);
            // Rank-1 transverse curvature |omega''| = 2/3 along k1, flat
            // along k2 (second differences of a k2-constant sheet vanish).
            assert_eq!(line.hessian_rank, 1);
            assert_abs_diff_eq!(
                line.hessian_singular_values[0],
                2.0 / 3.0,
                epsilon = 0.05
            );
            assert!(line.hessian_singular_values[1] < 1e-6);
        }
        assert!(stationary_class_consistent(
            &Verdict::QuasiOneDimensionalRecurrent,
            &report
        ));
    }

    #[test]
    fn random_coin_surfaces_have_no_slow_stationary_structure() {
        for seed in [11u64, 12] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = coin::random_unitary(&mut rng);
            let n = 48;
            let surface = build_dispersion_surface(&c, n);
            let report = find_stationary_points(&surface, default_grad_tol(n));
            for p in &report.points {
                assert!(
                    matches!(
                        p.class,
                        DecayClass::IsolatedNondegenerate | DecayClass::RankZeroHessian
                    ),
                    "seed {seed} produced slow structure: {p:?}"
                );
            }
            assert!(stationary_class_consistent(&Verdict::Transient, &report));
        }
    }

    #[test]
    fn gradient_tolerance_must_be_positive() {
        let surface = build_dispersion_surface(&CoinMatrix::grover(), 16);
        let result = std::panic::catch_unwind(|| find_stationary_points(&surface, 0.0));
        assert!(result.is_err());
    }

    #[test]
    fn singular_values_of_symmetric_matrices() {
        assert_eq!(symmetric_singular_values([[0.0, 0.0], [0.0, 0.0]]), [0.0, 0.0]);
        let sv = symmetric_singular_values([[3.0, 0.0], [0.0, -2.0]]);
        assert_abs_diff_eq!(sv[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[1], 2.0, epsilon = 1e-12);
        // Rotated rank-1 matrix v v^T with v = (1, 1): singular values 2, 0.
        let sv = symmetric_singular_values([[1.0, 1.0], [1.0, 1.0]]);
        assert_abs_diff_eq!(sv[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[1], 0.0, epsilon = 1e-12);
    }
}
