//! Momentum-space analysis of the walk.
//!
//! The Fourier transform block-diagonalizes one step of the evolution into a
//! 3x3 unitary propagator `U(k) = D(k) * C` per momentum `k`, with
//! `D(k) = diag(e^{-i k.e1}, e^{-i k.e2}, e^{-i k.e3})`. Everything about
//! long-time return probabilities is encoded in the three eigenphase sheets
//! `omega_j(k)`: stationary points of a sheet control the power-law decay of
//! the probability at the origin through the method of stationary phase.
//!
//! This module provides the per-point machinery (propagator, eigenphases,
//! characteristic-polynomial coefficients, closed-form dispersion residuals,
//! the saddle-line condition); [`surface`] builds whole-grid eigenphase
//! sheets and classifies their stationary structure.
//!
//! Momentum convention: `k = (k1, k2)` ranges over the window `(-pi, pi]^2`
//! and `k.e_i` is the plain Euclidean dot product with the physical
//! displacement vectors, so
//!
//! ```text
//! k.e1 = -k1/2 + sqrt(3) k2 / 2,   k.e2 = k1,   k.e3 = -k1/2 - sqrt(3) k2 / 2.
//! ```
//!
//! Note that the window is *not* a torus for `D(k)`: shifting `k1` by `2 pi`
//! changes `k.e1` by `-pi`, so the three phases are jointly periodic only on
//! a skewed lattice. Grid code therefore never wraps indices around the
//! window edges; [`surface::DispersionSurface`] pads the grid instead.

mod eig;
mod surface;

pub use surface::{
    build_dispersion_surface, default_grad_tol, find_stationary_points,
    find_stationary_points_with, stationary_class_consistent, DecayClass, DispersionSurface,
    FlagKind, FlaggedNode, StationaryOptions, StationaryPoint, StationaryPointReport,
    AMBIGUOUS_OVERLAP,
};

use crate::coin::CoinMatrix;
use crate::lattice::Displacement;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Wraps an angle to the canonical window `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// A momentum vector in the Brillouin window `(-pi, pi]^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentumPoint {
    pub k1: f64,
    pub k2: f64,
}

impl MomentumPoint {
    pub fn new(k1: f64, k2: f64) -> Self {
        Self { k1, k2 }
    }

    /// Euclidean dot product `k . e_d` with a physical displacement vector.
    pub fn dot(&self, d: Displacement) -> f64 {
        let (ex, ey) = d.physical();
        self.k1 * ex + self.k2 * ey
    }
}

/// The `i`-th node of the standard `n x n` sampling of the window:
/// each axis takes the values `-pi + m * 2pi/n` for `m = 1..=n`, so the
/// right/top edge `pi` is included, the left/bottom edge `-pi` excluded,
/// and for even `n` the origin lies exactly on the grid.
pub fn grid_momentum(n: usize, i1: usize, i2: usize) -> MomentumPoint {
    let h = TAU / n as f64;
    MomentumPoint::new(-PI + (i1 + 1) as f64 * h, -PI + (i2 + 1) as f64 * h)
}

/// The three shift phases `e^{-i k.e_i}` forming the diagonal of `D(k)`.
pub fn shift_diagonal(k: &MomentumPoint) -> [Complex64; 3] {
    let mut d = [Complex64::new(0.0, 0.0); 3];
    for (slot, dir) in d.iter_mut().zip(Displacement::ALL) {
        *slot = Complex64::from_polar(1.0, -k.dot(dir));
    }
    d
}

/// The one-step propagator `U(k) = D(k) * C` in momentum space.
pub fn propagator_matrix(coin: &CoinMatrix, k: &MomentumPoint) -> Matrix3<Complex64> {
    let d = shift_diagonal(k);
    let mut m = *coin.matrix();
    for row in 0..3 {
        for col in 0..3 {
            m[(row, col)] *= d[row];
        }
    }
    m
}

/// The diagonalized propagator at one momentum point.
///
/// Eigenphases are sorted in increasing order with eigenvectors aligned to
/// them. When two eigenvalues coincide within the solver's degeneracy
/// tolerance the individual eigenvectors are only defined up to a rotation
/// inside the shared subspace; `degenerate` flags that situation so callers
/// never silently project onto an arbitrary basis choice.
#[derive(Clone, Debug)]
pub struct MomentumPropagator {
    pub k: MomentumPoint,
    pub matrix: Matrix3<Complex64>,
    /// Eigenphases `omega_j` in `(-pi, pi]`, ascending.
    pub eigenphases: [f64; 3],
    /// Unit eigenvectors `v_j`, aligned with `eigenphases`.
    pub eigenvectors: [Vector3<Complex64>; 3],
    /// True iff some pair of eigenvalues coincides within tolerance.
    pub degenerate: bool,
}

impl MomentumPropagator {
    /// The eigenvalues `e^{i omega_j}` reconstituted from the phases.
    pub fn eigenvalues(&self) -> [Complex64; 3] {
        self.eigenphases.map(|w| Complex64::from_polar(1.0, w))
    }

    /// Smallest `|omega_j|` — distance of the spectrum from eigenvalue 1.
    pub fn min_abs_phase(&self) -> f64 {
        self.eigenphases
            .iter()
            .map(|w| w.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds and diagonalizes `U(k) = D(k) * C`.
pub fn momentum_propagator(coin: &CoinMatrix, k: &MomentumPoint) -> MomentumPropagator {
    let matrix = propagator_matrix(coin, k);
    let es = eig::eigen_unitary3(&matrix);
    let mut order = [0usize, 1, 2];
    let phases = es.values.map(|v| wrap_phase(v.arg()));
    order.sort_by(|&a, &b| {
        phases[a]
            .partial_cmp(&phases[b])
            .expect("eigenphases are finite")
    });
    MomentumPropagator {
        k: *k,
        matrix,
        eigenphases: order.map(|j| phases[j]),
        eigenvectors: order.map(|j| es.vectors[j]),
        degenerate: es.degenerate,
    }
}


/// Coefficients `(c2, c1, c0)` of the characteristic polynomial
/// `lambda^3 - c2 lambda^2 + c1 lambda - c0` of the SU(3)-normalized
/// propagator: `c2 = Tr U(k)`, `c1` the sum of principal 2x2 minors, and
/// `c0 = det U(k) = 1` (the coin is rescaled by `det^{-1/3}` first, and
/// `det D(k) = 1` because the three displacements sum to zero).
///
/// Evaluating the cubic at each eigenvalue `e^{i omega_j}` gives a residual
/// below 1e-8.
///
/// # Panics
/// If `|det C|` deviates from 1 by more than 1e-8; a validated
/// [`CoinMatrix`] always satisfies this.
pub fn char_poly_coefficients(
    coin: &CoinMatrix,
    k: &MomentumPoint,
) -> (Complex64, Complex64, Complex64) {
    let det = coin.matrix().determinant();
    assert!(
        (det.norm() - 1.0).abs() <= 1e-8,
        "coin determinant must lie on the unit circle"
    );
    let su3 = coin.su3_normalized();
    let u = propagator_matrix(&su3, k);
    (u.trace(), eig::principal_minor_sum(&u), u.determinant())
}

/// The pair-phase sum `Delta_12 + Delta_13 + Delta_23` built directly from
/// the SU(3)-normalized coin entries,
/// `Delta_ij = e^{-i k.(e_i + e_j)} (C_ii C_jj - C_ij C_ji)`,
/// i.e. the principal 2x2 minors of the propagator factored into shift
/// phases and coin minors. Equals the `c1` coefficient of
/// [`char_poly_coefficients`] and the eigenvalue pair sum
/// `sum_{i<j} e^{i(omega_i + omega_j)}`.
pub fn delta_coefficient_sum(coin: &CoinMatrix, k: &MomentumPoint) -> Complex64 {
    let su3 = coin.su3_normalized();
    let c = su3.matrix();
    let d = shift_diagonal(k);
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let minor = c[(i, i)] * c[(j, j)] - c[(i, j)] * c[(j, i)];
            sum += d[i] * d[j] * minor;
        }
    }
    sum
}

/// Closed-form dispersion residual for the Grover walk:
///
/// ```text
/// Phi(omega, k) = sin(k1 - omega/2) - 2 cos(sqrt(3) k2 / 2) sin((k1 + omega)/2)
///                 - 3 sin(3 omega / 2)
/// ```
///
/// `Phi` vanishes when `omega` is an eigenphase of the Grover propagator at
/// `k`. The printed trigonometric form is validated numerically against
/// determinant-based eigenphases (see [`dispersion_residual_score`]); the
/// determinant is the ground truth.
pub fn grover_dispersion_residual(k: &MomentumPoint, omega: f64) -> f64 {
    (k.k1 - omega / 2.0).sin()
        - 2.0 * (3f64.sqrt() * k.k2 / 2.0).cos() * ((k.k1 + omega) / 2.0).sin()
        - 3.0 * (1.5 * omega).sin()
}

/// Closed-form dispersion residual for the recurrent coin `C_Rec`:
///
/// ```text
/// Theta(omega, k) = cos(k1 - omega/2) - sqrt(2) cos(3 omega / 2)
/// ```
///
/// `k2` does not appear: the eigenvalue sheets are constant along `k2`,
/// which is the structural reason the walk collapses to an effectively
/// one-dimensional (recurrent) one.
pub fn crec_dispersion_residual(k: &MomentumPoint, omega: f64) -> f64 {
    (k.k1 - omega / 2.0).cos() - 2f64.sqrt() * (1.5 * omega).cos()
}

/// The saddle-line gradient condition at the heart of the coin
/// classification theorem: the 2-vector
///
/// ```text
/// r(k, phi) = sum_i e_i |C_ii| cos(-k.e_i + Arg C_ii + phi)
/// ```
///
/// with `e_i` the physical displacement vectors. A sheet can carry a
/// one-dimensional continuum of stationary points only if `r` vanishes on a
/// curve for some `phi`, which requires two of the diagonal moduli `|C_ii|`
/// to be zero; generic coins admit only isolated roots.
pub fn saddle_line_condition_residual(coin: &CoinMatrix, k: &MomentumPoint, phi: f64) -> [f64; 2] {
    let c = coin.matrix();
    let mut r = [0.0f64; 2];
    for (i, dir) in Displacement::ALL.into_iter().enumerate() {
        let cii = c[(i, i)];
        let weight = cii.norm() * (-k.dot(dir) + cii.arg() + phi).cos();
        let (ex, ey) = dir.physical();
        r[0] += ex * weight;
        r[1] += ey * weight;
    }
    r
}

/// Fraction of `(k, omega_j)` pairs on an `n x n` grid whose residual under
/// `residual` is below `tol` in magnitude, with `omega_j` the three
/// determinant-based eigenphases of the propagator. A printed dispersion
/// formula that matches the spectrum scores 1.0; a sign or factor typo shows
/// up as a visibly degraded score.
pub fn dispersion_residual_score<F>(coin: &CoinMatrix, residual: F, n: usize, tol: f64) -> f64
where
    F: Fn(&MomentumPoint, f64) -> f64,
{
    let mut hits = 0usize;
    for i1 in 0..n {
        for i2 in 0..n {
            let k = grid_momentum(n, i1, i2);
            let prop = momentum_propagator(coin, &k);
            for w in prop.eigenphases {
                if residual(&k, w).abs() < tol {
                    hits += 1;
                }
            }
        }
    }
    hits as f64 / (3 * n * n) as f64
}
