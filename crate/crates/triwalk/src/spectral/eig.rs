//! Closed-form eigensolver for 3x3 unitary matrices.
//!
//! The propagator is diagonalized at every node of an N x N momentum grid,
//! so this path is deliberately allocation-free: Cardano's formula on the
//! characteristic cubic, one guarded Newton polish per root, and eigenvectors
//! from cross products of rows of `U - lambda I`. Unitarity is used twice —
//! the roots lie on the unit circle (good conditioning) and the matrix is
//! normal, so eigenspaces are mutually orthogonal and a degenerate pair can
//! be completed as the orthogonal complement of the isolated eigenvector.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

/// Eigenvalues closer than this are treated as a degenerate cluster.
pub(crate) const DEGENERACY_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub(crate) struct Eigen3 {
    pub values: [Complex64; 3],
    /// Unit eigenvectors, `values`-aligned; an orthonormal pair spanning the
    /// eigenspace when two values coincide.
    pub vectors: [Vector3<Complex64>; 3],
    /// True iff some pair of eigenvalues is within [`DEGENERACY_TOL`] — the
    /// individual eigenvectors are then only defined up to rotation inside
    /// the cluster's subspace.
    pub degenerate: bool,
}

/// Sum of the principal 2x2 minors — the quadratic elementary symmetric
/// function of the eigenvalues.
pub(crate) fn principal_minor_sum(m: &Matrix3<Complex64>) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]
}

/// Roots of the monic cubic `x^3 - e1 x^2 + e2 x - e3` by Cardano's formula,
/// with one guarded Newton step per root on the original cubic.
fn cubic_roots(e1: Complex64, e2: Complex64, e3: Complex64) -> [Complex64; 3] {
    let third = 1.0 / 3.0;
    let s = e1 * third;
    // Depressed cubic x = y + s: y^3 + p y + q.
    let p = e2 - s * s * 3.0;
    let q = s * s * s * -2.0 + e2 * s - e3;

    let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    // Pick the cube whose magnitude is larger to dodge cancellation.
    let u3a = -q * 0.5 + disc;
    let u3b = -q * 0.5 - disc;
    let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };

    let mut roots = if u3.norm() < 1e-30 {
        // p and q both ~ 0: a triple root at s.
        [s, s, s]
    } else {
        let u = u3.powf(third);
        let v = -p / (u * 3.0);
        [
            u + v + s,
            u * zeta + v * zeta * zeta + s,
            u * zeta * zeta + v * zeta + s,
        ]
    };

    // One Newton polish per simple root; skipped near multiple roots where
    // the derivative collapses (the symmetric Cardano errors are already
    // benign there, and a huge Newton step would destroy that structure).
    for r in &mut roots {
        for _ in 0..2 {
            let f = ((*r - e1) * *r + e2) * *r - e3;
            let df = (*r * 3.0 - e1 * 2.0) * *r + e2;
            if df.norm() < 1e-6 {
                break;
            }
            let delta = f / df;
            if delta.norm() > 0.1 {
                break;
            }
            *r -= delta;
        }
    }
    roots
}

/// Unit null-direction of a (numerically) rank-2 matrix: the plain complex
/// cross product of its two most independent rows. Returns the vector and
/// the raw cross-product magnitude (small magnitude = unreliable direction).
fn null_direction(m: &Matrix3<Complex64>) -> (Vector3<Complex64>, f64) {
    let r0: Vector3<Complex64> = m.row(0).transpose();
    let r1: Vector3<Complex64> = m.row(1).transpose();
    let r2: Vector3<Complex64> = m.row(2).transpose();
    let candidates = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let mut best = candidates[0];
    let mut best_norm = best.norm();
    for c in &candidates[1..] {
        let n = c.norm();
        if n > best_norm {
            best = *c;
            best_norm = n;
        }
    }
    if best_norm == 0.0 {
        (Vector3::x(), 0.0)
    } else {
        (best.unscale(best_norm), best_norm)
    }
}

/// A unit vector orthogonal (in the Hermitian sense) to `v`.
fn orthogonal_unit(v: &Vector3<Complex64>) -> Vector3<Complex64> {
    // Start from the basis vector least aligned with v.
    let mut idx = 0;
    for j in 1..3 {
        if v[j].norm() < v[idx].norm() {
            idx = j;
        }
    }
    let mut e = Vector3::zeros();
    e[idx] = Complex64::new(1.0, 0.0);
    let w = e - v * v.dotc(&e);
    w.unscale(w.norm())
}

/// Third member of a right-handed orthonormal triple: for Hermitian-orthonormal
/// `a`, `b`, the conjugated cross product `conj(a x b)` is a unit vector
/// Hermitian-orthogonal to both.
fn orthonormal_completion(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> Vector3<Complex64> {
    a.cross(b).map(|z| z.conj())
}

pub(crate) fn eigen_unitary3(u: &Matrix3<Complex64>) -> Eigen3 {
    let e1 = u.trace();
    let e2 = principal_minor_sum(u);
    let e3 = u.determinant();
    let values = cubic_roots(e1, e2, e3);

    let gaps = [
        (values[0] - values[1]).norm(),
        (values[0] - values[2]).norm(),
        (values[1] - values[2]).norm(),
    ];
    let degenerate = gaps.iter().any(|g| *g < DEGENERACY_TOL);

    let mut vectors = [Vector3::zeros(); 3];
    if !degenerate {
        for (j, lambda) in values.iter().enumerate() {
            let m = u - Matrix3::identity() * *lambda;
            vectors[j] = null_direction(&m).0;
        }
    } else if gaps.iter().all(|g| *g < DEGENERACY_TOL) {
        // Triple eigenvalue: u is (numerically) a multiple of the identity.
        vectors = [Vector3::x(), Vector3::y(), Vector3::z()];
    } else {
        // One isolated eigenvalue, one near-degenerate pair. The isolated
        // eigenvector is well-conditioned; the pair spans its orthogonal
        // complement because the matrix is normal. gaps[2 - j] is the gap
        // between the two values other than j (gaps = [d01, d02, d12]), so
        // the isolated index is the one whose complementary gap is smallest.
        let isolated = (0..3)
            .min_by(|&a, &b| {
                let da = gaps[2 - a];
                let db = gaps[2 - b];
                da.partial_cmp(&db).expect("finite gaps")
            })
            .expect("three indices");
        let m = u - Matrix3::identity() * values[isolated];
        let v_iso = null_direction(&m).0;
        let v_a = orthogonal_unit(&v_iso);
        let v_b = orthonormal_completion(&v_iso, &v_a);
        let mut pair = [v_a, v_b].into_iter();
        for (j, slot) in vectors.iter_mut().enumerate() {
            *slot = if j == isolated {
                v_iso
            } else {
                pair.next().expect("two pair slots")
            };
        }
    }

    Eigen3 {
        values,
        vectors,
        degenerate,
    }
}
