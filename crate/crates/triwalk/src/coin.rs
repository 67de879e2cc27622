//! Construction, validation, and structural classification of 3x3 unitary
//! coin operators.
//!
//! The diagonal moduli |C_ii| decide the long-time fate of the walk:
//!
//! - at most one vanishing diagonal entry → the walk spreads in two
//!   dimensions and is transient,
//! - exactly two vanishing diagonal entries (and the coin is not a
//!   generalized permutation) → the dispersion depends on a single momentum
//!   component; the walk is quasi-one-dimensional along the direction of the
//!   surviving diagonal entry and recurrent,
//! - a generalized permutation (one nonzero entry per row and column, which
//!   includes every unitary with all three diagonals zero) → a trivial
//!   relabeling walk.
//!
//! [`classify`](CoinMatrix::classify) applies this trichotomy; the spectral
//! module cross-checks it against the measured stationary structure of the
//! dispersion surfaces.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::lattice::Displacement;
use crate::{Error, Result};

/// Default tolerance below which a diagonal entry counts as zero.
///
/// The classification is discontinuous in the entries, so the cut must be an
/// explicit, documented constant.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Default tolerance for the unitarity check `C C^H = I`.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// A validated 3x3 unitary coin operator, with a human-readable label for
/// output provenance.
#[derive(Clone, Debug)]
pub struct CoinMatrix {
    m: Matrix3<Complex64>,
    label: String,
}

/// Long-time verdict implied by the diagonal zero pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Transient,
    QuasiOneDimensionalRecurrent,
    TrivialGeneralizedPermutation,
}

/// Result of [`CoinMatrix::classify`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CoinClassification {
    pub verdict: Verdict,
    pub zero_diagonal_count: usize,
    /// Direction of quasi-1D propagation; present iff the verdict is
    /// `QuasiOneDimensionalRecurrent`.
    pub propagation_direction: Option<Displacement>,
}

impl CoinMatrix {
    /// The three-dimensional Grover coin: diagonal `2/3 - 1 = -1/3`,
    /// off-diagonal `2/3`. Orthogonal, and it commutes with every 3x3
    /// permutation matrix.
    pub fn grover() -> CoinMatrix {
        let d = Complex64::new(-1.0 / 3.0, 0.0);
        let o = Complex64::new(2.0 / 3.0, 0.0);
        CoinMatrix {
            m: Matrix3::new(d, o, o, o, d, o, o, o, d),
            label: "grover".to_string(),
        }
    }

    /// The reference recurrent coin
    /// `(1/sqrt 2) * [[0,0,sqrt 2],[1,1,0],[1,-1,0]]`: two zero diagonal
    /// entries, quasi-1D propagation along `e2`.
    pub fn recurrent() -> CoinMatrix {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        CoinMatrix {
            m: Matrix3::new(z, z, one, s, s, z, s, -s, z),
            label: "crec".to_string(),
        }
    }

    /// The identity coin (a pure shift: every component keeps moving along
    /// its own direction forever).
    pub fn identity() -> CoinMatrix {
        CoinMatrix {
            m: Matrix3::identity(),
            label: "identity".to_string(),
        }
    }

    /// The permutation coin for `sigma`, given as the images of `1,2,3`
    /// (one-based). Row `i` carries its 1 in column `sigma[i]`, so the coin
    /// maps chirality component `sigma(i)` onto component `i`:
    /// `(P psi)_i = psi_{sigma(i)}`. `[2,3,1]` yields
    /// `[[0,1,0],[0,0,1],[1,0,0]]`.
    pub fn permutation(sigma: [usize; 3]) -> Result<CoinMatrix> {
        let mut seen = [false; 3];
        for &s in &sigma {
            if !(1..=3).contains(&s) || seen[s - 1] {
                return Err(Error::BadPermutation(sigma));
            }
            seen[s - 1] = true;
        }
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            m[(i, sigma[i] - 1)] = Complex64::new(1.0, 0.0);
        }
        Ok(CoinMatrix {
            m,
            label: format!("perm:{}{}{}", sigma[0], sigma[1], sigma[2]),
        })
    }

    /// All six permutation coins, in lexicographic order of sigma.
    pub fn all_permutations() -> Vec<CoinMatrix> {
        [
            [1, 2, 3],
            [1, 3, 2],
            [2, 1, 3],
            [2, 3, 1],
            [3, 1, 2],
            [3, 2, 1],
        ]
        .into_iter()
        .map(|s| CoinMatrix::permutation(s).expect("valid permutation"))
        .collect()
    }

    /// Validates unitarity (`max |(C C^H - I)_ij| <= tol`) and wraps the
    /// matrix. Rejection carries the measured deviation.
    pub fn validate_unitary(m: Matrix3<Complex64>, tol: f64) -> Result<CoinMatrix> {
        let deviation = unitarity_deviation(&m);
        if deviation > tol {
            return Err(Error::NotUnitary { deviation, tol });
        }
        Ok(CoinMatrix {
            m,
            label: "custom".to_string(),
        })
    }

    /// [`validate_unitary`](CoinMatrix::validate_unitary) at the default
    /// tolerance.
    pub fn new(m: Matrix3<Complex64>) -> Result<CoinMatrix> {
        CoinMatrix::validate_unitary(m, DEFAULT_UNITARITY_TOL)
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Replaces the display label (e.g. with the originating CLI string).
    pub fn with_label(mut self, label: impl Into<String>) -> CoinMatrix {
        self.label = label.into();
        self
    }

    pub fn det(&self) -> Complex64 {
        self.m.determinant()
    }

    /// Rescales by `det^{-1/3}` (principal cube root) so the determinant
    /// becomes 1. Global phase does not affect probabilities, but the
    /// characteristic-polynomial identities assume a unit determinant.
    pub fn su3_normalized(&self) -> CoinMatrix {
        let factor = self.det().powf(1.0 / 3.0);
        CoinMatrix {
            m: self.m.map(|z| z / factor),
            label: self.label.clone(),
        }
    }

    /// Moduli of the three diagonal entries.
    pub fn diagonal_moduli(&self) -> [f64; 3] {
        [
            self.m[(0, 0)].norm(),
            self.m[(1, 1)].norm(),
            self.m[(2, 2)].norm(),
        ]
    }

    /// Number of diagonal entries with `|C_ii| <= zero_tol`.
    pub fn zero_diagonal_count(&self, zero_tol: f64) -> usize {
        self.diagonal_moduli()
            .iter()
            .filter(|&&m| m <= zero_tol)
            .count()
    }

    /// True iff exactly one entry per row and per column has modulus above
    /// `zero_tol` — a permutation matrix times diagonal phases.
    pub fn is_generalized_permutation(&self, zero_tol: f64) -> bool {
        for i in 0..3 {
            let row = (0..3).filter(|&j| self.m[(i, j)].norm() > zero_tol).count();
            let col = (0..3).filter(|&j| self.m[(j, i)].norm() > zero_tol).count();
            if row != 1 || col != 1 {
                return false;
            }
        }
        true
    }

    /// Applies the diagonal-zero trichotomy at tolerance `zero_tol`.
    ///
    /// Unitarity forces any matrix with all three diagonals zero to be a
    /// generalized permutation, so three zeros land in the trivial class as
    /// well.
    pub fn classify(&self, zero_tol: f64) -> CoinClassification {
        let zero_diagonal_count = self.zero_diagonal_count(zero_tol);
        let trivial = self.is_generalized_permutation(zero_tol) || zero_diagonal_count == 3;
        let verdict = if trivial {
            Verdict::TrivialGeneralizedPermutation
        } else if zero_diagonal_count == 2 {
            Verdict::QuasiOneDimensionalRecurrent
        } else {
            Verdict::Transient
        };
        let propagation_direction = (verdict == Verdict::QuasiOneDimensionalRecurrent).then(|| {
            Displacement::ALL
                .into_iter()
                .find(|d| self.m[(d.index(), d.index())].norm() > zero_tol)
                .expect("exactly one nonzero diagonal entry")
        });
        CoinClassification {
            verdict,
            zero_diagonal_count,
            propagation_direction,
        }
    }

    /// [`classify`](CoinMatrix::classify) at the default tolerance.
    pub fn classify_default(&self) -> CoinClassification {
        self.classify(DEFAULT_ZERO_TOL)
    }
}

/// Max entrywise modulus of `M M^H - I`.
pub fn unitarity_deviation(m: &Matrix3<Complex64>) -> f64 {
    let d = m * m.adjoint() - Matrix3::identity();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The symmetric chirality `(1,1,1)/sqrt 3` — the Grover coin's invariant
/// direction at zero momentum.
pub fn symmetric_chirality() -> Vector3<Complex64> {
    let s = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    Vector3::new(s, s, s)
}

/// A representative of the fast-decay subspace `a + b + c = 0`:
/// `(1, e^{i 2pi/3}, e^{i 4pi/3}) / sqrt 3`.
pub fn fast_decay_chirality() -> Vector3<Complex64> {
    let r = 1.0 / 3f64.sqrt();
    Vector3::new(
        Complex64::new(r, 0.0),
        Complex64::from_polar(r, 2.0 * std::f64::consts::PI / 3.0),
        Complex64::from_polar(r, 4.0 * std::f64::consts::PI / 3.0),
    )
}

/// Decomposes `psi` into its component along `(1,1,1)/sqrt 3` and the
/// orthogonal remainder. The remainder spans the fast-decay subspace
/// (component sum zero), whose return probability decays with a doubled
/// exponent under the Grover walk.
pub fn fast_decay_projection(psi: &Vector3<Complex64>) -> (Complex64, Vector3<Complex64>) {
    let v1 = symmetric_chirality();
    let component = v1.dotc(psi);
    let residual = psi - v1 * component;
    (component, residual)
}

/// Haar-random 3x3 unitary: complex Gaussian matrix followed by
/// modified Gram-Schmidt on columns. The positive-pivot convention makes the
/// decomposition unique, which is what makes the result Haar-distributed.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> CoinMatrix {
    loop {
        let g = Matrix3::from_fn(|_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut cols = [Vector3::zeros(); 3];
        let mut ok = true;
        for j in 0..3 {
            let mut v: Vector3<Complex64> = g.column(j).into_owned();
            for c in cols.iter().take(j) {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
            let n = v.norm();
            if n < 1e-9 {
                ok = false;
                break;
            }
            cols[j] = v.unscale(n);
        }
        if ok {
            return CoinMatrix {
                m: Matrix3::from_columns(&cols),
                label: "random".to_string(),
            };
        }
    }
}

/// Haar-random 2x2 unitary block, same construction as [`random_unitary`].
fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> [[Complex64; 2]; 2] {
    loop {
        let g: [[Complex64; 2]; 2] = std::array::from_fn(|_| {
            std::array::from_fn(|_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
        });
        let n0 = (g[0][0].norm_sqr() + g[1][0].norm_sqr()).sqrt();
        if n0 < 1e-9 {
            continue;
        }
        let c0 = [g[0][0] / n0, g[1][0] / n0];
        let proj = c0[0].conj() * g[0][1] + c0[1].conj() * g[1][1];
        let v = [g[0][1] - proj * c0[0], g[1][1] - proj * c0[1]];
        let n1 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n1 < 1e-9 {
            continue;
        }
        return [[c0[0], v[0] / n1], [c0[1], v[1] / n1]];
    }
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Random unitary with zero diagonal everywhere except the `keep` slot.
///
/// With the surviving diagonal entry in the middle slot, unitarity forces one
/// of exactly two sparsity patterns:
///
/// ```text
///   A = [[0,0,b],[c,d,0],[f,g,0]]      B = [[0,a,b],[0,d,e],[f,0,0]]
/// ```
///
/// with `|b| = 1` (resp. `|f| = 1`) and a 2x2 unitary in the remaining
/// entries. The sampler draws one of the two patterns at random and then
/// conjugates by a cyclic permutation to move the nonzero diagonal entry into
/// `keep`. Entries are resampled until all free entries are well away from
/// zero, so the result is never itself a generalized permutation.
pub fn random_two_zero_diagonal<R: Rng + ?Sized>(rng: &mut R, keep: Displacement) -> CoinMatrix {
    let z = Complex64::new(0.0, 0.0);
    let block = loop {
        let b = random_unitary2(rng);
        let min = b.iter().flatten().map(|e| e.norm()).fold(f64::INFINITY, f64::min);
        if min > 0.1 {
            break b;
        }
    };
    let phase = random_phase(rng);
    let base = if rng.random_bool(0.5) {
        // Pattern A: columns (0, c, f), (0, d, g), (b, 0, 0).
        Matrix3::new(
            z, z, phase, //
            block[0][0], block[0][1], z, //
            block[1][0], block[1][1], z,
        )
    } else {
        // Pattern B: rows (0, a, b), (0, d, e), (f, 0, 0).
        Matrix3::new(
            z, block[0][0], block[0][1], //
            z, block[1][0], block[1][1], //
            phase, z, z,
        )
    };
    // Conjugation by the cyclic permutation rotates diagonal slots:
    // (P M P^T)_{ii} = M_{i+1,i+1}, so each application moves the surviving
    // entry from slot 1 (its position in the base patterns) one slot down.
    let cyc = CoinMatrix::permutation([2, 3, 1]).expect("valid permutation").m;
    let m = match keep {
        Displacement::E2 => base,
        Displacement::E1 => cyc * base * cyc.transpose(),
        Displacement::E3 => cyc.transpose() * base * cyc,
    };
    CoinMatrix {
        m,
        label: "random-two-zero".to_string(),
    }
}

/// Random generalized permutation: a random permutation of `1,2,3` times
/// random diagonal phases.
pub fn random_generalized_permutation<R: Rng + ?Sized>(rng: &mut R) -> CoinMatrix {
    let sigmas = [
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ];
    let sigma = sigmas[rng.random_range(0..6)];
    let p = CoinMatrix::permutation(sigma).expect("valid permutation").m;
    let d = Matrix3::from_diagonal(&Vector3::new(
        random_phase(rng),
        random_phase(rng),
        random_phase(rng),
    ));
    CoinMatrix {
        m: d * p,
        label: "random-generalized-permutation".to_string(),
    }
}
