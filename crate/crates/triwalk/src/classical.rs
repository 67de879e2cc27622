//! Classical 3-way random walk baseline on the same lattice.
//!
//! A classical walker steps along `e1`, `e2`, or `e3` with probability 1/3
//! each. It sits at the origin at time `t` iff it took equally many steps in
//! all three directions, so
//!
//! ```text
//!   p0(t) = t! / ((t/3)!)^3 / 3^t     for t mod 3 = 0, else 0,
//! ```
//!
//! the central element of Pascal's pyramid over the total path count. With
//! Stirling's approximation `p0(t) ~ 3 sqrt(3) / (2 pi t)`, so the return sum
//! `S_T = sum_{t<=T} p0(t)` diverges logarithmically and the classical walk
//! is recurrent: its Pólya number `P = 1 - 1/S` is 1.
//!
//! Note the `1/t` tail lives on the `t mod 3 = 0` sublattice only, so `S_T`
//! grows like `(sqrt(3)/(2 pi)) ln T`: one third of the naive all-`t` slope.
//!
//! Everything exact is computed in big-integer arithmetic and converted to
//! floating point only at the boundary.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `p0(t)` exactly. Zero (exactly) unless `t` is a multiple of 3.
pub fn classical_p0_exact(t: usize) -> BigRational {
    if !t.is_multiple_of(3) {
        return BigRational::zero();
    }
    let n = t / 3;
    // Incremental multinomial: C0(3n) = C0(3n-3) * (3n-2)(3n-1)(3n) / n^3,
    // with every division exact.
    let mut c0 = BigUint::one();
    for m in 1..=n {
        c0 *= BigUint::from(3 * m - 2) * BigUint::from(3 * m - 1) * BigUint::from(3 * m);
        c0 /= BigUint::from(m).pow(3);
    }
    let denom = BigUint::from(3u32).pow(t as u32);
    BigRational::new(BigInt::from(c0), BigInt::from(denom))
}

/// `p0(t)` as a float, via exact arithmetic (safe far beyond the range where
/// numerator and denominator individually overflow `f64`).
pub fn classical_p0_float(t: usize) -> f64 {
    ratio_to_f64(&classical_p0_exact(t))
}

/// Converts an exact probability (in `[0, 1]`) to `f64` without overflowing:
/// scale the quotient into 64 fixed-point bits first.
fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let scaled = (num << 64u32) / den;
    scaled.to_f64().expect("fits after scaling") / 2.0f64.powi(64)
}

/// Stirling's approximation `3 sqrt(3) / (2 pi t)`.
pub fn stirling_p0(t: f64) -> f64 {
    3.0 * 3.0f64.sqrt() / (2.0 * std::f64::consts::PI * t)
}

/// One row of the classical baseline table.
#[derive(Clone, Debug)]
pub struct ClassicalEntry {
    pub t: usize,
    pub p0_exact: BigRational,
    pub p0_float: f64,
    pub stirling: f64,
}

/// Exact and Stirling return probabilities for every `t = 3, 6, ..., <= t_max`,
/// computed incrementally.
pub fn classical_series(t_max: usize) -> Vec<ClassicalEntry> {
    let mut entries = Vec::with_capacity(t_max / 3);
    let mut c0 = BigUint::one();
    let mut pow3 = BigUint::one();
    for m in 1..=t_max / 3 {
        let t = 3 * m;
        c0 *= BigUint::from(3 * m - 2) * BigUint::from(3 * m - 1) * BigUint::from(3 * m);
        c0 /= BigUint::from(m).pow(3);
        pow3 *= BigUint::from(27u32);
        let p0_exact = BigRational::new(BigInt::from(c0.clone()), BigInt::from(pow3.clone()));
        let p0_float = ratio_to_f64(&p0_exact);
        entries.push(ClassicalEntry {
            t,
            p0_exact,
            p0_float,
            stirling: stirling_p0(t as f64),
        });
    }
    entries
}

/// Partial return sum and Pólya number: `S_T = sum_{t<=T} p0(t)` (the `t = 0`
/// term contributes 1) and `1 - 1/S_T`.
///
/// `S_T` grows like `(sqrt(3)/(2 pi)) ln T`, so the partial Pólya value
/// climbs toward 1 — logarithmically slowly.
pub fn classical_polya_partial(t_max: usize) -> (f64, f64) {
    let s: f64 = 1.0
        + classical_series(t_max)
            .iter()
            .map(|e| e.p0_float)
            .sum::<f64>();
    (s, 1.0 - 1.0 / s)
}

/// Monte-Carlo estimate of `p0(t)`: fraction of `samples` independent 3-way
/// paths that end at the origin. Returns `(estimate, standard_error)`.
/// Deterministic for a fixed seed.
pub fn classical_monte_carlo_p0(t: usize, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let (mut a, mut b) = (0i64, 0i64);
        for _ in 0..t {
            match rng.random_range(0..3u8) {
                0 => a += 1,
                1 => b += 1,
                _ => {
                    a -= 1;
                    b -= 1;
                }
            }
        }
        if a == 0 && b == 0 {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let stderr = (p * (1.0 - p) / samples as f64).sqrt();
    (p, stderr)
}
