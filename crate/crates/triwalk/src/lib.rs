//! Three-state discrete-time quantum walks on the planar triangular lattice.
//!
//! A walker carries a three-dimensional internal ("chirality") state, one
//! component per lattice direction. Each time step applies a 3x3 unitary coin
//! to the chirality at every site and then shifts each component along its
//! direction. This crate provides:
//!
//! - exact real-space evolution from a localized start ([`engine`]), tracking
//!   the return probability p0(t) at the origin,
//! - the momentum-space propagator and its dispersion surfaces ([`spectral`]),
//!   including location and classification of the stationary points that set
//!   the asymptotic decay of p0(t),
//! - a structural classification of coins by their diagonal zero pattern
//!   ([`coin`]), which predicts whether the walk is transient, recurrent along
//!   a line, or a trivial relabeling walk,
//! - log-log decay fits and a Polya-type recurrence functional ([`recurrence`]),
//! - the classical random-walk baseline with exact rational arithmetic
//!   ([`classical`]).
//!
//! The `examples/` directory is the front door: each example is a runnable
//! demonstration of one capability. A thin CLI (`triwalk`) exposes the same
//! operations for scripting; see [`cli`].
//!
//! ```
//! use triwalk::coin::CoinMatrix;
//! use triwalk::engine::{self, WalkRun};
//!
//! // Symmetric start under the Grover coin: p0(3) = 64/81.
//! let run = WalkRun::new(CoinMatrix::grover(), triwalk::coin::symmetric_chirality(), 3).unwrap();
//! let (_, series) = engine::evolve(&run);
//! assert!((series.probability_at(3).unwrap() - 64.0 / 81.0).abs() < 1e-12);
//! ```

pub mod classical;
pub mod cli;
pub mod coin;
pub mod engine;
pub mod lattice;
pub mod recurrence;
pub mod spectral;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix failed the unitarity check.
    #[error("matrix is not unitary: max |C C^H - I| entry {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    /// An initial chirality vector was not normalized.
    #[error("chirality vector is not normalized: | ||psi|| - 1 | = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    /// The brute-force path-sum oracle refuses long horizons (3^t paths).
    #[error("path-sum oracle supports t <= {max}, got t = {got}")]
    PathSumTooDeep { got: usize, max: usize },

    /// A decay fit had too few usable points in the window.
    #[error("decay fit needs at least {needed} usable points in the window, found {found}")]
    TooFewFitPoints { found: usize, needed: usize },

    /// A permutation preset was not a permutation of {1,2,3}.
    #[error("invalid permutation {0:?}: expected the images of 1,2,3 in some order")]
    BadPermutation([usize; 3]),

    /// A user-facing string (coin spec, init spec, window, ...) failed to parse.
    #[error("invalid {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
