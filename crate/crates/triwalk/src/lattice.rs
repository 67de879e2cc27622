//! Oriented triangular lattice: coordinates, displacement directions, and the
//! dense amplitude field a walk evolves on.
//!
//! Sites are addressed by integer coordinates `(a, b)` meaning the point
//! `a*e1 + b*e2` in the plane, where the three unit displacements
//!
//! ```text
//!   e1 = (-1/2,  sqrt(3)/2)
//!   e2 = ( 1,    0        )
//!   e3 = (-1/2, -sqrt(3)/2)
//! ```
//!
//! sum to zero. Moving along `e3` therefore decrements both coordinates:
//! `e3 = -(e1 + e2)`.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::{Error, Result};

/// `sqrt(3)`, rounded to the nearest f64.
pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// One of the three lattice directions a chirality component moves along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Displacement {
    E1,
    E2,
    E3,
}

impl Displacement {
    pub const ALL: [Displacement; 3] = [Displacement::E1, Displacement::E2, Displacement::E3];

    /// Zero-based index of the chirality component carried along this direction.
    pub fn index(self) -> usize {
        match self {
            Displacement::E1 => 0,
            Displacement::E2 => 1,
            Displacement::E3 => 2,
        }
    }

    /// The displacement as a vector in the plane.
    pub fn physical(self) -> (f64, f64) {
        match self {
            Displacement::E1 => (-0.5, SQRT3 / 2.0),
            Displacement::E2 => (1.0, 0.0),
            Displacement::E3 => (-0.5, -SQRT3 / 2.0),
        }
    }

    /// The change in `(a, b)` coordinates caused by one step along this direction.
    pub fn coord_step(self) -> (i64, i64) {
        match self {
            Displacement::E1 => (1, 0),
            Displacement::E2 => (0, 1),
            Displacement::E3 => (-1, -1),
        }
    }
}

/// A lattice site, addressed as `a*e1 + b*e2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteCoord {
    pub a: i64,
    pub b: i64,
}

impl SiteCoord {
    pub const ORIGIN: SiteCoord = SiteCoord { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> SiteCoord {
        SiteCoord { a, b }
    }

    /// Position of the site in the plane.
    pub fn physical(self) -> (f64, f64) {
        let a = self.a as f64;
        let b = self.b as f64;
        (-0.5 * a + b, SQRT3 / 2.0 * a)
    }

    /// The site reached by one step along `d`.
    pub fn step(self, d: Displacement) -> SiteCoord {
        let (da, db) = d.coord_step();
        SiteCoord::new(self.a + da, self.b + db)
    }
}

/// The full chirality field of a walk at one instant.
///
/// Storage is a dense square block `|a| <= half_width`, `|b| <= half_width`,
/// which always contains the support of a walk started at the origin (after
/// `t` steps the support lies in `|a|, |b|, |a - b| <= t`). Sites outside the
/// block read as zero.
#[derive(Clone, Debug)]
pub struct WalkState {
    time: usize,
    half_width: i64,
    /// Row-major over `a`, then `b`; see [`WalkState::index`].
    amps: Vec<Vector3<Complex64>>,
}

impl WalkState {
    /// A walker at the origin at `t = 0` with the given internal state.
    ///
    /// The chirality must be normalized to 1 within `1e-12`; evolution is
    /// purely unitary and never renormalizes, so norm drift stays a useful
    /// error signal.
    pub fn new_localized(chirality: Vector3<Complex64>) -> Result<WalkState> {
        let deviation = (chirality.norm() - 1.0).abs();
        if deviation > 1e-12 {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(WalkState {
            time: 0,
            half_width: 0,
            amps: vec![chirality],
        })
    }

    /// Internal constructor for the evolution engine.
    pub(crate) fn from_parts(time: usize, half_width: i64, amps: Vec<Vector3<Complex64>>) -> WalkState {
        debug_assert_eq!(amps.len(), (2 * half_width as usize + 1).pow(2));
        WalkState { time, half_width, amps }
    }

    /// Number of steps taken since the localized start.
    pub fn time(&self) -> usize {
        self.time
    }

    /// Half-width of the stored square block of sites.
    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    fn index(&self, s: SiteCoord) -> Option<usize> {
        let w = self.half_width;
        if s.a.abs() > w || s.b.abs() > w {
            return None;
        }
        let side = (2 * w + 1) as usize;
        Some((s.a + w) as usize * side + (s.b + w) as usize)
    }

    /// Chirality amplitude at a site (zero outside the stored block).
    pub fn amplitude_at(&self, s: SiteCoord) -> Vector3<Complex64> {
        match self.index(s) {
            Some(i) => self.amps[i],
            None => Vector3::zeros(),
        }
    }

    /// Probability of finding the walker at a site, `|psi(s)|^2` summed over
    /// chirality components.
    pub fn probability_at(&self, s: SiteCoord) -> f64 {
        self.amplitude_at(s).norm_squared()
    }

    /// Total probability over all sites. Exactly 1 up to floating-point drift.
    pub fn total_norm(&self) -> f64 {
        self.amps.iter().map(|v| v.norm_squared()).sum()
    }

    /// All stored sites with their amplitudes, in `(a, b)` lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (SiteCoord, &Vector3<Complex64>)> {
        let w = self.half_width;
        let side = 2 * w + 1;
        self.amps.iter().enumerate().map(move |(i, amp)| {
            let a = i as i64 / side - w;
            let b = i as i64 % side - w;
            (SiteCoord::new(a, b), amp)
        })
    }

    /// Every site whose probability exceeds `threshold`, in `(a, b)` order.
    ///
    /// With the default threshold of zero this is exactly the support of the
    /// state.
    pub fn full_distribution(&self, threshold: f64) -> Vec<(SiteCoord, f64)> {
        self.iter()
            .filter_map(|(s, amp)| {
                let p = amp.norm_squared();
                (p > threshold).then_some((s, p))
            })
            .collect()
    }

}
