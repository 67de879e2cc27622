//! Real-space time evolution.
//!
//! One step applies the coin to the chirality vector at every site and then
//! shifts: the rotated component `(C psi(m))_i` is deposited at `m + e_i`.
//! Evolution is purely unitary — the total norm is never renormalized, so its
//! drift doubles as an accuracy monitor.
//!
//! [`brute_force_amplitude`] is an independent oracle that enumerates all
//! `3^t` chirality paths explicitly; it shares no machinery with [`step`].

use std::collections::HashMap;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::coin::CoinMatrix;
use crate::lattice::{Displacement, SiteCoord, WalkState};
use crate::recurrence::ReturnSeries;
use crate::{Error, Result};

/// Hard ceiling for the path-sum oracle (`3^t` paths).
pub const PATH_SUM_MAX_STEPS: usize = 9;

/// A fully specified walk experiment: coin, normalized initial chirality at
/// the origin, and the number of steps to take.
#[derive(Clone, Debug)]
pub struct WalkRun {
    coin: CoinMatrix,
    initial_chirality: Vector3<Complex64>,
    horizon: usize,
}

impl WalkRun {
    /// The chirality must be normalized within `1e-12`; `horizon >= 1`.
    pub fn new(
        coin: CoinMatrix,
        initial_chirality: Vector3<Complex64>,
        horizon: usize,
    ) -> Result<WalkRun> {
        let deviation = (initial_chirality.norm() - 1.0).abs();
        if deviation > 1e-12 {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(WalkRun {
            coin,
            initial_chirality,
            horizon,
        })
    }

    pub fn coin(&self) -> &CoinMatrix {
        &self.coin
    }

    pub fn initial_chirality(&self) -> &Vector3<Complex64> {
        &self.initial_chirality
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

/// One step of the walk: coin first, then conditional shift, into a fresh
/// buffer one site wider on every side.
pub fn step(state: &WalkState, coin: &CoinMatrix) -> WalkState {
    let w_new = state.half_width() + 1;
    let side = (2 * w_new + 1) as usize;
    let mut amps = vec![Vector3::<Complex64>::zeros(); side * side];
    let index = |s: SiteCoord| ((s.a + w_new) as usize) * side + (s.b + w_new) as usize;
    for (site, amp) in state.iter() {
        if amp.norm_squared() == 0.0 {
            continue;
        }
        let rotated = coin.matrix() * amp;
        for d in Displacement::ALL {
            let i = d.index();
            amps[index(site.step(d))][i] += rotated[i];
        }
    }
    WalkState::from_parts(state.time() + 1, w_new, amps)
}

/// Runs the walk for the full horizon, recording the return probability
/// `p0(t)` for `t = 0..=T`.
pub fn evolve(run: &WalkRun) -> (WalkState, ReturnSeries) {
    evolve_with(run, |_| {})
}

/// [`evolve`], additionally calling `observer` on the state at every time
/// step (including `t = 0`). Useful for snapshots and confinement profiles
/// without storing the whole history.
pub fn evolve_with(
    run: &WalkRun,
    mut observer: impl FnMut(&WalkState),
) -> (WalkState, ReturnSeries) {
    let mut state = WalkState::new_localized(*run.initial_chirality())
        .expect("chirality validated at WalkRun construction");
    let mut entries = Vec::with_capacity(run.horizon() + 1);
    entries.push((0, state.probability_at(SiteCoord::ORIGIN)));
    observer(&state);
    for t in 1..=run.horizon() {
        state = step(&state, run.coin());
        entries.push((t, state.probability_at(SiteCoord::ORIGIN)));
        observer(&state);
    }
    let series = ReturnSeries::new(
        entries,
        run.coin().label().to_string(),
        *run.initial_chirality(),
    );
    (state, series)
}

/// Amplitude field after `t` steps computed by explicit path summation:
/// every sequence of chirality components `(j, i_1, ..., i_t)` contributes
/// `C_{i_t, i_{t-1}} ... C_{i_1, j} psi_j` at the site `e_{i_1} + ... + e_{i_t}`
/// with final chirality `i_t`.
pub fn brute_force_field(
    coin: &CoinMatrix,
    chirality: &Vector3<Complex64>,
    t: usize,
) -> Result<HashMap<SiteCoord, Vector3<Complex64>>> {
    if t > PATH_SUM_MAX_STEPS {
        return Err(Error::PathSumTooDeep {
            got: t,
            max: PATH_SUM_MAX_STEPS,
        });
    }
    let mut field: HashMap<SiteCoord, Vector3<Complex64>> = HashMap::new();
    if t == 0 {
        field.insert(SiteCoord::ORIGIN, *chirality);
        return Ok(field);
    }
    let c = coin.matrix();
    let paths = 3usize.pow(t as u32);
    for start in 0..3 {
        for code in 0..paths {
            let mut amp = chirality[start];
            let mut prev = start;
            let mut site = SiteCoord::ORIGIN;
            let mut rest = code;
            for _ in 0..t {
                let i = rest % 3;
                rest /= 3;
                amp *= c[(i, prev)];
                prev = i;
                site = site.step(Displacement::ALL[i]);
            }
            field.entry(site).or_insert_with(Vector3::zeros)[prev] += amp;
        }
    }
    Ok(field)
}

/// Path-sum amplitude at one site; see [`brute_force_field`].
pub fn brute_force_amplitude(
    coin: &CoinMatrix,
    chirality: &Vector3<Complex64>,
    t: usize,
    site: SiteCoord,
) -> Result<Vector3<Complex64>> {
    let field = brute_force_field(coin, chirality, t)?;
    Ok(field.get(&site).copied().unwrap_or_else(Vector3::zeros))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn basis1() -> Vector3<Complex64> {
        Vector3::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    #[test]
    fn identity_coin_is_a_pure_shift() {
        let state = WalkState::new_localized(basis1()).unwrap();
        let next = step(&state, &CoinMatrix::identity());
        assert_eq!(next.time(), 1);
        let dist = next.full_distribution(0.0);
        assert_eq!(dist.len(), 1);
        assert_eq!(dist[0].0, SiteCoord::new(1, 0));
        assert_relative_eq!(dist[0].1, 1.0, epsilon = 1e-15);
        let amp = next.amplitude_at(SiteCoord::new(1, 0));
        assert_relative_eq!(amp[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_start_splits_evenly_under_grover() {
        // psi_S has row sums 1 under the Grover coin, so each direction gets
        // amplitude 1/sqrt(3): probability 1/3 at each neighbor.
        let state = WalkState::new_localized(coin::symmetric_chirality()).unwrap();
        let next = step(&state, &CoinMatrix::grover());
        for (d, site) in [
            (Displacement::E1, SiteCoord::new(1, 0)),
            (Displacement::E2, SiteCoord::new(0, 1)),
            (Displacement::E3, SiteCoord::new(-1, -1)),
        ] {
            let p = next.probability_at(site);
            assert_relative_eq!(p, 1.0 / 3.0, epsilon = 1e-14);
            let amp = next.amplitude_at(site);
            assert_relative_eq!(amp[d.index()].re, 1.0 / 3f64.sqrt(), epsilon = 1e-14);
        }
        assert_relative_eq!(next.total_norm(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn sublattice_zero_and_first_return() {
        let run = WalkRun::new(CoinMatrix::grover(), coin::symmetric_chirality(), 3).unwrap();
        let (_, series) = evolve(&run);
        assert_relative_eq!(series.probability_at(0).unwrap(), 1.0, epsilon = 1e-14);
        assert!(series.probability_at(1).unwrap() < 1e-12);
        assert!(series.probability_at(2).unwrap() < 1e-12);
        // First return of the symmetric Grover walk: p0(3) = 64/81.
        assert_relative_eq!(series.probability_at(3).unwrap(), 64.0 / 81.0, epsilon = 1e-12);
    }

    #[test]
    fn cyclic_permutation_relocalizes_every_third_step() {
        let coin = CoinMatrix::permutation([2, 3, 1]).unwrap();
        let run = WalkRun::new(coin, basis1(), 9).unwrap();
        let (_, series) = evolve(&run);
        for t in [3, 6, 9] {
            assert_relative_eq!(series.probability_at(t).unwrap(), 1.0, epsilon = 1e-12);
        }
        for t in [1, 2, 4, 5, 7, 8] {
            assert!(series.probability_at(t).unwrap() < 1e-12);
        }
    }

    #[test]
    fn path_sum_base_cases() {
        let field = brute_force_field(&CoinMatrix::identity(), &basis1(), 0).unwrap();
        assert_eq!(field.len(), 1);
        assert_eq!(field[&SiteCoord::ORIGIN], basis1());

        let amp =
            brute_force_amplitude(&CoinMatrix::identity(), &basis1(), 1, SiteCoord::new(1, 0))
                .unwrap();
        assert_relative_eq!(amp[0].re, 1.0, epsilon = 1e-15);

        assert!(brute_force_field(&CoinMatrix::identity(), &basis1(), 10).is_err());
    }

    #[test]
    fn path_sum_matches_engine_for_reference_coins() {
        let coins = vec![
            CoinMatrix::grover(),
            CoinMatrix::recurrent(),
            CoinMatrix::identity(),
            CoinMatrix::permutation([2, 3, 1]).unwrap(),
        ];
        let chirality = coin::symmetric_chirality();
        for c in &coins {
            assert_engine_equals_path_sum(c, &chirality, 4, 1e-12);
        }
    }

    fn assert_engine_equals_path_sum(
        c: &CoinMatrix,
        chirality: &Vector3<Complex64>,
        t_max: usize,
        tol: f64,
    ) {
        let run = WalkRun::new(c.clone(), *chirality, t_max).unwrap();
        let mut states = Vec::new();
        evolve_with(&run, |s| states.push(s.clone()));
        for (t, state) in states.iter().enumerate() {
            let field = brute_force_field(c, chirality, t).unwrap();
            // Every site of the engine state, including zero-amplitude ones.
            for (site, amp) in state.iter() {
                let oracle = field.get(&site).copied().unwrap_or_else(Vector3::zeros);
                let diff = (amp - oracle).norm();
                assert!(
                    diff < tol,
                    "engine/oracle mismatch at t={t} site=({}, {}): {diff:.3e}",
                    site.a,
                    site.b
                );
            }
            // And every site of the oracle field (catches lost amplitude).
            for (site, oracle) in &field {
                let diff = (state.amplitude_at(*site) - oracle).norm();
                assert!(diff < tol, "oracle site missing from engine at t={t}");
            }
        }
    }

    #[test]
    fn grover_distribution_is_rotation_invariant_for_symmetric_start() {
        // Rotating the lattice by 2pi/3 maps (a, b) to (b - a, -a). With the
        // symmetric start the distribution must be invariant at every time.
        let run = WalkRun::new(CoinMatrix::grover(), coin::symmetric_chirality(), 12).unwrap();
        let (state, _) = evolve(&run);
        for (site, amp) in state.iter() {
            let rotated = SiteCoord::new(site.b - site.a, -site.a);
            let p = amp.norm_squared();
            let pr = state.probability_at(rotated);
            assert!(
                (p - pr).abs() < 1e-10,
                "asymmetry at ({}, {}): {p} vs {pr}",
                site.a,
                site.b
            );
        }
    }

    #[test]
    fn cyclic_chirality_shift_rotates_the_grover_distribution() {
        // Relabeling the chirality components cyclically rotates the whole
        // probability distribution by 2pi/3: p'((b-a, -a)) = p((a, b)).
        let chi = Vector3::new(
            Complex64::new(0.8, 0.1),
            Complex64::new(0.2, -0.3),
            Complex64::new(0.1, 0.45),
        );
        let chi = chi.unscale(chi.norm());
        let shifted = Vector3::new(chi[1], chi[2], chi[0]);
        let t = 10;
        let (base, _) = evolve(&WalkRun::new(CoinMatrix::grover(), chi, t).unwrap());
        let (rot, _) = evolve(&WalkRun::new(CoinMatrix::grover(), shifted, t).unwrap());
        for (site, amp) in base.iter() {
            let image = SiteCoord::new(site.b - site.a, -site.a);
            let diff = (amp.norm_squared() - rot.probability_at(image)).abs();
            assert!(diff < 1e-10, "rotation map failed at ({}, {})", site.a, site.b);
        }
    }

    #[test]
    fn norm_is_preserved_per_step() {
        let mut state = WalkState::new_localized(coin::fast_decay_chirality()).unwrap();
        let coin = CoinMatrix::grover();
        for _ in 0..40 {
            state = step(&state, &coin);
            assert!((state.total_norm() - 1.0).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn path_sum_matches_engine_for_random_coins(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = coin::random_unitary(&mut rng);
            // Random normalized chirality.
            let raw = Vector3::new(
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            );
            prop_assume!(raw.norm() > 1e-3);
            let chi = raw.unscale(raw.norm());
            assert_engine_equals_path_sum(&c, &chi, 4, 1e-11);
        }
    }
}
