//! End-to-end acceptance suite.
//!
//! One test per criterion; each prints a single `ACCEPTANCE n: PASS/FAIL`
//! line (visible with `cargo test -- --nocapture`, and on any failure).
//! Long walks are shared between criteria through lazy statics.

use std::sync::OnceLock;

use nalgebra::Vector3;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use triwalk::classical::{
    classical_monte_carlo_p0, classical_p0_exact, classical_polya_partial, classical_series,
};
use triwalk::coin::{fast_decay_chirality, random_unitary, symmetric_chirality, CoinMatrix, Verdict};
use triwalk::engine::{brute_force_field, evolve_with, WalkRun};
use triwalk::lattice::{Displacement, WalkState};
use triwalk::recurrence::{fit_decay_exponent, verdict, DecayFit, ReturnSeries};
use triwalk::spectral::{
    build_dispersion_surface, default_grad_tol, find_stationary_points, momentum_propagator,
    DecayClass, MomentumPoint,
};

const HORIZON: usize = 300;

// ---------------------------------------------------------------------------
// Shared long runs
// ---------------------------------------------------------------------------

struct RunArtifacts {
    series: ReturnSeries,
    final_norm: f64,
    /// Max total probability at rows |a| >= 3 (physical |y| > 2) over t <= 100.
    off_band_max_t100: f64,
}

fn run_walk(coin: CoinMatrix, chirality: Vector3<Complex64>) -> RunArtifacts {
    let run = WalkRun::new(coin, chirality, HORIZON).expect("valid run");
    let mut off_band = 0.0f64;
    let (final_state, series) = evolve_with(&run, |state: &WalkState| {
        if state.time() <= 100 {
            let leak: f64 = state
                .iter()
                .filter(|(site, _)| site.a.abs() >= 3)
                .map(|(_, amp)| amp.norm_squared())
                .sum();
            off_band = off_band.max(leak);
        }
    });
    RunArtifacts {
        series,
        final_norm: final_state.total_norm(),
        off_band_max_t100: off_band,
    }
}

fn grover_symmetric() -> &'static RunArtifacts {
    static RUN: OnceLock<RunArtifacts> = OnceLock::new();
    RUN.get_or_init(|| run_walk(CoinMatrix::grover(), symmetric_chirality()))
}

fn grover_fast_decay() -> &'static RunArtifacts {
    static RUN: OnceLock<RunArtifacts> = OnceLock::new();
    RUN.get_or_init(|| run_walk(CoinMatrix::grover(), fast_decay_chirality()))
}

fn crec_symmetric() -> &'static RunArtifacts {
    static RUN: OnceLock<RunArtifacts> = OnceLock::new();
    RUN.get_or_init(|| run_walk(CoinMatrix::recurrent(), symmetric_chirality()))
}

fn cyclic_perm_symmetric() -> &'static RunArtifacts {
    static RUN: OnceLock<RunArtifacts> = OnceLock::new();
    RUN.get_or_init(|| {
        run_walk(
            CoinMatrix::permutation([2, 3, 1]).unwrap(),
            symmetric_chirality(),
        )
    })
}

fn fit(series: &ReturnSeries) -> DecayFit {
    fit_decay_exponent(series, 30, HORIZON).expect("enough fit points")
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

fn report(criterion: usize, summary: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("ACCEPTANCE {criterion}: PASS - {summary}");
    } else {
        println!("ACCEPTANCE {criterion}: FAIL - {summary}");
        for f in &failures {
            println!("    {f}");
        }
        panic!("acceptance criterion {criterion} failed:\n{}", failures.join("\n"));
    }
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_grover_transience_exponent() {
    let run = grover_symmetric();
    let f = fit(&run.series);
    let mut failures = Vec::new();
    check(&mut failures, (f.exponent + 4.0 / 3.0).abs() <= 0.15, || {
        format!("exponent {:.4} not within 0.15 of -4/3", f.exponent)
    });
    check(&mut failures, f.r_squared >= 0.98, || {
        format!("R^2 {:.5} below 0.98", f.r_squared)
    });
    report(
        1,
        &format!(
            "grover symmetric decay exponent {:.4} +/- {:.4} (target -4/3 +/- 0.15), R^2 {:.5}",
            f.exponent, f.stderr, f.r_squared
        ),
        failures,
    );
}

#[test]
fn criterion_2_fast_decay_doubling() {
    let run = grover_fast_decay();
    let f = fit(&run.series);
    let mut failures = Vec::new();
    check(&mut failures, (f.exponent + 8.0 / 3.0).abs() <= 0.3, || {
        format!("exponent {:.4} not within 0.3 of -8/3", f.exponent)
    });
    report(
        2,
        &format!(
            "grover fast-decay exponent {:.4} +/- {:.4} (target -8/3 +/- 0.3)",
            f.exponent, f.stderr
        ),
        failures,
    );
}

#[test]
fn criterion_3_recurrent_quasi1d_coin() {
    let run = crec_symmetric();
    let f = fit(&run.series);
    let mut failures = Vec::new();
    check(&mut failures, (f.exponent + 1.0).abs() <= 0.1, || {
        format!("exponent {:.4} not within 0.1 of -1", f.exponent)
    });
    check(&mut failures, run.off_band_max_t100 < 1e-6, || {
        format!(
            "probability outside |y| <= 2 reached {:.3e} within t <= 100",
            run.off_band_max_t100
        )
    });
    report(
        3,
        &format!(
            "recurrent-coin exponent {:.4} +/- {:.4} (target -1 +/- 0.1), max off-band probability {:.1e}",
            f.exponent, f.stderr, run.off_band_max_t100
        ),
        failures,
    );
}

#[test]
fn criterion_4_classification_theorem() {
    let mut failures = Vec::new();

    let grover_class = CoinMatrix::grover().classify_default();
    check(&mut failures, grover_class.verdict == Verdict::Transient, || {
        format!("grover classified {:?}", grover_class.verdict)
    });

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..20 {
        let coin = random_unitary(&mut rng);
        let min_diag = coin
            .diagonal_moduli()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        check(&mut failures, min_diag > 1e-10, || {
            format!("random coin {i} unexpectedly has a zero diagonal entry")
        });
        let c = coin.classify_default();
        check(&mut failures, c.verdict == Verdict::Transient, || {
            format!("random coin {i} classified {:?}", c.verdict)
        });
    }

    let crec_class = CoinMatrix::recurrent().classify_default();
    check(
        &mut failures,
        crec_class.verdict == Verdict::QuasiOneDimensionalRecurrent,
        || format!("recurrent coin classified {:?}", crec_class.verdict),
    );
    check(
        &mut failures,
        crec_class.propagation_direction == Some(Displacement::E2),
        || {
            format!(
                "recurrent coin propagation direction {:?}",
                crec_class.propagation_direction
            )
        },
    );

    for p in CoinMatrix::all_permutations() {
        let c = p.classify_default();
        check(
            &mut failures,
            c.verdict == Verdict::TrivialGeneralizedPermutation,
            || format!("{} classified {:?}", p.label(), c.verdict),
        );
    }

    // Measured exponents agree with each predicted class.
    let pairs = [
        ("grover", grover_class, fit(&grover_symmetric().series)),
        ("crec", crec_class, fit(&crec_symmetric().series)),
        (
            "perm:231",
            CoinMatrix::permutation([2, 3, 1]).unwrap().classify_default(),
            fit(&cyclic_perm_symmetric().series),
        ),
    ];
    for (name, class, f) in &pairs {
        let v = verdict(class, f);
        check(&mut failures, v.consistent, || {
            format!("{name}: verdict inconsistent: {}", v.detail)
        });
    }

    report(
        4,
        "grover + 20 random -> transient; crec -> quasi-1D along e2; all permutations -> trivial; verdicts consistent",
        failures,
    );
}

#[test]
fn criterion_5_path_sum_oracle_equivalence() {
    let mut coins = vec![
        CoinMatrix::grover(),
        CoinMatrix::recurrent(),
        CoinMatrix::identity(),
        CoinMatrix::permutation([2, 3, 1]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for i in 0..10 {
        coins.push(random_unitary(&mut rng).with_label(format!("random #{i}")));
    }

    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for coin in &coins {
        let chirality = symmetric_chirality();
        let run = WalkRun::new(coin.clone(), chirality, 6).expect("valid run");
        let mut states: Vec<WalkState> = Vec::new();
        evolve_with(&run, |s| states.push(s.clone()));
        for (t, state) in states.iter().enumerate() {
            let oracle = brute_force_field(coin, &chirality, t).expect("t <= 9");
            let mut max_diff = 0.0f64;
            // Every site the oracle reaches...
            for (site, amp) in &oracle {
                let engine_amp = state.amplitude_at(*site);
                for c in 0..3 {
                    max_diff = max_diff.max((engine_amp[c] - amp[c]).norm());
                }
            }
            // ...and every site the engine populates.
            for (site, engine_amp) in state.iter() {
                let oracle_amp = oracle
                    .get(&site)
                    .copied()
                    .unwrap_or_else(Vector3::zeros);
                for c in 0..3 {
                    max_diff = max_diff.max((engine_amp[c] - oracle_amp[c]).norm());
                }
            }
            worst = worst.max(max_diff);
            check(&mut failures, max_diff <= 1e-10, || {
                format!(
                    "{}: engine vs path-sum mismatch {max_diff:.3e} at t = {t}",
                    coin.label()
                )
            });
        }
    }
    report(
        5,
        &format!(
            "engine equals 3^t path sum for 14 coins, every site and component, t <= 6 (worst diff {worst:.1e})"
        ),
        failures,
    );
}

#[test]
fn criterion_6_spectral_identities() {
    let n = 128;
    let mut failures = Vec::new();

    let mut coins = vec![CoinMatrix::grover()];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..10 {
        coins.push(
            random_unitary(&mut rng)
                .su3_normalized()
                .with_label(format!("random-su3 #{i}")),
        );
    }

    let mut worst = 0.0f64;
    for coin in &coins {
        let mut max_trace = 0.0f64;
        let mut max_pair = 0.0f64;
        let mut max_det = 0.0f64;
        for i1 in 0..n {
            for i2 in 0..n {
                let k = triwalk::spectral::grid_momentum(n, i1, i2);
                let prop = momentum_propagator(coin, &k);
                let lam = prop.eigenvalues();
                let m = &prop.matrix;
                let sum: Complex64 = lam.iter().sum();
                let pair = lam[0] * lam[1] + lam[0] * lam[2] + lam[1] * lam[2];
                let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
                    + m[(0, 0)] * m[(2, 2)]
                    - m[(0, 2)] * m[(2, 0)]
                    + m[(1, 1)] * m[(2, 2)]
                    - m[(1, 2)] * m[(2, 1)];
                let det = lam[0] * lam[1] * lam[2];
                max_trace = max_trace.max((sum - m.trace()).norm());
                max_pair = max_pair.max((pair - minors).norm());
                max_det = max_det.max((det - m.determinant()).norm());
            }
        }
        let coin_worst = max_trace.max(max_pair).max(max_det);
        worst = worst.max(coin_worst);
        check(&mut failures, coin_worst < 1e-8, || {
            format!(
                "{}: identity residuals trace {max_trace:.2e} pair {max_pair:.2e} det {max_det:.2e}",
                coin.label()
            )
        });
    }

    // The Grover walk keeps one eigenphase pinned at zero along two lines.
    let grover = CoinMatrix::grover();
    let mut max_line_omega = 0.0f64;
    for i in 0..=64 {
        let s = -std::f64::consts::PI + (i as f64 + 0.25) * std::f64::consts::TAU / 65.0;
        let on_axis = momentum_propagator(&grover, &MomentumPoint::new(0.0, s));
        let on_diag = momentum_propagator(&grover, &MomentumPoint::new(s, s / 3f64.sqrt()));
        max_line_omega = max_line_omega
            .max(on_axis.min_abs_phase())
            .max(on_diag.min_abs_phase());
    }
    check(&mut failures, max_line_omega < 1e-8, || {
        format!("flat-frequency lines: max |omega| = {max_line_omega:.3e}")
    });

    // And its stationary report must expose the rank-0 Hessian at k = 0.
    let surface = build_dispersion_surface(&grover, n);
    let stationary = find_stationary_points(&surface, default_grad_tol(n));
    let rank0_at_origin = stationary
        .points
        .iter()
        .any(|p| p.hessian_rank == 0 && (p.k.k1.powi(2) + p.k.k2.powi(2)).sqrt() < 0.1);
    check(&mut failures, rank0_at_origin, || {
        format!(
            "no rank-0 Hessian point near k = (0,0); classes found: {:?}",
            stationary.points.iter().map(|p| p.class).collect::<Vec<_>>()
        )
    });
    check(
        &mut failures,
        stationary.decay_class == DecayClass::RankZeroHessian,
        || format!("grover decay class {:?}", stationary.decay_class),
    );

    report(
        6,
        &format!(
            "char-poly identities < 1e-8 on 128x128 for 11 coins (worst {worst:.1e}); grover zero lines (max |omega| {max_line_omega:.1e}) and rank-0 point at origin verified"
        ),
        failures,
    );
}

#[test]
fn criterion_7_sublattice_and_unitarity() {
    let mut failures = Vec::new();
    let runs = [
        ("grover symmetric", grover_symmetric()),
        ("grover fast-decay", grover_fast_decay()),
        ("crec", crec_symmetric()),
        ("perm:231", cyclic_perm_symmetric()),
    ];
    let mut worst_off = 0.0f64;
    let mut worst_drift = 0.0f64;
    for (name, run) in &runs {
        for &(t, p0) in run.series.entries() {
            if t % 3 != 0 {
                worst_off = worst_off.max(p0);
                check(&mut failures, p0 < 1e-12, || {
                    format!("{name}: p0({t}) = {p0:.3e} off the t mod 3 = 0 sublattice")
                });
            }
        }
        let drift = (run.final_norm - 1.0).abs();
        worst_drift = worst_drift.max(drift);
        check(&mut failures, drift < 1e-9, || {
            format!("{name}: norm drift {drift:.3e} over {HORIZON} steps")
        });
    }
    report(
        7,
        &format!(
            "4 runs x {HORIZON} steps: worst off-sublattice p0 {worst_off:.1e}, worst norm drift {worst_drift:.1e}"
        ),
        failures,
    );
}

#[test]
fn criterion_8_classical_baseline() {
    let mut failures = Vec::new();

    let frac = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    check(&mut failures, classical_p0_exact(3) == frac(2, 9), || {
        format!("p0(3) = {} != 2/9", classical_p0_exact(3))
    });
    check(&mut failures, classical_p0_exact(6) == frac(10, 81), || {
        format!("p0(6) = {} != 10/81", classical_p0_exact(6))
    });

    let (mc, sigma) = classical_monte_carlo_p0(3, 1_000_000, 7);
    let exact3 = 2.0 / 9.0;
    let deviation = (mc - exact3).abs() / sigma;
    check(&mut failures, deviation <= 4.0, || {
        format!("monte carlo p0(3) = {mc:.6} is {deviation:.1} sigma from 2/9")
    });

    let series = classical_series(3000);
    let mut worst_ratio = 0.0f64;
    for e in series.iter().filter(|e| e.t >= 300) {
        let rel = (e.stirling / e.p0_float - 1.0).abs();
        worst_ratio = worst_ratio.max(rel);
        check(&mut failures, rel <= 0.02, || {
            format!("Stirling/exact off by {rel:.3e} at t = {}", e.t)
        });
    }

    // The return sum grows logarithmically. Only every third step
    // contributes a ~ 3 sqrt(3)/(2 pi t) term, so the slope of S_T against
    // ln T is sqrt(3)/(2 pi).
    let (s_300, p_300) = classical_polya_partial(300);
    let (s_3000, p_3000) = classical_polya_partial(3000);
    let slope = (s_3000 - s_300) / 10f64.ln();
    let expected_slope = 3f64.sqrt() / (2.0 * std::f64::consts::PI);
    let slope_err = (slope / expected_slope - 1.0).abs();
    check(&mut failures, slope_err <= 0.03, || {
        format!("partial-sum log slope {slope:.5} vs sqrt(3)/(2 pi) = {expected_slope:.5} ({slope_err:.3})")
    });

    let (_, p_30) = classical_polya_partial(30);
    check(
        &mut failures,
        p_30 < p_300 && p_300 < p_3000 && p_3000 < 1.0,
        || format!("polya partials not monotone toward 1: {p_30:.4}, {p_300:.4}, {p_3000:.4}"),
    );

    report(
        8,
        &format!(
            "exact p0(3) = 2/9 and p0(6) = 10/81; monte carlo within {deviation:.1} sigma; Stirling within {worst_ratio:.1e} for t >= 300; log slope {slope:.4} (target {expected_slope:.4} +/- 3%); partials monotone"
        ),
        failures,
    );
}

#[test]
fn criterion_9_synthetic_fit_calibration() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for alpha in [2.0 / 3.0, 1.0, 4.0 / 3.0, 2.0, 8.0 / 3.0] {
        let entries: Vec<(usize, f64)> = (1..=1000)
            .map(|m| {
                let t = 3 * m;
                (t, (t as f64).powf(-alpha))
            })
            .collect();
        let series = ReturnSeries::synthetic(entries);
        let f = fit_decay_exponent(&series, 3, 3000).expect("synthetic fit");
        let err = (f.exponent + alpha).abs();
        worst = worst.max(err);
        check(&mut failures, err < 1e-10, || {
            format!("alpha = {alpha}: recovered {:.12} (error {err:.2e})", f.exponent)
        });
    }
    report(
        9,
        &format!("fitter recovers all five synthetic exponents exactly (worst error {worst:.1e})"),
        failures,
    );
}
