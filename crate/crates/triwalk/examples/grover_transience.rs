//! The Grover walk returns often, but not often enough.
//!
//! Starting from the origin in the symmetric chirality state, the walk
//! comes back with probability 64/81 after three steps — and then the
//! return probability falls off as t^(-4/3). Because that power sums to a
//! finite value, the cumulative return probability (the Pólya number)
//! stays strictly below one: the walk is transient, unlike its classical
//! counterpart on the same lattice, which is recurrent.
//!
//! Run with: cargo run --release --example grover_transience

use triwalk::coin::{symmetric_chirality, CoinMatrix};
use triwalk::engine::{evolve, WalkRun};
use triwalk::recurrence::{fit_decay_exponent, polya_estimate, verdict};

fn main() -> Result<(), triwalk::Error> {
    let horizon = 300;
    let run = WalkRun::new(CoinMatrix::grover(), symmetric_chirality(), horizon)?;
    let (final_state, series) = evolve(&run);

    println!("Grover coin, symmetric start, {horizon} steps");
    println!("final state norm: {:.12}", final_state.total_norm());
    println!();
    println!("   t       p0(t)        t^(4/3) * p0(t)");
    for &t in &[3usize, 6, 12, 30, 60, 120, 210, 300] {
        let p0 = series.probability_at(t).unwrap();
        println!("{t:>4}   {p0:.6e}   {:.6}", p0 * (t as f64).powf(4.0 / 3.0));
    }
    println!();
    println!(
        "first return p0(3) = {:.12} (exactly 64/81 = {:.12})",
        series.probability_at(3).unwrap(),
        64.0 / 81.0
    );

    let fit = fit_decay_exponent(&series, 30, horizon)?;
    println!();
    println!(
        "log-log fit over t in [30, {horizon}]: exponent {:.4} +/- {:.4}, R^2 = {:.6}",
        fit.exponent, fit.stderr, fit.r_squared
    );
    println!("expected for this walk: -4/3 = {:.4}", -4.0 / 3.0);

    let polya = polya_estimate(&series);
    println!();
    println!(
        "partial Polya number at T = {}: {:.6} (hint: {:?})",
        polya.horizon, polya.partial_value, polya.verdict_hint
    );
    println!("a transient walk keeps this strictly below 1 as T grows");

    let report = verdict(&CoinMatrix::grover().classify_default(), &fit);
    println!();
    println!("consistency with the algebraic classification: {}", report.detail);
    assert!(report.consistent);
    Ok(())
}
