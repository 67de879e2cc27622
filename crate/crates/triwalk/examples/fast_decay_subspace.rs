//! Return decay depends on the initial chirality, not just the coin.
//!
//! For the Grover walk the generic return decay t^(-4/3) is carried by a
//! single distinguished direction in chirality space. Start orthogonal to
//! the uniform vector — e.g. in (1, w, w^2)/sqrt(3) with w = exp(2 pi i/3)
//! — and the slow component is absent: the return probability falls as
//! t^(-8/3), twice the exponent. Any generic state is a mixture, and its
//! long-time return is dominated by its overlap with the slow direction.
//!
//! Run with: cargo run --release --example fast_decay_subspace

use triwalk::coin::{
    fast_decay_chirality, fast_decay_projection, symmetric_chirality, CoinMatrix,
};
use triwalk::engine::{evolve, WalkRun};
use triwalk::recurrence::fit_decay_exponent;

fn main() -> Result<(), triwalk::Error> {
    let horizon = 300;
    let coin = CoinMatrix::grover();

    let fast = fast_decay_chirality();
    let (slow_part, fast_part) = fast_decay_projection(&fast);
    println!("fast-decay chirality (1, w, w^2)/sqrt(3):");
    println!(
        "  overlap with slow direction: {:.3e} (norm of slow part)",
        slow_part.norm()
    );
    println!("  norm of fast part: {:.6}", fast_part.norm());
    println!();

    let run_slow = WalkRun::new(coin.clone(), symmetric_chirality(), horizon)?;
    let (_, series_slow) = evolve(&run_slow);
    let run_fast = WalkRun::new(coin, fast, horizon)?;
    let (_, series_fast) = evolve(&run_fast);

    println!("   t     p0 symmetric     p0 fast-decay     ratio");
    for &t in &[3usize, 12, 30, 60, 120, 210, 300] {
        let ps = series_slow.probability_at(t).unwrap();
        let pf = series_fast.probability_at(t).unwrap();
        println!("{t:>4}   {ps:.6e}     {pf:.6e}    {:.3e}", pf / ps);
    }
    println!();

    let fit_slow = fit_decay_exponent(&series_slow, 30, horizon)?;
    let fit_fast = fit_decay_exponent(&series_fast, 30, horizon)?;
    println!(
        "symmetric start:  exponent {:.4} +/- {:.4} (R^2 {:.5}); expected -4/3 = {:.4}",
        fit_slow.exponent,
        fit_slow.stderr,
        fit_slow.r_squared,
        -4.0 / 3.0
    );
    println!(
        "fast-decay start: exponent {:.4} +/- {:.4} (R^2 {:.5}); expected -8/3 = {:.4}",
        fit_fast.exponent,
        fit_fast.stderr,
        fit_fast.r_squared,
        -8.0 / 3.0
    );
    println!();
    println!("the doubled exponent marks the suppression of the slow subspace");
    Ok(())
}
