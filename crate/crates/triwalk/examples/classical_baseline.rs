//! The classical walk on the same lattice is recurrent — barely.
//!
//! A classical walker that steps to one of the three displacement
//! directions uniformly at random can only return at times divisible by 3,
//! with p0(t) = t! / ((t/3)!^3 3^t) exactly. Stirling's formula gives the
//! tail p0(t) ~ 3 sqrt(3) / (2 pi t): a 1/t law, so the return sum S_T
//! diverges — logarithmically, with slope sqrt(3)/(2 pi) per unit of ln t
//! once only every third time step contributes. Divergence means the
//! classical Polya number is exactly 1: recurrence, in contrast to the
//! quantum walk with the Grover coin, which is transient from the very
//! same lattice and step set.
//!
//! Run with: cargo run --release --example classical_baseline

use triwalk::classical::{
    classical_monte_carlo_p0, classical_p0_exact, classical_polya_partial, classical_series,
};

fn main() {
    println!("exact return probabilities (BigRational arithmetic):");
    for t in [3usize, 6, 9, 12] {
        println!("  p0({t:>2}) = {}", classical_p0_exact(t));
    }
    println!();

    println!("   t     exact p0         Stirling         rel. error   t * p0");
    let series = classical_series(3000);
    for e in series.iter().filter(|e| matches!(e.t, 3 | 30 | 300 | 1500 | 3000)) {
        println!(
            "{:>5}   {:.6e}   {:.6e}   {:.3e}   {:.6}",
            e.t,
            e.p0_float,
            e.stirling,
            (e.stirling - e.p0_float).abs() / e.p0_float,
            e.t as f64 * e.p0_float
        );
    }
    println!("          (t * p0 -> 3 sqrt(3) / (2 pi) = {:.6})", 3.0 * 3f64.sqrt() / (2.0 * std::f64::consts::PI));
    println!();

    // The partial sums grow like (sqrt(3)/(2 pi)) ln T: measure the slope.
    let (s_300, polya_300) = classical_polya_partial(300);
    let (s_3000, polya_3000) = classical_polya_partial(3000);
    let slope = (s_3000 - s_300) / (3000f64 / 300.0).ln();
    let expected = 3f64.sqrt() / (2.0 * std::f64::consts::PI);
    println!("S_300  = {s_300:.6}  -> partial Polya {polya_300:.6}");
    println!("S_3000 = {s_3000:.6}  -> partial Polya {polya_3000:.6}");
    println!("log slope (S_3000 - S_300)/ln(10) = {slope:.6}; sqrt(3)/(2 pi) = {expected:.6}");
    println!("the sum diverges, so the true Polya number is 1: recurrent");
    println!();

    // Monte Carlo cross-check of the exact arithmetic.
    let samples = 1_000_000;
    for t in [3usize, 12] {
        let (est, sigma) = classical_monte_carlo_p0(t, samples, 7);
        let exact = series
            .iter()
            .find(|e| e.t == t)
            .map(|e| e.p0_float)
            .unwrap();
        println!(
            "monte carlo p0({t}) = {est:.6} +/- {sigma:.6}  (exact {exact:.6}, off by {:.2} sigma)",
            (est - exact).abs() / sigma
        );
    }
}
