//! Recurrence from algebra alone: classify a coin without simulating it.
//!
//! The long-time fate of the walk is decided by the diagonal of the coin
//! matrix. Counting the exactly-zero diagonal entries suffices:
//!
//!   0 or 1 zero          -> transient (p0 ~ t^-2 generically, or t^-4/3
//!                           at a degenerate point like the Grover coin)
//!   exactly 2 zeros      -> quasi-1D recurrent: the walk locks onto the
//!                           direction of the surviving diagonal entry
//!   3 zeros / gen. perm. -> trivial: sharp relocalization, no decay
//!
//! Run with: cargo run --release --example coin_classification

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use triwalk::coin::{
    random_generalized_permutation, random_two_zero_diagonal, random_unitary, CoinMatrix,
};
use triwalk::lattice::Displacement;

fn describe(coin: &CoinMatrix) {
    let c = coin.classify_default();
    let m = coin.diagonal_moduli();
    println!(
        "{:<22} diag moduli ({:.3}, {:.3}, {:.3})  zeros {}  ->  {:?}{}",
        coin.label(),
        m[0],
        m[1],
        m[2],
        c.zero_diagonal_count,
        c.verdict,
        c.propagation_direction
            .map(|d| format!(" along {d:?}"))
            .unwrap_or_default()
    );
}

fn main() -> Result<(), triwalk::Error> {
    println!("== presets ==");
    describe(&CoinMatrix::grover());
    describe(&CoinMatrix::recurrent());
    describe(&CoinMatrix::identity());

    println!("\n== all six permutation coins (every one is trivial) ==");
    for p in CoinMatrix::all_permutations() {
        describe(&p);
    }

    println!("\n== Haar-random unitaries (generic: no exact zeros, transient) ==");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..5 {
        describe(&random_unitary(&mut rng).with_label(format!("random #{i}")));
    }

    println!("\n== random coins built with exactly two zero diagonals ==");
    for (i, keep) in [Displacement::E1, Displacement::E2, Displacement::E3]
        .into_iter()
        .enumerate()
    {
        describe(&random_two_zero_diagonal(&mut rng, keep).with_label(format!("two-zero #{i}")));
    }

    println!("\n== random generalized permutations (phases on a permutation) ==");
    for i in 0..3 {
        describe(&random_generalized_permutation(&mut rng).with_label(format!("gen-perm #{i}")));
    }

    println!();
    println!("note: a generalized permutation with three nonzero diagonal phases is");
    println!("diagonal, relocalizes sharply, and is classified trivial even though");
    println!("its zero count alone would have said transient:");
    let mut rng2 = ChaCha8Rng::seed_from_u64(1);
    loop {
        let c = random_generalized_permutation(&mut rng2);
        if c.zero_diagonal_count(1e-10) == 0 {
            describe(&c.with_label("diagonal gen-perm"));
            break;
        }
    }
    Ok(())
}
