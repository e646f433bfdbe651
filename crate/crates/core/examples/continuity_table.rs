// Continuity constants C_k = Σ_{n<N} αₙkⁿ + tail(N−1, k) for growing stages.
// With inverse factorial weights and k = 1 the column decreases towards e.
//
//     cargo run --example continuity_table -- [first] [last]

use frechet_holo::embedding::table_to_csv;
use frechet_holo::prelude::*;

pub fn run(first: usize, last: usize) -> Result<()> {
    let stages: Vec<usize> = (first..=last).collect();

    let w = make_weights(WeightParams::InverseFactorial, last)?;
    let rows = continuity_table(&w, &[int(1), int(2)], &stages)?;
    print!("{}", table_to_csv(&rows));

    let c1: Vec<&Rational> = rows
        .iter()
        .filter(|r| r.k == int(1))
        .map(|r| &r.c_k)
        .collect();
    assert!(
        c1.windows(2).all(|p| p[0] > p[1]),
        "C_1 must strictly decrease"
    );

    println!();
    let w = make_weights(WeightParams::Gaussian { q: rat(1, 2) }, last)?;
    print!(
        "{}",
        table_to_csv(&continuity_table(&w, &[int(4)], &stages)?)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let first = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let last = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    run(first, last)
}
