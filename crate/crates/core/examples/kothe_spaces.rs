// Köthe echelon spaces of order one: seminorm ladders, the continuous norm and
// the dual bound that controls every functional by that norm.
//
//     cargo run --example kothe_spaces

use frechet_holo::prelude::*;
use frechet_holo::scalar::{format_rational, to_decimal};
use frechet_holo::space::check_continuous_norm;

pub fn run() -> Result<()> {
    let x = SparseVector::from_entries([
        (0, ComplexRational::from_ints(1, -1)),
        (3, ComplexRational::new(rat(1, 2), int(0))),
        (7, ComplexRational::new(int(0), rat(-2, 3))),
    ]);
    println!("x = {x:?}");

    for family in [KotheFamily::RapidDecrease, KotheFamily::DiscType] {
        let space = make_kothe(family.clone(), 4, 8)?;
        let ladder = (0..space.grades())
            .map(|j| space.seminorm(j, &x).map(|p| to_decimal(&p, 6)))
            .collect::<Result<Vec<_>>>()?;
        println!("{family:>15}: p_0..p_3(x) = [{}]", ladder.join(", "));
    }

    // Functionals are measured against the norm p = p₀: |⟨x,u⟩|₁ ≤ m(u)·p(x).
    let space = make_kothe(KotheFamily::DiscType, 2, 8)?;
    let u = SparseFunctional::from_entries([
        (3, ComplexRational::from_ints(1, 0)),
        (7, ComplexRational::new(rat(1, 64), rat(1, 64))),
    ]);
    let m = space.dual_bound(&u)?;
    let lhs = pair(&x, &u).abs1();
    let rhs = &m * space.norm(&x)?;
    println!(
        "disc_type: m(u) = {}, |<x,u>|_1 = {} <= m(u) p(x) = {}",
        format_rational(&m),
        format_rational(&lhs),
        format_rational(&rhs)
    );
    assert!(lhs <= rhs);

    // Custom rows are validated: positivity, then the ladder a(j,n) ≤ a(j+1,n).
    let ok = KotheMatrix::custom(vec![
        vec![int(1), rat(1, 2), rat(1, 4)],
        vec![int(1), int(1), int(1)],
    ])?;
    println!(
        "custom 2x3 accepted, norm check: {:?}",
        ok.check_continuous_norm()
    );

    let degenerate = vec![vec![int(1), int(0), int(1)]];
    match KotheMatrix::custom(degenerate.clone()) {
        Ok(_) => unreachable!("zero weight must be rejected"),
        Err(e) => println!("custom [1, 0, 1] rejected: {e}"),
    }
    println!("  diagnosis: {:?}", check_continuous_norm(&degenerate));

    let inverted = vec![vec![int(2), int(2)], vec![int(1), int(3)]];
    if let Err(e) = KotheMatrix::custom(inverted) {
        println!("custom ladder rejected: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
