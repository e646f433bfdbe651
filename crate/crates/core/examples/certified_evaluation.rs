// Evaluates truncated images with a certified remainder bound and checks the
// bound against a longer truncation of the same function.
//
//     cargo run --example certified_evaluation -- [stage] [seed]
//
// The vector lives on a 32-coordinate window while the system stops at `stage`,
// so the short image really does drop terms; the long image does not.

use frechet_holo::prelude::*;
use frechet_holo::random;
use frechet_holo::scalar::{format_rational, to_decimal};

const WINDOW: usize = 32;

pub fn run(stage: usize, seed: u64) -> Result<()> {
    let space = make_kothe(KotheFamily::RapidDecrease, 2, WINDOW)?;
    let (_, short) = build_system(&space, FamilyKind::Canonical, 0, stage, 8)?;
    let (_, long) = build_system(&space, FamilyKind::Canonical, 0, WINDOW, 8)?;

    for (name, params) in [
        ("inverse_factorial", WeightParams::InverseFactorial),
        ("gaussian q=1/2", WeightParams::Gaussian { q: rat(1, 2) }),
    ] {
        let w_short = make_weights(params.clone(), stage)?;
        let w_long = make_weights(params, WINDOW)?;
        println!("{name}, stage {stage}:");

        let mut rng = random::substream(seed, 1);
        for k in [int(1), int(2), rat(7, 2)] {
            let x: SparseVector = random::sparse(&mut rng, WINDOW, 8, 9);
            let z = random::point_in_radius(&mut rng, &k, 9);
            let approx = eval_at(&embed(&x, &short, &w_short, &space, Domain::Plane)?, &z, &k)?;
            let exact = eval_at(&embed(&x, &long, &w_long, &space, Domain::Plane)?, &z, &k)?;
            let err = (&exact.value - &approx.value).abs1();
            println!(
                "  k = {:>3}  |z|_1 = {:<10} error {:<12} <= tail {:<12} {}",
                format_rational(&k),
                to_decimal(&z.abs1(), 6),
                to_decimal(&err, 6),
                to_decimal(&approx.tail, 6),
                if err <= approx.tail { "ok" } else { "VIOLATED" }
            );
            assert!(err <= approx.tail);
        }
    }

    // Evaluation refuses requests it cannot certify.
    let w = make_weights(WeightParams::InverseFactorial, stage)?;
    let img = embed(
        &SparseVector::delta(1),
        &short,
        &w,
        &space,
        Domain::Disc(int(2)),
    )?;
    let two = ComplexRational::from_ints(2, 0);
    for (z, k) in [(&two, int(3)), (&two, int(1))] {
        match eval_at(&img, z, &k) {
            Ok(ev) => println!("eval({z}) = {}", ev.value),
            Err(e) => println!("eval({z}, k = {}) refused: {e}", format_rational(&k)),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let stage = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    run(stage, seed)
}
