// Builds finite-stage biorthogonal systems from seeded families and certifies
// the four lemma properties.
//
//     cargo run --release --example biorthogonal_system -- [stage] [seed]
//
// Canonical and triangular families stay cheap at any stage (both collapse to
// the unit-vector system). Random families produce genuinely dense systems
// whose exact entries grow quickly, so they are only run up to RANDOM_MAX.

use std::time::Instant;

use frechet_holo::prelude::*;
use frechet_holo::scalar::format_rational;

const RANDOM_MAX: usize = 16;

pub fn run(stage: usize, seed: u64) -> Result<()> {
    let space = make_kothe(KotheFamily::RapidDecrease, 3, stage)?;

    for kind in [
        FamilyKind::Canonical,
        FamilyKind::Triangular,
        FamilyKind::Random,
    ] {
        if kind == FamilyKind::Random && stage > RANDOM_MAX {
            println!("{kind:>10}: skipped above stage {RANDOM_MAX}");
            continue;
        }
        let start = Instant::now();
        let fam = generate_dense_family(kind, seed, stage, 8);
        let raw = biorthogonalize(&fam, stage)?;
        let sys = normalize(&raw, &space)?;
        let built = start.elapsed();
        let report = verify_lemma_conditions(&sys, &fam, &space, 200, seed);
        assert!(report.passed(), "{kind}: {}", report.summary());

        let skipped = raw
            .consumed_y
            .iter()
            .enumerate()
            .filter(|(n, i)| n != *i)
            .count();
        println!(
            "{kind:>10}: built in {built:?}, verified in {:?}; {}",
            start.elapsed() - built,
            report.summary()
        );
        println!(
            "{:>10}  out-of-order pivots: {skipped}, m({}) = {}",
            "",
            stage - 1,
            format_rational(&sys.m_constants()[stage - 1])
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let stage = args.next().and_then(|s| s.parse().ok()).unwrap_or(16);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    run(stage, seed)
}
