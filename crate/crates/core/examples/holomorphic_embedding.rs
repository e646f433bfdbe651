// Maps vectors of a Köthe space to Taylor coefficients of holomorphic
// functions, and back.
//
//     cargo run --example holomorphic_embedding -- [stage] [seed]

use frechet_holo::prelude::*;

fn show(label: &str, img: &EmbeddedImage) {
    let terms: Vec<String> = img
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| format!("({c}) z^{n}"))
        .collect();
    let body = if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    };
    println!("{label} = {body}");
}

pub fn run(stage: usize, seed: u64) -> Result<()> {
    let space = make_kothe(KotheFamily::RapidDecrease, 3, stage)?;
    let w = make_weights(WeightParams::InverseFactorial, stage)?;

    // Unit vectors on the canonical system: T(δₙ) = αₙ·m(n)⁻¹·zⁿ = (n+1)/n!·zⁿ.
    let (_, canonical) = build_system(&space, FamilyKind::Canonical, 0, stage, 8)?;
    for n in 0..4.min(stage) {
        let img = embed(
            &SparseVector::delta(n),
            &canonical,
            &w,
            &space,
            Domain::Plane,
        )?;
        show(&format!("T(delta_{n})"), &img);
    }

    // A dense system: the monomial zⁿ is the image of αₙ⁻¹eₙ.
    let (_, sys) = build_system(&space, FamilyKind::Random, seed, stage, 8)?;
    let poly = vec![
        ComplexRational::from_ints(1, 0),
        ComplexRational::zero(),
        ComplexRational::new(rat(-1, 2), rat(3, 4)),
    ];
    let x = polynomial_preimage(&poly, &sys, &w)?;
    println!(
        "preimage of 1 + (-1/2+3/4i) z^2 has {} nonzero coordinates",
        x.nnz()
    );
    let img = embed(&x, &sys, &w, &space, Domain::Plane)?;
    show("T(preimage)", &img);
    assert_eq!(&img.coefficients[..poly.len()], &poly[..]);

    // Vectors in the span of e₀..e_{M−1} are recovered from their images.
    let m = 3.min(stage);
    let mut y = SparseVector::zero();
    for n in 0..m {
        y.axpy(
            &ComplexRational::from_ints(n as i64 + 1, -1),
            &sys.vectors()[n],
        );
    }
    let back = reconstruct(&embed(&y, &sys, &w, &space, Domain::Plane)?, &sys, &w, m)?;
    println!("reconstruct(T(y), {m}) == y: {}", back == y);
    assert_eq!(back, y);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let stage = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    run(stage, seed)
}
