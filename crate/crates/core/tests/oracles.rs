//! Values checked against independent computations: hand-derived closed forms,
//! a dense linear solve that never touches the functionals, and fixed-point
//! integer summation for e.

use frechet_holo::prelude::*;
use frechet_holo::random;
use frechet_holo::scalar::parse_rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// e to 50 decimal places (truncated).
const E_50: &str = "2.71828182845904523536028747135266249775724709369995";

fn e_bracket() -> (Rational, Rational) {
    let digits = E_50.replace('.', "");
    let scale = BigInt::from(10).pow(50);
    let lo = Rational::new(digits.parse::<BigInt>().unwrap(), scale.clone());
    let hi = &lo + Rational::new(BigInt::one(), scale);
    (lo, hi)
}

#[test]
fn frozen_continuity_constants() {
    let w = make_weights(WeightParams::InverseFactorial, 8).unwrap();
    assert_eq!(w.partial_sum(4, &int(1)).unwrap(), rat(8, 3));
    assert_eq!(w.tail_majorant(3, &int(1)).unwrap(), rat(5, 96));
    assert_eq!(continuity_constant(&w, &int(1), 4).unwrap(), rat(87, 32));
    assert_eq!(continuity_constant(&w, &int(1), 5).unwrap(), rat(1631, 600));
    // 1 + 2 + 2 + 4/3, then 2⁴/4! · 1/(1 − 2/5).
    assert_eq!(w.partial_sum(4, &int(2)).unwrap(), rat(19, 3));
    assert_eq!(w.tail_majorant(3, &int(2)).unwrap(), rat(10, 9));

    // αₙ = 2^{−n²}, k = 4: 1 + 2 + 1 + 1/8, tail 2⁻¹⁶·4⁴ / (1 − 2⁻⁹·4).
    let g = make_weights(WeightParams::Gaussian { q: rat(1, 2) }, 8).unwrap();
    assert_eq!(g.partial_sum(4, &int(4)).unwrap(), rat(33, 8));
    assert_eq!(g.tail_majorant(3, &int(4)).unwrap(), rat(1, 254));
}

#[test]
fn partial_sums_of_e_agree_with_fixed_point_summation() {
    // Σ_{n<N} ⌊10⁶⁰/n!⌋ undershoots the exact sum by less than N·10⁻⁶⁰.
    let scale = BigInt::from(10).pow(60);
    let w = make_weights(WeightParams::InverseFactorial, 40).unwrap();
    let (e_lo, e_hi) = e_bracket();
    let mut fixed = BigInt::zero();
    let mut term = scale.clone();
    for n in 0..40usize {
        if n > 0 {
            term /= n;
        }
        fixed += &term;
        let stage = n + 1;
        let exact = w.partial_sum(stage, &int(1)).unwrap();
        let approx = Rational::new(fixed.clone(), scale.clone());
        let slack = Rational::new(BigInt::from(stage), scale.clone());
        assert!(
            approx <= exact && exact <= &approx + &slack,
            "stage {stage}"
        );
        // Only e_lo ≤ e is usable here: deep stages put C₁ within 10⁻⁵⁰ of e.
        assert!(exact < e_lo);
        assert!(&e_lo - &exact <= w.tail_majorant(n, &int(1)).unwrap());
        assert!(continuity_constant(&w, &int(1), stage).unwrap() > e_lo);
        if stage <= 30 {
            assert!(continuity_constant(&w, &int(1), stage).unwrap() > e_hi);
        }
    }
    // Past 40 terms the partial sum agrees with e to 47 digits.
    let gap = &e_lo - w.partial_sum(40, &int(1)).unwrap();
    assert!(gap < rat(1, 1) / Rational::from_integer(BigInt::from(10).pow(47)));
}

#[test]
fn unit_vector_images_on_the_canonical_system() {
    let space = make_kothe(KotheFamily::RapidDecrease, 3, 8).unwrap();
    let (_, sys) = build_system(&space, FamilyKind::Canonical, 0, 8, 8).unwrap();
    let w = make_weights(WeightParams::InverseFactorial, 8).unwrap();
    // e′₁ = 2δ₁, α₁ = 1, so T(δ₁) = 2z.
    let img = embed(&SparseVector::delta(1), &sys, &w, &space, Domain::Plane).unwrap();
    let mut expected = vec![ComplexRational::zero(); 8];
    expected[1] = ComplexRational::from_ints(2, 0);
    assert_eq!(img.coefficients, expected);
    // T(δ₅) = α₅·6·z⁵ = 6/120·z⁵.
    let img = embed(&SparseVector::delta(5), &sys, &w, &space, Domain::Plane).unwrap();
    assert_eq!(img.coefficients[5], ComplexRational::real(rat(1, 20)));
}

#[test]
fn canonical_recovery_of_a_short_combination() {
    let space = make_kothe(KotheFamily::DiscType, 2, 3).unwrap();
    let (_, sys) = build_system(&space, FamilyKind::Canonical, 0, 3, 8).unwrap();
    let w = make_weights(WeightParams::InverseFactorial, 3).unwrap();
    let mut x = sys.vectors()[0].scale(&ComplexRational::from_ints(5, 0));
    x.axpy(&ComplexRational::from_ints(-2, -1), &sys.vectors()[2]);
    let img = embed(&x, &sys, &w, &space, Domain::Plane).unwrap();
    assert_eq!(reconstruct(&img, &sys, &w, 3).unwrap(), x);
}

/// Solves `Σ βₙ columnsₙ = target` by exact elimination; `None` if inconsistent.
fn solve_in_span(columns: &[SparseVector], target: &SparseVector) -> Option<Vec<ComplexRational>> {
    let rows = columns
        .iter()
        .chain(std::iter::once(target))
        .filter_map(|v| v.max_index())
        .max()
        .map_or(0, |m| m + 1);
    let cols = columns.len();
    let mut a: Vec<Vec<ComplexRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<ComplexRational> = columns.iter().map(|c| c.get(r)).collect();
            row.push(target.get(r));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][c].inv().unwrap();
        for v in a[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[pivot_row].clone();
                for (cell, p) in a[r].iter_mut().zip(&pivot) {
                    *cell = &*cell - &(&f * p);
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut beta = vec![ComplexRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        beta[c] = a[r][cols].clone();
    }
    Some(beta)
}

#[test]
fn reconstruction_matches_an_independent_linear_solve() {
    let stage = 7;
    let space = make_kothe(KotheFamily::RapidDecrease, 2, stage).unwrap();
    let w = make_weights(WeightParams::InverseFactorial, stage).unwrap();
    let mut checked = 0;
    for seed in 0..12u64 {
        let Ok((_, sys)) = build_system(&space, FamilyKind::Random, seed, stage, 6) else {
            continue;
        };
        let mut rng = random::seeded(seed);
        for m in 1..=stage {
            let mut x = SparseVector::zero();
            for n in 0..m {
                x.axpy(&random::complex(&mut rng, 9), &sys.vectors()[n]);
            }
            let beta = solve_in_span(&sys.vectors()[..m], &x).expect("x lies in the span");
            let img = embed(&x, &sys, &w, &space, Domain::Plane).unwrap();
            for (n, b) in beta.iter().enumerate() {
                assert_eq!(
                    img.coefficients[n],
                    b.scale(w.alpha(n)),
                    "seed {seed} n {n}"
                );
            }
            assert!(img.coefficients[m..].iter().all(ComplexRational::is_zero));
            assert_eq!(reconstruct(&img, &sys, &w, m).unwrap(), x);
            checked += 1;
        }
    }
    assert!(checked >= 7 * 8, "too few non-singular seeds: {checked}");
}

#[test]
fn fifty_digit_constant_is_self_consistent() {
    let (lo, hi) = e_bracket();
    assert_eq!(
        lo,
        parse_rational(&format!("{}/{}", lo.numer(), lo.denom())).unwrap()
    );
    assert!(hi > lo);
    // 2.718281828459045 < e < 2.718281828459046.
    assert!(lo > rat(2_718_281_828_459_045, 1_000_000_000_000_000));
    assert!(hi < rat(2_718_281_828_459_046, 1_000_000_000_000_000));
}
