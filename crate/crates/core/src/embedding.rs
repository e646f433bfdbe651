//! The embedding `T(x)(z) = Σ αₙ⟨x, e′ₙ⟩zⁿ` into holomorphic functions.
//!
//! Images are truncated at the stage of the biorthogonal system and always carry
//! the norm `p(x)`, so that every evaluation comes with a certified bound on the
//! omitted remainder: on `|z| ≤ k` the tail is at most `p(x)·Σ_{n≥N} αₙkⁿ`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::biortho::BiorthogonalSystem;
use crate::error::{Error, Result};
use crate::random::{self, substream};
use crate::scalar::{format_rational, serde_rational, to_decimal, ComplexRational, Rational};
use crate::space::KotheMatrix;
use crate::sparse::{pair, SparseVector};
use crate::weights::{WeightSequence, WeightSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Entire functions.
    Plane,
    /// Origin-centred open disc of the given radius.
    Disc(#[serde(with = "serde_rational")] Rational),
}

impl Domain {
    /// Compacts `{|z| ≤ k}` must sit inside the domain.
    pub fn admits(&self, k: &Rational) -> Result<()> {
        match self {
            Domain::Plane => Ok(()),
            Domain::Disc(r) if k < r => Ok(()),
            Domain::Disc(r) => Err(Error::OutsideDomain {
                k: format_rational(k),
                radius: format_rational(r),
            }),
        }
    }
}

/// Truncated image `cₙ = αₙ·⟨x, e′ₙ⟩`, `n < N`, of a vector `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedImage {
    pub coefficients: Vec<ComplexRational>,
    pub p_norm: Rational,
    pub weights: WeightSequence,
    pub domain: Domain,
}

impl EmbeddedImage {
    pub fn stage(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(ComplexRational::is_zero)
    }
}

#[derive(Serialize, Deserialize)]
struct ImageRepr {
    stage: usize,
    coefficients: Vec<ComplexRational>,
    p_norm: String,
    weights: WeightSpec,
    domain: Domain,
}

impl Serialize for EmbeddedImage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ImageRepr {
            stage: self.stage(),
            coefficients: self.coefficients.clone(),
            p_norm: format_rational(&self.p_norm),
            weights: self.weights.to_spec(),
            domain: self.domain.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmbeddedImage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ImageRepr::deserialize(d)?;
        if r.stage != r.coefficients.len() {
            return Err(de::Error::custom(format!(
                "stage {} but {} coefficients",
                r.stage,
                r.coefficients.len()
            )));
        }
        let weights = r.weights.build(r.stage).map_err(de::Error::custom)?;
        if weights.window() < r.stage {
            return Err(de::Error::custom("weight window shorter than the stage"));
        }
        Ok(EmbeddedImage {
            coefficients: r.coefficients,
            p_norm: crate::scalar::parse_rational(&r.p_norm).map_err(de::Error::custom)?,
            weights,
            domain: r.domain,
        })
    }
}

fn check_weights(sys: &BiorthogonalSystem, w: &WeightSequence) -> Result<()> {
    if w.window() < sys.stage() {
        return Err(Error::StageMismatch(format!(
            "weights cover {} terms but the system has stage {}",
            w.window(),
            sys.stage()
        )));
    }
    Ok(())
}

/// `T(x)` truncated at the stage of `sys`.
pub fn embed(
    x: &SparseVector,
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    space: &KotheMatrix,
    domain: Domain,
) -> Result<EmbeddedImage> {
    check_weights(sys, w)?;
    let p_norm = space.norm(x)?;
    let coefficients = sys
        .functionals()
        .iter()
        .enumerate()
        .map(|(n, u)| pair(x, u).scale(w.alpha(n)))
        .collect();
    Ok(EmbeddedImage {
        coefficients,
        p_norm,
        weights: w.clone(),
        domain,
    })
}

/// Horner evaluation `Σ cₙzⁿ`, exact.
pub fn horner(coefficients: &[ComplexRational], z: &ComplexRational) -> ComplexRational {
    coefficients
        .iter()
        .rev()
        .fold(ComplexRational::zero(), |acc, c| &(&acc * z) + c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: ComplexRational,
    /// Certified bound on `|T(x)(z) − value|`.
    pub tail: Rational,
}

/// Evaluates the truncated series at `z` with `|z|₁ ≤ k`.
pub fn eval_at(img: &EmbeddedImage, z: &ComplexRational, k: &Rational) -> Result<Evaluation> {
    img.domain.admits(k)?;
    if z.abs1() > *k {
        return Err(Error::OutsideRadius {
            point: z.to_string(),
            k: format_rational(k),
        });
    }
    let stage = img.stage();
    if stage == 0 {
        return Err(Error::StageMismatch("cannot certify an empty image".into()));
    }
    let majorant = img.weights.tail_majorant(stage - 1, k)?;
    Ok(Evaluation {
        value: horner(&img.coefficients, z),
        tail: &img.p_norm * majorant,
    })
}

/// `C_k = Σ_{n<N} αₙkⁿ + tail(N−1, k)`, an exact upper bound for `Σ αₙkⁿ`.
pub fn continuity_constant(w: &WeightSequence, k: &Rational, stage: usize) -> Result<Rational> {
    if stage == 0 {
        return Err(Error::StageMismatch("stage must be at least 1".into()));
    }
    Ok(w.partial_sum(stage, k)? + w.tail_majorant(stage - 1, k)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityResult {
    #[serde(with = "serde_rational")]
    pub k: Rational,
    #[serde(with = "serde_rational")]
    pub c_k: Rational,
    pub samples: usize,
    pub holds: bool,
    /// Largest `(|value|₁ + tail) / (C_k·p(x))`; 0 when every sample is `x = 0`.
    #[serde(with = "serde_rational")]
    pub max_ratio: Rational,
    pub max_ratio_decimal: String,
}

/// Ratio `(|value|₁ + tail) / (C_k·p(x))` for one `(x, z)`; `None` if the bound fails.
pub fn continuity_ratio(
    img: &EmbeddedImage,
    z: &ComplexRational,
    k: &Rational,
    c_k: &Rational,
) -> Result<(bool, Rational)> {
    let ev = eval_at(img, z, k)?;
    let lhs = ev.value.abs1() + ev.tail;
    let rhs = c_k * &img.p_norm;
    let ratio = if rhs.is_zero() {
        if lhs.is_zero() {
            Rational::zero()
        } else {
            return Ok((false, Rational::one() + Rational::one()));
        }
    } else {
        &lhs / &rhs
    };
    Ok((lhs <= rhs, ratio))
}

/// Seeded `(x, z)` samples with `|z|₁ ≤ k`, checked against `C_k·p(x)` exactly.
pub fn verify_continuity(
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    space: &KotheMatrix,
    k: &Rational,
    samples: usize,
    seed: u64,
    domain: &Domain,
) -> Result<ContinuityResult> {
    let stage = sys.stage();
    let c_k = continuity_constant(w, k, stage)?;
    domain.admits(k)?;
    let mut rng = substream(seed, 0x33);
    let pairs: Vec<(SparseVector, ComplexRational)> = (0..samples)
        .map(|_| {
            let x = random::sparse(&mut rng, space.window(), 6, 12);
            let z = random::point_in_radius(&mut rng, k, 12);
            (x, z)
        })
        .collect();
    verify_continuity_on(sys, w, space, k, &c_k, &pairs, domain)
}

/// Same check on caller-supplied `(x, z)` pairs.
pub fn verify_continuity_on(
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    space: &KotheMatrix,
    k: &Rational,
    c_k: &Rational,
    pairs: &[(SparseVector, ComplexRational)],
    domain: &Domain,
) -> Result<ContinuityResult> {
    let outcomes = pairs
        .par_iter()
        .map(|(x, z)| {
            let img = embed(x, sys, w, space, domain.clone())?;
            continuity_ratio(&img, z, k, c_k)
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = outcomes.iter().all(|(ok, _)| *ok);
    let max_ratio = outcomes
        .into_iter()
        .map(|(_, r)| r)
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(ContinuityResult {
        k: k.clone(),
        c_k: c_k.clone(),
        samples: pairs.len(),
        holds,
        max_ratio_decimal: to_decimal(&max_ratio, 17),
        max_ratio,
    })
}

/// Preimage `Σ aₙαₙ⁻¹eₙ` of the polynomial with coefficients `a₀..a_s`.
pub fn polynomial_preimage(
    poly: &[ComplexRational],
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
) -> Result<SparseVector> {
    check_weights(sys, w)?;
    if poly.len() > sys.stage() {
        return Err(Error::StageMismatch(format!(
            "degree {} polynomial needs stage > {}, system has {}",
            poly.len() - 1,
            poly.len() - 1,
            sys.stage()
        )));
    }
    Ok(monomial_combination(poly.iter().enumerate(), sys, w))
}

fn monomial_combination<'a>(
    coeffs: impl Iterator<Item = (usize, &'a ComplexRational)>,
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
) -> SparseVector {
    let mut x = SparseVector::zero();
    for (n, a) in coeffs {
        if a.is_zero() {
            continue;
        }
        x.axpy(&a.scale(&w.alpha(n).recip()), &sys.vectors()[n]);
    }
    x
}

/// Preimage of the degree `< upto` truncation: `Σ_{n<upto} cₙαₙ⁻¹eₙ`.
pub fn reconstruct(
    img: &EmbeddedImage,
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    upto: usize,
) -> Result<SparseVector> {
    check_weights(sys, w)?;
    if upto > img.stage() || upto > sys.stage() {
        return Err(Error::StageMismatch(format!(
            "reconstruction to {upto} terms exceeds stage {}",
            img.stage().min(sys.stage())
        )));
    }
    Ok(monomial_combination(
        img.coefficients[..upto].iter().enumerate(),
        sys,
        w,
    ))
}

/// One line of a continuity table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityRow {
    #[serde(with = "serde_rational")]
    pub k: Rational,
    pub stage: usize,
    #[serde(with = "serde_rational")]
    pub partial_sum: Rational,
    #[serde(with = "serde_rational")]
    pub tail_bound: Rational,
    #[serde(rename = "C_k", with = "serde_rational")]
    pub c_k: Rational,
}

pub fn continuity_table(
    w: &WeightSequence,
    ks: &[Rational],
    stages: &[usize],
) -> Result<Vec<ContinuityRow>> {
    let mut rows = Vec::with_capacity(ks.len() * stages.len());
    for k in ks {
        for &stage in stages {
            if stage == 0 {
                return Err(Error::StageMismatch("stage must be at least 1".into()));
            }
            let partial_sum = w.partial_sum(stage, k)?;
            let tail_bound = w
                .tail_majorant(stage - 1, k)
                .map_err(|e| e.context(format!("k = {} at stage {stage}", format_rational(k))))?;
            rows.push(ContinuityRow {
                k: k.clone(),
                stage,
                c_k: &partial_sum + &tail_bound,
                partial_sum,
                tail_bound,
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "k,stage,partial_sum,tail_bound,C_k";

/// CSV with each rational cell written as `p/q (decimal)`.
pub fn table_to_csv(rows: &[ContinuityRow]) -> String {
    let cell = |q: &Rational| format!("{} ({})", format_rational(q), to_decimal(q, 17));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            cell(&r.k),
            r.stage,
            cell(&r.partial_sum),
            cell(&r.tail_bound),
            cell(&r.c_k)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biortho::{build_system, FamilyKind};
    use crate::scalar::{int, rat};
    use crate::space::{make_kothe, KotheFamily};
    use crate::weights::{make_weights, WeightParams};

    fn canonical(stage: usize) -> (KotheMatrix, BiorthogonalSystem, WeightSequence) {
        let space = make_kothe(KotheFamily::RapidDecrease, 2, stage).unwrap();
        let (_, sys) = build_system(&space, FamilyKind::Canonical, 0, stage, 1).unwrap();
        let w = make_weights(WeightParams::InverseFactorial, stage).unwrap();
        (space, sys, w)
    }

    #[test]
    fn embed_zero_and_delta_one() {
        let (space, sys, w) = canonical(6);
        let img = embed(&SparseVector::zero(), &sys, &w, &space, Domain::Plane).unwrap();
        assert!(img.is_zero());
        let img = embed(&SparseVector::delta(1), &sys, &w, &space, Domain::Plane).unwrap();
        let mut expected = vec![ComplexRational::zero(); 6];
        expected[1] = ComplexRational::from_ints(2, 0);
        assert_eq!(img.coefficients, expected);
        assert_eq!(img.p_norm, int(2));
    }

    #[test]
    fn embed_checks_stage_and_window() {
        let (space, sys, _) = canonical(6);
        let short = make_weights(WeightParams::InverseFactorial, 3).unwrap();
        assert!(matches!(
            embed(&SparseVector::delta(0), &sys, &short, &space, Domain::Plane),
            Err(Error::StageMismatch(_))
        ));
        let w = make_weights(WeightParams::InverseFactorial, 6).unwrap();
        assert!(matches!(
            embed(&SparseVector::delta(6), &sys, &w, &space, Domain::Plane),
            Err(Error::WindowExceeded { .. })
        ));
    }

    #[test]
    fn monomial_image_evaluation() {
        let (space, sys, w) = canonical(6);
        let x = polynomial_preimage(
            &[
                ComplexRational::zero(),
                ComplexRational::zero(),
                ComplexRational::one(),
            ],
            &sys,
            &w,
        )
        .unwrap();
        let img = embed(&x, &sys, &w, &space, Domain::Plane).unwrap();
        let z = ComplexRational::real(rat(1, 2));
        let ev = eval_at(&img, &z, &rat(1, 2)).unwrap();
        assert_eq!(ev.value, ComplexRational::real(rat(1, 4)));
        // x = 2·e₂ = (2/3)δ₂ so p(x) = 2; tail = 2·α₆(1/2)⁶/(1 − (1/2)/7)
        assert_eq!(img.p_norm, int(2));
        let expected_tail = int(2) * rat(1, 720) * rat(1, 64) / (int(1) - rat(1, 14));
        assert_eq!(ev.tail, expected_tail);
    }

    #[test]
    fn eval_errors() {
        let (space, sys, w) = canonical(4);
        let img = embed(
            &SparseVector::delta(0),
            &sys,
            &w,
            &space,
            Domain::Disc(int(1)),
        )
        .unwrap();
        assert!(matches!(
            eval_at(&img, &ComplexRational::zero(), &int(1)),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            eval_at(&img, &ComplexRational::from_ints(1, 1), &rat(1, 2)),
            Err(Error::OutsideRadius { .. })
        ));
        let img = embed(&SparseVector::delta(0), &sys, &w, &space, Domain::Plane).unwrap();
        // stage 4 → N = 3, inverse factorial needs k < 5
        assert!(matches!(
            eval_at(&img, &ComplexRational::zero(), &int(5)),
            Err(Error::CertificationUnavailable(_))
        ));
    }

    #[test]
    fn zero_image_evaluates_to_zero() {
        let (space, sys, w) = canonical(5);
        let img = embed(&SparseVector::zero(), &sys, &w, &space, Domain::Plane).unwrap();
        let ev = eval_at(&img, &ComplexRational::from_ints(1, 0), &int(1)).unwrap();
        assert!(ev.value.is_zero());
        assert!(ev.tail.is_zero());
    }

    #[test]
    fn continuity_constant_gaussian_recomputed() {
        let w = make_weights(WeightParams::Gaussian { q: rat(1, 2) }, 8).unwrap();
        let k = int(2);
        let c = continuity_constant(&w, &k, 8).unwrap();
        let partial: Rational = (0..8)
            .map(|n| num_traits::pow(rat(1, 2), n * n) * num_traits::pow(int(2), n))
            .sum();
        let q = rat(1, 2);
        let majorant = num_traits::pow(q.clone(), 64) * num_traits::pow(int(2), 8)
            / (int(1) - num_traits::pow(q, 17) * int(2));
        assert_eq!(c, partial + majorant);
    }

    #[test]
    fn continuity_on_delta_zero() {
        let (space, sys, w) = canonical(8);
        let k = int(2);
        let c_k = continuity_constant(&w, &k, 8).unwrap();
        let pairs: Vec<_> = [
            ComplexRational::zero(),
            ComplexRational::from_ints(2, 0),
            ComplexRational::from_ints(-1, 1),
        ]
        .into_iter()
        .map(|z| (SparseVector::delta(0), z))
        .collect();
        let res = verify_continuity_on(&sys, &w, &space, &k, &c_k, &pairs, &Domain::Plane).unwrap();
        assert!(res.holds);
        assert!(res.max_ratio <= int(1));
        let zero = verify_continuity_on(
            &sys,
            &w,
            &space,
            &k,
            &c_k,
            &[(SparseVector::zero(), ComplexRational::one())],
            &Domain::Plane,
        )
        .unwrap();
        assert_eq!(zero.max_ratio, int(0));
    }

    #[test]
    fn preimage_examples() {
        let (space, sys, w) = canonical(5);
        let one = polynomial_preimage(&[ComplexRational::one()], &sys, &w).unwrap();
        assert_eq!(one, sys.vectors()[0].scale_rational(&w.alpha(0).recip()));
        let p = [
            ComplexRational::from_ints(-3, 0),
            ComplexRational::zero(),
            ComplexRational::one(),
        ];
        let x = polynomial_preimage(&p, &sys, &w).unwrap();
        let img = embed(&x, &sys, &w, &space, Domain::Plane).unwrap();
        assert_eq!(&img.coefficients[..3], &p);
        assert!(img.coefficients[3..].iter().all(ComplexRational::is_zero));
        assert!(polynomial_preimage(&[], &sys, &w).unwrap().is_zero());
        assert!(matches!(
            polynomial_preimage(&vec![ComplexRational::one(); 6], &sys, &w),
            Err(Error::StageMismatch(_))
        ));
    }

    #[test]
    fn reconstruct_canonical_combination() {
        let (space, sys, w) = canonical(5);
        let mut x = sys.vectors()[0].scale_rational(&int(5));
        x.axpy(&-ComplexRational::from_ints(2, 1), &sys.vectors()[2]);
        let img = embed(&x, &sys, &w, &space, Domain::Plane).unwrap();
        assert_eq!(reconstruct(&img, &sys, &w, 3).unwrap(), x);
        assert_ne!(reconstruct(&img, &sys, &w, 2).unwrap(), x);
        assert!(reconstruct(&img, &sys, &w, 6).is_err());
    }

    #[test]
    fn csv_rendering() {
        let w = make_weights(WeightParams::InverseFactorial, 4).unwrap();
        let rows = continuity_table(&w, &[int(1)], &[2]).unwrap();
        // partial = 2, tail = α₂/(1 − 1/3) = 3/4
        assert_eq!(rows[0].c_k, rat(11, 4));
        let csv = table_to_csv(&rows);
        assert_eq!(
            csv,
            "k,stage,partial_sum,tail_bound,C_k\n1/1 (1),2,2/1 (2),3/4 (0.75),11/4 (2.75)\n"
        );
    }

    #[test]
    fn image_json_round_trip() {
        let (space, sys, _) = canonical(4);
        let w = make_weights(WeightParams::Gaussian { q: rat(1, 3) }, 4).unwrap();
        let x = SparseVector::from_entries([(1, ComplexRational::from_ints(1, -2))]);
        let img = embed(&x, &sys, &w, &space, Domain::Disc(int(3))).unwrap();
        let s = serde_json::to_string(&img).unwrap();
        assert!(s.contains(r#""domain":{"disc":"3/1"}"#));
        let back: EmbeddedImage = serde_json::from_str(&s).unwrap();
        assert_eq!(back, img);
    }
}
