//! Finite-stage biorthogonal systems.
//!
//! Pipeline: a seeded pair of vector/functional families is biorthogonalized by
//! two-sided elimination with exact zero tests, then each pair is rescaled by the
//! exact dual bound `m(n)` of its functional so that every `e′ₙ` is dominated by
//! the norm `p`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{self, substream};
use crate::scalar::{serde_rational, ComplexRational, Rational};
use crate::space::KotheMatrix;
use crate::sparse::{pair, Sparse, SparseFunctional, SparseVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `yₙ = vₙ = δₙ`.
    Canonical,
    /// Unit upper-triangular perturbations of the unit vectors.
    Triangular,
    /// `δₙ` plus a few seeded entries anywhere in `[0, N)`. Pivots may be skipped,
    /// and a seed occasionally yields a singular family (`ExhaustedWithoutPivot`).
    Random,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            FamilyKind::Canonical => "canonical",
            FamilyKind::Triangular => "triangular",
            FamilyKind::Random => "random",
        })
    }
}

/// Finite stage of the two countable families whose spans stand in for the
/// dense subsets of the space and of its dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseFamilyPair {
    pub kind: FamilyKind,
    pub seed: u64,
    pub bound: u32,
    pub vectors: Vec<SparseVector>,
    pub functionals: Vec<SparseFunctional>,
}

impl DenseFamilyPair {
    pub fn stage(&self) -> usize {
        self.vectors.len().min(self.functionals.len())
    }

    /// Family from explicit lists; `kind` is informational.
    pub fn from_lists(vectors: Vec<SparseVector>, functionals: Vec<SparseFunctional>) -> Self {
        Self {
            kind: FamilyKind::Random,
            seed: 0,
            bound: 1,
            vectors,
            functionals,
        }
    }
}

fn triangular<K>(rng: &mut impl Rng, stage: usize, bound: u32) -> Vec<Sparse<K>> {
    (0..stage)
        .map(|n| {
            let mut s = Sparse::delta(n);
            for k in 0..n {
                s.set(k, ComplexRational::real(random::rational(rng, bound)));
            }
            s
        })
        .collect()
}

fn perturbed<K>(rng: &mut impl Rng, stage: usize, bound: u32) -> Vec<Sparse<K>> {
    (0..stage)
        .map(|n| {
            let mut s = Sparse::delta(n);
            s.axpy(
                &ComplexRational::one(),
                &random::sparse(rng, stage, 3, bound),
            );
            s
        })
        .collect()
}

/// Deterministic for fixed `(kind, seed, stage, bound)`.
pub fn generate_dense_family(
    kind: FamilyKind,
    seed: u64,
    stage: usize,
    bound: u32,
) -> DenseFamilyPair {
    let bound = bound.max(1);
    let (vectors, functionals) = match kind {
        FamilyKind::Canonical => (
            (0..stage).map(Sparse::delta).collect(),
            (0..stage).map(Sparse::delta).collect(),
        ),
        FamilyKind::Triangular => (
            triangular(&mut substream(seed, 1), stage, bound),
            triangular(&mut substream(seed, 2), stage, bound),
        ),
        FamilyKind::Random => (
            perturbed(&mut substream(seed, 1), stage, bound),
            perturbed(&mut substream(seed, 2), stage, bound),
        ),
    };
    DenseFamilyPair {
        kind,
        seed,
        bound,
        vectors,
        functionals,
    }
}

/// Biorthogonal pairs `(xₙ, x′ₙ)` before normalization, with the family indices
/// consumed at each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBiorthogonal {
    pub x_vectors: Vec<SparseVector>,
    pub x_functionals: Vec<SparseFunctional>,
    pub consumed_y: Vec<usize>,
    pub consumed_v: Vec<usize>,
}

/// Two-sided elimination with lexicographic pivot search.
///
/// At step `n` the remaining `(yᵢ, vⱼ)` are scanned in `(i, j)` order; each is
/// reduced against the pairs accepted so far and the first one with nonzero
/// residual pairing becomes `(xₙ, x′ₙ)`, with `x′ₙ` scaled so the pairing is 1.
pub fn biorthogonalize(fam: &DenseFamilyPair, stage: usize) -> Result<RawBiorthogonal> {
    if stage > fam.vectors.len() || stage > fam.functionals.len() {
        return Err(Error::StageMismatch(format!(
            "stage {stage} exceeds family lengths ({}, {})",
            fam.vectors.len(),
            fam.functionals.len()
        )));
    }
    let mut raw = RawBiorthogonal {
        x_vectors: Vec::with_capacity(stage),
        x_functionals: Vec::with_capacity(stage),
        consumed_y: Vec::with_capacity(stage),
        consumed_v: Vec::with_capacity(stage),
    };
    let mut y_left: Vec<usize> = (0..fam.vectors.len()).collect();
    let mut v_left: Vec<usize> = (0..fam.functionals.len()).collect();

    for step in 0..stage {
        // functional residuals are shared by every candidate y at this step
        let mut v_res: Vec<Option<SparseFunctional>> = vec![None; v_left.len()];
        let mut found = None;
        'scan: for (yi, &i) in y_left.iter().enumerate() {
            let y_hat = residual_vector(&fam.vectors[i], &raw);
            if y_hat.is_zero() {
                continue;
            }
            for (vj, &j) in v_left.iter().enumerate() {
                let v_hat =
                    v_res[vj].get_or_insert_with(|| residual_functional(&fam.functionals[j], &raw));
                let p = pair(&y_hat, v_hat);
                if !p.is_zero() {
                    found = Some((yi, vj, y_hat, v_hat.clone(), p));
                    break 'scan;
                }
            }
        }
        let Some((yi, vj, y_hat, v_hat, p)) = found else {
            return Err(Error::ExhaustedWithoutPivot { step, stage });
        };
        let inv = p.inv().expect("pivot is nonzero");
        raw.consumed_y.push(y_left.remove(yi));
        raw.consumed_v.push(v_left.remove(vj));
        raw.x_vectors.push(y_hat);
        raw.x_functionals.push(v_hat.scale(&inv));
    }
    Ok(raw)
}

fn residual_vector(y: &SparseVector, raw: &RawBiorthogonal) -> SparseVector {
    let mut r = y.clone();
    for (x, xf) in raw.x_vectors.iter().zip(&raw.x_functionals) {
        let c = pair(y, xf);
        r.axpy(&-c, x);
    }
    r
}

fn residual_functional(v: &SparseFunctional, raw: &RawBiorthogonal) -> SparseFunctional {
    let mut r = v.clone();
    for (x, xf) in raw.x_vectors.iter().zip(&raw.x_functionals) {
        let c = pair(x, v);
        r.axpy(&-c, xf);
    }
    r
}

/// Normalized system `eₙ = m(n)·xₙ`, `e′ₙ = m(n)⁻¹·x′ₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiorthogonalSystem {
    stage: usize,
    /// Grade of the norm the constants refer to; always 0.
    norm_grade: usize,
    #[serde(with = "serde_rational::vec")]
    m_constants: Vec<Rational>,
    e_vectors: Vec<SparseVector>,
    e_functionals: Vec<SparseFunctional>,
    consumed_y: Vec<usize>,
    consumed_v: Vec<usize>,
}

/// Rescales each raw pair by the exact dual bound of its functional.
pub fn normalize(raw: &RawBiorthogonal, space: &KotheMatrix) -> Result<BiorthogonalSystem> {
    let m_constants = raw
        .x_functionals
        .iter()
        .enumerate()
        .map(|(n, u)| {
            space
                .dual_bound(u)
                .map_err(|e| e.context(format!("dual bound of x′{n}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let e_vectors = raw
        .x_vectors
        .iter()
        .zip(&m_constants)
        .map(|(x, m)| x.scale_rational(m))
        .collect();
    let e_functionals = raw
        .x_functionals
        .iter()
        .zip(&m_constants)
        .map(|(u, m)| u.scale_rational(&m.recip()))
        .collect();
    Ok(BiorthogonalSystem {
        stage: m_constants.len(),
        norm_grade: 0,
        m_constants,
        e_vectors,
        e_functionals,
        consumed_y: raw.consumed_y.clone(),
        consumed_v: raw.consumed_v.clone(),
    })
}

impl BiorthogonalSystem {
    /// Assembles a system from stored parts without checking biorthogonality;
    /// use the lemma checks to certify it.
    pub fn from_parts(
        e_vectors: Vec<SparseVector>,
        e_functionals: Vec<SparseFunctional>,
        m_constants: Vec<Rational>,
    ) -> Result<Self> {
        let stage = e_vectors.len();
        if e_functionals.len() != stage || m_constants.len() != stage {
            return Err(Error::StageMismatch(format!(
                "{} vectors, {} functionals, {} constants",
                stage,
                e_functionals.len(),
                m_constants.len()
            )));
        }
        Ok(Self {
            stage,
            norm_grade: 0,
            m_constants,
            e_vectors,
            e_functionals,
            consumed_y: (0..stage).collect(),
            consumed_v: (0..stage).collect(),
        })
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn norm_grade(&self) -> usize {
        self.norm_grade
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.e_vectors
    }

    pub fn functionals(&self) -> &[SparseFunctional] {
        &self.e_functionals
    }

    pub fn m_constants(&self) -> &[Rational] {
        &self.m_constants
    }

    pub fn consumed_y(&self) -> &[usize] {
        &self.consumed_y
    }

    pub fn consumed_v(&self) -> &[usize] {
        &self.consumed_v
    }

    /// Copy with the `n`-th functional replaced. Intended for perturbation studies.
    pub fn with_functional(&self, n: usize, u: SparseFunctional) -> Self {
        let mut out = self.clone();
        out.e_functionals[n] = u;
        out
    }

    /// Checks shape consistency after deserialization.
    pub fn validate_shape(&self) -> Result<()> {
        let n = self.stage;
        if self.e_vectors.len() != n
            || self.e_functionals.len() != n
            || self.m_constants.len() != n
            || self.consumed_y.len() != n
            || self.consumed_v.len() != n
        {
            return Err(Error::StageMismatch(format!(
                "system declares stage {n} but its lists disagree"
            )));
        }
        Ok(())
    }
}

/// Convenience: family → raw system → normalized system.
pub fn build_system(
    space: &KotheMatrix,
    kind: FamilyKind,
    seed: u64,
    stage: usize,
    bound: u32,
) -> Result<(DenseFamilyPair, BiorthogonalSystem)> {
    let fam = generate_dense_family(kind, seed, stage, bound);
    let raw = biorthogonalize(&fam, stage)?;
    let sys = normalize(&raw, space)?;
    Ok((fam, sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::space::{make_kothe, KotheFamily};

    #[test]
    fn canonical_family() {
        let fam = generate_dense_family(FamilyKind::Canonical, 99, 3, 5);
        assert_eq!(
            fam.vectors,
            (0..3).map(SparseVector::delta).collect::<Vec<_>>()
        );
        assert_eq!(
            fam.functionals,
            (0..3).map(SparseFunctional::delta).collect::<Vec<_>>()
        );
    }

    #[test]
    fn triangular_family_replays_seeded_generator() {
        let fam = generate_dense_family(FamilyKind::Triangular, 1, 2, 9);
        // replay: first draw from the vector substream is c₀ of y₁
        let c0 = random::rational(&mut substream(1, 1), 9);
        let mut expected = SparseVector::delta(1);
        expected.set(0, ComplexRational::real(c0));
        assert_eq!(fam.vectors[0], SparseVector::delta(0));
        assert_eq!(fam.vectors[1], expected);
        assert_eq!(fam, generate_dense_family(FamilyKind::Triangular, 1, 2, 9));
    }

    #[test]
    fn canonical_raw_is_identity() {
        let fam = generate_dense_family(FamilyKind::Canonical, 0, 3, 1);
        let raw = biorthogonalize(&fam, 3).unwrap();
        assert_eq!(raw.x_vectors, fam.vectors);
        assert_eq!(raw.x_functionals, fam.functionals);
        assert_eq!(raw.consumed_y, vec![0, 1, 2]);
    }

    #[test]
    fn two_by_two_hand_elimination() {
        let fam = DenseFamilyPair::from_lists(
            vec![
                SparseVector::delta(0),
                SparseVector::delta(0).add(&SparseVector::delta(1)),
            ],
            vec![SparseFunctional::delta(0), SparseFunctional::delta(1)],
        );
        let raw = biorthogonalize(&fam, 2).unwrap();
        assert_eq!(
            raw.x_vectors,
            vec![SparseVector::delta(0), SparseVector::delta(1)]
        );
        assert_eq!(
            raw.x_functionals,
            vec![SparseFunctional::delta(0), SparseFunctional::delta(1)]
        );
    }

    #[test]
    fn pivot_search_skips_degenerate_pairs() {
        // y₀ pairs to zero with v₀, so the first pivot is (y₀, v₁)
        let fam = DenseFamilyPair::from_lists(
            vec![SparseVector::delta(1), SparseVector::delta(0)],
            vec![SparseFunctional::delta(0), SparseFunctional::delta(1)],
        );
        let raw = biorthogonalize(&fam, 2).unwrap();
        assert_eq!(raw.consumed_y, vec![0, 1]);
        assert_eq!(raw.consumed_v, vec![1, 0]);
    }

    #[test]
    fn exhausted_without_pivot() {
        let fam = DenseFamilyPair::from_lists(
            vec![
                SparseVector::delta(0),
                SparseVector::delta(0).scale_rational(&int(2)),
            ],
            vec![SparseFunctional::delta(0), SparseFunctional::delta(1)],
        );
        assert_eq!(
            biorthogonalize(&fam, 2),
            Err(Error::ExhaustedWithoutPivot { step: 1, stage: 2 })
        );
        assert!(matches!(
            biorthogonalize(&fam, 3),
            Err(Error::StageMismatch(_))
        ));
    }

    #[test]
    fn normalize_canonical_on_rapid_decrease() {
        let space = make_kothe(KotheFamily::RapidDecrease, 2, 5).unwrap();
        let (_, sys) = build_system(&space, FamilyKind::Canonical, 0, 5, 1).unwrap();
        for n in 0..5 {
            let a = int(n as i64 + 1);
            assert_eq!(sys.m_constants()[n], rat(1, n as i64 + 1));
            assert_eq!(
                sys.functionals()[n],
                SparseFunctional::delta(n).scale_rational(&a)
            );
            assert_eq!(
                sys.vectors()[n],
                SparseVector::delta(n).scale_rational(&a.recip())
            );
            assert_eq!(
                pair(&sys.vectors()[n], &sys.functionals()[n]),
                ComplexRational::one()
            );
        }
    }

    #[test]
    fn normalize_canonical_on_disc_type() {
        let space = make_kothe(KotheFamily::DiscType, 1, 6).unwrap();
        let (_, sys) = build_system(&space, FamilyKind::Canonical, 0, 6, 1).unwrap();
        let expected: Vec<Rational> = (0..6).map(|n| int(1 << n)).collect();
        assert_eq!(sys.m_constants(), &expected[..]);
    }

    #[test]
    fn system_json_round_trip() {
        let space = make_kothe(KotheFamily::RapidDecrease, 2, 6).unwrap();
        let (_, sys) = build_system(&space, FamilyKind::Random, 4, 6, 5).unwrap();
        let s = serde_json::to_string(&sys).unwrap();
        let back: BiorthogonalSystem = serde_json::from_str(&s).unwrap();
        back.validate_shape().unwrap();
        assert_eq!(back, sys);
    }
}
