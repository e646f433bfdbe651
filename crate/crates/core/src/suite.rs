//! End-to-end certificate suite driven by a JSON run configuration.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::biortho::{
    biorthogonalize, generate_dense_family, normalize, BiorthogonalSystem, FamilyKind,
};
use crate::embedding::{
    continuity_table, embed, polynomial_preimage, reconstruct, verify_continuity, ContinuityResult,
    ContinuityRow, Domain,
};
use crate::error::{Error, Result};
use crate::lemma::{
    check_norm_from_functionals, span_element, verify_lemma_conditions, LemmaReport,
};
use crate::random::{self, substream, RNG_NAME};
use crate::scalar::{format_rational, serde_rational, ComplexRational, Rational};
use crate::space::{KotheMatrix, KotheSpec, NormCheck};
use crate::weights::{WeightSequence, WeightSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bound")]
    pub bound: u32,
}

fn default_bound() -> u32 {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(with = "serde_rational::vec")]
    pub k_list: Vec<Rational>,
}

fn default_samples() -> usize {
    200
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Everything one run of the suite needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub space: KotheSpec,
    pub family: FamilySpec,
    #[serde(default = "WeightSpec::inverse_factorial")]
    pub weights: WeightSpec,
    #[serde(default = "default_domain")]
    pub domain: Domain,
    pub stage: usize,
    pub verification: VerificationSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_domain() -> Domain {
    Domain::Plane
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("run config: {e}")))
    }

    /// Canonical system on rapidly decreasing sequences with inverse factorial weights.
    pub fn demo() -> Self {
        RunConfig {
            space: KotheSpec::builtin(crate::space::KotheFamily::RapidDecrease, 3, 16),
            family: FamilySpec {
                kind: FamilyKind::Canonical,
                seed: 0,
                bound: 8,
            },
            weights: WeightSpec::inverse_factorial(),
            domain: Domain::Plane,
            stage: 16,
            verification: VerificationSpec {
                samples: 200,
                seed: 1,
                k_list: vec![
                    crate::scalar::int(1),
                    crate::scalar::int(2),
                    crate::scalar::int(4),
                ],
            },
            output: OutputSpec::default(),
        }
    }

    /// Builds the space and weights and checks the configuration invariants.
    pub fn resolve(&self) -> Result<(KotheMatrix, WeightSequence)> {
        let space = self.space.build().map_err(|e| e.context("space"))?;
        if self.stage == 0 || self.stage > space.window() {
            return Err(Error::StageMismatch(format!(
                "stage {} must lie in [1, {}]",
                self.stage,
                space.window()
            ))
            .context("stage"));
        }
        let weights = self
            .weights
            .build(self.stage)
            .map_err(|e| e.context("weights"))?;
        if weights.window() < self.stage {
            return Err(Error::StageMismatch(format!(
                "weights cover {} terms, stage is {}",
                weights.window(),
                self.stage
            ))
            .context("weights"));
        }
        for (i, k) in self.verification.k_list.iter().enumerate() {
            let at = format!("verification.k_list[{i}]");
            if !weights.tail_valid(self.stage - 1, k) {
                return Err(Error::CertificationUnavailable(format!(
                    "k = {} fails the {} tail predicate at stage {}",
                    format_rational(k),
                    weights.family(),
                    self.stage
                ))
                .context(at));
            }
            self.domain.admits(k).map_err(|e| e.context(at))?;
        }
        Ok((space, weights))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub continuity: Vec<ContinuityResult>,
    pub injectivity: bool,
    pub monomial_roundtrip: bool,
    pub polynomial_roundtrip: bool,
    pub density_reconstruction: bool,
    pub continuity_table: Vec<ContinuityRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub rng: &'static str,
    pub family_kind: FamilyKind,
    pub family_seed: u64,
    pub family_bound: u32,
    pub verification_seed: u64,
    pub samples: usize,
    pub crate_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

/// Wall-clock timings. Excluded from reports unless requested, since they break
/// byte-for-byte reproducibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub construction: u128,
    pub lemma: u128,
    pub theorem: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub passed: bool,
    pub continuous_norm: NormCheck,
    pub lemma: LemmaReport,
    pub norm_from_functionals: bool,
    pub theorem: TheoremReport,
    pub environment: Environment,
}

impl CertificateReport {
    fn all_true(&self) -> bool {
        let t = &self.theorem;
        self.continuous_norm.has_continuous_norm
            && self.lemma.passed()
            && self.norm_from_functionals
            && t.continuity.iter().all(|c| c.holds)
            && t.injectivity
            && t.monomial_roundtrip
            && t.polynomial_roundtrip
            && t.density_reconstruction
    }

    /// Canonical JSON rendering: pretty-printed, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn run_suite(cfg: &RunConfig) -> Result<CertificateReport> {
    run_suite_with(cfg, false)
}

/// Runs the suite; `timed` adds wall-clock timings to the environment block.
pub fn run_suite_with(cfg: &RunConfig, timed: bool) -> Result<CertificateReport> {
    let (space, weights) = cfg.resolve()?;
    let stage = cfg.stage;
    let vseed = cfg.verification.seed;
    let samples = cfg.verification.samples;

    let t0 = Instant::now();
    let fam = generate_dense_family(cfg.family.kind, cfg.family.seed, stage, cfg.family.bound);
    let raw = biorthogonalize(&fam, stage).map_err(|e| e.context("family"))?;
    let sys = normalize(&raw, &space).map_err(|e| e.context("family"))?;
    let construction = t0.elapsed();

    let t1 = Instant::now();
    let lemma = verify_lemma_conditions(&sys, &fam, &space, samples, vseed);
    let norm_from_functionals = check_norm_from_functionals(&sys, &space, samples, vseed);
    let lemma_time = t1.elapsed();

    let t2 = Instant::now();
    let continuity = cfg
        .verification
        .k_list
        .iter()
        .map(|k| verify_continuity(&sys, &weights, &space, k, samples, vseed, &cfg.domain))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.context("verification.k_list"))?;
    let (injectivity, density_reconstruction) =
        check_injectivity_and_density(&sys, &weights, &space, &cfg.domain, samples, vseed)?;
    let monomial_roundtrip = check_monomial_roundtrip(&sys, &weights, &space, &cfg.domain)?;
    let polynomial_roundtrip =
        check_polynomial_roundtrip(&sys, &weights, &space, &cfg.domain, samples, vseed)?;
    let table = continuity_table(&weights, &cfg.verification.k_list, &[stage])?;
    let theorem_time = t2.elapsed();

    let mut report = CertificateReport {
        passed: false,
        continuous_norm: space.check_continuous_norm(),
        lemma,
        norm_from_functionals,
        theorem: TheoremReport {
            continuity,
            injectivity,
            monomial_roundtrip,
            polynomial_roundtrip,
            density_reconstruction,
            continuity_table: table,
        },
        environment: Environment {
            rng: RNG_NAME,
            family_kind: cfg.family.kind,
            family_seed: cfg.family.seed,
            family_bound: cfg.family.bound,
            verification_seed: vseed,
            samples,
            crate_version: env!("CARGO_PKG_VERSION"),
            timings_ms: timed.then_some(Timings {
                construction: construction.as_millis(),
                lemma: lemma_time.as_millis(),
                theorem: theorem_time.as_millis(),
            }),
        },
    };
    report.passed = report.all_true();
    Ok(report)
}

/// Random elements `Σ_{n<M} λₙeₙ` with `M ≤ stage`: the image vanishes only for
/// `x = 0`, and reconstruction to `M` terms returns `x` exactly.
pub fn check_injectivity_and_density(
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    space: &KotheMatrix,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<(bool, bool)> {
    let stage = sys.stage();
    let mut rng = substream(seed, 0x44);
    let mut injective = true;
    let mut recovered = true;
    for trial in 0..=samples {
        let prefix = rng.gen_range(1..=stage);
        let x = if trial == 0 {
            crate::sparse::SparseVector::zero()
        } else {
            let mut coeffs = Vec::new();
            for n in 0..prefix {
                if rng.gen_bool(0.5) {
                    coeffs.push((n, random::nonzero_complex(&mut rng, 9)));
                }
            }
            span_element(sys, coeffs)
        };
        let img = embed(&x, sys, w, space, domain.clone())?;
        injective &= img.is_zero() == x.is_zero();
        recovered &= reconstruct(&img, sys, w, prefix)? == x;
    }
    Ok((injective, recovered))
}

/// `T(αₙ⁻¹eₙ) = zⁿ` for every `n` below the stage.
pub fn check_monomial_roundtrip(
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    space: &KotheMatrix,
    domain: &Domain,
) -> Result<bool> {
    for n in 0..sys.stage() {
        let mut unit = vec![ComplexRational::zero(); n + 1];
        unit[n] = ComplexRational::one();
        let x = polynomial_preimage(&unit, sys, w)?;
        let img = embed(&x, sys, w, space, domain.clone())?;
        let ok = img.coefficients.iter().enumerate().all(|(m, c)| {
            if m == n {
                *c == ComplexRational::one()
            } else {
                c.is_zero()
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Embedding the preimage of a random polynomial returns its coefficients.
pub fn check_polynomial_roundtrip(
    sys: &BiorthogonalSystem,
    w: &WeightSequence,
    space: &KotheMatrix,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let mut rng = substream(seed, 0x55);
    for _ in 0..samples {
        let len = rng.gen_range(0..=sys.stage());
        let poly: Vec<ComplexRational> = (0..len).map(|_| random::complex(&mut rng, 9)).collect();
        let x = polynomial_preimage(&poly, sys, w)?;
        let img = embed(&x, sys, w, space, domain.clone())?;
        let ok = img.coefficients[..len] == poly[..]
            && img.coefficients[len..].iter().all(|c| c.is_zero());
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output of `build`: the space the constants refer to together with the system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub space: KotheSpec,
    pub system: BiorthogonalSystem,
}

impl SystemDocument {
    pub fn resolve(&self) -> Result<(KotheMatrix, &BiorthogonalSystem)> {
        let space = self.space.build().map_err(|e| e.context("space"))?;
        self.system.validate_shape()?;
        if let Some(n) = self
            .system
            .vectors()
            .iter()
            .filter_map(|v| v.max_index())
            .chain(
                self.system
                    .functionals()
                    .iter()
                    .filter_map(|u| u.max_index()),
            )
            .find(|&n| n >= space.window())
        {
            return Err(Error::WindowExceeded {
                index: n,
                window: space.window(),
            }
            .context("system"));
        }
        Ok((space, &self.system))
    }
}

/// Generates the family named in `cfg` and returns the normalized system.
pub fn build_from_config(cfg: &RunConfig) -> Result<SystemDocument> {
    let (space, _) = cfg.resolve()?;
    let fam = generate_dense_family(
        cfg.family.kind,
        cfg.family.seed,
        cfg.stage,
        cfg.family.bound,
    );
    let raw = biorthogonalize(&fam, cfg.stage).map_err(|e| e.context("family"))?;
    let system = normalize(&raw, &space).map_err(|e| e.context("family"))?;
    Ok(SystemDocument {
        space: space.to_spec(),
        system,
    })
}
