//! Positive weight sequences `(αₙ)` with `Σ αₙkⁿ < ∞` and exact tail majorants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, serde_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFamily {
    /// `αₙ = 1/n!`
    InverseFactorial,
    /// `αₙ = q^(n²)`, `0 < q < 1`
    Gaussian,
    /// Explicit values plus a geometric envelope `αₙ ≤ C·ρⁿ` beyond the window.
    Custom,
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            WeightFamily::InverseFactorial => "inverse_factorial",
            WeightFamily::Gaussian => "gaussian",
            WeightFamily::Custom => "custom",
        })
    }
}

/// Geometric envelope `αₙ ≤ constant·ratioⁿ` for every `n` past the explicit values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(with = "serde_rational")]
    pub constant: Rational,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
}

/// JSON form: `{"family", "params", "window"}`.
///
/// `params` holds `q` for `gaussian`, and `values` plus `envelope` for `custom`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub family: WeightFamily,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

impl WeightSpec {
    pub fn inverse_factorial() -> Self {
        Self {
            family: WeightFamily::InverseFactorial,
            params: Default::default(),
            window: None,
        }
    }

    pub fn gaussian(q: &Rational) -> Self {
        let mut params = serde_json::Map::new();
        params.insert("q".into(), format_rational(q).into());
        Self {
            family: WeightFamily::Gaussian,
            params,
            window: None,
        }
    }

    /// Builds the sequence on `[0, window)`; an explicit `window` in the JSON form wins.
    pub fn build(&self, window: usize) -> Result<WeightSequence> {
        let window = self.window.unwrap_or(window);
        let params = match self.family {
            WeightFamily::InverseFactorial => {
                reject_unknown(&self.params, &[])?;
                WeightParams::InverseFactorial
            }
            WeightFamily::Gaussian => {
                reject_unknown(&self.params, &["q"])?;
                let q = self
                    .params
                    .get("q")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| {
                        Error::InvalidParameter("gaussian weights need a string \"q\"".into())
                    })?;
                WeightParams::Gaussian {
                    q: parse_rational(q)?,
                }
            }
            WeightFamily::Custom => {
                reject_unknown(&self.params, &["values", "envelope"])?;
                let values: Vec<Rational> = match self.params.get("values") {
                    Some(v) => serde_rational::vec::deserialize(v.clone())
                        .map_err(|e| Error::Parse(e.to_string()))?,
                    None => {
                        return Err(Error::InvalidParameter(
                            "custom weights need \"values\"".into(),
                        ))
                    }
                };
                let envelope = match self.params.get("envelope") {
                    Some(v) => Some(
                        serde_json::from_value::<Envelope>(v.clone())
                            .map_err(|e| Error::Parse(e.to_string()))?,
                    ),
                    None => None,
                };
                return make_custom_weights(values, envelope);
            }
        };
        make_weights(params, window)
    }
}

fn reject_unknown(
    params: &serde_json::Map<String, serde_json::Value>,
    allowed: &[&str],
) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidParameter(format!(
            "unknown weight parameter {k:?}"
        ))),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightParams {
    InverseFactorial,
    Gaussian { q: Rational },
}

/// `αₙ` materialized on `[0, window)` together with a certified tail majorant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSequence {
    family: WeightFamily,
    q: Option<Rational>,
    envelope: Option<Envelope>,
    values: Vec<Rational>,
}

pub fn make_weights(params: WeightParams, window: usize) -> Result<WeightSequence> {
    match params {
        WeightParams::InverseFactorial => {
            let mut values = Vec::with_capacity(window);
            let mut acc = Rational::one();
            for n in 0..window {
                if n > 0 {
                    acc /= Rational::from_integer(BigInt::from(n));
                }
                values.push(acc.clone());
            }
            Ok(WeightSequence {
                family: WeightFamily::InverseFactorial,
                q: None,
                envelope: None,
                values,
            })
        }
        WeightParams::Gaussian { q } => {
            if !(q.is_positive() && q < Rational::one()) {
                return Err(Error::InvalidParameter(format!(
                    "gaussian q must lie in (0, 1), got {}",
                    format_rational(&q)
                )));
            }
            let values = (0..window).map(|n| gaussian_alpha(&q, n)).collect();
            Ok(WeightSequence {
                family: WeightFamily::Gaussian,
                q: Some(q),
                envelope: None,
                values,
            })
        }
    }
}

/// Custom weights are only accepted with an envelope that certifies the tail.
pub fn make_custom_weights(
    values: Vec<Rational>,
    envelope: Option<Envelope>,
) -> Result<WeightSequence> {
    let Some(envelope) = envelope else {
        return Err(Error::CertificationUnavailable(
            "custom weights without a tail envelope cannot be certified".into(),
        ));
    };
    if let Some(n) = values.iter().position(|a| !a.is_positive()) {
        return Err(Error::InvalidParameter(format!(
            "weight α{n} is not positive"
        )));
    }
    if !envelope.constant.is_positive() || !envelope.ratio.is_positive() {
        return Err(Error::InvalidParameter(
            "envelope constant and ratio must be positive".into(),
        ));
    }
    Ok(WeightSequence {
        family: WeightFamily::Custom,
        q: None,
        envelope: Some(envelope),
        values,
    })
}

fn gaussian_alpha(q: &Rational, n: usize) -> Rational {
    pow(q, n * n)
}

fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

impl WeightSequence {
    pub fn family(&self) -> WeightFamily {
        self.family
    }

    pub fn window(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn alpha(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    pub fn to_spec(&self) -> WeightSpec {
        let mut params = serde_json::Map::new();
        match self.family {
            WeightFamily::InverseFactorial => {}
            WeightFamily::Gaussian => {
                params.insert("q".into(), format_rational(self.q.as_ref().unwrap()).into());
            }
            WeightFamily::Custom => {
                params.insert(
                    "values".into(),
                    self.values.iter().map(format_rational).collect(),
                );
                params.insert(
                    "envelope".into(),
                    serde_json::to_value(self.envelope.as_ref().unwrap()).unwrap(),
                );
            }
        }
        WeightSpec {
            family: self.family,
            params,
            window: Some(self.window()),
        }
    }

    /// Whether [`tail_majorant`](Self::tail_majorant) certifies `Σ_{n>N} αₙkⁿ`.
    pub fn tail_valid(&self, n: usize, k: &Rational) -> bool {
        if k.is_negative() {
            return false;
        }
        match self.family {
            WeightFamily::InverseFactorial => Rational::from_integer(BigInt::from(n + 2)) > *k,
            WeightFamily::Gaussian => {
                let q = self.q.as_ref().unwrap();
                pow(q, 2 * n + 3) * k < Rational::one()
            }
            WeightFamily::Custom => {
                let env = self.envelope.as_ref().unwrap();
                &env.ratio * k < Rational::one()
            }
        }
    }

    /// Exact upper bound for `Σ_{n>N} αₙkⁿ`.
    ///
    /// * inverse factorial: `α_{N+1}k^{N+1} / (1 − k/(N+2))`, valid for `N+2 > k`;
    /// * gaussian: `q^{(N+1)²}k^{N+1} / (1 − q^{2N+3}k)`, valid for `q^{2N+3}k < 1`;
    /// * custom: explicit terms up to the window, then `C·(ρk)^W / (1 − ρk)`.
    pub fn tail_majorant(&self, n: usize, k: &Rational) -> Result<Rational> {
        if !self.tail_valid(n, k) {
            return Err(Error::CertificationUnavailable(format!(
                "{} tail majorant is not valid at N = {n}, k = {}",
                self.family,
                format_rational(k)
            )));
        }
        let one = Rational::one();
        Ok(match self.family {
            WeightFamily::InverseFactorial => {
                let next = n + 1;
                let mut alpha = Rational::one();
                for i in 2..=next {
                    alpha /= Rational::from_integer(BigInt::from(i));
                }
                let ratio = k / Rational::from_integer(BigInt::from(n + 2));
                alpha * pow(k, next) / (one - ratio)
            }
            WeightFamily::Gaussian => {
                let q = self.q.as_ref().unwrap();
                let ratio = pow(q, 2 * n + 3) * k;
                gaussian_alpha(q, n + 1) * pow(k, n + 1) / (one - ratio)
            }
            WeightFamily::Custom => {
                let env = self.envelope.as_ref().unwrap();
                let w = self.values.len();
                let explicit =
                    (n + 1..w).fold(Rational::zero(), |acc, i| acc + &self.values[i] * pow(k, i));
                let rk = &env.ratio * k;
                let start = (n + 1).max(w);
                explicit + &env.constant * pow(&rk, start) / (one - rk)
            }
        })
    }

    /// `Σ_{n<N} αₙkⁿ`, exact.
    pub fn partial_sum(&self, stage: usize, k: &Rational) -> Result<Rational> {
        if stage > self.window() {
            return Err(Error::StageMismatch(format!(
                "partial sum to {stage} exceeds the weight window {}",
                self.window()
            )));
        }
        let mut acc = Rational::zero();
        let mut kp = Rational::one();
        for alpha in &self.values[..stage] {
            acc += alpha * &kp;
            kp *= k;
        }
        Ok(acc)
    }
}
