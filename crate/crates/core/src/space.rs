//! Köthe echelon spaces of order one, materialized on a finite coordinate window.
//!
//! A matrix of positive weights `a(j,n)`, nondecreasing in `j`, defines the
//! seminorms `pⱼ(x) = Σₙ a(j,n)·|xₙ|₁`. Grade 0 is the continuous norm `p`
//! used throughout the crate.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{int, rat, serde_rational, Rational};
use crate::sparse::{Sparse, SparseFunctional, SparseVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KotheFamily {
    /// `a(j,n) = (n+1)^(j+1)`: rapidly decreasing sequences.
    RapidDecrease,
    /// `a(j,n) = ((j+1)/(j+2))^n`: a power series space of finite type.
    DiscType,
    Custom,
}

impl fmt::Display for KotheFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            KotheFamily::RapidDecrease => "rapid_decrease",
            KotheFamily::DiscType => "disc_type",
            KotheFamily::Custom => "custom",
        })
    }
}

/// JSON form of a space: `{"family", "params", "grades", "window", "rows"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KotheSpec {
    pub family: KotheFamily,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub grades: Option<usize>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default, with = "opt_matrix", skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<Rational>>>,
}

mod opt_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        rows: &Option<Vec<Vec<Rational>>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match rows {
            Some(r) => serde_rational::matrix::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Vec<Rational>>>, D::Error> {
        serde_rational::matrix::deserialize(d).map(Some)
    }
}

impl KotheSpec {
    pub fn builtin(family: KotheFamily, grades: usize, window: usize) -> Self {
        Self {
            family,
            params: Default::default(),
            grades: Some(grades),
            window: Some(window),
            rows: None,
        }
    }

    pub fn build(&self) -> Result<KotheMatrix> {
        if self.family != KotheFamily::Custom && !self.params.is_empty() {
            let keys: Vec<_> = self.params.keys().cloned().collect();
            return Err(Error::InvalidParameter(format!(
                "family {} takes no parameters, got {keys:?}",
                self.family
            )));
        }
        match self.family {
            KotheFamily::Custom => {
                let rows = self.rows.clone().ok_or_else(|| {
                    Error::InvalidParameter("custom family requires \"rows\"".into())
                })?;
                let m = KotheMatrix::custom(rows)?;
                if self.grades.is_some_and(|j| j != m.grades())
                    || self.window.is_some_and(|n| n != m.window())
                {
                    return Err(Error::InvalidParameter(format!(
                        "custom rows are {}x{}, which disagrees with grades/window",
                        m.grades(),
                        m.window()
                    )));
                }
                Ok(m)
            }
            ref family => {
                if self.rows.is_some() {
                    return Err(Error::InvalidParameter(
                        "\"rows\" is only accepted for the custom family".into(),
                    ));
                }
                let grades = self
                    .grades
                    .ok_or_else(|| Error::InvalidParameter("missing \"grades\"".into()))?;
                let window = self
                    .window
                    .ok_or_else(|| Error::InvalidParameter("missing \"window\"".into()))?;
                make_kothe(family.clone(), grades, window)
            }
        }
    }
}

/// Outcome of the continuous-norm check; `witness` is the first zero-weight index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormCheck {
    pub has_continuous_norm: bool,
    pub witness: Option<usize>,
}

/// Validated Köthe matrix on grades `[0, J)` and coordinates `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KotheMatrix {
    family: KotheFamily,
    rows: Vec<Vec<Rational>>,
}

/// Materializes a built-in family, or validates explicit rows for `Custom`.
pub fn make_kothe(family: KotheFamily, grades: usize, window: usize) -> Result<KotheMatrix> {
    if grades == 0 || window == 0 {
        return Err(Error::InvalidParameter(format!(
            "grades and window must be positive (got {grades}, {window})"
        )));
    }
    let rows = match family {
        KotheFamily::RapidDecrease => (0..grades)
            .map(|j| {
                (0..window)
                    .map(|n| int(n as i64 + 1).pow(j as i32 + 1))
                    .collect()
            })
            .collect(),
        KotheFamily::DiscType => (0..grades)
            .map(|j| {
                let ratio = rat(j as i64 + 1, j as i64 + 2);
                let mut acc = Rational::one();
                let mut row = Vec::with_capacity(window);
                for _ in 0..window {
                    row.push(acc.clone());
                    acc *= &ratio;
                }
                row
            })
            .collect(),
        KotheFamily::Custom => {
            return Err(Error::InvalidParameter(
                "custom matrices are built from explicit rows".into(),
            ))
        }
    };
    KotheMatrix::validated(family, rows)
}

impl KotheMatrix {
    pub fn custom(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter(
                "custom rows must be non-empty".into(),
            ));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter(
                "custom rows differ in length".into(),
            ));
        }
        Self::validated(KotheFamily::Custom, rows)
    }

    fn validated(family: KotheFamily, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for (j, row) in rows.iter().enumerate() {
            if let Some(n) = row.iter().position(|a| !a.is_positive()) {
                return Err(Error::NonPositiveWeight { grade: j, index: n });
            }
        }
        for j in 0..rows.len().saturating_sub(1) {
            if let Some(n) = (0..rows[j].len()).find(|&n| rows[j][n] > rows[j + 1][n]) {
                return Err(Error::LadderViolation { grade: j, index: n });
            }
        }
        Ok(Self { family, rows })
    }

    pub fn family(&self) -> &KotheFamily {
        &self.family
    }

    pub fn grades(&self) -> usize {
        self.rows.len()
    }

    pub fn window(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn weight(&self, grade: usize, n: usize) -> &Rational {
        &self.rows[grade][n]
    }

    pub fn to_spec(&self) -> KotheSpec {
        match self.family {
            KotheFamily::Custom => KotheSpec {
                family: KotheFamily::Custom,
                params: Default::default(),
                grades: Some(self.grades()),
                window: Some(self.window()),
                rows: Some(self.rows.clone()),
            },
            ref f => KotheSpec::builtin(f.clone(), self.grades(), self.window()),
        }
    }

    fn check_window<K>(&self, s: &Sparse<K>) -> Result<()> {
        match s.max_index() {
            Some(n) if n >= self.window() => Err(Error::WindowExceeded {
                index: n,
                window: self.window(),
            }),
            _ => Ok(()),
        }
    }

    /// `pⱼ(x) = Σₙ a(j,n)·|xₙ|₁`, exact.
    pub fn seminorm(&self, grade: usize, x: &SparseVector) -> Result<Rational> {
        if grade >= self.grades() {
            return Err(Error::GradeOutOfRange {
                grade,
                grades: self.grades(),
            });
        }
        self.check_window(x)?;
        let row = &self.rows[grade];
        Ok(x.iter()
            .fold(Rational::zero(), |acc, (n, c)| acc + &row[n] * c.abs1()))
    }

    /// The continuous norm `p = p₀`.
    pub fn norm(&self, x: &SparseVector) -> Result<Rational> {
        self.seminorm(0, x)
    }

    /// Smallest `m` with `|⟨x,u⟩|₁ ≤ m·p₀(x)` for all `x`: `maxₙ |uₙ|₁ / a(0,n)`.
    pub fn dual_bound(&self, u: &SparseFunctional) -> Result<Rational> {
        if u.is_zero() {
            return Err(Error::ZeroFunctional);
        }
        self.check_window(u)?;
        let row = &self.rows[0];
        Ok(u.iter()
            .map(|(n, c)| c.abs1() / &row[n])
            .max()
            .expect("non-empty support"))
    }

    pub fn check_continuous_norm(&self) -> NormCheck {
        check_continuous_norm(&self.rows)
    }
}

/// Grade 0 is a norm on the window iff every `a(0,n)` is positive.
///
/// Works on raw rows so that rejected custom matrices can still be diagnosed.
pub fn check_continuous_norm(rows: &[Vec<Rational>]) -> NormCheck {
    let witness = rows
        .first()
        .and_then(|r| r.iter().position(|a| !a.is_positive()));
    NormCheck {
        has_continuous_norm: rows.first().is_some_and(|r| !r.is_empty()) && witness.is_none(),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ComplexRational;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn rapid_decrease_rows() {
        let m = make_kothe(KotheFamily::RapidDecrease, 2, 3).unwrap();
        assert_eq!(m.rows(), &[ints(&[1, 2, 3]), ints(&[1, 4, 9])]);
    }

    #[test]
    fn disc_type_row() {
        let m = make_kothe(KotheFamily::DiscType, 1, 3).unwrap();
        assert_eq!(m.rows(), &[vec![int(1), rat(1, 2), rat(1, 4)]]);
        let m = make_kothe(KotheFamily::DiscType, 2, 3).unwrap();
        assert_eq!(m.rows()[1], vec![int(1), rat(2, 3), rat(4, 9)]);
    }

    #[test]
    fn custom_rejections() {
        assert_eq!(
            KotheMatrix::custom(vec![ints(&[1, 1]), ints(&[1, 0])]),
            Err(Error::NonPositiveWeight { grade: 1, index: 1 })
        );
        assert_eq!(
            KotheMatrix::custom(vec![ints(&[1, 3]), ints(&[1, 2])]),
            Err(Error::LadderViolation { grade: 0, index: 1 })
        );
        assert!(make_kothe(KotheFamily::RapidDecrease, 0, 3).is_err());
    }

    #[test]
    fn seminorm_examples() {
        let m = make_kothe(KotheFamily::RapidDecrease, 2, 4).unwrap();
        assert_eq!(m.norm(&SparseVector::zero()).unwrap(), int(0));
        assert_eq!(m.norm(&SparseVector::delta(1)).unwrap(), int(2));
        let x = SparseVector::from_entries([(0, ComplexRational::from_ints(1, 1))]);
        assert_eq!(m.norm(&x).unwrap(), int(2));
        assert_eq!(
            m.norm(&SparseVector::delta(4)),
            Err(Error::WindowExceeded {
                index: 4,
                window: 4
            })
        );
        assert!(matches!(
            m.seminorm(2, &x),
            Err(Error::GradeOutOfRange { .. })
        ));
    }

    #[test]
    fn dual_bound_examples() {
        let rd = make_kothe(KotheFamily::RapidDecrease, 1, 4).unwrap();
        assert_eq!(rd.dual_bound(&SparseFunctional::delta(0)).unwrap(), int(1));
        let u = SparseFunctional::delta(0).add(&SparseFunctional::delta(1));
        assert_eq!(rd.dual_bound(&u).unwrap(), int(1));
        let disc = make_kothe(KotheFamily::DiscType, 1, 4).unwrap();
        assert_eq!(
            disc.dual_bound(&SparseFunctional::delta(2)).unwrap(),
            int(4)
        );
        assert_eq!(
            rd.dual_bound(&SparseFunctional::zero()),
            Err(Error::ZeroFunctional)
        );
    }

    #[test]
    fn continuous_norm_checks() {
        let rd = make_kothe(KotheFamily::RapidDecrease, 3, 8).unwrap();
        assert!(rd.check_continuous_norm().has_continuous_norm);
        let disc = make_kothe(KotheFamily::DiscType, 3, 8).unwrap();
        assert!(disc.check_continuous_norm().has_continuous_norm);
        let bad = check_continuous_norm(&[ints(&[1, 0, 1])]);
        assert_eq!(
            bad,
            NormCheck {
                has_continuous_norm: false,
                witness: Some(1)
            }
        );
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"family":"custom","rows":[["1","1/2"],["2","3/2"]]}"#;
        let spec: KotheSpec = serde_json::from_str(json).unwrap();
        let m = spec.build().unwrap();
        assert_eq!(m.window(), 2);
        assert_eq!(m.to_spec().build().unwrap(), m);

        let spec: KotheSpec =
            serde_json::from_str(r#"{"family":"disc_type","grades":2,"window":5}"#).unwrap();
        assert_eq!(spec.build().unwrap().window(), 5);

        let spec: KotheSpec = serde_json::from_str(
            r#"{"family":"rapid_decrease","params":{"q":"1/2"},"grades":2,"window":5}"#,
        )
        .unwrap();
        assert!(matches!(spec.build(), Err(Error::InvalidParameter(_))));
    }
}
