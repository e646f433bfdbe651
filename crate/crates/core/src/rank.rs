//! Exact rank certificates by fraction-free elimination over the Gaussian integers.
//!
//! Rows are cleared of denominators, then reduced with integer-preserving
//! cross-multiplication `r ← p_c·r − r_c·p` followed by division by the
//! rational-integer content. No division by a pivot ever happens.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::sparse::Sparse;

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

type IntRow = BTreeMap<usize, GaussInt>;

fn integer_row<K>(v: &Sparse<K>) -> IntRow {
    let lcm = v.iter().fold(BigInt::one(), |acc, (_, c)| {
        acc.lcm(c.re.denom()).lcm(c.im.denom())
    });
    let mut row: IntRow = v
        .iter()
        .map(|(n, c)| {
            let re = c.re.numer() * (&lcm / c.re.denom());
            let im = c.im.numer() * (&lcm / c.im.denom());
            (n, GaussInt { re, im })
        })
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let g = row
        .values()
        .fold(BigInt::zero(), |g, c| g.gcd(&c.re).gcd(&c.im));
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in row.values_mut() {
        c.re /= &g;
        c.im /= &g;
    }
}

/// Row echelon basis grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: BTreeMap<usize, IntRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Leading indices of the stored rows, ascending.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    fn reduce(&self, mut r: IntRow) -> IntRow {
        while let Some((&lead, _)) = r.iter().next() {
            let Some(p) = self.rows.get(&lead) else {
                break;
            };
            let pc = &p[&lead];
            let rc = r[&lead].clone();
            let mut next = IntRow::new();
            let keys: std::collections::BTreeSet<usize> =
                r.keys().chain(p.keys()).copied().collect();
            for k in keys {
                let a = r.get(&k).map(|c| pc.mul(c));
                let b = p.get(&k).map(|c| rc.mul(c));
                let v = match (a, b) {
                    (Some(a), Some(b)) => a.sub(&b),
                    (Some(a), None) => a,
                    (None, Some(b)) => GaussInt {
                        re: -b.re,
                        im: -b.im,
                    },
                    (None, None) => unreachable!(),
                };
                if !v.is_zero() {
                    next.insert(k, v);
                }
            }
            debug_assert!(!next.contains_key(&lead));
            make_primitive(&mut next);
            r = next;
        }
        r
    }

    /// Adds `v`; returns `true` when the rank grew.
    pub fn insert<K>(&mut self, v: &Sparse<K>) -> bool {
        let r = self.reduce(integer_row(v));
        match r.keys().next().copied() {
            Some(lead) => {
                self.rows.insert(lead, r);
                true
            }
            None => false,
        }
    }

    /// Whether `v` lies in the span of the inserted vectors.
    pub fn contains<K>(&self, v: &Sparse<K>) -> bool {
        self.reduce(integer_row(v)).is_empty()
    }
}

/// Exact rank of a family of sparse rows.
pub fn rank<'a, K: 'a, I>(vectors: I) -> usize
where
    I: IntoIterator<Item = &'a Sparse<K>>,
{
    let mut basis = EchelonBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

/// `profile[n]` is the rank of the first `n + 1` vectors.
pub fn rank_profile<'a, K: 'a, I>(vectors: I) -> Vec<usize>
where
    I: IntoIterator<Item = &'a Sparse<K>>,
{
    let mut basis = EchelonBasis::new();
    vectors
        .into_iter()
        .map(|v| {
            basis.insert(v);
            basis.rank()
        })
        .collect()
}

/// Per-prefix span comparison of two equally long families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCertificate {
    pub lengths_match: bool,
    pub left_ranks: Vec<usize>,
    pub right_ranks: Vec<usize>,
    pub joint_ranks: Vec<usize>,
}

impl SpanCertificate {
    /// First prefix length (1-based) at which the spans differ.
    pub fn first_mismatch(&self) -> Option<usize> {
        (0..self.joint_ranks.len())
            .find(|&i| {
                self.left_ranks[i] != self.joint_ranks[i]
                    || self.right_ranks[i] != self.joint_ranks[i]
            })
            .map(|i| i + 1)
    }

    pub fn holds(&self) -> bool {
        self.lengths_match && self.first_mismatch().is_none()
    }
}

/// Certifies `span(left[..=n]) = span(right[..=n])` for every prefix `n`:
/// both families and their union have the same rank. Families of different
/// lengths never certify.
pub fn span_certificate<K>(left: &[Sparse<K>], right: &[Sparse<K>]) -> SpanCertificate {
    let len = left.len().min(right.len());
    let mut l = EchelonBasis::new();
    let mut r = EchelonBasis::new();
    let mut joint = EchelonBasis::new();
    let mut cert = SpanCertificate {
        lengths_match: left.len() == right.len(),
        left_ranks: Vec::with_capacity(len),
        right_ranks: Vec::with_capacity(len),
        joint_ranks: Vec::with_capacity(len),
    };
    for i in 0..len {
        l.insert(&left[i]);
        r.insert(&right[i]);
        joint.insert(&left[i]);
        joint.insert(&right[i]);
        cert.left_ranks.push(l.rank());
        cert.right_ranks.push(r.rank());
        cert.joint_ranks.push(joint.rank());
    }
    cert
}
