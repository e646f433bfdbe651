//! Finite-support coefficient sequences on the primal and dual side.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::scalar::{ComplexRational, Rational};

/// Marker for vectors of the space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Primal;

/// Marker for continuous functionals acting by coordinatewise pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dual;

/// Finitely supported sequence of complex rationals. Stored entries are never zero.
pub struct Sparse<K> {
    entries: BTreeMap<usize, ComplexRational>,
    _kind: PhantomData<K>,
}

impl<K> Clone for Sparse<K> {
    fn clone(&self) -> Self {
        Self {
            entries: self.entries.clone(),
            _kind: PhantomData,
        }
    }
}

impl<K> PartialEq for Sparse<K> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<K> Eq for Sparse<K> {}

impl<K> std::hash::Hash for Sparse<K> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

pub type SparseVector = Sparse<Primal>;
pub type SparseFunctional = Sparse<Dual>;

impl<K> Default for Sparse<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K> Sparse<K> {
    pub fn zero() -> Self {
        Self {
            entries: BTreeMap::new(),
            _kind: PhantomData,
        }
    }

    /// Unit sequence at coordinate `n`.
    pub fn delta(n: usize) -> Self {
        let mut s = Self::zero();
        s.entries.insert(n, ComplexRational::one());
        s
    }

    /// Builds from `(index, value)` pairs; repeated indices are summed.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, ComplexRational)>,
    {
        let mut s = Self::zero();
        for (n, c) in entries {
            s.add_at(n, &c);
        }
        s
    }

    pub fn get(&self, n: usize) -> ComplexRational {
        self.entries
            .get(&n)
            .cloned()
            .unwrap_or_else(ComplexRational::zero)
    }

    pub fn set(&mut self, n: usize, c: ComplexRational) {
        if c.is_zero() {
            self.entries.remove(&n);
        } else {
            self.entries.insert(n, c);
        }
    }

    pub fn add_at(&mut self, n: usize, c: &ComplexRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(n).or_insert_with(ComplexRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&n);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ComplexRational)> + '_ {
        self.entries.iter().map(|(n, c)| (*n, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// `self += coeff · other`.
    pub fn axpy(&mut self, coeff: &ComplexRational, other: &Self) {
        if coeff.is_zero() {
            return;
        }
        for (n, c) in other.iter() {
            self.add_at(n, &(coeff * c));
        }
    }

    pub fn scale(&self, coeff: &ComplexRational) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(n, c)| (*n, c * coeff)).collect(),
            _kind: PhantomData,
        }
    }

    pub fn scale_rational(&self, factor: &Rational) -> Self {
        self.scale(&ComplexRational::real(factor.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(&ComplexRational::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(&-ComplexRational::one(), other);
        out
    }

    /// Dense coefficient row over `[0, len)`.
    pub fn to_dense(&self, len: usize) -> Vec<ComplexRational> {
        let mut row = vec![ComplexRational::zero(); len];
        for (n, c) in self.iter() {
            if n < len {
                row[n] = c.clone();
            }
        }
        row
    }
}

/// Duality bracket `⟨x, u⟩ = Σₙ xₙ·uₙ`; bilinear, no conjugation.
pub fn pair(x: &SparseVector, u: &SparseFunctional) -> ComplexRational {
    let (small, large) = if x.nnz() <= u.nnz() {
        (&x.entries, &u.entries)
    } else {
        (&u.entries, &x.entries)
    };
    let mut acc = ComplexRational::zero();
    for (n, a) in small {
        if let Some(b) = large.get(n) {
            acc += &(a * b);
        }
    }
    acc
}

impl<K> fmt::Debug for Sparse<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(n, c)| (n, c.to_string())))
            .finish()
    }
}

impl<K> Serialize for Sparse<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de, K> Deserialize<'de> for Sparse<K> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<usize, ComplexRational>::deserialize(d)?;
        Ok(Self::from_entries(map))
    }
}
