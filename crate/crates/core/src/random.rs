//! Seeded samplers for rationals, sparse vectors and evaluation points.
//!
//! All randomness in the crate flows through [`seeded`], so a seed fully
//! determines every family, sample and report.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{rat, ComplexRational, Rational};
use crate::sparse::Sparse;

/// Generator identification written into reports.
pub const RNG_NAME: &str = "ChaCha8Rng/seed_from_u64";

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a labelled sub-task.
pub fn substream(seed: u64, label: u64) -> SeededRng {
    let mut rng = seeded(seed);
    let salt: u64 = rng.gen();
    seeded(salt ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn rational(rng: &mut impl Rng, bound: u32) -> Rational {
    let b = bound.max(1) as i64;
    rat(rng.gen_range(-b..=b), rng.gen_range(1..=b))
}

pub fn nonzero_rational(rng: &mut impl Rng, bound: u32) -> Rational {
    loop {
        let q = rational(rng, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn complex(rng: &mut impl Rng, bound: u32) -> ComplexRational {
    let re = rational(rng, bound);
    let im = if rng.gen_bool(0.5) {
        rational(rng, bound)
    } else {
        Rational::zero()
    };
    ComplexRational::new(re, im)
}

pub fn nonzero_complex(rng: &mut impl Rng, bound: u32) -> ComplexRational {
    loop {
        let c = complex(rng, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Nonzero sparse sequence with 1..=`max_nnz` entries inside `[0, window)`.
pub fn sparse<K>(rng: &mut impl Rng, window: usize, max_nnz: usize, bound: u32) -> Sparse<K> {
    let max_nnz = max_nnz.clamp(1, window.max(1));
    loop {
        let nnz = rng.gen_range(1..=max_nnz);
        let s = Sparse::from_entries(
            (0..nnz).map(|_| (rng.gen_range(0..window), nonzero_complex(rng, bound))),
        );
        if !s.is_zero() {
            return s;
        }
    }
}

/// Point with `|z|₁ ≤ k`; about a quarter of the draws land exactly on `|z|₁ = k`.
pub fn point_in_radius(rng: &mut impl Rng, k: &Rational, bound: u32) -> ComplexRational {
    let z = complex(rng, bound);
    let s = z.abs1();
    if s.is_zero() {
        return z;
    }
    let shrink = if rng.gen_bool(0.25) || s > Rational::one() {
        k / &s
    } else {
        k.clone()
    };
    let z = z.scale(&shrink);
    debug_assert!(z.abs1() <= *k);
    z
}
