//! Exact finite-stage realization of separable Fréchet sequence spaces with a
//! continuous norm as spaces of holomorphic functions.
//!
//! The crate works in Köthe echelon spaces of order one with rational weights.
//! It builds a biorthogonal system `(eₙ, e′ₙ)` whose functionals are all dominated
//! by the continuous norm, then maps `x ↦ Σ αₙ⟨x, e′ₙ⟩zⁿ` into entire functions
//! (or functions on a disc). Identities are checked in exact rational arithmetic;
//! every truncated evaluation carries a certified bound on the omitted tail.
//!
//! ```
//! use frechet_holo::prelude::*;
//!
//! let space = make_kothe(KotheFamily::RapidDecrease, 2, 8).unwrap();
//! let (fam, sys) = build_system(&space, FamilyKind::Triangular, 7, 8, 8).unwrap();
//! assert!(verify_lemma_conditions(&sys, &fam, &space, 20, 1).passed());
//!
//! let w = make_weights(WeightParams::InverseFactorial, 8).unwrap();
//! let ones = vec![ComplexRational::one(); 3];
//! let x = polynomial_preimage(&ones, &sys, &w).unwrap();
//! let img = embed(&x, &sys, &w, &space, Domain::Plane).unwrap();
//! let ev = eval_at(&img, &ComplexRational::one(), &int(1)).unwrap();
//! assert_eq!(ev.value, ComplexRational::from_ints(3, 0));
//! ```

pub mod biortho;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod lemma;
pub mod random;
pub mod rank;
pub mod scalar;
pub mod space;
pub mod sparse;
pub mod suite;
pub mod weights;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::biortho::{
        biorthogonalize, build_system, generate_dense_family, normalize, BiorthogonalSystem,
        DenseFamilyPair, FamilyKind, RawBiorthogonal,
    };
    pub use crate::embedding::{
        continuity_constant, continuity_table, embed, eval_at, polynomial_preimage, reconstruct,
        verify_continuity, Domain, EmbeddedImage, Evaluation,
    };
    pub use crate::error::{Error, Result};
    pub use crate::lemma::{check_norm_from_functionals, verify_lemma_conditions, LemmaReport};
    pub use crate::scalar::{int, rat, ComplexRational, Rational};
    pub use crate::space::{make_kothe, KotheFamily, KotheMatrix, KotheSpec};
    pub use crate::sparse::{pair, SparseFunctional, SparseVector};
    pub use crate::suite::{run_suite, CertificateReport, RunConfig};
    pub use crate::weights::{make_weights, WeightParams, WeightSequence, WeightSpec};
}
