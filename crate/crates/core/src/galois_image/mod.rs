//! Images of residual Galois representations: reduction modulo `Λ`,
//! projective image classification, CM and inner twists.

pub mod classify;
pub mod reduction;
pub mod twists;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::newform_data::CharacterError;

pub use classify::{
    classify_image, dihedral_test, exceptional_witness, psl_or_pgl, reducible_test,
    DihedralOutcome, ImageClassification, ImageStatus, ProjectiveGroup, ReducibleOutcome, Witness,
};
pub use reduction::{
    projective_order_from_u, reduce_mod_lambda, u_invariant, LambdaData, ProjectiveOrder,
    ReductionContext,
};
pub use twists::{
    brumer_exponent, detect_cm, detect_inner_twists, noit_checklist, twist_invariant_field,
    verify_ordp, CmReport, InnerTwistReport, NoitReport, OrdpReport, TwistPair,
};

#[derive(Debug, Error)]
pub enum GaloisError {
    #[error("sample bound {requested} exceeds the stored coefficient bound {available}")]
    SampleBound { requested: u64, available: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("mod-2 representations are not handled")]
    CharacteristicTwo,
    #[error("p={p} rejected: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("a_{0} is not stored")]
    MissingCoefficient(u64),
    #[error("nontrivial inner twists: the image statement applies over K_Γ only")]
    TwistsPresent,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}
