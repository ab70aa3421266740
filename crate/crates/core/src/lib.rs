//! Birkhoff–James orthogonality and left/right symmetric points in
//! finite-dimensional real normed spaces.

pub mod error;
pub mod io;
pub mod jset;
mod linalg;
pub mod operators;
pub mod orthogonality;
pub mod sample;
pub mod scalar;
pub mod space;
pub mod suites;
pub mod symmetry;

pub use error::{Error, Result};
pub use jset::{attainment, support_set, JSet};
pub use operators::{
    attainment_faces, check_nice_left_sufficient, classify_left_operator, classify_right_operator, embed_l1_domain,
    embed_linf_codomain, hilbert_no_left_probe, is_bj_operator_min, operator_norm, ortho_operators_rank1, rank1,
    refute_rank1_hilbert, unembed_l1_domain, unembed_linf_codomain, witness_left_operator, witness_right_operator,
    Embedding, FaceSet, HilbertProbeReport, OperatorMatrix, OperatorWitness,
};
pub use orthogonality::{
    in_minus, in_minus_eps, in_plus, in_plus_eps, is_bj_functional, is_bj_min, min_norm_along, supsum_orthogonal,
    supsum_orthogonal_general, Decision, LineDomain, LineMin, OracleKind, OrthoVerdict,
};
pub use scalar::{Scalar, Tolerances};
pub use space::{Functional, Space};
pub use suites::{run_suite, SuiteConfig, SuiteInfo, TheoremReport, TrialFailure, SUITES};
pub use symmetry::{
    assess, classify_left, classify_left_lp, classify_left_supsum, classify_right, classify_right_lp,
    classify_right_supsum, is_symmetric_supsum, orthogonalize_left, orthogonalize_right, search_counterexample,
    search_left_counterexample, search_right_counterexample, verify_witness, witness_left_supsum, witness_right_supsum,
    Direction, SearchConfig, SupSumCase, SupSumWitness, SymmetryKind, SymmetryVerdict, VerdictMethod, Witness,
    WitnessBundle,
};

pub type SpaceF64 = Space<f64>;
pub type SpaceF32 = Space<f32>;
pub type FunctionalF64 = Functional<f64>;
pub type TolerancesF64 = Tolerances<f64>;
pub type WitnessF64 = Witness<f64>;
pub type OperatorMatrixF64 = OperatorMatrix<f64>;
pub type OperatorMatrixF32 = OperatorMatrix<f32>;
