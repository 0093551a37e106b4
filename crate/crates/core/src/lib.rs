//! Spectral toolkit for a family of minimal tori in the unit 5-sphere.
//!
//! The family is indexed by coprime integers m ⩾ n ⩾ 1. For each member the
//! crate can:
//!
//! * evaluate the immersion and its induced metric ([`geometry`]),
//! * separate variables and solve the resulting periodic Sturm–Liouville
//!   problems with a conservative finite-difference pencil, cross-checked by
//!   a Floquet shooting oracle ([`sturm`]),
//! * count Laplace eigenvalues below the distinguished value 2 and verify
//!   the closed-form parity count ([`spectrum`]),
//! * evaluate areas and the associated extremal functional through AGM
//!   elliptic integrals ([`elliptic`]),
//! * certify spectral facts about the ν = 1 trigonometric Lamé equation that
//!   feed the eigenvalue bookkeeping ([`lame`]),
//! * and assemble everything into machine-checkable verification reports
//!   ([`verify`]).

// Validation guards are written `if !(v > 0.0)` so a NaN coefficient fails
// them; the positively phrased comparison clippy suggests would let NaN pass.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod lame;
pub mod spectrum;
pub mod sturm;
pub mod verify;

pub use elliptic::{agm_ke, area, functional_value, modulus, quadrature_area, EllipticPair, FunctionalReport};
pub use error::{Error, Result};
pub use lame::{
    aux_lambda_check, h3_certificate, h3_value, lame_problem, lame_spectrum,
    legendre_limit_check, legendre_quotient, to_lame, AuxEntry, AuxReport, CertRoute, H3Entry,
    H3Report, LameLevel, LameParams, LegendreReport, SymmetryClass,
};
pub use geometry::{
    coordinate_profiles, immerse, metric_coeffs, symmetry_check, CoefficientField,
    CoordinateProfile, ImmersionPoint, ProfileKind, SymmetryReport, TorusParams,
};
pub use spectrum::{
    admitted_flavor, admitted_spectrum, build_problem, coordinate_eigen_check, count_below_two,
    eigenvalue_two_multiplicity, full_spectrum, parity_formula, CoordinateCheck, EigenvalueCount,
    PerFrequency, TorusLevel,
};
pub use verify::{
    full_report, reduced_inequality_minimum, verify_inequality_chain, verify_main_theorem,
    verify_nonmaximality, CheckEntry, CheckStatus, VerificationReport, EXCEPTIONAL_PAIRS,
};
pub use sturm::{assemble, refine, solve, zero_count, Bc, Pencil, SLProblem, SLSpectrum};
