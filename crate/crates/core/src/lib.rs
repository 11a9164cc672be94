//! Mutually unbiased bases in prime-power dimensions and their use in the
//! control mode of the qudit ping-pong protocol.
//!
//! - [`field`]: arithmetic in GF(p^m) and the additive character used to
//!   build the bases.
//! - [`matrix`]: dense complex matrices, power iteration for the top singular
//!   pair and the Schur test bound.
//! - [`mub`]: construction and verification of complete MUB sets.
//! - [`protocol`]: entangled pairs, dense coding, Eve's attack and a seeded
//!   Monte Carlo session engine.
//! - [`bounds`]: exact maximal non-detection probabilities and analytic
//!   upper bounds.

pub mod bounds;
pub mod error;
pub mod field;
pub mod matrix;
pub mod mub;
pub mod protocol;

pub use bounds::{build_report, build_v_matrix, exact_max_nondetection, BasisSubset, BoundReport, VMatrix};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use matrix::{CMatrix, CVector};
pub use mub::{build_mub_set, conjugate_basis, verify_mub, Basis, MubSet, MubVerification};
pub use protocol::{
    prepare_epr, run_session, AttackPolicy, AttackSpec, AttackVector, ControlConfig, EncodingOp, EprState,
    SessionConfig, SessionStats,
};

pub use num_complex::Complex64;
