//! Critical quantum metrology with an adiabatically ramped squeezing
//! Hamiltonian: closed-form quantum and classical Fisher information for the
//! unitary and the driven-dissipative protocols, plus a truncated Fock-space
//! reference implementation.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// frozen reference values carry all their digits
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod angle;
pub mod error;
pub mod fisher_closed;
pub mod fisher_dd;
pub mod gaussian;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
pub use fisher_closed::{CfiResult, QfiBreakdown};
pub use fisher_dd::{DrivenDissipativeParams, PhaseConvention};
pub use gaussian::{GaussianPureState, QuadratureSpec};
pub use model::{ClosedParams, Diagnostic, RampPoint};
