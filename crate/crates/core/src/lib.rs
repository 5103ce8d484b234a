//! Remote state preparation with a shared two-qubit state and one classical bit.
//!
//! The crate covers the Bloch-form states and their diagnostics ([`bloch`]),
//! the encode/decode pipeline and fidelity quadrature ([`protocol`]), analytic
//! and numerical optimisation of the averaged fidelity ([`optimizer`]), and an
//! independent brute-force search used to check the optimiser ([`oracle`]).
//! The `rsp` binary is a thin wrapper over [`cli`].

pub mod bloch;
pub mod cli;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod protocol;

pub use bloch::{make_frame, Frame, Mat3, TwoQubitState, Vec3};
pub use error::{Result, RspError};
