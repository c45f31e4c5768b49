//! Classical simulation of operator scrambling in super-Clifford circuits.
//!
//! Circuits built from `T`, `SWAP` and the three-qubit `C3` gate map the
//! span of X/Y Pauli strings to itself and act there as Clifford
//! operations. The Heisenberg-evolved operator `X_1 ... X_N` can therefore
//! be tracked with N super-stabilizers over GF(2) ([`tableau`]) while its
//! operator entanglement grows extensively. [`oracle`] is the exponential
//! dense reference used to check the tableau on small systems, and
//! [`experiments`] drives the deterministic and random-circuit runs.

pub mod bits;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod model;
pub mod oracle;
pub mod region;
pub mod tableau;

pub use bits::{gf2_rank, BitMatrix, BitRow};
pub use error::{Error, Result};
pub use model::{localize_c3, OperatorProgram, SuperGate, SuperPauli, XYStringIndex};
pub use oracle::{OperatorWavefunction, Stabilization};
pub use region::Region;
pub use tableau::SuperStabilizerTableau;
