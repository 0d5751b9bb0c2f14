//! Construction and numerical verification of multipartite maximally
//! entangled bases.
//!
//! The crate is organised bottom-up:
//!
//! * [`qstate`] holds dense complex linear algebra over small composite
//!   Hilbert spaces (tensor products, partial traces, Hermitian spectra,
//!   orthogonal complements).
//! * [`entanglement`] provides Schmidt analysis, maximal-entanglement
//!   predicates, and smooth defect functions.
//! * [`constructions`] generates the explicit states and bases: the complete
//!   three-qubit GHZ basis, the two `2⊗3` families, and their lifts to
//!   `2⊗3⊗3`.
//! * [`verify`] produces basis-level verdicts, including a multi-start
//!   search for maximally entangled states in the orthogonal complement.
//! * [`cli`] is the command-line front end and the JSON/CSV file formats.
//!
//! Subsystem indices are zero-based throughout the API; flat indices follow
//! the big-endian convention (leftmost subsystem most significant).

pub mod cli;
pub mod constructions;
pub mod entanglement;
mod error;
pub mod exec;
pub mod qstate;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
