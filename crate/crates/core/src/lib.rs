//! Bottom-up model generation for first-order clauses with equality.
//!
//! Clause sets are made range-restricted (`transform`), optionally shifted and
//! extended with blocking clauses, then saturated by a hyperresolution engine
//! with splitting and ground congruence closure (`engine`). Satisfiable runs
//! produce a finite model that is checked against the input.

pub mod bench;
pub mod engine;
pub mod kernel;
pub mod oracle;
pub mod tptp;
pub mod transform;

pub use tptp::Problem;
