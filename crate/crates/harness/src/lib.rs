//! Acceptance surface of the toolkit: deterministic graph generators, an
//! independent contract verifier, the brute-force oracle, and theorem audits.

pub mod audit;
pub mod gen;
pub mod oracle;
pub mod report;
pub mod verify;
