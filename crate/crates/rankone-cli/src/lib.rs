//! Verification harness over the rankone library: a registry of numerical
//! checks, the report schema they produce, and the artifact writers used by
//! the `rankone` binary.

pub mod artifacts;
pub mod checks;
pub mod report;
pub mod svg;
