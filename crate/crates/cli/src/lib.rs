//! Command-line front end for `convex-core`: JSON space descriptors, seeded
//! law suites with line-oriented reports, and two floating-point worked
//! examples (a friction linear program and qubit overlap recovery).

pub mod apps;
pub mod descriptor;
pub mod error;
pub mod suite;

pub use error::CliError;
