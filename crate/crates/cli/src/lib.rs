//! Command-line layer over `cds-core`: named solver entry points, versioned
//! JSON documents for instances and solutions, and a CSV benchmark harness.

pub mod algorithms;
pub mod bench;
pub mod format;

pub use algorithms::Algorithm;
