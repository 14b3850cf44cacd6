//! Internals of the `binfuse` benchmark binary: run configuration, dataset
//! generation, timing and FPP measurement, space models, and CSV reporting.
//! The binary is a thin argument layer over these modules, and the acceptance
//! suite drives them directly.

pub mod config;
pub mod dataset;
pub mod measure;
pub mod report;
pub mod theory;
