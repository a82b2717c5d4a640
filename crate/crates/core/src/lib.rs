//! Detection of data-constraint implementation patterns in Java sources.

pub mod analysis;
pub mod catalog;
pub mod clones;
pub mod constraint;
pub mod dataflow;
pub mod detectors;
pub mod error;
pub mod frontend;
pub mod matcher;
pub mod report;
pub mod synthetic;
pub mod trace;

pub use analysis::Program;
pub use error::{Diagnostic, Error};
