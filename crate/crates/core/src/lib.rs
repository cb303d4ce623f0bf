//! Gadget reductions from 3-Partition to simultaneous graph drawing problems,
//! with exact verifiers for the drawings and crossing certificates they
//! produce.

pub mod cert;
pub mod cli;
pub mod drawing;
pub mod geometry;
pub mod gracsim;
pub mod graph;
pub mod ksefe;
pub mod planarity;
pub mod svg;
pub mod threep;
