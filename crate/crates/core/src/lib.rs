//! Exact-arithmetic homological algebra for partial Hopf actions.

pub mod algebra;
pub mod field;
pub mod homology;
pub mod fixtures;
pub mod report;
pub mod spectral;
pub mod hopf;
pub mod hpar;
pub mod linalg;
pub mod partial;
pub mod resolutions;
