//! h-normal N-linear connections on dual 1-jet spaces.

pub mod chart;
pub mod cli;
pub mod connections;
pub mod dtensor;
pub mod frame;
pub mod identities;
pub mod symbolic;
pub mod tensor;
pub mod torsion_curvature;
