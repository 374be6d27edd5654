//! Exact computations for finite-dimensional quiver algebras: stability,
//! Harder-Narasimhan filtrations, tau-tilting theory, and the wall-and-chamber
//! structure on g-vector space. All core arithmetic is exact rational.

pub mod algebra;
pub mod linalg;
pub mod render;
pub mod repcat;
pub mod report;
pub mod stability;
pub mod chamber;
pub mod tautilt;
