//! Tools for studying almost perfect nonlinear (APN) functions over GF(2^n).

pub mod analysis;
pub mod bitlinalg;
pub mod families;
pub mod gf2n;
pub mod invariants;
pub mod vbf;
