//! Structured Toeplitz determinants: bordered, framed, and two-framed
//! matrices, their Dodgson-condensation reductions, biorthogonal
//! polynomials on the unit circle, a Riemann–Hilbert evaluation route,
//! and strong Szegő-type asymptotic predictions with a verification
//! harness.

pub mod book;
pub mod bopuc;
pub mod dci;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod rhp;
pub mod structmat;
pub mod symbols;
pub mod szego;
