//! Exact and arbitrary-precision tools for locating exceptional points of
//! maximal order in tridiagonal complex-symmetric Hamiltonians.

pub mod numerics;
pub mod poly;
pub mod realroots;
pub mod secular;
pub mod groebner;
pub mod solve;
pub mod spectrum;
pub mod epnverify;
pub mod fixtures;
pub mod catalog;
