//! Exact-arithmetic verification toolkit for dihedral class-number
//! machinery: character tables of D_q and induced-character identities,
//! local Euler-factor checks from polynomial factorization patterns, Tate
//! cohomology of finite modules under dihedral actions, regulator block
//! determinant identities, and consistency ledgers for anticyclotomic tower
//! data.
//!
//! Everything is computed exactly (big integers, big rationals, cyclotomic
//! integers in canonical form); no floating point arithmetic is used
//! anywhere.

pub mod characters;
pub mod cohomology;
pub mod cyclotomic;
pub mod euler;
pub mod linalg;
pub mod regulator;
pub mod tower;
