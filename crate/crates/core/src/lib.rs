//! 2-class group invariants of `L_{m,d} = Q(zeta_{2^m}, sqrt d)` for odd
//! square-free `d`, and of the real subfields `L_{m,d}^+`, together with
//! independent brute-force checks: factorization of cyclotomic polynomials
//! mod `p`, class groups of quadratic fields from binary quadratic forms, and a
//! bounded search for the Kummer norm equation `n = x^2 - y^2 zeta_8`.

pub mod arith;
mod fp_poly;
pub mod kummer;
pub mod quadratic;
pub mod rank;
pub mod report;
pub mod splitting;
pub mod symbols;
pub mod tables;
pub mod verify;

pub use arith::{Level, PrimeFactorization, SquarefreeOdd};
pub use rank::{Coverage, Parity, RankReport};
pub use splitting::SplitType;
pub use symbols::SymbolValue;
