//! Mould calculus and simple resurgence: exact alien calculus on a small class of
//! Borel-plane functions, symbolic Stokes automorphisms, numerical Borel-Laplace
//! summation, hyperlogarithmic resurgence monomials and coloured multizeta values.

pub mod alien;
pub mod borelfun;
pub mod cli;
pub mod error;
pub mod freealg;
pub mod hyperlog;
pub mod laplace;
pub mod mould;
pub mod mzv;
pub mod quad;
pub mod scalars;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use mould::{Alphabet, Mould};
pub use scalars::{ExactScalar, GaussRat, NumericComplex};
pub use words::{Carrier, Letter, Word};
