//! Exact characters (graded traces) of Heisenberg and lattice vertex operator
//! algebra states, the conversion between round- and square-bracket modes,
//! and the p-adic limits of rescaled state families together with their
//! characters.
//!
//! All arithmetic is exact over arbitrary-precision rationals. q-expansions
//! are truncated at an explicit precision, and p-adic statements are checked
//! through explicit valuations.

pub mod characters;
pub mod error;
pub mod exact_arith;
pub mod heisenberg_fock;
pub mod lattice;
pub mod padic_limits;
pub mod qseries;

pub use error::{Error, Result};
pub use exact_arith::{PadicValuation, Rational};
pub use heisenberg_fock::{FockState, Monomial, SquareWord};
pub use qseries::QSeries;
