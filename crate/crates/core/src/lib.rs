//! Exact stochastically stable distributions of perturbed Markov processes.
//!
//! A perturbed process is a family of column-stochastic matrices whose
//! entries are polynomials in a small rate `e`. Its stochastically stable
//! distribution is the limit, as `e -> 0`, of the unique stable distribution
//! at each `e`. Floating-point solves at small `e` are unreliable; this crate
//! computes the limit exactly by collapsing communicating classes of the
//! unperturbed chain with normalized quotients and speeding up absorbing
//! states, all over exact rationals.
//!
//! The [`adaptive`] module builds the perturbed chains of adaptive play in
//! two-player games, which is the main application.
//!
//! ```
//! use stochstab::format::parse_poly_matrix;
//! use stochstab::{ssd, PerturbedMatrix};
//!
//! // leaving state 1 costs one mistake, leaving state 2 costs two
//! let m = PerturbedMatrix::validated(parse_poly_matrix("1 - e, e^2\n e, 1 - e^2")?)?;
//! let result = ssd(&m)?;
//! assert_eq!(result.sss, vec![1]);
//! # Ok::<(), stochstab::Error>(())
//! ```

pub mod adaptive;
pub mod classes;
pub mod cli;
mod error;
pub mod format;
pub mod linalg;
pub mod markov;
pub mod matrix;
pub mod perturbed;
pub mod poly;
pub mod rational;
pub mod ssd;
pub mod sweep;

pub use adaptive::{build_chain, AdaptiveChain, AdaptiveConfig, NormalFormGame, Player};
pub use classes::{ClassPartition, Representative};
pub use error::{Error, ParseError, Result};
pub use markov::{Distribution, MarkovMatrix, QuotientTriple};
pub use matrix::{Matrix, PolyMatrix, RatMatrix};
pub use perturbed::PerturbedMatrix;
pub use poly::{EpsPoly, Resistance};
pub use rational::Rational;
pub use ssd::{ssd, ssd_with, SsdOptions, SsdResult, SsdSolver};
