//! Exact Nash equilibrium computation for bimatrix games.
//!
//! The crate provides Lemke–Howson complementary pivoting and support enumeration over
//! arbitrary-precision rationals, generators for unit vector games built from dual
//! cyclic polytopes (Morris and triple Morris labelings) whose equilibria are hard to
//! find, and a purely combinatorial Lemke path engine on Gale evenness bitstrings that
//! cross-checks the geometric solver.
//!
//! ```
//! use galelemke::format::parse_bgame;
//! use galelemke::gale::lemke_path_length;
//! use galelemke::generators::morris_polytope;
//! use galelemke::lh::lh_solve;
//!
//! let game = parse_bgame("3 3\n1 0 0\n0 1 0\n0 0 1\n\n0 2 4\n3 2 0\n0 2 0\n")?;
//! let result = lh_solve(&game, 1)?;
//! assert_eq!(result.equilibrium.to_string(), "1/3 2/3 0 ; 1/2 1/2 0");
//! assert_eq!(result.path_length, 8);
//!
//! let poly = morris_polytope(20)?;
//! assert_eq!(lemke_path_length(&poly, 1, None)?, Ok(8118));
//! # Ok::<(), galelemke::Error>(())
//! ```

pub mod bench;
pub mod bits;
pub mod cyclic;
pub mod error;
pub mod euler;
pub mod format;
pub mod gale;
pub mod game;
pub mod generators;
pub mod lh;
pub mod matrix;
pub mod path;
pub mod polytope;
pub mod rational;
pub mod support;

pub use error::{Error, Result};
pub use game::{BimatrixGame, Label, LabelSet, MixedProfile, UnitVectorGame};
pub use rational::Rational;
