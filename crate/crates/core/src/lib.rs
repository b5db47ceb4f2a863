//! Exact-arithmetic abstract convex spaces.
//!
//! Every space implements [`kernel::ConvexSpace`]: binary convex
//! combinations over rational coefficients in `[0,1]`. On top of that sit
//! the finitary Giry monad ([`giry`]), the Lawvere-theory view through
//! stochastic matrices ([`lawvere`]), semilattices and the Manes monad
//! ([`semilattice`]), geometric examples ([`geometric`]) and mixed
//! constructions ([`mixed`]). Law checkers return reports instead of
//! panicking, so violations can be inspected and replayed.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod geometric;
pub mod giry;
pub mod kernel;
pub mod lawvere;
pub mod lp;
pub mod mixed;
pub mod random;
pub mod rational;
pub mod semilattice;

pub use error::{Error, Result};
pub use giry::Dist;
pub use kernel::{cc, cc_nary, ConvexSpace, Law, LawReport, RandomElement};
pub use rational::{Coeff, Rational};
