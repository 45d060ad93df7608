//! Cocycles on one-sided topological Markov shifts: groupoid bisections,
//! supports, coboundary tests, suspension matrices and K-theory.

pub mod coboundary;
pub mod error;
pub mod graph;
pub mod groupoid;
pub mod io;
pub mod ktheory;
pub mod locfun;
pub mod sft;
pub mod support;
pub mod suspension;

pub use error::{Error, Result};
pub use locfun::LocFun;
pub use sft::{PointSpec, TransitionMatrix, Word};
