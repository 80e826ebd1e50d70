//! Right-sided weighted Gauss-Radau quadrature on (-1, 1).
//!
//! Given any positive integrable weight w, the crate constructs the unique
//! (q+1)-point rule with its last node pinned at 1 that integrates every
//! polynomial of degree <= 2q exactly against w. The construction runs
//! through the classical reduction: the interior nodes are the Gauss nodes
//! of the modified weight (1 - x) w(x), obtained by a discretized Stieltjes
//! procedure followed by Golub-Welsch on the resulting Jacobi matrix.
//!
//! The [`analysis`] module turns the qualitative statements about these
//! rules into runnable experiments: L1-continuity of nodes and weights in
//! the weight function, the endpoint-weight bound chain for exponential
//! weights, the interval change-of-variables identity, and the uniform
//! lower bound on the lowest node.

pub mod analysis;
pub mod cli;
pub mod eigen;
pub mod orthopoly;
pub mod par;
pub mod quadcore;
pub mod radau;
pub mod weights;

mod error;

pub use error::{Error, Result};
