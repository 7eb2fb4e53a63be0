//! Extremal width tables, growth constants, constructors and verifiers for
//! zero-deficiency parallel prefix circuits with bounded fanout.
//!
//! A prefix circuit computes every prefix `x1 * ... * xi` of its inputs over
//! an arbitrary semigroup. Circuits whose op count C and depth D meet the
//! optimality bound `C + D = 2N - 2` are zero-deficiency. This crate computes
//! how wide such circuits can be for a given depth when every node may feed
//! at most k consumers, constructs circuits achieving the constructive bound,
//! and cross-checks the tables and constructions against brute force.

pub mod asymptotics;
pub mod builder;
pub mod circuit;
pub mod error;
pub mod oracle;
pub mod recurrence;

pub use crate::error::{Error, Result};
