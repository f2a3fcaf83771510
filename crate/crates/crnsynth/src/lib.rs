//! Synthesis, rate tuning, and exact stochastic analysis of bimolecular
//! chemical reaction networks.
//!
//! The pipeline has two stages. First, [`synthesis`] enumerates networks of a
//! given size whose rate-free transition system can satisfy a set of path
//! predicates (reach a terminal goal state from each initial state within a
//! bounded number of steps); [`oracle`] provides an independent brute-force
//! ground truth for that stage at small bounds. Second, [`tuner`] searches
//! over reaction rates to maximize the probability, computed exactly from the
//! chemical master equation in [`ctmc`], that the network is in a goal state
//! at a fixed time. [`specs`] generates the majority and division benchmark
//! predicates, and [`cli`] exposes the whole pipeline as commands emitting
//! plot-ready tables.
//!
//! The `examples/` directory demonstrates each capability end to end:
//! synthesis, oracle cross-checking, tuning, response heatmaps, expected
//! termination times, and transient-solution scaling.

pub mod catalog;
pub mod cli;
pub mod crn;
pub mod ctmc;
pub mod oracle;
pub mod predicate;
pub mod specs;
pub mod synthesis;
pub mod tuner;

pub use crn::{Crn, CrnError, Reaction, SpeciesId, SysState};
pub use predicate::{ArithExpr, PathPredicate, PredicateError, StatePredicate};
