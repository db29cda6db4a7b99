//! Computation, construction, and verification of informationally robust
//! cheap-talk equilibria for binary-state sender-receiver games with
//! state-independent sender preferences.
//!
//! All model quantities are exact rationals, so equilibrium verification is
//! a sound decision procedure rather than a numeric approximation. The one
//! deliberately numeric piece is the general-structure equilibrium solver,
//! which brackets a continuity argument by bisection and reports its
//! residuals.
//!
//! Modules:
//! - [`model`]: games, beliefs, odds, posterior composition.
//! - [`envelopes`]: indirect utility and its quasiconcave/concave envelopes.
//! - [`robustness`]: triple/quadruple enumeration, the matrix `B`, robust
//!   values and bounds, robustness verdicts.
//! - [`info`]: finite-support receiver information structures.
//! - [`equilibrium`]: profiles, the exact verifier, and the constructive
//!   procedures for trivial, endpoint, and interior equilibria.
//! - [`oracle`]: brute-force equilibrium enumeration for binary structures,
//!   plus delta- and beta-sweep experiments.
//! - [`fileio`]: file formats and CSV emission for the CLI.

pub mod envelopes;
pub mod equilibrium;
pub mod fileio;
pub mod info;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod robustness;

pub use model::{compose_posterior, Action, Belief, Game, GameError, Location, Odds};
pub use rational::{fmt_rat, parse_rat, rat, rat_to_f64, Rat};
