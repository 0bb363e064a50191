//! Monte Carlo confidence sets for game-theoretic predictions about agents who
//! learn payoff-relevant parameters from data.
//!
//! The library is organized around a single question: given an action that a
//! model predicts, with what probability does a dataset of size `n` lead every
//! plausible learner to rationalize that action (lower end), or at least one
//! plausible learner to rationalize it (upper end)?  The pair of probabilities
//! is a confidence set for the prediction, and everything here exists to
//! estimate, bound, or compute it in closed form.
//!
//! Module map:
//!
//! * [`measures`]: parameter boxes, finite-support beliefs, and the three
//!   distances used throughout (sup norm on points, Prokhorov and Wasserstein
//!   on beliefs).
//! * [`learning`]: datasets, learning rules mapping datasets to beliefs, and
//!   the plausible-set construction that collects the beliefs of a rule family.
//! * [`solver`]: finite games, best-reply certificates, weak and strong
//!   rationalizability under belief restrictions, and strictness margins.
//! * [`scenarios`]: the four worked scenarios (bilateral trade over a
//!   rectangle, a lockdown coordination game with a trend regression, binary
//!   signals with a grid of priors, and Gaussian signals with a grid of
//!   conjugate priors), each with a fast analytic checker and an optional
//!   solver-backed cross check.
//! * [`confidence`]: the replication engine; seeding, parallel execution, and
//!   standard errors.
//! * [`closedforms`]: closed-form probabilities and the lower/upper bounds
//!   (Markov-style, Gaussian, and Sanov-style large-deviation bounds).
//! * [`gauss`]: standard normal CDF and quantile with pinned accuracy.
//! * [`lp`]: a small dense two-phase simplex used by the solver and by the
//!   optimal-transport distances.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod closedforms;
pub mod confidence;
pub mod error;
pub mod gauss;
pub mod learning;
pub mod lp;
pub mod measures;
pub mod scenarios;
pub mod solver;

pub use error::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
