//! A learning classifier system whose rules are small asynchronous fuzzy
//! logic networks.
//!
//! Each rule's condition and action are one evolved network: a match node
//! gates participation, an output node proposes a continuous action, and a
//! linear model with an action weight computes the payoff prediction.
//! Mutation rates, update budgets and topology all self-adapt under the
//! usual accuracy-based fitness pressure.
//!
//! [`fln`] holds the network representation, [`xcsf`] the population
//! machinery, [`frog`] the jumping task the system is evaluated on,
//! [`rng`] the deterministic stream derivation, and [`experiment`] the
//! trial loop with its metrics and CSV output. The `fdgp` binary wraps
//! [`experiment::run_experiment`] behind a command line.

pub mod experiment;
pub mod fln;
pub mod frog;
pub mod rng;
pub mod xcsf;

pub use experiment::{Experiment, ExperimentConfig, MetricsRow, Summary, TrialRecord};
pub use fln::{FlnConfig, FuzzyFunction, Genome, NetworkOutput, Node};
pub use frog::FrogProblem;
pub use xcsf::{Classifier, MatchEntry, Population, Xcsf, XcsfParams};
