//! Finite-model workbench for fixed-point theorems of contraction type on
//! metric-like spaces equipped with a binary relation.
//!
//! The building blocks are exact: distances are [`Rational`]s, relations and
//! self-maps are finite tables, and every sequence-quantified notion
//! (completeness, self-closedness, continuity) is decided by enumerating the
//! tail sets an infinite relation-preserving sequence can have.
//!
//! * [`space`]: distance tables and the metric / partial metric / metric-like
//!   axiom checks.
//! * [`relation`]: relations, self-maps, closure, directedness and paths.
//! * [`analysis`]: tail-set decision procedures and a random-walk cross-check.
//! * [`contraction`]: least contraction constants, linear and integral.
//! * [`solver`]: certified Picard iteration and uniqueness through paths.
//! * [`validator`]: the full hypothesis report and its oracle cross-check.
//! * [`document`] and [`cli`]: JSON documents and the command front-end.
//! * [`sweep`]: exhaustive enumeration of small instances.

pub mod analysis;
pub mod cli;
pub mod contraction;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod rational;
pub mod relation;
pub mod solver;
pub mod space;
pub mod sweep;
pub mod validator;

pub use contraction::{IntegrandSpec, KValue};
pub use error::{Error, Result};
pub use rational::Rational;
pub use relation::{FiniteRelation, SelfMap, Verdict};
pub use space::{FiniteDistanceSpace, Point, SpaceClass};
pub use validator::{validate, HypothesisReport, Instance, Prediction};
