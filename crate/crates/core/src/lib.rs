//! Online preemptive makespan scheduling on two identical machines with
//! parallel solutions.
//!
//! * [`general`]: two solutions, arbitrary inputs, ratio `√5 − 1`.
//! * [`sorted`]: two solutions, non-increasing sizes, ratio `6 − 2√6`.
//! * [`ladder`]: `9/δ²` solutions, ratio `1 + δ`.
//! * [`adversary`]: lower-bound constructions run against any
//!   [`OnlineAlgorithm`].
//! * [`offline`]: optimal offline makespan and McNaughton's rule.
//! * [`workload`], [`schedule_file`], [`svg`]: inputs, outputs and charts
//!   for the `parsched` command line tool.

pub mod adversary;
pub mod baseline;
pub mod error;
pub mod general;
pub mod ladder;
pub mod model;
pub mod offline;
pub mod online;
pub mod schedule_file;
pub mod sorted;
pub mod svg;
pub mod tol;
pub mod workload;

pub use error::{Error, Result};
pub use model::{
    dual_occupancy, jobs_from_sizes, occupancy, validate, Job, Machine, Occupancy, Piece,
    Schedule, SolutionSet, ValidateOptions, ValidationReport, Violation,
};
pub use offline::{mcnaughton, opt_makespan, PrefixStats};
pub use online::{AuditRecord, OnlineAlgorithm};
