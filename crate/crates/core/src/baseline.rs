//! Reference algorithms for the adversaries and a closed set of all
//! algorithms behind one type, for the command line tool and the C API.

use crate::error::{Error, Result};
use crate::general::{DualState, UnitJobsDual};
use crate::ladder::MultiSolution;
use crate::model::{Machine, Schedule, SolutionSet};
use crate::offline::PrefixStats;
use crate::online::{self, put, OnlineAlgorithm};
use crate::sorted::SortedState;

/// Greedy single-solution scheduling: every job runs whole on the machine
/// that becomes free first (machine 1 on ties).
#[derive(Debug, Clone, Default)]
pub struct ListScheduling {
    schedule: Schedule,
    stats: PrefixStats,
    jobs: usize,
}

impl ListScheduling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }
}

impl OnlineAlgorithm for ListScheduling {
    fn name(&self) -> &'static str {
        "list"
    }

    fn solution_count(&self) -> usize {
        1
    }

    fn step(&mut self, size: f64) -> Result<String> {
        let job = self.jobs + 1;
        online::check_size(job, size)?;
        let [l1, l2] = self.schedule.loads();
        let m = if l2 < l1 { Machine::Second } else { Machine::First };
        let start = self.schedule.load(m);
        put(&mut self.schedule, m, job, start, start + size)?;
        self.stats.push(size);
        self.jobs = job;
        Ok(m.to_string())
    }

    fn snapshot(&self) -> SolutionSet {
        SolutionSet::new(vec![self.schedule.clone()], self.stats.total)
    }

    fn per_solution_max(&self) -> Vec<f64> {
        vec![self.schedule.max_load()]
    }

    fn stats(&self) -> PrefixStats {
        self.stats
    }

    fn jobs_seen(&self) -> usize {
        self.jobs
    }
}

/// Exposes a chosen list of the inner algorithm's solutions, repeating or
/// dropping them. Used to present a two-solution algorithm as an
/// `M`-solution one, or a single-solution algorithm as a clone pair.
#[derive(Debug, Clone)]
pub struct Projected<A> {
    inner: A,
    picks: Vec<usize>,
}

impl<A: OnlineAlgorithm> Projected<A> {
    pub fn new(inner: A, picks: Vec<usize>) -> Result<Self> {
        let n = inner.solution_count();
        if picks.is_empty() {
            return Err(Error::BadSolutionCount);
        }
        if let Some(&bad) = picks.iter().find(|&&p| p >= n) {
            return Err(Error::InvalidArgument(format!(
                "solution {bad} requested from an algorithm with {n} solutions"
            )));
        }
        Ok(Projected { inner, picks })
    }

    /// `count` solutions cycling through the inner ones.
    pub fn replicated(inner: A, count: usize) -> Result<Self> {
        let n = inner.solution_count();
        Self::new(inner, (0..count).map(|i| i % n).collect())
    }

    /// The inner solutions unchanged.
    pub fn identity(inner: A) -> Self {
        let picks = (0..inner.solution_count()).collect();
        Projected { inner, picks }
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }
}

impl<A: OnlineAlgorithm> OnlineAlgorithm for Projected<A> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn solution_count(&self) -> usize {
        self.picks.len()
    }

    fn step(&mut self, size: f64) -> Result<String> {
        self.inner.step(size)
    }

    fn snapshot(&self) -> SolutionSet {
        let set = self.inner.snapshot();
        let solutions = self.picks.iter().map(|&p| set.solutions[p].clone()).collect();
        SolutionSet::new(solutions, set.total_size)
    }

    fn per_solution_max(&self) -> Vec<f64> {
        let all = self.inner.per_solution_max();
        self.picks.iter().map(|&p| all[p]).collect()
    }

    fn stats(&self) -> PrefixStats {
        self.inner.stats()
    }

    fn jobs_seen(&self) -> usize {
        self.inner.jobs_seen()
    }

    fn no_idle(&self) -> bool {
        self.inner.no_idle()
    }
}

/// Algorithm names accepted by [`AnyAlgorithm::from_name`].
pub const ALGORITHM_NAMES: [&str; 5] = ["general", "sorted", "multi", "unit", "list"];

#[derive(Debug, Clone)]
pub enum AnyAlgorithm {
    General(DualState),
    Sorted(SortedState),
    Multi(MultiSolution),
    Unit(UnitJobsDual),
    List(ListScheduling),
}

impl AnyAlgorithm {
    /// `delta` is only used by `multi`.
    pub fn from_name(name: &str, delta: f64) -> Result<Self> {
        Ok(match name {
            "general" => AnyAlgorithm::General(DualState::new()),
            "sorted" => AnyAlgorithm::Sorted(SortedState::new()),
            "multi" => AnyAlgorithm::Multi(MultiSolution::new(delta)?),
            "unit" => AnyAlgorithm::Unit(UnitJobsDual::new()),
            "list" => AnyAlgorithm::List(ListScheduling::new()),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown algorithm {other:?}, expected one of {}",
                    ALGORITHM_NAMES.join(", ")
                )))
            }
        })
    }
}

macro_rules! dispatch {
    ($self:expr, $alg:ident => $body:expr) => {
        match $self {
            AnyAlgorithm::General($alg) => $body,
            AnyAlgorithm::Sorted($alg) => $body,
            AnyAlgorithm::Multi($alg) => $body,
            AnyAlgorithm::Unit($alg) => $body,
            AnyAlgorithm::List($alg) => $body,
        }
    };
}

impl OnlineAlgorithm for AnyAlgorithm {
    fn name(&self) -> &'static str {
        dispatch!(self, a => a.name())
    }

    fn solution_count(&self) -> usize {
        dispatch!(self, a => a.solution_count())
    }

    fn step(&mut self, size: f64) -> Result<String> {
        dispatch!(self, a => OnlineAlgorithm::step(a, size))
    }

    fn snapshot(&self) -> SolutionSet {
        dispatch!(self, a => a.snapshot())
    }

    fn per_solution_max(&self) -> Vec<f64> {
        dispatch!(self, a => a.per_solution_max())
    }

    fn stats(&self) -> PrefixStats {
        dispatch!(self, a => a.stats())
    }

    fn jobs_seen(&self) -> usize {
        dispatch!(self, a => a.jobs_seen())
    }

    fn no_idle(&self) -> bool {
        dispatch!(self, a => a.no_idle())
    }
}
