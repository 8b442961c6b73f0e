//! Two-solution online algorithm for arbitrary job sequences, competitive
//! ratio `√5 − 1 ≈ 1.236068`.
//!
//! Solution A keeps its machine loads in ratio φ : 1 and solution B in ratio
//! 2φ : 1, each relative to the total size `W`. A job of intermediate size
//! rebalances both and swaps their roles; a job larger than everything before
//! it is first treated as an intermediate job of size `W_{j-1}` and the rest
//! is appended to the first machine.

use std::fmt;

use crate::error::Result;
use crate::model::{Job, Machine, Schedule, SolutionSet, ValidateOptions};
use crate::offline::PrefixStats;
use crate::online::{self, ensure_le, put, AuditRecord, OnlineAlgorithm};

/// Constants of the unsorted algorithm.
pub struct GeneralConstants;

impl GeneralConstants {
    /// Golden ratio `(1 + √5) / 2`.
    pub const PHI: f64 = 1.618033988749895;
    /// `(√5 − 1) / 2 = φ − 1`.
    pub const ALPHA: f64 = 0.6180339887498949;
    /// Competitive ratio `√5 − 1 = 2α`.
    pub const R: f64 = 1.2360679774997898;
    pub const PHI2: f64 = Self::PHI * Self::PHI;
    pub const PHI3: f64 = Self::PHI2 * Self::PHI;
    /// Case 1 threshold factor `2 − φ = 1/φ²`.
    pub const SMALL_FACTOR: f64 = 2.0 - Self::PHI;
}

use GeneralConstants as C;

/// How one solution absorbed a small job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcase {
    /// Whole job appended to the second machine.
    Whole,
    /// Job split to land both machines exactly on their targets.
    Split,
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::Whole => "1.1",
            Subcase::Split => "1.2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralCase {
    /// `p_j ≤ (2 − φ)·W_j`; no swap.
    Small { a: Subcase, b: Subcase },
    /// `(2 − φ)·W_j < p_j ≤ W_j / 2`; both solutions rebalanced and swapped.
    Medium,
    /// `p_j > W_j / 2`, equivalently `p_j > W_{j-1}`.
    Large,
}

impl GeneralCase {
    pub fn classify(size: f64, total: f64) -> Self {
        if size <= total * C::SMALL_FACTOR {
            GeneralCase::Small {
                a: Subcase::Whole,
                b: Subcase::Whole,
            }
        } else if size <= total / 2.0 {
            GeneralCase::Medium
        } else {
            GeneralCase::Large
        }
    }
}

impl fmt::Display for GeneralCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneralCase::Small { a, b } => write!(f, "{a}/{b}"),
            GeneralCase::Medium => f.write_str("2"),
            GeneralCase::Large => f.write_str("3"),
        }
    }
}

/// State of the two-solution algorithm.
///
/// The two schedules never move; `a_role` says which of them currently plays
/// solution A, so a swap is a relabeling.
#[derive(Debug, Clone, Default)]
pub struct DualState {
    schedules: [Schedule; 2],
    a_role: usize,
    stats: PrefixStats,
    jobs: usize,
    last_size: f64,
}

impl DualState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn a(&self) -> &Schedule {
        &self.schedules[self.a_role]
    }

    pub fn b(&self) -> &Schedule {
        &self.schedules[1 - self.a_role]
    }

    pub fn total(&self) -> f64 {
        self.stats.total
    }

    pub fn opt(&self) -> f64 {
        self.stats.opt
    }

    /// Assigns the next job to both solutions.
    pub fn step(&mut self, size: f64) -> Result<GeneralCase> {
        let job = self.jobs + 1;
        online::check_size(job, size)?;
        let prev_total = self.stats.total;
        let total = prev_total + size;
        let mut case = GeneralCase::classify(size, total);
        match &mut case {
            GeneralCase::Small { a, b } => {
                let (ai, bi) = (self.a_role, 1 - self.a_role);
                *a = fill_toward(
                    &mut self.schedules[ai],
                    job,
                    size,
                    total / C::PHI2,
                    total / C::PHI,
                )?;
                *b = fill_toward(
                    &mut self.schedules[bi],
                    job,
                    size,
                    total / C::PHI3,
                    2.0 * total / C::PHI2,
                )?;
            }
            GeneralCase::Medium => self.rebalance_and_swap(job, total)?,
            GeneralCase::Large => {
                // The part of size W_{j-1} goes through the medium rule as if
                // the total were 2·W_{j-1}; the rest extends machine 1.
                self.rebalance_and_swap(job, 2.0 * prev_total)?;
                let rest = size - prev_total;
                let starts = [2.0 * prev_total / C::PHI, 4.0 * prev_total / C::PHI2];
                for (role, expected) in [self.a_role, 1 - self.a_role].into_iter().zip(starts) {
                    let s = &mut self.schedules[role];
                    let start = s.load(Machine::First);
                    ensure_le(
                        (start - expected).abs(),
                        0.0,
                        total,
                        "large job residue start",
                    )?;
                    put(s, Machine::First, job, start, start + rest)?;
                }
            }
        }
        self.stats.push(size);
        self.jobs = job;
        self.last_size = size;
        self.check_invariants()?;
        Ok(case)
    }

    /// Medium-job rule with `total` as the new total size: A is rebuilt into
    /// B's shape and B into A's, then the labels swap.
    fn rebalance_and_swap(&mut self, job: usize, total: f64) -> Result<()> {
        let (ai, bi) = (self.a_role, 1 - self.a_role);
        let a = &mut self.schedules[ai];
        let (a1, a2) = (a.load(Machine::First), a.load(Machine::Second));
        put(a, Machine::Second, job, a2, total / C::PHI3)?;
        put(a, Machine::First, job, a1, 2.0 * total / C::PHI2)?;
        let b = &mut self.schedules[bi];
        let (b1, b2) = (b.load(Machine::First), b.load(Machine::Second));
        put(b, Machine::Second, job, b2, total / C::PHI2)?;
        put(b, Machine::First, job, b1, total / C::PHI)?;
        self.a_role = bi;
        Ok(())
    }

    /// Checks the load invariants of both solutions and that the last job
    /// was assigned completely.
    pub fn check_invariants(&self) -> Result<()> {
        let w = self.stats.total;
        let opt = self.stats.opt;
        let [a1, a2] = self.a().loads();
        let [b1, b2] = self.b().loads();
        ensure_le((a1 + a2 - w).abs(), 0.0, w, "A loads sum to W")?;
        ensure_le((b1 + b2 - w).abs(), 0.0, w, "B loads sum to W")?;
        ensure_le(w / C::PHI, a1, w, "A: W/phi <= a1")?;
        ensure_le(a1, C::R * opt, w, "A: a1 <= R*OPT")?;
        ensure_le(a2, w / C::PHI2, w, "A: a2 <= W/phi^2")?;
        ensure_le(2.0 * w / C::PHI2, b1, w, "B: 2W/phi^2 <= b1")?;
        ensure_le(b1, C::R * C::R * opt, w, "B: b1 <= R^2*OPT")?;
        ensure_le(b2, w / C::PHI3, w, "B: b2 <= W/phi^3")?;
        if w > 0.0 && !(a1 > a2 && b1 > b2) {
            return Err(crate::Error::invariant(format!(
                "machine 1 must be strictly more loaded: a=({a1},{a2}) b=({b1},{b2})"
            )));
        }
        if self.jobs > 0 {
            let size = self.last_size;
            for s in &self.schedules {
                ensure_le(
                    (s.assigned(self.jobs) - size).abs(),
                    0.0,
                    size,
                    "job assigned completely",
                )?;
            }
        }
        Ok(())
    }
}

/// Small-job rule for one solution: append the job to machine 2 if it stays
/// within `m2_target`, otherwise split it so the loads land exactly on
/// `(m1_target, m2_target)`.
fn fill_toward(
    s: &mut Schedule,
    job: usize,
    size: f64,
    m2_target: f64,
    m1_target: f64,
) -> Result<Subcase> {
    let (l1, l2) = (s.load(Machine::First), s.load(Machine::Second));
    if l2 + size <= m2_target {
        put(s, Machine::Second, job, l2, l2 + size)?;
        Ok(Subcase::Whole)
    } else {
        put(s, Machine::Second, job, l2, m2_target)?;
        put(s, Machine::First, job, l1, m1_target)?;
        Ok(Subcase::Split)
    }
}

impl OnlineAlgorithm for DualState {
    fn name(&self) -> &'static str {
        "general"
    }

    fn solution_count(&self) -> usize {
        2
    }

    fn step(&mut self, size: f64) -> Result<String> {
        DualState::step(self, size).map(|c| c.to_string())
    }

    /// Solutions in role order: A first.
    fn snapshot(&self) -> SolutionSet {
        SolutionSet::new(vec![self.a().clone(), self.b().clone()], self.stats.total)
    }

    fn per_solution_max(&self) -> Vec<f64> {
        vec![self.a().max_load(), self.b().max_load()]
    }

    fn stats(&self) -> PrefixStats {
        self.stats
    }

    fn jobs_seen(&self) -> usize {
        self.jobs
    }
}

/// Runs the unsorted algorithm over `jobs`, validating every prefix in strict
/// no-idle mode.
pub fn run_general(jobs: &[Job]) -> Result<(SolutionSet, Vec<AuditRecord>)> {
    let mut state = DualState::new();
    online::run_audited(&mut state, jobs, None).and_then(|(set, audit)| {
        let violations = set.validate(jobs, ValidateOptions::strict());
        match violations.first() {
            None => Ok((set, audit)),
            Some((s, v)) => Err(crate::Error::invariant(format!("solution {s}: {v}"))),
        }
    })
}

/// Optimal pair of solutions for `n` unit jobs.
///
/// Solution 1 is plain round robin. Solution 2 spreads the first three jobs
/// over `[0, 1.5)` on both machines and then continues round robin, so it is
/// optimal for odd prefixes while solution 1 is optimal for even ones.
#[derive(Debug, Clone, Default)]
pub struct UnitJobsDual {
    schedules: [Schedule; 2],
    stats: PrefixStats,
    jobs: usize,
}

impl UnitJobsDual {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step(&mut self, size: f64) -> Result<()> {
        let job = self.jobs + 1;
        if size != 1.0 {
            return Err(crate::Error::InvalidArgument(format!(
                "unit-job construction requires size 1, job {job} has size {size}"
            )));
        }
        round_robin(&mut self.schedules[0], job)?;
        let s = &mut self.schedules[1];
        match job {
            1 => put(s, Machine::First, 1, 0.0, 1.0)?,
            2 => {
                put(s, Machine::Second, 2, 0.0, 0.5)?;
                put(s, Machine::First, 2, 1.0, 1.5)?;
            }
            3 => put(s, Machine::Second, 3, 0.5, 1.5)?,
            _ => round_robin(s, job)?,
        }
        self.stats.push(size);
        self.jobs = job;
        Ok(())
    }
}

/// Next unit job on the less loaded machine (machine 1 on ties).
fn round_robin(s: &mut Schedule, job: usize) -> Result<()> {
    let m = if s.load(Machine::Second) < s.load(Machine::First) {
        Machine::Second
    } else {
        Machine::First
    };
    let start = s.load(m);
    put(s, m, job, start, start + 1.0)
}

impl OnlineAlgorithm for UnitJobsDual {
    fn name(&self) -> &'static str {
        "unit"
    }

    fn solution_count(&self) -> usize {
        2
    }

    fn step(&mut self, size: f64) -> Result<String> {
        UnitJobsDual::step(self, size).map(|_| "unit".to_string())
    }

    fn snapshot(&self) -> SolutionSet {
        SolutionSet::new(self.schedules.to_vec(), self.stats.total)
    }

    fn per_solution_max(&self) -> Vec<f64> {
        self.schedules.iter().map(Schedule::max_load).collect()
    }

    fn stats(&self) -> PrefixStats {
        self.stats
    }

    fn jobs_seen(&self) -> usize {
        self.jobs
    }
}

/// Both solutions for `n` unit jobs.
pub fn unit_jobs_dual(n: usize) -> SolutionSet {
    let mut alg = UnitJobsDual::new();
    for _ in 0..n {
        alg.step(1.0).expect("unit jobs are always placeable");
    }
    alg.snapshot()
}
