//! The `1 + δ` competitive algorithm with `9/δ²` parallel solutions.
//!
//! Every solution owns a length `L = p₁(1+ε)^i`, with consecutive powers
//! across the ladder. Jobs are packed into a window `[offset, offset + L)`
//! by online wrap-around. When `L` falls below the current optimum the window
//! is closed and the solution jumps to `L(1+ε)^K`, `K` being the number of
//! solutions, with a fresh window starting where the old one ended.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Schedule, SolutionSet};
use crate::offline::{PrefixStats, WrapFill};
use crate::online::{self, ensure_le, OnlineAlgorithm};
use crate::tol::{self, TOL};

/// Ladders at least this large extend their solutions in parallel.
const PARALLEL_MIN: usize = 256;

/// `δ` rounded down to `1/k` for integral `k`. Returns `None` outside `(0, 1]`.
pub fn effective_delta(delta: f64) -> Option<f64> {
    if !(delta.is_finite() && delta > 0.0 && delta <= 1.0) {
        return None;
    }
    // 1/δ is nudged down so that δ = 1/3 is not read as 1/3.0000000000000004.
    let k = (1.0 / delta - 1e-9).ceil().max(1.0);
    Some(1.0 / k)
}

/// Number of solutions `9/δ'²` for the effective `δ'`.
pub fn solution_count(delta: f64) -> Result<usize> {
    let d = effective_delta(delta).ok_or(Error::BadDelta(delta))?;
    let k = (1.0 / d).round() as usize;
    Ok(9 * k * k)
}

#[derive(Debug, Clone)]
pub struct TrackedSolution {
    power: u32,
    length: f64,
    offset: f64,
    window: WrapFill,
    schedule: Schedule,
    pending_jobs: Vec<usize>,
}

impl TrackedSolution {
    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Time used by closed windows.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Jobs packed into the open window.
    pub fn pending_jobs(&self) -> &[usize] {
        &self.pending_jobs
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn max_completion(&self) -> f64 {
        self.schedule.max_load()
    }

    fn promote(&mut self, by: u32, p1: f64, ratio: f64) {
        self.offset += self.window.span();
        self.power += by;
        self.length = p1 * ratio.powi(self.power as i32);
        self.window = WrapFill::new(self.offset, self.length);
        self.pending_jobs.clear();
    }

    fn place(&mut self, job: usize, size: f64) -> Result<()> {
        self.window.place(&mut self.schedule, job, size)?;
        self.pending_jobs.push(job);
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolutionLadder {
    delta: f64,
    epsilon: f64,
    full_count: usize,
    p1: f64,
    solutions: Vec<TrackedSolution>,
    stats: PrefixStats,
    jobs: usize,
}

/// Builds the full ladder for `δ` and places the first job of size `p1`.
pub fn ladder_init(p1: f64, delta: f64) -> Result<SolutionLadder> {
    let count = solution_count(delta)?;
    SolutionLadder::with_count(p1, delta, count)
}

impl SolutionLadder {
    /// A ladder with only the `count` lowest lengths of the full ladder.
    /// Promotion still jumps by `count` powers so the lengths stay
    /// consecutive; the `1 + δ` guarantee only holds for the full count.
    pub fn with_count(p1: f64, delta: f64, count: usize) -> Result<Self> {
        let delta = effective_delta(delta).ok_or(Error::BadDelta(delta))?;
        if count == 0 {
            return Err(Error::BadSolutionCount);
        }
        online::check_size(1, p1)?;
        let epsilon = delta / 3.0;
        let ratio = 1.0 + epsilon;
        let solutions = (0..count as u32)
            .map(|i| {
                let length = p1 * ratio.powi(i as i32);
                let mut s = TrackedSolution {
                    power: i,
                    length,
                    offset: 0.0,
                    window: WrapFill::new(0.0, length),
                    schedule: Schedule::new(),
                    pending_jobs: Vec::new(),
                };
                s.place(1, p1).map(|_| s)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut stats = PrefixStats::default();
        stats.push(p1);
        Ok(SolutionLadder {
            delta,
            epsilon,
            full_count: solution_count(delta)?,
            p1,
            solutions,
            stats,
            jobs: 1,
        })
    }

    /// The effective `δ`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn opt(&self) -> f64 {
        self.stats.opt
    }

    pub fn solutions(&self) -> &[TrackedSolution] {
        &self.solutions
    }

    pub fn is_full(&self) -> bool {
        self.solutions.len() == self.full_count
    }

    /// Adds the next job and returns the number of promotion rounds needed
    /// before every length reached the new optimum.
    pub fn step(&mut self, size: f64) -> Result<usize> {
        let job = self.jobs + 1;
        online::check_size(job, size)?;
        self.stats.push(size);
        let opt = self.stats.opt;
        let floor = opt - tol::scaled(TOL, opt);
        let by = self.solutions.len() as u32;
        let ratio = 1.0 + self.epsilon;
        let p1 = self.p1;
        let mut rounds = 0;
        while self.solutions.iter().any(|s| s.length < floor) {
            for s in self.solutions.iter_mut().filter(|s| s.length < floor) {
                s.promote(by, p1, ratio);
            }
            rounds += 1;
        }
        if self.solutions.len() >= PARALLEL_MIN {
            self.solutions
                .par_iter_mut()
                .try_for_each(|s| s.place(job, size))?;
        } else {
            for s in &mut self.solutions {
                s.place(job, size)?;
            }
        }
        self.jobs = job;
        self.check_invariants()?;
        Ok(rounds)
    }

    /// Index and value of the solution with the smallest maximum completion
    /// time; ties go to the lowest index.
    pub fn best(&self) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, s) in self.solutions.iter().enumerate() {
            let v = s.max_completion();
            if v < best.1 {
                best = (i, v);
            }
        }
        best
    }

    pub fn check_invariants(&self) -> Result<()> {
        let mut powers: Vec<u32> = self.solutions.iter().map(|s| s.power).collect();
        powers.sort_unstable();
        if powers.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::invariant(format!(
                "ladder powers are not consecutive: {powers:?}"
            )));
        }
        let jump = (1.0 + self.epsilon).powi(self.solutions.len() as i32);
        for s in &self.solutions {
            let l = s.length;
            ensure_le(s.offset, l / (jump - 1.0), l, "closed windows within geometric bound")?;
            ensure_le(s.max_completion(), s.offset + l, l, "completion within the open window")?;
            if self.is_full() {
                ensure_le(s.offset, self.epsilon * l, l, "offset < eps*L")?;
                ensure_le(s.max_completion(), (1.0 + self.epsilon) * l, l, "completion <= (1+eps)L")?;
            }
        }
        if self.is_full() {
            let opt = self.stats.opt;
            let (_, best) = self.best();
            ensure_le(best, (1.0 + self.delta) * opt, opt, "best <= (1+delta) OPT")?;
        }
        Ok(())
    }
}

/// Best solution of a ladder.
pub fn ladder_best(ladder: &SolutionLadder) -> (usize, f64) {
    ladder.best()
}

/// Online-interface wrapper around [`SolutionLadder`]; the ladder is built
/// when the first job arrives.
#[derive(Debug, Clone)]
pub struct MultiSolution {
    delta: f64,
    count: usize,
    ladder: Option<SolutionLadder>,
}

impl MultiSolution {
    pub fn new(delta: f64) -> Result<Self> {
        Ok(MultiSolution {
            delta,
            count: solution_count(delta)?,
            ladder: None,
        })
    }

    /// A truncated ladder with `count` solutions.
    pub fn with_count(delta: f64, count: usize) -> Result<Self> {
        solution_count(delta)?;
        if count == 0 {
            return Err(Error::BadSolutionCount);
        }
        Ok(MultiSolution {
            delta,
            count,
            ladder: None,
        })
    }

    pub fn ladder(&self) -> Option<&SolutionLadder> {
        self.ladder.as_ref()
    }
}

impl OnlineAlgorithm for MultiSolution {
    fn name(&self) -> &'static str {
        "multi"
    }

    fn solution_count(&self) -> usize {
        self.count
    }

    fn step(&mut self, size: f64) -> Result<String> {
        match &mut self.ladder {
            None => {
                self.ladder = Some(SolutionLadder::with_count(size, self.delta, self.count)?);
                Ok("init".into())
            }
            Some(l) => l.step(size).map(|r| format!("promote:{r}")),
        }
    }

    fn snapshot(&self) -> SolutionSet {
        match &self.ladder {
            None => SolutionSet::new(vec![Schedule::new(); self.count], 0.0),
            Some(l) => SolutionSet::new(
                l.solutions.iter().map(|s| s.schedule.clone()).collect(),
                l.stats.total,
            ),
        }
    }

    fn per_solution_max(&self) -> Vec<f64> {
        match &self.ladder {
            None => vec![0.0; self.count],
            Some(l) => l.solutions.iter().map(|s| s.max_completion()).collect(),
        }
    }

    fn stats(&self) -> PrefixStats {
        self.ladder.as_ref().map(|l| l.stats).unwrap_or_default()
    }

    fn jobs_seen(&self) -> usize {
        self.ladder.as_ref().map_or(0, |l| l.jobs)
    }

    fn no_idle(&self) -> bool {
        false
    }
}
