//! Optimal offline makespan and McNaughton's wrap-around construction.

use crate::error::{Error, Result};
use crate::model::{Job, Machine, Piece, Schedule};
use crate::tol::{self, MIN_PIECE, TOL};

/// Running totals over a job prefix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrefixStats {
    /// Total size of the prefix.
    pub total: f64,
    /// Largest size in the prefix.
    pub p_max: f64,
    /// Optimal preemptive makespan on two machines.
    pub opt: f64,
}

impl PrefixStats {
    pub fn push(&mut self, size: f64) {
        self.total += size;
        self.p_max = self.p_max.max(size);
        self.opt = opt_from(self.total, self.p_max);
    }
}

#[inline]
pub fn opt_from(total: f64, p_max: f64) -> f64 {
    (total / 2.0).max(p_max)
}

/// Prefix statistics after each job.
pub fn prefix_stats(jobs: &[Job]) -> Vec<PrefixStats> {
    let mut acc = PrefixStats::default();
    jobs.iter()
        .map(|j| {
            acc.push(j.size);
            acc
        })
        .collect()
}

/// `max(W/2, p_max)`, or 0 for no jobs.
pub fn opt_makespan(jobs: &[Job]) -> Result<f64> {
    let mut acc = PrefixStats::default();
    for j in jobs {
        if !(j.size.is_finite() && j.size > 0.0) {
            return Err(Error::NonPositiveSize {
                index: j.index,
                size: j.size,
            });
        }
        acc.push(j.size);
    }
    Ok(acc.opt)
}

/// Online wrap-around filling of a window `[origin, origin + length)` on both
/// machines: machine 1 is filled left to right, and a job crossing the end of
/// the window is cut there and continued on machine 2 from the window start.
///
/// Every job fits as long as no job is longer than the window and the total
/// stays within twice the window length.
#[derive(Debug, Clone, PartialEq)]
pub struct WrapFill {
    origin: f64,
    length: f64,
    machine: Machine,
    cursor: f64,
}

impl WrapFill {
    pub fn new(origin: f64, length: f64) -> Self {
        WrapFill {
            origin,
            length,
            machine: Machine::First,
            cursor: 0.0,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Local completion time of the window (0 while empty).
    pub fn span(&self) -> f64 {
        match self.machine {
            Machine::First => self.cursor,
            Machine::Second => self.length,
        }
    }

    /// Places `size` units of `job` into `schedule`.
    pub fn place(&mut self, schedule: &mut Schedule, job: usize, size: f64) -> Result<()> {
        let slack = tol::scaled(TOL, self.length);
        if size > self.length + slack {
            return Err(Error::Infeasible {
                target: self.length,
                opt: size,
            });
        }
        let mut rest = size;
        if self.machine == Machine::First {
            let room = self.length - self.cursor;
            if rest <= room + slack {
                let end = self.cursor + rest;
                self.put(schedule, Machine::First, job, self.cursor, end)?;
                self.cursor = end;
                if self.length - self.cursor <= slack {
                    self.machine = Machine::Second;
                    self.cursor = 0.0;
                }
                return Ok(());
            }
            self.put(schedule, Machine::First, job, self.cursor, self.length)?;
            rest -= room;
            self.machine = Machine::Second;
            self.cursor = 0.0;
        }
        let end = self.cursor + rest;
        if end > self.length + slack {
            return Err(Error::Infeasible {
                target: self.length,
                opt: end,
            });
        }
        self.put(schedule, Machine::Second, job, self.cursor, end)?;
        self.cursor = end;
        Ok(())
    }

    fn put(
        &self,
        schedule: &mut Schedule,
        machine: Machine,
        job: usize,
        start: f64,
        end: f64,
    ) -> Result<()> {
        let (s, e) = (self.origin + start, self.origin + end);
        if e - s <= MIN_PIECE * e.abs().max(1.0) {
            return Ok(());
        }
        schedule
            .add_piece(Piece::new(machine, job, s, e))
            .map_err(|err| Error::invariant(format!("wrap-around fill produced an overlap: {err}")))
    }
}

/// McNaughton's optimal construction with every machine allocated `[0, t)`.
/// Jobs are packed in presentation order.
pub fn mcnaughton(jobs: &[Job], t: f64) -> Result<Schedule> {
    let opt = opt_makespan(jobs)?;
    if t < opt - tol::scaled(TOL, opt) {
        return Err(Error::Infeasible { target: t, opt });
    }
    let mut schedule = Schedule::new();
    let mut fill = WrapFill::new(0.0, t);
    for j in jobs {
        fill.place(&mut schedule, j.index, j.size)?;
    }
    Ok(schedule)
}
