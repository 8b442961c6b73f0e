//! The step interface shared by all online algorithms, plus per-prefix
//! auditing of competitive ratios.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::model::{Job, Machine, Piece, Schedule, SolutionSet, ValidateOptions};
use crate::offline::PrefixStats;
use crate::tol::{self, MIN_PIECE, TOL};

/// An online algorithm maintaining one or more parallel solutions.
///
/// Jobs are numbered by the algorithm in arrival order starting at 1.
pub trait OnlineAlgorithm {
    fn name(&self) -> &'static str;

    /// Number of parallel solutions maintained.
    fn solution_count(&self) -> usize;

    /// Assigns the next job completely in every solution and returns a short
    /// tag describing the branch taken.
    fn step(&mut self, size: f64) -> Result<String>;

    /// Current solutions, containing exactly the jobs presented so far.
    fn snapshot(&self) -> SolutionSet;

    /// Maximum completion time of each solution, without materializing a
    /// snapshot.
    fn per_solution_max(&self) -> Vec<f64> {
        self.snapshot().per_solution_max()
    }

    fn stats(&self) -> PrefixStats;

    fn jobs_seen(&self) -> usize;

    /// Whether the algorithm promises schedules without idle time.
    fn no_idle(&self) -> bool {
        true
    }

    /// Best maximum completion time over solutions.
    fn makespan(&self) -> f64 {
        if self.jobs_seen() == 0 {
            return 0.0;
        }
        self.per_solution_max()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Ratio of the best solution to the optimum over one prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub prefix_len: usize,
    pub opt: f64,
    pub per_solution_max: Vec<f64>,
    pub makespan: f64,
    /// `makespan / opt`; absent when `opt` is 0.
    pub ratio: Option<f64>,
    pub case_taken: String,
}

impl AuditRecord {
    pub fn observe<A: OnlineAlgorithm + ?Sized>(alg: &A, case_taken: String) -> Self {
        let per_solution_max = alg.per_solution_max();
        let makespan = alg.makespan();
        let opt = alg.stats().opt;
        AuditRecord {
            prefix_len: alg.jobs_seen(),
            opt,
            makespan,
            ratio: (opt > 0.0).then(|| makespan / opt),
            per_solution_max,
            case_taken,
        }
    }
}

/// Largest ratio over a set of records (1 for an empty audit).
pub fn max_ratio(records: &[AuditRecord]) -> f64 {
    records
        .iter()
        .filter_map(|r| r.ratio)
        .fold(1.0, f64::max)
}

/// Feeds `jobs` to `alg`, recording an audit line after every job. With
/// `validate_each`, every prefix snapshot is validated and any violation is
/// reported as an invariant violation.
pub fn run_audited<A: OnlineAlgorithm + ?Sized>(
    alg: &mut A,
    jobs: &[Job],
    validate_each: Option<ValidateOptions>,
) -> Result<(SolutionSet, Vec<AuditRecord>)> {
    let mut audit = Vec::with_capacity(jobs.len());
    for (k, job) in jobs.iter().enumerate() {
        let tag = alg.step(job.size)?;
        audit.push(AuditRecord::observe(alg, tag));
        if let Some(opts) = validate_each {
            let set = alg.snapshot();
            if let Some((s, v)) = set.validate(&jobs[..=k], opts).into_iter().next() {
                return Err(Error::invariant(format!(
                    "{} produced an invalid schedule after job {}: solution {s}: {v}",
                    alg.name(),
                    k + 1
                )));
            }
        }
    }
    Ok((alg.snapshot(), audit))
}

pub const AUDIT_HEADER: &str = "prefix,opt,a_max,b_max,makespan,ratio,case";

/// One CSV line per record under [`AUDIT_HEADER`]. `a_max` and `b_max` are
/// the first two solutions; `b_max` is empty for single-solution algorithms.
pub fn write_audit_csv<W: Write>(mut w: W, records: &[AuditRecord]) -> io::Result<()> {
    writeln!(w, "{AUDIT_HEADER}")?;
    let mut line = String::new();
    for r in records {
        line.clear();
        let a = r.per_solution_max.first().copied().unwrap_or(0.0);
        write!(line, "{},{},{},", r.prefix_len, r.opt, a).unwrap();
        if let Some(b) = r.per_solution_max.get(1) {
            write!(line, "{b}").unwrap();
        }
        write!(line, ",{},", r.makespan).unwrap();
        if let Some(ratio) = r.ratio {
            write!(line, "{ratio}").unwrap();
        }
        write!(line, ",{}", r.case_taken).unwrap();
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Places `[start, end)` of `job` on `machine`. Requested lengths that are
/// negligible are skipped, clearly negative ones are a bug.
pub(crate) fn put(
    schedule: &mut Schedule,
    machine: Machine,
    job: usize,
    start: f64,
    end: f64,
) -> Result<()> {
    let scale = end.abs().max(start.abs()).max(1.0);
    let len = end - start;
    if len < -TOL * scale {
        return Err(Error::invariant(format!(
            "job {job}: negative interval [{start}, {end}) on {machine}"
        )));
    }
    if len <= MIN_PIECE * scale {
        return Ok(());
    }
    schedule
        .add_piece(Piece::new(machine, job, start, end))
        .map_err(|e| Error::invariant(format!("job {job}: {e}")))
}

/// `lhs <= rhs` up to the scaled default tolerance, or an invariant error.
pub(crate) fn ensure_le(lhs: f64, rhs: f64, scale: f64, what: &str) -> Result<()> {
    if lhs <= rhs + tol::scaled(TOL, scale) {
        Ok(())
    } else {
        Err(Error::invariant(format!("{what}: {lhs} > {rhs}")))
    }
}

pub(crate) fn check_size(index: usize, size: f64) -> Result<()> {
    Job::new(index, size).map(|_| ())
}
