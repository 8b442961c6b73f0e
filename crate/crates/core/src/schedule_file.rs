//! Line-delimited JSON files holding the solutions of one run.
//!
//! ```text
//! {"kind":"schedule","algorithm":"general","seed":7,"solutions":2,"strict":true}
//! {"kind":"job","index":1,"size":1.0000000000000000e0}
//! {"kind":"piece","solution":0,"machine":1,"job":1,"start":0.0000000000000000e0,"end":1.0000000000000000e0}
//! ```
//!
//! Pieces are read without overlap checks so that defective schedules can be
//! loaded and reported by the validator.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Job, Machine, Piece, Schedule, SolutionSet, ValidateOptions, Violation};
use crate::workload::{format_size, job_line, parse_job};

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleFile {
    pub algorithm: String,
    pub seed: Option<u64>,
    /// Whether the producing algorithm promises no idle time.
    pub strict: bool,
    pub jobs: Vec<Job>,
    pub solutions: Vec<Schedule>,
}

impl ScheduleFile {
    pub fn new(algorithm: &str, seed: Option<u64>, strict: bool, jobs: Vec<Job>, set: &SolutionSet) -> Self {
        ScheduleFile {
            algorithm: algorithm.to_string(),
            seed,
            strict,
            jobs,
            solutions: set.solutions.clone(),
        }
    }

    /// Violations of every solution, checked in the mode recorded in the
    /// header.
    pub fn validate(&self, tol: f64) -> Vec<(usize, Violation)> {
        let opts = if self.strict {
            ValidateOptions::strict()
        } else {
            ValidateOptions::relaxed()
        };
        let total = self.jobs.iter().map(|j| j.size).sum();
        SolutionSet::new(self.solutions.clone(), total).validate(&self.jobs, opts.with_tol(tol))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Line {
    Schedule {
        algorithm: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        solutions: usize,
        strict: bool,
    },
    Job {
        index: usize,
        size: f64,
    },
    Piece {
        solution: usize,
        machine: Machine,
        job: usize,
        start: f64,
        end: f64,
    },
}

pub fn write_schedule_file<W: Write>(mut w: W, file: &ScheduleFile) -> Result<()> {
    let header = Line::Schedule {
        algorithm: file.algorithm.clone(),
        seed: file.seed,
        solutions: file.solutions.len(),
        strict: file.strict,
    };
    let header = serde_json::to_string(&header).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w, "{header}")?;
    for job in &file.jobs {
        writeln!(w, "{}", job_line(job))?;
    }
    for (s, schedule) in file.solutions.iter().enumerate() {
        for p in schedule.pieces() {
            writeln!(
                w,
                "{{\"kind\":\"piece\",\"solution\":{s},\"machine\":{},\"job\":{},\"start\":{},\"end\":{}}}",
                p.machine.number(),
                p.job,
                format_size(p.start),
                format_size(p.end)
            )?;
        }
    }
    Ok(())
}

pub fn read_schedule_file<R: BufRead>(r: R) -> Result<ScheduleFile> {
    let mut header: Option<(String, Option<u64>, usize, bool)> = None;
    let mut jobs = Vec::new();
    let mut pieces: Vec<Vec<Piece>> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line =
            serde_json::from_str(&line).map_err(|e| Error::parse(line_no, e.to_string()))?;
        if header.is_none() && !matches!(parsed, Line::Schedule { .. }) {
            return Err(Error::parse(line_no, "expected the schedule header first"));
        }
        match parsed {
            Line::Schedule {
                algorithm,
                seed,
                solutions,
                strict,
            } => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "second schedule header"));
                }
                if solutions == 0 {
                    return Err(Error::parse(line_no, "a schedule file needs at least one solution"));
                }
                pieces = vec![Vec::new(); solutions];
                header = Some((algorithm, seed, solutions, strict));
            }
            Line::Job { index, size } => {
                jobs.push(parse_job(line_no, index, size, jobs.len() + 1)?);
            }
            Line::Piece {
                solution,
                machine,
                job,
                start,
                end,
            } => {
                if solution >= pieces.len() {
                    return Err(Error::parse(
                        line_no,
                        format!("solution {solution} out of range 0..{}", pieces.len()),
                    ));
                }
                if !(start.is_finite() && end.is_finite() && start >= 0.0 && end > start) {
                    return Err(Error::parse(
                        line_no,
                        format!("piece interval [{start}, {end}) is not a positive-length interval from time 0 on"),
                    ));
                }
                pieces[solution].push(Piece::new(machine, job, start, end));
            }
        }
    }
    let Some((algorithm, seed, _, strict)) = header else {
        return Err(Error::parse(0, "missing schedule header"));
    };
    Ok(ScheduleFile {
        algorithm,
        seed,
        strict,
        jobs,
        solutions: pieces.into_iter().map(Schedule::from_pieces_unchecked).collect(),
    })
}

pub fn schedule_file_from_str(text: &str) -> Result<ScheduleFile> {
    read_schedule_file(text.as_bytes())
}
