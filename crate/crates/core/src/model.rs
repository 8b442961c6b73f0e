//! Schedules on two identical machines.
//!
//! A [`Schedule`] is one solution: a set of half-open [`Piece`]s, each running
//! part of a job on one machine. A [`SolutionSet`] holds the parallel
//! solutions maintained by an online algorithm; its makespan is the best
//! (smallest) maximum completion time among them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{self, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Machine {
    First,
    Second,
}

impl Machine {
    pub const BOTH: [Machine; 2] = [Machine::First, Machine::Second];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Machine::First => 0,
            Machine::Second => 1,
        }
    }

    /// 1-based machine number as used in files and reports.
    #[inline]
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    #[inline]
    pub fn other(self) -> Machine {
        match self {
            Machine::First => Machine::Second,
            Machine::Second => Machine::First,
        }
    }
}

impl TryFrom<u8> for Machine {
    type Error = String;

    fn try_from(n: u8) -> std::result::Result<Self, Self::Error> {
        match n {
            1 => Ok(Machine::First),
            2 => Ok(Machine::Second),
            _ => Err(format!("machine must be 1 or 2, got {n}")),
        }
    }
}

impl From<Machine> for u8 {
    fn from(m: Machine) -> u8 {
        m.number()
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.number())
    }
}

/// A work item: 1-based arrival index and a positive size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub index: usize,
    pub size: f64,
}

impl Job {
    pub fn new(index: usize, size: f64) -> Result<Self> {
        if !(size.is_finite() && size > 0.0) {
            return Err(Error::NonPositiveSize { index, size });
        }
        Ok(Job { index, size })
    }
}

/// Numbers `sizes` as jobs `1..=n`, rejecting non-positive sizes.
pub fn jobs_from_sizes(sizes: &[f64]) -> Result<Vec<Job>> {
    sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| Job::new(i + 1, s))
        .collect()
}

/// Part of a job running on one machine during `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub machine: Machine,
    pub job: usize,
    pub start: f64,
    pub end: f64,
}

impl Piece {
    pub fn new(machine: Machine, job: usize, start: f64, end: f64) -> Self {
        Piece {
            machine,
            job,
            start,
            end,
        }
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    /// True when the open interiors intersect by more than `tol`.
    #[inline]
    pub fn overlaps(&self, other: &Piece, tol: f64) -> bool {
        self.start < other.end - tol && other.start < self.end - tol
    }

    /// The same piece with both endpoints multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Piece {
        Piece {
            start: self.start * factor,
            end: self.end * factor,
            ..*self
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} job {} [{}, {})",
            self.machine, self.job, self.start, self.end
        )
    }
}

/// One solution.
///
/// Pieces are kept in insertion order; each machine additionally keeps an
/// index of its pieces sorted by start time so overlap checks are
/// logarithmic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schedule {
    pieces: Vec<Piece>,
    lanes: [Vec<usize>; 2],
    by_job: BTreeMap<usize, Vec<usize>>,
    loads: [f64; 2],
    assigned: BTreeMap<usize, f64>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a schedule without any overlap checks. Used for schedules read
    /// from files, which are then inspected with [`validate`].
    pub fn from_pieces_unchecked(pieces: impl IntoIterator<Item = Piece>) -> Self {
        let mut s = Schedule::new();
        for p in pieces {
            s.insert(p);
        }
        s
    }

    /// Appends `piece`, rejecting it if it overlaps a piece on the same
    /// machine or a piece of the same job on the other machine. A rejected
    /// piece leaves the schedule unchanged.
    pub fn add_piece(&mut self, piece: Piece) -> Result<()> {
        self.add_piece_with_tol(piece, TOL)
    }

    pub fn add_piece_with_tol(&mut self, piece: Piece, tol: f64) -> Result<()> {
        if !(piece.start.is_finite() && piece.end.is_finite() && piece.end > piece.start) {
            return Err(Error::EmptyPiece {
                machine: piece.machine.number(),
                job: piece.job,
                start: piece.start,
                end: piece.end,
            });
        }
        let tol = tol::scaled(tol, piece.end);
        if piece.start < -tol {
            return Err(Error::InvalidArgument(format!(
                "piece {piece} starts before time 0"
            )));
        }
        if let Some(existing) = self.machine_conflict(&piece, tol) {
            return Err(Error::Overlap {
                new: piece,
                existing,
            });
        }
        if let Some(idxs) = self.by_job.get(&piece.job) {
            let other = piece.machine.other();
            if let Some(&i) = idxs
                .iter()
                .find(|&&i| self.pieces[i].machine == other && self.pieces[i].overlaps(&piece, tol))
            {
                return Err(Error::Overlap {
                    new: piece,
                    existing: self.pieces[i],
                });
            }
        }
        self.insert(piece);
        Ok(())
    }

    fn machine_conflict(&self, piece: &Piece, tol: f64) -> Option<Piece> {
        let lane = &self.lanes[piece.machine.index()];
        let pos = lane.partition_point(|&i| self.pieces[i].start <= piece.start);
        let before = pos.checked_sub(1).map(|k| self.pieces[lane[k]]);
        let after = lane.get(pos).map(|&i| self.pieces[i]);
        before
            .into_iter()
            .chain(after)
            .find(|p| p.overlaps(piece, tol))
    }

    fn insert(&mut self, piece: Piece) {
        let idx = self.pieces.len();
        self.pieces.push(piece);
        let pieces = &self.pieces;
        let lane = &mut self.lanes[piece.machine.index()];
        let pos = lane.partition_point(|&i| pieces[i].start <= piece.start);
        lane.insert(pos, idx);
        self.by_job.entry(piece.job).or_default().push(idx);
        let load = &mut self.loads[piece.machine.index()];
        *load = load.max(piece.end);
        *self.assigned.entry(piece.job).or_insert(0.0) += piece.len();
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Pieces of one machine in start-time order.
    pub fn lane(&self, machine: Machine) -> impl Iterator<Item = &Piece> + '_ {
        self.lanes[machine.index()].iter().map(|&i| &self.pieces[i])
    }

    /// Pieces of one job in insertion order.
    pub fn job_pieces(&self, job: usize) -> impl Iterator<Item = &Piece> + '_ {
        self.by_job
            .get(&job)
            .into_iter()
            .flatten()
            .map(|&i| &self.pieces[i])
    }

    /// Completion time of `machine`: the supremum end of its pieces, 0 if none.
    #[inline]
    pub fn load(&self, machine: Machine) -> f64 {
        self.loads[machine.index()]
    }

    #[inline]
    pub fn loads(&self) -> [f64; 2] {
        self.loads
    }

    /// Maximum completion time of this solution.
    #[inline]
    pub fn max_load(&self) -> f64 {
        self.loads[0].max(self.loads[1])
    }

    /// Total length assigned to `job` so far.
    pub fn assigned(&self, job: usize) -> f64 {
        self.assigned.get(&job).copied().unwrap_or(0.0)
    }

    /// Job indices with at least one piece, ascending.
    pub fn jobs(&self) -> impl Iterator<Item = usize> + '_ {
        self.assigned.keys().copied()
    }

    /// Sum of all piece lengths.
    pub fn total_assigned(&self) -> f64 {
        self.assigned.values().sum()
    }

    /// Every piece with both endpoints multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Schedule {
        Schedule::from_pieces_unchecked(self.pieces.iter().map(|p| p.scaled(factor)))
    }
}

/// What [`validate`] checks beyond the always-on overlap and completeness
/// rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    /// Require every machine to be busy throughout `[0, load)`.
    pub strict_no_idle: bool,
    pub tol: f64,
}

impl ValidateOptions {
    pub fn strict() -> Self {
        ValidateOptions {
            strict_no_idle: true,
            tol: TOL,
        }
    }

    pub fn relaxed() -> Self {
        ValidateOptions {
            strict_no_idle: false,
            tol: TOL,
        }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        ValidateOptions { tol, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Two pieces share time on the same machine.
    Overlap { first: Piece, second: Piece },
    /// A job runs on both machines at the same time.
    SelfParallel { job: usize, first: Piece, second: Piece },
    /// The assigned length of a job differs from its size.
    IncompleteAssignment {
        job: usize,
        size: f64,
        assigned: f64,
    },
    /// A machine is idle during `[start, end)` before its completion time.
    IdleTime { machine: Machine, start: f64, end: f64 },
    /// A piece refers to a job that is not part of the input.
    UnknownJob { piece: Piece },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Overlap { .. } => "Overlap",
            Violation::SelfParallel { .. } => "SelfParallel",
            Violation::IncompleteAssignment { .. } => "IncompleteAssignment",
            Violation::IdleTime { .. } => "IdleTime",
            Violation::UnknownJob { .. } => "UnknownJob",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { first, second } => {
                write!(f, "Overlap: {first} and {second}")
            }
            Violation::SelfParallel { job, first, second } => {
                write!(f, "SelfParallel: job {job} runs in {first} and {second}")
            }
            Violation::IncompleteAssignment {
                job,
                size,
                assigned,
            } => write!(
                f,
                "IncompleteAssignment: job {job} has size {size} but {assigned} assigned"
            ),
            Violation::IdleTime {
                machine,
                start,
                end,
            } => write!(f, "IdleTime: {machine} idle during [{start}, {end})"),
            Violation::UnknownJob { piece } => {
                write!(f, "UnknownJob: {piece} refers to no input job")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.violations.iter().filter(|v| v.kind() == kind).count()
    }
}

/// Lists every violation of `schedule` against `jobs`. Violations are data:
/// this never fails.
pub fn validate(schedule: &Schedule, jobs: &[Job], opts: ValidateOptions) -> ValidationReport {
    let tol = tol::scaled(opts.tol, schedule.max_load());
    let mut violations = Vec::new();

    for m in Machine::BOTH {
        // Sweep in start order, remembering the piece reaching furthest.
        let mut reach: Option<Piece> = None;
        let mut covered = 0.0_f64;
        for p in schedule.lane(m) {
            if opts.strict_no_idle && p.start > covered + tol {
                violations.push(Violation::IdleTime {
                    machine: m,
                    start: covered,
                    end: p.start,
                });
            }
            covered = covered.max(p.end);
            match reach {
                Some(r) if r.overlaps(p, tol) => {
                    violations.push(Violation::Overlap {
                        first: r,
                        second: *p,
                    });
                    if p.end > r.end {
                        reach = Some(*p);
                    }
                }
                Some(r) if r.end >= p.end => {}
                _ => reach = Some(*p),
            }
        }
    }

    for job in schedule.jobs() {
        let pieces: Vec<&Piece> = schedule.job_pieces(job).collect();
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if a.machine != b.machine && a.overlaps(b, tol) {
                    violations.push(Violation::SelfParallel {
                        job,
                        first: **a,
                        second: **b,
                    });
                }
            }
        }
    }

    let sizes: BTreeMap<usize, f64> = jobs.iter().map(|j| (j.index, j.size)).collect();
    for p in schedule.pieces() {
        if !sizes.contains_key(&p.job) {
            violations.push(Violation::UnknownJob { piece: *p });
        }
    }
    for (&job, &size) in &sizes {
        let assigned = schedule.assigned(job);
        if (assigned - size).abs() > tol::scaled(opts.tol, size) {
            violations.push(Violation::IncompleteAssignment {
                job,
                size,
                assigned,
            });
        }
    }

    ValidationReport { violations }
}

/// The parallel solutions of an online algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub solutions: Vec<Schedule>,
    /// Total size of the presented jobs.
    pub total_size: f64,
}

impl SolutionSet {
    pub fn new(solutions: Vec<Schedule>, total_size: f64) -> Self {
        SolutionSet {
            solutions,
            total_size,
        }
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Minimum over solutions of the maximum machine completion time.
    pub fn makespan(&self) -> Result<f64> {
        self.best().map(|(_, v)| v)
    }

    /// Index and value of the solution with the smallest maximum completion
    /// time; ties go to the lowest index.
    pub fn best(&self) -> Result<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in self.solutions.iter().enumerate() {
            let v = s.max_load();
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
        best.ok_or(Error::EmptySet)
    }

    pub fn per_solution_max(&self) -> Vec<f64> {
        self.solutions.iter().map(Schedule::max_load).collect()
    }

    /// Validates every solution against `jobs` and checks that all solutions
    /// carry the same job set. Under strict mode it also checks that each
    /// solution's two loads sum to the total size.
    pub fn validate(&self, jobs: &[Job], opts: ValidateOptions) -> Vec<(usize, Violation)> {
        let mut out = Vec::new();
        for (k, s) in self.solutions.iter().enumerate() {
            for v in validate(s, jobs, opts).violations {
                out.push((k, v));
            }
        }
        out
    }

    /// True when each solution's loads sum to the total size within `tol`.
    pub fn loads_balance(&self, tol: f64) -> bool {
        let t = tol::scaled(tol, self.total_size);
        self.solutions
            .iter()
            .all(|s| (s.load(Machine::First) + s.load(Machine::Second) - self.total_size).abs() <= t)
    }
}

/// Time measure during which at least one machine (`active`) and both
/// machines (`dual`) are running a piece.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Occupancy {
    pub active: f64,
    pub dual: f64,
}

impl Occupancy {
    /// Time during which exactly one machine runs.
    pub fn single(&self) -> f64 {
        self.active - self.dual
    }
}

/// Sweep over all piece endpoints, tracking how many machines are busy.
pub fn occupancy(schedule: &Schedule) -> Occupancy {
    let mut events: Vec<(f64, usize, i32)> = Vec::with_capacity(schedule.pieces().len() * 2);
    for p in schedule.pieces() {
        events.push((p.start, p.machine.index(), 1));
        events.push((p.end, p.machine.index(), -1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut depth = [0i32; 2];
    let mut out = Occupancy::default();
    let mut prev = 0.0;
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        let busy = depth.iter().filter(|&&d| d > 0).count();
        let dt = t - prev;
        if busy >= 1 {
            out.active += dt;
        }
        if busy == 2 {
            out.dual += dt;
        }
        while i < events.len() && events[i].0 == t {
            depth[events[i].1] += events[i].2;
            i += 1;
        }
        prev = t;
    }
    out
}

/// Total time during which both machines run simultaneously.
pub fn dual_occupancy(schedule: &Schedule) -> f64 {
    occupancy(schedule).dual
}
