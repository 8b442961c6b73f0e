//! Two-solution online algorithm for jobs arriving in non-increasing size
//! order, competitive ratio `6 − 2√6 ≈ 1.10102`.
//!
//! Sizes are normalized so the first job has size 1; every threshold below is
//! stated in those units. Outputs are scaled back on the way out.

use std::fmt;

use crate::error::{Error, Result};
use crate::general::Subcase;
use crate::model::{Job, Machine, Schedule, SolutionSet, ValidateOptions};
use crate::offline::PrefixStats;
use crate::online::{self, ensure_le, put, AuditRecord, OnlineAlgorithm};
use crate::tol::TOL;

/// Constants of the sorted algorithm.
pub struct SortedConstants;

impl SortedConstants {
    /// `√6 − 2`; the size of the third job in the tight instance.
    pub const ALPHA: f64 = 0.4494897427831779;
    /// Competitive ratio `6 − 2√6`.
    pub const R: f64 = 1.1010205144336442;
    /// Load target of solution B after two jobs, `3(√6 − 2)`.
    pub const SMALL_R: f64 = 1.3484692283495336;
    /// `1 − √6/3`. Case 1 applies when `p_j ≤ β·W_j`.
    pub const BETA: f64 = 0.18350341907227408;
    pub const SQRT6: f64 = 2.449489742783178;
    /// Second jobs up to this size select the single-solution approach.
    pub const FIRST_APPROACH_MAX: f64 = 0.4;
    /// Machine 2 share of solution B.
    pub const B_SHARE: f64 = 0.4;
    /// Machine 2 share of solution A, `1 − R/2`.
    pub const A_SHARE: f64 = 1.0 - Self::R / 2.0;
}

use SortedConstants as C;

/// Which approach the second job selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    /// Second job at most 0.4: only solution A is maintained; B mirrors it.
    Single,
    /// Second job above 0.4: both solutions are used and may swap.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SortedCase {
    FirstJob,
    /// Single-solution approach, whole job on machine 2 or split.
    Single(Subcase),
    /// Second job of the dual approach.
    SecondJob,
    /// Dual approach, small job or small total; no swap.
    Small { a: Subcase, b: Subcase },
    /// Dual approach, remaining jobs; solutions swap.
    Swap { gamma: f64 },
}

impl fmt::Display for SortedCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortedCase::FirstJob => f.write_str("first"),
            SortedCase::Single(s) => write!(f, "single:{s}"),
            SortedCase::SecondJob => f.write_str("second"),
            SortedCase::Small { a, b } => write!(f, "{a}/{b}"),
            SortedCase::Swap { .. } => f.write_str("2"),
        }
    }
}

/// State of the sorted algorithm. Loads and pieces are kept in normalized
/// units (first job = 1).
#[derive(Debug, Clone, Default)]
pub struct SortedState {
    approach: Option<Approach>,
    schedules: [Schedule; 2],
    a_role: usize,
    stats: PrefixStats,
    jobs: usize,
    prev_size: f64,
    scale: f64,
}

impl SortedState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn approach(&self) -> Option<Approach> {
        self.approach
    }

    /// Size of the first job; all internal quantities are in its units.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Solution A in normalized units.
    pub fn a(&self) -> &Schedule {
        &self.schedules[self.a_role]
    }

    /// Solution B in normalized units.
    pub fn b(&self) -> &Schedule {
        &self.schedules[1 - self.a_role]
    }

    /// Normalized prefix statistics.
    pub fn normalized_stats(&self) -> PrefixStats {
        self.stats
    }

    pub fn step(&mut self, size: f64) -> Result<SortedCase> {
        let job = self.jobs + 1;
        online::check_size(job, size)?;
        if job == 1 {
            self.scale = size;
            for s in &mut self.schedules {
                put(s, Machine::First, 1, 0.0, 1.0)?;
            }
            self.finish(1, 1.0)?;
            return Ok(SortedCase::FirstJob);
        }

        let p = size / self.scale;
        if p > self.prev_size + TOL {
            return Err(Error::UnsortedInput {
                index: job,
                size,
                previous: self.prev_size * self.scale,
            });
        }
        let total = self.stats.total + p;
        if job >= 3 {
            ensure_le(p, total / 3.0, total, "sorted input: p_j <= W_j/3")?;
        }

        let case = match (job, self.approach) {
            (2, _) if p <= C::FIRST_APPROACH_MAX => {
                self.approach = Some(Approach::Single);
                self.single_step(job, p, total)?
            }
            (2, _) => {
                self.approach = Some(Approach::Dual);
                let (ai, bi) = (self.a_role, 1 - self.a_role);
                let a = &mut self.schedules[ai];
                put(a, Machine::Second, 2, 0.0, p + 1.0 - C::R)?;
                put(a, Machine::First, 2, 1.0, C::R)?;
                let b = &mut self.schedules[bi];
                put(b, Machine::Second, 2, 0.0, p + 1.0 - C::SMALL_R)?;
                put(b, Machine::First, 2, 1.0, C::SMALL_R)?;
                SortedCase::SecondJob
            }
            (_, Some(Approach::Single)) => self.single_step(job, p, total)?,
            (_, Some(Approach::Dual)) => {
                if p <= total * C::BETA || total <= C::SQRT6 {
                    let (ai, bi) = (self.a_role, 1 - self.a_role);
                    let a = fill_toward(
                        &mut self.schedules[ai],
                        job,
                        p,
                        C::A_SHARE * total,
                        C::R / 2.0 * total,
                    )?;
                    let b = fill_toward(
                        &mut self.schedules[bi],
                        job,
                        p,
                        C::B_SHARE * total,
                        (1.0 - C::B_SHARE) * total,
                    )?;
                    SortedCase::Small { a, b }
                } else {
                    self.swap_step(job, p, total)?
                }
            }
            (_, None) => unreachable!("approach is fixed by the second job"),
        };
        self.finish(job, p)?;
        Ok(case)
    }

    /// Single-solution rule, applied identically to both schedules.
    fn single_step(&mut self, job: usize, p: f64, total: f64) -> Result<SortedCase> {
        let mut sub = Subcase::Whole;
        for s in &mut self.schedules {
            sub = fill_toward(s, job, p, C::A_SHARE * total, C::R / 2.0 * total)?;
        }
        Ok(SortedCase::Single(sub))
    }

    fn swap_step(&mut self, job: usize, p: f64, total: f64) -> Result<SortedCase> {
        let (ai, bi) = (self.a_role, 1 - self.a_role);
        let [a1, a2] = self.schedules[ai].loads();
        let [b1, b2] = self.schedules[bi].loads();
        let gamma = (a2 + p).min(a1).min(C::B_SHARE * total);
        let half_r = C::R / 2.0 * total;
        let a_share = C::A_SHARE * total;
        ensure_le(b1, half_r, total, "swap: b1 <= R/2 W")?;
        ensure_le(a1, total - gamma, total, "swap: a1 <= W - gamma")?;
        ensure_le(b2, a_share, total, "swap: b2 <= (1-R/2) W")?;
        ensure_le(a2, gamma, total, "swap: a2 <= gamma")?;
        ensure_le(a_share, b1, total, "swap: (1-R/2) W <= b1")?;
        ensure_le(gamma, a1, total, "swap: gamma <= a1")?;

        let a = &mut self.schedules[ai];
        put(a, Machine::Second, job, a2, gamma)?;
        put(a, Machine::First, job, a1, total - gamma)?;
        let b = &mut self.schedules[bi];
        put(b, Machine::Second, job, b2, a_share)?;
        put(b, Machine::First, job, b1, half_r)?;
        self.a_role = bi;
        Ok(SortedCase::Swap { gamma })
    }

    fn finish(&mut self, job: usize, p: f64) -> Result<()> {
        self.stats.push(p);
        self.jobs = job;
        self.prev_size = p;
        for s in &self.schedules {
            ensure_le((s.assigned(job) - p).abs(), 0.0, p, "job assigned completely")?;
        }
        self.check_invariants()
    }

    /// Load invariants of the current approach, in normalized units.
    pub fn check_invariants(&self) -> Result<()> {
        let w = self.stats.total;
        let opt = self.stats.opt;
        let [a1, a2] = self.a().loads();
        let [b1, b2] = self.b().loads();
        ensure_le((a1 + a2 - w).abs(), 0.0, w, "A loads sum to W")?;
        ensure_le((b1 + b2 - w).abs(), 0.0, w, "B loads sum to W")?;
        if self.jobs < 2 {
            return Ok(());
        }
        let half_r = C::R / 2.0 * w;
        ensure_le(a1, C::R * opt, w, "A: a1 <= R*OPT")?;
        ensure_le(a2, C::A_SHARE * w, w, "A: a2 <= (1-R/2) W")?;
        match self.approach {
            Some(Approach::Single) => {
                ensure_le(1.0_f64.max(half_r), a1, w, "A: max(1, R/2 W) <= a1")?;
            }
            Some(Approach::Dual) => {
                ensure_le(C::R.max(half_r), a1, w, "A: max(R, R/2 W) <= a1")?;
                ensure_le(C::SMALL_R.max(0.6 * w), b1, w, "B: max(r, 0.6 W) <= b1")?;
                ensure_le(b1, C::SMALL_R * opt, w, "B: b1 <= r*OPT")?;
                ensure_le(b2, C::B_SHARE * w, w, "B: b2 <= 0.4 W")?;
            }
            None => return Err(Error::invariant("approach unset after two jobs")),
        }
        Ok(())
    }
}

fn fill_toward(
    s: &mut Schedule,
    job: usize,
    p: f64,
    m2_target: f64,
    m1_target: f64,
) -> Result<Subcase> {
    let (l1, l2) = (s.load(Machine::First), s.load(Machine::Second));
    if l2 + p <= m2_target {
        put(s, Machine::Second, job, l2, l2 + p)?;
        Ok(Subcase::Whole)
    } else {
        put(s, Machine::Second, job, l2, m2_target)?;
        put(s, Machine::First, job, l1, m1_target)?;
        Ok(Subcase::Split)
    }
}

impl OnlineAlgorithm for SortedState {
    fn name(&self) -> &'static str {
        "sorted"
    }

    fn solution_count(&self) -> usize {
        2
    }

    fn step(&mut self, size: f64) -> Result<String> {
        SortedState::step(self, size).map(|c| c.to_string())
    }

    /// Solutions in role order (A first), in the caller's units.
    fn snapshot(&self) -> SolutionSet {
        SolutionSet::new(
            vec![self.a().scaled(self.scale), self.b().scaled(self.scale)],
            self.stats.total * self.scale,
        )
    }

    fn per_solution_max(&self) -> Vec<f64> {
        vec![
            self.a().max_load() * self.scale,
            self.b().max_load() * self.scale,
        ]
    }

    fn stats(&self) -> PrefixStats {
        PrefixStats {
            total: self.stats.total * self.scale,
            p_max: self.stats.p_max * self.scale,
            opt: self.stats.opt * self.scale,
        }
    }

    fn jobs_seen(&self) -> usize {
        self.jobs
    }
}

/// Runs the sorted algorithm over `jobs` and validates the final schedules in
/// strict no-idle mode.
pub fn run_sorted(jobs: &[Job]) -> Result<(SolutionSet, Vec<AuditRecord>)> {
    let mut state = SortedState::new();
    let (set, audit) = online::run_audited(&mut state, jobs, None)?;
    if let Some((s, v)) = set.validate(jobs, ValidateOptions::strict()).first() {
        return Err(Error::invariant(format!("solution {s}: {v}")));
    }
    Ok((set, audit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::jobs_from_sizes;

    const EPS: f64 = 1e-12;

    #[test]
    fn constants_satisfy_their_identities() {
        let s6 = 6f64.sqrt();
        assert!((C::ALPHA - (s6 - 2.0)).abs() < EPS);
        assert!((C::R - (6.0 - 2.0 * s6)).abs() < EPS);
        assert!((C::SMALL_R - 3.0 * (s6 - 2.0)).abs() < EPS);
        assert!((C::BETA - (1.0 - s6 / 3.0)).abs() < EPS);
        assert!((C::ALPHA * C::ALPHA + 4.0 * C::ALPHA - 2.0).abs() < EPS);
        assert!((C::R * C::R - 12.0 * (C::R - 1.0)).abs() < EPS);
        assert!((C::SMALL_R - 3.0 * C::ALPHA).abs() < EPS);
        assert!((C::SMALL_R * C::SMALL_R + 12.0 * C::SMALL_R - 18.0).abs() < EPS);
        assert!((C::R + C::SMALL_R - C::ALPHA - 2.0).abs() < EPS);
        assert!((C::BETA - C::ALPHA / (2.0 + C::ALPHA)).abs() < EPS);
        assert!((C::SMALL_R - 3.0 * (2.0 - C::R) / 2.0).abs() < EPS);
    }

    #[test]
    fn two_unit_jobs_take_the_dual_approach() {
        let mut st = SortedState::new();
        st.step(1.0).unwrap();
        assert_eq!(st.step(1.0).unwrap(), SortedCase::SecondJob);
        assert_eq!(st.approach(), Some(Approach::Dual));
        assert!((st.a().load(Machine::First) - C::R).abs() < EPS);
        assert!((st.b().load(Machine::First) - C::SMALL_R).abs() < EPS);
        assert!((st.a().load(Machine::First) - 1.10102).abs() < 1e-5);
        assert!((st.b().load(Machine::First) - 1.34847).abs() < 1e-5);
    }

    #[test]
    fn small_second_job_takes_the_single_approach() {
        let mut st = SortedState::new();
        st.step(1.0).unwrap();
        // 0.3 <= (1 - R/2)·1.3 ~ 0.5843.
        assert_eq!(st.step(0.3).unwrap(), SortedCase::Single(Subcase::Whole));
        assert_eq!(st.approach(), Some(Approach::Single));
        assert_eq!(st.a().loads(), [1.0, 0.3]);
        assert_eq!(st.a(), st.b());
    }

    #[test]
    fn second_job_of_exactly_point_four_is_single() {
        let mut st = SortedState::new();
        st.step(10.0).unwrap();
        st.step(4.0).unwrap();
        assert_eq!(st.approach(), Some(Approach::Single));
    }

    #[test]
    fn three_unit_jobs_swap() {
        let mut st = SortedState::new();
        for _ in 0..2 {
            st.step(1.0).unwrap();
        }
        let case = st.step(1.0).unwrap();
        let SortedCase::Swap { gamma } = case else {
            panic!("expected a swap, got {case:?}");
        };
        // gamma = min{3 - R, R, 1.2} = R.
        assert!((gamma - C::R).abs() < EPS);
        assert!((st.b().load(Machine::First) - (3.0 - C::R)).abs() < 1e-9);
        assert!((st.b().load(Machine::First) - 1.89898).abs() < 1e-5);
        assert!(st.b().load(Machine::First) <= C::SMALL_R / 2.0 * 3.0);
        assert!((st.a().load(Machine::First) - C::R / 2.0 * 3.0).abs() < 1e-9);
        assert!((st.a().load(Machine::First) - 1.65153).abs() < 1e-5);
        let ratio = OnlineAlgorithm::makespan(&st) / st.stats().opt;
        assert!((ratio - C::R).abs() < 1e-9);
    }

    #[test]
    fn unsorted_input_is_rejected() {
        let mut st = SortedState::new();
        st.step(1.0).unwrap();
        st.step(0.5).unwrap();
        let before = st.a().clone();
        assert!(matches!(
            st.step(0.6),
            Err(Error::UnsortedInput { index: 3, .. })
        ));
        assert_eq!(st.a(), &before);
        // Ingestion noise within tolerance is accepted.
        st.step(0.5 + 1e-12).unwrap();
    }

    #[test]
    fn scale_invariance() {
        let (_, small) = run_sorted(&jobs_from_sizes(&[1.0, 1.0, 1.0]).unwrap()).unwrap();
        let (set, big) = run_sorted(&jobs_from_sizes(&[10.0, 10.0, 10.0]).unwrap()).unwrap();
        for (x, y) in small.iter().zip(&big) {
            assert!((x.ratio.unwrap() - y.ratio.unwrap()).abs() < 1e-12);
            assert_eq!(x.case_taken, y.case_taken);
        }
        assert!((set.total_size - 30.0).abs() < 1e-12);
    }

    #[test]
    fn tight_instance_reaches_the_ratio() {
        let jobs = jobs_from_sizes(&[1.0, 1.0, C::ALPHA]).unwrap();
        let (_, audit) = run_sorted(&jobs).unwrap();
        let last = audit.last().unwrap().ratio.unwrap();
        assert!((last - C::R).abs() < 1e-9, "ratio {last}");
    }
}
