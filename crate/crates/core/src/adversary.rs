//! Adaptive adversaries that force lower bounds on the competitive ratio of
//! any algorithm exposed through [`OnlineAlgorithm`].
//!
//! Each adversary reads the occupancy profile of the current solutions and
//! picks the next job accordingly. The reported ratio is the largest
//! `makespan / OPT` over all prefixes of the emitted sequence.

use crate::error::{Error, Result};
use crate::general::GeneralConstants;
use crate::model::{jobs_from_sizes, occupancy, Job, Occupancy, SolutionSet};
use crate::online::OnlineAlgorithm;
use crate::sorted::SortedConstants;
use crate::tol::{self, TOL};

/// Busy and doubly-busy time of every solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionProfile {
    pub measures: Vec<Occupancy>,
}

impl SolutionProfile {
    /// Profile of a snapshot. Fails when some solution's busy time does not
    /// add up to the total size, which means the snapshot is incomplete.
    pub fn of(set: &SolutionSet) -> Result<Self> {
        let w = set.total_size;
        let measures: Vec<Occupancy> = set.solutions.iter().map(occupancy).collect();
        for (k, o) in measures.iter().enumerate() {
            if (o.active + o.dual - w).abs() > tol::scaled(TOL, w) {
                return Err(Error::Profile(format!(
                    "solution {k}: active {} + dual {} != total size {w}",
                    o.active, o.dual
                )));
            }
        }
        Ok(SolutionProfile { measures })
    }

    pub fn duals(&self) -> Vec<f64> {
        self.measures.iter().map(|o| o.dual).collect()
    }

    /// Smallest active measure over solutions.
    pub fn min_active(&self) -> f64 {
        self.measures
            .iter()
            .map(|o| o.active)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Result of running an adversary.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryOutcome {
    /// The emitted input.
    pub jobs: Vec<Job>,
    /// `makespan / OPT` after each job of `jobs`.
    pub prefix_ratios: Vec<f64>,
    /// Largest prefix ratio.
    pub ratio: f64,
    /// The lower bound the construction guarantees against any algorithm.
    pub bound: f64,
    /// The profile the adversary's decision was based on.
    pub profile: SolutionProfile,
}

fn feed<A: OnlineAlgorithm + ?Sized>(alg: &mut A, size: f64, ratios: &mut Vec<f64>) -> Result<()> {
    alg.step(size)?;
    let opt = alg.stats().opt;
    ratios.push(alg.makespan() / opt);
    Ok(())
}

fn outcome(sizes: &[f64], prefix_ratios: Vec<f64>, bound: f64, profile: SolutionProfile) -> Result<AdversaryOutcome> {
    let ratio = prefix_ratios.iter().copied().fold(1.0, f64::max);
    Ok(AdversaryOutcome {
        jobs: jobs_from_sizes(sizes)?,
        prefix_ratios,
        ratio,
        bound,
        profile,
    })
}

/// Lower bound `1 + Ω(1/M)` for algorithms with `M` solutions.
///
/// Two jobs of size `M + 1` are followed by one job chosen from the gaps
/// between the sorted doubly-busy measures. The sorted variant keeps the
/// input non-increasing.
pub fn adversary_prop1<A: OnlineAlgorithm + ?Sized>(
    alg: &mut A,
    m: usize,
    sorted_variant: bool,
) -> Result<AdversaryOutcome> {
    if m == 0 || alg.solution_count() != m {
        return Err(Error::InvalidArgument(format!(
            "expected an algorithm with {m} solutions, got {}",
            alg.solution_count()
        )));
    }
    if alg.jobs_seen() != 0 {
        return Err(Error::InvalidArgument("the algorithm has already seen jobs".into()));
    }
    let big = (m + 1) as f64;
    let mut ratios = Vec::with_capacity(3);
    feed(alg, big, &mut ratios)?;
    feed(alg, big, &mut ratios)?;
    let profile = SolutionProfile::of(&alg.snapshot())?;

    let mut b = profile.duals();
    b.sort_by(f64::total_cmp);
    b.insert(0, 0.0);
    b.push(big);
    let alpha = if sorted_variant { 0.5 } else { 1.0 };
    let slack = tol::scaled(TOL, big);
    let j = (0..=m)
        .rev()
        .find(|&j| b[j + 1] - b[j] >= alpha - slack)
        .ok_or_else(|| Error::invariant("no gap of the required width between dual measures"))?;
    let p = 2.0 * big - 2.0 * b[j + 1] + alpha;
    if p <= 0.0 {
        return Err(Error::invariant(format!("third job has non-positive size {p}")));
    }
    if sorted_variant && p >= big {
        return Err(Error::invariant(format!(
            "sorted variant produced a third job {p} not below {big}"
        )));
    }
    feed(alg, p, &mut ratios)?;

    let mf = m as f64;
    let bound = if sorted_variant {
        1.0 + 1.0 / (6.0 * mf + 5.0)
    } else {
        1.0 + 1.0 / (4.0 * mf + 3.0)
    };
    outcome(&[big, big, p], ratios, bound, profile)
}

/// Lower bound `√5 − 1` for two solutions: sand of total size 1, then
/// `α = (√5 − 1)/2`, then possibly `φ`. Both continuations are evaluated on
/// forked copies of the algorithm and the one forcing the larger ratio is
/// reported.
pub fn adversary_prop2<A: OnlineAlgorithm + Clone>(alg: &mut A, grain: f64) -> Result<AdversaryOutcome> {
    if !(grain > 0.0 && grain <= 0.01) {
        return Err(Error::InvalidArgument(format!(
            "grain must be in (0, 0.01], got {grain}"
        )));
    }
    if alg.jobs_seen() != 0 {
        return Err(Error::InvalidArgument("the algorithm has already seen jobs".into()));
    }
    let n = (1.0 / grain - 1e-9).ceil() as usize;
    let sand = 1.0 / n as f64;
    let mut ratios = Vec::with_capacity(n + 2);
    for _ in 0..n {
        feed(alg, sand, &mut ratios)?;
    }
    let profile = SolutionProfile::of(&alg.snapshot())?;

    let alpha = GeneralConstants::ALPHA;
    let phi = GeneralConstants::PHI;
    feed(alg, alpha, &mut ratios)?;
    let stop = ratios.iter().copied().fold(1.0, f64::max);

    let mut fork = alg.clone();
    let mut cont = ratios.clone();
    feed(&mut fork, phi, &mut cont)?;

    let mut sizes = vec![sand; n];
    sizes.push(alpha);
    let chosen = if cont[n + 1] > stop {
        *alg = fork;
        sizes.push(phi);
        cont
    } else {
        ratios
    };
    outcome(&sizes, chosen, GeneralConstants::R, profile)
}

/// Lower bound `6 − 2√6` for two solutions on sorted inputs: two unit jobs,
/// then a third job of size 1 or `√6 − 2`, whichever forces more.
pub fn adversary_prop3<A: OnlineAlgorithm + Clone>(alg: &mut A) -> Result<AdversaryOutcome> {
    if alg.jobs_seen() != 0 {
        return Err(Error::InvalidArgument("the algorithm has already seen jobs".into()));
    }
    let mut ratios = Vec::with_capacity(3);
    feed(alg, 1.0, &mut ratios)?;
    feed(alg, 1.0, &mut ratios)?;
    let profile = SolutionProfile::of(&alg.snapshot())?;

    let small = SortedConstants::ALPHA;
    let mut fork = alg.clone();
    let mut with_small = ratios.clone();
    feed(&mut fork, small, &mut with_small)?;
    feed(alg, 1.0, &mut ratios)?;

    if with_small[2] > ratios[2] {
        *alg = fork;
        outcome(&[1.0, 1.0, small], with_small, SortedConstants::R, profile)
    } else {
        outcome(&[1.0, 1.0, 1.0], ratios, SortedConstants::R, profile)
    }
}
