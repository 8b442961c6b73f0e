//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.
//!
//! Ratios are compared with absolute tolerances. Load and invariant checks
//! use `TOL · max(1, W)` so workloads with totals in the thousands keep the
//! same relative slack as unit-scale ones.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parsched::adversary::{adversary_prop1, adversary_prop2};
use parsched::baseline::Projected;
use parsched::general::{unit_jobs_dual, DualState, GeneralConstants as G};
use parsched::ladder::MultiSolution;
use parsched::sorted::{Approach, SortedConstants as S, SortedState};
use parsched::{
    jobs_from_sizes, mcnaughton, validate, Machine, OnlineAlgorithm, ValidateOptions,
};

const RATIO_TOL: f64 = 1e-9;
const LOAD_TOL: f64 = 1e-9;
const SEQUENCES: usize = 10_000;
const LADDER_SEQUENCES: usize = 1_000;
const MAX_LEN: usize = 200;
const TIME_LIMIT: Duration = Duration::from_secs(30);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn log_uniform_sequence(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.gen_range(1..=MAX_LEN);
    (0..n).map(|_| 10f64.powf(rng.gen_range(-3.0..=3.0))).collect()
}

fn uniform_sequence(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.gen_range(1..=MAX_LEN);
    (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn slack(w: f64) -> f64 {
    LOAD_TOL * w.max(1.0)
}

/// Running `max(W/2, p_max)` computed here rather than taken from the library.
struct Oracle {
    w: f64,
    p_max: f64,
}

impl Oracle {
    fn new() -> Self {
        Oracle { w: 0.0, p_max: 0.0 }
    }

    fn push(&mut self, p: f64) -> f64 {
        self.w += p;
        self.p_max = self.p_max.max(p);
        (self.w / 2.0).max(self.p_max)
    }
}

fn best_of(maxes: &[f64]) -> f64 {
    maxes.iter().copied().fold(f64::INFINITY, f64::min)
}

struct GeneralRun {
    worst_ratio: f64,
    invariant_failures: usize,
    tight_checks: usize,
    elapsed: Duration,
}

fn general_runs() -> GeneralRun {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_ratio: f64 = 1.0;
    let mut invariant_failures = 0;
    let mut tight_checks = 0;
    for _ in 0..SEQUENCES {
        let sizes = log_uniform_sequence(&mut rng);
        let mut st = DualState::new();
        let mut oracle = Oracle::new();
        for &p in &sizes {
            if st.step(p).is_err() {
                invariant_failures += 1;
                break;
            }
            let opt = oracle.push(p);
            let w = oracle.w;
            worst_ratio = worst_ratio.max(best_of(&st.per_solution_max()) / opt);
            let (a1, b1) = (st.a().load(Machine::First), st.b().load(Machine::First));
            let (a2, b2) = (st.a().load(Machine::Second), st.b().load(Machine::Second));
            let e = slack(w);
            let n1 = w / G::PHI <= a1 + e && a1 <= G::R * opt + e && a2 <= w / G::PHI2 + e;
            let n2 = 2.0 * w / G::PHI2 <= b1 + e
                && b1 <= G::R * G::R * opt + e
                && b2 <= w / G::PHI3 + e;
            if !(n1 && n2) {
                invariant_failures += 1;
            }
            if w / 2.0 >= oracle.p_max {
                tight_checks += 1;
                if (a1 - w / G::PHI).abs() > e || (b1 - 2.0 * w / G::PHI2).abs() > e {
                    invariant_failures += 1;
                }
            }
        }
    }
    GeneralRun {
        worst_ratio,
        invariant_failures,
        tight_checks,
        elapsed: start.elapsed(),
    }
}

struct SortedRun {
    worst_ratio: f64,
    invariant_failures: usize,
    elapsed: Duration,
}

fn sorted_runs() -> SortedRun {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_ratio: f64 = 1.0;
    let mut invariant_failures = 0;
    for i in 0..SEQUENCES {
        let sizes = if i % 2 == 0 {
            sorted_desc(log_uniform_sequence(&mut rng))
        } else {
            let mut v = sorted_desc(uniform_sequence(&mut rng));
            v.insert(0, 1.0);
            v
        };
        let mut st = SortedState::new();
        let mut oracle = Oracle::new();
        for &p in &sizes {
            if st.step(p).is_err() {
                invariant_failures += 1;
                break;
            }
            let opt = oracle.push(p);
            worst_ratio = worst_ratio.max(best_of(&st.per_solution_max()) / opt);

            // Invariants in units of the first job.
            let scale = sizes[0];
            let (w, opt) = (oracle.w / scale, opt / scale);
            let e = slack(w);
            let (a1, a2) = (st.a().load(Machine::First), st.a().load(Machine::Second));
            let (b1, b2) = (st.b().load(Machine::First), st.b().load(Machine::Second));
            let ok = match st.approach() {
                None => true,
                Some(Approach::Single) => {
                    1f64.max(S::R / 2.0 * w) <= a1 + e
                        && a1 <= S::R * opt + e
                        && a2 <= (1.0 - S::R / 2.0) * w + e
                }
                Some(Approach::Dual) => {
                    S::R.max(S::R / 2.0 * w) <= a1 + e
                        && a1 <= S::R * opt + e
                        && S::SMALL_R.max(0.6 * w) <= b1 + e
                        && b1 <= S::SMALL_R * opt + e
                        && a2 <= (1.0 - S::R / 2.0) * w + e
                        && b2 <= 0.4 * w + e
                }
            };
            if !ok {
                invariant_failures += 1;
            }
        }
    }
    SortedRun {
        worst_ratio,
        invariant_failures,
        elapsed: start.elapsed(),
    }
}

fn max_prefix_ratio<A: OnlineAlgorithm>(alg: &mut A, sizes: &[f64]) -> f64 {
    let mut oracle = Oracle::new();
    let mut worst: f64 = 1.0;
    for &p in sizes {
        alg.step(p).unwrap();
        let opt = oracle.push(p);
        worst = worst.max(best_of(&alg.per_solution_max()) / opt);
    }
    worst
}

fn criterion_1(run: &GeneralRun) -> Outcome {
    let r = 5f64.sqrt() - 1.0;
    let tight = max_prefix_ratio(&mut DualState::new(), &[1.0, 1.0]);
    let pass = run.worst_ratio <= r + RATIO_TOL
        && tight >= r - RATIO_TOL
        && run.invariant_failures == 0
        && run.elapsed < TIME_LIMIT;
    outcome(
        pass,
        format!(
            "worst prefix ratio {:.12} <= {:.12}; {{1,1}} ratio {:.12}; {:.2?}",
            run.worst_ratio,
            r + RATIO_TOL,
            tight,
            run.elapsed
        ),
    )
}

fn criterion_2(run: &SortedRun) -> Outcome {
    let r = 6.0 - 2.0 * 6f64.sqrt();
    let family = max_prefix_ratio(&mut SortedState::new(), &[1.0, 1.0, 6f64.sqrt() - 2.0]);
    let pass = run.worst_ratio <= r + RATIO_TOL
        && family >= r - 1e-6
        && run.invariant_failures == 0
        && run.elapsed < TIME_LIMIT;
    outcome(
        pass,
        format!(
            "worst prefix ratio {:.12} <= {:.12}; {{1,1,sqrt6-2}} ratio {:.12}; {:.2?}",
            run.worst_ratio,
            r + RATIO_TOL,
            family,
            run.elapsed
        ),
    )
}

fn criterion_3(g: &GeneralRun, s: &SortedRun) -> Outcome {
    outcome(
        g.invariant_failures == 0 && s.invariant_failures == 0 && g.tight_checks > 0,
        format!(
            "general failures {}, sorted failures {}, tight equalities checked on {} prefixes",
            g.invariant_failures, s.invariant_failures, g.tight_checks
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0;
    let mut worst_gap: f64 = 0.0;
    for i in 0..SEQUENCES {
        let sizes = if i % 2 == 0 {
            uniform_sequence(&mut rng)
        } else {
            log_uniform_sequence(&mut rng)
        };
        let jobs = jobs_from_sizes(&sizes).unwrap();
        let w: f64 = sizes.iter().sum();
        let p_max = sizes.iter().copied().fold(0.0, f64::max);
        let opt = (w / 2.0).max(p_max);
        let s = mcnaughton(&jobs, opt).unwrap();
        violations += validate(&s, &jobs, ValidateOptions::strict().with_tol(slack(w))).violations.len();
        worst_gap = worst_gap.max((s.max_load() - opt).abs());
    }
    outcome(
        violations == 0 && worst_gap <= 1e-9,
        format!("{violations} violations, max |max load - opt| = {worst_gap:.3e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut details = Vec::new();
    let mut pass = true;
    for (delta, expected) in [(1.0, 9), (0.5, 36), (1.0 / 3.0, 81)] {
        let mut worst: f64 = 1.0;
        let mut count = 0;
        for _ in 0..LADDER_SEQUENCES {
            let sizes = log_uniform_sequence(&mut rng);
            let mut alg = MultiSolution::new(delta).unwrap();
            count = alg.solution_count();
            let mut oracle = Oracle::new();
            for &p in &sizes {
                alg.step(p).unwrap();
                let opt = oracle.push(p);
                let best = best_of(&alg.per_solution_max());
                pass &= best <= (1.0 + delta) * opt + RATIO_TOL;
                worst = worst.max(best / opt);
            }
        }
        pass &= count == expected;
        details.push(format!("delta={delta:.4}: {count} solutions, worst ratio {worst:.6}"));
    }
    outcome(pass, details.join("; "))
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut min_margin = f64::INFINITY;
    for m in 2..=8usize {
        let mf = m as f64;
        for sorted in [false, true] {
            let bound = if sorted {
                1.0 + 1.0 / (6.0 * mf + 5.0)
            } else {
                1.0 + 1.0 / (4.0 * mf + 3.0)
            };
            let mut runs = vec![adversary_prop1(
                &mut Projected::replicated(DualState::new(), m).unwrap(),
                m,
                sorted,
            )];
            for delta in [1.0, 1.0 / 3.0] {
                runs.push(adversary_prop1(
                    &mut MultiSolution::with_count(delta, m).unwrap(),
                    m,
                    sorted,
                ));
            }
            for run in runs {
                let Ok(out) = run else {
                    pass = false;
                    continue;
                };
                pass &= out.ratio >= bound - RATIO_TOL;
                if sorted {
                    pass &= out.jobs[2].size < mf + 1.0;
                }
                min_margin = min_margin.min(out.ratio - bound);
            }
        }
    }
    outcome(
        pass,
        format!("M=2..8, both variants, 3 algorithms each; smallest ratio - bound = {min_margin:.6}"),
    )
}

fn criterion_7() -> Outcome {
    let grain = 1e-4;
    let r = 5f64.sqrt() - 1.0;
    match adversary_prop2(&mut DualState::new(), grain) {
        Ok(out) => outcome(
            out.ratio >= r - 10.0 * grain && out.ratio <= r + RATIO_TOL,
            format!(
                "forced ratio {:.12} in [{:.12}, {:.12}] after {} jobs",
                out.ratio,
                r - 10.0 * grain,
                r + RATIO_TOL,
                out.jobs.len()
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    for n in 1..=50usize {
        let set = unit_jobs_dual(n);
        let jobs = jobs_from_sizes(&vec![1.0; n]).unwrap();
        pass &= set.makespan().unwrap() == (n as f64 / 2.0).max(1.0);
        pass &= set.validate(&jobs, ValidateOptions::strict()).is_empty();
    }
    outcome(pass, "n=1..50, exact makespan and strict validation".into())
}

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("parsched-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sched = dir.join("s.jsonl");
    let sched = sched.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["run", "--alg", "general", "--workload", "uniform", "--n", "100", "--seed", "7"],
        vec!["run", "--alg", "sorted", "--workload", "sorted_uniform", "--n", "100", "--seed", "3"],
        vec!["run", "--alg", "multi", "--delta", "0.5", "--workload", "log_uniform", "--n", "50", "--seed", "9"],
        vec!["run", "--alg", "general", "--workload", "log_uniform", "--n", "30", "--out-schedule", sched],
        vec!["validate", sched],
        vec!["gantt", sched],
        vec!["adversary", "--prop", "1", "--m", "5"],
        vec!["adversary", "--prop", "1", "--m", "4", "--alg", "multi", "--sorted-variant"],
        vec!["adversary", "--prop", "2", "--grain", "0.001"],
        vec!["adversary", "--prop", "3"],
        vec!["sweep", "--algs", "general,sorted,multi", "--n", "20,60", "--seeds", "4"],
        vec!["gen", "--workload", "log_uniform", "--n", "40", "--seed", "11"],
    ];
    let mut mismatches = Vec::new();
    for args in &commands {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_parsched"))
                .args(args)
                .env_remove("SCHED_TOL")
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        if !(a.status.success() && a.stdout == b.stdout && a.status == b.status) {
            mismatches.push(args[0..2].join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        mismatches.is_empty(),
        format!("{} commands run twice; mismatches: {mismatches:?}", commands.len()),
    )
}

fn main() -> ExitCode {
    println!("acceptance: ratio tol {RATIO_TOL:e}, load tol {LOAD_TOL:e}*max(1,W), time limit {TIME_LIMIT:?}");
    let general = general_runs();
    let sorted = sorted_runs();
    let results = [
        ("1 general algorithm bound is tight", criterion_1(&general)),
        ("2 sorted algorithm bound is tight", criterion_2(&sorted)),
        ("3 invariants after every step", criterion_3(&general, &sorted)),
        ("4 McNaughton optimality", criterion_4()),
        ("5 multi-solution guarantee", criterion_5()),
        ("6 adversary with M solutions", criterion_6()),
        ("7 sand adversary against general", criterion_7()),
        ("8 unit-jobs construction", criterion_8()),
        ("9 CLI determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
