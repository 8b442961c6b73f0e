use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use parsched::adversary::{adversary_prop1, adversary_prop2, adversary_prop3, AdversaryOutcome};
use parsched::baseline::{AnyAlgorithm, Projected};
use parsched::ladder::MultiSolution;
use parsched::online::{max_ratio, run_audited, write_audit_csv};
use parsched::schedule_file::{read_schedule_file, write_schedule_file, ScheduleFile};
use parsched::svg::render_gantt;
use parsched::workload::{generate, read_workload, write_workload, Family, Workload};
use parsched::{tol, Error, OnlineAlgorithm, ValidateOptions};

#[derive(Parser)]
#[command(name = "parsched", version, about = "Online preemptive scheduling on two machines with parallel solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm on a workload and print the per-prefix audit as CSV.
    Run(RunArgs),
    /// Run a lower-bound construction against an algorithm.
    Adversary(AdversaryArgs),
    /// Check a schedule file and list every violation.
    Validate {
        file: PathBuf,
    },
    /// Render a schedule file as an SVG Gantt chart.
    Gantt {
        file: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run algorithms over a grid of generated workloads and summarize.
    Sweep(SweepArgs),
    /// Write a generated workload file.
    Gen {
        #[command(flatten)]
        workload: WorkloadArgs,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WorkloadArgs {
    /// Family name (uniform, log_uniform, sorted_uniform, sand, adversarial)
    /// or the path of a workload file.
    #[arg(long, default_value = "uniform")]
    workload: String,
    /// Comma-separated sizes; overrides --workload.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, requires = "hi")]
    lo: Option<f64>,
    #[arg(long, requires = "lo")]
    hi: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    /// general, sorted, multi, unit or list.
    #[arg(long, default_value = "general")]
    alg: String,
    #[command(flatten)]
    workload: WorkloadArgs,
    /// Accuracy of the multi-solution algorithm.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Sort the workload by non-increasing size first.
    #[arg(long)]
    sort: bool,
    /// Write the final solutions to this schedule file.
    #[arg(long)]
    out_schedule: Option<PathBuf>,
    /// Write the audit here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdversaryArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    prop: u8,
    /// Algorithm under attack; defaults to general (1, 2) or sorted (3).
    #[arg(long)]
    alg: Option<String>,
    /// Number of solutions for construction 1.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Keep the input of construction 1 non-increasing.
    #[arg(long)]
    sorted_variant: bool,
    /// Sand grain size for construction 2.
    #[arg(long, default_value_t = 1e-3)]
    grain: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Save the emitted jobs as a workload file.
    #[arg(long)]
    out_workload: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "general,sorted")]
    algs: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "uniform,log_uniform")]
    families: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_value = "100")]
    n: Vec<usize>,
    /// Seeds 0..seeds.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Invariant(String),
    /// Validation found defects; the report is already printed.
    Defects,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_invariant_violation() {
            Failure::Invariant(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = tol::from_env()
        .map_err(Failure::Usage)
        .and_then(|t| dispatch(cli.command, t));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Defects) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command, tol: f64) -> CliResult {
    match command {
        Command::Run(args) => run(args, tol),
        Command::Adversary(args) => adversary(args),
        Command::Validate { file } => validate(&file, tol),
        Command::Gantt { file, out } => gantt(&file, out.as_deref()),
        Command::Sweep(args) => sweep(args, tol),
        Command::Gen { workload, out } => {
            let w = load_workload(&workload)?;
            let mut sink = output(out.as_deref())?;
            write_workload(&mut sink, &w)?;
            sink.flush()?;
            Ok(())
        }
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_workload(args: &WorkloadArgs) -> Result<Workload, Failure> {
    if let Some(sizes) = &args.sizes {
        return Ok(Workload::explicit("explicit", sizes)?);
    }
    let range = args.lo.zip(args.hi);
    match args.workload.parse::<Family>() {
        Ok(family) => Ok(generate(family, args.n, args.seed, range)?),
        Err(_) if Path::new(&args.workload).exists() => {
            let path = Path::new(&args.workload);
            read_workload(open(path)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        Err(e) => Err(Failure::Usage(format!("{e} and no such file"))),
    }
}

fn validation_mode(alg: &dyn OnlineAlgorithm, tol: f64) -> ValidateOptions {
    let opts = if alg.no_idle() {
        ValidateOptions::strict()
    } else {
        ValidateOptions::relaxed()
    };
    opts.with_tol(tol)
}

fn run(args: RunArgs, tol: f64) -> CliResult {
    let mut workload = load_workload(&args.workload)?;
    if args.sort {
        let mut sizes = workload.sizes();
        sizes.sort_by(|a, b| b.total_cmp(a));
        workload.jobs = parsched::jobs_from_sizes(&sizes)?;
    }
    let mut alg = AnyAlgorithm::from_name(&args.alg, args.delta)?;
    let opts = validation_mode(&alg, tol);
    let (set, audit) = run_audited(&mut alg, &workload.jobs, Some(opts))?;

    let mut out = output(args.out.as_deref())?;
    writeln!(
        out,
        "# algorithm={} workload={} family={} seed={} solutions={} tol={tol:e}",
        alg.name(),
        workload.name,
        workload.family,
        workload.seed,
        alg.solution_count()
    )?;
    write_audit_csv(&mut out, &audit)?;
    writeln!(out, "# max_ratio={}", max_ratio(&audit))?;
    out.flush()?;

    if let Some(path) = &args.out_schedule {
        let file = ScheduleFile::new(alg.name(), Some(workload.seed), alg.no_idle(), workload.jobs, &set);
        let mut sink = BufWriter::new(File::create(path)?);
        write_schedule_file(&mut sink, &file)?;
        sink.flush()?;
    }
    Ok(())
}

fn adversary(args: AdversaryArgs) -> CliResult {
    let default = if args.prop == 3 { "sorted" } else { "general" };
    let name = args.alg.as_deref().unwrap_or(default);
    let outcome: AdversaryOutcome = match args.prop {
        1 => {
            let mut alg = if name == "multi" {
                let inner = AnyAlgorithm::Multi(MultiSolution::with_count(args.delta, args.m)?);
                Projected::identity(inner)
            } else {
                Projected::replicated(AnyAlgorithm::from_name(name, args.delta)?, args.m)?
            };
            adversary_prop1(&mut alg, args.m, args.sorted_variant)?
        }
        2 => adversary_prop2(&mut pair(name, args.delta)?, args.grain)?,
        _ => adversary_prop3(&mut pair(name, args.delta)?)?,
    };

    let mut out = output(None)?;
    writeln!(out, "# prop={} alg={name} jobs={}", args.prop, outcome.jobs.len())?;
    writeln!(out, "prefix,size,ratio")?;
    for (job, r) in outcome.jobs.iter().zip(&outcome.prefix_ratios) {
        writeln!(out, "{},{},{}", job.index, job.size, r)?;
    }
    writeln!(out, "# forced_ratio={}", outcome.ratio)?;
    writeln!(out, "# bound={}", outcome.bound)?;
    out.flush()?;

    if let Some(path) = &args.out_workload {
        let w = Workload {
            name: format!("prop{}-{name}", args.prop),
            family: Family::Adversarial,
            seed: 0,
            range: None,
            jobs: outcome.jobs,
        };
        let mut sink = BufWriter::new(File::create(path)?);
        write_workload(&mut sink, &w)?;
        sink.flush()?;
    }
    Ok(())
}

/// Single-solution algorithms are attacked as a pair of identical copies.
fn pair(name: &str, delta: f64) -> Result<Projected<AnyAlgorithm>, Failure> {
    let alg = AnyAlgorithm::from_name(name, delta)?;
    Ok(if alg.solution_count() == 1 {
        Projected::new(alg, vec![0, 0])?
    } else {
        Projected::identity(alg)
    })
}

fn validate(path: &Path, tol: f64) -> CliResult {
    let file = read_schedule_file(open(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let violations = file.validate(tol);
    let mut out = output(None)?;
    for (s, v) in &violations {
        writeln!(out, "solution {s}: {v}")?;
    }
    if violations.is_empty() {
        let best = file
            .solutions
            .iter()
            .map(|s| s.max_load())
            .fold(f64::INFINITY, f64::min);
        writeln!(
            out,
            "valid: {} solution(s), {} job(s), makespan {best}",
            file.solutions.len(),
            file.jobs.len()
        )?;
        out.flush()?;
        Ok(())
    } else {
        writeln!(out, "{} violation(s)", violations.len())?;
        out.flush()?;
        Err(Failure::Defects)
    }
}

fn gantt(path: &Path, out_path: Option<&Path>) -> CliResult {
    let file = read_schedule_file(open(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let title = match file.seed {
        Some(seed) => format!("{} (seed {seed})", file.algorithm),
        None => file.algorithm.clone(),
    };
    let mut out = output(out_path)?;
    out.write_all(render_gantt(&title, &file.solutions).as_bytes())?;
    out.flush()?;
    Ok(())
}

struct SweepRow {
    alg: String,
    family: Family,
    n: usize,
    seed: u64,
    solutions: usize,
    max_ratio: f64,
    opt: f64,
    makespan: f64,
}

fn sweep_one(alg: &str, family: Family, n: usize, seed: u64, delta: f64, tol: f64) -> Result<SweepRow, Failure> {
    let mut jobs = generate(family, n, seed, None)?.jobs;
    if alg == "sorted" {
        let mut sizes: Vec<f64> = jobs.iter().map(|j| j.size).collect();
        sizes.sort_by(|a, b| b.total_cmp(a));
        jobs = parsched::jobs_from_sizes(&sizes)?;
    }
    let mut a = AnyAlgorithm::from_name(alg, delta)?;
    let opts = validation_mode(&a, tol);
    let (_, audit) = run_audited(&mut a, &jobs, Some(opts))?;
    let last = audit.last();
    Ok(SweepRow {
        alg: alg.to_string(),
        family,
        n,
        seed,
        solutions: a.solution_count(),
        max_ratio: max_ratio(&audit),
        opt: last.map_or(0.0, |r| r.opt),
        makespan: last.map_or(0.0, |r| r.makespan),
    })
}

fn sweep(args: SweepArgs, tol: f64) -> CliResult {
    for alg in &args.algs {
        AnyAlgorithm::from_name(alg, args.delta)?;
    }
    let mut grid = Vec::new();
    for alg in &args.algs {
        for &family in &args.families {
            for &n in &args.n {
                for seed in 0..args.seeds {
                    grid.push((alg.as_str(), family, n, seed));
                }
            }
        }
    }
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(alg, family, n, seed)| sweep_one(alg, family, n, seed, args.delta, tol))
        .collect::<Result<_, _>>()?;

    let mut out = output(args.out.as_deref())?;
    writeln!(out, "# seeds=0..{} delta={}", args.seeds, args.delta)?;
    writeln!(out, "algorithm,family,n,seed,solutions,max_ratio,opt,makespan")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.alg, r.family, r.n, r.seed, r.solutions, r.max_ratio, r.opt, r.makespan
        )?;
    }
    out.flush()?;
    Ok(())
}
