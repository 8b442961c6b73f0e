//! Job sequences: seeded generation and a line-delimited JSON file format.
//!
//! A workload file starts with a header line
//! `{"kind":"workload","name":..,"family":..,"seed":..,"n":..}` followed by one
//! `{"kind":"job","index":i,"size":s}` line per job. Sizes are written with 17
//! significant digits so files round-trip exactly.
//!
//! Random families draw from [`ChaCha8Rng`] seeded with `seed_from_u64`, whose
//! output is fixed across platforms and releases.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::general::GeneralConstants;
use crate::model::{jobs_from_sizes, Job};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Sizes given by hand.
    Explicit,
    /// Uniform on `(lo, hi]`, default `(0, 1]`.
    Uniform,
    /// Log-uniform on `[lo, hi]`, default `[1e-3, 1e3]`.
    LogUniform,
    /// A job of size `hi` followed by uniform `(lo, hi]` sizes in
    /// non-increasing order.
    SortedUniform,
    /// `n` jobs of size `1/n`.
    Sand,
    /// `n` sand jobs of total size 1, then `(√5−1)/2`, then the golden ratio.
    Adversarial,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Explicit,
        Family::Uniform,
        Family::LogUniform,
        Family::SortedUniform,
        Family::Sand,
        Family::Adversarial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Explicit => "explicit",
            Family::Uniform => "uniform",
            Family::LogUniform => "log_uniform",
            Family::SortedUniform => "sorted_uniform",
            Family::Sand => "sand",
            Family::Adversarial => "adversarial",
        }
    }

    /// Default size range of the random families.
    pub fn default_range(self) -> Option<(f64, f64)> {
        match self {
            Family::Uniform | Family::SortedUniform => Some((0.0, 1.0)),
            Family::LogUniform => Some((1e-3, 1e3)),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown workload family {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Workload {
    pub name: String,
    pub family: Family,
    pub seed: u64,
    /// Size range used by the random families.
    pub range: Option<(f64, f64)>,
    pub jobs: Vec<Job>,
}

impl Workload {
    pub fn explicit(name: impl Into<String>, sizes: &[f64]) -> Result<Self> {
        Ok(Workload {
            name: name.into(),
            family: Family::Explicit,
            seed: 0,
            range: None,
            jobs: jobs_from_sizes(sizes)?,
        })
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.size).collect()
    }
}

/// Generates `n` jobs of a family. `range` overrides the default size range
/// of the random families and is ignored by the others.
pub fn generate(family: Family, n: usize, seed: u64, range: Option<(f64, f64)>) -> Result<Workload> {
    let range = family.default_range().map(|d| range.unwrap_or(d));
    if let Some((lo, hi)) = range {
        let ok = lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo;
        if !ok || (family == Family::LogUniform && lo <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid size range [{lo}, {hi}] for {family}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // 1 - [0, 1) is (0, 1], so sizes are never 0.
    let mut unit = move || 1.0 - rng.gen::<f64>();
    let sizes: Vec<f64> = match family {
        Family::Explicit => {
            return Err(Error::InvalidArgument(
                "explicit workloads are given, not generated".into(),
            ))
        }
        Family::Uniform => {
            let (lo, hi) = range.unwrap();
            (0..n).map(|_| lo + (hi - lo) * unit()).collect()
        }
        Family::LogUniform => {
            let (lo, hi) = range.unwrap();
            let (a, b) = (lo.log10(), hi.log10());
            (0..n).map(|_| 10f64.powf(b - (b - a) * unit())).collect()
        }
        Family::SortedUniform => {
            let (lo, hi) = range.unwrap();
            let mut rest: Vec<f64> = (1..n).map(|_| lo + (hi - lo) * unit()).collect();
            rest.sort_by(|x, y| y.total_cmp(x));
            let mut v = Vec::with_capacity(n);
            if n > 0 {
                v.push(hi);
            }
            v.extend(rest);
            v
        }
        Family::Sand => vec![1.0 / n as f64; n],
        Family::Adversarial => {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "adversarial workloads need at least one sand job".into(),
                ));
            }
            let mut v = vec![1.0 / n as f64; n];
            v.push(GeneralConstants::ALPHA);
            v.push(GeneralConstants::PHI);
            v
        }
    };
    Ok(Workload {
        name: format!("{family}-n{n}-s{seed}"),
        family,
        seed,
        range,
        jobs: jobs_from_sizes(&sizes)?,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Line {
    Workload {
        name: String,
        family: Family,
        seed: u64,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
    },
    Job {
        index: usize,
        size: f64,
    },
}

/// A size with 17 significant digits, e.g. `1.0000000000000000e0`.
pub fn format_size(size: f64) -> String {
    format!("{size:.16e}")
}

pub(crate) fn job_line(job: &Job) -> String {
    format!(
        "{{\"kind\":\"job\",\"index\":{},\"size\":{}}}",
        job.index,
        format_size(job.size)
    )
}

pub fn write_workload<W: Write>(mut w: W, workload: &Workload) -> Result<()> {
    let header = Line::Workload {
        name: workload.name.clone(),
        family: workload.family,
        seed: workload.seed,
        n: workload.jobs.len(),
        lo: workload.range.map(|r| r.0),
        hi: workload.range.map(|r| r.1),
    };
    let header = serde_json::to_string(&header).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w, "{header}")?;
    for job in &workload.jobs {
        writeln!(w, "{}", job_line(job))?;
    }
    Ok(())
}

pub fn workload_to_string(workload: &Workload) -> String {
    let mut out = Vec::new();
    write_workload(&mut out, workload).expect("writing to memory");
    String::from_utf8(out).expect("workload files are UTF-8")
}

/// Checks one job line against the expected index and size contract.
pub(crate) fn parse_job(line_no: usize, index: usize, size: f64, expected: usize) -> Result<Job> {
    if index != expected {
        return Err(Error::parse(
            line_no,
            format!("expected job index {expected}, found {index}"),
        ));
    }
    Job::new(index, size).map_err(|e| Error::parse(line_no, e.to_string()))
}

pub fn read_workload<R: BufRead>(r: R) -> Result<Workload> {
    let mut header: Option<(String, Family, u64, usize, Option<(f64, f64)>)> = None;
    let mut jobs: Vec<Job> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line =
            serde_json::from_str(&line).map_err(|e| Error::parse(line_no, e.to_string()))?;
        match parsed {
            Line::Workload {
                name,
                family,
                seed,
                n,
                lo,
                hi,
            } => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "second workload header"));
                }
                let range = match (lo, hi) {
                    (Some(lo), Some(hi)) => Some((lo, hi)),
                    (None, None) => None,
                    _ => return Err(Error::parse(line_no, "lo and hi must be given together")),
                };
                header = Some((name, family, seed, n, range));
            }
            Line::Job { index, size } => {
                let Some((_, family, ..)) = &header else {
                    return Err(Error::parse(line_no, "job before the workload header"));
                };
                let job = parse_job(line_no, index, size, jobs.len() + 1)?;
                if *family == Family::SortedUniform {
                    if let Some(prev) = jobs.last() {
                        if job.size > prev.size {
                            return Err(Error::parse(
                                line_no,
                                format!(
                                    "sorted_uniform workload is not non-increasing: {} after {}",
                                    job.size, prev.size
                                ),
                            ));
                        }
                    }
                }
                jobs.push(job);
            }
        }
    }
    let Some((name, family, seed, n, range)) = header else {
        return Err(Error::parse(0, "missing workload header"));
    };
    if n != jobs.len() {
        return Err(Error::parse(
            0,
            format!("header announces {n} jobs but {} were read", jobs.len()),
        ));
    }
    Ok(Workload {
        name,
        family,
        seed,
        range,
        jobs,
    })
}

pub fn workload_from_str(text: &str) -> Result<Workload> {
    read_workload(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        for family in [
            Family::Uniform,
            Family::LogUniform,
            Family::SortedUniform,
            Family::Sand,
            Family::Adversarial,
        ] {
            let a = generate(family, 50, 7, None).unwrap();
            let b = generate(family, 50, 7, None).unwrap();
            assert_eq!(a, b);
            assert!(a.jobs.iter().all(|j| j.size > 0.0));
        }
        assert_ne!(
            generate(Family::Uniform, 5, 1, None).unwrap().jobs,
            generate(Family::Uniform, 5, 2, None).unwrap().jobs
        );
    }

    #[test]
    fn families_respect_their_ranges() {
        let w = generate(Family::LogUniform, 1000, 3, None).unwrap();
        assert!(w.jobs.iter().all(|j| (1e-3..=1e3).contains(&j.size)));
        let s = generate(Family::SortedUniform, 100, 3, None).unwrap();
        assert_eq!(s.jobs[0].size, 1.0);
        assert!(s.jobs.windows(2).all(|w| w[0].size >= w[1].size));
        let sand = generate(Family::Sand, 4, 0, None).unwrap();
        assert_eq!(sand.sizes(), vec![0.25; 4]);
        assert_eq!(generate(Family::Adversarial, 10, 0, None).unwrap().jobs.len(), 12);
    }

    #[test]
    fn file_round_trip() {
        let w = generate(Family::LogUniform, 20, 11, None).unwrap();
        let text = workload_to_string(&w);
        assert!(text.starts_with("{\"kind\":\"workload\""));
        assert_eq!(workload_from_str(&text).unwrap(), w);
        let e = Workload::explicit("hand", &[0.1, 1.0 / 3.0]).unwrap();
        assert_eq!(workload_from_str(&workload_to_string(&e)).unwrap(), e);
    }

    #[test]
    fn zero_size_is_a_parse_error() {
        let text = "{\"kind\":\"workload\",\"name\":\"x\",\"family\":\"explicit\",\"seed\":0,\"n\":2}\n\
                    {\"kind\":\"job\",\"index\":1,\"size\":1.0}\n\
                    {\"kind\":\"job\",\"index\":2,\"size\":0.0}\n";
        assert!(matches!(
            workload_from_str(text),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn unsorted_sorted_family_is_a_parse_error() {
        let text = "{\"kind\":\"workload\",\"name\":\"x\",\"family\":\"sorted_uniform\",\"seed\":0,\"n\":2}\n\
                    {\"kind\":\"job\",\"index\":1,\"size\":0.5}\n\
                    {\"kind\":\"job\",\"index\":2,\"size\":0.7}\n";
        assert!(matches!(
            workload_from_str(text),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn header_must_come_first_and_match() {
        let job_first = "{\"kind\":\"job\",\"index\":1,\"size\":1.0}\n";
        assert!(matches!(workload_from_str(job_first), Err(Error::Parse { line: 1, .. })));
        let short = "{\"kind\":\"workload\",\"name\":\"x\",\"family\":\"explicit\",\"seed\":0,\"n\":2}\n\
                     {\"kind\":\"job\",\"index\":1,\"size\":1.0}\n";
        assert!(workload_from_str(short).is_err());
        assert!(workload_from_str("not json\n").is_err());
    }
}
