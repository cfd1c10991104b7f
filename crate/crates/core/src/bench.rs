//! Random instances and the experiment runner behind the benchmark report.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heuristics::{gap, HeuristicConfig, DEFAULT_ITERATIONS};
use crate::matching::CompatGraph;
use crate::model::{Instance, Mode, Time};
use crate::oracle::{brute_force_solve, DEFAULT_ORACLE_LIMIT};
use crate::solver::{solve, Algorithm, SolveOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    /// Edge probability in percent, in `(0, 100]`.
    pub density_pct: f64,
    /// Inclusive range of processing times.
    pub p_range: (Time, Time),
    pub s_choices: Vec<Time>,
    pub mode: Mode,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.n == 0 {
            return bad("n must be positive");
        }
        if self.m == 0 {
            return bad("m must be positive");
        }
        if !(self.density_pct > 0.0 && self.density_pct <= 100.0) {
            return bad("density must be in (0, 100]");
        }
        if self.p_range.0 == 0 || self.p_range.0 > self.p_range.1 {
            return bad("processing time range must satisfy 1 <= min <= max");
        }
        if self.s_choices.is_empty() {
            return bad("at least one setup time is required");
        }
        Ok(())
    }
}

/// Random instance: every pair is compatible independently with
/// probability `density_pct / 100`, processing times are uniform over
/// `p_range` and the setup is drawn uniformly from `s_choices`.
pub fn generate_instance(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let prob = spec.density_pct / 100.0;
    let mut edges = Vec::new();
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            if rng.gen_bool(prob) {
                edges.push((i, j));
            }
        }
    }
    let p = (0..spec.n)
        .map(|_| rng.gen_range(spec.p_range.0..=spec.p_range.1))
        .collect();
    let s = *spec.s_choices.choose(&mut rng).unwrap();
    Instance::new(p, spec.m, s, spec.mode, CompatGraph::new(spec.n, &edges)?)
}

/// Experiment grid read from a `key = value` file.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub machines: Vec<usize>,
    pub densities: Vec<f64>,
    pub p_min: Time,
    pub p_max: Time,
    pub s_set: Vec<Time>,
    pub iters: usize,
    pub seed: u64,
    pub methods: Vec<Algorithm>,
    pub instances_per_cell: usize,
    pub mode: Mode,
    pub oracle_limit: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![10],
            machines: vec![2, 3, 4, 5],
            densities: vec![12.5, 25.0, 50.0, 75.0, 100.0],
            p_min: 10,
            p_max: 100,
            s_set: vec![2, 3, 4],
            iters: DEFAULT_ITERATIONS,
            seed: 1,
            methods: vec![Algorithm::H1, Algorithm::H2],
            instances_per_cell: 50,
            mode: Mode::Max,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Config(format!("{key}: cannot parse `{t}`")))
        })
        .collect()
}

fn one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse `{}`", value.trim())))
}

impl BenchConfig {
    /// Parses `key = value` lines; `#` starts a comment. Lists are comma or
    /// space separated. Missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = BenchConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let key = key.trim();
            match key {
                "sizes" => cfg.sizes = list(key, value)?,
                "machines" => cfg.machines = list(key, value)?,
                "densities" => cfg.densities = list(key, value)?,
                "p_min" => cfg.p_min = one(key, value)?,
                "p_max" => cfg.p_max = one(key, value)?,
                "s_set" => cfg.s_set = list(key, value)?,
                "iters" => cfg.iters = one(key, value)?,
                "seed" => cfg.seed = one(key, value)?,
                "methods" => {
                    cfg.methods = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|t| !t.is_empty())
                        .map(str::parse)
                        .collect::<Result<_>>()?
                }
                "instances_per_cell" => cfg.instances_per_cell = one(key, value)?,
                "mode" => cfg.mode = value.trim().parse()?,
                "oracle_limit" => cfg.oracle_limit = one(key, value)?,
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", i + 1))),
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("methods must not be empty".into()));
        }
        if self.iters == 0 {
            return Err(Error::Config("iters must be at least 1".into()));
        }
        for spec in self.specs(0) {
            spec.validate()?;
        }
        Ok(())
    }

    /// One spec per (size, machines, density) cell, with a placeholder seed.
    pub fn specs(&self, seed: u64) -> Vec<GenSpec> {
        let mut out = Vec::new();
        for &n in &self.sizes {
            for &m in &self.machines {
                for &d in &self.densities {
                    out.push(GenSpec {
                        n,
                        m,
                        density_pct: d,
                        p_range: (self.p_min, self.p_max),
                        s_choices: self.s_set.clone(),
                        mode: self.mode,
                        seed,
                    });
                }
            }
        }
        out
    }
}

/// Where the GAP denominator came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BsSource {
    Oracle,
    BestOfMethods,
}

impl BsSource {
    pub fn as_str(self) -> &'static str {
        match self {
            BsSource::Oracle => "oracle",
            BsSource::BestOfMethods => "best-of-methods",
        }
    }
}

/// Best-known value: the exact optimum when the instance is small enough
/// for the oracle, otherwise the best value among `results`.
pub fn bs_policy(inst: &Instance, results: &[Time], oracle_limit: usize) -> Result<(Time, BsSource)> {
    if inst.job_count() <= oracle_limit {
        return Ok((brute_force_solve(inst, oracle_limit)?.optimum, BsSource::Oracle));
    }
    results
        .iter()
        .copied()
        .min()
        .map(|v| (v, BsSource::BestOfMethods))
        .ok_or_else(|| Error::Config("no method produced a result".into()))
}

/// Outcome of one method on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub cell: usize,
    pub n: usize,
    pub instance: usize,
    pub method: Algorithm,
    /// `None` when the method does not apply to the instance.
    pub cmax: Option<Time>,
    pub seconds: f64,
    pub best: Time,
    pub bs_source: BsSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub mode: Mode,
    pub method: Algorithm,
    /// Instances the method ran on.
    pub instances: usize,
    pub skipped: usize,
    /// Instances where the method reached the best-known value.
    pub sol_count: usize,
    pub gap: Option<Stats>,
    pub time: Option<Stats>,
    pub bs_source: BsSource,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Stats {
    /// Order-independent: values are sorted before summing.
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        Some(Stats {
            min: v[0],
            mean: mean.clamp(v[0], v[v.len() - 1]),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
    pub samples: Vec<Sample>,
}

pub const CSV_HEADER: &str =
    "n,m,density,mode,method,instances,sol_count,gap_min,gap_mean,gap_max,time_min_s,time_mean_s,time_max_s";

impl RunReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let fmt =
            |s: Option<Stats>, f: fn(&Stats) -> f64| s.map(|s| format!("{:.6}", f(&s))).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.n,
                r.m,
                r.density,
                r.mode,
                r.method,
                r.instances,
                r.sol_count,
                fmt(r.gap, |s| s.min),
                fmt(r.gap, |s| s.mean),
                fmt(r.gap, |s| s.max),
                fmt(r.time, |s| s.min),
                fmt(r.time, |s| s.mean),
                fmt(r.time, |s| s.max),
            );
        }
        out
    }

    /// Mean GAP of one method over all instances it ran on, optionally
    /// restricted to one job count.
    pub fn mean_gap(&self, method: Algorithm, n: Option<usize>) -> Option<f64> {
        let gaps: Vec<f64> = self
            .samples
            .iter()
            .filter(|s| s.method == method)
            .filter(|s| n.is_none_or(|n| s.n == n))
            .filter_map(|s| s.cmax.map(|c| gap(c, s.best).unwrap()))
            .collect();
        Stats::of(&gaps).map(|s| s.mean)
    }
}

/// Derives the seed of instance `index` in cell `cell`.
fn instance_seed(seed: u64, cell: usize, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell as u64);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

/// Runs every method on `instances_per_cell` instances of every spec.
/// Instances run in parallel; each solve is timed on its own.
pub fn run_experiment(
    specs: &[GenSpec],
    methods: &[Algorithm],
    instances_per_cell: usize,
    iters: usize,
    oracle_limit: usize,
) -> Result<RunReport> {
    if methods.is_empty() {
        return Err(Error::Config("methods must not be empty".into()));
    }
    for s in specs {
        s.validate()?;
    }
    let jobs: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|c| (0..instances_per_cell).map(move |i| (c, i)))
        .collect();
    let per_instance: Vec<Vec<Sample>> = jobs
        .par_iter()
        .map(|&(cell, index)| {
            let seed = instance_seed(specs[cell].seed, cell, index);
            let spec = GenSpec {
                seed,
                ..specs[cell].clone()
            };
            let inst = generate_instance(&spec)?;
            let opts = SolveOptions {
                heuristic: HeuristicConfig::new(iters, seed)?,
                oracle_limit,
            };
            let mut samples = Vec::with_capacity(methods.len());
            for &method in methods {
                let start = Instant::now();
                let outcome = solve(&inst, method, &opts);
                let seconds = start.elapsed().as_secs_f64();
                let cmax = match outcome {
                    Ok(s) => Some(s.cmax),
                    Err(
                        Error::WrongSubproblem { .. } | Error::OracleLimit { .. } | Error::UnsupportedMode(_),
                    ) => None,
                    Err(e) => return Err(e),
                };
                samples.push(Sample {
                    cell,
                    n: spec.n,
                    instance: index,
                    method,
                    cmax,
                    seconds,
                    best: 0,
                    bs_source: BsSource::Oracle,
                });
            }
            let values: Vec<Time> = samples.iter().filter_map(|s| s.cmax).collect();
            let (best, source) = bs_policy(&inst, &values, oracle_limit)?;
            for s in &mut samples {
                s.best = best;
                s.bs_source = source;
            }
            Ok(samples)
        })
        .collect::<Result<_>>()?;
    let samples: Vec<Sample> = per_instance.into_iter().flatten().collect();

    let mut rows = Vec::new();
    for (cell, spec) in specs.iter().enumerate() {
        for &method in methods {
            let mine: Vec<&Sample> = samples
                .iter()
                .filter(|s| s.cell == cell && s.method == method)
                .collect();
            let ran: Vec<&Sample> = mine.iter().copied().filter(|s| s.cmax.is_some()).collect();
            let gaps: Vec<f64> = ran
                .iter()
                .map(|s| gap(s.cmax.unwrap(), s.best))
                .collect::<Result<_>>()?;
            let times: Vec<f64> = ran.iter().map(|s| s.seconds).collect();
            rows.push(ReportRow {
                n: spec.n,
                m: spec.m,
                density: spec.density_pct,
                mode: spec.mode,
                method,
                instances: ran.len(),
                skipped: mine.len() - ran.len(),
                sol_count: ran.iter().filter(|s| s.cmax == Some(s.best)).count(),
                gap: Stats::of(&gaps),
                time: Stats::of(&times),
                bs_source: mine.first().map_or(BsSource::Oracle, |s| s.bs_source),
            });
        }
    }
    Ok(RunReport { rows, samples })
}

/// Runs the grid described by `cfg`.
pub fn run_config(cfg: &BenchConfig) -> Result<RunReport> {
    run_experiment(
        &cfg.specs(cfg.seed),
        &cfg.methods,
        cfg.instances_per_cell,
        cfg.iters,
        cfg.oracle_limit,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, d: f64, seed: u64) -> GenSpec {
        GenSpec {
            n,
            m: 2,
            density_pct: d,
            p_range: (10, 100),
            s_choices: vec![2, 3, 4],
            mode: Mode::Max,
            seed,
        }
    }

    #[test]
    fn full_density_is_complete() {
        let inst = generate_instance(&spec(12, 100.0, 3)).unwrap();
        assert_eq!(inst.graph().edge_count(), 66);
        assert!(inst.proc_times().iter().all(|p| (10..=100).contains(p)));
        assert!([2, 3, 4].contains(&inst.setup()));
    }

    #[test]
    fn spec_validation() {
        assert!(generate_instance(&spec(5, 0.0, 1)).is_err());
        assert!(generate_instance(&spec(5, 100.5, 1)).is_err());
        let mut s = spec(5, 50.0, 1);
        s.p_range = (0, 4);
        assert!(generate_instance(&s).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instance(&spec(15, 40.0, 77)).unwrap();
        assert_eq!(a, generate_instance(&spec(15, 40.0, 77)).unwrap());
        assert_ne!(a, generate_instance(&spec(15, 40.0, 78)).unwrap());
    }

    #[test]
    fn stats_are_order_independent() {
        let a = Stats::of(&[0.1, 0.7, 0.2, 1e-17, 0.3]).unwrap();
        let b = Stats::of(&[0.3, 1e-17, 0.2, 0.7, 0.1]).unwrap();
        assert_eq!(a, b);
        assert!(a.min <= a.mean && a.mean <= a.max);
        assert!(Stats::of(&[]).is_none());
    }

    #[test]
    fn config_parsing() {
        let text = "# grid\nsizes = 8, 10\nmachines = 2 3\ndensities = 12.5,100\np_min = 10\np_max = 100\ns_set = 2,3,4\niters = 50\nseed = 9\nmethods = h1, h2, oracle\ninstances_per_cell = 4\n";
        let cfg = BenchConfig::parse(text).unwrap();
        assert_eq!(cfg.sizes, vec![8, 10]);
        assert_eq!(cfg.methods, vec![Algorithm::H1, Algorithm::H2, Algorithm::Oracle]);
        assert_eq!(cfg.specs(0).len(), 8);
        assert!(BenchConfig::parse("sizes = 10\nbogus = 1\n").is_err());
        assert!(BenchConfig::parse("densities = 0\n").is_err());
        assert!(BenchConfig::parse("methods = \n").is_err());
        assert!(BenchConfig::parse("methods = cplex\n").is_err());
    }

    #[test]
    fn bs_policy_branches() {
        let small = generate_instance(&spec(8, 50.0, 4)).unwrap();
        let (bs, src) = bs_policy(&small, &[1000], DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(src, BsSource::Oracle);
        assert!(bs <= 1000);
        let big = generate_instance(&spec(100, 50.0, 4)).unwrap();
        assert_eq!(
            bs_policy(&big, &[700, 650], 10).unwrap(),
            (650, BsSource::BestOfMethods)
        );
        assert!(bs_policy(&big, &[], 10).is_err());
    }

    #[test]
    fn oracle_only_cell_has_zero_gap() {
        let report = run_experiment(&[spec(6, 50.0, 2)], &[Algorithm::Oracle], 5, 10, 10).unwrap();
        let row = &report.rows[0];
        assert_eq!((row.instances, row.sol_count), (5, 5));
        let g = row.gap.unwrap();
        assert_eq!((g.min, g.mean, g.max), (0.0, 0.0, 0.0));
        assert!(report.to_csv().starts_with(CSV_HEADER));
        assert_eq!(report.to_csv().lines().count(), 2);
    }

    #[test]
    fn inapplicable_methods_are_skipped() {
        let report =
            run_experiment(&[spec(6, 50.0, 2)], &[Algorithm::B1Max, Algorithm::H2], 3, 10, 10).unwrap();
        assert_eq!((report.rows[0].instances, report.rows[0].skipped), (0, 3));
        assert_eq!(report.rows[1].instances, 3);
    }
}
