//! Experiment runner for the synthetic comparison protocol.
//!
//! For every `p` and trial a fresh synthetic instance is drawn from a seed
//! derived from the master seed, each requested algorithm runs on it, and
//! the per-trial reports are averaged into one row per `p`.
//!
//! Trial CSV columns, in order:
//! `n,p,lambda,trial,seed,algorithm,variant,objective,f_part,d_part,wall_time_ms,af_vs_opt,af_vs_other,selected,error`.
//! Aggregate CSV columns, in order:
//! `n,p,lambda,trials,opt,greedy_a,greedy_b,ls,af_greedy_a,af_greedy_b,af_greedy_b_over_greedy_a,af_ls_over_greedy_b,time_greedy_a_ms,time_greedy_b_ms,time_ls_ms,time_greedy_a_over_greedy_b`.
//! Absent values are empty fields. `selected` is space separated.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::gen_synthetic;
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::model::{approx_eq, Instance, Solution};
use crate::solvers::{
    brute_force_opt, greedy_edge_modular, greedy_vertex, local_search_from, local_search_matroid, Constraint,
    GreedyInit, GreedyTail, SolverConfig,
};

/// `opt / alg`, the observed approximation factor.
pub fn approximation_factor(opt_value: f64, alg_value: f64) -> Result<f64> {
    if !(alg_value > 0.0) {
        return Err(Error::invalid(format!("algorithm value must be positive, got {alg_value}")));
    }
    Ok(opt_value / alg_value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    GreedyA,
    GreedyB,
    LocalSearch,
    Opt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::GreedyA, Algorithm::GreedyB, Algorithm::LocalSearch, Algorithm::Opt];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::GreedyA => "greedy_a",
            Algorithm::GreedyB => "greedy_b",
            Algorithm::LocalSearch => "local_search",
            Algorithm::Opt => "opt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "greedy_a" | "a" | "edge" => Ok(Algorithm::GreedyA),
            "greedy_b" | "b" | "vertex" => Ok(Algorithm::GreedyB),
            "local_search" | "ls" => Ok(Algorithm::LocalSearch),
            "opt" | "brute" | "brute_force" => Ok(Algorithm::Opt),
            _ => Err(Error::invalid(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// One algorithm run: the selected set, its wall time and, for local
/// search, the objective it started from.
#[derive(Debug, Clone)]
pub struct Run {
    pub solution: Solution,
    pub wall_time_ms: f64,
    pub start_objective: Option<f64>,
    pub variant: String,
}

/// Runs `alg` with cardinality `p`, or over the bases of `matroid` when given.
///
/// Without a matroid, local search starts from the Greedy B solution and,
/// when `ls_time_factor` is set, stops after that multiple of the Greedy B
/// wall time (measured from the start of local search).
pub fn run_algorithm(
    inst: &Instance,
    alg: Algorithm,
    p: usize,
    matroid: Option<&Matroid>,
    cfg: &SolverConfig,
    ls_time_factor: Option<f64>,
) -> Result<Run> {
    let variant = variant_name(alg, cfg, ls_time_factor);
    let timed = |f: &dyn Fn() -> Result<Solution>| -> Result<(Solution, f64)> {
        let t = Instant::now();
        let s = f()?;
        Ok((s, t.elapsed().as_secs_f64() * 1e3))
    };
    let (solution, wall_time_ms, start_objective) = match (alg, matroid) {
        (Algorithm::GreedyA, None) => {
            let (s, t) = timed(&|| greedy_edge_modular(inst, p, cfg))?;
            (s, t, None)
        }
        (Algorithm::GreedyB, None) => {
            let (s, t) = timed(&|| greedy_vertex(inst, p, cfg))?;
            (s, t, None)
        }
        (Algorithm::Opt, None) => {
            let (s, t) = timed(&|| brute_force_opt(inst, Constraint::Cardinality(p)))?;
            (s, t, None)
        }
        (Algorithm::LocalSearch, None) => {
            let (start, greedy_ms) = timed(&|| greedy_vertex(inst, p, cfg))?;
            let start_value = start.objective();
            let ls_cfg = SolverConfig {
                ls_time_budget_ms: ls_time_factor.map(|k| k * greedy_ms).or(cfg.ls_time_budget_ms),
                ..cfg.clone()
            };
            let uniform = Matroid::uniform(inst.n(), p);
            let t = Instant::now();
            let res = local_search_from(inst, &uniform, start, &ls_cfg)?;
            (res.solution, t.elapsed().as_secs_f64() * 1e3, Some(start_value))
        }
        (Algorithm::GreedyB, Some(m)) => {
            let (s, t) = timed(&|| crate::solvers::greedy_vertex_matroid(inst, m, cfg))?;
            (s, t, None)
        }
        (Algorithm::LocalSearch, Some(m)) => {
            let t = Instant::now();
            let res = local_search_matroid(inst, m, cfg)?;
            let start_value = res.trajectory.first().copied();
            (res.solution, t.elapsed().as_secs_f64() * 1e3, start_value)
        }
        (Algorithm::Opt, Some(m)) => {
            let (s, t) = timed(&|| brute_force_opt(inst, Constraint::Matroid(m)))?;
            (s, t, None)
        }
        (Algorithm::GreedyA, Some(_)) => {
            return Err(Error::invalid("greedy_a supports only cardinality constraints"));
        }
    };
    verify_objective(inst, &solution)?;
    Ok(Run {
        solution,
        wall_time_ms,
        start_objective,
        variant,
    })
}

/// Recomputes `φ` from scratch and compares it with the cached value.
pub fn verify_objective(inst: &Instance, sol: &Solution) -> Result<()> {
    let fresh = inst.objective(sol.selected())?;
    if !approx_eq(fresh, sol.objective()) {
        return Err(Error::Internal(format!(
            "cached objective {} disagrees with recomputed {fresh}",
            sol.objective()
        )));
    }
    Ok(())
}

fn variant_name(alg: Algorithm, cfg: &SolverConfig, ls_time_factor: Option<f64>) -> String {
    match alg {
        Algorithm::GreedyA => match cfg.greedy_a_tail {
            GreedyTail::BestLast => "best_last".into(),
            GreedyTail::ArbitraryLast => "arbitrary_last".into(),
        },
        Algorithm::GreedyB => match cfg.greedy_b_init {
            GreedyInit::BestPair => "best_pair".into(),
            GreedyInit::ArbitraryFirst => "arbitrary_first".into(),
        },
        Algorithm::LocalSearch => match ls_time_factor {
            Some(k) => format!("eps={};budget={k}x", cfg.ls_epsilon),
            None => format!("eps={}", cfg.ls_epsilon),
        },
        Algorithm::Opt => "exact".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub n: usize,
    pub ps: Vec<usize>,
    pub lambda: f64,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    pub compute_opt: bool,
    pub seed: u64,
    pub solver: SolverConfig,
    /// Local search budget as a multiple of the Greedy B time; `None` runs
    /// to a local optimum or the iteration cap.
    pub ls_time_factor: Option<f64>,
    /// Fan trials out over the rayon pool. Wall times get noisier.
    pub parallel: bool,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        Self {
            n: 50,
            ps: (3..=7).collect(),
            lambda: 0.2,
            trials: 5,
            algorithms: vec![Algorithm::GreedyA, Algorithm::GreedyB],
            compute_opt: true,
            seed: 0,
            solver: SolverConfig {
                ls_epsilon: 1e-9,
                ..SolverConfig::default()
            },
            ls_time_factor: Some(10.0),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub n: usize,
    pub p: usize,
    pub lambda: f64,
    pub trial: usize,
    /// Seed of the synthetic instance used by this trial.
    pub seed: u64,
    pub algorithm: Algorithm,
    pub variant: String,
    pub objective: f64,
    pub f_part: f64,
    pub d_part: f64,
    pub wall_time_ms: f64,
    pub af_vs_opt: Option<f64>,
    /// Local search only: objective relative to its Greedy B start.
    pub af_vs_other: Option<f64>,
    pub selected: Vec<usize>,
    /// Set when the run failed; numeric fields are then 0.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AggregateRow {
    pub n: usize,
    pub p: usize,
    pub lambda: f64,
    pub trials: usize,
    pub opt: Option<f64>,
    pub greedy_a: Option<f64>,
    pub greedy_b: Option<f64>,
    pub ls: Option<f64>,
    pub af_greedy_a: Option<f64>,
    pub af_greedy_b: Option<f64>,
    pub af_greedy_b_over_greedy_a: Option<f64>,
    pub af_ls_over_greedy_b: Option<f64>,
    pub time_greedy_a_ms: Option<f64>,
    pub time_greedy_b_ms: Option<f64>,
    pub time_ls_ms: Option<f64>,
    pub time_greedy_a_over_greedy_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub trials: Vec<TrialReport>,
    pub aggregate: Vec<AggregateRow>,
}

/// Seed of the instance for `(p, trial)` under `master`.
pub fn trial_seed(master: u64, p: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((p as u64) << 32) | trial as u64);
    rng.next_u64()
}

pub fn run_comparison(cfg: &ComparisonConfig) -> Result<ComparisonResult> {
    cfg.solver.validate()?;
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    if let Some(&p) = cfg.ps.iter().find(|&&p| p < 1 || p > cfg.n) {
        return Err(Error::invalid(format!("p = {p} outside 1..={}", cfg.n)));
    }
    let mut algorithms: Vec<Algorithm> = cfg.algorithms.iter().copied().filter(|a| *a != Algorithm::Opt).collect();
    algorithms.sort();
    algorithms.dedup();
    if cfg.compute_opt || cfg.algorithms.contains(&Algorithm::Opt) {
        algorithms.push(Algorithm::Opt);
    }
    let jobs: Vec<(usize, usize)> = cfg
        .ps
        .iter()
        .flat_map(|&p| (0..cfg.trials).map(move |t| (p, t)))
        .collect();
    let run_job = |&(p, trial): &(usize, usize)| run_trial(cfg, &algorithms, p, trial);
    let per_job: Vec<Result<Vec<TrialReport>>> = if cfg.parallel {
        jobs.par_iter().map(run_job).collect()
    } else {
        jobs.iter().map(run_job).collect()
    };
    let mut trials = Vec::new();
    for r in per_job {
        trials.extend(r?);
    }
    let aggregate = cfg.ps.iter().map(|&p| aggregate_rows(cfg, p, &trials)).collect();
    Ok(ComparisonResult { trials, aggregate })
}

fn run_trial(cfg: &ComparisonConfig, algorithms: &[Algorithm], p: usize, trial: usize) -> Result<Vec<TrialReport>> {
    let seed = trial_seed(cfg.seed, p, trial);
    let inst = gen_synthetic(cfg.n, cfg.lambda, seed)?;
    let mut rows: Vec<TrialReport> = algorithms
        .iter()
        .map(|&alg| {
            let solver = SolverConfig {
                seed,
                ..cfg.solver.clone()
            };
            match run_algorithm(&inst, alg, p, None, &solver, cfg.ls_time_factor) {
                Ok(run) => TrialReport {
                    n: cfg.n,
                    p,
                    lambda: cfg.lambda,
                    trial,
                    seed,
                    algorithm: alg,
                    variant: run.variant,
                    objective: run.solution.objective(),
                    f_part: run.solution.quality_value(),
                    d_part: run.solution.dispersion(),
                    wall_time_ms: run.wall_time_ms,
                    af_vs_opt: None,
                    af_vs_other: run.start_objective.and_then(|s| approximation_factor(run.solution.objective(), s).ok()),
                    selected: run.solution.sorted_items(),
                    error: None,
                },
                Err(e) => TrialReport {
                    n: cfg.n,
                    p,
                    lambda: cfg.lambda,
                    trial,
                    seed,
                    algorithm: alg,
                    variant: variant_name(alg, &solver, cfg.ls_time_factor),
                    objective: 0.0,
                    f_part: 0.0,
                    d_part: 0.0,
                    wall_time_ms: 0.0,
                    af_vs_opt: None,
                    af_vs_other: None,
                    selected: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let opt = rows
        .iter()
        .find(|r| r.algorithm == Algorithm::Opt && r.error.is_none())
        .map(|r| r.objective);
    if let Some(opt) = opt {
        for r in rows.iter_mut().filter(|r| r.error.is_none()) {
            r.af_vs_opt = approximation_factor(opt, r.objective).ok();
        }
    }
    Ok(rows)
}

fn aggregate_rows(cfg: &ComparisonConfig, p: usize, trials: &[TrialReport]) -> AggregateRow {
    let mean = |alg: Algorithm, f: fn(&TrialReport) -> f64| -> Option<f64> {
        let vals: Vec<f64> = trials
            .iter()
            .filter(|r| r.p == p && r.algorithm == alg && r.error.is_none())
            .map(f)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    };
    let ratio = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => approximation_factor(a, b).ok(),
        _ => None,
    };
    let value = |alg| mean(alg, |r| r.objective);
    let time = |alg| mean(alg, |r| r.wall_time_ms);
    let (opt, a, b, ls) = (
        value(Algorithm::Opt),
        value(Algorithm::GreedyA),
        value(Algorithm::GreedyB),
        value(Algorithm::LocalSearch),
    );
    AggregateRow {
        n: cfg.n,
        p,
        lambda: cfg.lambda,
        trials: cfg.trials,
        opt,
        greedy_a: a,
        greedy_b: b,
        ls,
        af_greedy_a: ratio(opt, a),
        af_greedy_b: ratio(opt, b),
        af_greedy_b_over_greedy_a: ratio(b, a),
        af_ls_over_greedy_b: ratio(ls, b),
        time_greedy_a_ms: time(Algorithm::GreedyA),
        time_greedy_b_ms: time(Algorithm::GreedyB),
        time_ls_ms: time(Algorithm::LocalSearch),
        time_greedy_a_over_greedy_b: ratio(time(Algorithm::GreedyA), time(Algorithm::GreedyB)),
    }
}

#[derive(Serialize, Deserialize)]
struct TrialCsvRow {
    n: usize,
    p: usize,
    lambda: f64,
    trial: usize,
    seed: u64,
    algorithm: Algorithm,
    variant: String,
    objective: f64,
    f_part: f64,
    d_part: f64,
    wall_time_ms: f64,
    af_vs_opt: Option<f64>,
    af_vs_other: Option<f64>,
    selected: String,
    error: Option<String>,
}

impl From<&TrialReport> for TrialCsvRow {
    fn from(r: &TrialReport) -> Self {
        Self {
            n: r.n,
            p: r.p,
            lambda: r.lambda,
            trial: r.trial,
            seed: r.seed,
            algorithm: r.algorithm,
            variant: r.variant.clone(),
            objective: r.objective,
            f_part: r.f_part,
            d_part: r.d_part,
            wall_time_ms: r.wall_time_ms,
            af_vs_opt: r.af_vs_opt,
            af_vs_other: r.af_vs_other,
            selected: r.selected.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(" "),
            error: r.error.clone(),
        }
    }
}

impl TryFrom<TrialCsvRow> for TrialReport {
    type Error = Error;

    fn try_from(r: TrialCsvRow) -> Result<Self> {
        let selected = r
            .selected
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::invalid(format!("bad item id `{t}`"))))
            .collect::<Result<_>>()?;
        Ok(TrialReport {
            n: r.n,
            p: r.p,
            lambda: r.lambda,
            trial: r.trial,
            seed: r.seed,
            algorithm: r.algorithm,
            variant: r.variant,
            objective: r.objective,
            f_part: r.f_part,
            d_part: r.d_part,
            wall_time_ms: r.wall_time_ms,
            af_vs_opt: r.af_vs_opt,
            af_vs_other: r.af_vs_other,
            selected,
            error: r.error,
        })
    }
}

pub fn write_trials_csv<W: Write>(out: W, rows: &[TrialReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(TrialCsvRow::from(r))?;
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))
}

pub fn read_trials_csv(text: &str) -> Result<Vec<TrialReport>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize::<TrialCsvRow>()
        .map(|r| r.map_err(Error::from).and_then(TrialReport::try_from))
        .collect()
}

pub fn write_aggregate_csv<W: Write>(out: W, rows: &[AggregateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))
}

pub fn read_aggregate_csv(text: &str) -> Result<Vec<AggregateRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// One JSON object per line.
pub fn write_json_lines<W: Write, T: Serialize>(mut out: W, rows: &[T]) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::Internal(e.to_string()))?;
    }
    Ok(())
}

pub fn read_json_lines<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

/// Fixed-width text table of the aggregate rows, `-` for absent values.
pub fn format_aggregate_table(rows: &[AggregateRow]) -> String {
    let header = [
        "p", "OPT", "GreedyA", "GreedyB", "LS", "AF_A", "AF_B", "AF_B/A", "AF_LS/B", "T_A(ms)", "T_B(ms)", "T_LS(ms)",
        "T_A/B",
    ];
    let mut out = String::new();
    for h in header {
        let _ = write!(out, "{h:>10}");
    }
    out.push('\n');
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
    for r in rows {
        let _ = write!(out, "{:>10}", r.p);
        for v in [
            r.opt,
            r.greedy_a,
            r.greedy_b,
            r.ls,
            r.af_greedy_a,
            r.af_greedy_b,
            r.af_greedy_b_over_greedy_a,
            r.af_ls_over_greedy_b,
            r.time_greedy_a_ms,
            r.time_greedy_b_ms,
            r.time_ls_ms,
            r.time_greedy_a_over_greedy_b,
        ] {
            let _ = write!(out, "{:>10}", cell(v));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn af_arithmetic() {
        assert!((approximation_factor(4.870, 4.311).unwrap() - 1.130).abs() < 5e-4);
        assert!((approximation_factor(4.870, 4.785).unwrap() - 1.018).abs() < 5e-4);
        assert_eq!(approximation_factor(3.0, 3.0).unwrap(), 1.0);
        assert!(approximation_factor(1.0, 0.0).is_err());
        assert!(approximation_factor(1.0, -2.0).is_err());
    }

    fn small() -> ComparisonConfig {
        ComparisonConfig {
            n: 12,
            ps: vec![3, 4],
            trials: 2,
            algorithms: vec![Algorithm::GreedyA, Algorithm::GreedyB, Algorithm::LocalSearch],
            ls_time_factor: None,
            seed: 5,
            ..ComparisonConfig::default()
        }
    }

    #[test]
    fn comparison_shape_and_invariants() {
        let res = run_comparison(&small()).unwrap();
        assert_eq!(res.trials.len(), 2 * 2 * 4);
        assert_eq!(res.aggregate.len(), 2);
        for r in &res.trials {
            assert!(r.error.is_none());
            assert!((r.objective - (r.f_part + r.lambda * r.d_part)).abs() < 1e-9);
            assert!(r.af_vs_opt.unwrap() >= 1.0 - 1e-9);
            if let Some(af) = r.af_vs_other {
                assert_eq!(r.algorithm, Algorithm::LocalSearch);
                assert!(af >= 1.0 - 1e-9);
            }
        }
        let row = &res.aggregate[0];
        assert!(row.opt.is_some() && row.af_greedy_b.is_some() && row.af_ls_over_greedy_b.is_some());
        assert!(format_aggregate_table(&res.aggregate).lines().count() == 3);
    }

    #[test]
    fn single_algorithm_has_no_af() {
        let cfg = ComparisonConfig {
            n: 10,
            ps: vec![3],
            trials: 1,
            algorithms: vec![Algorithm::GreedyB],
            compute_opt: false,
            ..ComparisonConfig::default()
        };
        let res = run_comparison(&cfg).unwrap();
        assert_eq!(res.trials.len(), 1);
        assert!(res.trials[0].af_vs_opt.is_none() && res.trials[0].af_vs_other.is_none());
        assert!(res.aggregate[0].af_greedy_b.is_none());
    }

    #[test]
    fn errors_are_marked_not_fatal() {
        let cfg = ComparisonConfig {
            n: 60,
            ps: vec![10],
            trials: 1,
            algorithms: vec![Algorithm::GreedyB],
            compute_opt: true,
            ..ComparisonConfig::default()
        };
        let res = run_comparison(&cfg).unwrap();
        let opt = res.trials.iter().find(|r| r.algorithm == Algorithm::Opt).unwrap();
        assert!(opt.error.as_deref().unwrap().contains("too large"));
        assert!(res.trials.iter().any(|r| r.algorithm == Algorithm::GreedyB && r.error.is_none()));
        assert!(res.aggregate[0].opt.is_none());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let res = run_comparison(&small()).unwrap();
        let mut buf = Vec::new();
        write_trials_csv(&mut buf, &res.trials).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "n,p,lambda,trial,seed,algorithm,variant,objective,f_part,d_part,wall_time_ms,af_vs_opt,af_vs_other,selected,error\n"
        ));
        assert_eq!(read_trials_csv(&text).unwrap(), res.trials);

        let mut buf = Vec::new();
        write_aggregate_csv(&mut buf, &res.aggregate).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,p,lambda,trials,opt,greedy_a,greedy_b,ls,af_greedy_a,af_greedy_b,"));
        assert_eq!(read_aggregate_csv(&text).unwrap(), res.aggregate);

        let mut buf = Vec::new();
        write_json_lines(&mut buf, &res.trials).unwrap();
        let back: Vec<TrialReport> = read_json_lines(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, res.trials);
    }

    #[test]
    fn reproducible_modulo_time() {
        let strip = |mut v: Vec<TrialReport>| {
            v.iter_mut().for_each(|r| r.wall_time_ms = 0.0);
            v
        };
        let a = strip(run_comparison(&small()).unwrap().trials);
        let b = strip(run_comparison(&small()).unwrap().trials);
        let par = strip(
            run_comparison(&ComparisonConfig {
                parallel: true,
                ..small()
            })
            .unwrap()
            .trials,
        );
        assert_eq!(a, b);
        assert_eq!(a, par);
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("greedy-b".parse::<Algorithm>().unwrap(), Algorithm::GreedyB);
        assert!("nope".parse::<Algorithm>().is_err());
    }

    #[test]
    fn matroid_runs() {
        let fx = crate::solvers::appendix_fixture(4, 1.0).unwrap();
        let cfg = SolverConfig::default();
        let ls = run_algorithm(&fx.instance, Algorithm::LocalSearch, 0, Some(&fx.matroid), &cfg, None).unwrap();
        assert_eq!(ls.solution.sorted_items(), fx.opt_items());
        assert!(run_algorithm(&fx.instance, Algorithm::GreedyA, 0, Some(&fx.matroid), &cfg, None).is_err());
    }
}
