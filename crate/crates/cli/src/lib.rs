//! `maxsum` command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use maxsum_core::datagen::gen_synthetic;
use maxsum_core::dynamics::{simulate, Env};
use maxsum_core::harness::{
    format_aggregate_table, run_algorithm, run_comparison, write_aggregate_csv, write_json_lines, write_trials_csv,
    Algorithm, ComparisonConfig,
};
use maxsum_core::letor::{build_cosine_instance, parse_letor, DistanceMode, Normalization};
use maxsum_core::model::io::{load_instance, write_instance};
use maxsum_core::solvers::SolverConfig;

#[derive(Debug, Parser)]
#[command(name = "maxsum", version, about = "Max-sum diversification solvers and experiments")]
pub struct Cli {
    /// Master seed for generators, randomized tie-breaks and experiments.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trade-off weight; overrides the value stored in an instance file.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    JsonLines,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic instance (weights in [0,1], distances in [1,2]).
    Gen {
        #[arg(long)]
        n: usize,
    },
    /// Run one algorithm on an instance file.
    Solve {
        #[arg(long, value_parser = parse_algorithm)]
        alg: Algorithm,
        /// Cardinality; when omitted the instance's matroid is used.
        #[arg(long)]
        p: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        instance: PathBuf,
    },
    /// Exact optimum by enumeration.
    Brute {
        #[arg(long)]
        p: Option<usize>,
        instance: PathBuf,
    },
    /// Greedy A / Greedy B / local search comparison on synthetic instances.
    Compare {
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// `3..7`, `5..75:5` or `3,5,7`.
        #[arg(long, value_parser = parse_p_list, default_value = "3..7")]
        p: ::std::vec::Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Also compute the exact optimum.
        #[arg(long)]
        opt: bool,
        /// Comma separated algorithms.
        #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "greedy-a,greedy-b")]
        alg: Vec<Algorithm>,
        /// Local search budget in multiples of the Greedy B time.
        #[arg(long, default_value_t = 10.0, conflicts_with = "no_ls_budget")]
        ls_factor: f64,
        /// Run local search to a local optimum regardless of time.
        #[arg(long)]
        no_ls_budget: bool,
        /// Emit one row per trial instead of the per-p summary.
        #[arg(long)]
        per_trial: bool,
        /// Run trials concurrently.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Perturbation simulation with the oblivious update rule.
    Dynamics {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        p: usize,
        #[arg(long, value_parser = parse_env, default_value = "mixed")]
        env: Env,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
        /// `0.1:1.0:0.1` or `0.2,0.5`; defaults to `--lambda` or 0.2.
        #[arg(long, value_parser = parse_lambda_grid)]
        lambda_grid: Option<::std::vec::Vec<f64>>,
    },
    /// Build an instance from a ranked-document file.
    Ingest {
        file: PathBuf,
        /// Query to use; defaults to the first one in the file.
        #[arg(long)]
        qid: Option<String>,
        #[arg(long, default_value_t = 50)]
        top_n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::OneMinusCosine)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = NormArg::None)]
        normalize: NormArg,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Use the empty-set start for Greedy B and a random last item for Greedy A.
    #[arg(long)]
    pub plain: bool,
    #[arg(long)]
    pub ls_epsilon: Option<f64>,
    #[arg(long)]
    pub ls_max_iters: Option<usize>,
    #[arg(long)]
    pub ls_budget_ms: Option<f64>,
}

impl SolverArgs {
    fn config(&self, seed: u64, default_epsilon: f64) -> SolverConfig {
        let base = if self.plain { SolverConfig::plain() } else { SolverConfig::default() };
        SolverConfig {
            ls_epsilon: self.ls_epsilon.unwrap_or(default_epsilon),
            ls_max_iters: self.ls_max_iters.unwrap_or(base.ls_max_iters),
            ls_time_budget_ms: self.ls_budget_ms,
            seed,
            ..base
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    OneMinusCosine,
    Angular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    None,
    Minmax,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: maxsum_core::Error| e.to_string())
}

fn parse_env(s: &str) -> Result<Env, String> {
    s.parse().map_err(|e: maxsum_core::Error| e.to_string())
}

/// `a..b` (inclusive), `a..b:step`, or a comma list.
pub fn parse_p_list(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a non-negative integer"));
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (num(hi)?, num(step)?),
            None => (num(rest)?, 1),
        };
        let lo = num(lo)?;
        if step == 0 || lo > hi {
            return Err(format!("empty or invalid range `{s}`"));
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    s.split(',').map(num).collect()
}

/// `start:end:step` (inclusive), or a comma list.
pub fn parse_lambda_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || a > b {
                return Err(format!("invalid grid `{s}`"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect()
        }
        [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("invalid grid `{s}`")),
    };
    if grid.iter().any(|l| !(*l >= 0.0)) {
        return Err("lambda values must be >= 0".into());
    }
    Ok(grid)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path, lambda: Option<f64>) -> Result<(maxsum_core::Instance, Option<maxsum_core::Matroid>)> {
    let (inst, m) = load_instance(path)?;
    let inst = match lambda {
        Some(l) => inst.with_lambda(l)?,
        None => inst,
    };
    Ok((inst, m))
}

#[derive(Serialize)]
struct SolveReport<'a> {
    algorithm: Algorithm,
    variant: &'a str,
    config: &'a SolverConfig,
    p: Option<usize>,
    selected: Vec<usize>,
    objective: f64,
    f_part: f64,
    d_part: f64,
    wall_time_ms: f64,
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen { n } => {
            let inst = gen_synthetic(*n, cli.lambda.unwrap_or(maxsum_core::datagen::DEFAULT_LAMBDA), cli.seed)?;
            let mut w = output(&cli.out)?;
            w.write_all(write_instance(&inst, None)?.as_bytes())?;
            w.flush()?;
        }
        Command::Solve {
            alg,
            p,
            solver,
            instance,
        } => {
            let (inst, matroid) = load(instance, cli.lambda)?;
            let cfg = solver.config(cli.seed, 0.0);
            let constraint = match (p, &matroid) {
                (Some(_), _) => None,
                (None, Some(m)) => Some(m),
                (None, None) => bail!("--p is required when the instance has no matroid"),
            };
            let run = run_algorithm(&inst, *alg, p.unwrap_or(0), constraint, &cfg, None)?;
            let report = SolveReport {
                algorithm: *alg,
                variant: &run.variant,
                config: &cfg,
                p: *p,
                selected: run.solution.sorted_items(),
                objective: run.solution.objective(),
                f_part: run.solution.quality_value(),
                d_part: run.solution.dispersion(),
                wall_time_ms: run.wall_time_ms,
            };
            emit_solve(cli, &report)?;
        }
        Command::Brute { p, instance } => {
            let (inst, matroid) = load(instance, cli.lambda)?;
            let constraint = match (p, &matroid) {
                (Some(_), _) => None,
                (None, Some(m)) => Some(m),
                (None, None) => bail!("--p is required when the instance has no matroid"),
            };
            let cfg = SolverConfig::default();
            let run = run_algorithm(&inst, Algorithm::Opt, p.unwrap_or(0), constraint, &cfg, None)?;
            let report = SolveReport {
                algorithm: Algorithm::Opt,
                variant: &run.variant,
                config: &cfg,
                p: *p,
                selected: run.solution.sorted_items(),
                objective: run.solution.objective(),
                f_part: run.solution.quality_value(),
                d_part: run.solution.dispersion(),
                wall_time_ms: run.wall_time_ms,
            };
            emit_solve(cli, &report)?;
        }
        Command::Compare {
            n,
            p,
            trials,
            opt,
            alg,
            ls_factor,
            no_ls_budget,
            per_trial,
            parallel,
            solver,
        } => {
            let cfg = ComparisonConfig {
                n: *n,
                ps: p.clone(),
                lambda: cli.lambda.unwrap_or(0.2),
                trials: *trials,
                algorithms: alg.clone(),
                compute_opt: *opt,
                seed: cli.seed,
                solver: solver.config(cli.seed, 1e-9),
                ls_time_factor: (!no_ls_budget).then_some(*ls_factor),
                parallel: *parallel,
            };
            let res = run_comparison(&cfg)?;
            for r in res.trials.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "warning: p={} trial={} {}: {}",
                    r.p,
                    r.trial,
                    r.algorithm,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            let mut w = output(&cli.out)?;
            match (cli.format, per_trial) {
                (Format::Csv, false) => write_aggregate_csv(&mut w, &res.aggregate)?,
                (Format::Csv, true) => write_trials_csv(&mut w, &res.trials)?,
                (Format::JsonLines, false) => write_json_lines(&mut w, &res.aggregate)?,
                (Format::JsonLines, true) => write_json_lines(&mut w, &res.trials)?,
                (Format::Table, false) => w.write_all(format_aggregate_table(&res.aggregate).as_bytes())?,
                (Format::Table, true) => {
                    for r in &res.trials {
                        writeln!(
                            w,
                            "p={:<4} trial={:<3} {:<13} objective={:<12.6} time={:.3}ms{}",
                            r.p,
                            r.trial,
                            r.algorithm.name(),
                            r.objective,
                            r.wall_time_ms,
                            r.error.as_ref().map(|e| format!(" error: {e}")).unwrap_or_default()
                        )?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Dynamics {
            n,
            p,
            env,
            steps,
            repeats,
            lambda_grid,
        } => {
            let grid = lambda_grid.clone().unwrap_or_else(|| vec![cli.lambda.unwrap_or(0.2)]);
            let base = gen_synthetic(*n, grid[0], cli.seed)?;
            let mut w = output(&cli.out)?;
            if cli.format == Format::Table {
                writeln!(w, "{:>8} {:>14} {:>10} {:>10} {:>12}", "lambda", "env", "worst", "mean", "within_2")?;
            }
            for (i, &lambda) in grid.iter().enumerate() {
                let inst = base.with_lambda(lambda)?;
                let report = simulate(&inst, *p, *env, *steps, *repeats, cli.seed)?;
                match cli.format {
                    Format::Csv => report.write_csv(&mut w, i == 0)?,
                    Format::JsonLines => {
                        #[derive(Serialize)]
                        struct Row<'a> {
                            lambda: f64,
                            env: &'a str,
                            #[serde(flatten)]
                            step: &'a maxsum_core::dynamics::StepRecord,
                        }
                        let rows: Vec<Row> = report
                            .steps
                            .iter()
                            .map(|s| Row {
                                lambda,
                                env: env.name(),
                                step: s,
                            })
                            .collect();
                        write_json_lines(&mut w, &rows)?;
                    }
                    Format::Table => {
                        let mean = report.steps.iter().map(|s| s.ratio).sum::<f64>() / report.steps.len().max(1) as f64;
                        writeln!(
                            w,
                            "{:>8.3} {:>14} {:>10.4} {:>10.4} {:>12.4}",
                            lambda,
                            env.name(),
                            report.worst_ratio,
                            mean,
                            report.within_ratio_two()
                        )?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Ingest {
            file,
            qid,
            top_n,
            mode,
            normalize,
        } => {
            let groups = parse_letor(file)?;
            let group = match qid {
                Some(q) => groups
                    .iter()
                    .find(|g| &g.query_id == q)
                    .ok_or_else(|| anyhow!("query {q} not found in {}", file.display()))?,
                None => groups.first().ok_or_else(|| anyhow!("{} contains no documents", file.display()))?,
            };
            let mode = match mode {
                ModeArg::OneMinusCosine => DistanceMode::OneMinusCosine,
                ModeArg::Angular => DistanceMode::Angular,
            };
            let norm = match normalize {
                NormArg::None => Normalization::None,
                NormArg::Minmax => Normalization::MinMax,
            };
            let built = build_cosine_instance(&group.docs, *top_n, cli.lambda.unwrap_or(0.2), mode, norm)?;
            let v = &built.metric.triangle_violations;
            eprintln!(
                "qid {}: {} documents, {} triangle violations{}",
                group.query_id,
                built.instance.n(),
                v.len(),
                if v.is_empty() {
                    String::new()
                } else {
                    format!(" (worst slack {:.3e})", built.metric.worst_slack())
                }
            );
            let mut w = output(&cli.out)?;
            w.write_all(write_instance(&built.instance, None)?.as_bytes())?;
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_solve(cli: &Cli, report: &SolveReport) -> Result<()> {
    let mut w = output(&cli.out)?;
    match cli.format {
        Format::JsonLines => write_json_lines(&mut w, std::slice::from_ref(report))?,
        Format::Csv => {
            writeln!(w, "algorithm,variant,p,selected,objective,f_part,d_part,wall_time_ms")?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                report.algorithm,
                report.variant,
                report.p.map(|p| p.to_string()).unwrap_or_default(),
                join(&report.selected),
                report.objective,
                report.f_part,
                report.d_part,
                report.wall_time_ms
            )?;
        }
        Format::Table => {
            writeln!(w, "algorithm:    {} ({})", report.algorithm, report.variant)?;
            writeln!(w, "config:       {}", serde_json::to_string(report.config)?)?;
            writeln!(w, "selected:     {}", join(&report.selected))?;
            writeln!(w, "objective:    {}", report.objective)?;
            writeln!(w, "f_part:       {}", report.f_part)?;
            writeln!(w, "d_part:       {}", report.d_part)?;
            writeln!(w, "wall_time_ms: {:.3}", report.wall_time_ms)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn join(items: &[usize]) -> String {
    items.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_lists() {
        assert_eq!(parse_p_list("3..7").unwrap(), vec![3, 4, 5, 6, 7]);
        assert_eq!(parse_p_list("5..75:5").unwrap().len(), 15);
        assert_eq!(parse_p_list("5..75:5").unwrap().last(), Some(&75));
        assert_eq!(parse_p_list("3,5, 9").unwrap(), vec![3, 5, 9]);
        assert!(parse_p_list("7..3").is_err());
        assert!(parse_p_list("1..5:0").is_err());
        assert!(parse_p_list("x").is_err());
    }

    #[test]
    fn lambda_grids() {
        let g = parse_lambda_grid("0.1:1.0:0.1").unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[2], 0.3);
        assert_eq!(g[9], 1.0);
        assert_eq!(parse_lambda_grid("0.2,0.5").unwrap(), vec![0.2, 0.5]);
        assert_eq!(parse_lambda_grid("0.7").unwrap(), vec![0.7]);
        assert!(parse_lambda_grid("1:0:0.1").is_err());
        assert!(parse_lambda_grid("-1").is_err());
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert!(Cli::try_parse_from(["maxsum", "frobnicate"]).is_err());
        assert!(Cli::try_parse_from(["maxsum", "gen", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["maxsum", "gen", "--n", "5"]).is_ok());
    }
}
