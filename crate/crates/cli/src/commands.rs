use std::io::Write;
use std::path::{Path, PathBuf};

use wsm::diagnostics::{fmt_sig17, growth_csv, growth_table, plot_values, qq_data, summary_stats};
use wsm::pareto::{adaptive_search, AdaptiveParams, Archive};
use wsm::samplers::{
    enumerate_uniform_capped, sample_dirichlet, sample_lhs_general, sample_lhs_p2, sample_random,
    sample_slhs_general, sample_slhs_p2,
};
use wsm::scalarise::{solve_weights, ProblemInstance};
use wsm::{SamplerConfig, WeightBatch, WeightVector};

use crate::args::{
    parse_int_set, AdaptArgs, GrowthArgs, QqArgs, SampleArgs, SampleStrategy, SolveArgs,
    WeightFlags,
};
use crate::manifest::{ManifestLine, RunManifest};
use crate::CliError;

/// A finished CSV: `#` comment lines followed by the data rows.
struct Report {
    manifest: RunManifest,
    comments: Vec<String>,
    rows: String,
}

impl Report {
    fn render(&self) -> String {
        let mut out = format!(
            "# wsm {} {}\n",
            self.manifest.version, self.manifest.command
        );
        out.push_str(&self.manifest.header_line());
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(&self.rows);
        out
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}"))),
    }
}

/// Summary lines go to stdout when the CSV went to a file, otherwise stderr.
fn summarise(lines: &[String], out: Option<&Path>) {
    for line in lines {
        if out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn weight_header(p: usize) -> String {
    (1..=p)
        .map(|i| format!("w{i}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn join_numbers(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_sig17(*v))
        .collect::<Vec<_>>()
        .join(",")
}

fn strategy_name(s: SampleStrategy) -> &'static str {
    match s {
        SampleStrategy::Uniform => "uniform",
        SampleStrategy::Random => "random",
        SampleStrategy::Dirichlet => "dirichlet",
        SampleStrategy::Lhs => "lhs",
        SampleStrategy::Slhs => "slhs",
    }
}

fn reject(strategy: SampleStrategy, flags: &[(&str, bool)]) -> Result<(), CliError> {
    if let Some((name, _)) = flags.iter().find(|(_, set)| *set) {
        return Err(CliError::Usage(format!(
            "--{name} cannot be used with strategy {}",
            strategy_name(strategy)
        )));
    }
    Ok(())
}

/// Validate the flag combination for `strategy` and generate the batch.
fn build_batch(
    strategy: SampleStrategy,
    f: &WeightFlags,
    seed: u64,
) -> Result<(WeightBatch, SamplerConfig, Option<usize>), CliError> {
    let defaults = SamplerConfig::default();
    let mut config = SamplerConfig {
        p: f.p.unwrap_or(defaults.p),
        d: f.d.unwrap_or(defaults.d),
        s: f.s.unwrap_or(defaults.s),
        delta: f.delta.unwrap_or(defaults.delta),
        alpha: f.alpha.clone().unwrap_or_default(),
        seed,
        budget: f.budget.unwrap_or(defaults.budget),
        ..defaults
    };
    let require_n = || match f.n {
        Some(0) => Err(CliError::Usage("--n must be >= 1".into())),
        Some(n) => Ok(n),
        None => Err(CliError::Usage(format!(
            "strategy {} needs --n",
            strategy_name(strategy)
        ))),
    };
    let mut n = None;
    match strategy {
        SampleStrategy::Uniform => {
            reject(
                strategy,
                &[
                    ("s", f.s.is_some()),
                    ("n", f.n.is_some()),
                    ("delta", f.delta.is_some()),
                    ("alpha", f.alpha.is_some()),
                ],
            )?;
        }
        SampleStrategy::Random => {
            reject(
                strategy,
                &[
                    ("d", f.d.is_some()),
                    ("s", f.s.is_some()),
                    ("delta", f.delta.is_some()),
                    ("budget", f.budget.is_some()),
                ],
            )?;
            n = Some(require_n()?);
        }
        SampleStrategy::Dirichlet => {
            reject(
                strategy,
                &[
                    ("d", f.d.is_some()),
                    ("s", f.s.is_some()),
                    ("delta", f.delta.is_some()),
                    ("budget", f.budget.is_some()),
                ],
            )?;
            let Some(alpha) = &f.alpha else {
                return Err(CliError::Usage("strategy dirichlet needs --alpha".into()));
            };
            match f.p {
                Some(p) if p != alpha.len() => {
                    return Err(CliError::Usage(format!(
                        "--p {p} does not match {} alpha entries",
                        alpha.len()
                    )));
                }
                _ => config.p = alpha.len(),
            }
            n = Some(require_n()?);
        }
        SampleStrategy::Lhs => {
            reject(
                strategy,
                &[
                    ("n", f.n.is_some()),
                    ("delta", f.delta.is_some()),
                    ("alpha", f.alpha.is_some()),
                    ("budget", f.budget.is_some()),
                ],
            )?;
        }
        SampleStrategy::Slhs => {
            let p2 = config.p == 2;
            reject(
                strategy,
                &[
                    ("s", f.s.is_some()),
                    ("n", f.n.is_some()),
                    ("alpha", f.alpha.is_some()),
                    ("delta", p2 && f.delta.is_some()),
                    ("budget", p2 && f.budget.is_some()),
                ],
            )?;
        }
    }
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let c = &config;
    let batch = match strategy {
        SampleStrategy::Uniform => enumerate_uniform_capped(c.p, c.d, c.budget)?,
        SampleStrategy::Random => sample_random(c.p, n.unwrap_or(0), c)?,
        SampleStrategy::Dirichlet => sample_dirichlet(&c.alpha, n.unwrap_or(0), c.seed)?,
        SampleStrategy::Lhs if c.p == 2 => sample_lhs_p2(c.d, c.s, c.seed)?,
        SampleStrategy::Lhs => sample_lhs_general(c.p, c.d, c.s, c.seed)?,
        SampleStrategy::Slhs if c.p == 2 => sample_slhs_p2(c.d, c.seed)?,
        SampleStrategy::Slhs => sample_slhs_general(c.p, c.d, c.delta, c.budget, c.seed)?,
    };
    Ok((batch, config, n))
}

pub fn sample(args: &SampleArgs, argv: &[String]) -> Result<(), CliError> {
    let (batch, config, n) = build_batch(args.strategy, &args.flags, args.seed)?;
    let mut manifest = RunManifest::new("sample", argv, config);
    manifest.n = n;
    manifest.outputs = args.out.iter().cloned().collect();

    let mut rows = weight_header(manifest.config.p);
    rows.push('\n');
    for w in batch.iter() {
        rows.push_str(&join_numbers(w.as_slice()));
        rows.push('\n');
    }
    let report = Report {
        comments: vec![format!(
            "strategy: {} ({}), seed: {}, rows: {}",
            strategy_name(args.strategy),
            batch.strategy,
            args.seed,
            batch.len()
        )],
        manifest,
        rows,
    };
    emit(&report.render(), args.out.as_deref())
}

fn load_instance(path: &Path) -> Result<ProblemInstance, CliError> {
    ProblemInstance::load(path)
        .map_err(|e| CliError::Usage(format!("instance {}: {e}", path.display())))
}

/// Read weight rows from CSV, skipping `#` comments and a header line.
fn read_weights(path: &Path, p: usize) -> Result<Vec<WeightVector>, CliError> {
    let usage = |msg: String| CliError::Usage(format!("weights {}: {msg}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| usage(e.to_string()))?;
    let mut weights = Vec::new();
    let mut first = true;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: Result<Vec<f64>, _> =
            line.split(',').map(|t| t.trim().parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if first => {
                first = false;
                continue;
            }
            Err(e) => return Err(usage(format!("line {}: {e}", lineno + 1))),
        };
        first = false;
        if values.len() != p {
            return Err(usage(format!(
                "line {} has {} weights but the instance has p = {p}",
                lineno + 1,
                values.len()
            )));
        }
        weights.push(
            WeightVector::new(values).map_err(|e| usage(format!("line {}: {e}", lineno + 1)))?,
        );
    }
    if weights.is_empty() {
        return Err(usage("no weight rows".into()));
    }
    Ok(weights)
}

fn summary_lines(archive: &Archive) -> Vec<String> {
    let ratio = archive
        .redundancy_ratio()
        .map(|r| format!("{r}"))
        .unwrap_or_else(|_| "undefined".into());
    vec![
        format!("nondominated: {}", archive.distinct_count()),
        format!("solved: {}", archive.solved_count()),
        format!("ratio: {ratio}"),
    ]
}

pub fn solve(args: &SolveArgs, argv: &[String]) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let p = instance.p();
    let (weights, config, n) = match (&args.weights, args.strategy) {
        (Some(path), _) => {
            if args.flags.any_set() {
                return Err(CliError::Usage(
                    "sampler flags cannot be combined with --weights".into(),
                ));
            }
            let config = SamplerConfig {
                p,
                seed: args.seed,
                ..SamplerConfig::default()
            };
            (read_weights(path, p)?, config, None)
        }
        (None, Some(strategy)) => {
            let mut flags = args.flags.clone();
            match flags.p {
                Some(given) if given != p => {
                    return Err(CliError::Usage(format!(
                        "--p {given} but the instance has p = {p}"
                    )));
                }
                _ if strategy != SampleStrategy::Dirichlet => flags.p = Some(p),
                _ => {}
            }
            let (batch, config, n) = build_batch(strategy, &flags, args.seed)?;
            if batch.p() != p {
                return Err(CliError::Usage(format!(
                    "weights have p = {} but the instance has p = {p}",
                    batch.p()
                )));
            }
            (batch.vectors, config, n)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --weights or --strategy is required".into(),
            ))
        }
    };

    let solutions = solve_weights(&instance, &weights, args.jobs as usize)?;
    let mut archive = Archive::new();
    let mut rows = weight_header(p);
    for i in 1..=p {
        rows.push_str(&format!(",y{i}"));
    }
    rows.push_str(",status,report\n");
    for s in &solutions {
        let report = archive.insert(s);
        let image = if s.is_optimal() {
            join_numbers(s.y.as_slice())
        } else {
            vec![""; p].join(",")
        };
        rows.push_str(&format!(
            "{},{image},{},{report}\n",
            join_numbers(s.weight.as_slice()),
            s.status
        ));
    }

    let mut manifest = RunManifest::new("solve", argv, config);
    manifest.n = n;
    manifest.instance = Some(args.instance.clone());
    manifest.weights = args.weights.clone();
    manifest.outputs = args.out.iter().cloned().collect();
    let summary = summary_lines(&archive);
    let report = Report {
        manifest,
        comments: summary.clone(),
        rows,
    };
    emit(&report.render(), args.out.as_deref())?;
    summarise(&summary, args.out.as_deref());
    Ok(())
}

pub fn adapt(args: &AdaptArgs, argv: &[String]) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let p = instance.p();
    let config = SamplerConfig {
        p,
        d: args.d,
        tau: args.tau,
        rho: args.rho,
        max_depth: args.max_depth,
        budget: args.budget,
        seed: args.seed,
        ..SamplerConfig::default()
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let params = AdaptiveParams {
        d: args.d,
        tau: args.tau,
        rho: args.rho,
        max_depth: args.max_depth,
        jobs: args.jobs as usize,
        budget: args.budget,
    };
    let outcome = adaptive_search(&instance, &params)?;

    let mut manifest = RunManifest::new("adapt", argv, config);
    manifest.instance = Some(args.instance.clone());
    manifest.outputs = args.out.iter().chain(args.audit.iter()).cloned().collect();

    let mut rows = (1..=p)
        .map(|i| format!("y{i}"))
        .collect::<Vec<_>>()
        .join(",");
    rows.push_str(",weights,");
    rows.push_str(&weight_header(p));
    rows.push('\n');
    for e in outcome.archive.entries() {
        rows.push_str(&format!(
            "{},{},{}\n",
            join_numbers(e.point.as_slice()),
            e.weights.len(),
            join_numbers(e.weights[0].as_slice())
        ));
    }

    let mut summary = summary_lines(&outcome.archive);
    summary.push(format!("termination: {}", outcome.termination));
    summary.push(format!("rounds: {}", outcome.rounds));
    summary.push(format!("subdivisions: {}", outcome.subdivisions.len()));

    if let Some(path) = &args.audit {
        let mut log = serde_json::to_string(&ManifestLine {
            manifest: manifest.clone(),
        })
        .expect("manifest serialises");
        log.push('\n');
        for record in &outcome.audit {
            log.push_str(&serde_json::to_string(record).expect("audit record serialises"));
            log.push('\n');
        }
        emit(&log, Some(path))?;
    }
    let report = Report {
        manifest,
        comments: summary.clone(),
        rows,
    };
    emit(&report.render(), args.out.as_deref())?;
    summarise(&summary, args.out.as_deref());
    Ok(())
}

pub fn diag_qq(args: &QqArgs, argv: &[String]) -> Result<(), CliError> {
    let config = SamplerConfig {
        p: 2,
        d: args.d,
        s: args.s,
        seed: args.seed,
        ..SamplerConfig::default()
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let batch = sample_lhs_p2(args.d, args.s, args.seed)?;
    let values = plot_values(&batch, args.seed);
    let qq = qq_data(&values)?;
    let mut comments = vec![format!("pearson: {}", fmt_sig17(qq.correlation()))];
    if let Ok(stats) = summary_stats(&values) {
        comments.push(format!(
            "mean: {}, variance: {}, excess kurtosis: {}",
            fmt_sig17(stats.mean),
            fmt_sig17(stats.variance),
            fmt_sig17(stats.excess_kurtosis)
        ));
    }
    let mut manifest = RunManifest::new("diag qq", argv, config);
    manifest.outputs = args.out.iter().cloned().collect();
    let report = Report {
        manifest,
        comments,
        rows: qq.to_csv(),
    };
    emit(&report.render(), args.out.as_deref())
}

pub fn diag_growth(args: &GrowthArgs, argv: &[String]) -> Result<(), CliError> {
    let ps = parse_int_set(&args.p).map_err(|e| CliError::Usage(format!("--p: {e}")))?;
    let ds = parse_int_set(&args.d).map_err(|e| CliError::Usage(format!("--d: {e}")))?;
    if ps.iter().any(|&p| p < 2) || ds.iter().any(|&d| d < 1) {
        return Err(CliError::Usage("growth needs p >= 2 and d >= 1".into()));
    }
    let table = growth_table(&ps, &ds)?;
    let mut manifest = RunManifest::new("diag growth", argv, SamplerConfig::default());
    manifest.outputs = args.out.iter().cloned().collect();
    let report = Report {
        manifest,
        comments: Vec::new(),
        rows: growth_csv(&table),
    };
    emit(&report.render(), args.out.as_deref())
}

/// Replace output destinations in a recorded argument list.
pub fn replay_argv(
    manifest: &RunManifest,
    out: Option<&PathBuf>,
    audit: Option<&PathBuf>,
) -> Vec<String> {
    let mut argv = vec!["wsm".to_string()];
    argv.extend(manifest.argv.iter().cloned());
    if let Some(o) = out {
        argv.push("--out".into());
        argv.push(o.display().to_string());
    }
    if let Some(a) = audit {
        argv.push("--audit".into());
        argv.push(a.display().to_string());
    }
    argv
}
