//! The three subcommands: single clustering runs, experiment grids, and plot
//! data extraction from report files.

use std::path::Path;

use breg_core::{
    adjusted_rand_index, fit_annealed, fit_hard, load_csv, AnnealingSchedule, ColumnSpec,
    ExperimentConfig, FitOptions, Generator, InitStrategy, TrialReport,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::output::{csv_line, with_extension, write_atomic, write_json};
use crate::CliError;

const SCHEMA_VERSION: u32 = 1;

fn effective_seed(cfg: &RunConfig) -> u64 {
    cfg.seed.unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        nanos ^ (std::process::id() as u64).rotate_left(32)
    })
}

fn fit_options(cfg: &RunConfig, seed: u64) -> Result<FitOptions, CliError> {
    let schedule = AnnealingSchedule::new(cfg.s0.unwrap_or(-1.0), cfg.eta.unwrap_or(1.1))
        .map_err(|e| CliError::config(e.to_string()))?;
    let mut opts = FitOptions::with_seed(seed);
    opts.schedule = schedule;
    if let Some(max_iter) = cfg.max_iter {
        if max_iter == 0 {
            return Err(CliError::config("max_iter must be at least 1"));
        }
        opts.max_iter = max_iter;
    }
    if let Some(tol) = cfg.tol {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(CliError::config("tol must be positive"));
        }
        opts.rel_tol = tol;
    }
    opts.init = InitStrategy::UniformRange;
    Ok(opts)
}

#[derive(Serialize)]
struct ClusterResult {
    schema_version: u32,
    method: &'static str,
    family: &'static str,
    k: usize,
    seed: u64,
    dropped_rows: usize,
    iterations: usize,
    converged: bool,
    wall_time_s: f64,
    objective_trace: Vec<f64>,
    s_trace: Vec<f64>,
    centroids: Vec<Vec<f64>>,
    labels: Vec<usize>,
    metrics: Option<MetricsBlock>,
}

#[derive(Serialize)]
struct MetricsBlock {
    ari: f64,
}

pub fn cmd_cluster(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.input.experiment.is_some() {
        return Err(CliError::config("the cluster command takes csv input, not an experiment"));
    }
    let csv_path = cfg
        .input
        .csv
        .as_ref()
        .ok_or_else(|| CliError::config("input.csv is required"))?;
    let method = cfg
        .method
        .ok_or_else(|| CliError::config("method is required"))?;
    let k = cfg.k.ok_or_else(|| CliError::config("k is required"))?;

    let gen = match &cfg.divergence {
        Some(spec) => spec.to_generator()?,
        None => Generator::SquaredEuclidean,
    };
    if method.is_euclidean() && gen != Generator::SquaredEuclidean {
        return Err(CliError::config(format!(
            "method {} runs under squared_euclidean; omit the divergence section",
            method.name()
        )));
    }

    let seed = effective_seed(cfg);
    println!("effective seed: {seed}");

    let column_spec = ColumnSpec {
        feature_columns: cfg.input.feature_columns.clone(),
        label_column: cfg.input.label_column,
        positive_filter: cfg.input.positive_filter,
    };
    let csv = load_csv(csv_path, &column_spec).map_err(CliError::from_data)?;
    let data = csv.dataset.clamped_to(&gen);

    let opts = fit_options(cfg, seed)?;
    let fit = if method.is_annealed() {
        fit_annealed(&data, k, &gen, &opts)
    } else {
        fit_hard(&data, k, &gen, &opts)
    }
    .map_err(CliError::from_fit)?;

    let metrics = match &csv.labels {
        Some(truth) => Some(MetricsBlock {
            ari: adjusted_rand_index(&fit.labels, truth).map_err(CliError::from_fit)?,
        }),
        None => None,
    };

    let result = ClusterResult {
        schema_version: SCHEMA_VERSION,
        method: method.name(),
        family: gen.name(),
        k,
        seed,
        dropped_rows: csv.dropped_rows,
        iterations: fit.iterations,
        converged: fit.converged,
        wall_time_s: if cfg.timings { fit.wall_time } else { 0.0 },
        objective_trace: fit.objective_trace,
        s_trace: fit.s_trace,
        centroids: fit.centroids.to_rows(),
        labels: fit.labels,
        metrics,
    };
    write_json(&cfg.output, &result)?;
    println!("wrote {}", cfg.output.display());
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    schema_version: u32,
    #[serde(flatten)]
    report: TrialReport,
}

pub fn cmd_experiment(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.input.csv.is_some() {
        return Err(CliError::config("the experiment command takes an experiment id, not csv input"));
    }
    let experiment = cfg
        .input
        .experiment
        .as_ref()
        .ok_or_else(|| CliError::config("input.experiment is required"))?
        .to_experiment()?;

    let seed = effective_seed(cfg);
    println!("effective seed: {seed}");

    let mut core_cfg = ExperimentConfig::new(experiment, seed);
    if let Some(trials) = cfg.trials {
        core_cfg.trials = trials;
    }
    if let Some(methods) = &cfg.methods {
        if methods.is_empty() {
            return Err(CliError::config("methods must be nonempty when given"));
        }
        core_cfg.methods = methods.iter().map(|m| m.to_method()).collect();
    }
    if let Some(eta) = cfg.eta {
        core_cfg.eta = eta;
    }
    if let Some(tol) = cfg.tol {
        core_cfg.rel_tol = tol;
    }
    if let Some(max_iter) = cfg.max_iter {
        core_cfg.max_iter = max_iter;
    }
    core_cfg.measure_runtime = cfg.timings;
    if cfg.s0.is_some() {
        return Err(CliError::config(
            "experiments fix their own s0 grids; use a custom experiment to change them",
        ));
    }

    let report = breg_core::run_experiment(&core_cfg).map_err(CliError::from_config)?;

    let doc = ReportDoc {
        schema_version: SCHEMA_VERSION,
        report,
    };
    write_json(&cfg.output, &doc)?;

    let csv_path = with_extension(&cfg.output, "csv");
    let mut lines = vec![csv_line(&[
        "method".into(),
        "setting".into(),
        "mean_ari".into(),
        "sd_ari".into(),
        "mean_runtime_s".into(),
        "trials".into(),
    ])];
    for row in &doc.report.rows {
        lines.push(csv_line(&[
            row.method.clone(),
            row.setting.clone(),
            row.mean_ari.to_string(),
            row.sd_ari.to_string(),
            row.mean_runtime_s.to_string(),
            row.trials.to_string(),
        ]));
    }
    lines.push(String::new());
    write_atomic(&csv_path, &lines.join("\n"))?;
    println!("wrote {} and {}", cfg.output.display(), csv_path.display());
    Ok(())
}

pub fn cmd_plotdata(report_path: &Path, plot: &str, out: &Path) -> Result<(), CliError> {
    let raw = std::fs::read_to_string(report_path)
        .map_err(|e| CliError::config(format!("cannot read report {}: {e}", report_path.display())))?;
    let doc: ReportDoc = serde_json::from_str(&raw)
        .map_err(|e| CliError::config(format!("not a report file: {e}")))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(CliError::config(format!(
            "unsupported report schema_version {}",
            doc.schema_version
        )));
    }

    let body = match plot {
        "figure2" => figure2(&doc)?,
        "figure3" => figure3(&doc)?,
        other => return Err(CliError::config(format!("unknown plot id {other:?}"))),
    };
    write_atomic(out, &body)?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Shape parameter on x, mean ARI on y, one series per method.
fn figure2(doc: &ReportDoc) -> Result<String, CliError> {
    if doc.report.experiment != "2" {
        return Err(CliError::config(format!(
            "figure2 needs an experiment 2 report, got experiment {:?}",
            doc.report.experiment
        )));
    }
    let mut methods: Vec<&str> = Vec::new();
    for row in &doc.report.rows {
        if !methods.contains(&row.method.as_str()) {
            methods.push(&row.method);
        }
    }
    let mut lines = vec![csv_line(&["x".into(), "y".into(), "series".into()])];
    for method in methods {
        for row in doc.report.rows.iter().filter(|r| r.method == method) {
            let alpha = row
                .setting
                .strip_prefix("alpha=")
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::config(format!("setting {:?} is not an alpha sweep cell", row.setting))
                })?;
            lines.push(csv_line(&[
                alpha.to_string(),
                row.mean_ari.to_string(),
                row.method.clone(),
            ]));
        }
    }
    lines.push(String::new());
    Ok(lines.join("\n"))
}

/// Points per cluster on x, best matched centroid divergence on y.
fn figure3(doc: &ReportDoc) -> Result<String, CliError> {
    if doc.report.recovery.is_empty() {
        return Err(CliError::config(
            "figure3 needs a centroid-recovery report (experiment 4)",
        ));
    }
    let mut points = doc.report.recovery.clone();
    points.sort_by_key(|p| p.n_per_cluster);
    let mut lines = vec![csv_line(&["x".into(), "y".into()])];
    for p in points {
        lines.push(csv_line(&[
            p.n_per_cluster.to_string(),
            p.best_divergence.to_string(),
        ]));
    }
    lines.push(String::new());
    Ok(lines.join("\n"))
}
