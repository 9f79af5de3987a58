//! Simulation-grid harness: seeded trials over method/setting grids with
//! aggregated ARI, runtime, and centroid-recovery statistics.
//!
//! Every trial derives its own seed from the grid seed through a splittable
//! counter, so raising the trial count extends a report without reshuffling
//! earlier trials. Within a trial all methods share one dataset and one
//! bitwise-identical initialization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{
    fit_annealed_from, fit_hard_from, init_centers, AnnealingSchedule, FitOptions, InitStrategy,
};
use crate::divergence::{Centroids, Generator};
use crate::error::{Error, Result};
use crate::metrics::{adjusted_rand_index, centroid_divergence};
use crate::sim::{sample_mixture, scale_separation, MixtureFamily, MixtureSpec};

/// Clustering methods compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Hard alternation under squared Euclidean distance.
    Lloyd,
    /// Hard alternation under the setting's Bregman divergence.
    BregmanHard,
    /// Annealed fit under squared Euclidean distance.
    Power,
    /// Annealed fit under the setting's Bregman divergence.
    BregmanPower,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Lloyd => "lloyd",
            Method::BregmanHard => "bregman_hard",
            Method::Power => "power",
            Method::BregmanPower => "bregman_power",
        }
    }

    fn is_annealed(&self) -> bool {
        matches!(self, Method::Power | Method::BregmanPower)
    }
}

/// One cell of a simulation grid: a data recipe plus the divergence and
/// initial exponents the methods run with.
#[derive(Debug, Clone)]
pub struct Setting {
    pub label: String,
    pub family: MixtureFamily,
    pub centers: Centroids,
    pub n_per_cluster: usize,
    pub bregman: Generator,
    pub s0_values: Vec<f64>,
    pub record_recovery: bool,
}

/// User-defined grid over embedding dimensions for one family.
#[derive(Debug, Clone)]
pub struct CustomGrid {
    pub family: MixtureFamily,
    pub prototype: Centroids,
    pub dims: Vec<usize>,
    pub s0_values: Vec<f64>,
    pub n_per_cluster: usize,
}

/// Built-in simulation studies plus the custom escape hatch.
#[derive(Debug, Clone)]
pub enum Experiment {
    /// Four exponential families in the plane, shared centers.
    ExpFamilies,
    /// Gamma shape-parameter sweep at p = 20.
    GammaShapeSweep,
    /// Poisson dimension sweep with several starting exponents.
    DimensionSweep,
    /// Poisson centroid recovery as points per cluster grow.
    CentroidRecovery,
    Custom(CustomGrid),
}

fn plane_prototype() -> Centroids {
    Centroids::from_rows(&[vec![10.0, 10.0], vec![20.0, 20.0], vec![40.0, 40.0]])
}

fn poisson_prototype() -> Centroids {
    Centroids::from_rows(&[vec![40.0, 40.0], vec![50.0, 50.0], vec![60.0, 60.0]])
}

impl Experiment {
    pub fn id(&self) -> &'static str {
        match self {
            Experiment::ExpFamilies => "1",
            Experiment::GammaShapeSweep => "2",
            Experiment::DimensionSweep => "3",
            Experiment::CentroidRecovery => "4",
            Experiment::Custom(_) => "custom",
        }
    }

    pub fn default_trials(&self) -> usize {
        match self {
            Experiment::CentroidRecovery => 100,
            _ => 250,
        }
    }

    pub fn default_methods(&self) -> Vec<Method> {
        match self {
            Experiment::CentroidRecovery => vec![Method::BregmanPower],
            _ => vec![
                Method::Lloyd,
                Method::BregmanHard,
                Method::Power,
                Method::BregmanPower,
            ],
        }
    }

    pub fn settings(&self) -> Vec<Setting> {
        match self {
            Experiment::ExpFamilies => {
                let centers = plane_prototype();
                let families = [
                    MixtureFamily::Gaussian { sigma2: 16.0 },
                    MixtureFamily::Binomial { trials: 200 },
                    MixtureFamily::Poisson,
                    MixtureFamily::Gamma { shape: 15.0 },
                ];
                families
                    .into_iter()
                    .map(|family| Setting {
                        label: family.name().to_string(),
                        family,
                        centers: centers.clone(),
                        n_per_cluster: 100,
                        bregman: family.matching_generator(),
                        s0_values: vec![-0.2],
                        record_recovery: false,
                    })
                    .collect()
            }
            Experiment::GammaShapeSweep => {
                let centers = scale_separation(&plane_prototype(), 20);
                (1..=20)
                    .map(|alpha| {
                        let family = MixtureFamily::Gamma {
                            shape: alpha as f64,
                        };
                        Setting {
                            label: format!("alpha={alpha}"),
                            family,
                            centers: centers.clone(),
                            n_per_cluster: 100,
                            bregman: family.matching_generator(),
                            s0_values: vec![-0.2],
                            record_recovery: false,
                        }
                    })
                    .collect()
            }
            Experiment::DimensionSweep => [2usize, 5, 10, 20, 50]
                .into_iter()
                .map(|p| Setting {
                    label: format!("p={p}"),
                    family: MixtureFamily::Poisson,
                    centers: scale_separation(&poisson_prototype(), p),
                    n_per_cluster: 100,
                    bregman: Generator::RelativeEntropy,
                    s0_values: vec![-0.2, -1.0, -3.0, -9.0],
                    record_recovery: false,
                })
                .collect(),
            Experiment::CentroidRecovery => {
                let centers = scale_separation(&poisson_prototype(), 5);
                [4usize, 8, 16, 32, 64, 128]
                    .into_iter()
                    .map(|n| Setting {
                        label: format!("n={n}"),
                        family: MixtureFamily::Poisson,
                        centers: centers.clone(),
                        n_per_cluster: n,
                        bregman: Generator::RelativeEntropy,
                        s0_values: vec![-1.0],
                        record_recovery: true,
                    })
                    .collect()
            }
            Experiment::Custom(grid) => grid
                .dims
                .iter()
                .map(|&p| Setting {
                    label: format!("p={p}"),
                    family: grid.family,
                    centers: scale_separation(&grid.prototype, p),
                    n_per_cluster: grid.n_per_cluster,
                    bregman: grid.family.matching_generator(),
                    s0_values: grid.s0_values.clone(),
                    record_recovery: false,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub trials: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub eta: f64,
    pub max_iter: usize,
    pub rel_tol: f64,
    /// When false (the default) reported runtimes are written as zero so that
    /// reports are reproducible byte for byte.
    pub measure_runtime: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, seed: u64) -> Self {
        let trials = experiment.default_trials();
        let methods = experiment.default_methods();
        Self {
            experiment,
            trials,
            seed,
            methods,
            eta: 1.1,
            max_iter: 500,
            rel_tol: 1e-6,
            measure_runtime: false,
        }
    }
}

/// Aggregated statistics for one (method, setting) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: String,
    pub setting: String,
    pub mean_ari: f64,
    /// Standard deviation of the mean (standard error) across trials.
    pub sd_ari: f64,
    pub mean_runtime_s: f64,
    /// Trials that completed; failed trials are excluded and counted.
    pub trials: usize,
    pub failures: usize,
}

/// Best (lowest) permutation-matched centroid divergence over the trials of
/// one recovery setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryPoint {
    pub n_per_cluster: usize,
    pub best_divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub experiment: String,
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<ReportRow>,
    /// Populated only by recovery experiments.
    pub recovery: Vec<RecoveryPoint>,
}

#[derive(Debug, Clone)]
struct RowSpec {
    label: String,
    method: Method,
    s0: f64,
}

fn row_specs(setting: &Setting, methods: &[Method]) -> Vec<RowSpec> {
    let mut rows = Vec::new();
    let tag_s0 = setting.s0_values.len() > 1;
    for &method in methods {
        if method.is_annealed() {
            for &s0 in &setting.s0_values {
                let label = if tag_s0 {
                    format!("{}_s0={}", method.name(), s0)
                } else {
                    method.name().to_string()
                };
                rows.push(RowSpec { label, method, s0 });
            }
        } else {
            rows.push(RowSpec {
                label: method.name().to_string(),
                method,
                s0: setting.s0_values.first().copied().unwrap_or(-1.0),
            });
        }
    }
    rows
}

#[derive(Debug, Clone)]
struct RowOutcome {
    ari: f64,
    runtime: f64,
    recovery: Option<f64>,
}

/// SplitMix64 step: derives a child stream from (seed, index).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_trial(
    setting: &Setting,
    rows: &[RowSpec],
    cfg: &ExperimentConfig,
    trial_seed: u64,
) -> Vec<Result<RowOutcome>> {
    let shared = (|| -> Result<_> {
        let sample = sample_mixture(&MixtureSpec {
            family: setting.family,
            centers: setting.centers.clone(),
            n_per_cluster: setting.n_per_cluster,
            seed: child_seed(trial_seed, 0),
        })?;
        // One preprocessed dataset and one initialization feed every method,
        // so peers start from matched state.
        let data = sample.data.clamped_to(&setting.bregman);
        let init = init_centers(
            &data,
            setting.centers.k(),
            child_seed(trial_seed, 1),
            InitStrategy::UniformRange,
        )?;
        Ok((data, sample.labels, init))
    })();
    let (data, truth, init) = match shared {
        Ok(v) => v,
        Err(e) => return rows.iter().map(|_| Err(e.clone())).collect(),
    };

    rows.iter()
        .map(|row| {
            let gen = match row.method {
                Method::Lloyd | Method::Power => Generator::SquaredEuclidean,
                Method::BregmanHard | Method::BregmanPower => setting.bregman,
            };
            let opts = FitOptions {
                schedule: AnnealingSchedule::new(row.s0, cfg.eta)?,
                max_iter: cfg.max_iter,
                rel_tol: cfg.rel_tol,
                seed: 0,
                init: InitStrategy::UniformRange,
            };
            let fit = if row.method.is_annealed() {
                fit_annealed_from(&data, &gen, init.clone(), &opts)?
            } else {
                fit_hard_from(&data, &gen, init.clone(), &opts)?
            };
            let ari = adjusted_rand_index(&fit.labels, &truth)?;
            let recovery = if setting.record_recovery {
                Some(centroid_divergence(
                    &setting.bregman,
                    &setting.centers,
                    &fit.centroids,
                )?)
            } else {
                None
            };
            Ok(RowOutcome {
                ari,
                runtime: if cfg.measure_runtime { fit.wall_time } else { 0.0 },
                recovery,
            })
        })
        .collect()
}

/// Runs the full grid: samples, fits, scores, and aggregates.
///
/// Trials execute in parallel; aggregation folds them in trial order so the
/// report is identical to a sequential run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrialReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidSpec("trials must be at least 1".into()));
    }
    if cfg.methods.is_empty() {
        return Err(Error::InvalidSpec("at least one method is required".into()));
    }
    let settings = cfg.experiment.settings();
    let mut rows = Vec::new();
    let mut recovery = Vec::new();

    for (si, setting) in settings.iter().enumerate() {
        let specs = row_specs(setting, &cfg.methods);
        let setting_seed = child_seed(cfg.seed, si as u64);
        let outcomes: Vec<Vec<Result<RowOutcome>>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(setting, &specs, cfg, child_seed(setting_seed, t as u64)))
            .collect();

        let mut best_recovery = f64::INFINITY;
        for (ri, spec) in specs.iter().enumerate() {
            let mut aris = Vec::with_capacity(cfg.trials);
            let mut runtimes = Vec::with_capacity(cfg.trials);
            let mut failures = 0usize;
            for trial in &outcomes {
                match &trial[ri] {
                    Ok(out) => {
                        aris.push(out.ari);
                        runtimes.push(out.runtime);
                        if let Some(d) = out.recovery {
                            if d < best_recovery {
                                best_recovery = d;
                            }
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
            let n_ok = aris.len();
            let mean_ari = mean(&aris);
            let sd_ari = if n_ok >= 2 {
                sample_sd(&aris, mean_ari) / (n_ok as f64).sqrt()
            } else {
                0.0
            };
            rows.push(ReportRow {
                method: spec.label.clone(),
                setting: setting.label.clone(),
                mean_ari,
                sd_ari,
                mean_runtime_s: mean(&runtimes),
                trials: n_ok,
                failures,
            });
        }
        if setting.record_recovery && best_recovery.is_finite() {
            recovery.push(RecoveryPoint {
                n_per_cluster: setting.n_per_cluster,
                best_divergence: best_recovery,
            });
        }
    }

    Ok(TrialReport {
        experiment: cfg.experiment.id().to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        rows,
        recovery,
    })
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_sd(values: &[f64], mean: f64) -> f64 {
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn child_seed_is_stable_and_spread() {
        assert_eq!(child_seed(0, 0), child_seed(0, 0));
        assert_ne!(child_seed(0, 0), child_seed(0, 1));
        assert_ne!(child_seed(0, 0), child_seed(1, 0));
    }

    #[test]
    fn grid_row_counts_match_recipes() {
        assert_eq!(Experiment::ExpFamilies.settings().len(), 4);
        assert_eq!(Experiment::GammaShapeSweep.settings().len(), 20);
        let dims = Experiment::DimensionSweep.settings();
        assert_eq!(dims.len(), 5);
        let specs = row_specs(&dims[0], &Experiment::DimensionSweep.default_methods());
        assert_eq!(specs.len(), 10);
        assert!(specs.iter().any(|r| r.label == "power_s0=-3"));
    }

    #[test]
    fn degenerate_gaussian_gets_perfect_ari() {
        let grid = CustomGrid {
            family: MixtureFamily::Gaussian { sigma2: 0.0 },
            prototype: Centroids::from_rows(&[vec![0.0, 0.0], vec![10.0, 10.0]]),
            dims: vec![2],
            s0_values: vec![-1.0],
            n_per_cluster: 5,
        };
        let mut cfg = ExperimentConfig::new(Experiment::Custom(grid), 3);
        cfg.trials = 1;
        let report = run_experiment(&cfg).unwrap();
        for row in &report.rows {
            assert_eq!(row.mean_ari, 1.0, "method {} missed", row.method);
            assert_eq!(row.trials, 1);
            assert_eq!(row.failures, 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let grid = CustomGrid {
            family: MixtureFamily::Poisson,
            prototype: Centroids::from_rows(&[vec![5.0, 5.0], vec![30.0, 30.0]]),
            dims: vec![2],
            s0_values: vec![-1.0],
            n_per_cluster: 10,
        };
        let mut cfg = ExperimentConfig::new(Experiment::Custom(grid), 11);
        cfg.trials = 4;
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recovery_points_cover_the_n_grid() {
        let mut cfg = ExperimentConfig::new(Experiment::CentroidRecovery, 5);
        cfg.trials = 2;
        let report = run_experiment(&cfg).unwrap();
        let ns: Vec<usize> = report.recovery.iter().map(|r| r.n_per_cluster).collect();
        assert_eq!(ns, vec![4, 8, 16, 32, 64, 128]);
        for point in &report.recovery {
            assert!(point.best_divergence >= 0.0);
        }
    }
}
