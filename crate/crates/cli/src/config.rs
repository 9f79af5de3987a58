//! Run configuration: a JSON document validated strictly before execution.
//! Unknown keys are rejected everywhere.

use std::path::PathBuf;

use breg_core::{Centroids, CustomGrid, Experiment, Generator, Method, MixtureFamily};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: InputSection,
    #[serde(default)]
    pub method: Option<MethodName>,
    #[serde(default)]
    pub divergence: Option<DivergenceSpec>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub s0: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub methods: Option<Vec<MethodName>>,
    /// Record wall-clock timings in output files. Off by default so that
    /// reruns of the same config produce byte-identical files.
    #[serde(default)]
    pub timings: bool,
    pub output: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub label_column: Option<usize>,
    #[serde(default)]
    pub feature_columns: Option<Vec<usize>>,
    #[serde(default)]
    pub positive_filter: bool,
    #[serde(default)]
    pub experiment: Option<ExperimentRef>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ExperimentRef {
    Id(u32),
    Custom(CustomExperiment),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomExperiment {
    pub family: FamilySpec,
    pub prototype: Vec<Vec<f64>>,
    pub dims: Vec<usize>,
    pub s0: Vec<f64>,
    pub n_per_cluster: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Lloyd,
    BregmanHard,
    Power,
    BregmanPower,
}

impl MethodName {
    pub fn to_method(self) -> Method {
        match self {
            MethodName::Lloyd => Method::Lloyd,
            MethodName::BregmanHard => Method::BregmanHard,
            MethodName::Power => Method::Power,
            MethodName::BregmanPower => Method::BregmanPower,
        }
    }

    pub fn name(self) -> &'static str {
        self.to_method().name()
    }

    pub fn is_annealed(self) -> bool {
        matches!(self, MethodName::Power | MethodName::BregmanPower)
    }

    pub fn is_euclidean(self) -> bool {
        matches!(self, MethodName::Lloyd | MethodName::Power)
    }
}

/// Divergence family plus its parameter, e.g. `{"family": "gamma", "shape": 4.0}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceSpec {
    pub family: String,
    #[serde(default)]
    pub trials: Option<f64>,
    #[serde(default)]
    pub shape: Option<f64>,
}

impl DivergenceSpec {
    pub fn to_generator(&self) -> Result<Generator, CliError> {
        let reject = |param: &str| {
            Err(CliError::config(format!(
                "divergence family {:?} does not take {param}",
                self.family
            )))
        };
        match self.family.as_str() {
            "squared_euclidean" => {
                if self.trials.is_some() {
                    return reject("trials");
                }
                if self.shape.is_some() {
                    return reject("shape");
                }
                Ok(Generator::SquaredEuclidean)
            }
            "relative_entropy" => {
                if self.trials.is_some() {
                    return reject("trials");
                }
                if self.shape.is_some() {
                    return reject("shape");
                }
                Ok(Generator::RelativeEntropy)
            }
            "bernoulli" => {
                if self.shape.is_some() {
                    return reject("shape");
                }
                let trials = self
                    .trials
                    .ok_or_else(|| CliError::config("bernoulli divergence requires trials"))?;
                if trials <= 0.0 {
                    return Err(CliError::config("bernoulli trials must be positive"));
                }
                Ok(Generator::Bernoulli { trials })
            }
            "gamma" => {
                if self.trials.is_some() {
                    return reject("trials");
                }
                let shape = self
                    .shape
                    .ok_or_else(|| CliError::config("gamma divergence requires shape"))?;
                if shape <= 0.0 {
                    return Err(CliError::config("gamma shape must be positive"));
                }
                Ok(Generator::GammaShape { shape })
            }
            other => Err(CliError::config(format!("unknown divergence family {other:?}"))),
        }
    }
}

/// Sampling family plus its parameter, e.g. `{"family": "binomial", "trials": 200}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub sigma2: Option<f64>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub shape: Option<f64>,
}

impl FamilySpec {
    pub fn to_family(&self) -> Result<MixtureFamily, CliError> {
        let check_absent = |cond: bool, param: &str| {
            if cond {
                Err(CliError::config(format!(
                    "mixture family {:?} does not take {param}",
                    self.family
                )))
            } else {
                Ok(())
            }
        };
        match self.family.as_str() {
            "gaussian" => {
                check_absent(self.trials.is_some(), "trials")?;
                check_absent(self.shape.is_some(), "shape")?;
                let sigma2 = self
                    .sigma2
                    .ok_or_else(|| CliError::config("gaussian family requires sigma2"))?;
                if sigma2 < 0.0 {
                    return Err(CliError::config("sigma2 must be nonnegative"));
                }
                Ok(MixtureFamily::Gaussian { sigma2 })
            }
            "binomial" => {
                check_absent(self.sigma2.is_some(), "sigma2")?;
                check_absent(self.shape.is_some(), "shape")?;
                let trials = self
                    .trials
                    .ok_or_else(|| CliError::config("binomial family requires trials"))?;
                Ok(MixtureFamily::Binomial { trials })
            }
            "poisson" => {
                check_absent(self.sigma2.is_some(), "sigma2")?;
                check_absent(self.trials.is_some(), "trials")?;
                check_absent(self.shape.is_some(), "shape")?;
                Ok(MixtureFamily::Poisson)
            }
            "gamma" => {
                check_absent(self.sigma2.is_some(), "sigma2")?;
                check_absent(self.trials.is_some(), "trials")?;
                let shape = self
                    .shape
                    .ok_or_else(|| CliError::config("gamma family requires shape"))?;
                Ok(MixtureFamily::Gamma { shape })
            }
            other => Err(CliError::config(format!("unknown mixture family {other:?}"))),
        }
    }
}

impl ExperimentRef {
    pub fn to_experiment(&self) -> Result<Experiment, CliError> {
        match self {
            ExperimentRef::Id(1) => Ok(Experiment::ExpFamilies),
            ExperimentRef::Id(2) => Ok(Experiment::GammaShapeSweep),
            ExperimentRef::Id(3) => Ok(Experiment::DimensionSweep),
            ExperimentRef::Id(4) => Ok(Experiment::CentroidRecovery),
            ExperimentRef::Id(other) => Err(CliError::config(format!(
                "experiment id must be 1-4 or a custom grid, got {other}"
            ))),
            ExperimentRef::Custom(custom) => {
                if custom.prototype.is_empty() || custom.dims.is_empty() || custom.s0.is_empty() {
                    return Err(CliError::config(
                        "custom experiment requires nonempty prototype, dims, and s0",
                    ));
                }
                Ok(Experiment::Custom(CustomGrid {
                    family: custom.family.to_family()?,
                    prototype: Centroids::from_rows(&custom.prototype),
                    dims: custom.dims.clone(),
                    s0_values: custom.s0.clone(),
                    n_per_cluster: custom.n_per_cluster,
                }))
            }
        }
    }
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}
