//! Exponential-family mixture samplers.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Binomial, Distribution, Gamma, Normal, Poisson};

use crate::divergence::{Centroids, Dataset, Generator};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Sampling family with its fixed shape/dispersion parameter. Cluster means
/// come from the mixture spec's centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixtureFamily {
    Gaussian { sigma2: f64 },
    Binomial { trials: u64 },
    Poisson,
    Gamma { shape: f64 },
}

impl MixtureFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MixtureFamily::Gaussian { .. } => "gaussian",
            MixtureFamily::Binomial { .. } => "binomial",
            MixtureFamily::Poisson => "poisson",
            MixtureFamily::Gamma { .. } => "gamma",
        }
    }

    /// The Bregman generator whose exponential family matches this sampler.
    pub fn matching_generator(&self) -> Generator {
        match self {
            MixtureFamily::Gaussian { .. } => Generator::SquaredEuclidean,
            MixtureFamily::Binomial { trials } => Generator::Bernoulli {
                trials: *trials as f64,
            },
            MixtureFamily::Poisson => Generator::RelativeEntropy,
            MixtureFamily::Gamma { shape } => Generator::GammaShape { shape: *shape },
        }
    }

    fn validate_mean(&self, mean: f64) -> Result<()> {
        let ok = match self {
            MixtureFamily::Gaussian { sigma2 } => *sigma2 >= 0.0 && mean.is_finite(),
            MixtureFamily::Binomial { trials } => mean > 0.0 && mean < *trials as f64,
            MixtureFamily::Poisson => mean > 0.0,
            MixtureFamily::Gamma { shape } => *shape > 0.0 && mean > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "mean {mean} is invalid for the {} family",
                self.name()
            )))
        }
    }
}

/// A balanced mixture: `n_per_cluster` coordinate-wise independent draws
/// around each center row.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub family: MixtureFamily,
    pub centers: Centroids,
    pub n_per_cluster: usize,
    pub seed: u64,
}

/// A dataset with ground-truth cluster labels attached.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub data: Dataset,
    pub labels: Vec<usize>,
}

/// Draws a mixture sample. Deterministic given the seed; points are emitted
/// cluster by cluster with labels matching center rows.
pub fn sample_mixture(spec: &MixtureSpec) -> Result<LabeledDataset> {
    if spec.n_per_cluster == 0 {
        return Err(Error::InvalidSpec("n_per_cluster must be positive".into()));
    }
    let k = spec.centers.k();
    let p = spec.centers.dim();
    if k == 0 || p == 0 {
        return Err(Error::InvalidSpec("centers must be a nonempty matrix".into()));
    }
    for j in 0..k {
        for &m in spec.centers.row(j) {
            spec.family.validate_mean(m)?;
        }
    }

    let mut rng = StdRng::seed_from_u64(spec.seed);
    let n = k * spec.n_per_cluster;
    let mut values = Vec::with_capacity(n * p);
    let mut labels = Vec::with_capacity(n);
    for j in 0..k {
        let center = spec.centers.row(j);
        for _ in 0..spec.n_per_cluster {
            for &mean in center {
                values.push(draw(&spec.family, mean, &mut rng));
            }
            labels.push(j);
        }
    }
    Ok(LabeledDataset {
        data: Dataset::new(Matrix::from_vec(n, p, values)),
        labels,
    })
}

fn draw(family: &MixtureFamily, mean: f64, rng: &mut StdRng) -> f64 {
    match family {
        MixtureFamily::Gaussian { sigma2 } => {
            if *sigma2 == 0.0 {
                mean
            } else {
                Normal::new(mean, sigma2.sqrt()).unwrap().sample(rng)
            }
        }
        MixtureFamily::Binomial { trials } => {
            let prob = mean / *trials as f64;
            Binomial::new(*trials, prob).unwrap().sample(rng) as f64
        }
        MixtureFamily::Poisson => Poisson::new(mean).unwrap().sample(rng),
        MixtureFamily::Gamma { shape } => {
            Gamma::new(*shape, mean / shape).unwrap().sample(rng)
        }
    }
}

/// Embeds a low-dimensional center prototype into `dim` dimensions, dividing
/// the center vectors (and hence every inter-center gap) by
/// `sqrt(dim / proto_dim)` so the clustering problem does not become easier
/// as coordinates accumulate. Center ratios are preserved, which for
/// mean-coupled noise (Poisson, Gamma) also shrinks the per-coordinate
/// dispersion.
pub fn scale_separation(prototype: &Centroids, dim: usize) -> Centroids {
    assert!(dim >= 1, "target dimension must be at least 1");
    let k = prototype.k();
    let q = prototype.dim();
    let scale = (dim as f64 / q as f64).sqrt();
    let mut out = Matrix::zeros(k, dim);
    for j in 0..k {
        let proto = prototype.row(j);
        for c in 0..dim {
            out.set(j, c, proto[c % q] / scale);
        }
    }
    Centroids::new(out)
}
