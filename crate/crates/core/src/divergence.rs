//! Bregman divergence generators.
//!
//! Each generator pairs a convex function `phi` with its gradient and the
//! closed-form divergence `d(x, y) = phi(x) - phi(y) - <grad phi(y), x - y>`.
//! All shipped families are separable: the scalar forms act coordinate-wise
//! and sum. Data may sit on the continuous closure of the domain (e.g. a
//! Poisson count of 0 via the `0 * ln 0 = 0` convention) while centers must
//! stay strictly inside it.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Floor applied to `divergence_matrix` entries so that negative powers of
/// exact zeros stay finite downstream. Scalar `divergence` is not floored.
pub const DIVERGENCE_FLOOR: f64 = 1e-10;

/// Clamp used when preprocessing raw samples into a domain interior.
pub const DATA_CLAMP: f64 = 1e-8;

/// Per-coordinate domain of a generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    AllReals,
    StrictlyPositive,
    /// Open interval `(0, n)`.
    OpenInterval(f64),
}

/// A Bregman-divergence generator: one row of the divergence catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// `phi(x) = |x|^2`, the squared Euclidean distance (Gaussian family).
    SquaredEuclidean,
    /// `phi(x) = x ln x - x`, relative entropy / generalized KL (Poisson family).
    RelativeEntropy,
    /// `phi(x) = x ln x + (n - x) ln(n - x)` on `(0, n)` (binomial family with
    /// `trials` draws; `trials = 1` is the Bernoulli case).
    Bernoulli { trials: f64 },
    /// `phi(x) = -shape * ln x`, the shape-scaled Itakura-Saito divergence
    /// (Gamma family). Affine terms of phi never change the divergence, so the
    /// normalization drops them.
    GammaShape { shape: f64 },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::SquaredEuclidean => "squared_euclidean",
            Generator::RelativeEntropy => "relative_entropy",
            Generator::Bernoulli { .. } => "bernoulli",
            Generator::GammaShape { .. } => "gamma",
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Generator::SquaredEuclidean => Domain::AllReals,
            Generator::RelativeEntropy | Generator::GammaShape { .. } => Domain::StrictlyPositive,
            Generator::Bernoulli { trials } => Domain::OpenInterval(*trials),
        }
    }

    /// True when `v` lies strictly inside the domain (valid center location).
    pub fn in_interior(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match self {
            Generator::SquaredEuclidean => true,
            Generator::RelativeEntropy | Generator::GammaShape { .. } => v > 0.0,
            Generator::Bernoulli { trials } => v > 0.0 && v < *trials,
        }
    }

    /// True when `v` lies in the closure where the divergence formula extends
    /// continuously in its first argument (valid data location).
    pub fn in_data_domain(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match self {
            Generator::SquaredEuclidean => true,
            Generator::RelativeEntropy => v >= 0.0,
            // ln(y/x) diverges as x -> 0, so Gamma data must stay positive.
            Generator::GammaShape { .. } => v > 0.0,
            Generator::Bernoulli { trials } => (0.0..=*trials).contains(&v),
        }
    }

    /// Clamps a raw sample into the domain interior.
    pub fn clamp_to_interior(&self, v: f64) -> f64 {
        match self {
            Generator::SquaredEuclidean => v,
            Generator::RelativeEntropy | Generator::GammaShape { .. } => v.max(DATA_CLAMP),
            Generator::Bernoulli { trials } => v.clamp(DATA_CLAMP, trials - DATA_CLAMP),
        }
    }

    fn interior_requirement(&self) -> &'static str {
        match self {
            Generator::SquaredEuclidean => "finite",
            Generator::RelativeEntropy | Generator::GammaShape { .. } => "strictly positive",
            Generator::Bernoulli { .. } => "strictly inside (0, trials)",
        }
    }

    fn data_requirement(&self) -> &'static str {
        match self {
            Generator::SquaredEuclidean => "finite",
            Generator::RelativeEntropy => "nonnegative",
            Generator::GammaShape { .. } => "strictly positive",
            Generator::Bernoulli { .. } => "inside [0, trials]",
        }
    }

    fn check_data_vec(&self, x: &[f64], location: &str) -> Result<()> {
        for (c, &v) in x.iter().enumerate() {
            if !self.in_data_domain(v) {
                return Err(Error::Domain {
                    family: self.name(),
                    value: v,
                    requirement: self.data_requirement(),
                    location: format!("{location}, coordinate {c}"),
                });
            }
        }
        Ok(())
    }

    fn check_interior_vec(&self, x: &[f64], location: &str) -> Result<()> {
        for (c, &v) in x.iter().enumerate() {
            if !self.in_interior(v) {
                return Err(Error::Domain {
                    family: self.name(),
                    value: v,
                    requirement: self.interior_requirement(),
                    location: format!("{location}, coordinate {c}"),
                });
            }
        }
        Ok(())
    }

    fn phi_scalar(&self, v: f64) -> f64 {
        match self {
            Generator::SquaredEuclidean => v * v,
            Generator::RelativeEntropy => xlnx(v) - v,
            Generator::Bernoulli { trials } => xlnx(v) + xlnx(trials - v),
            Generator::GammaShape { shape } => -shape * v.ln(),
        }
    }

    fn phi_grad_scalar(&self, v: f64) -> f64 {
        match self {
            Generator::SquaredEuclidean => 2.0 * v,
            Generator::RelativeEntropy => v.ln(),
            Generator::Bernoulli { trials } => (v / (trials - v)).ln(),
            Generator::GammaShape { shape } => -shape / v,
        }
    }

    /// Closed-form scalar divergence; callers must have validated domains.
    #[inline]
    fn divergence_scalar(&self, x: f64, y: f64) -> f64 {
        match self {
            Generator::SquaredEuclidean => {
                let d = x - y;
                d * d
            }
            Generator::RelativeEntropy => {
                let t = if x == 0.0 { 0.0 } else { x * (x / y).ln() };
                t - x + y
            }
            Generator::Bernoulli { trials } => {
                let lo = if x == 0.0 { 0.0 } else { x * (x / y).ln() };
                let hi = if x == *trials {
                    0.0
                } else {
                    (trials - x) * ((trials - x) / (trials - y)).ln()
                };
                lo + hi
            }
            Generator::GammaShape { shape } => shape * ((y / x).ln() + x / y - 1.0),
        }
    }

    /// Evaluates `phi` at a point, summed over coordinates.
    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        self.check_data_vec(x, "phi argument")?;
        Ok(x.iter().map(|&v| self.phi_scalar(v)).sum())
    }

    /// Coordinate-wise gradient of `phi`; requires a domain-interior point.
    pub fn phi_grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_interior_vec(x, "phi_grad argument")?;
        Ok(x.iter().map(|&v| self.phi_grad_scalar(v)).collect())
    }

    /// Closed-form divergence `d(x, y) >= 0`, zero iff `x == y`.
    ///
    /// `x` may sit on the domain closure; `y` must be interior.
    pub fn divergence(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        assert_eq!(x.len(), y.len(), "divergence arguments differ in length");
        self.check_data_vec(x, "divergence first argument")?;
        self.check_interior_vec(y, "divergence second argument")?;
        let mut total = 0.0;
        for (&xv, &yv) in x.iter().zip(y) {
            total += self.divergence_scalar(xv, yv);
        }
        // Closed forms can round a hair below zero when x is within a few ulps of y.
        Ok(total.max(0.0))
    }

    /// Pairwise divergence table: entry `(i, j) = d(data_i, center_j)`, floored
    /// at [`DIVERGENCE_FLOOR`] so downstream negative powers stay defined.
    pub fn divergence_matrix(&self, data: &Dataset, centers: &Centroids) -> Result<Matrix> {
        assert_eq!(
            data.dim(),
            centers.dim(),
            "data and centers differ in dimension"
        );
        for j in 0..centers.k() {
            self.check_interior_vec(centers.row(j), &format!("center {j}"))?;
        }
        for i in 0..data.len() {
            self.check_data_vec(data.row(i), &format!("data row {i}"))?;
        }
        let mut out = Matrix::zeros(data.len(), centers.k());
        for i in 0..data.len() {
            let x = data.row(i);
            for j in 0..centers.k() {
                let y = centers.row(j);
                let mut d = 0.0;
                for (&xv, &yv) in x.iter().zip(y) {
                    d += self.divergence_scalar(xv, yv);
                }
                out.set(i, j, d.max(DIVERGENCE_FLOOR));
            }
        }
        Ok(out)
    }
}

/// `x ln x` with the `0 ln 0 = 0` convention.
#[inline]
fn xlnx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

/// An `n x p` data matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Matrix,
}

impl Dataset {
    pub fn new(values: Matrix) -> Self {
        Self { values }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        Self {
            values: Matrix::from_rows(rows),
        }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.values.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.values
    }

    pub fn column_ranges(&self) -> Vec<(f64, f64)> {
        self.values.column_ranges()
    }

    /// Returns a copy with every entry clamped into `gen`'s domain interior.
    pub fn clamped_to(&self, gen: &Generator) -> Dataset {
        let mut m = self.values.clone();
        for i in 0..m.rows() {
            for v in m.row_mut(i) {
                *v = gen.clamp_to_interior(*v);
            }
        }
        Dataset { values: m }
    }
}

/// A `k x p` matrix of cluster centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroids {
    values: Matrix,
}

impl Centroids {
    pub fn new(values: Matrix) -> Self {
        Self { values }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        Self {
            values: Matrix::from_rows(rows),
        }
    }

    pub fn k(&self) -> usize {
        self.values.rows()
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    pub fn row(&self, j: usize) -> &[f64] {
        self.values.row(j)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.k()).map(|j| self.row(j).to_vec()).collect()
    }
}
