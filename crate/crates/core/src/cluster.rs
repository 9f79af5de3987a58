//! Center-based clustering fits.
//!
//! Two code paths cover four methods:
//! - the annealed MM path ([`fit_annealed`]): soft weights from power-mean
//!   gradients, weighted-average center updates, and a geometric schedule
//!   driving the exponent toward the hard objective. With the squared
//!   Euclidean generator this is power k-means; with any other generator it
//!   is Bregman power k-means.
//! - the hard alternation path ([`fit_hard`]): argmin assignment and
//!   per-cluster means. With squared Euclidean this is exactly Lloyd's
//!   algorithm; otherwise Bregman hard clustering.
//!
//! Both paths are deterministic given their inputs: initialization is seeded,
//! ties break toward the lowest cluster index, and centroid reductions run in
//! a fixed sequential order.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::divergence::{Dataset, Generator};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::power_mean::{power_mean, power_mean_grad};

pub use crate::divergence::Centroids;

/// Deepest exponent the default annealing schedule reaches. Past this point
/// the smoothed objective is within machine noise of the hard objective for
/// realistically separated divergences.
pub const DEFAULT_EXPONENT_FLOOR: f64 = -150.0;

/// A weight column summing below this underflow floor marks a degenerate
/// soft cluster; the fit keeps that center unchanged for the iteration.
const WEIGHT_FLOOR: f64 = 1e-300;

/// Geometric exponent schedule: `s <- eta * s` after every MM iteration,
/// clamped at `floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealingSchedule {
    pub s0: f64,
    pub eta: f64,
    pub floor: f64,
}

impl AnnealingSchedule {
    pub fn new(s0: f64, eta: f64) -> Result<Self> {
        Self::with_floor(s0, eta, DEFAULT_EXPONENT_FLOOR)
    }

    pub fn with_floor(s0: f64, eta: f64, floor: f64) -> Result<Self> {
        if !s0.is_finite() || s0 >= 0.0 {
            return Err(Error::InvalidSchedule(format!("s0 must be negative, got {s0}")));
        }
        if !eta.is_finite() || eta <= 1.0 {
            return Err(Error::InvalidSchedule(format!("eta must exceed 1, got {eta}")));
        }
        if floor > s0 {
            return Err(Error::InvalidSchedule(format!(
                "floor {floor} must not exceed s0 {s0}"
            )));
        }
        Ok(Self { s0, eta, floor })
    }
}

impl Default for AnnealingSchedule {
    fn default() -> Self {
        Self {
            s0: -1.0,
            eta: 1.1,
            floor: DEFAULT_EXPONENT_FLOOR,
        }
    }
}

/// How initial centers are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    /// Each coordinate uniform over the per-column data range.
    UniformRange,
    /// k distinct data rows, sampled without replacement.
    SamplePoints,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub schedule: AnnealingSchedule,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub seed: u64,
    pub init: InitStrategy,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            schedule: AnnealingSchedule::default(),
            max_iter: 500,
            rel_tol: 1e-6,
            seed: 0,
            init: InitStrategy::UniformRange,
        }
    }
}

impl FitOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub centroids: Centroids,
    pub labels: Vec<usize>,
    /// Objective before each update, evaluated at that iteration's exponent
    /// (the hard objective for [`fit_hard`]); one trailing entry for the
    /// final state, so `objective_trace.len() == iterations + 1`.
    pub objective_trace: Vec<f64>,
    /// Exponent used at each recorded objective; empty for hard fits.
    pub s_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Measured wall time in seconds; excluded from determinism comparisons.
    pub wall_time: f64,
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(())
}

fn rel_change(prev: f64, next: f64) -> f64 {
    (prev - next).abs() / (1.0 + prev.abs())
}

/// Draws initial centers. Deterministic given the seed.
pub fn init_centers(
    data: &Dataset,
    k: usize,
    seed: u64,
    strategy: InitStrategy,
) -> Result<Centroids> {
    check_k(k, data.len())?;
    let p = data.dim();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Matrix::zeros(k, p);
    match strategy {
        InitStrategy::UniformRange => {
            let ranges = data.column_ranges();
            for j in 0..k {
                for (c, &(lo, hi)) in ranges.iter().enumerate() {
                    let u: f64 = rng.gen();
                    out.set(j, c, lo + u * (hi - lo));
                }
            }
        }
        InitStrategy::SamplePoints => {
            let picks = rand::seq::index::sample(&mut rng, data.len(), k);
            for (j, i) in picks.iter().enumerate() {
                out.row_mut(j).copy_from_slice(data.row(i));
            }
        }
    }
    Ok(Centroids::new(out))
}

/// MM weights: row `i` is the power-mean gradient of divergence row `i`, so
/// `sum_j div[i][j] * w[i][j] = M_s(div row i)`.
pub fn mm_weights(divergences: &Matrix, s: f64) -> Result<Matrix> {
    let mut out = Matrix::zeros(divergences.rows(), divergences.cols());
    for i in 0..divergences.rows() {
        let grad = power_mean_grad(divergences.row(i), s)?;
        out.row_mut(i).copy_from_slice(&grad);
    }
    Ok(out)
}

/// Weighted-average center update: row `j` is
/// `sum_i w[i][j] x_i / sum_i w[i][j]`, accumulated sequentially over `i`.
pub fn update_centers(data: &Dataset, weights: &Matrix) -> Result<Centroids> {
    match update_centers_inner(data, weights, None) {
        UpdateOutcome::Ok(c) => Ok(c),
        UpdateOutcome::Degenerate(j) => Err(Error::DegenerateCluster { cluster: j }),
    }
}

enum UpdateOutcome {
    Ok(Centroids),
    Degenerate(usize),
}

fn update_centers_inner(
    data: &Dataset,
    weights: &Matrix,
    previous: Option<&Centroids>,
) -> UpdateOutcome {
    assert_eq!(weights.rows(), data.len(), "weight rows must match data");
    let n = data.len();
    let k = weights.cols();
    let p = data.dim();
    let mut sums = Matrix::zeros(k, p);
    let mut col_sums = vec![0.0_f64; k];
    for i in 0..n {
        let x = data.row(i);
        let w = weights.row(i);
        for j in 0..k {
            let wij = w[j];
            col_sums[j] += wij;
            let row = sums.row_mut(j);
            for (c, &xv) in x.iter().enumerate() {
                row[c] += wij * xv;
            }
        }
    }
    let mut out = Matrix::zeros(k, p);
    for (j, &col_sum) in col_sums.iter().enumerate() {
        if col_sum < WEIGHT_FLOOR {
            match previous {
                Some(prev) => out.row_mut(j).copy_from_slice(prev.row(j)),
                None => return UpdateOutcome::Degenerate(j),
            }
        } else {
            let inv = 1.0 / col_sum;
            for (c, &v) in sums.row(j).iter().enumerate() {
                out.set(j, c, v * inv);
            }
        }
    }
    UpdateOutcome::Ok(Centroids::new(out))
}

/// Labels each point with its divergence-argmin center, ties to the lowest index.
pub fn assign(data: &Dataset, centers: &Centroids, gen: &Generator) -> Result<Vec<usize>> {
    let mut labels = Vec::with_capacity(data.len());
    for i in 0..data.len() {
        let x = data.row(i);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for j in 0..centers.k() {
            let d = gen.divergence(x, centers.row(j))?;
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        labels.push(best);
    }
    Ok(labels)
}

/// Annealed objective `sum_i M_s(d(x_i, theta_1), ..., d(x_i, theta_k))`,
/// with the divergences floored exactly as in the fit loop. Accepts any
/// `s < 0` (or `s = 1`), including exponents far beyond the schedule floor.
pub fn objective(data: &Dataset, centers: &Centroids, s: f64, gen: &Generator) -> Result<f64> {
    let div = gen.divergence_matrix(data, centers)?;
    let mut total = 0.0;
    for i in 0..div.rows() {
        total += power_mean(div.row(i), s)?;
    }
    Ok(total)
}

/// Hard objective `sum_i min_j d(x_i, theta_j)` on the floored divergences.
pub fn hard_objective(data: &Dataset, centers: &Centroids, gen: &Generator) -> Result<f64> {
    let div = gen.divergence_matrix(data, centers)?;
    let mut total = 0.0;
    for i in 0..div.rows() {
        total += div.row(i).iter().cloned().fold(f64::INFINITY, f64::min);
    }
    Ok(total)
}

/// Annealed MM fit from a seeded initialization.
pub fn fit_annealed(
    data: &Dataset,
    k: usize,
    gen: &Generator,
    opts: &FitOptions,
) -> Result<FitResult> {
    let init = init_centers(data, k, opts.seed, opts.init)?;
    fit_annealed_from(data, gen, init, opts)
}

/// Annealed MM fit from explicit initial centers.
///
/// Per iteration: divergence matrix, MM weights at the current exponent,
/// weighted center update, then `s <- max(eta * s, floor)`. The fit stops
/// when the relative objective change between consecutive iterations falls
/// below `rel_tol`; since each iteration also deepens the exponent, a stall
/// means both the centers and the landscape have stopped moving.
pub fn fit_annealed_from(
    data: &Dataset,
    gen: &Generator,
    init: Centroids,
    opts: &FitOptions,
) -> Result<FitResult> {
    let start = Instant::now();
    let k = init.k();
    check_k(k, data.len())?;
    let sched = opts.schedule;
    AnnealingSchedule::with_floor(sched.s0, sched.eta, sched.floor)?;

    let mut theta = init;
    let mut s = sched.s0;
    let mut objective_trace = Vec::new();
    let mut s_trace = Vec::new();
    let mut prev: Option<f64> = None;
    let mut iterations = 0usize;
    let mut converged = false;

    loop {
        let div = gen.divergence_matrix(data, &theta)?;
        let mut f = 0.0;
        for i in 0..div.rows() {
            f += power_mean(div.row(i), s)?;
        }
        objective_trace.push(f);
        s_trace.push(s);

        if let Some(pf) = prev {
            if rel_change(pf, f) < opts.rel_tol {
                converged = true;
                break;
            }
        }
        if iterations >= opts.max_iter {
            break;
        }

        let weights = mm_weights(&div, s)?;
        theta = match update_centers_inner(data, &weights, Some(&theta)) {
            UpdateOutcome::Ok(c) => c,
            UpdateOutcome::Degenerate(j) => return Err(Error::DegenerateCluster { cluster: j }),
        };
        prev = Some(f);
        s = (sched.eta * s).max(sched.floor);
        iterations += 1;
    }

    let labels = assign(data, &theta, gen)?;
    Ok(FitResult {
        centroids: theta,
        labels,
        objective_trace,
        s_trace,
        iterations,
        converged,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Hard alternation fit from a seeded initialization.
pub fn fit_hard(data: &Dataset, k: usize, gen: &Generator, opts: &FitOptions) -> Result<FitResult> {
    let init = init_centers(data, k, opts.seed, opts.init)?;
    fit_hard_from(data, gen, init, opts)
}

/// Hard alternation fit from explicit initial centers: argmin assignment,
/// per-cluster means, stop when assignments repeat. An emptied cluster keeps
/// its center unchanged, matching the plain Lloyd/Bregman-hard baselines the
/// annealed methods are compared against.
pub fn fit_hard_from(
    data: &Dataset,
    gen: &Generator,
    init: Centroids,
    opts: &FitOptions,
) -> Result<FitResult> {
    let start = Instant::now();
    let k = init.k();
    check_k(k, data.len())?;

    let mut theta = init;
    let mut labels = assign(data, &theta, gen)?;
    let mut objective_trace = vec![hard_objective_for(data, &theta, &labels, gen)?];
    let mut iterations = 0usize;
    let mut converged = false;

    while iterations < opts.max_iter {
        theta = hard_update(data, &labels, k, &theta);
        let next = assign(data, &theta, gen)?;
        iterations += 1;
        objective_trace.push(hard_objective_for(data, &theta, &next, gen)?);
        let stable = next == labels;
        labels = next;
        if stable {
            converged = true;
            break;
        }
    }

    Ok(FitResult {
        centroids: theta,
        labels,
        objective_trace,
        s_trace: Vec::new(),
        iterations,
        converged,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn hard_objective_for(
    data: &Dataset,
    centers: &Centroids,
    labels: &[usize],
    gen: &Generator,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, &j) in labels.iter().enumerate() {
        total += gen.divergence(data.row(i), centers.row(j))?;
    }
    Ok(total)
}

/// Per-cluster means; an emptied cluster keeps its current center.
fn hard_update(
    data: &Dataset,
    labels: &[usize],
    k: usize,
    current: &Centroids,
) -> Centroids {
    let p = data.dim();
    let mut sums = Matrix::zeros(k, p);
    let mut counts = vec![0usize; k];
    for (i, &j) in labels.iter().enumerate() {
        counts[j] += 1;
        let row = sums.row_mut(j);
        for (c, &v) in data.row(i).iter().enumerate() {
            row[c] += v;
        }
    }

    let mut out = Matrix::zeros(k, p);
    for (j, &count) in counts.iter().enumerate() {
        if count == 0 {
            out.row_mut(j).copy_from_slice(current.row(j));
        } else {
            for (c, &v) in sums.row(j).iter().enumerate() {
                out.set(j, c, v / count as f64);
            }
        }
    }
    Centroids::new(out)
}
