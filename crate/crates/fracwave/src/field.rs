//! Exact Gaussian sampling of `u(t, x)` (`d = 1`, `H0 = 1/2`) on
//! space-time grids and Monte Carlo estimates of expected suprema.
//!
//! Points are ordered time-major: index `i * nx + j` is `(t_i, x_j)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::kernels::{cov, KernelConfig};
use crate::params::{check_spatial_hurst, SpaceTimePoint};
use crate::stats::mean_stderr;

/// Largest grid accepted by [`assemble_cov`]; keeps the dense
/// factorization within a few tens of seconds.
pub const MAX_GRID_POINTS: usize = 4096;

pub const DEFAULT_JITTER_START: f64 = 1e-12;
pub const DEFAULT_JITTER_FACTOR: f64 = 10.0;
pub const DEFAULT_MAX_ATTEMPTS: usize = 7;
/// Largest admissible `jitter / mean(diag)`.
pub const MAX_RELATIVE_JITTER: f64 = 1e-6;

/// Relative tolerance for matching times and spatial offsets.
const LATTICE_TOL: f64 = 1e-9;

/// Product grid `{t_i} × {x0 + j dx}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    t_values: Vec<f64>,
    x0: f64,
    dx: f64,
    nx: usize,
}

impl GridSpec {
    /// `nx` points `x0, x0 + dx, ...` at every time in `t_values`.
    pub fn uniform(t_values: Vec<f64>, x0: f64, dx: f64, nx: usize) -> Result<Self> {
        ensure_finite("x0", x0)?;
        ensure_finite("dx", dx)?;
        if t_values.is_empty() || nx == 0 {
            return Err(Error::Grid("grid has no points".into()));
        }
        if !(dx > 0.0) {
            return Err(Error::Grid(format!("spacing {dx} must be positive")));
        }
        for &t in &t_values {
            ensure_finite("t", t)?;
            if !(t > 0.0) {
                return Err(Error::Grid(format!("time {t} must be positive")));
            }
        }
        if t_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("times must be strictly increasing".into()));
        }
        Ok(Self { t_values, x0, dx, nx })
    }

    /// Grid from explicit coordinates, which must be uniformly spaced.
    pub fn from_values(t_values: Vec<f64>, x_values: &[f64]) -> Result<Self> {
        match x_values {
            [] => Err(Error::Grid("no spatial coordinates".into())),
            [x] => Self::uniform(t_values, *x, 1.0, 1),
            [first, .., last] => {
                let n = x_values.len();
                let dx = (last - first) / (n - 1) as f64;
                for (j, &x) in x_values.iter().enumerate() {
                    let want = first + j as f64 * dx;
                    if (x - want).abs() > LATTICE_TOL * dx.abs().max(f64::MIN_POSITIVE) {
                        return Err(Error::Grid(format!("x[{j}] = {x} breaks uniform spacing {dx}")));
                    }
                }
                Self::uniform(t_values, *first, dx, n)
            }
        }
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t_values
    }

    pub fn x_values(&self) -> Vec<f64> {
        (0..self.nx).map(|j| self.x(j)).collect()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn nt(&self) -> usize {
        self.t_values.len()
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn len(&self) -> usize {
        self.nt() * self.nx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nx + j
    }

    pub fn point(&self, k: usize) -> SpaceTimePoint {
        SpaceTimePoint { t: self.t_values[k / self.nx], x: self.x(k % self.nx) }
    }

    /// Index of the time level equal to `t` up to a relative `1e-9`.
    pub fn time_index(&self, t: f64) -> Option<usize> {
        self.t_values.iter().position(|&s| (s - t).abs() <= LATTICE_TOL * s.max(t))
    }
}

/// Dense covariance of the field on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub grid: GridSpec,
    pub entries: DMatrix<f64>,
    pub jitter_applied: f64,
}

/// Covariance of the field over all grid points.
///
/// Entries depend only on the two times and the spatial lag, so one kernel
/// integral per `(i <= i', |j - j'|)` is evaluated, in parallel.
pub fn assemble_cov(grid: &GridSpec, h: f64, cfg: &KernelConfig) -> Result<CovarianceMatrix> {
    check_spatial_hurst(h)?;
    cfg.validate()?;
    let n = grid.len();
    if n > MAX_GRID_POINTS {
        return Err(Error::Grid(format!("{n} points exceed the cap of {MAX_GRID_POINTS}")));
    }
    let (nt, nx) = (grid.nt(), grid.nx());
    let keys: Vec<(usize, usize, usize)> = (0..nt)
        .flat_map(|i| (i..nt).flat_map(move |k| (0..nx).map(move |lag| (i, k, lag))))
        .collect();
    let values: Vec<f64> = keys
        .par_iter()
        .map(|&(i, k, lag)| {
            let p = SpaceTimePoint { t: grid.t_values[i], x: 0.0 };
            let q = SpaceTimePoint { t: grid.t_values[k], x: lag as f64 * grid.dx };
            cov(p, q, h, cfg)
        })
        .collect::<Result<_>>()?;
    let cache: HashMap<(usize, usize, usize), f64> = keys.into_iter().zip(values).collect();
    let entries = DMatrix::from_fn(n, n, |a, b| {
        let (ia, ja) = (a / nx, a % nx);
        let (ib, jb) = (b / nx, b % nx);
        cache[&(ia.min(ib), ia.max(ib), ja.abs_diff(jb))]
    });
    Ok(CovarianceMatrix { grid: grid.clone(), entries, jitter_applied: 0.0 })
}

/// Lower Cholesky factor of a (possibly jittered) covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    pub lower: DMatrix<f64>,
    /// Added diagonal as a fraction of the mean diagonal.
    pub jitter_applied: f64,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// `L z`, touching only the lower triangle.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for (j, &zj) in z.iter().enumerate().take(n) {
            let col = self.lower.column(j);
            for i in j..n {
                y[i] += col[i] * zj;
            }
        }
        y
    }
}

/// Cholesky factorization; on failure `jitter · mean(diag)` is added to the
/// diagonal, with `jitter` growing geometrically from `jitter_start`. Fails
/// once `max_attempts` are used or the jitter would exceed
/// [`MAX_RELATIVE_JITTER`]; the error carries the largest jitter tried.
pub fn factorize_psd(c: &CovarianceMatrix, jitter_start: f64, jitter_factor: f64, max_attempts: usize) -> Result<CholeskyFactor> {
    if !(jitter_start > 0.0 && jitter_factor > 1.0) {
        return Err(Error::param("jitter", "start must be positive and factor above 1"));
    }
    let m = &c.entries;
    if !m.is_square() {
        return Err(Error::Asymmetric(f64::INFINITY));
    }
    let n = m.nrows();
    if n == 0 {
        return Err(Error::Grid("empty covariance".into()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("covariance entries"));
    }
    let scale = m.amax();
    let asym = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs()).fold(0.0, f64::max);
    if asym > 1e-12 * scale {
        return Err(Error::Asymmetric(asym));
    }
    if let Some(ch) = m.clone().cholesky() {
        return Ok(CholeskyFactor { lower: ch.unpack(), jitter_applied: 0.0 });
    }
    let mean_diag = m.diagonal().mean();
    let mut jitter = jitter_start;
    let mut failed = 0.0;
    for _ in 0..max_attempts {
        if jitter > MAX_RELATIVE_JITTER {
            break;
        }
        let mut j = m.clone();
        for i in 0..n {
            j[(i, i)] += jitter * mean_diag;
        }
        if let Some(ch) = j.cholesky() {
            return Ok(CholeskyFactor { lower: ch.unpack(), jitter_applied: jitter });
        }
        failed = jitter;
        jitter *= jitter_factor;
    }
    Err(Error::Factorization { jitter: failed })
}

/// [`factorize_psd`] with the default jitter ladder `1e-12, 1e-11, ..., 1e-6`.
pub fn factorize_default(c: &CovarianceMatrix) -> Result<CholeskyFactor> {
    factorize_psd(c, DEFAULT_JITTER_START, DEFAULT_JITTER_FACTOR, DEFAULT_MAX_ATTEMPTS)
}

/// `n_reps` realizations, stored replicate-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub grid: GridSpec,
    pub seed: u64,
    pub n_reps: usize,
    values: Vec<f64>,
}

impl SampleBatch {
    pub fn realization(&self, r: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[r * n..(r + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Covariance estimate `(1/n) Σ_r u_r u_rᵀ` using the known zero mean.
    pub fn sample_cov(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let mut acc = DMatrix::zeros(n, n);
        for r in 0..self.n_reps {
            let u = DVector::from_column_slice(self.realization(r));
            acc.ger(1.0, &u, &u, 1.0);
        }
        acc / self.n_reps as f64
    }

    /// Little-endian `f64`s, one realization after another.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.values.iter().flat_map(|v| v.to_le_bytes()).collect()
    }
}

/// The standard normal vector of replicate `r`: ChaCha8 keyed by `seed`,
/// stream `r`, consumed in index order.
pub fn replicate_normals(seed: u64, r: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Realizations `L z_r`, `r = 0..n_reps`. Each `z_r` depends only on
/// `(seed, r)`, so the batch is independent of thread count.
pub fn sample(factor: &CholeskyFactor, grid: &GridSpec, n_reps: usize, seed: u64) -> Result<SampleBatch> {
    if n_reps == 0 {
        return Err(Error::param("n_reps", "at least one replicate is required"));
    }
    let n = factor.dim();
    if n != grid.len() {
        return Err(Error::Grid(format!("factor has dimension {n}, grid has {} points", grid.len())));
    }
    let reps: Vec<Vec<f64>> = (0..n_reps)
        .into_par_iter()
        .map(|r| factor.apply(&replicate_normals(seed, r as u64, n)))
        .collect();
    Ok(SampleBatch { grid: grid.clone(), seed, n_reps, values: reps.concat() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Sup,
    SupAbs,
    SupIncrementSpatial,
    SupIncrementTemporal,
}

impl Statistic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Statistic::Sup => "sup",
            Statistic::SupAbs => "sup_abs",
            Statistic::SupIncrementSpatial => "sup_increment_spatial",
            Statistic::SupIncrementTemporal => "sup_increment_temporal",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(Statistic::Sup),
            "sup_abs" => Ok(Statistic::SupAbs),
            "sup_increment_spatial" => Ok(Statistic::SupIncrementSpatial),
            "sup_increment_temporal" => Ok(Statistic::SupIncrementTemporal),
            other => Err(Error::param("statistic", format!("unknown statistic `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_reps: usize,
    pub seed: u64,
    pub statistic: Statistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncrementKind {
    Spatial,
    Temporal,
}

/// Index pairs `(a, b)` with increment `u[a] - u[b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementMap {
    pub kind: IncrementKind,
    /// `h` or `τ`.
    pub step: f64,
    pub pairs: Vec<(usize, usize)>,
}

impl IncrementMap {
    pub fn increments<'a>(&'a self, u: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.pairs.iter().map(move |&(a, b)| u[a] - u[b])
    }
}

/// `Δ_h u(t_i, x_j) = u(t_i, x_j + h)` minus `u(t_i, x_j)` for every `x_j` with
/// `x_j + h` on the grid; points near the edge are dropped. The grid needs no
/// new points and is returned unchanged.
pub fn increment_grid_spatial(grid: &GridSpec, h: f64) -> Result<(GridSpec, IncrementMap)> {
    ensure_finite("h", h)?;
    if h == 0.0 {
        return Err(Error::param("h", "spatial increment must be nonzero"));
    }
    let k = (h / grid.dx).round();
    if k == 0.0 || (k * grid.dx - h).abs() > LATTICE_TOL * h.abs() {
        return Err(Error::Grid(format!("h = {h} is not a multiple of dx = {}", grid.dx)));
    }
    let k = k as i64;
    let nx = grid.nx as i64;
    let mut pairs = Vec::new();
    for i in 0..grid.nt() {
        for j in 0..nx {
            let to = j + k;
            if (0..nx).contains(&to) {
                pairs.push((grid.index(i, to as usize), grid.index(i, j as usize)));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::Grid(format!("h = {h} leaves no point inside the grid")));
    }
    Ok((grid.clone(), IncrementMap { kind: IncrementKind::Spatial, step: h, pairs }))
}

/// `Δ_τ u(t_i, x) = u(t_i + τ, x)` minus `u(t_i, x)` for every grid time and
/// position. Times `t_i + τ` already on the grid are reused; the others are
/// inserted as new time levels.
pub fn increment_grid_temporal(grid: &GridSpec, tau: f64) -> Result<(GridSpec, IncrementMap)> {
    ensure_finite("tau", tau)?;
    if !(tau > 0.0) {
        return Err(Error::param("tau", format!("{tau} must be positive")));
    }
    let mut times = grid.t_values.clone();
    for &t in grid.t_values() {
        let target = t + tau;
        if grid.time_index(target).is_none() && !times.iter().any(|&s| (s - target).abs() <= LATTICE_TOL * target) {
            times.push(target);
        }
    }
    times.sort_by(f64::total_cmp);
    let out = GridSpec::uniform(times, grid.x0, grid.dx, grid.nx)?;
    let mut pairs = Vec::with_capacity(grid.len());
    for &t in grid.t_values() {
        let base = out.time_index(t).expect("original time kept");
        let top = out.time_index(t + tau).expect("shifted time inserted");
        for j in 0..grid.nx {
            pairs.push((out.index(top, j), out.index(base, j)));
        }
    }
    Ok((out, IncrementMap { kind: IncrementKind::Temporal, step: tau, pairs }))
}

/// Mean and standard error over replicates of the per-replicate supremum.
/// Increment statistics need the matching [`IncrementMap`].
pub fn mc_sup(batch: &SampleBatch, statistic: Statistic, increments: Option<&IncrementMap>) -> Result<SupEstimate> {
    if batch.n_reps < 2 {
        return Err(Error::InsufficientData(format!("{} replicate(s); at least 2 are needed", batch.n_reps)));
    }
    let need = match statistic {
        Statistic::SupIncrementSpatial => Some(IncrementKind::Spatial),
        Statistic::SupIncrementTemporal => Some(IncrementKind::Temporal),
        _ => None,
    };
    let map = match (need, increments) {
        (None, _) => None,
        (Some(kind), Some(m)) if m.kind == kind => Some(m),
        (Some(_), _) => {
            return Err(Error::param("increments", format!("statistic {statistic} needs a matching increment map")));
        }
    };
    let sups: Vec<f64> = (0..batch.n_reps)
        .map(|r| {
            let u = batch.realization(r);
            match (statistic, map) {
                (Statistic::Sup, _) => u.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                (Statistic::SupAbs, _) => u.iter().map(|v| v.abs()).fold(0.0, f64::max),
                (_, Some(m)) => m.increments(u).fold(f64::NEG_INFINITY, f64::max),
                (_, None) => unreachable!("checked above"),
            }
        })
        .collect();
    let (mean, stderr) = mean_stderr(&sups)?;
    Ok(SupEstimate { mean, stderr, n_reps: batch.n_reps, seed: batch.seed, statistic })
}

/// Assemble, factorize and sample in one step.
pub fn simulate(grid: &GridSpec, h: f64, cfg: &KernelConfig, n_reps: usize, seed: u64) -> Result<(SampleBatch, f64)> {
    let c = assemble_cov(grid, h, cfg)?;
    let f = factorize_default(&c)?;
    Ok((sample(&f, grid, n_reps, seed)?, f.jitter_applied))
}
