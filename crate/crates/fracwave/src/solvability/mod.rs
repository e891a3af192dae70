//! Existence of the solution as a function of the Hurst parameters.
//!
//! The solution exists iff a radial spectral integral `∫_1^∞ R(ρ) dρ` is
//! finite. [`condition_closed_form`] decides this from the exponents;
//! [`classify_numeric`] decides it independently by integrating `R` up to
//! geometric cutoffs and fitting the decay rate of the increments.

mod g;
mod hyp;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::params::HurstParams;
use crate::quad::gauss_legendre;
use crate::stats::log_log_fit;

pub use g::{g, g1, g2, g_profile, GSample};
pub use hyp::{hyp1f2, hyp1f2_with_limit, Hyp1F2Params, DEFAULT_Z_MAX};

/// Slopes of the increment fit within this band of 0 are indeterminate.
pub const TOLERANCE_BAND: f64 = 0.02;

/// Cells with `|margin|` below this are near-critical and exempt from
/// closed-form/numeric agreement.
pub const NEAR_CRITICAL_BAND: f64 = 0.05;

pub const DEFAULT_LAMBDA_MAX: f64 = 2.0 * PI * 2048.0;
pub const DEFAULT_N_CUTOFFS: usize = 8;

const GL_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `H0 = 1/2`.
    TimeWhite,
    /// `H0 = 1`.
    SmoothTime,
    /// `1/2 < H0 < 1`.
    Intermediate,
}

impl Regime {
    pub fn of(h0: f64) -> Regime {
        if h0 == 0.5 {
            Regime::TimeWhite
        } else if h0 == 1.0 {
            Regime::SmoothTime
        } else {
            Regime::Intermediate
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::TimeWhite => "time-white",
            Regime::SmoothTime => "smooth-time",
            Regime::Intermediate => "intermediate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityVerdict {
    pub solvable: bool,
    /// Signed distance to the critical manifold; positive iff solvable.
    pub margin: f64,
    pub regime: Regime,
    /// Slope of the log increments when a numeric fit was run.
    pub fitted_exponent: Option<f64>,
}

/// Margin of the existence condition:
/// `|H| - (d-1)` for `H0 = 1/2`, `|H| - (d-2)` for `H0 = 1` and
/// `|H| + H0 - (d - 1/2)` in between.
pub fn condition_closed_form(params: &HurstParams) -> Result<SolvabilityVerdict> {
    let (d, h0, habs) = (params.d() as f64, params.h0(), params.h_sum());
    if !(0.5..=1.0).contains(&h0) {
        return Err(Error::param("h0", format!("{h0} is outside [1/2, 1]")));
    }
    let regime = Regime::of(h0);
    let margin = match regime {
        Regime::TimeWhite => habs - (d - 1.0),
        Regime::SmoothTime => habs - (d - 2.0),
        Regime::Intermediate => habs + h0 - (d - 0.5),
    };
    Ok(SolvabilityVerdict { solvable: margin > 0.0, margin, regime, fitted_exponent: None })
}

/// Power of `ρ` in the radial integrand (angular constant set to 1).
fn radial_power(params: &HurstParams) -> f64 {
    let (d, habs, h0) = (params.d() as f64, params.h_sum(), params.h0());
    match Regime::of(h0) {
        Regime::TimeWhite => 2.0 * d - 2.0 * habs - 3.0,
        Regime::SmoothTime => 2.0 * d - 2.0 * habs - 5.0,
        Regime::Intermediate => 2.0 * d - 2.0 * habs - 2.0 * h0 - 3.0,
    }
}

/// Radial integrand `R(ρ)` of the existence integral at time `t`:
///
/// * `H0 = 1/2`: `ρ^{2d-2|H|-3} [t/2 - sin(2tρ)/(4ρ)]`
/// * `H0 = 1`: `ρ^{2d-2|H|-5} [cos(tρ) - 1]²`
/// * otherwise: `ρ^{2d-2|H|-2H0-3} g(tρ)`
pub fn radial_integrand(rho: f64, params: &HurstParams, t: f64) -> Result<f64> {
    ensure_finite("rho", rho)?;
    ensure_finite("t", t)?;
    if !(rho > 0.0) {
        return Err(Error::param("rho", format!("{rho} must be positive")));
    }
    if !(t > 0.0) {
        return Err(Error::param("t", format!("{t} must be positive")));
    }
    let p = rho.powf(radial_power(params));
    Ok(match Regime::of(params.h0()) {
        Regime::TimeWhite => p * time_white_bracket(rho, t),
        Regime::SmoothTime => p * ((t * rho).cos() - 1.0).powi(2),
        Regime::Intermediate => p * g(t * rho, params.h0())?,
    })
}

fn time_white_bracket(rho: f64, t: f64) -> f64 {
    0.5 * t - (2.0 * t * rho).sin() / (4.0 * rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumericVerdict {
    Convergent,
    Divergent,
    Indeterminate,
}

impl NumericVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            NumericVerdict::Convergent => "convergent",
            NumericVerdict::Divergent => "divergent",
            NumericVerdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Cutoffs `Λ_k`, geometric with ratio 2, each a whole number of periods.
    pub lambda_grid: Vec<f64>,
    /// `M(Λ_k) = ∫_1^{Λ_k} R(ρ) dρ`.
    pub partial_integrals: Vec<f64>,
    /// Slope of `log(M(Λ_{k+1}) - M(Λ_k))` against `log Λ_k`; the tail
    /// integral converges iff it is negative.
    pub fitted_exponent: f64,
    pub classified_convergent: bool,
    pub verdict: NumericVerdict,
    pub r_squared: f64,
}

/// Quadrature nodes for `∫_1^{Λ_max}` with quarter-period Gauss-Legendre
/// panels, together with the index ranges ending at each cutoff.
#[derive(Debug, Clone)]
struct RadialGrid {
    lambdas: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `ends[k]`: number of nodes below `lambdas[k]`.
    ends: Vec<usize>,
}

impl RadialGrid {
    fn new(t: f64, lambda_max: f64, n_cutoffs: usize) -> Result<Self> {
        ensure_finite("lambda_max", lambda_max)?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::param("t", format!("{t} must be positive")));
        }
        if !(lambda_max >= 64.0) {
            return Err(Error::param("lambda_max", format!("{lambda_max} is below 2^6")));
        }
        if n_cutoffs < 4 {
            return Err(Error::param("n_cutoffs", format!("{n_cutoffs} is below 4")));
        }
        let period = 2.0 * PI / t;
        let m_max = (lambda_max / period).log2().floor();
        let m_min = m_max - (n_cutoffs as f64 - 1.0);
        if m_min < 0.0 || period * m_min.exp2() < 1.0 {
            return Err(Error::param(
                "lambda_max",
                format!("{lambda_max} leaves no room for {n_cutoffs} cutoffs above 1 at t = {t}"),
            ));
        }
        if m_max > 24.0 {
            return Err(Error::param("lambda_max", format!("{lambda_max} needs too many periods")));
        }
        let lambdas: Vec<f64> = (0..n_cutoffs).map(|k| period * (m_min + k as f64).exp2()).collect();
        let (gx, gw) = gauss_legendre(GL_ORDER);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut ends = Vec::with_capacity(n_cutoffs);
        let push_panels = |lo: f64, hi: f64, n: usize, nodes: &mut Vec<f64>, weights: &mut Vec<f64>| {
            let w = (hi - lo) / n as f64;
            for i in 0..n {
                let (a, b) = (lo + i as f64 * w, lo + (i + 1) as f64 * w);
                let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
                for (x, wt) in gx.iter().zip(&gw) {
                    nodes.push(c + r * x);
                    weights.push(r * wt);
                }
            }
        };
        let quarter = 0.25 * period;
        let n0 = ((lambdas[0] - 1.0) / quarter).ceil().max(1.0) as usize;
        push_panels(1.0, lambdas[0], n0, &mut nodes, &mut weights);
        ends.push(nodes.len());
        for k in 1..n_cutoffs {
            let n = ((lambdas[k] - lambdas[k - 1]) / quarter).round() as usize;
            push_panels(lambdas[k - 1], lambdas[k], n, &mut nodes, &mut weights);
            ends.push(nodes.len());
        }
        Ok(Self { lambdas, nodes, weights, ends })
    }

    /// `ρ ↦ R(ρ) / ρ^p`, the non-power factor of the integrand, at every node.
    fn factor_values(&self, h0: f64, t: f64) -> Result<Vec<f64>> {
        Ok(match Regime::of(h0) {
            Regime::TimeWhite => self.nodes.iter().map(|&r| time_white_bracket(r, t)).collect(),
            Regime::SmoothTime => self.nodes.iter().map(|&r| ((t * r).cos() - 1.0).powi(2)).collect(),
            Regime::Intermediate => {
                let scaled: Vec<f64> = self.nodes.iter().map(|&r| t * r).collect();
                g_profile(&scaled, h0)?.into_iter().map(|s| s.g).collect()
            }
        })
    }

    fn fit(&self, factor: &[f64], power: f64) -> Result<TailFit> {
        let mut partial = Vec::with_capacity(self.lambdas.len());
        let mut acc = 0.0;
        let mut start = 0;
        for &end in &self.ends {
            let mut seg = 0.0;
            for i in start..end {
                seg += self.weights[i] * self.nodes[i].powf(power) * factor[i];
            }
            acc += seg;
            partial.push(acc);
            start = end;
        }
        let incr: Vec<f64> = partial.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(bad) = incr.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::Convergence { value: *bad, err_est: f64::NAN });
        }
        let fit = log_log_fit(&self.lambdas[..incr.len()], &incr)?;
        let slope = fit.slope;
        let verdict = if slope < -TOLERANCE_BAND {
            NumericVerdict::Convergent
        } else if slope > TOLERANCE_BAND {
            NumericVerdict::Divergent
        } else {
            NumericVerdict::Indeterminate
        };
        Ok(TailFit {
            lambda_grid: self.lambdas.clone(),
            partial_integrals: partial,
            fitted_exponent: slope,
            classified_convergent: verdict == NumericVerdict::Convergent,
            verdict,
            r_squared: fit.r_squared,
        })
    }
}

/// Integrates the radial integrand up to `n_cutoffs` geometric cutoffs
/// ending near `lambda_max` and classifies the tail by the slope of the
/// log increments (`-2 · margin` asymptotically).
///
/// The cutoffs are whole multiples of the period `2π/t`, so every
/// increment averages the oscillation of the integrand over full periods.
pub fn classify_numeric(params: &HurstParams, t: f64, lambda_max: f64, n_cutoffs: usize) -> Result<TailFit> {
    let grid = RadialGrid::new(t, lambda_max, n_cutoffs)?;
    let factor = grid.factor_values(params.h0(), t)?;
    grid.fit(&factor, radial_power(params))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub h0: f64,
    pub habs: f64,
    pub closed: bool,
    pub numeric: NumericVerdict,
    pub margin: f64,
    pub fitted_exponent: f64,
    pub near_critical: bool,
}

impl PhaseRow {
    /// Closed-form and numeric verdicts coincide.
    pub fn agrees(&self) -> bool {
        match self.numeric {
            NumericVerdict::Convergent => self.closed,
            NumericVerdict::Divergent => !self.closed,
            NumericVerdict::Indeterminate => false,
        }
    }
}

/// Cross product of `h0_grid × habs_grid` in dimension `d` (isotropic
/// spatial Hurst indices `|H|/d`), rows in grid order.
pub fn phase_diagram_scan(d: usize, h0_grid: &[f64], habs_grid: &[f64], t: f64) -> Result<Vec<PhaseRow>> {
    phase_diagram_scan_with(d, h0_grid, habs_grid, t, DEFAULT_LAMBDA_MAX, DEFAULT_N_CUTOFFS)
}

pub fn phase_diagram_scan_with(
    d: usize,
    h0_grid: &[f64],
    habs_grid: &[f64],
    t: f64,
    lambda_max: f64,
    n_cutoffs: usize,
) -> Result<Vec<PhaseRow>> {
    if h0_grid.is_empty() || habs_grid.is_empty() {
        return Ok(Vec::new());
    }
    let params: Vec<Vec<HurstParams>> = h0_grid
        .iter()
        .map(|&h0| habs_grid.iter().map(|&ha| HurstParams::isotropic(d, h0, ha)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let grid = RadialGrid::new(t, lambda_max, n_cutoffs)?;
    // The non-power factor depends on H0 only; compute it once per row of the grid.
    let factors: Vec<Vec<f64>> =
        h0_grid.par_iter().map(|&h0| grid.factor_values(h0, t)).collect::<Result<_>>()?;
    let cells: Vec<(usize, &HurstParams)> =
        params.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |p| (i, p))).collect();
    cells
        .par_iter()
        .map(|&(i, p)| {
            let closed = condition_closed_form(p)?;
            let fit = grid.fit(&factors[i], radial_power(p))?;
            Ok(PhaseRow {
                h0: p.h0(),
                habs: p.h_sum(),
                closed: closed.solvable,
                numeric: fit.verdict,
                margin: closed.margin,
                fitted_exponent: fit.fitted_exponent,
                near_critical: closed.margin.abs() < NEAR_CRITICAL_BAND,
            })
        })
        .collect()
}

/// Least-squares line through `g1` on `n_points` uniform radii in
/// `[rho_lo, rho_hi]`.
pub fn g1_asymptotic_slope(h0: f64, rho_lo: f64, rho_hi: f64, n_points: usize) -> Result<crate::stats::LinearFit> {
    if n_points < 3 {
        return Err(Error::param("n_points", format!("{n_points} is below 3")));
    }
    ensure_finite("rho_lo", rho_lo)?;
    ensure_finite("rho_hi", rho_hi)?;
    if !(rho_lo < rho_hi) || rho_lo < 0.0 {
        return Err(Error::param("rho_lo", format!("need 0 <= rho_lo < rho_hi, got [{rho_lo}, {rho_hi}]")));
    }
    let rhos = uniform(rho_lo, rho_hi, n_points);
    let prof = g_profile(&rhos, h0)?;
    let y: Vec<f64> = prof.iter().map(|s| s.g1).collect();
    crate::stats::linear_fit(&rhos, &y)
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}
