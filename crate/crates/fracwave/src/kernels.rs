//! Spectral covariance kernels of the mild solution for `d = 1`, `H0 = 1/2`.
//!
//! With the noise spectral density `C_H |ξ|^{1-2H}` and the wave propagator
//! `sin(t|ξ|)/|ξ|`, every second moment of the solution is a single integral
//!
//! ```text
//!     pref · C_H · ∫_0^∞ bracket(ξ) ξ^{-1-2H} dξ
//! ```
//!
//! where `bracket` is built from [`time_overlap_integral`] and cosines of the
//! spatial offsets. The integral is split at `ξ0`: the head `[0, ξ0]` carries
//! the integrable weight `ξ^{1-2H}` (the bracket is `O(ξ^2)` at the origin)
//! and the tail is expanded into pure oscillations under power envelopes,
//! each summed period by period.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{ensure_finite, Error, Result};
use crate::params::{check_spatial_hurst, SpaceTimePoint};
use crate::quad::{
    integrate_osc_tail, integrate_panels, integrate_singular, periodic_breaks, QuadResult, Tolerance,
    DEFAULT_MAX_PERIODS,
};
use crate::trig::{Term, TrigSeries, Wave};

/// Quadrature controls shared by every kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on oscillation periods summed in each tail term.
    pub max_periods: usize,
    /// Mollification: integrands are multiplied by `exp(-damping_eps ξ²)`.
    pub damping_eps: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_periods: DEFAULT_MAX_PERIODS, damping_eps: 0.0 }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::param("rel_tol", format!("{} must be positive", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::param("abs_tol", format!("{} must be positive", self.abs_tol)));
        }
        if !(self.damping_eps >= 0.0 && self.damping_eps.is_finite()) {
            return Err(Error::param("damping_eps", format!("{} must be >= 0", self.damping_eps)));
        }
        if self.max_periods < 8 {
            return Err(Error::param("max_periods", "at least 8 periods are required"));
        }
        Ok(())
    }
}

/// Normalising constant `Γ(2H+1) sin(πH) / (2π)` of the spatial spectral density.
pub fn c_h(h: f64) -> f64 {
    gamma(2.0 * h + 1.0) * (PI * h).sin() / (2.0 * PI)
}

/// `sin s - s cos s`, accurate for small `s`.
fn sin_minus_s_cos(s: f64) -> f64 {
    if s.abs() < 0.5 {
        // Σ_{k≥1} (-1)^{k+1} 2k s^{2k+1} / (2k+1)!
        let s2 = s * s;
        let mut pow = s * s2 / 6.0; // s^3 / 3!
        let mut sum = 0.0;
        for k in 1..30 {
            let term = 2.0 * k as f64 * pow;
            sum += if k % 2 == 1 { term } else { -term };
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            pow *= s2 / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
        }
        sum
    } else {
        s.sin() - s * s.cos()
    }
}

/// `time_overlap_integral(t, s, ξ) / ξ²` for `t >= s >= 0`, `ξ >= 0`, bounded at the origin.
pub(crate) fn overlap_over_xi2(t: f64, s: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        return s * s * (3.0 * t - s) / 6.0;
    }
    let sx = s * xi;
    let (sin_t, cos_t) = (t * xi).sin_cos();
    (sx * sin_t * sx.sin() - cos_t * sin_minus_s_cos(sx)) / (2.0 * xi * xi * xi)
}

fn overlap_unchecked(t: f64, s: f64, xi: f64) -> f64 {
    let sx = s * xi;
    let (sin_t, cos_t) = (t * xi).sin_cos();
    (sx * sin_t * sx.sin() - cos_t * sin_minus_s_cos(sx)) / (2.0 * xi)
}

/// `∫_0^s sin((t-r)ξ) sin((s-r)ξ) dr` for `0 <= s <= t`, `ξ > 0`.
///
/// Evaluated as `[sξ sin(tξ) sin(sξ) - cos(tξ)(sin(sξ) - sξ cos(sξ))] / (2ξ)`,
/// which equals `(s/2)cos((t-s)ξ) - [sin((t+s)ξ) - sin((t-s)ξ)]/(4ξ)`; the
/// bracket `sin(sξ) - sξ cos(sξ)` is summed as a series when `sξ < 1/2`, so
/// the result keeps full relative accuracy as `ξ → 0`.
pub fn time_overlap_integral(t: f64, s: f64, xi: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    ensure_finite("s", s)?;
    ensure_finite("xi", xi)?;
    if s < 0.0 {
        return Err(Error::param("s", format!("{s} is negative")));
    }
    if s > t {
        return Err(Error::TimeOrder { t, s });
    }
    if xi <= 0.0 {
        return Err(Error::NonPositiveFrequency(xi));
    }
    Ok(overlap_unchecked(t, s, xi))
}

/// Tail expansion of the time overlap: `(s/2)cos((t-s)ξ) - sin((t+s)ξ)/(4ξ) + sin((t-s)ξ)/(4ξ)`.
fn overlap_series(t: f64, s: f64) -> TrigSeries {
    TrigSeries::new([
        Term::new(0.5 * s, 0.0, Wave::Cos, t - s),
        Term::new(-0.25, 1.0, Wave::Sin, t + s),
        Term::new(0.25, 1.0, Wave::Sin, t - s),
    ])
}

fn cos_series(freq: f64) -> TrigSeries {
    TrigSeries::new([Term::new(1.0, 0.0, Wave::Cos, freq)])
}

/// Splitting point between head and tail: beyond every natural length scale
/// of the bracket so that the tail terms do not cancel each other.
fn split_point(scales: &[f64]) -> f64 {
    let pos = scales.iter().copied().filter(|&v| v > 0.0);
    let smallest = pos.clone().fold(f64::INFINITY, f64::min);
    let largest = pos.fold(0.0, f64::max);
    let xi0 = (1.0 / smallest).max(1.0);
    xi0.min(1e3 * (1.0 / largest).max(1.0))
}

/// `∫_0^∞ bracket(ξ) ξ^{-1-2H} dξ`; `head(ξ) = bracket(ξ)/ξ²` must be bounded near 0.
fn spectral_integral(
    h: f64,
    head: impl Fn(f64) -> f64,
    tail: &TrigSeries,
    xi0: f64,
    cfg: &KernelConfig,
) -> Result<QuadResult> {
    let eps = cfg.damping_eps;
    let damp = |xi: f64| if eps > 0.0 { (-eps * xi * xi).exp() } else { 1.0 };
    let omega_max = tail.terms().iter().map(|t| t.freq).fold(0.0, f64::max);
    let period = if omega_max > 0.0 { 2.0 * PI / omega_max } else { xi0 };

    // Head: the singular weight ξ^{1-2H} over the first half period, then
    // regular panels one period wide.
    let head_tol = Tolerance::new(cfg.abs_tol, cfg.rel_tol);
    let xi_s = xi0.min(0.5 * period);
    let alpha = 1.0 - 2.0 * h;
    let weighted = |xi: f64| head(xi) * xi.powf(alpha) * damp(xi);
    let mut total = integrate_singular(|xi| head(xi) * damp(xi), alpha, xi_s, &head_tol)?;
    if xi0 > xi_s {
        let breaks = periodic_breaks(xi_s, xi0, period);
        let tol = head_tol.with_max_subdivisions(head_tol.max_subdivisions.max(8 * breaks.len()));
        total = total.combine(integrate_panels(weighted, &breaks, &tol)?);
    }

    let tail = tail.with_power(1.0 + 2.0 * h);
    let envelope: f64 =
        tail.terms().iter().map(|t| t.coef.abs() * xi0.powf(1.0 - t.power) / (t.power - 1.0)).sum();
    let n_terms = tail.terms().len().max(1) as f64;
    let scale = total.value.abs() + envelope;
    let term_abs = (cfg.rel_tol * scale).max(cfg.abs_tol) / n_terms;

    if eps > 0.0 {
        // Gaussian damping makes the tail negligible beyond exp(-39) ~ 1e-17.
        let xi_cut = (39.0 / eps).sqrt().max(xi0);
        if xi_cut > xi0 {
            let n = ((xi_cut - xi0) / period).ceil();
            if n > cfg.max_periods as f64 {
                return Err(Error::param(
                    "damping_eps",
                    format!("{eps} needs {n} periods, above max_periods = {}", cfg.max_periods),
                ));
            }
            let breaks = periodic_breaks(xi0, xi_cut, period);
            let tol = Tolerance::new(term_abs * n_terms, cfg.rel_tol).with_max_subdivisions(8 * breaks.len() + 4000);
            let r = integrate_panels(|xi| tail.eval(xi) * damp(xi), &breaks, &tol)?;
            total = total.combine(r);
        }
        return Ok(total);
    }

    for term in tail.terms() {
        if term.freq == 0.0 {
            let v = term.coef * xi0.powf(1.0 - term.power) / (term.power - 1.0);
            total = total.combine(QuadResult { value: v, err_est: 0.0, evals: 0, converged: true });
            continue;
        }
        let Term { coef, power, wave, freq } = *term;
        let osc = move |xi: f64| match wave {
            Wave::Cos => coef * (freq * xi).cos(),
            Wave::Sin => coef * (freq * xi).sin(),
        };
        let tol = Tolerance::new(term_abs, 0.0);
        let r = integrate_osc_tail(power, osc, 2.0 * PI / freq, xi0, &tol, cfg.max_periods)?;
        total = total.combine(r);
    }
    Ok(total)
}

fn finish(r: QuadResult, prefactor: f64) -> Result<QuadResult> {
    let r = r.scaled(prefactor);
    if !r.converged || !r.value.is_finite() {
        return Err(Error::Convergence { value: r.value, err_est: r.err_est });
    }
    Ok(r)
}

fn check_common(h: f64, cfg: &KernelConfig) -> Result<()> {
    check_spatial_hurst(h)?;
    cfg.validate()
}

fn check_time(name: &'static str, t: f64) -> Result<()> {
    ensure_finite(name, t)?;
    if t < 0.0 {
        return Err(Error::param(name, format!("{t} is negative")));
    }
    Ok(())
}

/// [`cov`] together with its quadrature error estimate.
pub fn cov_quad(p: SpaceTimePoint, q: SpaceTimePoint, h: f64, cfg: &KernelConfig) -> Result<QuadResult> {
    p.validate()?;
    q.validate()?;
    check_common(h, cfg)?;
    let (t, s) = if p.t >= q.t { (p.t, q.t) } else { (q.t, p.t) };
    let dx = (p.x - q.x).abs();
    if s == 0.0 {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 1, converged: true });
    }
    let tail = overlap_series(t, s).mul(&cos_series(dx));
    let head = |xi: f64| overlap_over_xi2(t, s, xi) * (dx * xi).cos();
    let r = spectral_integral(h, head, &tail, split_point(&[s, t]), cfg)?;
    finish(r, 2.0 * c_h(h))
}

/// Covariance `E[u(p) u(q)]` of the solution at two space-time points.
pub fn cov(p: SpaceTimePoint, q: SpaceTimePoint, h: f64, cfg: &KernelConfig) -> Result<f64> {
    Ok(cov_quad(p, q, h, cfg)?.value)
}

/// `E[u(t, x)^2]`; scales exactly as `t^{2H+1}`.
pub fn variance(t: f64, h: f64, cfg: &KernelConfig) -> Result<f64> {
    Ok(variance_quad(t, h, cfg)?.value)
}

pub fn variance_quad(t: f64, h: f64, cfg: &KernelConfig) -> Result<QuadResult> {
    check_time("t", t)?;
    let p = SpaceTimePoint { t, x: 0.0 };
    cov_quad(p, p, h, cfg)
}

/// `d1(p, q)^2 = E|u(p) - u(q)|^2`, integrated as a single spectral
/// integral rather than as `var + var - 2 cov` to avoid cancellation.
pub fn d1_sq_quad(p: SpaceTimePoint, q: SpaceTimePoint, h: f64, cfg: &KernelConfig) -> Result<QuadResult> {
    p.validate()?;
    q.validate()?;
    check_common(h, cfg)?;
    let (t, s) = if p.t >= q.t { (p.t, q.t) } else { (q.t, p.t) };
    let dx = (p.x - q.x).abs();
    if t == s && dx == 0.0 {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 1, converged: true });
    }
    let tail = overlap_series(t, t)
        .add(&overlap_series(s, s))
        .add(&overlap_series(t, s).mul(&cos_series(dx)).scale(-2.0));
    let head = |xi: f64| {
        overlap_over_xi2(t, t, xi) + overlap_over_xi2(s, s, xi)
            - 2.0 * overlap_over_xi2(t, s, xi) * (dx * xi).cos()
    };
    let xi0 = split_point(&[s, t, t - s, dx]);
    let r = spectral_integral(h, head, &tail, xi0, cfg)?;
    finish(r, 2.0 * c_h(h))
}

/// Natural metric `sqrt(E|u(p) - u(q)|^2)`.
///
/// Negative round-off in the radicand is clamped to zero; a radicand below
/// `-1e3 · abs_tol` is reported as a convergence error.
pub fn d1(p: SpaceTimePoint, q: SpaceTimePoint, h: f64, cfg: &KernelConfig) -> Result<f64> {
    let r = d1_sq_quad(p, q, h, cfg)?;
    if r.value < -1e3 * cfg.abs_tol {
        return Err(Error::Convergence { value: r.value, err_est: r.err_est });
    }
    Ok(r.value.max(0.0).sqrt())
}

/// `E|Δ_h u(t, x) - Δ_h u(t, y)|^2` with `Δ_h u(t, x) = u(t, x + h) - u(t, x)`.
pub fn d2_sq_quad(t: f64, shift: f64, x: f64, y: f64, h: f64, cfg: &KernelConfig) -> Result<QuadResult> {
    check_time("t", t)?;
    ensure_finite("h", shift)?;
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    check_common(h, cfg)?;
    if t == 0.0 {
        return Err(Error::param("t", "must be positive"));
    }
    let dx = (x - y).abs();
    let shift = shift.abs();
    if shift == 0.0 || dx == 0.0 {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 1, converged: true });
    }
    let tail = overlap_series(t, t)
        .mul(&TrigSeries::one_minus_cos(dx))
        .mul(&TrigSeries::one_minus_cos(shift));
    let head = |xi: f64| overlap_over_xi2(t, t, xi) * (1.0 - (dx * xi).cos()) * (1.0 - (shift * xi).cos());
    let r = spectral_integral(h, head, &tail, split_point(&[t, dx, shift]), cfg)?;
    // |e^{ihξ} - 1|^2 |e^{ixξ} - e^{iyξ}|^2 = 4 (1 - cos hξ)(1 - cos(x-y)ξ), doubled for ξ < 0.
    finish(r, 8.0 * c_h(h))
}

pub fn d2_sq(t: f64, shift: f64, x: f64, y: f64, h: f64, cfg: &KernelConfig) -> Result<f64> {
    Ok(d2_sq_quad(t, shift, x, y, h, cfg)?.value)
}

/// `f1 + f2 + f3` at frequency `ξ > 0`; equals
/// `ov(t+τ, t+τ) + ov(t, t) - 2 ov(t+τ, t)` with `ov` the time overlap.
pub fn f_sum(t: f64, tau: f64, xi: f64) -> f64 {
    let f1 = t * (1.0 - (tau * xi).cos());
    let f2 = tau / 2.0 - (xi * tau).sin() / (2.0 * xi);
    let f3 = -((xi * (t + tau)).sin() - (xi * t).sin()) * ((xi * (t + tau)).cos() - (xi * t).cos()) / (2.0 * xi);
    f1 + f2 + f3
}

/// `E|Δ_τ u(t, x) - Δ_τ u(t, y)|^2` with `Δ_τ u(t, x) = u(t + τ, x) - u(t, x)`.
pub fn d3_sq_quad(t: f64, tau: f64, x: f64, y: f64, h: f64, cfg: &KernelConfig) -> Result<QuadResult> {
    check_time("t", t)?;
    ensure_finite("tau", tau)?;
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    check_common(h, cfg)?;
    if t == 0.0 {
        return Err(Error::param("t", "must be positive"));
    }
    if !(tau > 0.0) {
        return Err(Error::param("tau", format!("{tau} must be positive")));
    }
    let dx = (x - y).abs();
    if dx == 0.0 {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 1, converged: true });
    }
    let tt = t + tau;
    let bracket = overlap_series(tt, tt)
        .add(&overlap_series(t, t))
        .add(&overlap_series(tt, t).scale(-2.0));
    let tail = bracket.mul(&TrigSeries::one_minus_cos(dx));
    let head = |xi: f64| {
        (overlap_over_xi2(tt, tt, xi) + overlap_over_xi2(t, t, xi) - 2.0 * overlap_over_xi2(tt, t, xi))
            * (1.0 - (dx * xi).cos())
    };
    let r = spectral_integral(h, head, &tail, split_point(&[t, tau, dx]), cfg)?;
    finish(r, 4.0 * c_h(h))
}

pub fn d3_sq(t: f64, tau: f64, x: f64, y: f64, h: f64, cfg: &KernelConfig) -> Result<f64> {
    Ok(d3_sq_quad(t, tau, x, y, h, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: f64, x: f64) -> SpaceTimePoint {
        SpaceTimePoint { t, x }
    }

    fn cfg() -> KernelConfig {
        KernelConfig::default()
    }

    #[test]
    fn overlap_examples() {
        let v = time_overlap_integral(2.0, 1.0, 1.0).unwrap();
        // Direct adaptive quadrature of the defining integral.
        let oracle = crate::quad::integrate_adaptive(
            |r| (2.0 - r).sin() * (1.0 - r).sin(),
            0.0,
            1.0,
            &Tolerance::new(1e-15, 1e-14),
        )
        .unwrap()
        .value;
        assert!((v - oracle).abs() < 1e-14);
        assert!((v - 0.44524).abs() < 1e-5);
        assert_eq!(time_overlap_integral(2.0, 0.0, 1.0).unwrap(), 0.0);
        for &(s, xi) in &[(1.0, 0.3), (0.7, 5.0), (2.0, 1e-4)] {
            let v = time_overlap_integral(s, s, xi).unwrap();
            let e = s / 2.0 - (2.0 * xi * s).sin() / (4.0 * xi);
            assert!((v - e).abs() < 1e-12 * (1.0 + e.abs()), "{v} {e}");
        }
    }

    #[test]
    fn overlap_small_frequency_limit() {
        // ov ≈ ξ² s²(3t - s)/6 as ξ → 0.
        for &(t, s) in &[(1.0, 1.0), (3.0, 0.5), (2.0, 1e-3)] {
            for &xi in &[1e-3, 1e-6, 1e-9] {
                let v = time_overlap_integral(t, s, xi).unwrap();
                let lead = xi * xi * s * s * (3.0 * t - s) / 6.0;
                assert!((v / lead - 1.0).abs() < 1e-5, "t={t} s={s} xi={xi}: {v} vs {lead}");
            }
        }
    }

    #[test]
    fn overlap_errors_are_distinct() {
        assert!(matches!(time_overlap_integral(1.0, 2.0, 1.0), Err(Error::TimeOrder { .. })));
        assert!(matches!(time_overlap_integral(1.0, 0.5, 0.0), Err(Error::NonPositiveFrequency(_))));
        assert!(matches!(time_overlap_integral(f64::NAN, 0.5, 1.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn series_and_closed_form_agree_at_cutover() {
        for &s in &[0.49, 0.4999999, 0.5, 0.5000001, 0.51] {
            let series = {
                let s2 = s * s;
                let mut pow = s * s2 / 6.0;
                let mut sum = 0.0;
                for k in 1..30 {
                    let term = 2.0 * k as f64 * pow;
                    sum += if k % 2 == 1 { term } else { -term };
                    pow *= s2 / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
                }
                sum
            };
            let closed = s.sin() - s * s.cos();
            assert!((sin_minus_s_cos(s) - closed).abs() < 1e-15);
            assert!((series - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn variance_light_cone() {
        assert_eq!(variance(0.0, 0.3, &cfg()).unwrap(), 0.0);
        let v = variance(2.0, 0.5, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn cov_light_cone_example() {
        let c = cov(pt(1.0, 0.0), pt(1.0, 1.0), 0.5, &cfg()).unwrap();
        assert!((c - 1.0 / 16.0).abs() < 1e-9, "{c}");
        assert_eq!(cov(pt(1.0, 0.0), pt(0.0, 0.3), 0.3, &cfg()).unwrap(), 0.0);
        let d = d1(pt(1.0, 0.0), pt(1.0, 1.0), 0.5, &cfg()).unwrap();
        assert!((d - 0.375f64.sqrt()).abs() < 1e-9, "{d}");
        assert_eq!(d1(pt(1.0, 0.2), pt(1.0, 0.2), 0.3, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn far_points_decorrelate() {
        let h = 0.3;
        let c = cov(pt(1.0, 0.0), pt(1.0, 1e3), h, &cfg()).unwrap();
        let v = variance(1.0, h, &cfg()).unwrap();
        assert!(c.abs() < 1e-3 * v, "{c}");
        let d = d1(pt(1.0, 0.0), pt(1.0, 1e3), h, &cfg()).unwrap();
        assert!((d / (2.0 * v).sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn f_sum_matches_overlaps_and_is_nonnegative() {
        let (t, tau) = (1.0, 0.25);
        for k in 0..=60 {
            let xi = 10f64.powf(-3.0 + 0.1 * k as f64);
            let f = f_sum(t, tau, xi);
            let o = overlap_unchecked(t + tau, t + tau, xi) + overlap_unchecked(t, t, xi)
                - 2.0 * overlap_unchecked(t + tau, t, xi);
            assert!((f - o).abs() < 1e-9 * (1.0 + o.abs()), "xi={xi}: {f} vs {o}");
            assert!(f >= -1e-12, "xi={xi}: {f}");
        }
    }

    #[test]
    fn damping_reduces_to_undamped_for_tiny_eps() {
        let c0 = cov(pt(1.0, 0.0), pt(0.5, 0.3), 0.4, &cfg()).unwrap();
        let damped = KernelConfig { damping_eps: 1e-6, max_periods: 1 << 20, ..cfg() };
        let c1 = cov(pt(1.0, 0.0), pt(0.5, 0.3), 0.4, &damped).unwrap();
        assert!((c0 - c1).abs() < 1e-3 * c0.abs(), "{c0} {c1}");
        let strong = KernelConfig { damping_eps: 1.0, ..cfg() };
        assert!(cov(pt(1.0, 0.0), pt(0.5, 0.3), 0.4, &strong).unwrap() < c0);
    }

    #[test]
    fn config_validation() {
        assert!(variance(1.0, 0.3, &KernelConfig { rel_tol: 0.0, ..cfg() }).is_err());
        assert!(variance(1.0, 0.3, &KernelConfig { damping_eps: -1.0, ..cfg() }).is_err());
        assert!(variance(1.0, 1.0, &cfg()).is_err());
        assert!(variance(-1.0, 0.3, &cfg()).is_err());
        assert!(d3_sq(1.0, 0.0, 0.0, 1.0, 0.3, &cfg()).is_err());
        assert_eq!(d2_sq(1.0, 0.0, 0.0, 1.0, 0.3, &cfg()).unwrap(), 0.0);
        assert_eq!(d2_sq(1.0, 0.25, 0.4, 0.4, 0.3, &cfg()).unwrap(), 0.0);
        assert_eq!(d3_sq(1.0, 0.25, 0.4, 0.4, 0.3, &cfg()).unwrap(), 0.0);
    }
}
