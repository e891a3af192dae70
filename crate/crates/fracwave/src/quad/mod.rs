//! Quadrature engine: adaptive Gauss-Kronrod panels, endpoint power
//! singularities and oscillatory power-law tails.
//!
//! Every routine uses fixed abscissae and a deterministic refinement order,
//! so identical inputs give bit-identical outputs.

mod kronrod;
mod tail;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub use tail::{integrate_osc_tail, DEFAULT_MAX_PERIODS};


/// Absolute/relative accuracy request plus a refinement budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_subdivisions: 4000 }
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs > 0.0 || self.rel > 0.0) || self.abs < 0.0 || self.rel < 0.0 {
            return Err(Error::param("tol", "tolerances must be non-negative and not both zero"));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-12, 1e-10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute error estimate.
    pub err_est: f64,
    /// Number of integrand evaluations.
    pub evals: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Sum of two partial integrals.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            err_est: self.err_est + other.err_est,
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(self, factor: f64) -> QuadResult {
        QuadResult { value: self.value * factor, err_est: self.err_est * factor.abs(), ..self }
    }

    /// The value, or a convergence error carrying the best estimate.
    pub fn into_value(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Convergence { value: self.value, err_est: self.err_est })
        }
    }
}

/// `∫_a^b f` by globally adaptive bisection of 15-point Gauss-Kronrod panels.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult> {
    tol.validate()?;
    kronrod::adaptive_from_breaks(&f, &[a, b], tol)
}

/// Like [`integrate_adaptive`], starting from one panel per interval between
/// consecutive `breaks` (e.g. one panel per oscillation period).
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: &Tolerance) -> Result<QuadResult> {
    tol.validate()?;
    kronrod::adaptive_from_breaks(&f, breaks, tol)
}

/// Break points `a, a + p, a + 2p, ..., b` (the last panel may be shorter).
pub fn periodic_breaks(a: f64, b: f64, period: f64) -> Vec<f64> {
    let n = ((b - a) / period).ceil().max(1.0) as usize;
    let mut breaks: Vec<f64> = (0..n).map(|k| a + k as f64 * period).collect();
    breaks.push(b);
    breaks.dedup_by(|x, y| *x <= *y);
    breaks
}

/// `∫_0^b s^alpha f(s) ds` for `alpha > -1` and bounded `f`.
///
/// The substitution `s = u^{1/(1+alpha)}` absorbs the endpoint weight:
/// the integral becomes `1/(1+alpha) ∫_0^{b^{1+alpha}} f(u^{1/(1+alpha)}) du`.
pub fn integrate_singular<F: Fn(f64) -> f64>(f: F, alpha: f64, b: f64, tol: &Tolerance) -> Result<QuadResult> {
    integrate_singular_panels(f, alpha, b, 1, tol)
}

/// [`integrate_singular`] with `n_init` equal initial panels in the
/// substituted variable.
pub fn integrate_singular_panels<F: Fn(f64) -> f64>(
    f: F,
    alpha: f64,
    b: f64,
    n_init: usize,
    tol: &Tolerance,
) -> Result<QuadResult> {
    ensure_finite("alpha", alpha)?;
    ensure_finite("b", b)?;
    tol.validate()?;
    if alpha <= -1.0 {
        return Err(Error::Domain { alpha });
    }
    if !(b > 0.0) {
        return Err(Error::param("b", format!("upper limit {b} must be positive")));
    }
    let p = 1.0 + alpha;
    let inv = 1.0 / p;
    let u_max = b.powf(p);
    let n = n_init.max(1);
    let breaks: Vec<f64> = (0..=n).map(|k| u_max * k as f64 / n as f64).collect();
    let g = |u: f64| {
        let s = if alpha == 0.0 { u } else { u.powf(inv).min(b) };
        f(s)
    };
    // The substituted integral is scaled by 1/(1+alpha) afterwards, so the
    // requested accuracy is tightened by the same factor.
    let inner_tol = Tolerance { abs: tol.abs * p, ..*tol };
    let r = kronrod::adaptive_from_breaks(&g, &breaks, &inner_tol)?;
    Ok(QuadResult {
        value: r.value * inv,
        err_est: r.err_est * inv,
        evals: r.evals,
        converged: r.converged,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tight() -> Tolerance {
        Tolerance::new(1e-13, 1e-12)
    }

    #[test]
    fn constant_and_sine() {
        let r = integrate_adaptive(|_| 3.5, -1.0, 2.0, &tight()).unwrap();
        assert!(r.converged);
        assert!((r.value - 10.5).abs() < 1e-13);
        let r = integrate_adaptive(f64::sin, 0.0, PI, &tight()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        assert!(r.evals > 0);
    }

    #[test]
    fn oscillatory_polynomial_against_simpson() {
        // Composite Simpson with 10^6 intervals.
        let f = |s: f64| (50.0 * s).sin() * s * s;
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let mut acc = f(0.0) + f(1.0);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let simpson = acc * h / 3.0;
        let r = integrate_adaptive(f, 0.0, 1.0, &tight()).unwrap();
        assert!(r.converged);
        assert!((r.value - simpson).abs() < 1e-11, "{} vs {}", r.value, simpson);
    }

    #[test]
    fn reversed_interval_rejected() {
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, &tight()).is_err());
        assert!(integrate_adaptive(|x| x, 0.0, f64::NAN, &tight()).is_err());
    }

    #[test]
    fn singular_examples() {
        let r = integrate_singular(|_| 1.0, -0.5, 1.0, &tight()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = integrate_singular(f64::cos, 0.0, FRAC_PI_2, &tight()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(integrate_singular(|_| 1.0, -1.0, 1.0, &tight()), Err(Error::Domain { alpha: -1.0 }));
        assert!(integrate_singular(|_| 1.0, -1.5, 1.0, &tight()).is_err());
    }

    #[test]
    fn singular_against_richardson_trapezoid() {
        // ∫_0^10 s^{-0.6} (10 - s) cos s ds. Oracle: substitute s = v^{2.5},
        // then Richardson-extrapolated trapezoid on the smooth result.
        let alpha = 2.0 * 0.7 - 2.0;
        let rho = 10.0;
        let p = 1.0 + alpha;
        let g = |v: f64| {
            let s = v.powf(1.0 / p);
            (rho - s) * s.cos() / p
        };
        let vmax = rho.powf(p);
        let trap = |n: usize| {
            let h = vmax / n as f64;
            let mut acc = 0.5 * (g(0.0) + g(vmax));
            for i in 1..n {
                acc += g(i as f64 * h);
            }
            acc * h
        };
        // Romberg table on n = 2^10 .. 2^16.
        let mut row: Vec<f64> = (10..=16).map(|k| trap(1 << k)).collect();
        let mut factor = 4.0;
        while row.len() > 1 {
            row = row.windows(2).map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0)).collect();
            factor *= 4.0;
        }
        let oracle = row[0];
        let r = integrate_singular(|s| (rho - s) * s.cos(), alpha, rho, &tight()).unwrap();
        assert!((r.value - oracle).abs() < 1e-9, "{} vs {}", r.value, oracle);
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_bitwise() {
        let f = |x: f64| (x * 7.3).sin() / (1.0 + x * x);
        let a = integrate_adaptive(f, 0.0, 20.0, &tight()).unwrap();
        let b = integrate_adaptive(f, 0.0, 20.0, &tight()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.err_est.to_bits(), b.err_est.to_bits());
    }
}
