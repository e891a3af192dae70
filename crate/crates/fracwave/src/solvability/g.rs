//! The auxiliary functions
//!
//! ```text
//!     g(ρ)  = ∫∫_{0<s<r<ρ} sin s sin r |r-s|^{2H0-2} ds dr = g1(ρ)/2 - g2(ρ)/4
//!     g1(ρ) = ∫_0^ρ (ρ-s) cos s · s^{2H0-2} ds
//!     g2(ρ) = ∫_0^ρ [sin(2ρ-s) - sin s] · s^{2H0-2} ds
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{integrate_panels, integrate_singular, periodic_breaks, QuadResult, Tolerance};

fn check(rho: f64, h0: f64) -> Result<()> {
    ensure_finite("rho", rho)?;
    ensure_finite("h0", h0)?;
    if h0 == 0.5 {
        return Err(Error::Domain { alpha: -1.0 });
    }
    if !(h0 > 0.5 && h0 <= 1.0) {
        return Err(Error::param("h0", format!("{h0} is outside (1/2, 1]")));
    }
    if rho < 0.0 {
        return Err(Error::param("rho", format!("{rho} is negative")));
    }
    Ok(())
}

/// `∫_lo^hi s^a ds`, the scale against which the oscillatory integrals are
/// required to be accurate.
fn envelope(a: f64, lo: f64, hi: f64) -> f64 {
    (hi.powf(a + 1.0) - lo.powf(a + 1.0)) / (a + 1.0)
}

const REL: f64 = 1e-13;

/// `∫_0^ρ s^{2H0-2} f(s) ds` for `|f| <= fmax`: singular part on
/// `[0, min(1, ρ)]`, then one panel per period of `f`.
fn weighted_integral(f: impl Fn(f64) -> f64, fmax: f64, rho: f64, h0: f64, period: f64) -> Result<QuadResult> {
    let a = 2.0 * h0 - 2.0;
    let split = rho.min(1.0);
    let head_tol = Tolerance::new(REL * fmax * envelope(a, 0.0, split), REL);
    let head = integrate_singular(&f, a, split, &head_tol)?;
    if rho <= 1.0 {
        return Ok(head);
    }
    let breaks = periodic_breaks(1.0, rho, period);
    let tol = Tolerance::new(REL * fmax * envelope(a, 1.0, rho), REL).with_max_subdivisions(8 * breaks.len() + 4000);
    let tail = integrate_panels(|s: f64| s.powf(a) * f(s), &breaks, &tol)?;
    Ok(head.combine(tail))
}

pub fn g1(rho: f64, h0: f64) -> Result<f64> {
    check(rho, h0)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    weighted_integral(|s| (rho - s) * s.cos(), rho, rho, h0, 2.0 * PI)?.into_value()
}

pub fn g2(rho: f64, h0: f64) -> Result<f64> {
    check(rho, h0)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    weighted_integral(|s| (2.0 * rho - s).sin() - s.sin(), 2.0, rho, h0, 2.0 * PI)?.into_value()
}

pub fn g(rho: f64, h0: f64) -> Result<f64> {
    Ok(0.5 * g1(rho, h0)? - 0.25 * g2(rho, h0)?)
}

/// `g1`, `g2` and `g` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GSample {
    pub rho: f64,
    pub g1: f64,
    pub g2: f64,
    pub g: f64,
}

/// `g1`, `g2`, `g` on a nondecreasing list of radii in one sweep.
///
/// With `a = 2H0 - 2` and the running moments
/// `A = ∫_0^ρ s^a cos s`, `B = ∫_0^ρ s^{a+1} cos s`, `C = ∫_0^ρ s^a sin s`:
/// `g1 = ρA - B` and `g2 = sin(2ρ) A - (1 + cos 2ρ) C`. The moments are
/// accumulated between consecutive radii, so the cost is linear in the
/// largest radius instead of quadratic.
pub fn g_profile(rhos: &[f64], h0: f64) -> Result<Vec<GSample>> {
    let mut prev = 0.0;
    for &r in rhos {
        check(r, h0)?;
        if r < prev {
            return Err(Error::param("rhos", "radii must be nondecreasing"));
        }
        prev = r;
    }
    let a = 2.0 * h0 - 2.0;
    let (mut ma, mut mb, mut mc) = (0.0, 0.0, 0.0);
    let mut at = 0.0;
    let mut out = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        if rho > at {
            if at == 0.0 {
                let first = rho.min(1.0);
                let tol = Tolerance::new(REL * envelope(a, 0.0, first), REL);
                ma += integrate_singular(f64::cos, a, first, &tol)?.into_value()?;
                mb += integrate_singular(|s: f64| s * s.cos(), a, first, &tol)?.into_value()?;
                mc += integrate_singular(f64::sin, a, first, &tol)?.into_value()?;
                at = first;
            }
            if rho > at {
                let breaks = periodic_breaks(at, rho, 0.5 * PI);
                let sub = 8 * breaks.len() + 4000;
                let tol = Tolerance::new(REL * envelope(a, at, rho), REL).with_max_subdivisions(sub);
                let tol_b = Tolerance::new(REL * envelope(a + 1.0, at, rho), REL).with_max_subdivisions(sub);
                ma += integrate_panels(|s: f64| s.powf(a) * s.cos(), &breaks, &tol)?.into_value()?;
                mb += integrate_panels(|s: f64| s.powf(a + 1.0) * s.cos(), &breaks, &tol_b)?.into_value()?;
                mc += integrate_panels(|s: f64| s.powf(a) * s.sin(), &breaks, &tol)?.into_value()?;
            }
            at = rho;
        }
        let g1 = rho * ma - mb;
        let (s2, c2) = (2.0 * rho).sin_cos();
        let g2 = s2 * ma - (1.0 + c2) * mc;
        out.push(GSample { rho, g1, g2, g: 0.5 * g1 - 0.25 * g2 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_radius_and_domain() {
        assert_eq!(g1(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(g2(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(g(0.0, 0.7).unwrap(), 0.0);
        assert!(matches!(g1(1.0, 0.5), Err(Error::Domain { .. })));
        assert!(g1(1.0, 1.2).is_err());
        assert!(g1(-1.0, 0.7).is_err());
    }

    #[test]
    fn smooth_time_closed_forms() {
        // H0 = 1: g1 = 1 - cos ρ, g2 = 2cos ρ - cos 2ρ - 1, g = (1 - cos ρ)²/2.
        let g1_pi = g1(PI, 1.0).unwrap();
        assert!((g1_pi - 2.0).abs() < 1e-12);
        for &rho in &[0.3, 1.0, 7.5, 40.0] {
            let v = g(rho, 1.0).unwrap();
            let want = 0.5 * (1.0 - rho.cos()).powi(2);
            assert!((v - want).abs() < 1e-10, "{rho}: {v} vs {want}");
            let w2 = 2.0 * rho.cos() - (2.0 * rho).cos() - 1.0;
            assert!((g2(rho, 1.0).unwrap() - w2).abs() < 1e-10);
        }
    }

    #[test]
    fn profile_matches_direct() {
        let rhos = [0.0, 0.2, 0.9, 1.0, 3.3, 10.0, 57.0, 300.0];
        for &h0 in &[0.55, 0.7, 0.95, 1.0] {
            let prof = g_profile(&rhos, h0).unwrap();
            for s in &prof {
                let (d1, d2) = (g1(s.rho, h0).unwrap(), g2(s.rho, h0).unwrap());
                let scale = 1.0 + s.rho;
                assert!((s.g1 - d1).abs() < 1e-10 * scale, "h0={h0} rho={}: {} vs {d1}", s.rho, s.g1);
                assert!((s.g2 - d2).abs() < 1e-10 * scale, "h0={h0} rho={}: {} vs {d2}", s.rho, s.g2);
            }
        }
    }

    #[test]
    fn profile_rejects_unsorted() {
        assert!(g_profile(&[2.0, 1.0], 0.7).is_err());
    }
}
