//! `1F2(a1; b1, b2; z)` by its power series in double-double arithmetic.
//!
//! For negative `z` the terms grow to roughly `exp(2 sqrt|z|)` before
//! decaying, so the sum cancels heavily; carrying about 32 significant
//! digits keeps the result accurate to well below `1e-12` for `|z| <= 100`
//! and to a few `1e-8` at the default limit `|z| = 900`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub const DEFAULT_Z_MAX: f64 = 900.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp1F2Params {
    pub a1: f64,
    pub b1: f64,
    pub b2: f64,
    pub z: f64,
}

impl Hyp1F2Params {
    /// The parameters `(H0 - 1/2; 3/2, H0 + 1/2; -ρ²/4)` of the sine moment
    /// `(2H0 - 1)/ρ · ∫_0^1 sin(ρs) s^{2H0-3} ds`.
    pub fn sine_moment(h0: f64, rho: f64) -> Self {
        Self { a1: h0 - 0.5, b1: 1.5, b2: h0 + 0.5, z: -0.25 * rho * rho }
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(-q2)));
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn is_nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b == b.round()
}

/// `Σ_k (a1)_k z^k / ((b1)_k (b2)_k k!)` for `|z| <= DEFAULT_Z_MAX`.
pub fn hyp1f2(p: &Hyp1F2Params) -> Result<f64> {
    hyp1f2_with_limit(p, DEFAULT_Z_MAX)
}

pub fn hyp1f2_with_limit(p: &Hyp1F2Params, z_max: f64) -> Result<f64> {
    for (name, v) in [("a1", p.a1), ("b1", p.b1), ("b2", p.b2), ("z", p.z)] {
        ensure_finite(name, v)?;
    }
    if is_nonpositive_integer(p.b1) {
        return Err(Error::param("b1", format!("{} is a nonpositive integer", p.b1)));
    }
    if is_nonpositive_integer(p.b2) {
        return Err(Error::param("b2", format!("{} is a nonpositive integer", p.b2)));
    }
    if p.z.abs() > z_max {
        return Err(Error::SeriesRegime { z: p.z.abs(), z_max });
    }
    let z = Dd::from(p.z);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let mut peak = 1.0f64;
    for k in 0..10_000u32 {
        let kf = k as f64;
        let num = two_sum(p.a1, kf).mul(z);
        let den = two_sum(p.b1, kf).mul(two_sum(p.b2, kf)).mul(Dd::from(kf + 1.0));
        let next = term.mul(num).div(den);
        if next == Dd::ZERO {
            break;
        }
        sum = sum.add(next);
        let mag = next.hi.abs();
        let shrinking = mag < term.hi.abs();
        term = next;
        peak = peak.max(mag);
        if shrinking && mag < 1e-16 * sum.hi.abs().max(1e-16 * peak) {
            break;
        }
    }
    Ok(sum.to_f64())
}
