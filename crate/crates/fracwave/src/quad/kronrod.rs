//! Globally adaptive bisection on a 15-point Gauss-Kronrod rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

// Kronrod abscissae; odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub err: f64,
}

/// One application of the 15-point rule on `[a, b]`, with the QUADPACK
/// error heuristic.
pub(crate) fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, err }
}

pub(crate) const GK15_EVALS: usize = 15;

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.err.total_cmp(&other.0.err).then(other.0.a.total_cmp(&self.0.a))
    }
}

/// Adaptive integration starting from the panels delimited by `breaks`
/// (strictly increasing, at least two entries).
pub(crate) fn adaptive_from_breaks<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Err(Error::param("breaks", "need at least two break points"));
    }
    for w in breaks.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) {
            return Err(Error::NonFinite("interval endpoint"));
        }
        if !(w[0] < w[1]) {
            return Err(Error::param("interval", format!("[{}, {}] is empty or reversed", w[0], w[1])));
        }
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut evals = 0;
    let mut value = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let p = gk15(f, w[0], w[1]);
        evals += GK15_EVALS;
        value += p.value;
        err += p.err;
        heap.push(ByError(p));
    }
    let budget = tol.max_subdivisions.max(breaks.len());
    let mut panels = heap.len();
    let target = |v: f64| tol.abs.max(tol.rel * v.abs());
    while err > target(value) && panels < budget {
        let Some(ByError(worst)) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Cannot bisect further in floating point.
            heap.push(ByError(worst));
            break;
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        evals += 2 * GK15_EVALS;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(ByError(left));
        heap.push(ByError(right));
        panels += 1;
    }
    // Re-sum in a fixed order so the result does not carry the running-sum drift.
    let mut parts: Vec<Panel> = heap.into_iter().map(|p| p.0).collect();
    parts.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = parts.iter().map(|p| p.value).sum();
    let err_est: f64 = parts.iter().map(|p| p.err).sum();
    Ok(QuadResult { value, err_est, evals, converged: err_est <= target(value) })
}
