//! Semi-infinite integrals `∫_A^∞ ξ^{-β} osc(ξ) dξ` with periodic `osc`.
//!
//! The integral is summed period by period. Partial sums are taken at
//! checkpoints `n0, 2 n0, 4 n0, ...` periods; at the checkpoint abscissa
//! `A_n = A + nP` the remainder has the asymptotic expansion
//! `Σ_j c_j A_n^{-(β-1+j)}` (Euler-Maclaurin over whole periods), so the
//! limit is recovered by solving for the leading coefficients with the
//! exponents known. The error estimate is the larger of the last two changes between consecutive extrapolants.

use super::{kronrod, periodic_breaks, QuadResult, Tolerance};
use crate::error::{ensure_finite, Error, Result};

pub const DEFAULT_MAX_PERIODS: usize = 1 << 14;

const MAX_ORDER: usize = 5;

/// `∫_a^∞ ξ^{-beta} osc(ξ) dξ` where `osc` is bounded and has period
/// `period_hint`.
///
/// `beta <= 1` is rejected with [`Error::Divergent`]. The lower limit must
/// be positive; callers split off `[0, a]` themselves. When `max_periods`
/// is exhausted the best estimate is returned with `converged = false`.
pub fn integrate_osc_tail<F: Fn(f64) -> f64>(
    beta: f64,
    osc: F,
    period_hint: f64,
    a: f64,
    tol: &Tolerance,
    max_periods: usize,
) -> Result<QuadResult> {
    ensure_finite("beta", beta)?;
    ensure_finite("period_hint", period_hint)?;
    ensure_finite("a", a)?;
    tol.validate()?;
    if beta <= 1.0 {
        return Err(Error::Divergent { beta });
    }
    if !(period_hint > 0.0) {
        return Err(Error::param("period_hint", format!("{period_hint} must be positive")));
    }
    if !(a > 0.0) {
        return Err(Error::param("a", format!("tail lower limit {a} must be positive")));
    }

    let f = |xi: f64| xi.powf(-beta) * osc(xi);
    // Start the checkpoints once the abscissa has roughly doubled, so that
    // successive checkpoints are spread geometrically.
    let n0 = ((a / period_hint).ceil() as usize).clamp(4, max_periods.max(4));
    let seg_tol = Tolerance { abs: tol.abs / 1024.0, rel: tol.rel / 1024.0, ..*tol };

    let mut sum = 0.0;
    let mut quad_err = 0.0;
    let mut evals = 0;
    let mut done = 0usize;
    let mut next = n0;
    let mut checkpoints: Vec<(f64, f64)> = Vec::new();
    let mut prev_est: Option<f64> = None;
    let mut prev_change: Option<f64> = None;
    let mut best = (sum, f64::INFINITY);

    loop {
        let lo = a + done as f64 * period_hint;
        let hi = a + next as f64 * period_hint;
        let breaks = periodic_breaks(lo, hi, period_hint);
        let seg_tol = Tolerance {
            max_subdivisions: (8 * breaks.len()).max(tol.max_subdivisions),
            ..seg_tol
        };
        let r = kronrod::adaptive_from_breaks(&f, &breaks, &seg_tol)?;
        sum += r.value;
        quad_err += r.err_est;
        evals += r.evals;
        done = next;
        checkpoints.push((hi, sum));

        let m = checkpoints.len();
        if m >= 2 {
            let order = MAX_ORDER.min(m - 1);
            if let Some((est, gain)) = extrapolate(&checkpoints[m - order - 1..], beta, order) {
                // Two consecutive changes between extrapolants must be small;
                // a single pair can agree by accident. Quadrature errors in
                // the partial sums pass through the extrapolation weights.
                if let Some(prev) = prev_est {
                    let change = (est - prev).abs();
                    if let Some(last) = prev_change {
                        let err = change.max(last) + gain * quad_err;
                        if err < best.1 {
                            best = (est, err);
                        }
                        if m >= 5 && err <= tol.target(est) {
                            return Ok(QuadResult { value: est, err_est: err, evals, converged: true });
                        }
                    }
                    prev_change = Some(change);
                }
                prev_est = Some(est);
            }
        }
        if next >= max_periods {
            let (value, err) = if best.1.is_finite() { best } else { (sum, sum.abs() + quad_err) };
            return Ok(QuadResult { value, err_est: err, evals, converged: false });
        }
        next = (next * 2).min(max_periods);
    }
}

/// Limit of the partial sums `pts = [(A_k, S_k)]` under the model
/// `S_k = I + Σ_{j<order} c_j A_k^{-(β-1+j)}`, using `order + 1` points.
///
/// Returns the limit and `Σ_k |w_k|`, where `I = Σ_k w_k S_k`.
fn extrapolate(pts: &[(f64, f64)], beta: f64, order: usize) -> Option<(f64, f64)> {
    let n = order + 1;
    debug_assert_eq!(pts.len(), n);
    let a_ref = pts[n - 1].0;
    let rows: Vec<Vec<f64>> = pts
        .iter()
        .map(|&(ak, _)| {
            let x = ak / a_ref;
            std::iter::once(1.0).chain((0..order).map(|j| x.powf(-(beta - 1.0 + j as f64)))).collect()
        })
        .collect();
    let with_rhs = |rhs: &dyn Fn(usize) -> f64| -> Vec<Vec<f64>> {
        rows.iter().enumerate().map(|(k, r)| r.iter().copied().chain(std::iter::once(rhs(k))).collect()).collect()
    };
    let est = solve(with_rhs(&|k| pts[k].1))?[0];
    let mut gain = 0.0;
    for unit in 0..n {
        gain += solve(with_rhs(&|k| if k == unit { 1.0 } else { 0.0 }))?[0].abs();
    }
    Some((est, gain))
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}
