//! Python bindings for `fracwave`.
//!
//! Scalars and lists map to Python floats and lists. Experiment reports are
//! returned as JSON text; their configuration is given as a JSON object
//! whose keys override the defaults.

use fracwave::bounds::{self, HolderSpaceConfig, HolderTimeConfig, SupGrowthConfig};
use fracwave::field::{simulate as simulate_field, GridSpec};
use fracwave::kernels::{self, KernelConfig};
use fracwave::solvability::{self, Hyp1F2Params, DEFAULT_LAMBDA_MAX, DEFAULT_N_CUTOFFS};
use fracwave::{HurstParams, SpaceTimePoint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn to_py(e: fracwave::Error) -> PyErr {
    use fracwave::Error::*;
    match e {
        Grid(_) | Factorization { .. } | Asymmetric(_) | Convergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn pt(t: f64, x: f64) -> PyResult<SpaceTimePoint> {
    SpaceTimePoint::new(t, x).map_err(to_py)
}

/// `defaults` with the top-level keys of the JSON object `overrides` replaced.
fn merge_config<C: Serialize + DeserializeOwned>(defaults: &C, overrides: Option<&str>) -> Result<C, String> {
    let mut base = serde_json::to_value(defaults).map_err(|e| e.to_string())?;
    if let Some(text) = overrides {
        let patch: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
        let serde_json::Value::Object(patch) = patch else {
            return Err("config must be a JSON object".into());
        };
        let obj = base.as_object_mut().ok_or("defaults are not an object")?;
        for (k, v) in patch {
            if !obj.contains_key(&k) {
                return Err(format!("unknown config key `{k}`"));
            }
            obj.insert(k, v);
        }
    }
    serde_json::from_value(base).map_err(|e| format!("config: {e}"))
}

fn report_json<C: Serialize + DeserializeOwned>(
    config: Option<&str>,
    run: impl FnOnce(&C) -> fracwave::Result<bounds::ExperimentReport>,
    defaults: C,
) -> PyResult<String> {
    let cfg = merge_config(&defaults, config).map_err(PyValueError::new_err)?;
    let report = run(&cfg).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Closed-form existence verdict: `(solvable, margin, regime)`.
#[pyfunction]
fn condition_closed_form(h0: f64, h: Vec<f64>) -> PyResult<(bool, f64, String)> {
    let p = HurstParams::new(h0, h).map_err(to_py)?;
    let v = solvability::condition_closed_form(&p).map_err(to_py)?;
    Ok((v.solvable, v.margin, v.regime.as_str().to_string()))
}

/// Numeric tail classification: `(verdict, fitted_exponent, r_squared)`.
#[pyfunction]
#[pyo3(signature = (h0, h, t = 1.0))]
fn classify_numeric(h0: f64, h: Vec<f64>, t: f64) -> PyResult<(String, f64, f64)> {
    let p = HurstParams::new(h0, h).map_err(to_py)?;
    let f = solvability::classify_numeric(&p, t, DEFAULT_LAMBDA_MAX, DEFAULT_N_CUTOFFS).map_err(to_py)?;
    Ok((f.verdict.as_str().to_string(), f.fitted_exponent, f.r_squared))
}

/// Rows `(h0, habs, closed, numeric, margin, near_critical)` in grid order.
#[pyfunction]
#[pyo3(signature = (d, h0_grid, habs_grid, t = 1.0))]
fn phase_diagram(d: usize, h0_grid: Vec<f64>, habs_grid: Vec<f64>, t: f64) -> PyResult<Vec<(f64, f64, bool, String, f64, bool)>> {
    let rows = solvability::phase_diagram_scan(d, &h0_grid, &habs_grid, t).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.h0, r.habs, r.closed, r.numeric.as_str().to_string(), r.margin, r.near_critical)).collect())
}

#[pyfunction]
fn g1(rho: f64, h0: f64) -> PyResult<f64> {
    solvability::g1(rho, h0).map_err(to_py)
}

#[pyfunction]
fn g2(rho: f64, h0: f64) -> PyResult<f64> {
    solvability::g2(rho, h0).map_err(to_py)
}

#[pyfunction]
fn g(rho: f64, h0: f64) -> PyResult<f64> {
    solvability::g(rho, h0).map_err(to_py)
}

/// `(rho, g1, g2, g)` for nondecreasing radii.
#[pyfunction]
fn g_profile(rhos: Vec<f64>, h0: f64) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let p = solvability::g_profile(&rhos, h0).map_err(to_py)?;
    Ok(p.into_iter().map(|s| (s.rho, s.g1, s.g2, s.g)).collect())
}

#[pyfunction]
fn hyp1f2(a1: f64, b1: f64, b2: f64, z: f64) -> PyResult<f64> {
    solvability::hyp1f2(&Hyp1F2Params { a1, b1, b2, z }).map_err(to_py)
}

/// `E[u(t, x) u(s, y)]`.
#[pyfunction]
fn cov(t: f64, x: f64, s: f64, y: f64, h: f64) -> PyResult<f64> {
    kernels::cov(pt(t, x)?, pt(s, y)?, h, &KernelConfig::default()).map_err(to_py)
}

#[pyfunction]
fn variance(t: f64, h: f64) -> PyResult<f64> {
    kernels::variance(t, h, &KernelConfig::default()).map_err(to_py)
}

/// `‖u(t, x) - u(s, y)‖_{L²}`.
#[pyfunction]
fn d1(t: f64, x: f64, s: f64, y: f64, h: f64) -> PyResult<f64> {
    kernels::d1(pt(t, x)?, pt(s, y)?, h, &KernelConfig::default()).map_err(to_py)
}

#[pyfunction]
fn d2_sq(t: f64, shift: f64, x: f64, y: f64, h: f64) -> PyResult<f64> {
    kernels::d2_sq(t, shift, x, y, h, &KernelConfig::default()).map_err(to_py)
}

#[pyfunction]
fn d3_sq(t: f64, tau: f64, x: f64, y: f64, h: f64) -> PyResult<f64> {
    kernels::d3_sq(t, tau, x, y, h, &KernelConfig::default()).map_err(to_py)
}

#[pyfunction]
fn phi0(t: f64, l: f64) -> PyResult<f64> {
    bounds::phi0(t, l).map_err(to_py)
}

#[pyfunction]
fn phi(t: f64, l: f64, h: f64) -> PyResult<f64> {
    bounds::phi(t, l, h).map_err(to_py)
}

#[pyfunction]
fn d1h(t: f64, x: f64, s: f64, y: f64, h: f64) -> PyResult<f64> {
    bounds::d1h(pt(t, x)?, pt(s, y)?, h).map_err(to_py)
}

/// Samples on the grid `t_values × {x0 + j dx}`. Returns the flat values
/// (replicate, time, space order) and the shape.
#[pyfunction]
#[pyo3(signature = (t_values, x0, dx, nx, h, n_reps, seed = fracwave::DEFAULT_SEED))]
fn simulate(
    t_values: Vec<f64>,
    x0: f64,
    dx: f64,
    nx: usize,
    h: f64,
    n_reps: usize,
    seed: u64,
) -> PyResult<(Vec<f64>, (usize, usize, usize))> {
    let nt = t_values.len();
    let grid = GridSpec::uniform(t_values, x0, dx, nx).map_err(to_py)?;
    let (batch, _) = simulate_field(&grid, h, &KernelConfig::default(), n_reps, seed).map_err(to_py)?;
    Ok((batch.values().to_vec(), (n_reps, nt, nx)))
}

/// `(r_min, r_max, n_evaluated)` of `d1 / D1H` over the cross product.
#[pyfunction]
fn metric_ratio(t_set: Vec<f64>, s_set: Vec<f64>, dx_set: Vec<f64>, h: f64) -> PyResult<(f64, f64, usize)> {
    let r = bounds::metric_ratio_scan(&t_set, &s_set, &dx_set, h, &KernelConfig::default()).map_err(to_py)?;
    Ok((r.r_min(), r.r_max(), r.n_evaluated))
}

#[pyfunction]
#[pyo3(signature = (config = None))]
fn sup_growth(py: Python<'_>, config: Option<&str>) -> PyResult<String> {
    py.detach(|| report_json(config, bounds::sup_growth_experiment, SupGrowthConfig::default()))
}

#[pyfunction]
#[pyo3(signature = (config = None))]
fn holder_space(py: Python<'_>, config: Option<&str>) -> PyResult<String> {
    py.detach(|| report_json(config, bounds::holder_space_experiment, HolderSpaceConfig::default()))
}

#[pyfunction]
#[pyo3(signature = (config = None))]
fn holder_time(py: Python<'_>, config: Option<&str>) -> PyResult<String> {
    py.detach(|| report_json(config, bounds::holder_time_experiment, HolderTimeConfig::default()))
}

#[pymodule]
fn fracwave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", fracwave::DEFAULT_SEED)?;
    m.add_function(wrap_pyfunction!(condition_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(classify_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(phase_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(g1, m)?)?;
    m.add_function(wrap_pyfunction!(g2, m)?)?;
    m.add_function(wrap_pyfunction!(g, m)?)?;
    m.add_function(wrap_pyfunction!(g_profile, m)?)?;
    m.add_function(wrap_pyfunction!(hyp1f2, m)?)?;
    m.add_function(wrap_pyfunction!(cov, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(d1, m)?)?;
    m.add_function(wrap_pyfunction!(d2_sq, m)?)?;
    m.add_function(wrap_pyfunction!(d3_sq, m)?)?;
    m.add_function(wrap_pyfunction!(phi0, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(d1h, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(metric_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sup_growth, m)?)?;
    m.add_function(wrap_pyfunction!(holder_space, m)?)?;
    m.add_function(wrap_pyfunction!(holder_time, m)?)?;
    Ok(())
}
