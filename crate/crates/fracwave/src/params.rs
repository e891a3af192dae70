//! Hurst parameters of the driving noise and space-time points of the field.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Temporal and spatial Hurst parameters of the noise in dimension `d`.
///
/// The temporal parameter lies in `[1/2, 1]`, every spatial parameter in
/// `(0, 1)`. `h_sum` caches `|H| = H_1 + ... + H_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstParams {
    d: usize,
    h0: f64,
    h: Vec<f64>,
    h_sum: f64,
}

impl HurstParams {
    pub fn new(h0: f64, h: Vec<f64>) -> Result<Self> {
        ensure_finite("h0", h0)?;
        if !(0.5..=1.0).contains(&h0) {
            return Err(Error::param("h0", format!("{h0} is outside [1/2, 1]")));
        }
        if h.is_empty() {
            return Err(Error::param("h", "at least one spatial Hurst parameter is required"));
        }
        for &hi in &h {
            ensure_finite("h", hi)?;
            if !(hi > 0.0 && hi < 1.0) {
                return Err(Error::param("h", format!("{hi} is outside (0, 1)")));
            }
        }
        let h_sum = h.iter().sum();
        Ok(Self { d: h.len(), h0, h, h_sum })
    }

    /// Parameters in dimension `d` whose spatial Hurst indices all equal `habs / d`.
    pub fn isotropic(d: usize, h0: f64, habs: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("d", "dimension must be positive"));
        }
        Self::new(h0, vec![habs / d as f64; d])
    }

    /// The time-white, one-dimensional case that the field sampler supports.
    pub fn time_white_1d(h: f64) -> Result<Self> {
        Self::new(0.5, vec![h])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn h_sum(&self) -> f64 {
        self.h_sum
    }

    /// Checks the restriction `d = 1`, `h0 = 1/2` under which the kernels and
    /// the sampler are exact, returning the single spatial Hurst index.
    pub fn require_time_white_1d(&self) -> Result<f64> {
        if self.d != 1 || self.h0 != 0.5 {
            return Err(Error::param(
                "params",
                format!("kernels need d = 1 and h0 = 1/2 (got d = {}, h0 = {})", self.d, self.h0),
            ));
        }
        Ok(self.h[0])
    }
}

/// Validates a spatial Hurst index for the one-dimensional kernels.
pub(crate) fn check_spatial_hurst(h: f64) -> Result<()> {
    ensure_finite("H", h)?;
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::param("H", format!("{h} is outside (0, 1)")));
    }
    Ok(())
}

/// A point `(t, x)` with `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub t: f64,
    pub x: f64,
}

impl SpaceTimePoint {
    pub fn new(t: f64, x: f64) -> Result<Self> {
        let p = Self { t, x };
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        ensure_finite("t", self.t)?;
        ensure_finite("x", self.x)?;
        if self.t < 0.0 {
            return Err(Error::param("t", format!("{} is negative", self.t)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_sum_is_exact_sum() {
        let p = HurstParams::new(0.75, vec![0.8, 0.8]).unwrap();
        assert_eq!(p.d(), 2);
        assert_eq!(p.h_sum(), 0.8 + 0.8);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(HurstParams::new(0.4, vec![0.3]).is_err());
        assert!(HurstParams::new(1.01, vec![0.3]).is_err());
        assert!(HurstParams::new(0.5, vec![1.0]).is_err());
        assert!(HurstParams::new(0.5, vec![0.0]).is_err());
        assert!(HurstParams::new(0.5, vec![]).is_err());
        assert!(HurstParams::new(f64::NAN, vec![0.3]).is_err());
    }

    #[test]
    fn time_white_restriction() {
        assert_eq!(HurstParams::time_white_1d(0.3).unwrap().require_time_white_1d().unwrap(), 0.3);
        assert!(HurstParams::new(0.7, vec![0.3]).unwrap().require_time_white_1d().is_err());
        assert!(HurstParams::new(0.5, vec![0.3, 0.3]).unwrap().require_time_white_1d().is_err());
    }

    #[test]
    fn point_validation() {
        assert!(SpaceTimePoint::new(-1.0, 0.0).is_err());
        assert!(SpaceTimePoint::new(1.0, f64::INFINITY).is_err());
        assert!(SpaceTimePoint::new(0.0, -3.0).is_ok());
    }
}
