//! `start:stop:step` grid specifications.

/// Values `start, start + step, ...` up to `stop` inclusive (within a
/// `1e-9` step fraction). A bare number is a one-point grid; `stop < start`
/// gives an empty grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("`{s}` is not a finite number"));
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) {
                return Err(format!("step {step} must be positive"));
            }
            if stop < start {
                return Ok(Vec::new());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // Snap to 12 decimals so that 0.1 + 2 * 0.05 prints as 0.2.
            Ok((0..n).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
        }
        _ => Err(format!("`{spec}` is not of the form start:stop:step")),
    }
}
