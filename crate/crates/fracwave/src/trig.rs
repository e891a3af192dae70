//! Finite sums of terms `c · ξ^{-p} · cos(ωξ)` / `c · ξ^{-p} · sin(ωξ)`.
//!
//! The spectral integrands of the kernels are products of such terms; after
//! product-to-sum expansion every term is a pure oscillation under a power
//! envelope, which is what the tail integrator needs.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    /// Envelope exponent `p` of `ξ^{-p}`.
    pub power: f64,
    pub wave: Wave,
    /// Angular frequency, always `>= 0` after normalisation.
    pub freq: f64,
}

impl Term {
    pub fn new(coef: f64, power: f64, wave: Wave, freq: f64) -> Self {
        Self { coef, power, wave, freq }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let osc = match self.wave {
            Wave::Cos => (self.freq * xi).cos(),
            Wave::Sin => (self.freq * xi).sin(),
        };
        self.coef * xi.powf(-self.power) * osc
    }

    fn mul(&self, other: &Term) -> [Term; 2] {
        let c = 0.5 * self.coef * other.coef;
        let p = self.power + other.power;
        let (a, b) = (self.freq, other.freq);
        use Wave::*;
        match (self.wave, other.wave) {
            // cos a cos b = [cos(a-b) + cos(a+b)] / 2
            (Cos, Cos) => [Term::new(c, p, Cos, a - b), Term::new(c, p, Cos, a + b)],
            // sin a sin b = [cos(a-b) - cos(a+b)] / 2
            (Sin, Sin) => [Term::new(c, p, Cos, a - b), Term::new(-c, p, Cos, a + b)],
            // sin a cos b = [sin(a+b) + sin(a-b)] / 2
            (Sin, Cos) => [Term::new(c, p, Sin, a + b), Term::new(c, p, Sin, a - b)],
            // cos a sin b = [sin(a+b) - sin(a-b)] / 2
            (Cos, Sin) => [Term::new(c, p, Sin, a + b), Term::new(-c, p, Sin, a - b)],
        }
    }

    /// Folds negative frequencies into positive ones.
    fn normalized(mut self) -> Option<Term> {
        if self.freq < 0.0 {
            self.freq = -self.freq;
            if self.wave == Wave::Sin {
                self.coef = -self.coef;
            }
        }
        if self.wave == Wave::Sin && self.freq == 0.0 {
            return None;
        }
        (self.coef != 0.0).then_some(self)
    }
}

/// A sum of [`Term`]s.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigSeries {
    terms: Vec<Term>,
}

impl TrigSeries {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut s = Self { terms: terms.into_iter().collect() };
        s.simplify();
        s
    }

    pub fn constant(c: f64) -> Self {
        Self::new([Term::new(c, 0.0, Wave::Cos, 0.0)])
    }

    /// `1 - cos(ωξ)`.
    pub fn one_minus_cos(freq: f64) -> Self {
        Self::new([Term::new(1.0, 0.0, Wave::Cos, 0.0), Term::new(-1.0, 0.0, Wave::Cos, freq)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(xi)).sum()
    }

    pub fn mul(&self, other: &TrigSeries) -> TrigSeries {
        let mut out = Vec::with_capacity(2 * self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.extend(a.mul(b));
            }
        }
        TrigSeries::new(out)
    }

    pub fn add(&self, other: &TrigSeries) -> TrigSeries {
        TrigSeries::new(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, factor: f64) -> TrigSeries {
        TrigSeries::new(self.terms.iter().map(|t| Term { coef: t.coef * factor, ..*t }))
    }

    /// Multiplies every term by `ξ^{-p}`.
    pub fn with_power(&self, p: f64) -> TrigSeries {
        TrigSeries::new(self.terms.iter().map(|t| Term { power: t.power + p, ..*t }))
    }

    fn simplify(&mut self) {
        let mut terms: Vec<Term> = self.terms.drain(..).filter_map(Term::normalized).collect();
        // Frequencies that differ only by round-off (e.g. (t+s)-s vs t) are merged.
        let scale = terms.iter().map(|t| t.freq).fold(1.0, f64::max);
        for t in terms.iter_mut() {
            if t.freq <= 1e-13 * scale {
                t.freq = 0.0;
            }
        }
        let mut terms: Vec<Term> = terms.into_iter().filter_map(Term::normalized).collect();
        terms.sort_by(|a, b| {
            a.power
                .total_cmp(&b.power)
                .then((a.wave as u8).cmp(&(b.wave as u8)))
                .then(a.freq.total_cmp(&b.freq))
        });
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(m)
                    if m.power == t.power
                        && m.wave == t.wave
                        && (m.freq - t.freq).abs() <= 1e-13 * scale =>
                {
                    m.coef += t.coef;
                }
                _ => merged.push(t),
            }
        }
        let cmax = merged.iter().map(|t| t.coef.abs()).fold(0.0, f64::max);
        merged.retain(|t| t.coef.abs() > 1e-15 * cmax);
        self.terms = merged;
    }
}
