use serde::Serialize;

/// A bound of the shape `value <= coefficient * base^exponent`, tagged with
/// the result that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBound {
    pub coefficient: f64,
    pub exponent: f64,
    pub provenance: &'static str,
}

impl PowerBound {
    pub fn new(coefficient: f64, exponent: f64, provenance: &'static str) -> Self {
        PowerBound {
            coefficient,
            exponent,
            provenance,
        }
    }

    pub fn eval(&self, base: f64) -> f64 {
        self.coefficient * base.powf(self.exponent)
    }

    pub fn ln_eval(&self, ln_base: f64) -> f64 {
        self.coefficient.ln() + self.exponent * ln_base
    }
}
