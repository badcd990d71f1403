//! Incomplete systems over smooth variables: the packaged bound for
//! `J_{s,k,h}(C(P, P^eta))`, the per-step exponents `E_j`, and their
//! closed-form maximum.
//!
//! `P` itself never enters: only `log P >= D k^2` is used, so callers pass `D`.

use serde::Serialize;

use crate::error::{hypothesis, Error, Result};

const THM: &str = "incomplete-system bound";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncompleteParams {
    pub k: u32,
    pub h: u32,
    pub s: u64,
    /// `R = P^eta`.
    pub eta: f64,
    /// `log P >= D k^2`.
    pub d: f64,
}

impl IncompleteParams {
    pub fn new(k: u32, h: u32, s: u64, eta: f64, d: f64) -> Self {
        IncompleteParams { k, h, s, eta, d }
    }

    /// `t = k - h + 1`.
    pub fn t(&self) -> i64 {
        self.k as i64 - self.h as i64 + 1
    }

    /// The quantity `4 log k / (D k^2 eta)` confined to `[18/k, 0.4]`.
    pub fn window_ratio(&self) -> f64 {
        let k = self.k as f64;
        4.0 * k.ln() / (self.d * k * k * self.eta)
    }

    /// Every violated hypothesis, each as its own error.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        let (k, h, t) = (self.k as f64, self.h as f64, self.t());
        if self.k < 60 {
            out.push(hypothesis(THM, "k >= 60", format!("k = {}", self.k)));
        }
        if !(0.9 * k <= h && self.h + 2 <= self.k) {
            out.push(hypothesis(THM, "0.9k <= h <= k-2", format!("k = {}, h = {}", self.k, self.h)));
        }
        let s = self.s as i64;
        let upper = (self.h / 2) as i64 * t;
        if !(2 * t <= s && s <= upper) {
            out.push(hypothesis(
                THM,
                "2t <= s <= floor(h/2) t",
                format!("t = {t}, s = {s}, upper = {upper}"),
            ));
        }
        if !(2.0 / k.powi(3) < self.eta && self.eta <= 0.5 / k) {
            out.push(hypothesis(THM, "2/k^3 < eta <= 1/(2k)", format!("eta = {}", self.eta)));
        }
        let w = self.window_ratio();
        if !(18.0 / k <= w && w <= 0.4) {
            out.push(hypothesis(THM, "18/k <= 4 log k/(D k^2 eta) <= 0.4", format!("ratio = {w}")));
        }
        if !(self.d >= 10.0) {
            out.push(hypothesis(THM, "D >= 10", format!("D = {}", self.d)));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Checking {
    #[default]
    Strict,
    /// Skip validation; the result is marked unverified.
    Unchecked,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem4Bound {
    pub exponent: f64,
    pub ln_c: f64,
    pub hypotheses_verified: bool,
}

/// Exponent of `P` and `ln C` in the incomplete-system bound.
pub fn theorem4_bound(p: &IncompleteParams, checking: Checking) -> Result<Theorem4Bound> {
    let verified = match checking {
        Checking::Strict => {
            p.validate()?;
            true
        }
        Checking::Unchecked => p.violations().is_empty(),
    };
    let (k, h, s, t, eta) = (p.k as f64, p.h as f64, p.s as f64, p.t() as f64, p.eta);
    let exponent = 2.0 * s - 0.5 * t * (h + k)
        + 0.5 * t * (t - 1.0)
        + eta * s * s / (2.0 * t)
        + h * t * (-s / (h * t)).exp();
    let lk = k.ln();
    let ln_c = s * s / t + 10.5 * t * lk * lk / (p.d * k * eta * eta)
        - s * ((1.0 / eta + h) * (1.0 - 1.0 / h).powf(s / t) - h) * (1.0 / (10.0 * eta)).ln();
    Ok(Theorem4Bound {
        exponent,
        ln_c,
        hypotheses_verified: verified,
    })
}

fn lemma42_check(k: u32, h: u32, l: u32, eta: f64, log_p: f64, j: u32) -> Result<()> {
    const L42: &str = "per-step exponent E_j";
    let t = k as i64 - h as i64 + 1;
    if k < 60 {
        return Err(hypothesis(L42, "k >= 60", format!("k = {k}")));
    }
    if h > k || t as f64 > k as f64 / 6.0 {
        return Err(hypothesis(L42, "h <= k, t <= k/6", format!("k = {k}, h = {h}")));
    }
    if !(1 <= l && l as f64 <= h as f64 / 2.0) {
        return Err(hypothesis(L42, "1 <= L <= h/2", format!("L = {l}, h = {h}")));
    }
    if !(eta > 0.0 && eta <= 2.0 / (3.0 * h as f64)) {
        return Err(hypothesis(L42, "0 < eta <= 2/(3h)", format!("eta = {eta}")));
    }
    if eta * log_p < 3.0 * (2.0 / eta).ln() {
        return Err(hypothesis(L42, "R >= (2/eta)^3", format!("eta = {eta}, log P = {log_p}")));
    }
    if !(2 <= j && j <= l) {
        return Err(hypothesis(L42, "2 <= j <= L", format!("j = {j}, L = {l}")));
    }
    Ok(())
}

/// `E_j = alpha^{L-j} [ (4 log k/eta)(j-1) - (j - (j-1)/h - h + h alpha^j) log P ]`.
pub fn lemma42_ej(k: u32, h: u32, l: u32, eta: f64, log_p: f64, j: u32) -> Result<f64> {
    lemma42_check(k, h, l, eta, log_p, j)?;
    let (hh, jj) = (h as f64, j as f64);
    let alpha = 1.0 - 1.0 / hh;
    let f = jj - (jj - 1.0) / hh - hh + hh * alpha.powi(j as i32);
    Ok(alpha.powi((l - j) as i32) * (4.0 * (k as f64).ln() / eta * (jj - 1.0) - f * log_p))
}

/// `x = 4 log k / (A eta alpha)`.
pub fn lemma43_x(k: u32, h: u32, eta: f64, a: f64) -> f64 {
    4.0 * (k as f64).ln() / (a * eta * (1.0 - 1.0 / h as f64))
}

/// Upper bound for `max_{j >= 2} E_j` when `log P >= A`.
pub fn lemma43_max(k: u32, h: u32, eta: f64, a: f64) -> Result<f64> {
    let x = lemma43_x(k, h, eta, a);
    if !(x > 0.0 && x < 1.0) {
        return Err(hypothesis("maximum of E_j", "0 < x < 1", format!("x = {x}")));
    }
    Ok(4.0 * (k as f64).ln() / eta * (1.0 + h as f64 * (1.0 + (1.0 - x) * (1.0 - x).ln() / x)))
}

/// `1 + (1-x) log(1-x)/x`, the bracket bounded by `0.5866 x` on `[18/k, 0.408]`.
pub fn lemma43_bracket(x: f64) -> f64 {
    1.0 + (1.0 - x) * (-x).ln_1p() / x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> IncompleteParams {
        IncompleteParams::new(106, 100, 231, 1.0 / (3.6 * 106f64.powf(1.5)), 30.57)
    }

    #[test]
    fn example_is_admissible() {
        let p = example();
        assert_eq!(p.t(), 7);
        assert!(p.violations().is_empty(), "{:?}", p.violations());
        let b = theorem4_bound(&p, Checking::Strict).unwrap();
        assert!(b.exponent.is_finite() && b.ln_c.is_finite());
        assert!(b.hypotheses_verified);
    }

    #[test]
    fn each_hypothesis_triggers_alone() {
        let base = example();
        let cases = [
            (IncompleteParams { k: 50, h: 45, s: 24, eta: 0.005, d: 30.0 }, "k >= 60"),
            (IncompleteParams { h: 89, ..base }, "0.9k <= h <= k-2"),
            (IncompleteParams { s: 13, ..base }, "2t <= s <= floor(h/2) t"),
            (IncompleteParams { s: 351, ..base }, "2t <= s <= floor(h/2) t"),
            (IncompleteParams { eta: 0.006, ..base }, "2/k^3 < eta <= 1/(2k)"),
            (IncompleteParams { d: 200.0, ..base }, "18/k <= 4 log k/(D k^2 eta) <= 0.4"),
        ];
        for (p, cond) in cases {
            match theorem4_bound(&p, Checking::Strict) {
                Err(Error::Hypothesis { condition, .. }) => assert_eq!(condition, cond),
                other => panic!("{p:?}: {other:?}"),
            }
        }
        // D < 10 alone: shrink eta to keep the window ratio in range
        let p = IncompleteParams { d: 9.0, eta: base.eta * 30.57 / 9.0, ..base };
        let v = p.violations();
        assert!(v.iter().any(|e| matches!(e, Error::Hypothesis { condition: "D >= 10", .. })));
    }

    #[test]
    fn unchecked_marks_result() {
        let p = IncompleteParams { k: 50, h: 45, s: 24, eta: 0.005, d: 30.0 };
        let b = theorem4_bound(&p, Checking::Unchecked).unwrap();
        assert!(!b.hypotheses_verified);
    }

    #[test]
    fn exponent_at_s_equals_2t() {
        let p = IncompleteParams { s: 14, ..example() };
        let b = theorem4_bound(&p, Checking::Strict).unwrap();
        let (k, h, t, s) = (106.0, 100.0, 7.0, 14.0);
        let want = 2.0 * s - 0.5 * t * (h + k) + 0.5 * t * (t - 1.0) + p.eta * s * s / (2.0 * t)
            + h * t * (-2.0f64 / h).exp();
        assert!((b.exponent - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn ej_at_two_has_vanishing_f() {
        let p = example();
        let log_p = p.d * 106.0 * 106.0;
        let e2 = lemma42_ej(106, 100, 5, p.eta, log_p, 2).unwrap();
        let alpha: f64 = 1.0 - 0.01;
        let want = alpha.powi(3) * 4.0 * 106f64.ln() / p.eta;
        assert!(((e2 - want) / want).abs() < 1e-6);
        assert!(lemma42_ej(106, 100, 5, p.eta, log_p, 1).is_err());
        assert!(lemma42_ej(106, 100, 5, p.eta, log_p, 6).is_err());
        assert!(lemma42_ej(106, 100, 51, p.eta, log_p, 2).is_err());
        assert!(lemma42_ej(59, 55, 5, p.eta, log_p, 2).is_err());
        assert!(lemma42_ej(106, 100, 5, 0.01, log_p, 2).is_err());
    }

    #[test]
    fn bracket_bound_and_small_x() {
        let mut x = 18.0 / 106.0;
        while x <= 0.408 {
            assert!(lemma43_bracket(x) <= 0.5866 * x);
            x += 1e-4;
        }
        let x = 1e-6;
        assert!((lemma43_bracket(x) - x / 2.0).abs() < 1e-11);
        assert!(lemma43_max(106, 100, 1e-9, 1.0).is_err());
    }

    #[test]
    fn ej_below_closed_form_max() {
        for k in (60..=300).step_by(7) {
            let h = k - (k / 12).max(2);
            for &eta_scale in &[0.3, 0.6, 1.0] {
                let eta = eta_scale * 2.0 / (3.0 * h as f64);
                let x_target = 0.3;
                let a = lemma43_x(k, h, eta, 1.0) / x_target;
                let l = h / 2;
                let max = lemma43_max(k, h, eta, a).unwrap();
                for j in 2..=l {
                    if let Ok(e) = lemma42_ej(k, h, l, eta, a, j) {
                        assert!(e <= max * (1.0 + 1e-12), "k={k} j={j}: {e} > {max}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn exponent_monotone_in_s_and_eta(k in 60u32..300, hfrac in 0.0f64..1.0, sfrac in 0.0f64..1.0, efrac in 0.05f64..0.95) {
            let kk = k as f64;
            let hmin = (0.9 * kk).ceil() as u32;
            let h = hmin + ((k - 2 - hmin) as f64 * hfrac) as u32;
            let t = (k - h + 1) as u64;
            let (smin, smax) = (2 * t, (h / 2) as u64 * t);
            let s = smin + ((smax - 1 - smin) as f64 * sfrac) as u64;
            let eta = 2.0 / kk.powi(3) + efrac * (0.5 / kk - 2.0 / kk.powi(3));
            let p = IncompleteParams::new(k, h, s, eta, 30.0);
            let b0 = theorem4_bound(&p, Checking::Unchecked).unwrap().exponent;
            let b1 = theorem4_bound(&IncompleteParams { s: s + 1, ..p }, Checking::Unchecked).unwrap().exponent;
            let b2 = theorem4_bound(&IncompleteParams { eta: eta * 1.01, ..p }, Checking::Unchecked).unwrap().exponent;
            prop_assert!(b1 > b0);
            prop_assert!(b2 > b0);
        }
    }
}
