//! Upper bounds for `|zeta(sigma + it)|` (and `|zeta(s,u) - u^{-s}|`) in
//! `1/2 <= sigma <= 1`, the map from an exponential-sum bound `(C, D)` to the
//! zeta constants `(A, B)`, and the character-sum corollary.

use serde::Serialize;

use crate::error::{hypothesis, Error, Result};
use crate::nt::euler_phi;
use crate::small::THEOREM2_C;

pub const A: f64 = 76.2;
pub const B: f64 = 4.45;
/// Coefficient of the crude bound, valid for `sigma <= 15/16` or `t <= 10^100`.
pub const CRUDE_A: f64 = 58.1;
pub const INTEGRAL_MAX: f64 = 1.0875034;

fn check_strip(sigma: f64, t: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&sigma) || !(t >= 3.0) || !t.is_finite() {
        return Err(hypothesis(
            "zeta bound",
            "1/2 <= sigma <= 1, t >= 3",
            format!("sigma = {sigma}, t = {t}"),
        ));
    }
    Ok(())
}

/// `(t + 3/2)^{1-sigma} (1 + 1/t + min(1/(1-sigma), log(2t+1)))`.
pub fn crude_bound(sigma: f64, t: f64) -> Result<f64> {
    check_strip(sigma, t)?;
    let x = 1.0 - sigma;
    let tail = if x > 0.0 { (1.0 / x).min((2.0 * t + 1.0).ln()) } else { (2.0 * t + 1.0).ln() };
    Ok((t + 1.5).powf(x) * (1.0 + 1.0 / t + tail))
}

/// `58.1 t^{4(1-sigma)^{3/2}} log^{2/3} t`, or `None` outside its range.
pub fn packaged_crude_bound(sigma: f64, t: f64) -> Result<Option<f64>> {
    check_strip(sigma, t)?;
    if sigma > 15.0 / 16.0 && t > 1e100 {
        return Ok(None);
    }
    Ok(Some(power_log_bound(CRUDE_A, 4.0, sigma, t.ln())))
}

/// `a t^{b (1-sigma)^{3/2}} log^{2/3} t`, evaluated from `log t`.
fn power_log_bound(a: f64, b: f64, sigma: f64, ln_t: f64) -> f64 {
    (a.ln() + b * (1.0 - sigma).powf(1.5) * ln_t + 2.0 / 3.0 * ln_t.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaConstants {
    pub c_exp: f64,
    pub d_exp: f64,
    pub a: f64,
    pub b: f64,
}

/// `B = (2/9) sqrt(3D)` and `A` at the worst case `t = 10^100`.
pub fn lemma73_constants(c: f64, d: f64) -> Result<ZetaConstants> {
    if !(c > 0.0 && d > 0.0) {
        return Err(Error::Domain(format!("C = {c}, D = {d} must be positive")));
    }
    Ok(ZetaConstants {
        c_exp: c,
        d_exp: d,
        a: lemma73_a(c, d, 100.0 * 10f64.ln()),
        b: 2.0 / 9.0 * (3.0 * d).sqrt(),
    })
}

/// `(C + 1 + 10^-80)/log^{2/3} t + 1.569 C D^{1/3}` at a given `log t`.
pub fn lemma73_a(c: f64, d: f64, ln_t: f64) -> f64 {
    (c + 1.0 + 1e-80) / ln_t.powf(2.0 / 3.0) + 1.569 * c * d.cbrt()
}

/// Which result produced a zeta bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZetaSource {
    Main,
    Crude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaBound {
    pub value: f64,
    pub source: ZetaSource,
    pub main: f64,
    pub crude: Option<f64>,
}

/// The smaller of `76.2 t^{4.45 (1-sigma)^{3/2}} log^{2/3} t` and, where it
/// applies, the crude bound.
pub fn zeta_bound(sigma: f64, t: f64) -> Result<ZetaBound> {
    check_strip(sigma, t)?;
    let main = power_log_bound(A, B, sigma, t.ln());
    let crude = packaged_crude_bound(sigma, t)?;
    let (value, source) = match crude {
        Some(c) if c < main => (c, ZetaSource::Crude),
        _ => (main, ZetaSource::Main),
    };
    Ok(ZetaBound { value, source, main, crude })
}

/// `e^{-2y^3} int_0^inf e^{3y^2 u - u^3} du`, written as
/// `int_0^inf exp(-(u-y)^2 (u+2y)) du` so the integrand peaks at 1.
pub fn integral_constant(y: f64, tol: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("y = {y} < 0")));
    }
    let f = |u: f64| (-(u - y) * (u - y) * (u + 2.0 * y)).exp();
    // beyond `hi` the integrand is below 1e-18
    let cut = 18.0 * 10f64.ln();
    let mut hi = y + 1.0;
    while (hi - y) * (hi - y) * (hi + 2.0 * y) < cut {
        hi += 0.5;
    }
    let left = if y > 0.0 { adaptive_simpson(&f, 0.0, y, tol / 2.0)? } else { 0.0 };
    Ok(left + adaptive_simpson(&f, y, hi, tol / 2.0)?)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Quadrature { a, b });
        }
        Ok(rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralCheck {
    pub max_value: f64,
    pub argmax_y: f64,
    pub holds: bool,
}

/// Maximises [`integral_constant`] over `y in [0, 5]`: a 1000-point grid,
/// then golden-section search around the best grid point.
pub fn verify_integral_constant(tol: f64) -> Result<IntegralCheck> {
    let n = 1000;
    let step = 5.0 / n as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=n {
        let y = i as f64 * step;
        let v = integral_constant(y, tol)?;
        if v > best.0 {
            best = (v, y);
        }
    }
    let (mut a, mut b) = ((best.1 - step).max(0.0), (best.1 + step).min(5.0));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (integral_constant(c, tol)?, integral_constant(d, tol)?);
    while b - a > 1e-8 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = integral_constant(c, tol)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = integral_constant(d, tol)?;
        }
    }
    let y = 0.5 * (a + b);
    let v = integral_constant(y, tol)?.max(best.0);
    Ok(IntegralCheck {
        max_value: v,
        argmax_y: y,
        holds: v <= INTEGRAL_MAX && (0.70..=0.72).contains(&y),
    })
}

/// `10.463 (phi(q)/q) N exp(-log^3(N/q) / (133.66 log^2 t))`.
pub fn corollary2a_bound(q: u64, n: f64, t: f64) -> Result<f64> {
    if !(q >= 1 && q as f64 <= n && n >= 2.0 && n <= q as f64 * t) {
        return Err(hypothesis(
            "character sum bound",
            "q <= N, 2 <= N <= qt",
            format!("q = {q}, N = {n}, t = {t}"),
        ));
    }
    let l = (n / q as f64).ln();
    let lt = t.ln();
    Ok((THEOREM2_C + 1.0) * euler_phi(q) as f64 / q as f64 * n * (-l.powi(3) / (133.66 * lt * lt)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crude_at_sigma_one() {
        let v = crude_bound(1.0, 3.0).unwrap();
        assert!((v - (1.0 + 1.0 / 3.0 + 7f64.ln())).abs() < 1e-14);
        assert!((v - 3.279).abs() < 1e-3);
        assert!(crude_bound(0.4, 3.0).is_err());
        assert!(crude_bound(0.7, 2.0).is_err());
    }

    #[test]
    fn exponent_gap_maximum() {
        // max of x - 4 x^{3/2} on [0, 1/16] is 1/108 at x = 1/36
        let g = |x: f64| x - 4.0 * x.powf(1.5);
        let best = (0..=100_000).map(|i| g(i as f64 / 1.6e6)).fold(f64::MIN, f64::max);
        assert!((best - 1.0 / 108.0).abs() < 1e-9);
        assert!((g(1.0 / 36.0) - 1.0 / 108.0).abs() < 1e-15);
    }

    #[test]
    fn packaged_dominates_crude_for_small_sigma() {
        for i in 0..=40 {
            let sigma = 0.5 + (15.0 / 16.0 - 0.5) * i as f64 / 40.0;
            for t in [3.0, 10.0, 1e3, 1e6, 1e12] {
                let p = packaged_crude_bound(sigma, t).unwrap().unwrap();
                assert!(p >= crude_bound(sigma, t).unwrap());
            }
        }
        assert!(packaged_crude_bound(0.97, 1e101).unwrap().is_none());
        assert!(packaged_crude_bound(0.97, 1e99).unwrap().is_some());
    }

    #[test]
    fn constants_from_theorem2() {
        let z = lemma73_constants(9.463, 133.66).unwrap();
        assert!(z.b <= 4.45 && (z.b - 4.4499).abs() < 1e-4);
        assert!(z.a <= 76.2 && (z.a - 76.19).abs() < 1e-2);
        let z4 = lemma73_constants(9.463, 4.0 * 133.66).unwrap();
        assert!((z4.b - 2.0 * z.b).abs() < 1e-12);
        let l10 = 10f64.ln();
        let firsts: Vec<f64> = [100.0, 200.0, 300.0].iter().map(|e| lemma73_a(9.463, 133.66, e * l10)).collect();
        assert!(firsts[0] > firsts[1] && firsts[1] > firsts[2]);
        assert!(lemma73_constants(0.0, 1.0).is_err());
    }

    #[test]
    fn integral_at_zero_is_gamma_four_thirds() {
        // Gamma(4/3)
        let v = integral_constant(0.0, 1e-9).unwrap();
        assert!((v - 0.892_979_511_569_249_2).abs() < 1e-8);
    }

    #[test]
    fn integral_stable_under_tolerance() {
        for y in [0.3, 0.71, 2.0] {
            let a = integral_constant(y, 1e-9).unwrap();
            let b = integral_constant(y, 5e-10).unwrap();
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn zeta_bound_cases() {
        let z = zeta_bound(1.0, 1e6).unwrap();
        assert!((z.main - A * (1e6f64).ln().powf(2.0 / 3.0)).abs() < 1e-9 * z.main);
        for i in 0..=10 {
            let sigma = 0.5 + 0.05 * i as f64;
            for t in [3.0, 100.0, 1e10, 1e50, 1e120] {
                let z = zeta_bound(sigma, t).unwrap();
                assert!(z.value >= 1.0);
                assert!(z.value <= z.main);
            }
        }
        assert_eq!(zeta_bound(0.99, 1e120).unwrap().source, ZetaSource::Main);
    }

    #[test]
    fn character_sum_cases() {
        let v = corollary2a_bound(1, 100.0, 1e6).unwrap();
        let l = 100f64.ln();
        let want = 10.463 * 100.0 * (-l.powi(3) / (133.66 * 1e6f64.ln().powi(2))).exp();
        assert!((v - want).abs() < 1e-10 * want);
        assert!((corollary2a_bound(12, 12.0, 1e6).unwrap() - 10.463 * 4.0).abs() < 1e-12);
        assert!(corollary2a_bound(12, 10.0, 1e6).is_err());
        assert!(corollary2a_bound(1, 1e7, 1e6).is_err());
    }
}
