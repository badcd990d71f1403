//! Intermediate and large `lambda`: the sum `H` over `h <= j <= g`, its
//! quadratic lower bound, the per-interval parameter search, and the grid
//! check of the closed-form exponent for `lambda >= 220`.
//!
//! [`calc_interval`] and [`search_intervals`] follow the reference C program
//! statement for statement, including its use of the interval midpoint for
//! `k`, `m_1` and `m_2` while `H'` uses the endpoints.

use serde::Serialize;

use crate::complete::THEOREM3_BANDS;
use crate::error::{hypothesis, Error, Result};
use crate::exec::Execution;

pub const MU1: f64 = 0.1905;
pub const MU2: f64 = 0.1603;
pub const GOAL: f64 = 133.66;

/// How `s` is chosen for each `(g, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SRule {
    /// `s = floor(sigma h t + 1)`.
    Fixed(f64),
    /// Every `s` in `h(t-1)/4 ..= ht/2` (integer division).
    Search,
}

/// Which accepted candidate an interval reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Selection {
    /// Smallest constant among accepted candidates, first found on ties.
    #[default]
    MinConstant,
    /// The last accepted candidate in scan order. The reference program
    /// never lowers its running best, so this is what it actually prints.
    LastAccepted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeLambdaConfig {
    pub mu1: f64,
    pub mu2: f64,
    pub y: f64,
    pub xi: f64,
    pub s_rule: SRule,
    pub goal: f64,
    /// Smallest admissible `g`: 100 as in the reference code, 106 in strict mode.
    pub g_min: i64,
    pub selection: Selection,
}

impl Default for LargeLambdaConfig {
    fn default() -> Self {
        LargeLambdaConfig {
            mu1: MU1,
            mu2: MU2,
            y: 300.0,
            xi: 3.6,
            s_rule: SRule::Search,
            goal: GOAL,
            g_min: 100,
            selection: Selection::MinConstant,
        }
    }
}

impl LargeLambdaConfig {
    /// `D = 0.1019 Y`.
    pub fn d(&self) -> f64 {
        0.1019 * self.y
    }

    pub fn strict(mut self) -> Self {
        self.g_min = 106;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu1 > self.mu2 && self.mu2 > 0.0 && self.mu1 + self.mu2 < 1.0) {
            return Err(hypothesis(
                "interval search",
                "mu1 > mu2 > 0, mu1 + mu2 < 1",
                format!("mu1 = {}, mu2 = {}", self.mu1, self.mu2),
            ));
        }
        Ok(())
    }
}

/// `sum_{j=h}^{g} min(j mu2, j - lam, lam - j(1 - mu1 - mu2))`.
pub fn h_sum_exact(lam: f64, g: i64, h: i64, mu1: f64, mu2: f64) -> f64 {
    (h..=g)
        .map(|j| {
            let j = j as f64;
            (j * mu2).min(j - lam).min(lam - j * (1.0 - mu1 - mu2))
        })
        .sum()
}

/// Coefficients `(H_2, H_1, H_0)` of the quadratic lower bound.
pub fn h_coefficients(phi: f64, gamma: f64, mu1: f64, mu2: f64) -> (f64, f64, f64) {
    let nu = 1.0 - mu1 - mu2;
    let h2 = phi + gamma - gamma * gamma / 2.0 - nu / 2.0 * phi * phi
        - (2.0 - mu1 - mu2) / (2.0 * (1.0 - mu1) * (1.0 - mu2));
    let h1 = gamma / 2.0 - phi / 2.0 * nu;
    let h0 = (2.0 - mu1 - mu2) / 8.0;
    (h2, h1, h0)
}

/// `H_2 lam^2 + H_1 lam - H_0` with `phi = g/lam`, `gamma = h/lam`.
pub fn h_lower(lam: f64, phi: f64, gamma: f64, mu1: f64, mu2: f64) -> f64 {
    let (h2, h1, h0) = h_coefficients(phi, gamma, mu1, mu2);
    h2 * lam * lam + h1 * lam - h0
}

/// `(Z_0, Z_1)` with `H = Z_0 + Z_1 lam` while `m_1`, `m_2` are fixed.
pub fn h_linear_form(lam: f64, g: i64, h: i64, mu1: f64, mu2: f64) -> (f64, f64) {
    let (gg, hh) = (g as f64, h as f64);
    let m1 = (lam / (1.0 - mu1)).floor();
    let m2 = (lam / (1.0 - mu2)).floor();
    let z0 = 0.5
        * ((m1 * m1 + m1) * (1.0 - mu1) + (m2 * m2 + m2) * (1.0 - mu2) - hh * hh + hh
            - (1.0 - mu1 - mu2) * (gg * gg + gg));
    let z1 = hh + gg - m1 - m2 - 1.0;
    (z0, z1)
}

/// `(rho, theta)` for the band containing `k`, as the reference code picks it.
pub fn rho_theta(k: i64) -> (f64, f64) {
    let [b1, b2, b3] = THEOREM3_BANDS;
    if k <= 149 {
        (b1.rho, b1.theta)
    } else if k <= 199 {
        (b2.rho, b2.theta)
    } else {
        (b3.rho, b3.theta)
    }
}

/// Every intermediate of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalcOutput {
    pub k: i64,
    pub r: i64,
    pub t: i64,
    pub z0: f64,
    pub z1: f64,
    /// Lower bound for `H` over the interval.
    pub h_prime: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// `lam_1^2 E`; the candidate is usable only when positive.
    pub exponent: f64,
    pub denom_u: f64,
    pub ln_c1: f64,
    pub ln_c2: f64,
    pub ln_c3: f64,
    pub constant: f64,
}

/// Evaluates one `(g, h, s)` on `[lam1, lam2]`.
pub fn calc_interval(
    lam1: f64,
    lam2: f64,
    g: i64,
    h: i64,
    s: i64,
    cfg: &LargeLambdaConfig,
) -> Result<CalcOutput> {
    if !(80.0 < lam1 && lam1 < lam2 && lam2 < 300.0) {
        return Err(hypothesis(
            "interval evaluation",
            "80 < lam1 < lam2 < 300",
            format!("[{lam1}, {lam2}]"),
        ));
    }
    let (mu1, mu2, xi) = (cfg.mu1, cfg.mu2, cfg.xi);
    let lam = 0.5 * (lam1 + lam2);
    let k = (lam / (1.0 - mu1 - mu2) + 0.000003) as i64;
    let kk = k as f64;
    let logk = kk.ln();
    let k2 = kk * kk;
    let (rho, th) = rho_theta(k);
    let r = (rho * k2 + 1.0) as i64;
    let t = g - h + 1;
    let (rr, ss, gg, hh, tt) = (r as f64, s as f64, g as f64, h as f64, t as f64);

    let (z0, z1) = h_linear_form(lam, g, h, mu1, mu2);
    if !(z1 == -1.0 || z1 == 0.0 || z1 == 1.0) {
        return Err(Error::Domain(format!(
            "Z1 = {z1} outside {{-1, 0, 1}} for g = {g}, h = {h} on [{lam1}, {lam2}]"
        )));
    }
    let h_prime = if z1 < 0.0 { z0 + lam2 * z1 } else { z0 + lam1 * z1 };
    let reta = xi * gg.powf(1.5);
    let e1 = 0.001 * k2;
    let e2 = 0.5 * tt * (tt - 1.0) + hh * tt * (-ss / (hh * tt)).exp() + ss * ss / (2.0 * tt * reta);
    let e3 = (cfg.y * lam1 * lam1).ln() / (7.5 * cfg.y * lam1 * lam1 * lam1 * lam1);
    let exponent = (-e3 + (1.0 / (2.0 * rr * ss)) * (h_prime - mu1 * e1 - mu2 * e2)) * lam1 * lam1;
    let ln_c1 = th * k2 * kk * logk;
    let ln_c2 = large_ln_c2(g, h, s, xi, cfg.d());
    let ln_c3 = 1.04 * reta * (10.82 * reta).ln();
    let log_c = ln_c3 / rr + (5.0 * lam2 * lam2.ln() + ln_c1 + ln_c2) / (2.0 * rr * ss);
    Ok(CalcOutput {
        k,
        r,
        t,
        z0,
        z1,
        h_prime,
        e1,
        e2,
        e3,
        exponent,
        denom_u: 1.0 / exponent,
        ln_c1,
        ln_c2,
        ln_c3,
        constant: log_c.exp() + 1.0 / kk,
    })
}

/// The incomplete-system constant with `g` in place of `k` and
/// `1/eta = xi g^{3/2}`, in the reference code's operation order.
pub fn large_ln_c2(g: i64, h: i64, s: i64, xi: f64, d: f64) -> f64 {
    let (gg, hh, ss, tt) = (g as f64, h as f64, s as f64, (g - h + 1) as f64);
    let reta = xi * gg.powf(1.5);
    let mut c = ss * ss / tt + 10.5 * xi * xi * tt * gg * gg * gg.ln() * gg.ln() / d;
    c -= ss * (0.1 * reta).ln() * ((reta + hh) * (1.0 - 1.0 / hh).powf(ss / tt) - hh);
    c
}

/// Interval endpoints: `lmin`, `lmax` and every `w(1-mu1)`, `w(1-mu2)`,
/// `(w - 0.000003)(1 - mu1 - mu2)` strictly between them, sorted.
pub fn breakpoints(lmin: f64, lmax: f64, cfg: &LargeLambdaConfig) -> Vec<f64> {
    let (mu1, mu2) = (cfg.mu1, cfg.mu2);
    let mut bp = vec![lmin, lmax];
    let i0 = (lmax / (1.0 - mu1 - mu2)) as i64 + 10;
    for i in 1..=i0 {
        let w = i as f64;
        for r in [w * (1.0 - mu1), w * (1.0 - mu2), (w - 0.000003) * (1.0 - mu1 - mu2)] {
            if r < lmax && r > lmin {
                bp.push(r);
            }
        }
    }
    bp.sort_by(f64::total_cmp);
    bp
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalChoice {
    pub g: i64,
    pub h: i64,
    pub s: i64,
    pub t: i64,
    /// `g - g_0`.
    pub a: i64,
    /// `h_1 - h`.
    pub b: i64,
    pub denom_u: f64,
    pub constant_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaIntervalResult {
    pub lam1: f64,
    pub lam2: f64,
    pub k: i64,
    /// `None` when no candidate meets the target.
    pub choice: Option<IntervalChoice>,
}

impl LambdaIntervalResult {
    /// The reported constant, infinite for an infeasible interval.
    pub fn constant(&self) -> f64 {
        self.choice.map_or(f64::INFINITY, |c| c.constant_c)
    }
}

/// Best parameters on one interval.
pub fn search_interval(lam1: f64, lam2: f64, cfg: &LargeLambdaConfig) -> Result<LambdaIntervalResult> {
    let (mu1, mu2) = (cfg.mu1, cfg.mu2);
    let lam = 0.5 * (lam1 + lam2);
    let g0 = (lam / (1.0 - mu1) + 1.0) as i64;
    let h1 = (lam / (1.0 - mu2)) as i64;
    let mut best: Option<IntervalChoice> = None;
    for g in g0..=g0 + 1 {
        for h in h1 - 1..=h1 {
            let t = g - h + 1;
            if !(g >= cfg.g_min && g as f64 <= 1.254 * lam1) {
                continue;
            }
            let (s0, s1) = match cfg.s_rule {
                SRule::Fixed(sigma) => {
                    let s = (sigma * h as f64 * t as f64 + 1.0) as i64;
                    (s, s)
                }
                SRule::Search => (h * (t - 1) / 4, h * t / 2),
            };
            for s in s0..=s1 {
                let out = calc_interval(lam1, lam2, g, h, s, cfg)?;
                let e = out.exponent;
                if !(e > 0.0 && 1.0 / e < cfg.goal) {
                    continue;
                }
                let better = match (cfg.selection, best) {
                    (_, None) | (Selection::LastAccepted, _) => true,
                    (Selection::MinConstant, Some(b)) => out.constant < b.constant_c,
                };
                if better {
                    best = Some(IntervalChoice {
                        g,
                        h,
                        s,
                        t,
                        a: g - g0,
                        b: h1 - h,
                        denom_u: out.denom_u,
                        constant_c: out.constant,
                    });
                }
            }
        }
    }
    Ok(LambdaIntervalResult {
        lam1,
        lam2,
        k: (lam / (1.0 - mu1 - mu2) + 0.000003) as i64,
        choice: best,
    })
}

/// Runs [`search_interval`] on every interval between consecutive
/// breakpoints of `[lmin, lmax]`, skipping zero-width ones.
pub fn search_intervals(
    lmin: f64,
    lmax: f64,
    cfg: &LargeLambdaConfig,
    exec: Execution,
) -> Result<Vec<LambdaIntervalResult>> {
    cfg.validate()?;
    if !(lmin < lmax && lmin > 80.0 && lmax < 300.0) {
        return Err(hypothesis("interval search", "80 < lmin < lmax < 300", format!("[{lmin}, {lmax}]")));
    }
    let bp = breakpoints(lmin, lmax, cfg);
    let pairs: Vec<(f64, f64)> = bp.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect();
    exec.map(&pairs, |&(a, b)| search_interval(a, b, cfg))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSummary {
    pub intervals: usize,
    pub infeasible: usize,
    pub max_constant: f64,
    pub max_denom_u: f64,
}

pub fn summarize(rows: &[LambdaIntervalResult]) -> SearchSummary {
    SearchSummary {
        intervals: rows.len(),
        infeasible: rows.iter().filter(|r| r.choice.is_none()).count(),
        max_constant: rows.iter().map(|r| r.constant()).fold(0.0, f64::max),
        max_denom_u: rows
            .iter()
            .filter_map(|r| r.choice.map(|c| c.denom_u))
            .fold(0.0, f64::max),
    }
}

/// Fixed inputs of the `lambda >= 220` closed-form check.
pub mod closed {
    pub const SIGMA: f64 = 0.3299;
    pub const LAMBDA: f64 = 220.0;
    pub const PHI: f64 = 1.2453;
    pub const GAMMA: f64 = 1.1818;
    pub const HALF_WIDTH: f64 = 1.0 / 440.0;
    pub const RHO: f64 = 3.21432;
    pub const CLAIMED_MAX: f64 = -0.0242145;
    pub const TARGET_DENOM: f64 = 133.58;
}

/// `k_0 = 1/0.6492 - 0.999997/lam` and `k_1 = 1/0.6492 + 0.000003/lam`.
pub fn k_ratio_bounds(lam: f64) -> (f64, f64) {
    (1.0 / 0.6492 - 0.999997 / lam, 1.0 / 0.6492 + 0.000003 / lam)
}

/// The relaxed exponent `f(gamma, phi)` for `lambda >= 220`.
pub fn lemma52_f(gamma: f64, phi: f64, lam: f64, sigma: f64, mu1: f64, mu2: f64) -> f64 {
    let (h2, _, _) = h_coefficients(phi, gamma, mu1, mu2);
    let (_, k1) = k_ratio_bounds(lam);
    let d = phi - gamma;
    1.0 / (2.002 * sigma * gamma)
        * (0.001 * mu1 / d + (1.0 / (k1 * k1)) * (-h2 / d + 1.001 * mu2 * (d / 2.0 + gamma * (-sigma).exp())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma52Grid {
    pub max_f: f64,
    pub argmax_gamma: f64,
    pub argmax_phi: f64,
    pub grid_n: usize,
}

/// Maximum of [`lemma52_f`] on a `grid_n x grid_n` grid over the box
/// `|phi - 1.2453| <= 1/440`, `|gamma - 1.1818| <= 1/440`, corners included.
pub fn lemma52_verify(grid_n: usize, exec: Execution) -> Result<Lemma52Grid> {
    use closed::*;
    if grid_n < 441 {
        return Err(hypothesis("closed-form grid", "grid_n >= 441", format!("grid_n = {grid_n}")));
    }
    let at = |c: f64, i: usize| c - HALF_WIDTH + 2.0 * HALF_WIDTH * i as f64 / (grid_n - 1) as f64;
    let rows = exec.map_range(0, grid_n as u64 - 1, |i| {
        let gamma = at(GAMMA, i as usize);
        (0..grid_n)
            .map(|j| {
                let phi = at(PHI, j);
                (lemma52_f(gamma, phi, LAMBDA, SIGMA, MU1, MU2), gamma, phi)
            })
            .fold((f64::NEG_INFINITY, 0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a })
    });
    let (max_f, g, p) = rows
        .into_iter()
        .fold((f64::NEG_INFINITY, 0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    Ok(Lemma52Grid {
        max_f,
        argmax_gamma: g,
        argmax_phi: p,
        grid_n,
    })
}

/// `1.52e-7 + (f + 0.0008 lam^{-1/2} + 0.021334/lam)/rho`, a bound for `lam^2 E`.
pub fn lemma52_assembled(max_f: f64, lam: f64) -> f64 {
    1.52e-7 + (max_f + 0.0008 / lam.sqrt() + 0.021334 / lam) / closed::RHO
}

/// `lam^2 E` evaluated directly from the unrelaxed exponent with the
/// integer parameters `h = [1.1818 lam + 1/2]`, `g = [1.2453 lam + 1/2]`,
/// `s = [sigma h (t-1) + 1]`, `xi = 6` and `Y = 300`.
pub fn lemma52_direct(lam: f64) -> f64 {
    use closed::SIGMA;
    let (mu1, mu2, y, xi) = (MU1, MU2, 300.0, 6.0);
    let h = (1.1818 * lam + 0.5).floor() as i64;
    let g = (1.2453 * lam + 0.5).floor() as i64;
    let t = g - h + 1;
    let s = (SIGMA * h as f64 * (t - 1) as f64 + 1.0).floor();
    let k = (lam / (1.0 - mu1 - mu2) + 0.000003).floor();
    let (rho, _) = rho_theta(k as i64);
    let r = (rho * k * k + 1.0).floor();
    let (gg, hh, tt) = (g as f64, h as f64, t as f64);
    let hsum = h_sum_exact(lam, g, h, mu1, mu2);
    let e2 = 0.5 * tt * (tt - 1.0) + hh * tt * (-s / (hh * tt)).exp() + s * s / (2.0 * tt * xi * gg.powf(1.5));
    let e = (y * lam * lam).ln() / (7.5 * y * lam.powi(4))
        + (-hsum + 0.001 * mu1 * k * k + mu2 * e2) / (2.0 * r * s);
    e * lam * lam
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_term_sum() {
        let v = h_sum_exact(100.0, 120, 120, MU1, MU2);
        let want = (120.0 * MU2).min(20.0).min(100.0 - 120.0 * (1.0 - MU1 - MU2));
        assert_eq!(v, want);
    }

    #[test]
    fn sum_matches_linear_form() {
        let lam = 100.0;
        let (z0, z1) = h_linear_form(lam, 125, 118, MU1, MU2);
        let direct = h_sum_exact(lam, 125, 118, MU1, MU2);
        assert!((z0 + z1 * lam - direct).abs() < 1e-9);
    }

    #[test]
    fn h0_is_constant() {
        let (_, _, a) = h_coefficients(1.2, 1.1, MU1, MU2);
        let (_, _, b) = h_coefficients(1.3, 1.0, MU1, MU2);
        assert_eq!(a, b);
        assert_eq!(a, (2.0 - MU1 - MU2) / 8.0);
    }

    #[test]
    fn d_for_default_y() {
        assert!((LargeLambdaConfig::default().d() - 30.57).abs() < 1e-12);
    }

    #[test]
    fn z1_outside_range_rejected() {
        let cfg = LargeLambdaConfig::default();
        assert!(matches!(calc_interval(100.0, 100.1, 140, 110, 200, &cfg), Err(Error::Domain(_))));
        assert!(calc_interval(79.0, 100.0, 124, 118, 200, &cfg).is_err());
    }

    #[test]
    fn breakpoints_sorted_inside_range() {
        let cfg = LargeLambdaConfig::default();
        let bp = breakpoints(100.0, 110.0, &cfg);
        assert_eq!(bp[0], 100.0);
        assert_eq!(*bp.last().unwrap(), 110.0);
        assert!(bp.windows(2).all(|w| w[0] <= w[1]));
        assert!(bp.len() > 10);
    }

    #[test]
    fn nonpositive_exponent_rejected() {
        // s = 1 leaves 1/(2rs) huge and the exponent negative
        let cfg = LargeLambdaConfig::default();
        let lam1 = 150.0;
        let lam2 = 150.05;
        let lam = 0.5 * (lam1 + lam2);
        let g = (lam / (1.0 - MU1)) as i64 + 1;
        let h = (lam / (1.0 - MU2)) as i64;
        let out = calc_interval(lam1, lam2, g, h, 1, &cfg).unwrap();
        assert!(out.exponent <= 0.0);
    }

    #[test]
    fn search_is_deterministic_and_parallel_safe() {
        let cfg = LargeLambdaConfig::default();
        let a = search_intervals(150.0, 152.0, &cfg, Execution::Sequential).unwrap();
        let b = search_intervals(150.0, 152.0, &cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        for r in &a {
            let (k0, k1) = k_ratio_bounds(0.5 * (r.lam1 + r.lam2));
            let ratio = r.k as f64 / (0.5 * (r.lam1 + r.lam2));
            assert!(k0 - 1e-12 <= ratio && ratio <= k1 + 1e-12);
            let c = r.choice.unwrap();
            assert!(c.denom_u <= GOAL && c.constant_c <= 8.38);
        }
    }

    #[test]
    fn min_constant_not_above_last_accepted() {
        let cfg = LargeLambdaConfig::default();
        let last = LargeLambdaConfig { selection: Selection::LastAccepted, ..cfg };
        let a = search_intervals(120.0, 121.0, &cfg, Execution::Parallel).unwrap();
        let b = search_intervals(120.0, 121.0, &last, Execution::Parallel).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.constant() <= y.constant());
        }
    }

    proptest! {
        #[test]
        fn quadratic_bound_below_sum(lam in 90.0f64..1000.0, dg in 0i64..3, dh in 0i64..2) {
            let m1 = (lam / (1.0 - MU1)).floor() as i64;
            let m2 = (lam / (1.0 - MU2)).floor() as i64;
            let g = m1 + dg;
            let h = m2 - dh;
            let exact = h_sum_exact(lam, g, h, MU1, MU2);
            let lower = h_lower(lam, g as f64 / lam, h as f64 / lam, MU1, MU2);
            prop_assert!(lower <= exact + 1e-9 * exact.abs().max(1.0));
        }

        #[test]
        fn h_prime_below_sum_inside_interval(start in 90.0f64..280.0, frac in 0.0f64..=1.0) {
            let cfg = LargeLambdaConfig::default();
            let bp = breakpoints(start, start + 1.0, &cfg);
            let (lam1, lam2) = (bp[1], bp[2]);
            prop_assume!(lam2 > lam1);
            let lam = 0.5 * (lam1 + lam2);
            let g = (lam / (1.0 - MU1) + 1.0) as i64;
            let h = (lam / (1.0 - MU2)) as i64;
            let out = calc_interval(lam1, lam2, g, h, 100, &cfg).unwrap();
            let x = lam1 + frac * (lam2 - lam1);
            let x = x.clamp(lam1 + 1e-9 * (lam2 - lam1), lam2 - 1e-9 * (lam2 - lam1));
            prop_assert!(out.h_prime <= h_sum_exact(x, g, h, MU1, MU2) + 1e-9);
        }
    }
}
