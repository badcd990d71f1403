//! Complete-system engine: the phi recursion and one efficient-differencing
//! step, the `(Delta_n, C_n)` iteration, and the small-`k` search for `(rho, theta)`.
//!
//! The float path reproduces the reference C arithmetic operation for
//! operation. [`exact`] recomputes the same recursion over the rationals.

use serde::Serialize;

use crate::error::{hypothesis, Error, Result};
use crate::exec::Execution;

/// One state of the iteration: `J_{nk,k}(P) <= C_n P^{2nk - k(k+1)/2 + Delta_n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JBoundRecord {
    pub k: u32,
    pub n: u64,
    pub delta: f64,
    pub ln_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaSolution {
    pub omega: f64,
    pub eta: f64,
    /// `ln V = max(1.5 + 1.5/omega, ln((18/omega) k^3 ln k))`.
    pub ln_v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem3Result {
    pub k: u32,
    /// Steps taken before `Delta <= 0.001 k^2`.
    pub n: u64,
    pub s: u64,
    pub rho: f64,
    pub eta: f64,
    pub theta: f64,
}

/// `phi_1, ..., phi_j` with `phi[0] = phi_1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiSequence {
    pub j: u64,
    pub phi: Vec<f64>,
}

/// Validated `(k, r, Delta)` with the derived `y` and `j`.
#[derive(Debug, Clone, Copy)]
struct Step {
    tkr: f64,
    y: f64,
    j: i64,
}

fn step_setup(k: u32, r: u32, delta: f64) -> Result<Step> {
    let (kk, rr) = (k as f64, r as f64);
    let invalid = |reason: &'static str| Error::InvalidR { k, r, delta, reason };
    if rr < 4.0 || rr > kk {
        return Err(invalid("r outside [4, k]"));
    }
    let tkr = 2.0 * kk * rr;
    let y = 2.0 * delta - (kk - rr) * (kk - rr + 1.0);
    if y < 0.0 {
        return Err(invalid("2 Delta < (k-r)(k-r+1)"));
    }
    if 2.0 * kk / (tkr + y) <= 1.0 / (kk + 1.0) {
        return Err(invalid("phi* <= 1/(k+1)"));
    }
    let j1 = (0.5 * (3.0 + (4.0 * y + 1.0).sqrt())) as i64;
    let j2 = (9.0 * rr / 10.0) as i64;
    Ok(Step { tkr, y, j: j1.min(j2) })
}

/// The sequence `phi_j = 1/r`, `phi_J = 1/(2r) + ((2kr + J^2 - J - y)/(4kr)) phi_{J+1}`,
/// with `j` maximal subject to `(j-1)(j-2) <= y` and `j <= 9r/10`.
pub fn phi_sequence(k: u32, r: u32, delta: f64) -> Result<PhiSequence> {
    let st = step_setup(k, r, delta)?;
    let rr = r as f64;
    let mut phi = vec![0.0; st.j as usize];
    let mut p = 1.0 / rr;
    phi[st.j as usize - 1] = p;
    for jj in (1..st.j).rev() {
        p = 0.5 / rr + 0.5 * (1.0 + ((jj * jj - jj) as f64 - st.y) / st.tkr) * p;
        phi[jj as usize - 1] = p;
    }
    Ok(PhiSequence {
        j: st.j as u64,
        phi,
    })
}

/// `Delta' = Delta - k + (phi_1/2)(2kr - y)`, computed exactly as the
/// reference code does. Does not check for improvement.
fn new_delta(k: u32, r: u32, delta: f64) -> Result<f64> {
    let st = step_setup(k, r, delta)?;
    let rr = r as f64;
    let mut p = 1.0 / rr;
    for jj in (1..st.j).rev() {
        p = 0.5 / rr + 0.5 * (1.0 + ((jj * jj - jj) as f64 - st.y) / st.tkr) * p;
    }
    Ok(delta - k as f64 + 0.5 * p * (st.tkr - st.y))
}

/// One differencing step. Errors with `NoImprovement` unless the result is
/// strictly below `delta`.
pub fn delta_step(k: u32, r: u32, delta: f64) -> Result<f64> {
    let d = new_delta(k, r, delta)?;
    if d >= delta {
        return Err(Error::NoImprovement {
            k,
            n: 0,
            before: delta,
            after: d,
        });
    }
    Ok(d)
}

/// Fixed-point solution of `e^{1.5 + 1.5/omega} = (18/omega) k^3 ln k`,
/// ten iterations from `omega = 1/2`.
pub fn solve_omega(k: u32) -> Result<OmegaSolution> {
    if k < 129 {
        return Err(hypothesis("omega equation", "k >= 129", format!("k = {k}")));
    }
    let kk = k as f64;
    let k3 = kk * kk * kk * kk.ln();
    let mut om = 0.5;
    for _ in 0..10 {
        om = 1.5 / ((18.0 * k3 / om).ln() - 1.5);
    }
    Ok(OmegaSolution {
        omega: om,
        eta: 1.0 + om,
        ln_v: (1.5 + 1.5 / om).max((18.0 / om * k3).ln()),
    })
}

/// Relative residual of the omega equation, compared on the log scale.
pub fn omega_residual(k: u32, omega: f64) -> f64 {
    let kk = k as f64;
    let lhs = 1.5 + 1.5 / omega;
    let rhs = (18.0 / omega * kk.powi(3) * kk.ln()).ln();
    ((lhs - rhs) / rhs).abs()
}

/// Which candidate values of `r` to try at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RWindow {
    /// Five values `round(sqrt(k^2 + k - 2 Delta)) - 2 ..= +2`.
    #[default]
    Reference,
    /// `round(sqrt(...)) - w ..= + w`.
    Wide(u32),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub window: RWindow,
}

/// Search for the smallest `s = rho k^2` reaching `Delta <= 0.001 k^2`.
pub fn theorem3_search(k: u32) -> Result<Theorem3Result> {
    theorem3_search_with(k, &SearchOptions::default(), None)
}

/// As [`theorem3_search`], optionally recording every iteration state.
pub fn theorem3_search_with(
    k: u32,
    opts: &SearchOptions,
    mut trace: Option<&mut Vec<JBoundRecord>>,
) -> Result<Theorem3Result> {
    let om = solve_omega(k)?;
    let kk = k as f64;
    let logk = kk.ln();
    let k3 = kk * kk * kk * logk;
    let eta = om.eta;
    let log_w = (kk + 1.0) * om.ln_v;
    let mut del0 = 0.5 * kk * kk * (1.0 - 1.0 / kk);
    let goal = 0.001 * kk * kk;
    let log_h = 3.0 * kk * logk + (kk * kk - 4.0 * kk) * eta.ln();
    // k ln k stands in for ln k!
    let mut log_c = kk * logk;
    if let Some(t) = trace.as_deref_mut() {
        t.push(JBoundRecord { k, n: 1, delta: del0, ln_c: log_c });
    }
    for n in 1u64.. {
        let centre = (kk * kk + kk - 2.0 * del0).sqrt() + 0.5;
        let (r0, r1) = match opts.window {
            RWindow::Reference => {
                let r0 = centre as i64 - 2;
                (r0, r0 + 4)
            }
            RWindow::Wide(w) => (centre as i64 - w as i64, centre as i64 + w as i64),
        };
        let mut best = kk * kk;
        let mut best_r = None;
        for r in r0..=r1 {
            // invalid r scores 2 Delta, as in the reference
            let d = if r < 0 || r > u32::MAX as i64 {
                2.0 * del0
            } else {
                new_delta(k, r as u32, del0).unwrap_or(2.0 * del0)
            };
            if d < best {
                best = d;
                best_r = Some(r);
            }
        }
        let del1 = best;
        if best_r.is_none() || del1 >= del0 {
            return Err(Error::NoImprovement {
                k,
                n,
                before: del0,
                after: del1,
            });
        }
        log_c += (log_h + 4.0 * kk * n as f64 * eta.ln()).max(log_w * (del0 - del1));
        if let Some(t) = trace.as_deref_mut() {
            t.push(JBoundRecord { k, n: n + 1, delta: del1, ln_c: log_c });
        }
        if del1 <= goal {
            let s = ((n as f64 + (del0 - goal) / (del0 - del1)) * kk + 1.0) as u64;
            return Ok(Theorem3Result {
                k,
                n,
                s,
                rho: s as f64 / kk / kk,
                eta,
                theta: log_c / k3,
            });
        }
        del0 = del1;
    }
    unreachable!()
}

/// A published `k` band with its certified `(rho, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem3Band {
    pub k_min: u32,
    pub k_max: u32,
    pub rho: f64,
    pub theta: f64,
}

pub const THEOREM3_BANDS: [Theorem3Band; 3] = [
    Theorem3Band { k_min: 129, k_max: 149, rho: 3.22313, theta: 2.4183 },
    Theorem3Band { k_min: 150, k_max: 199, rho: 3.21734, theta: 2.3849 },
    Theorem3Band { k_min: 200, k_max: 400, rho: 3.21432, theta: 2.3291 },
];

/// Runs the search over `k_min..=k_max`.
pub fn theorem3_range(k_min: u32, k_max: u32, exec: Execution) -> Result<Vec<Theorem3Result>> {
    exec.map_range(k_min as u64, k_max as u64, |k| theorem3_search(k as u32))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandSummary {
    pub band: Theorem3Band,
    pub max_rho: f64,
    pub max_theta: f64,
    pub holds: bool,
}

pub fn summarize_band(band: Theorem3Band, rows: &[Theorem3Result]) -> BandSummary {
    let in_band = rows.iter().filter(|r| (band.k_min..=band.k_max).contains(&r.k));
    let (max_rho, max_theta) = in_band.fold((0.0f64, 0.0f64), |(a, b), r| (a.max(r.rho), b.max(r.theta)));
    BandSummary {
        band,
        max_rho,
        max_theta,
        holds: max_rho <= band.rho && max_theta <= band.theta,
    }
}

/// Largest `n` for which the large-`k` closed forms are claimed.
pub fn lemma36_n_max(k: u32) -> u64 {
    let kk = k as f64;
    (kk / 2.0 * (0.5 + (3.0 * kk / 8.0).ln()) + 1.0).floor() as u64
}

/// Closed-form bounds on `Delta_n` and `ln C_n` for `k >= 1000`.
pub fn lemma36_closed_forms(k: u32, n: u64) -> Result<(f64, f64)> {
    if k < 1000 {
        return Err(hypothesis("large-k closed forms", "k >= 1000", format!("k = {k}")));
    }
    if n < 2 * k as u64 || n > lemma36_n_max(k) {
        return Err(hypothesis(
            "large-k closed forms",
            "2k <= n <= (k/2)(1/2 + log(3k/8)) + 1",
            format!("k = {k}, n = {n}"),
        ));
    }
    let (kk, nn) = (k as f64, n as f64);
    let delta = 0.375 * kk * kk * (0.5 - 2.0 * nn / kk + 1.69 / kk).exp();
    let ln_c = (2.055 * kk.powi(3) - 5.91 * kk * kk + 3.0 * nn * kk) * kk.ln()
        + (nn * kk * kk + 2.0 * kk * (nn * nn - nn) - 9.7278 * kk.powi(3)) * 1.06f64.ln();
    Ok((delta, ln_c))
}

/// `(Delta_s, ln C)` in the large-`k` statement for general `s`.
pub fn theorem3_statement(k: u32, s: u64) -> Result<(f64, f64)> {
    let (kk, ss) = (k as f64, s as f64);
    let s_max = kk * kk / 2.0 * (0.5 + (3.0 * kk / 8.0).ln());
    if k < 1000 || ss < 2.0 * kk * kk || ss > s_max {
        return Err(hypothesis(
            "large-k statement",
            "k >= 1000, 2k^2 <= s <= (k^2/2)(1/2 + log(3k/8))",
            format!("k = {k}, s = {s}"),
        ));
    }
    let delta = 0.375 * kk * kk * (0.5 - 2.0 * ss / (kk * kk) + 1.7 / kk).exp();
    let ln_c = (2.055 * kk.powi(3) - 5.91 * kk * kk + 3.0 * ss) * kk.ln()
        + (ss * kk + 2.0 * ss * ss / kk - 9.7278 * kk.powi(3)) * 1.06f64.ln();
    Ok((delta, ln_c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceReport {
    pub k: u32,
    pub n_min: u64,
    pub n_max: u64,
    /// Largest `Delta_n / closed_form` over the admissible range.
    pub worst_delta_ratio: f64,
    pub worst_delta_n: u64,
    /// Largest `ln C_n - ln closed_form`.
    pub worst_ln_c_gap: f64,
    pub worst_ln_c_n: u64,
    pub holds: bool,
}

/// Runs the iteration with `r_n = floor(k - Delta_n/k + 1)`, `omega = 0.06`,
/// `C_1 = k!`, and compares against [`lemma36_closed_forms`] for every
/// admissible `n`.
pub fn lemma36_dominance(k: u32) -> Result<DominanceReport> {
    let kk = k as f64;
    let n_max = lemma36_n_max(k);
    let trace = lemma35_iteration(k, 0.06, n_max)?;
    let n_min = 2 * k as u64;
    let mut rep = DominanceReport {
        k,
        n_min,
        n_max,
        worst_delta_ratio: f64::NEG_INFINITY,
        worst_delta_n: n_min,
        worst_ln_c_gap: f64::NEG_INFINITY,
        worst_ln_c_n: n_min,
        holds: true,
    };
    let _ = kk;
    for rec in trace.iter().filter(|r| r.n >= n_min) {
        let (db, cb) = lemma36_closed_forms(k, rec.n)?;
        let ratio = rec.delta / db;
        if ratio > rep.worst_delta_ratio {
            rep.worst_delta_ratio = ratio;
            rep.worst_delta_n = rec.n;
        }
        let gap = rec.ln_c - cb;
        if gap > rep.worst_ln_c_gap {
            rep.worst_ln_c_gap = gap;
            rep.worst_ln_c_n = rec.n;
        }
    }
    rep.holds = rep.worst_delta_ratio <= 1.0 && rep.worst_ln_c_gap <= 0.0;
    Ok(rep)
}

/// `(Delta_n, ln C_n)` for `n = 1..=n_max` with the simple choice of `r_n`
/// and a fixed `omega`.
pub fn lemma35_iteration(k: u32, omega: f64, n_max: u64) -> Result<Vec<JBoundRecord>> {
    let kk = k as f64;
    let eta = 1.0 + omega;
    let ln_v = (1.5 + 1.5 / omega).max((18.0 / omega * kk.powi(3) * kk.ln()).ln());
    let ln_kfact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    let mut delta = 0.5 * kk * kk * (1.0 - 1.0 / kk);
    let mut ln_c = ln_kfact;
    let mut out = vec![JBoundRecord { k, n: 1, delta, ln_c }];
    for n in 2..=n_max {
        let r = (kk - delta / kk + 1.0).floor().clamp(4.0, kk) as u32;
        let next = delta_step(k, r, delta).map_err(|e| match e {
            Error::NoImprovement { before, after, .. } => Error::NoImprovement { k, n, before, after },
            other => other,
        })?;
        let a = 3.0 * kk * kk.ln() + (4.0 * kk * (n - 1) as f64 + kk * kk) * eta.ln();
        let b = (kk + 1.0) * (delta - next) * ln_v;
        ln_c += a.max(b);
        delta = next;
        out.push(JBoundRecord { k, n, delta, ln_c });
    }
    Ok(out)
}

/// The same recursion over exact rationals, used as an oracle for the float
/// path. `j` is found by integer comparison rather than a square root.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    use crate::error::{Error, Result};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    pub fn from_f64(x: f64) -> BigRational {
        BigRational::from_float(x).expect("finite")
    }

    /// `(j, [phi_1..phi_j])`.
    pub fn phi_sequence(k: u32, r: u32, delta: &BigRational) -> Result<(u64, Vec<BigRational>)> {
        let (kk, rr) = (k as i64, r as i64);
        if rr < 4 || rr > kk {
            return Err(Error::Domain(format!("r = {r} outside [4, {k}]")));
        }
        let y = q(2) * delta - q((kk - rr) * (kk - rr + 1));
        if y.is_negative() {
            return Err(Error::Domain("y < 0".into()));
        }
        let tkr = q(2 * kk * rr);
        // phi* = 2k/(2kr + y) > 1/(k+1)  <=>  2k(k+1) > 2kr + y
        if q(2 * kk * (kk + 1)) <= &tkr + &y {
            return Err(Error::Domain("phi* <= 1/(k+1)".into()));
        }
        let jmax = 9 * rr / 10;
        let mut j = 2i64;
        while j < jmax && q(j * (j - 1)) <= y {
            j += 1;
        }
        let inv_r = BigRational::new(BigInt::one(), BigInt::from(rr));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut phi = vec![BigRational::zero(); j as usize];
        phi[j as usize - 1] = inv_r.clone();
        for jj in (1..j).rev() {
            let c = (&tkr + q(jj * jj - jj) - &y) / (q(2) * &tkr);
            phi[jj as usize - 1] = &half * &inv_r + c * &phi[jj as usize];
        }
        Ok((j as u64, phi))
    }

    /// `Delta(1 - phi_1) - k + (phi_1/2)(k^2 + k + r^2 - r)`.
    pub fn delta_step(k: u32, r: u32, delta: &BigRational) -> Result<BigRational> {
        let (_, phi) = phi_sequence(k, r, delta)?;
        let (kk, rr) = (k as i64, r as i64);
        let p1 = &phi[0];
        Ok(delta * (BigRational::one() - p1) - q(kk)
            + p1 * q(kk * kk + kk + rr * rr - rr) / q(2))
    }

    pub fn to_f64(x: &BigRational) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn centre_r(k: u32, delta: f64) -> u32 {
        let kk = k as f64;
        ((kk * kk + kk - 2.0 * delta).sqrt() + 0.5) as u32
    }

    #[test]
    fn r_below_four_is_invalid() {
        assert!(matches!(phi_sequence(129, 3, 8000.0), Err(Error::InvalidR { .. })));
        assert!(matches!(phi_sequence(129, 130, 8000.0), Err(Error::InvalidR { .. })));
        assert!(matches!(delta_step(129, 3, 8000.0), Err(Error::InvalidR { .. })));
    }

    #[test]
    fn j_clamped_by_nine_tenths_r() {
        // large Delta with small r: the square-root cap exceeds 9r/10
        let seq = phi_sequence(200, 20, 19_000.0).unwrap();
        assert_eq!(seq.j, 18);
    }

    #[test]
    fn phi_matches_exact_at_start() {
        let k = 129;
        let d = 0.5 * 129.0 * 128.0;
        let r = centre_r(k, d);
        let f = phi_sequence(k, r, d).unwrap();
        let (j, e) = exact::phi_sequence(k, r, &exact::from_f64(d)).unwrap();
        assert_eq!(f.j, j);
        for (a, b) in f.phi.iter().zip(&e) {
            assert!(rel(*a, exact::to_f64(b)) < 1e-12);
        }
        let dn = delta_step(k, r, d).unwrap();
        assert!(dn < d);
        assert!(rel(dn, exact::to_f64(&exact::delta_step(k, r, &exact::from_f64(d)).unwrap())) < 1e-12);
    }

    #[test]
    fn delta_prime_identity() {
        for &(k, r, d) in &[(129u32, 20u32, 8000.0), (200, 60, 15000.0), (300, 250, 9000.0)] {
            let seq = phi_sequence(k, r, d).unwrap();
            let p1 = seq.phi[0];
            let (kk, rr) = (k as f64, r as f64);
            let y = 2.0 * d - (kk - rr) * (kk - rr + 1.0);
            let lhs = d - kk + 0.5 * p1 * (2.0 * kk * rr - y);
            let rhs = d * (1.0 - p1) - kk + 0.5 * p1 * (kk * kk + kk + rr * rr - rr);
            assert!(rel(lhs, rhs) < 1e-12);
        }
    }

    #[test]
    fn omega_bracket_and_residual() {
        let mut prev = f64::INFINITY;
        for k in 129..=1000 {
            let om = solve_omega(k).unwrap();
            let l = (k as f64).ln();
            assert!(om.omega >= 1.0 / (3.0 * l));
            assert!(om.omega <= 1.0 / (2.0 * l + 4.0 / 3.0 * l.ln()));
            assert!(omega_residual(k, om.omega) < 1e-6);
            assert!(om.omega < prev);
            prev = om.omega;
        }
        assert!(solve_omega(128).is_err());
    }

    #[test]
    fn search_trace_is_monotone() {
        let mut trace = Vec::new();
        let res = theorem3_search_with(129, &SearchOptions::default(), Some(&mut trace)).unwrap();
        assert!(res.rho <= 3.22313 && res.theta <= 2.4183);
        for w in trace.windows(2) {
            assert!(w[1].delta < w[0].delta);
            assert!(w[1].ln_c >= w[0].ln_c);
            assert!(w[0].delta <= 129.0 * 128.0 / 2.0);
        }
        assert_eq!(trace.last().unwrap().n, res.n + 1);
    }

    #[test]
    fn wider_window_never_worse() {
        let base = theorem3_search(140).unwrap();
        let wide = theorem3_search_with(140, &SearchOptions { window: RWindow::Wide(6) }, None).unwrap();
        assert!(wide.n <= base.n);
    }

    #[test]
    fn closed_forms() {
        let (d, c) = lemma36_closed_forms(1000, 2000).unwrap();
        let want = 0.375e6 * (-3.5f64 + 0.00169).exp();
        assert!(rel(d, want) < 1e-14);
        assert!(c.is_finite() && c > 0.0);
        assert!(lemma36_closed_forms(999, 2000).is_err());
        assert!(lemma36_closed_forms(1000, 1999).is_err());
        assert!(lemma36_closed_forms(1000, lemma36_n_max(1000) + 1).is_err());

        let (d, _) = theorem3_statement(1000, 2_000_000).unwrap();
        assert!(rel(d, 0.375e6 * (0.5f64 - 4.0 + 0.0017).exp()) < 1e-14);
        let (d2, c2) = theorem3_statement(1000, 2_500_000).unwrap();
        assert!(d2 < d && d2 > 0.0 && c2 > 0.0 && c2.is_finite());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn float_and_exact_agree(k in 129u32..400, frac in 0.002f64..0.5, off in -2i64..=2) {
            let kk = k as f64;
            let d = (frac * kk * kk).min(0.5 * kk * (kk - 1.0));
            let r = (centre_r(k, d) as i64 + off).clamp(4, k as i64) as u32;
            let f = phi_sequence(k, r, d);
            let e = exact::phi_sequence(k, r, &exact::from_f64(d));
            prop_assert_eq!(f.is_ok(), e.is_ok());
            if let (Ok(f), Ok((j, e))) = (f, e) {
                prop_assert_eq!(f.j, j);
                for (a, b) in f.phi.iter().zip(&e) {
                    prop_assert!(rel(*a, exact::to_f64(b)) < 1e-12);
                }
                let star = 2.0 * kk / (2.0 * kk * r as f64 + 2.0 * d - (kk - r as f64) * (kk - r as f64 + 1.0));
                for p in &f.phi {
                    prop_assert!(*p >= star * (1.0 - 1e-12));
                }
                let nd = new_delta(k, r, d).unwrap();
                let ed = exact::to_f64(&exact::delta_step(k, r, &exact::from_f64(d)).unwrap());
                prop_assert!((nd - ed).abs() <= 1e-12 * d);
            }
        }
    }
}
