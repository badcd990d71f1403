//! Small `lambda` (`2.6 <= lambda <= 87`): the constant recursions behind
//! the `(n_0, n, C)` table, the exponent/constant evaluator, the rescaling
//! inequality, and the piecewise coefficient valid for every `lambda >= 1`.
//!
//! The recursion and search follow the reference C program, including its
//! `pi = 3.1416` and its use of the left endpoint `lambda = k - 1`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{hypothesis, Error, Result};
use crate::exec::Execution;
use crate::large::GOAL;

pub const K_MIN: u32 = 4;
pub const K_MAX: u32 = 87;

/// `eta` used for the prime-gap step: `1.308`, `1.2609`, `1.12766`,
/// just above `17/13`, `29/23` and `53/47`.
pub fn eta_for(k: u32) -> f64 {
    if k <= 13 {
        1.308
    } else if k <= 32 {
        1.2609
    } else {
        1.12766
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallOptions {
    pub pi: f64,
    /// Lower end of the `lambda` range for `k = 4`.
    pub lam4: f64,
    /// Evaluate at `lambda = k` instead of `k - 1`.
    pub right_endpoint: bool,
}

impl Default for SmallOptions {
    // The tabulated values were computed with this truncation of pi.
    #[allow(clippy::approx_constant)]
    fn default() -> Self {
        SmallOptions {
            pi: 3.1416,
            lam4: 2.6,
            right_endpoint: false,
        }
    }
}

/// Per-`k` constants shared by the recursion.
#[derive(Debug, Clone, Copy)]
struct KConsts {
    kk: f64,
    logk: f64,
    logk1: f64,
    k3: f64,
    lkf: f64,
    log_a: f64,
}

impl KConsts {
    fn new(k: u32) -> Self {
        let kk = k as f64;
        let logk = kk.ln();
        let lkf: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
        KConsts {
            kk,
            logk,
            logk1: (kk - 1.0).ln(),
            // log(6 k^3 log k)
            k3: 3.0 * logk + (6.0 * logk).ln(),
            lkf,
            // log(4 k^3 k!)
            log_a: 3.0 * logk + lkf + 4f64.ln(),
        }
    }

    /// `log V(w)`; `w` must be `1` or in `(0, 1/2]`.
    fn log_v(&self, w: f64) -> f64 {
        if w == 1.0 {
            self.k3
        } else {
            debug_assert!(w > 0.0 && w <= 0.5);
            (1.5 + 1.5 / w).max(self.k3 + (3.0 / w).ln())
        }
    }
}

fn best_omega_inner(kc: &KConsts, delta: f64) -> f64 {
    let b = kc.kk * kc.kk - delta;
    let c = delta;
    let f = |w: f64| (1.0 + w) * (kc.log_a / b).exp() - (kc.log_v(w) * c / b).exp();
    if f(1.0) <= 0.0 {
        return 1.0;
    }
    if f(0.5) <= 0.0 {
        return if (kc.log_v(0.5) * c / b).exp() < 2.0 * (kc.log_a / b).exp() { 0.5 } else { 1.0 };
    }
    let mut w0 = 0.5;
    let mut w1 = 0.2;
    while f(w1) >= 0.0 {
        w1 *= 0.5;
    }
    while (w0 - w1) / w1 >= 0.0000001 {
        let w2 = 0.5 * (w0 + w1);
        if f(w2) > 0.0 {
            w0 = w2;
        } else {
            w1 = w2;
        }
    }
    w1
}

/// The `omega` minimising the per-step multiplier for a step from `Delta_n`.
pub fn best_omega(k: u32, delta: f64) -> Result<f64> {
    let kk = k as f64;
    if k < K_MIN || !(delta > 0.0 && delta <= 0.5 * kk * (kk - 1.0)) {
        return Err(hypothesis(
            "omega choice",
            "k >= 4, 0 < Delta <= k(k-1)/2",
            format!("k = {k}, Delta = {delta}"),
        ));
    }
    Ok(best_omega_inner(&KConsts::new(k), delta))
}

/// `F(w) = (1+w) e^{log A/B} - e^{log V(w) C/B}` for `w in (0, 1/2]` or `w = 1`.
pub fn omega_balance(k: u32, delta: f64, w: f64) -> f64 {
    let kc = KConsts::new(k);
    let b = kc.kk * kc.kk - delta;
    (1.0 + w) * (kc.log_a / b).exp() - (kc.log_v(w) * delta / b).exp()
}

/// `Delta_n` and `ln C_n` for one `(k, n_0)`; index `n` is used directly,
/// index 0 is unused.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallLambdaState {
    pub k: u32,
    pub n0: u64,
    pub eta: f64,
    pub delta: Vec<f64>,
    pub ln_c: Vec<f64>,
}

impl SmallLambdaState {
    /// Largest `n` with a computed constant.
    pub fn n_max(&self) -> u64 {
        self.ln_c.len() as u64 - 1
    }
}

/// Builds the `(Delta_n, ln C_n)` sequence: the trivial bound up to `n_0`,
/// then `Delta_{n+1} = (1 - 1/k) Delta_n` with the smaller of the two
/// available constant multipliers.
pub fn constants_sequence(k: u32, n0: u64) -> Result<SmallLambdaState> {
    if !(K_MIN..=K_MAX).contains(&k) || n0 < 1 || n0 > 2 * k as u64 {
        return Err(hypothesis(
            "small-lambda recursion",
            "4 <= k <= 87, 1 <= n0 <= 2k",
            format!("k = {k}, n0 = {n0}"),
        ));
    }
    Ok(sequence(&KConsts::new(k), k, n0))
}

fn sequence(kc: &KConsts, k: u32, n0: u64) -> SmallLambdaState {
    let kk = kc.kk;
    let eta = eta_for(k);
    let logeta = eta.ln();
    let l32 = 32f64.ln() - kc.lkf;
    let n1 = ((2.6 * kk * kc.logk + 50.0) as u64).min(9998);
    let n0 = n0 as usize;
    let n1 = n1 as usize;
    let mut delta = vec![0.0; n1.max(n0) + 2];
    let mut ln_c = vec![0.0; n1.max(n0) + 2];
    for i in 1..=n0 {
        delta[i] = 0.5 * kk * (kk - 1.0);
        ln_c[i] = kc.lkf;
    }
    let f = 1.0 - 1.0 / kk;
    for n in n0 + 1..=n1 + 1 {
        delta[n] = f * delta[n - 1];
    }
    for n in n0..=n1 {
        let s = kk * n as f64;
        let b = kk * kk - delta[n];
        let c = delta[n];
        let omega = best_omega_inner(kc, delta[n]);
        let log_m1 = (kc.log_v(omega) * c).max(kc.log_a + b * (1.0 + omega).ln());
        let log_m2 = if k >= 9 {
            let aa = (kk * kk - delta[n]) * logeta + 2.0 * kk * (s + kk).ln() + l32;
            let mut log_u = (2.0 * kk - 2.0 + (2.0 * s + 2.0) * kc.logk1)
                / (2.0 * s + 2.0 - 0.5 * kk * (kk + 1.0) + delta[n + 1]);
            if log_u < kc.logk {
                log_u = kc.logk;
            }
            aa.max(delta[n] * log_u)
        } else {
            1.0e40
        };
        ln_c[n + 1] = ln_c[n] + log_m1.min(log_m2);
    }
    SmallLambdaState {
        k,
        n0: n0 as u64,
        eta,
        delta,
        ln_c,
    }
}

fn lambda_for(k: u32, opts: &SmallOptions) -> f64 {
    if opts.right_endpoint {
        k as f64
    } else if k == 4 {
        opts.lam4
    } else {
        k as f64 - 1.0
    }
}

/// The constant `C` in `S(N,t) <= C N^{1 - 1/(133.66 lambda^2)}` obtained
/// from step `n`, or `Infeasible` when the exponent falls short.
pub fn exponent_constant(n: u64, state: &SmallLambdaState, opts: &SmallOptions) -> Result<f64> {
    let k = state.k;
    if n <= k as u64 || n > state.n_max() {
        return Err(hypothesis(
            "small-lambda exponent",
            "k < n <= computed range",
            format!("k = {k}, n = {n}"),
        ));
    }
    exponent_inner(&KConsts::new(k), n, state, opts)
}

fn exponent_inner(kc: &KConsts, n: u64, state: &SmallLambdaState, opts: &SmallOptions) -> Result<f64> {
    let kk = kc.kk;
    let lam = lambda_for(state.k, opts);
    let mu = 1.0 - lam / (kk + 1.0);
    let s = kk * n as f64;
    let n = n as usize;
    let mut logd = 4f64.ln() + 0.5 / s * (state.ln_c[n] + kc.lkf + kk * (2.0 * kk * opts.pi).ln());
    logd = (logd.exp() + 2.0).ln();
    let goal = GOAL * lam * lam;
    let e = (1.0 - (1.0 + state.delta[n]) * mu) / (2.0 * s);
    if e < 1.0 / goal {
        return Err(Error::Infeasible {
            exponent: e,
            target: 1.0 / goal,
        });
    }
    Ok((logd / e / goal).exp())
}

/// One row of the small-`lambda` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table61Row {
    pub k: u32,
    pub lam_lo: f64,
    pub lam_hi: f64,
    pub n0: u64,
    pub n: u64,
    /// Unrounded optimum.
    pub c: f64,
}

impl Table61Row {
    /// `C` rounded up in the fourth decimal, as tabulated.
    pub fn c_display(&self) -> f64 {
        ((self.c + 0.00005) * 1e4).round() / 1e4
    }
}

/// Optimises `(n_0, n)` for one `k`. Ties keep the first found.
pub fn table61_row(k: u32) -> Result<Table61Row> {
    table61_row_with(k, &SmallOptions::default())
}

pub fn table61_row_with(k: u32, opts: &SmallOptions) -> Result<Table61Row> {
    if !(K_MIN..=K_MAX).contains(&k) {
        return Err(hypothesis("small-lambda table", "4 <= k <= 87", format!("k = {k}")));
    }
    let kc = KConsts::new(k);
    let n2 = (kc.kk * 2.5 * kc.logk) as u64 + 50;
    let mut best: Option<(f64, u64, u64)> = None;
    for n0 in 1..=2 * k as u64 {
        let st = sequence(&kc, k, n0);
        for n in k as u64 + 1..=n2 {
            if let Ok(c) = exponent_inner(&kc, n, &st, opts) {
                if best.is_none_or(|(b, _, _)| c < b) {
                    best = Some((c, n0, n));
                }
            }
        }
    }
    let (c, n0, n) = best.ok_or_else(|| Error::Verification(format!("no feasible n for k = {k}")))?;
    Ok(Table61Row {
        k,
        lam_lo: if k == 4 { opts.lam4 } else { k as f64 - 1.0 },
        lam_hi: k as f64,
        n0,
        n,
        c,
    })
}

/// Rows for `k_min..=k_max`.
pub fn table61(k_min: u32, k_max: u32, opts: &SmallOptions, exec: Execution) -> Result<Vec<Table61Row>> {
    exec.map_range(k_min as u64, k_max as u64, |k| table61_row_with(k as u32, opts))
        .into_iter()
        .collect()
}

/// Default-option rows, computed once per `k`.
pub fn cached_row(k: u32) -> Result<Table61Row> {
    static ROWS: [OnceLock<Table61Row>; (K_MAX + 1) as usize] = [const { OnceLock::new() }; (K_MAX + 1) as usize];
    if !(K_MIN..=K_MAX).contains(&k) {
        return table61_row(k);
    }
    if let Some(r) = ROWS[k as usize].get() {
        return Ok(*r);
    }
    let row = table61_row(k)?;
    Ok(*ROWS[k as usize].get_or_init(|| row))
}

/// `C^{d/c}`: a bound `C N^{1-c}` weakened to exponent `1 - d`.
pub fn rescale_bound(c_big: f64, c: f64, d: f64) -> Result<f64> {
    if !(0.0 < d && d <= c && c < 1.0 && c_big >= 1.0) {
        return Err(hypothesis(
            "rescaling",
            "0 < d <= c < 1, C >= 1",
            format!("C = {c_big}, c = {c}, d = {d}"),
        ));
    }
    Ok(c_big.powf(d / c))
}

/// The worst rescaled constant from the two Weyl-type bounds for
/// `1 <= lambda <= 2.6`, at denominator 133. Both pieces are decreasing in
/// `lambda`, so the maxima sit at `lambda = 1` and `lambda = 1.9`.
pub fn lemma62_constant() -> f64 {
    let a = rescale_bound(5.0, 1.0 / 20.0, 1.0 / 133.0).expect("in range");
    let b = rescale_bound(30.0, 1.0 / 83.0, 1.0 / (133.0 * 1.9 * 1.9)).expect("in range");
    a.max(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Weyl,
    Table,
    Intermediate,
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem2Coefficient {
    pub lambda: f64,
    pub regime: Regime,
    /// The regime's own coefficient.
    pub coefficient: f64,
    /// The regime's own denominator.
    pub native_denom: f64,
    /// Denominator the bound is reported at.
    pub denom: f64,
    /// Coefficient valid for every `N`: for `lambda > 87` the regime bound
    /// needs `N >= e^{300 lambda^2}`, below which the trivial bound gives
    /// `e^{300/133.66}`.
    pub envelope: f64,
}

/// Coefficient for the small-`N` trivial bound, `e^{300/133.66}`.
pub fn trivial_coefficient() -> f64 {
    (300.0 / GOAL).exp()
}

pub const WEYL_C: f64 = 1.81;
pub const INTERMEDIATE_C: f64 = 8.4;
pub const LARGE_C: f64 = 7.5;
pub const THEOREM2_C: f64 = 9.463;

/// Piecewise coefficient of `S(N,t) <= C N^{1 - 1/(u lambda^2)}`.
pub fn theorem2_coefficient(lam: f64) -> Result<Theorem2Coefficient> {
    if !(lam >= 1.0) || !lam.is_finite() {
        return Err(hypothesis("coefficient assembly", "lambda >= 1", format!("lambda = {lam}")));
    }
    let (regime, coefficient, native) = if lam <= 2.6 {
        (Regime::Weyl, WEYL_C, 133.0)
    } else if lam <= 87.0 {
        let k = (lam.ceil() as u32).max(K_MIN);
        (Regime::Table, cached_row(k)?.c_display(), GOAL)
    } else if lam <= 220.0 {
        (Regime::Intermediate, INTERMEDIATE_C, GOAL)
    } else {
        (Regime::Large, LARGE_C, 133.58)
    };
    let envelope = if lam > 87.0 { coefficient.max(trivial_coefficient()) } else { coefficient };
    Ok(Theorem2Coefficient {
        lambda: lam,
        regime,
        coefficient,
        native_denom: native,
        denom: GOAL,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_table_above_fractions() {
        for (k, frac) in [(13u32, 17.0 / 13.0), (32, 29.0 / 23.0), (87, 53.0 / 47.0)] {
            let e = eta_for(k);
            assert!(e >= frac && e - frac < 1e-3);
        }
        assert_eq!(eta_for(14), 1.2609);
        assert_eq!(eta_for(33), 1.12766);
    }

    #[test]
    fn omega_regimes() {
        // early on Delta is large, V^Delta dominates F and w = 1
        assert_eq!(best_omega(20, 190.0).unwrap(), 1.0);
        assert_eq!(best_omega(30, 300.0).unwrap(), 1.0);
        // small Delta: F > 0 on [1/2, 1] and the root lies inside (0, 1/2)
        let w = best_omega(20, 10.0).unwrap();
        assert!(w > 0.0 && w < 0.5);
        assert!(best_omega(3, 1.0).is_err());
        assert!(best_omega(20, 191.0).is_err());
    }

    #[test]
    fn bisection_root_against_grid() {
        let (k, d) = (20u32, 10.0);
        let w = best_omega(k, d).unwrap();
        assert!(w < 0.5);
        // F rises through zero exactly once on (0, 1/2]; compare to a dense scan
        let mut prev = omega_balance(k, d, 1e-6);
        let mut root = None;
        for i in 1..=100_000 {
            let x = 1e-6 + (0.5 - 1e-6) * i as f64 / 100_000.0;
            let v = omega_balance(k, d, x);
            if prev < 0.0 && v >= 0.0 {
                assert!(root.is_none(), "second sign change");
                root = Some(x);
            }
            prev = v;
        }
        let root = root.unwrap();
        assert!((root - w).abs() <= 0.5 / 100_000.0 + 1e-7 * w);
    }

    #[test]
    fn sequence_shape() {
        let st = constants_sequence(6, 1).unwrap();
        assert!(st.delta.windows(2).skip(1).take(st.delta.len() - 3).all(|w| w[1] < w[0]));
        assert!(st.ln_c[1..].windows(2).all(|w| w[1] >= w[0]));
        assert!(constants_sequence(3, 1).is_err());
        assert!(constants_sequence(10, 21).is_err());
    }

    #[test]
    fn first_table_row() {
        let row = table61_row(4).unwrap();
        assert_eq!((row.n0, row.n), (1, 13));
        assert!((row.c_display() - 2.5543).abs() < 1e-9, "{}", row.c);
        let st = constants_sequence(4, 1).unwrap();
        let opts = SmallOptions::default();
        let c = exponent_constant(13, &st, &opts).unwrap();
        assert_eq!(c, row.c);
        for n in [12, 14] {
            assert!(exponent_constant(n, &st, &opts).unwrap() >= c);
        }
        assert!(matches!(exponent_constant(5, &st, &opts), Err(Error::Infeasible { .. })));
        assert!(exponent_constant(4, &st, &opts).is_err());
    }

    #[test]
    fn rescale_examples() {
        assert!((rescale_bound(7.0, 0.3, 0.3).unwrap() - 7.0).abs() < 1e-15);
        assert!((rescale_bound(5.0, 1.0 / 20.0, 1.0 / 133.0).unwrap() - 1.2738).abs() < 1e-4);
        let v = rescale_bound(30.0, 1.0 / 83.0, 1.0 / (GOAL * 1.9 * 1.9)).unwrap();
        assert!((v - 1.795).abs() < 1e-3 && v <= 1.81);
        assert!(rescale_bound(0.5, 0.3, 0.2).is_err());
        assert!(rescale_bound(5.0, 0.2, 0.3).is_err());
        assert!(lemma62_constant() <= WEYL_C);
    }

    #[test]
    fn coefficient_regimes() {
        assert_eq!(theorem2_coefficient(2.0).unwrap().coefficient, 1.81);
        let c = theorem2_coefficient(300.0).unwrap();
        assert_eq!((c.coefficient, c.regime), (7.5, Regime::Large));
        assert!(c.envelope <= 9.44 && c.envelope > 9.4);
        assert_eq!(theorem2_coefficient(100.0).unwrap().coefficient, 8.4);
        assert!(theorem2_coefficient(0.5).is_err());
        assert!(trivial_coefficient() <= 9.44);
    }
}
