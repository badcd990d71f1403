//! Prime and smooth-number primitives, plus numeric checks of the classical
//! prime-counting inequalities the later bounds rely on.
//!
//! Everything here works off one [`PrimeTable`], built once by a plain sieve
//! of Eratosthenes and then shared read-only.

use serde::Serialize;

use crate::error::{hypothesis, Error, Result};

/// Default sieve limit.
pub const DEFAULT_LIMIT: u64 = 1_000_000;

/// Default cap on the number of members an exhaustive smooth-set
/// enumeration may produce.
pub const SMOOTH_GUARD: usize = 10_000_000;

/// Primality flags and cumulative counts up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    is_prime: Vec<bool>,
    pi: Vec<u32>,
    primes: Vec<u64>,
    // recip_sum[i] = sum of 1/p over the first i primes
    recip_sum: Vec<f64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut is_prime = vec![true; n + 1];
        is_prime[0] = false;
        if n >= 1 {
            is_prime[1] = false;
        }
        let mut i = 2usize;
        while i * i <= n {
            if is_prime[i] {
                let mut j = i * i;
                while j <= n {
                    is_prime[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let mut pi = Vec::with_capacity(n + 1);
        let mut primes = Vec::new();
        let mut count = 0u32;
        for (m, &p) in is_prime.iter().enumerate() {
            if p {
                count += 1;
                primes.push(m as u64);
            }
            pi.push(count);
        }
        let mut recip_sum = Vec::with_capacity(primes.len() + 1);
        recip_sum.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for &p in &primes {
            // Kahan summation
            let y = 1.0 / p as f64 - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            recip_sum.push(sum);
        }
        PrimeTable {
            limit,
            is_prime,
            pi,
            primes,
            recip_sum,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check(n as f64)?;
        Ok(self.is_prime[n as usize])
    }

    fn check(&self, x: f64) -> Result<()> {
        if x > self.limit as f64 {
            return Err(Error::Capacity {
                requested: x.ceil() as u64,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Number of primes `<= x`.
    pub fn prime_count(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("prime_count of {x}")));
        }
        self.check(x)?;
        Ok(self.pi[x.floor() as usize] as u64)
    }

    /// Primes in `(lo, hi]`.
    pub fn primes_in(&self, lo: f64, hi: f64) -> Result<&[u64]> {
        self.check(hi)?;
        let a = if lo < 0.0 { 0 } else { self.pi[lo.floor() as usize] as usize };
        let b = self.pi[hi.floor() as usize] as usize;
        Ok(&self.primes[a..b.max(a)])
    }

    /// `sum_{p <= x} 1/p`.
    pub fn prime_reciprocal_sum(&self, x: f64) -> Result<f64> {
        let n = self.prime_count(x)? as usize;
        Ok(self.recip_sum[n])
    }

    /// Mertens' constant estimated from the table: the value of
    /// `sum_{p<=X} 1/p - log log X` at the sieve limit.
    pub fn mertens_constant(&self) -> f64 {
        let x = self.limit as f64;
        self.recip_sum[self.primes.len()] - x.ln().ln()
    }

    /// `sum_{p<=x} 1/p - log log x - B` with `B` from [`Self::mertens_constant`].
    pub fn mertens_deviation(&self, x: f64) -> Result<f64> {
        if x < 286.0 {
            return Err(hypothesis(
                "Mertens bound",
                "x >= 286",
                format!("x = {x}"),
            ));
        }
        Ok(self.prime_reciprocal_sum(x)? - x.ln().ln() - self.mertens_constant())
    }
}

/// Lower and upper Rosser–Schoenfeld bounds for `pi(x)`.
pub fn rosser_schoenfeld_bounds(x: f64) -> (f64, f64) {
    let l = x.ln();
    (x / (l - 0.5), x / l * (1.0 + 1.5 / l))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RosserSchoenfeldReport {
    /// Smallest `pi(x) - lower(x)` seen, and where.
    pub min_lower_slack: f64,
    pub min_lower_at: f64,
    /// Smallest `upper(x) - pi(x)` seen, and where.
    pub min_upper_slack: f64,
    pub min_upper_at: f64,
    pub points_checked: u64,
}

/// Checks `x/(log x - 1/2) < pi(x) < (x/log x)(1 + 3/(2 log x))` on the grid
/// `x_min, x_min + step, ...` and at every prime in range. At a prime `p` the
/// lower bound is also checked against the left limit `pi(p) - 1`, where it
/// must hold with equality allowed.
pub fn verify_rosser_schoenfeld(
    table: &PrimeTable,
    x_min: f64,
    x_max: f64,
    step: f64,
) -> Result<RosserSchoenfeldReport> {
    if !(x_min >= 68.0 && x_min < x_max && step > 0.0) {
        return Err(hypothesis(
            "Rosser-Schoenfeld",
            "68 <= x_min < x_max, step > 0",
            format!("x_min = {x_min}, x_max = {x_max}, step = {step}"),
        ));
    }
    table.check(x_max)?;
    let mut rep = RosserSchoenfeldReport {
        min_lower_slack: f64::INFINITY,
        min_lower_at: x_min,
        min_upper_slack: f64::INFINITY,
        min_upper_at: x_min,
        points_checked: 0,
    };
    let mut visit = |x: f64, pi: f64, left_limit: bool| -> Result<()> {
        let (lo, hi) = rosser_schoenfeld_bounds(x);
        rep.points_checked += 1;
        let lower_slack = pi - lo;
        let lower_ok = if left_limit { lower_slack >= 0.0 } else { lower_slack > 0.0 };
        if !lower_ok {
            return Err(Error::Verification(format!(
                "pi({x}{}) = {pi} is not above x/(log x - 1/2) = {lo}",
                if left_limit { "-" } else { "" }
            )));
        }
        if lower_slack < rep.min_lower_slack {
            rep.min_lower_slack = lower_slack;
            rep.min_lower_at = x;
        }
        if !left_limit {
            let upper_slack = hi - pi;
            if !(upper_slack > 0.0) {
                return Err(Error::Verification(format!(
                    "pi({x}) = {pi} is not below the upper bound {hi}"
                )));
            }
            if upper_slack < rep.min_upper_slack {
                rep.min_upper_slack = upper_slack;
                rep.min_upper_at = x;
            }
        }
        Ok(())
    };
    let mut i = 0u64;
    loop {
        let x = x_min + step * i as f64;
        if x > x_max {
            break;
        }
        visit(x, table.prime_count(x)? as f64, false)?;
        i += 1;
    }
    for &p in table.primes_in(x_min, x_max)? {
        let pf = p as f64;
        let pi = table.pi[p as usize] as f64;
        visit(pf, pi, false)?;
        visit(pf, pi - 1.0, true)?;
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MertensReport {
    pub mertens_constant: f64,
    /// Largest `|deviation| * 2 log^2 x` seen; must stay `<= 1`.
    pub worst_ratio: f64,
    pub worst_at: f64,
    pub primes_checked: u64,
}

/// Checks `|sum_{p<=x} 1/p - log log x - B| <= 1/(2 log^2 x)` at every prime
/// `x` in `[x_min, x_max]`, both at the prime and just before it.
pub fn verify_mertens(table: &PrimeTable, x_min: f64, x_max: f64) -> Result<MertensReport> {
    if x_min < 286.0 {
        return Err(hypothesis("Mertens bound", "x >= 286", format!("x_min = {x_min}")));
    }
    let b = table.mertens_constant();
    let mut rep = MertensReport {
        mertens_constant: b,
        worst_ratio: 0.0,
        worst_at: x_min,
        primes_checked: 0,
    };
    for &p in table.primes_in(x_min - 1.0, x_max)? {
        let x = p as f64;
        let idx = table.pi[p as usize] as usize;
        let ll = x.ln().ln();
        let bound = 1.0 / (2.0 * x.ln() * x.ln());
        for sum in [table.recip_sum[idx], table.recip_sum[idx - 1]] {
            let ratio = (sum - ll - b).abs() / bound;
            if ratio > rep.worst_ratio {
                rep.worst_ratio = ratio;
                rep.worst_at = x;
            }
            if ratio > 1.0 {
                return Err(Error::Verification(format!(
                    "Mertens deviation at x = {x} exceeds 1/(2 log^2 x)"
                )));
            }
        }
        rep.primes_checked += 1;
    }
    Ok(rep)
}

/// Count of primes in `(x, 2x]` for `x = 2 N log N`, paired with `N`.
pub fn primes_in_doubling_interval(table: &PrimeTable, n: u64) -> Result<(u64, u64)> {
    let x = 2.0 * n as f64 * (n as f64).ln();
    Ok((table.primes_in(x, 2.0 * x)?.len() as u64, n))
}

/// The set `C(P, R)`: integers `<= P` all of whose prime factors lie in
/// `(sqrt R, R]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothSetSpec {
    pub p: f64,
    pub r: f64,
    pub include_one: bool,
}

impl SmoothSetSpec {
    pub fn new(p: f64, r: f64) -> Self {
        SmoothSetSpec {
            p,
            r,
            include_one: true,
        }
    }

    pub fn without_one(mut self) -> Self {
        self.include_one = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.r >= 2.0) {
            return Err(hypothesis(
                "smooth set",
                "P >= 1, R >= 2",
                format!("P = {}, R = {}", self.p, self.r),
            ));
        }
        Ok(())
    }

    fn prime_ok(&self, p: u64) -> bool {
        let pf = p as f64;
        pf * pf > self.r && pf <= self.r
    }
}

/// Enumerates `C(P, R)` by depth-first search over products of the admissible
/// primes. Output is sorted.
pub fn enumerate_smooth(table: &PrimeTable, spec: &SmoothSetSpec) -> Result<Vec<u64>> {
    enumerate_smooth_guarded(table, spec, SMOOTH_GUARD)
}

pub fn enumerate_smooth_guarded(
    table: &PrimeTable,
    spec: &SmoothSetSpec,
    guard: usize,
) -> Result<Vec<u64>> {
    spec.validate()?;
    let cap = spec.p.floor() as u64;
    let hi = spec.r.min(spec.p);
    let ps: Vec<u64> = table
        .primes_in(spec.r.sqrt().floor(), hi)?
        .iter()
        .copied()
        .filter(|&p| spec.prime_ok(p))
        .collect();
    let mut out = Vec::new();
    if spec.include_one {
        out.push(1);
    }
    // stack of (value, index of smallest usable prime)
    let mut stack: Vec<(u64, usize)> = vec![(1, 0)];
    while let Some((v, start)) = stack.pop() {
        for (i, &p) in ps.iter().enumerate().skip(start) {
            let Some(next) = v.checked_mul(p) else { break };
            if next > cap {
                break;
            }
            out.push(next);
            if out.len() > guard {
                return Err(Error::GuardExceeded {
                    requested: out.len() as u128,
                    guard: guard as u128,
                });
            }
            stack.push((next, i));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Membership test by trial division, independent of the enumeration.
pub fn is_smooth_member(n: u64, spec: &SmoothSetSpec) -> bool {
    if n == 0 || n as f64 > spec.p {
        return false;
    }
    if n == 1 {
        return spec.include_one;
    }
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            if !spec.prime_ok(d) {
                return false;
            }
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    m == 1 || spec.prime_ok(m)
}

/// `C(P, R)` by filtering `1..=floor(P)`.
pub fn filter_smooth(spec: &SmoothSetSpec) -> Result<Vec<u64>> {
    spec.validate()?;
    Ok((1..=spec.p.floor() as u64)
        .filter(|&n| is_smooth_member(n, spec))
        .collect())
}

/// Reduced-scale comparison of `|C(R^u, R)|` with the two counting lemmas.
/// Their hypotheses need `R >= 6^10` or `R >= 90000`, far past anything
/// enumerable here, so this report is informational only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothCountComparison {
    pub r: f64,
    pub u: f64,
    pub count: u64,
    /// `delta^w / (w+1)! * R^u / log R` with `w = floor(u/(1-delta))`.
    pub lower_estimate: f64,
    /// `R^u (2/u)^u`.
    pub upper_estimate: f64,
    pub hypotheses_hold: bool,
    pub non_probative: bool,
}

pub fn smooth_count_comparison(
    table: &PrimeTable,
    r: f64,
    u: f64,
    delta: f64,
) -> Result<SmoothCountComparison> {
    let spec = SmoothSetSpec::new(r.powf(u), r);
    let count = enumerate_smooth(table, &spec)?.len() as u64;
    let w = (u / (1.0 - delta)).floor();
    let fact: f64 = (1..=(w as u64 + 1)).map(|i| i as f64).product();
    let lower_estimate = delta.powf(w) / fact * r.powf(u) / r.ln();
    let upper_estimate = r.powf(u) * (2.0 / u).powf(u);
    let lemma22 = (0.0..=0.1).contains(&delta) && u >= 2.0 - 3.0 * delta && r >= 6f64.powf(1.0 / delta);
    let lemma23 = r >= (2.0 * u).powi(3) && (2.0 * u).powi(3) >= 90000.0;
    Ok(SmoothCountComparison {
        r,
        u,
        count,
        lower_estimate,
        upper_estimate,
        hypotheses_hold: lemma22 && lemma23,
        non_probative: true,
    })
}

/// Euler's totient.
pub fn euler_phi(q: u64) -> u64 {
    assert!(q >= 1, "euler_phi(0)");
    let mut m = q;
    let mut phi = q;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            phi -= phi / d;
        }
        d += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| PrimeTable::new(DEFAULT_LIMIT))
    }

    #[test]
    fn prime_count_small_values() {
        let t = table();
        assert_eq!(t.prime_count(2.0).unwrap(), 1);
        assert_eq!(t.prime_count(1.0).unwrap(), 0);
        assert_eq!(t.prime_count(100.0).unwrap(), 25);
        assert_eq!(t.prime_count(100.7).unwrap(), 25);
        assert_eq!(t.prime_count(68.0).unwrap(), 19);
    }

    #[test]
    fn prime_count_beyond_limit_is_capacity_error() {
        let t = PrimeTable::new(1000);
        assert!(matches!(t.prime_count(1000.5), Err(Error::Capacity { .. })));
        assert!(t.prime_count(1000.0).is_ok());
    }

    #[test]
    fn prime_count_matches_direct_count() {
        let t = table();
        for x in [10.0, 97.0, 1000.0, 7919.0, 65536.0] {
            let direct = t.primes().iter().filter(|&&p| p as f64 <= x).count() as u64;
            assert_eq!(t.prime_count(x).unwrap(), direct);
        }
    }

    #[test]
    fn rosser_schoenfeld_at_100_and_68() {
        let (lo, _) = rosser_schoenfeld_bounds(100.0);
        assert!((lo - 24.36).abs() < 0.01);
        assert!(lo < 25.0);
        let (lo, hi) = rosser_schoenfeld_bounds(68.0);
        assert!(lo < 19.0 && 19.0 < hi);
        let rep = verify_rosser_schoenfeld(table(), 68.0, 10_000.0, 1.0).unwrap();
        assert!(rep.min_lower_slack >= 0.0 && rep.min_upper_slack > 0.0);
    }

    #[test]
    fn rosser_schoenfeld_rejects_small_start() {
        assert!(verify_rosser_schoenfeld(table(), 60.0, 100.0, 1.0).is_err());
    }

    #[test]
    fn mertens_hypothesis_and_bound() {
        let t = table();
        assert!(t.mertens_deviation(285.0).is_err());
        let d = t.mertens_deviation(286.0).unwrap();
        assert!(d.abs() <= 1.0 / (2.0 * 286f64.ln().powi(2)));
        assert!(t.mertens_deviation(1e6).unwrap().abs() <= 0.00262);
        // only a sanity window; the value itself is never relied on
        assert!((t.mertens_constant() - 0.2615).abs() < 1e-3);
    }

    #[test]
    fn smooth_examples() {
        let t = table();
        let got = enumerate_smooth(t, &SmoothSetSpec::new(20.0, 16.0)).unwrap();
        assert_eq!(got, vec![1, 5, 7, 11, 13]);
        let got = enumerate_smooth(t, &SmoothSetSpec::new(1.0, 4.0)).unwrap();
        assert_eq!(got, vec![1]);
        let spec = SmoothSetSpec::new(30.0, 16.0);
        assert_eq!(enumerate_smooth(t, &spec).unwrap(), filter_smooth(&spec).unwrap());
        let spec = spec.without_one();
        assert!(!enumerate_smooth(t, &spec).unwrap().contains(&1));
    }

    #[test]
    fn smooth_squares_allowed() {
        // 25 = 5^2 has all prime factors in (4, 16]
        let t = table();
        let got = enumerate_smooth(t, &SmoothSetSpec::new(30.0, 16.0)).unwrap();
        assert!(got.contains(&25));
    }

    #[test]
    fn smooth_guard_trips() {
        let spec = SmoothSetSpec::new(10_000.0, 100.0);
        assert!(matches!(
            enumerate_smooth_guarded(table(), &spec, 10),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(euler_phi(100), 40);
        let brute = |q: u64| (1..=q).filter(|&a| gcd(a, q) == 1).count() as u64;
        for q in 1..200 {
            assert_eq!(euler_phi(q), brute(q));
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
}
