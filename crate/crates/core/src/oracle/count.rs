//! Counting solutions of `sum_i (x_i^j - y_i^j) = h_j` for `j` in `h..=k`.
//!
//! Route one tabulates the power-sum vector of every ordered `s`-tuple and
//! convolves the frequency table with itself. Route two recomputes each
//! tuple's sums from scratch and walks every pair of `s`-tuples, comparing
//! difference vectors without any hashing.

use std::collections::HashMap;

use serde::Serialize;

use super::{Guards, OracleConfig};
use crate::error::{Error, Result};

/// A system `sum_i (x_i^j - y_i^j) = h_j`, `lo <= j <= k`, over a finite set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemSpec {
    pub s: u32,
    pub k: u32,
    /// Smallest exponent present; `1` is the complete system.
    pub h: u32,
    /// Sorted, duplicate-free, all entries positive.
    pub set: Vec<u64>,
}

impl SystemSpec {
    /// The complete system over `[1, p]`.
    pub fn complete(s: u32, k: u32, p: u64) -> Result<Self> {
        Self::interval(s, k, 1, p)
    }

    pub fn interval(s: u32, k: u32, h: u32, p: u64) -> Result<Self> {
        Self::over(s, k, h, (1..=p).collect())
    }

    pub fn over(s: u32, k: u32, h: u32, mut set: Vec<u64>) -> Result<Self> {
        if s == 0 || k == 0 {
            return Err(Error::Domain(format!("need s, k >= 1 (s = {s}, k = {k})")));
        }
        if h == 0 || h > k {
            return Err(Error::Domain(format!("need 1 <= h <= k (h = {h}, k = {k})")));
        }
        if set.contains(&0) {
            return Err(Error::Domain("variable set must hold positive integers".into()));
        }
        set.sort_unstable();
        set.dedup();
        Ok(SystemSpec { s, k, h, set })
    }

    /// Number of equations.
    pub fn width(&self) -> usize {
        (self.k - self.h + 1) as usize
    }

    /// `|B|^s`, saturating.
    pub fn tuple_count(&self) -> u128 {
        (self.set.len() as u128).saturating_pow(self.s)
    }

    fn check_tuples(&self, guards: &Guards) -> Result<()> {
        let n = self.tuple_count();
        if n > guards.tuples {
            return Err(Error::GuardExceeded {
                requested: n,
                guard: guards.tuples,
            });
        }
        Ok(())
    }

    fn check_pairs(&self, guards: &Guards) -> Result<()> {
        let n = self.tuple_count().saturating_mul(self.tuple_count());
        if n > guards.pairs {
            return Err(Error::GuardExceeded {
                requested: n,
                guard: guards.pairs,
            });
        }
        Ok(())
    }

    /// `x^j` for `j = h..=k`, for every element of the set.
    fn powers(&self) -> Result<Vec<Vec<i128>>> {
        self.set
            .iter()
            .map(|&x| {
                (self.h..=self.k)
                    .map(|j| {
                        i128::from(x)
                            .checked_pow(j)
                            .ok_or(Error::Overflow("power of a variable"))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Power-sum vectors of every ordered `s`-tuple whose first entry is `first`,
/// appended to `out` (flattened, `width` values per tuple).
fn sums_with_first(pw: &[Vec<i128>], s: u32, first: usize, out: &mut Vec<i128>) -> Result<()> {
    let width = pw[0].len();
    let n = pw.len();
    let rest = (s - 1) as usize;
    let mut idx = vec![0usize; rest];
    loop {
        let mut acc = pw[first].clone();
        for &i in &idx {
            for (a, b) in acc.iter_mut().zip(&pw[i]) {
                *a = a.checked_add(*b).ok_or(Error::Overflow("power sum"))?;
            }
        }
        out.extend_from_slice(&acc[..width]);
        // odometer
        let mut pos = 0;
        loop {
            if pos == rest {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Power-sum vectors of all ordered `s`-tuples, in lexicographic order,
/// computed from scratch per tuple (no shared tables with the frequency route).
fn all_sums(spec: &SystemSpec, cfg: &OracleConfig) -> Result<(usize, Vec<i128>)> {
    let width = spec.width();
    let n = spec.set.len() as u128;
    let per_first = n.pow(spec.s - 1);
    let parts = cfg.exec.map_range(0, n as u64 - 1, |first| -> Result<Vec<i128>> {
        let mut out = Vec::with_capacity(per_first as usize * width);
        let mut xs = vec![0u64; spec.s as usize];
        for t in 0..per_first {
            xs[0] = spec.set[first as usize];
            let mut rem = t;
            for x in xs.iter_mut().skip(1).rev() {
                *x = spec.set[(rem % n) as usize];
                rem /= n;
            }
            for j in spec.h..=spec.k {
                let mut sum: i128 = 0;
                for &x in &xs {
                    let mut p: i128 = 1;
                    for _ in 0..j {
                        p = p.checked_mul(x as i128).ok_or(Error::Overflow("power of a variable"))?;
                    }
                    sum = sum.checked_add(p).ok_or(Error::Overflow("power sum"))?;
                }
                out.push(sum);
            }
        }
        Ok(out)
    });
    let mut flat = Vec::with_capacity(spec.tuple_count() as usize * width);
    for p in parts {
        flat.extend(p?);
    }
    Ok((width, flat))
}

type Freq = HashMap<Vec<i128>, u64>;

/// Multiplicity of each power-sum vector over ordered `s`-tuples.
fn frequency_table(spec: &SystemSpec, cfg: &OracleConfig) -> Result<Freq> {
    spec.check_tuples(&cfg.guards)?;
    if spec.set.is_empty() {
        return Ok(Freq::new());
    }
    let pw = spec.powers()?;
    // one table per value of the first variable, merged afterwards
    let parts = cfg.exec.map_range(0, pw.len() as u64 - 1, |first| -> Result<Freq> {
        let mut out = Vec::new();
        sums_with_first(&pw, spec.s, first as usize, &mut out)?;
        let mut t = Freq::new();
        for v in out.chunks_exact(spec.width()) {
            *t.entry(v.to_vec()).or_default() += 1;
        }
        Ok(t)
    });
    let mut freq = Freq::new();
    for p in parts {
        for (v, c) in p? {
            *freq.entry(v).or_default() += c;
        }
    }
    Ok(freq)
}

fn sub_vec(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_sub(*y).ok_or(Error::Overflow("difference vector")))
        .collect()
}

fn count_frequency(freq: &Freq, target: &[i128]) -> Result<u64> {
    let mut total = 0u64;
    for (v, &c) in freq {
        let w = sub_vec(v, target)?;
        if let Some(&c2) = freq.get(&w) {
            total = total
                .checked_add(c.checked_mul(c2).ok_or(Error::Overflow("count"))?)
                .ok_or(Error::Overflow("count"))?;
        }
    }
    Ok(total)
}

fn count_direct(spec: &SystemSpec, target: &[i128], cfg: &OracleConfig) -> Result<u64> {
    spec.check_tuples(&cfg.guards)?;
    spec.check_pairs(&cfg.guards)?;
    if spec.set.is_empty() {
        return Ok(0);
    }
    let (width, sums) = all_sums(spec, cfg)?;
    let n = sums.len() / width;
    let counts = cfg.exec.map_range(0, n as u64 - 1, |i| {
        let x = &sums[i as usize * width..(i as usize + 1) * width];
        let mut c = 0u64;
        for y in sums.chunks_exact(width) {
            if x.iter().zip(y).zip(target).all(|((a, b), t)| a - b == *t) {
                c += 1;
            }
        }
        c
    });
    Ok(counts.iter().sum())
}

fn resolve_target(spec: &SystemSpec, target: Option<&[i128]>) -> Result<Vec<i128>> {
    match target {
        None => Ok(vec![0; spec.width()]),
        Some(t) if t.len() == spec.width() => Ok(t.to_vec()),
        Some(t) => Err(Error::Domain(format!(
            "target has {} entries, system has {} equations",
            t.len(),
            spec.width()
        ))),
    }
}

/// `J_{s,k,h}(B; target)`, counted by both routes. A disagreement is an
/// [`Error::Verification`].
pub fn brute_j(spec: &SystemSpec, target: Option<&[i128]>, cfg: &OracleConfig) -> Result<u64> {
    let target = resolve_target(spec, target)?;
    let freq = frequency_table(spec, cfg)?;
    let by_freq = count_frequency(&freq, &target)?;
    let by_direct = count_direct(spec, &target, cfg)?;
    if by_freq != by_direct {
        return Err(Error::Verification(format!(
            "J(s={}, k={}, h={}, |B|={}) target {:?}: frequency {} != direct {}",
            spec.s,
            spec.k,
            spec.h,
            spec.set.len(),
            target,
            by_freq,
            by_direct
        )));
    }
    Ok(by_freq)
}

/// `J(B; h)` for every reachable target `h`, from the frequency table.
pub fn target_distribution(spec: &SystemSpec, cfg: &OracleConfig) -> Result<HashMap<Vec<i128>, u64>> {
    let freq = frequency_table(spec, cfg)?;
    let mut out: HashMap<Vec<i128>, u64> = HashMap::new();
    for (v, &c) in &freq {
        for (w, &c2) in &freq {
            *out.entry(sub_vec(v, w)?).or_default() += c * c2;
        }
    }
    Ok(out)
}

/// The same distribution by walking every `2s`-tuple.
fn target_distribution_direct(spec: &SystemSpec, cfg: &OracleConfig) -> Result<HashMap<Vec<i128>, u64>> {
    spec.check_tuples(&cfg.guards)?;
    spec.check_pairs(&cfg.guards)?;
    let mut out: HashMap<Vec<i128>, u64> = HashMap::new();
    if spec.set.is_empty() {
        return Ok(out);
    }
    let (width, sums) = all_sums(spec, cfg)?;
    for x in sums.chunks_exact(width) {
        for y in sums.chunks_exact(width) {
            *out.entry(sub_vec(x, y)?).or_default() += 1;
        }
    }
    Ok(out)
}

/// Outcome of the exhaustive zero-target-dominates check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZrdReport {
    pub j_zero: u64,
    pub targets: usize,
    pub max_nonzero: u64,
    /// Both routes produced the same full distribution.
    pub routes_agree: bool,
    pub holds: bool,
}

/// Checks `J(B; h) <= J(B; 0)` over every reachable `h`, with the whole
/// target distribution computed by both routes.
pub fn zrd_check(spec: &SystemSpec, cfg: &OracleConfig) -> Result<ZrdReport> {
    let by_freq = target_distribution(spec, cfg)?;
    let by_direct = target_distribution_direct(spec, cfg)?;
    let zero = vec![0i128; spec.width()];
    let j_zero = by_freq.get(&zero).copied().unwrap_or(0);
    let max_nonzero = by_freq
        .iter()
        .filter(|(h, _)| **h != zero)
        .map(|(_, &c)| c)
        .max()
        .unwrap_or(0);
    let routes_agree = by_freq == by_direct;
    let report = ZrdReport {
        j_zero,
        targets: by_freq.len(),
        max_nonzero,
        routes_agree,
        holds: routes_agree && max_nonzero <= j_zero,
    };
    if !report.routes_agree {
        return Err(Error::Verification("target distributions disagree between routes".into()));
    }
    if !report.holds {
        return Err(Error::Verification(format!(
            "zero target dominates: J(h) = {} > J(0) = {}",
            max_nonzero, j_zero
        )));
    }
    Ok(report)
}

/// One inequality `lhs <= rhs` (or an equality where `name` says so).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

impl InequalityCheck {
    fn le(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        InequalityCheck {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    fn eq(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        InequalityCheck {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub s: u32,
    pub k: u32,
    pub p: u64,
    pub j: u64,
    pub checks: Vec<InequalityCheck>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

fn pow(b: u128, e: u32) -> Result<u128> {
    b.checked_pow(e).ok_or(Error::Overflow("bound arithmetic"))
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow("bound arithmetic"))
}

/// Evaluates the trivial lower bounds for `J_{s,k}(P)`, the counting chain
/// they come from, and the comparison of each incomplete system with the
/// complete one. Failed inequalities are recorded, not raised.
pub fn bounds_chain_report(s: u32, k: u32, p: u64, cfg: &OracleConfig) -> Result<ChainReport> {
    let spec = SystemSpec::complete(s, k, p)?;
    let j = brute_j(&spec, None, cfg)?;
    let q = p as u128;
    let s2 = 2 * s as u128;
    let tri = k * (k + 1) / 2;
    let q2s = pow(q, 2 * s)?;
    let mut checks = Vec::new();

    // every target is hit by exactly the pairs of tuples that produce it
    let dist = target_distribution(&spec, cfg)?;
    let total: u128 = dist.values().map(|&c| c as u128).sum();
    checks.push(InequalityCheck::eq("sum over targets = Q^(2s)", total, q2s));

    let mut in_box = true;
    for h in dist.keys() {
        for (i, &hj) in h.iter().enumerate() {
            let bound = s as i128 * (pow(q, i as u32 + 1)? as i128 - 1);
            in_box &= hj.abs() <= bound;
        }
    }
    checks.push(InequalityCheck::le(
        "reachable targets outside |h_j| <= s(Q^j - 1)",
        u128::from(!in_box),
        0,
    ));
    let max_target = dist.values().copied().max().unwrap_or(0) as u128;
    checks.push(InequalityCheck::le("max_h J(h) <= J", max_target, j as u128));

    let mut box_count: u128 = 1;
    for jj in 1..=k {
        box_count = mul(box_count, s2 * (pow(q, jj)?.saturating_sub(1)) + 1)?;
    }
    let envelope = mul(pow(s2, k)?, pow(q, tri)?)?;
    checks.push(InequalityCheck::le(
        "Q^(2s) <= #box * J",
        q2s,
        mul(box_count, j as u128)?,
    ));
    checks.push(InequalityCheck::le("#box <= (2s)^k Q^(k(k+1)/2)", box_count, envelope));
    checks.push(InequalityCheck::le(
        "Q^(2s) <= (2s)^k Q^(k(k+1)/2) J",
        q2s,
        mul(envelope, j as u128)?,
    ));
    checks.push(InequalityCheck::le("Q^s <= J", pow(q, s)?, j as u128));

    for h in 2..=k {
        let inc = brute_j(&SystemSpec::interval(s, k, h, p)?, None, cfg)?;
        let rhs = mul(
            mul(pow(s as u128, h - 1)?, pow(q, h * (h - 1) / 2)?)?,
            j as u128,
        )?;
        checks.push(InequalityCheck::le(
            format!("J_(s,k,{h}) <= s^{} P^{} J", h - 1, h * (h - 1) / 2),
            inc as u128,
            rhs,
        ));
    }

    Ok(ChainReport { s, k, p, j, checks })
}

/// As [`bounds_chain_report`], but a failed inequality is an error naming it.
pub fn verify_bounds_chain(s: u32, k: u32, p: u64, cfg: &OracleConfig) -> Result<ChainReport> {
    let report = bounds_chain_report(s, k, p, cfg)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::Verification(format!(
            "s={s}, k={k}, P={p}: {} fails ({} vs {})",
            bad.name, bad.lhs, bad.rhs
        )));
    }
    Ok(report)
}
