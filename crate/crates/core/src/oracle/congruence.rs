//! Nonsingular solutions of polynomial congruences modulo prime powers.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::det::bareiss;
use super::Guards;
use crate::error::{Error, Result};

/// A polynomial in `vars` variables, as `(coefficient, exponent vector)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiPoly {
    pub vars: usize,
    pub terms: Vec<(i64, Vec<u32>)>,
}

impl MultiPoly {
    pub fn new(vars: usize, terms: Vec<(i64, Vec<u32>)>) -> Result<Self> {
        if terms.iter().any(|(_, e)| e.len() != vars) {
            return Err(Error::Domain(format!("every exponent vector needs {vars} entries")));
        }
        Ok(MultiPoly { vars, terms })
    }

    /// Total degree, ignoring zero coefficients.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(c, _)| *c != 0)
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (c, e) in &self.terms {
            let mut t = BigInt::from(*c);
            for (xi, &ei) in x.iter().zip(e) {
                t *= BigInt::from(*xi).pow(ei);
            }
            acc += t;
        }
        acc
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[var] > 0)
            .map(|(c, e)| {
                let mut e = e.clone();
                let c = c * e[var] as i64;
                e[var] -= 1;
                (c, e)
            })
            .collect();
        MultiPoly {
            vars: self.vars,
            terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub s_exp: u32,
    pub degrees: Vec<u32>,
    /// Solutions in `[1, p^s]^d` with Jacobian prime to `p`.
    pub count: u64,
    /// Product of the degrees.
    pub bound: u64,
    pub holds: bool,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|q| q * q <= p).all(|q| p % q != 0)
}

/// Counts the nonsingular solutions of `f_j = 0 (mod p^s_exp)` and compares
/// the count with `k_1 ... k_d`.
pub fn congruence_count_check(
    p: u64,
    polys: &[MultiPoly],
    s_exp: u32,
    guards: &Guards,
) -> Result<CongruenceReport> {
    let d = polys.len();
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if d == 0 || s_exp == 0 || polys.iter().any(|f| f.vars != d) {
        return Err(Error::Domain(
            "need d >= 1 polynomials in d variables and s >= 1".into(),
        ));
    }
    let modulus = p
        .checked_pow(s_exp)
        .ok_or(Error::Overflow("prime power modulus"))?;
    let space = (modulus as u128).saturating_pow(d as u32);
    if space > guards.residues {
        return Err(Error::GuardExceeded {
            requested: space,
            guard: guards.residues,
        });
    }
    let partials: Vec<Vec<MultiPoly>> = polys
        .iter()
        .map(|f| (0..d).map(|i| f.partial(i)).collect())
        .collect();
    let m = BigInt::from(modulus);
    let pb = BigInt::from(p);
    let mut count = 0u64;
    let mut x = vec![1i64; d];
    loop {
        if polys.iter().all(|f| (f.eval(&x) % &m).is_zero()) {
            let jac = (0..d)
                .map(|i| (0..d).map(|j| partials[j][i].eval(&x)).collect())
                .collect();
            if !(bareiss(jac) % &pb).is_zero() {
                count += 1;
            }
        }
        let mut pos = 0;
        loop {
            if pos == d {
                let degrees: Vec<u32> = polys.iter().map(MultiPoly::degree).collect();
                let bound = degrees.iter().map(|&k| k as u64).product();
                let report = CongruenceReport {
                    p,
                    s_exp,
                    degrees,
                    count,
                    bound,
                    holds: count <= bound,
                };
                if !report.holds {
                    return Err(Error::Verification(format!(
                        "{count} nonsingular roots mod {p}^{s_exp} exceed {bound}"
                    )));
                }
                return Ok(report);
            }
            x[pos] += 1;
            if x[pos] as u64 <= modulus {
                break;
            }
            x[pos] = 1;
            pos += 1;
        }
    }
}

/// Univariate `sum c_i x^i` from ascending coefficients.
pub fn univariate(coeffs: &[i64]) -> MultiPoly {
    MultiPoly {
        vars: 1,
        terms: coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, vec![i as u32]))
            .collect(),
    }
}

/// `x_1^j + ... + x_d^j - c`.
pub fn diagonal(d: usize, j: u32, c: i64) -> MultiPoly {
    let mut terms: Vec<(i64, Vec<u32>)> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = j;
            (1, e)
        })
        .collect();
    terms.push((-c, vec![0; d]));
    MultiPoly { vars: d, terms }
}

/// The fixed battery of small systems run by the verification suite:
/// `(label, p, s_exp, polynomials)`.
pub fn standard_systems() -> Vec<(String, u64, u32, Vec<MultiPoly>)> {
    let mut out = vec![
        ("x^2 mod 3".to_string(), 3, 1, vec![univariate(&[0, 0, 1])]),
        ("x^2 - 1 mod 5".to_string(), 5, 1, vec![univariate(&[-1, 0, 1])]),
        ("x^2 - 1 mod 25".to_string(), 5, 2, vec![univariate(&[-1, 0, 1])]),
        ("x^3 - 1 mod 7".to_string(), 7, 1, vec![univariate(&[-1, 0, 0, 1])]),
        ("x^3 - 2 mod 49".to_string(), 7, 2, vec![univariate(&[-2, 0, 0, 1])]),
    ];
    for &p in &[2u64, 3, 5, 7] {
        for s_exp in 1..=2 {
            for c in 0..3i64 {
                out.push((
                    format!("x+y={}, x^2+y^2={} mod {p}^{s_exp}", c + 1, 2 * c + 5),
                    p,
                    s_exp,
                    vec![diagonal(2, 1, c + 1), diagonal(2, 2, 2 * c + 5)],
                ));
            }
        }
    }
    for &p in &[2u64, 3, 5, 7] {
        for s_exp in 1..=2 {
            out.push((
                format!("x+y+z=6, x^2+y^2+z^2=14, x^3+y^3+z^3=36 mod {p}^{s_exp}"),
                p,
                s_exp,
                vec![diagonal(3, 1, 6), diagonal(3, 2, 14), diagonal(3, 3, 36)],
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Guards {
        Guards::default()
    }

    #[test]
    fn listed_examples() {
        let r = congruence_count_check(3, &[univariate(&[0, 0, 1])], 1, &g()).unwrap();
        assert_eq!((r.count, r.bound), (0, 2));
        let r = congruence_count_check(5, &[univariate(&[-1, 0, 1])], 1, &g()).unwrap();
        assert_eq!((r.count, r.bound), (2, 2));
        let r = congruence_count_check(5, &[univariate(&[-1, 0, 1])], 2, &g()).unwrap();
        assert_eq!(r.count, 2);
    }

    #[test]
    fn vandermonde_system_mod_7() {
        // roots are the permutations of (1, 2, 3), all with distinct entries
        let polys = vec![diagonal(3, 1, 6), diagonal(3, 2, 14), diagonal(3, 3, 36)];
        let r = congruence_count_check(7, &polys, 1, &g()).unwrap();
        assert_eq!((r.count, r.bound), (6, 6));
    }

    #[test]
    fn whole_battery_holds() {
        for (label, p, s, polys) in standard_systems() {
            let r = congruence_count_check(p, &polys, s, &g()).unwrap();
            assert!(r.holds, "{label}");
        }
    }

    #[test]
    fn rejects_composite_and_guard() {
        assert!(congruence_count_check(4, &[univariate(&[0, 1])], 1, &g()).is_err());
        let tight = Guards {
            residues: 10,
            ..Default::default()
        };
        assert!(matches!(
            congruence_count_check(7, &[diagonal(2, 1, 0), diagonal(2, 2, 0)], 1, &tight),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
