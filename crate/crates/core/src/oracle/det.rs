//! The derivative determinant of a type-`(d, T)` polynomial tuple.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// `(Psi_{d+1}, ..., Psi_k)`, each stored as ascending coefficients. The
/// first `d` entries of the full `k`-tuple are identically zero and are not
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub k: u32,
    pub d: u32,
    pub t: u64,
    pub m: u32,
    pub coeffs: Vec<Vec<BigInt>>,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

/// `j! / (j - d)! * 2^m * T`.
fn leading(j: u32, d: u32, t: u64, m: u32) -> BigInt {
    factorial(j) / factorial(j - d) * (BigInt::one() << m) * t
}

impl PolySystem {
    /// Checks the degree and leading coefficient of every `Psi_j`.
    pub fn new(k: u32, d: u32, t: u64, m: u32, coeffs: Vec<Vec<BigInt>>) -> Result<Self> {
        if k == 0 || d >= k || t == 0 {
            return Err(Error::Domain(format!(
                "need k >= 1, 0 <= d <= k - 1, T >= 1 (k = {k}, d = {d}, T = {t})"
            )));
        }
        if coeffs.len() != (k - d) as usize {
            return Err(Error::Domain(format!(
                "expected {} polynomials, got {}",
                k - d,
                coeffs.len()
            )));
        }
        for (idx, c) in coeffs.iter().enumerate() {
            let j = d + 1 + idx as u32;
            let deg = (j - d) as usize;
            if c.len() != deg + 1 || c[deg] != leading(j, d, t, m) {
                return Err(Error::Domain(format!(
                    "Psi_{j} must have degree {deg} and leading coefficient {}",
                    leading(j, d, t, m)
                )));
            }
        }
        Ok(PolySystem { k, d, t, m, coeffs })
    }

    /// `Psi_j(z) = z^j`, which is of type `(0, 1)`.
    pub fn powers(k: u32) -> Self {
        let coeffs = (1..=k)
            .map(|j| {
                let mut c = vec![BigInt::zero(); j as usize + 1];
                c[j as usize] = BigInt::one();
                c
            })
            .collect();
        PolySystem {
            k,
            d: 0,
            t: 1,
            m: 0,
            coeffs,
        }
    }

    /// A type-`(d, T)` tuple with lower-order coefficients drawn uniformly
    /// from `[-spread, spread]`.
    pub fn random<R: Rng>(k: u32, d: u32, t: u64, m: u32, spread: i64, rng: &mut R) -> Result<Self> {
        if d >= k {
            return Err(Error::Domain(format!("need d < k (d = {d}, k = {k})")));
        }
        let coeffs = (d + 1..=k)
            .map(|j| {
                let deg = (j - d) as usize;
                let mut c: Vec<BigInt> = (0..deg)
                    .map(|_| BigInt::from(rng.gen_range(-spread..=spread)))
                    .collect();
                c.push(leading(j, d, t, m));
                c
            })
            .collect();
        PolySystem::new(k, d, t, m, coeffs)
    }

    fn derivative_at(&self, idx: usize, z: &BigInt) -> BigInt {
        // Horner on the formal derivative
        let c = &self.coeffs[idx];
        let mut acc = BigInt::zero();
        for i in (1..c.len()).rev() {
            acc = acc * z + &c[i] * i;
        }
        acc
    }

    /// The closed form `(2^m T)^(k-d) prod_j j!/(j-d-1)! prod_{i<j} (z_i - z_j)`.
    pub fn closed_form(&self, z: &[i64]) -> BigInt {
        let n = (self.k - self.d) as usize;
        let mut v = ((BigInt::one() << self.m) * self.t).pow(n as u32);
        for j in self.d + 1..=self.k {
            v *= factorial(j) / factorial(j - self.d - 1);
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                v *= BigInt::from(z[i]) - BigInt::from(z[j]);
            }
        }
        v
    }
}

/// Fraction-free Gaussian elimination.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..n - 1 {
        if a[p][p].is_zero() {
            match (p + 1..n).find(|&r| !a[r][p].is_zero()) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let v = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[p][p].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetReport {
    /// Decimal string; these can outgrow any fixed-width integer.
    pub det: String,
    pub closed_form: String,
    pub magnitudes_equal: bool,
    /// Whether the signs also agree. Not required: the closed form's sign
    /// depends on how the Vandermonde product is ordered.
    pub signs_equal: bool,
}

/// Computes `det(Psi'_j(z_i))` exactly and compares its magnitude with the
/// closed form.
pub fn det_identity_check(poly: &PolySystem, z: &[i64]) -> Result<DetReport> {
    let n = (poly.k - poly.d) as usize;
    if z.len() != n {
        return Err(Error::Domain(format!("need {} points, got {}", n, z.len())));
    }
    let rows = z
        .iter()
        .map(|&zi| {
            let zi = BigInt::from(zi);
            (0..n).map(|idx| poly.derivative_at(idx, &zi)).collect()
        })
        .collect();
    let det = bareiss(rows);
    let closed = poly.closed_form(z);
    let report = DetReport {
        det: det.to_string(),
        closed_form: closed.to_string(),
        magnitudes_equal: det.abs() == closed.abs(),
        signs_equal: det == closed,
    };
    if !report.magnitudes_equal {
        return Err(Error::Verification(format!(
            "determinant {} vs closed form {} (k = {}, d = {})",
            report.det, report.closed_form, poly.k, poly.d
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cubic_powers() {
        let r = det_identity_check(&PolySystem::powers(3), &[1, 2, 3]).unwrap();
        assert_eq!(r.det, "12");
        assert_eq!(r.closed_form, "-12");
        assert!(r.magnitudes_equal && !r.signs_equal);
    }

    #[test]
    fn repeated_point_vanishes() {
        let r = det_identity_check(&PolySystem::powers(3), &[2, 5, 2]).unwrap();
        assert_eq!(r.det, "0");
    }

    #[test]
    fn random_type_1_2() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = PolySystem::random(4, 1, 2, 1, 9, &mut rng).unwrap();
            let mut z: Vec<i64> = (1..=9).collect();
            for i in 0..3 {
                let j = rng.gen_range(i..9);
                z.swap(i, j);
            }
            det_identity_check(&p, &z[..3]).unwrap();
        }
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = |v: [[i64; 3]; 3]| {
            v.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect::<Vec<Vec<BigInt>>>()
        };
        assert_eq!(bareiss(m([[0, 1, 2], [3, 4, 5], [6, 7, 9]])), BigInt::from(-3));
        assert_eq!(bareiss(m([[2, 0, 0], [0, 3, 0], [0, 0, 4]])), BigInt::from(24));
    }

    #[test]
    fn rejects_wrong_leading_coefficient() {
        let c = vec![vec![BigInt::from(0), BigInt::from(3)]];
        assert!(PolySystem::new(1, 0, 1, 0, c).is_err());
    }
}
