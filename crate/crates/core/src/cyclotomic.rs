//! Cyclotomic integers Z\[zeta_q\] in canonical form.
//!
//! Values are integer coefficient vectors over the power basis
//! 1, zeta, ..., zeta^{phi(q)-1}, reduced modulo the q-th cyclotomic
//! polynomial. Reduction modulo the full cyclotomic polynomial (rather than
//! just the all-ones relation) keeps the representation faithful for
//! composite q as well.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Euler's totient for small arguments.
pub fn euler_phi(q: u64) -> u64 {
    let mut n = q;
    let mut result = q;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients (constant term first) of the q-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(q: u64) -> Vec<BigInt> {
    assert!(q >= 1);
    if q == 1 {
        return vec![-BigInt::one(), BigInt::one()]; // x - 1
    }
    // (x^q - 1) / prod_{d | q, d < q} Phi_d
    let mut f = vec![BigInt::zero(); q as usize + 1];
    f[0] = -BigInt::one();
    f[q as usize] = BigInt::one();
    for d in 1..q {
        if q.is_multiple_of(d) {
            f = poly_div_exact(&f, &cyclotomic_polynomial(d));
        }
    }
    f
}

/// Exact division of polynomials with integer coefficients; the divisor must
/// be monic and divide evenly.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division must be exact");
    quot
}

/// Remainder of `poly` modulo the monic polynomial `modulus`.
fn poly_rem(poly: &[BigInt], modulus: &[BigInt]) -> Vec<BigInt> {
    let dn = modulus.len() - 1;
    let mut rem = poly.to_vec();
    if rem.len() <= dn {
        rem.resize(dn, BigInt::zero());
        return rem;
    }
    for k in (dn..rem.len()).rev() {
        let c = rem[k].clone();
        if !c.is_zero() {
            for (i, d) in modulus.iter().enumerate() {
                rem[k - dn + i] -= &c * d;
            }
        }
    }
    rem.truncate(dn);
    rem
}

/// An element of Z\[zeta_q\], stored in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycInt {
    q: u64,
    coeffs: Vec<BigInt>, // length phi(q)
}

impl CycInt {
    pub fn zero(q: u64) -> Self {
        CycInt {
            q,
            coeffs: vec![BigInt::zero(); euler_phi(q) as usize],
        }
    }

    pub fn from_integer(q: u64, n: BigInt) -> Self {
        let mut c = Self::zero(q);
        c.coeffs[0] = n;
        c
    }

    pub fn one(q: u64) -> Self {
        Self::from_integer(q, BigInt::one())
    }

    /// zeta_q^k
    pub fn root_power(q: u64, k: i64) -> Self {
        let k = k.rem_euclid(q as i64) as usize;
        let mut raw = vec![BigInt::zero(); q as usize];
        raw[k] = BigInt::one();
        Self::reduce(q, raw)
    }

    fn reduce(q: u64, raw: Vec<BigInt>) -> Self {
        let phi = cyclotomic_polynomial(q);
        let coeffs = poly_rem(&raw, &phi);
        CycInt { q, coeffs }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.q, other.q);
        CycInt {
            q: self.q,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.q, other.q);
        CycInt {
            q: self.q,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            q: self.q,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> CycInt {
        CycInt {
            q: self.q,
            coeffs: self.coeffs.iter().map(|a| a * n).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.q, other.q);
        let mut raw = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Self::reduce(self.q, raw)
    }

    /// Complex conjugation, zeta -> zeta^{-1}.
    pub fn conj(&self) -> CycInt {
        let q = self.q as usize;
        let mut raw = vec![BigInt::zero(); q];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(q - i) % q] += c;
        }
        Self::reduce(self.q, raw)
    }
}

impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 => {
                    if mag.is_one() {
                        write!(f, "z")?;
                    } else {
                        write!(f, "{mag}*z")?;
                    }
                }
                _ => {
                    if mag.is_one() {
                        write!(f, "z^{i}")?;
                    } else {
                        write!(f, "{mag}*z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::big;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(3), 2);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(euler_phi(31), 30);
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_3 = x^2 + x + 1
        assert_eq!(cyclotomic_polynomial(3), vec![big(1), big(1), big(1)]);
        // Phi_9 = x^6 + x^3 + 1
        assert_eq!(
            cyclotomic_polynomial(9),
            vec![big(1), big(0), big(0), big(1), big(0), big(0), big(1)]
        );
        // Phi_15 = x^8 - x^7 + x^5 - x^4 + x^3 - x + 1
        assert_eq!(
            cyclotomic_polynomial(15),
            vec![
                big(1),
                big(-1),
                big(0),
                big(1),
                big(-1),
                big(1),
                big(0),
                big(-1),
                big(1)
            ]
        );
    }

    #[test]
    fn geometric_sum_vanishes() {
        // sum over all q-th roots of unity is zero, prime or not
        for q in [3u64, 5, 9, 15, 21, 25, 27, 31] {
            let mut acc = CycInt::zero(q);
            for k in 0..q {
                acc = acc.add(&CycInt::root_power(q, k as i64));
            }
            assert!(acc.is_zero(), "q = {q}");
        }
    }

    #[test]
    fn partial_rotation_sums_are_rational() {
        // sum_{h=1}^{q-1} zeta^{ha} = -1 for every a not divisible by q,
        // including composite q with gcd(a, q) > 1
        for q in [9u64, 15, 25] {
            for a in 1..q {
                let mut acc = CycInt::zero(q);
                for h in 1..q {
                    acc = acc.add(&CycInt::root_power(q, (h * a) as i64));
                }
                assert_eq!(acc.as_integer(), Some(big(-1)), "q={q} a={a}");
            }
        }
    }

    #[test]
    fn conjugation_and_products() {
        for q in [3u64, 9, 15] {
            for k in 0..q {
                let z = CycInt::root_power(q, k as i64);
                // z * conj(z) = 1
                assert_eq!(z.mul(&z.conj()), CycInt::one(q));
                // conj is an involution
                assert_eq!(z.conj().conj(), z);
            }
        }
    }

    #[test]
    fn trace_of_rotation_block_at_q3() {
        // zeta_3 + zeta_3^2 = -1
        let v = CycInt::root_power(3, 1).add(&CycInt::root_power(3, 2));
        assert_eq!(v.as_integer(), Some(big(-1)));
    }
}
