//! Local Euler-factor verification for dihedral extensions: distinct-degree
//! factorization over prime fields, Frobenius-class identification from the
//! residue-degree patterns in the degree-q and quadratic subfields, and the
//! exact rational-function identity of local zeta factors.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::characters::{DihedralGroup, Elem, SubgroupLabel};
use crate::linalg::is_prime_u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EulerError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial must have degree >= 1 after reduction mod {0}")]
    DegreeCollapse(u64),
    #[error("polynomial is not squarefree mod {0}: ramified prime")]
    RamifiedPrime(u64),
    #[error("degree multisets are not a dihedral splitting pattern (k: {k:?}, L: {l:?}, q={q})")]
    NotDihedralPattern { k: Vec<u64>, l: Vec<u64>, q: u64 },
    #[error("degree multiset for {field} sums to {got}, expected {expected}")]
    BadDegreeSum {
        field: &'static str,
        got: u64,
        expected: u64,
    },
    #[error("q must be odd and >= 3, got {0}")]
    BadQ(u64),
}

/// A monic polynomial over F_p, coefficients constant-term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    /// Reduce integer coefficients mod p and normalize to a monic
    /// polynomial. Errors if p is not prime or the degree collapses below 1.
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self, EulerError> {
        if !is_prime_u64(p) {
            return Err(EulerError::NotPrime(p));
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
        while c.last().map(|&x| x == 0).unwrap_or(false) {
            c.pop();
        }
        if c.len() < 2 {
            return Err(EulerError::DegreeCollapse(p));
        }
        let lead = *c.last().unwrap();
        if lead != 1 {
            let inv = mod_pow(lead, p - 2, p);
            for x in &mut c {
                *x = mulmod(*x, inv, p);
            }
        }
        Ok(PolyFp { p, coeffs: c })
    }

    pub fn degree(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn trim(mut c: Vec<u64>, p: u64) -> PolyFp {
        while c.last().map(|&x| x == 0).unwrap_or(false) {
            c.pop();
        }
        if c.is_empty() {
            c.push(0);
        }
        PolyFp { p, coeffs: c }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn monic(&self) -> PolyFp {
        let lead = *self.coeffs.last().unwrap();
        if lead == 1 || lead == 0 {
            return self.clone();
        }
        let inv = mod_pow(lead, self.p - 2, self.p);
        PolyFp {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| mulmod(c, inv, self.p)).collect(),
        }
    }

    fn derivative(&self) -> PolyFp {
        let p = self.p;
        let c: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| mulmod(x, (i as u64) % p, p))
            .collect();
        Self::trim(c, p)
    }

    fn rem(&self, other: &PolyFp) -> PolyFp {
        let p = self.p;
        if other.is_constant() {
            // division by a unit leaves no remainder
            return Self::trim(vec![0], p);
        }
        let d = other.degree() as usize;
        let lead_inv = mod_pow(*other.coeffs.last().unwrap(), p - 2, p);
        let mut r = self.coeffs.clone();
        while r.len() > d && r.len() > 1 {
            let k = r.len() - 1;
            let f = mulmod(r[k], lead_inv, p);
            if f != 0 {
                for (i, &oc) in other.coeffs.iter().enumerate() {
                    let idx = k - d + i;
                    r[idx] = (r[idx] + p - mulmod(f, oc, p)) % p;
                }
            }
            r.pop();
        }
        Self::trim(r, p)
    }

    fn div_exact(&self, other: &PolyFp) -> PolyFp {
        let p = self.p;
        if other.is_constant() {
            let inv = mod_pow(other.coeffs[0], p - 2, p);
            return Self::trim(
                self.coeffs.iter().map(|&c| mulmod(c, inv, p)).collect(),
                p,
            );
        }
        let d = other.degree() as usize;
        let lead_inv = mod_pow(*other.coeffs.last().unwrap(), p - 2, p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len().saturating_sub(d)];
        while r.len() > d && r.len() > 1 {
            let k = r.len() - 1;
            let f = mulmod(r[k], lead_inv, p);
            q[k - d] = f;
            if f != 0 {
                for (i, &oc) in other.coeffs.iter().enumerate() {
                    let idx = k - d + i;
                    r[idx] = (r[idx] + p - mulmod(f, oc, p)) % p;
                }
            }
            r.pop();
        }
        debug_assert!(r.iter().all(|&c| c == 0), "division must be exact");
        Self::trim(q, p)
    }

    fn mul(&self, other: &PolyFp) -> PolyFp {
        let p = self.p;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, p)) % p;
            }
        }
        Self::trim(c, p)
    }

    fn gcd(&self, other: &PolyFp) -> PolyFp {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// x^e mod self, by repeated squaring on polynomial exponents.
    fn x_pow_mod(&self, e: u64) -> PolyFp {
        let p = self.p;
        let mut base = Self::trim(vec![0, 1], p).rem(self);
        let mut acc = Self::trim(vec![1], p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        acc
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiset of positive integers, the residue degrees of the irreducible
/// factors of a squarefree polynomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeMultiset(Vec<u64>);

impl DegreeMultiset {
    pub fn new(mut degrees: Vec<u64>) -> Self {
        degrees.sort_unstable();
        DegreeMultiset(degrees)
    }

    pub fn degrees(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for DegreeMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Degrees of the irreducible factors of f over F_p (multiset), by
/// distinct-degree factorization. Only degrees are computed, never the
/// factors themselves.
pub fn distinct_degree_split(f: &PolyFp) -> Result<DegreeMultiset, EulerError> {
    // squarefree check: gcd(f, f') must be constant
    let der = f.derivative();
    if der.is_zero() || !f.gcd(&der).is_constant() {
        return Err(EulerError::RamifiedPrime(f.p));
    }
    let mut degrees = Vec::new();
    let mut work = f.monic();
    // h = x^{p^d} mod work, incrementally
    let mut h = work.x_pow_mod(f.p);
    let mut d = 1u64;
    while work.degree() >= 1 {
        if work.degree() < 2 * d {
            // whatever is left is irreducible
            degrees.push(work.degree());
            break;
        }
        // gcd(h - x, work) collects all irreducible factors of degree d
        let mut hx = h.coeffs.clone();
        if hx.len() < 2 {
            hx.resize(2, 0);
        }
        hx[1] = (hx[1] + f.p - 1) % f.p;
        let diff = PolyFp::trim(hx, f.p);
        let g = work.gcd(&diff);
        if !g.is_constant() {
            let count = g.degree() / d;
            degrees.extend(std::iter::repeat_n(d, count as usize));
            work = work.div_exact(&g);
            if work.degree() == 0 {
                break;
            }
        }
        h = h.rem(&work);
        // advance h to x^{p^{d+1}} mod work
        let mut acc = PolyFp::trim(vec![1], f.p);
        let mut base = h.clone();
        let mut e = f.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(&work);
            }
            base = base.mul(&base).rem(&work);
            e >>= 1;
        }
        h = acc;
        d += 1;
    }
    Ok(DegreeMultiset::new(degrees))
}

/// Conjugacy class of a Frobenius element in D_q, as far as splitting data
/// can see it: the identity, a rotation of exact order d | q (d > 1), or a
/// reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FrobeniusClass {
    Identity,
    Rotation { order: u64 },
    Reflection,
}

impl std::fmt::Display for FrobeniusClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrobeniusClass::Identity => write!(f, "identity"),
            FrobeniusClass::Rotation { order } => write!(f, "rotation(order {order})"),
            FrobeniusClass::Reflection => write!(f, "reflection"),
        }
    }
}

/// All Frobenius classes for D_q in a fixed order.
pub fn all_frobenius_classes(q: u64) -> Result<Vec<FrobeniusClass>, EulerError> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(EulerError::BadQ(q));
    }
    let mut out = vec![FrobeniusClass::Identity];
    for d in 2..=q {
        if q.is_multiple_of(d) {
            out.push(FrobeniusClass::Rotation { order: d });
        }
    }
    out.push(FrobeniusClass::Reflection);
    Ok(out)
}

/// Identifies the Frobenius class from the factorization degree multisets in
/// the degree-q field (k) and the quadratic field (L).
pub fn frobenius_class(
    degrees_k: &DegreeMultiset,
    degrees_l: &DegreeMultiset,
    q: u64,
) -> Result<FrobeniusClass, EulerError> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(EulerError::BadQ(q));
    }
    if degrees_k.total() != q {
        return Err(EulerError::BadDegreeSum {
            field: "k",
            got: degrees_k.total(),
            expected: q,
        });
    }
    if degrees_l.total() != 2 {
        return Err(EulerError::BadDegreeSum {
            field: "L",
            got: degrees_l.total(),
            expected: 2,
        });
    }
    let pattern_err = || EulerError::NotDihedralPattern {
        k: degrees_k.degrees().to_vec(),
        l: degrees_l.degrees().to_vec(),
        q,
    };
    let r = (q - 1) / 2;
    if degrees_l.degrees() == [1, 1] {
        // Frobenius lands in the rotation subgroup
        let ds = degrees_k.degrees();
        let d = ds[0];
        if ds.iter().any(|&x| x != d) || !q.is_multiple_of(d) {
            return Err(pattern_err());
        }
        if d == 1 {
            Ok(FrobeniusClass::Identity)
        } else {
            Ok(FrobeniusClass::Rotation { order: d })
        }
    } else if degrees_l.degrees() == [2] {
        // reflection pattern: one fixed point and r transpositions
        let mut expected = vec![1u64];
        expected.extend(std::iter::repeat_n(2, r as usize));
        expected.sort_unstable();
        if degrees_k.degrees() == expected.as_slice() {
            Ok(FrobeniusClass::Reflection)
        } else {
            Err(pattern_err())
        }
    } else {
        Err(pattern_err())
    }
}

fn class_representative(c: FrobeniusClass, q: u64) -> Elem {
    match c {
        FrobeniusClass::Identity => Elem::IDENTITY,
        FrobeniusClass::Rotation { order } => Elem {
            a: q / order,
            b: false,
        },
        FrobeniusClass::Reflection => Elem { a: 0, b: true },
    }
}

/// Cycle type of a representative of the class acting on the coset space
/// D_q / H, computed by explicit orbit enumeration. For the trivial
/// subgroup this gives the residue degrees in the full dihedral field.
pub fn coset_degrees(c: FrobeniusClass, target: SubgroupLabel, q: u64) -> DegreeMultiset {
    let group = DihedralGroup::new(q).expect("q validated by callers");
    let g = class_representative(c, q);
    // enumerate cosets by a canonical key
    let coset_key = |e: Elem| -> (u64, bool) {
        match target {
            SubgroupLabel::Trivial => (e.a, e.b),
            // e * <sigma>: representative rho^a
            SubgroupLabel::Reflection => (e.a, false),
            // e * C_q: representative sigma^b
            SubgroupLabel::Rotation => (0, e.b),
        }
    };
    let mut cosets: Vec<Elem> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for e in group.elements() {
        let key = coset_key(e);
        if seen.insert(key) {
            cosets.push(Elem {
                a: key.0,
                b: key.1,
            });
        }
    }
    let mut visited = std::collections::BTreeSet::new();
    let mut degrees = Vec::new();
    for start in cosets {
        if visited.contains(&coset_key(start)) {
            continue;
        }
        let mut len = 0u64;
        let mut cur = start;
        loop {
            visited.insert(coset_key(cur));
            len += 1;
            cur = group.mul(g, cur);
            if coset_key(cur) == coset_key(start) {
                break;
            }
        }
        degrees.push(len);
    }
    DegreeMultiset::new(degrees)
}

/// Dense integer polynomial in t, constant term first, for the local factor
/// comparison.
fn poly_mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_minus_t_pow(d: u64) -> Vec<i64> {
    let mut v = vec![0i64; d as usize + 1];
    v[0] = 1;
    v[d as usize] = -1;
    v
}

/// Verifies the local Euler-factor identity at one unramified prime with
/// Frobenius class `c`: after clearing denominators,
/// prod over degrees in L of (1-t^d) times prod over degrees in k of
/// (1-t^d)^2 equals prod over degrees in F of (1-t^d) times (1-t)^2,
/// as exact integer polynomials in t.
pub fn local_identity_check(c: FrobeniusClass, q: u64) -> Result<bool, EulerError> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(EulerError::BadQ(q));
    }
    let deg_f = coset_degrees(c, SubgroupLabel::Trivial, q);
    let deg_l = coset_degrees(c, SubgroupLabel::Rotation, q);
    let deg_k = coset_degrees(c, SubgroupLabel::Reflection, q);

    let mut lhs = vec![1i64];
    for &d in deg_l.degrees() {
        lhs = poly_mul_i64(&lhs, &one_minus_t_pow(d));
    }
    for &d in deg_k.degrees() {
        let f = one_minus_t_pow(d);
        lhs = poly_mul_i64(&lhs, &f);
        lhs = poly_mul_i64(&lhs, &f);
    }
    let mut rhs = poly_mul_i64(&one_minus_t_pow(1), &one_minus_t_pow(1));
    for &d in deg_f.degrees() {
        rhs = poly_mul_i64(&rhs, &one_minus_t_pow(d));
    }
    Ok(lhs == rhs)
}

/// Outcome of scanning one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeOutcome {
    Verified(FrobeniusClass),
    Skipped,
    Failed(String),
}

/// Report of a scan over all primes up to a bound.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub q: u64,
    pub bound: u64,
    pub tested: u64,
    pub skipped: u64,
    pub tally: BTreeMap<FrobeniusClass, u64>,
    pub failures: Vec<(u64, String)>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Scans all primes p <= bound: reduces both defining polynomials mod p,
/// skips ramified primes (non-squarefree reductions or leading-coefficient
/// collapse), classifies the Frobenius from the degree patterns, and runs
/// the local identity check. Any inconsistency is reported with its prime.
pub fn scan_primes(f_k: &[i64], f_l: &[i64], q: u64, bound: u64) -> Result<ScanReport, EulerError> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(EulerError::BadQ(q));
    }
    let mut report = ScanReport {
        q,
        bound,
        tested: 0,
        skipped: 0,
        tally: BTreeMap::new(),
        failures: Vec::new(),
    };
    for p in primes_up_to(bound) {
        let reduced = (PolyFp::new(p, f_k), PolyFp::new(p, f_l));
        let (fk, fl) = match reduced {
            (Ok(a), Ok(b)) if a.degree() == (f_k.len() - 1) as u64
                && b.degree() == (f_l.len() - 1) as u64 => (a, b),
            _ => {
                report.skipped += 1;
                continue;
            }
        };
        let dk = match distinct_degree_split(&fk) {
            Ok(d) => d,
            Err(EulerError::RamifiedPrime(_)) => {
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let dl = match distinct_degree_split(&fl) {
            Ok(d) => d,
            Err(EulerError::RamifiedPrime(_)) => {
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.tested += 1;
        match frobenius_class(&dk, &dl, q) {
            Ok(class) => {
                *report.tally.entry(class).or_insert(0) += 1;
                match local_identity_check(class, q) {
                    Ok(true) => {}
                    Ok(false) => report
                        .failures
                        .push((p, format!("local factor mismatch for {class}"))),
                    Err(e) => report.failures.push((p, e.to_string())),
                }
            }
            Err(e) => report.failures.push((p, e.to_string())),
        }
    }
    Ok(report)
}

/// All primes up to `bound` (inclusive), by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}
