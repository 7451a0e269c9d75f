//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! Fraction-free determinants, Smith normal form with unimodular transforms,
//! and linear solving over residue rings. Every other module sits on top of
//! this one. All values are immutable after construction and all operations
//! are pure functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar. Always stored reduced with a positive denominator
/// (guaranteed by `num-rational`).
pub type BigRat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulus {0} is not a prime power >= 2")]
    NotPrimePower(BigInt),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("generators do not span a full-rank lattice")]
    RankDeficient,
    #[error("subgroup generators lie outside the ambient lattice")]
    NotASublattice,
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Convenience constructor for tests and small fixtures.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| big(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    /// Reduce row `i` modulo `moduli[i]` (nonnegative residues). Used to keep
    /// matrices representing endomorphisms of a finite module small.
    pub fn reduce_rows_mod(&self, moduli: &[BigInt]) -> IntMatrix {
        assert_eq!(moduli.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].mod_floor(&moduli[i])
        })
    }

    /// Horizontal concatenation [self | other].
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn submatrix_rows(&self, lo: usize, hi: usize) -> IntMatrix {
        Self::from_fn(hi - lo, self.cols, |i, j| self[(i + lo, j)].clone())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRat::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigRat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn scale_col(&mut self, j: usize, c: &BigRat) {
        for i in 0..self.rows {
            let v = self[(i, j)].clone() * c;
            self[(i, j)] = v;
        }
    }

    /// col_dst += c * col_src
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigRat) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let v = self[(i, dst)].clone() + self[(i, src)].clone() * c;
            self[(i, dst)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRat;
    fn index(&self, (i, j): (usize, usize)) -> &BigRat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRat {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
pub fn det_bareiss(m: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let pivot = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
            match pivot {
                None => return Ok(BigInt::zero()),
                Some(p) => {
                    for j in 0..n {
                        let tmp = a[(k, j)].clone();
                        a[(k, j)] = a[(p, j)].clone();
                        a[(p, j)] = tmp;
                    }
                    sign = -sign;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[(i, j)] = quot;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if sign < 0 { -d } else { d })
}

/// Exact determinant of a rational matrix. Denominators are cleared row by
/// row and the integer determinant is computed fraction-free.
pub fn det_exact(m: &RatMatrix) -> Result<BigRat, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut im = IntMatrix::zeros(n, n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = lcm.lcm(m[(i, j)].denom());
        }
        for j in 0..n {
            let v = &m[(i, j)] * BigRat::from_integer(lcm.clone());
            debug_assert!(v.is_integer());
            im[(i, j)] = v.to_integer();
        }
        scale *= lcm;
    }
    let d = det_bareiss(&im)?;
    Ok(BigRat::new(d, scale))
}

/// Smith normal form data: `u * m * v` is diagonal with diagonal `d`,
/// `d[i]` divides `d[i+1]` for consecutive nonzero invariants, and both
/// transforms are unimodular.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot selection is deterministic: the entry of smallest nonzero absolute
/// value in the remaining submatrix, ties broken by lowest (row, col).
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let find_pivot = |a: &IntMatrix, t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if a[(i, j)].abs() < a[(bi, bj)].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    };

    let swap_rows = |a: &mut IntMatrix, u: &mut IntMatrix, i: usize, k: usize| {
        if i == k {
            return;
        }
        for j in 0..a.cols {
            let t = a[(i, j)].clone();
            a[(i, j)] = a[(k, j)].clone();
            a[(k, j)] = t;
        }
        for j in 0..u.cols {
            let t = u[(i, j)].clone();
            u[(i, j)] = u[(k, j)].clone();
            u[(k, j)] = t;
        }
    };
    let swap_cols = |a: &mut IntMatrix, v: &mut IntMatrix, j: usize, k: usize| {
        if j == k {
            return;
        }
        for i in 0..a.rows {
            let t = a[(i, j)].clone();
            a[(i, j)] = a[(i, k)].clone();
            a[(i, k)] = t;
        }
        for i in 0..v.rows {
            let t = v[(i, j)].clone();
            v[(i, j)] = v[(i, k)].clone();
            v[(i, k)] = t;
        }
    };

    let min_dim = rows.min(cols);
    for t in 0..min_dim {
        'pivot: loop {
            let (pi, pj) = match find_pivot(&a, t) {
                None => break 'pivot,
                Some(p) => p,
            };
            swap_rows(&mut a, &mut u, t, pi);
            swap_cols(&mut a, &mut v, t, pj);

            // Clear column t below the pivot with rounded quotients.
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[(i, t)], &a[(t, t)]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let s = &q * &a[(t, j)];
                        a[(i, j)] -= s;
                    }
                    for j in 0..u.cols() {
                        let s = &q * &u[(t, j)];
                        u[(i, j)] -= s;
                    }
                }
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[(t, j)], &a[(t, t)]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let s = &q * &a[(i, t)];
                        a[(i, j)] -= s;
                    }
                    for i in 0..v.rows() {
                        let s = &q * &v[(i, t)];
                        v[(i, j)] -= s;
                    }
                }
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Row and column are clear; enforce the divisibility chain by
            // folding in any offending remaining entry.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    for j in 0..cols {
                        let s = a[(i, j)].clone();
                        a[(t, j)] += s;
                    }
                    for j in 0..u.cols() {
                        let s = u[(i, j)].clone();
                        u[(t, j)] += s;
                    }
                    continue 'pivot;
                }
                None => break 'pivot,
            }
        }
        if a[(t, t)].is_negative() {
            for j in 0..cols {
                let x = -a[(t, j)].clone();
                a[(t, j)] = x;
            }
            for j in 0..u.cols() {
                let x = -u[(t, j)].clone();
                u[(t, j)] = x;
            }
        }
    }

    let d: Vec<BigInt> = (0..min_dim).map(|i| a[(i, i)].clone()).collect();
    SnfResult { d, u, v }
}

/// Quotient rounding to the nearest integer (ties toward even quotient
/// magnitude do not matter for termination, floor of the half-adjusted
/// value is enough).
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = big(2);
    let half = b.abs() / &two;
    let adjusted = if a.is_negative() { a - half } else { a + half };
    adjusted.div_floor(b)
}

/// Basis of the kernel lattice {x : m x = 0} as matrix columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let mut cols = Vec::new();
    for i in 0..m.cols() {
        let zero_invariant = i >= snf.d.len() || snf.d[i].is_zero();
        if zero_invariant {
            cols.push(snf.v.column(i));
        }
    }
    let mut out = IntMatrix::zeros(m.cols(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for i in 0..m.cols() {
            out[(i, j)] = col[i].clone();
        }
    }
    out
}

/// One integer solution of `m x = rhs`, if any.
pub fn integer_solve(m: &IntMatrix, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), rhs.len());
    let snf = smith_normal_form(m);
    let b = snf.u.mul_vec(rhs);
    let min_dim = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < min_dim && !snf.d[i].is_zero() {
            let (q, r) = b[i].div_rem(&snf.d[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !b[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let snf = smith_normal_form(m);
    if snf.d.iter().any(|d| !d.is_one()) {
        return Err(LinAlgError::NotUnimodular);
    }
    // u m v = I  =>  m^{-1} = v u
    Ok(snf.v.mul(&snf.u))
}

/// Basis (square, full-rank) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
    let m = gens.rows();
    let snf = smith_normal_form(gens);
    if snf.rank() < m {
        return Err(LinAlgError::RankDeficient);
    }
    let u_inv = unimodular_inverse(&snf.u)?;
    // Lattice = u^{-1} * diag(d) * Z^m
    let diag = IntMatrix::from_fn(m, m, |i, j| {
        if i == j {
            snf.d[i].clone()
        } else {
            BigInt::zero()
        }
    });
    Ok(u_inv.mul(&diag))
}

/// Invariant factors (> 1, ascending divisibility) of the finite quotient
/// L1 / L2, both lattices given by generating columns and both of full rank.
pub fn quotient_invariants(
    sup_gens: &IntMatrix,
    sub_gens: &IntMatrix,
) -> Result<Vec<BigInt>, LinAlgError> {
    let m = sup_gens.rows();
    assert_eq!(m, sub_gens.rows());
    let basis = lattice_basis(sup_gens)?;
    let snf_b = smith_normal_form(&basis);
    // Express each subgroup generator in the basis: basis * x = g,
    // x = v * d^{-1} * (u g), exact division required.
    let mut x = IntMatrix::zeros(m, sub_gens.cols());
    for c in 0..sub_gens.cols() {
        let g = sub_gens.column(c);
        let b = snf_b.u.mul_vec(&g);
        let mut y = vec![BigInt::zero(); m];
        for i in 0..m {
            let (q, r) = b[i].div_rem(&snf_b.d[i]);
            if !r.is_zero() {
                return Err(LinAlgError::NotASublattice);
            }
            y[i] = q;
        }
        let xc = snf_b.v.mul_vec(&y);
        for i in 0..m {
            x[(i, c)] = xc[i].clone();
        }
    }
    let snf_x = smith_normal_form(&x);
    if snf_x.rank() < m {
        return Err(LinAlgError::RankDeficient);
    }
    Ok(snf_x.d.into_iter().filter(|d| !d.is_one()).collect())
}

/// Solution set of `m x = rhs (mod modulus)` for a prime-power modulus:
/// one particular solution plus a generating set of the solution kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Linear solve over Z/modulus via Smith normal form. The modulus must be a
/// prime power p^k, k >= 1. An inconsistent system yields `Ok(None)`, not an
/// error.
pub fn solve_mod(
    m: &IntMatrix,
    rhs: &[BigInt],
    modulus: &BigInt,
) -> Result<Option<ModSolution>, LinAlgError> {
    if m.rows() != rhs.len() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "matrix has {} rows but rhs has {} entries",
            m.rows(),
            rhs.len()
        )));
    }
    if !is_prime_power(modulus) {
        return Err(LinAlgError::NotPrimePower(modulus.clone()));
    }
    let snf = smith_normal_form(m);
    let b = snf.u.mul_vec(rhs);
    let min_dim = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        let d = if i < min_dim {
            snf.d[i].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !b[i].mod_floor(modulus).is_zero() {
                return Ok(None);
            }
            continue;
        }
        // d y = b (mod M): solvable iff gcd(d, M) | b
        let g = d.gcd(modulus);
        let (bq, br) = b[i].div_rem(&g);
        if !br.is_zero() {
            return Ok(None);
        }
        let m_red = modulus / &g;
        let d_red = (&d / &g).mod_floor(&m_red);
        let inv = mod_inverse(&d_red, &m_red).expect("d/g is a unit mod M/g");
        if i < y.len() {
            y[i] = (bq.mod_floor(&m_red) * inv).mod_floor(&m_red);
        } else if !b[i].mod_floor(modulus).is_zero() {
            return Ok(None);
        }
    }
    let particular: Vec<BigInt> = snf
        .v
        .mul_vec(&y)
        .into_iter()
        .map(|x| x.mod_floor(modulus))
        .collect();

    let mut kernel = Vec::new();
    for i in 0..m.cols() {
        let d = if i < min_dim {
            snf.d[i].clone()
        } else {
            BigInt::zero()
        };
        let g = d.gcd(modulus);
        let step = modulus / &g;
        if &step == modulus {
            // only the zero residue solves d y = 0 in this coordinate
            continue;
        }
        let gen: Vec<BigInt> = snf
            .v
            .column(i)
            .into_iter()
            .map(|x| (x * &step).mod_floor(modulus))
            .collect();
        kernel.push(gen);
    }
    Ok(Some(ModSolution { particular, kernel }))
}

/// Modular inverse, when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Deterministic Miller-Rabin for 64-bit values.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// True iff `m` = p^k with p prime and k >= 1. Values must fit in u64,
/// which covers every modulus this artifact works with.
pub fn is_prime_power(m: &BigInt) -> bool {
    let Some(n) = m.to_u64() else {
        return false;
    };
    if n < 2 {
        return false;
    }
    for k in (1..=63u32).rev() {
        let r = (n as f64).powf(1.0 / k as f64).round() as u64;
        for cand in r.saturating_sub(1)..=r + 1 {
            if cand >= 2 && cand.checked_pow(k).map(|v| v == n).unwrap_or(false) {
                return is_prime_u64(cand);
            }
        }
    }
    false
}

/// Solve a square rational system `a x = b` by Gaussian elimination.
/// Returns None when `a` is singular.
pub fn solve_rational(a: &RatMatrix, b: &[BigRat]) -> Option<Vec<BigRat>> {
    assert!(a.is_square());
    assert_eq!(a.rows(), b.len());
    let n = a.rows();
    let mut w = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n).find(|&i| !w[(i, col)].is_zero())?;
        if piv != col {
            for j in 0..n {
                let t = w[(col, j)].clone();
                w[(col, j)] = w[(piv, j)].clone();
                w[(piv, j)] = t;
            }
            rhs.swap(col, piv);
        }
        let inv = BigRat::one() / w[(col, col)].clone();
        for j in col..n {
            let t = w[(col, j)].clone() * &inv;
            w[(col, j)] = t;
        }
        let t = rhs[col].clone() * &inv;
        rhs[col] = t;
        for i in 0..n {
            if i == col || w[(i, col)].is_zero() {
                continue;
            }
            let f = w[(i, col)].clone();
            for j in col..n {
                let t = w[(i, j)].clone() - w[(col, j)].clone() * &f;
                w[(i, j)] = t;
            }
            let t = rhs[i].clone() - rhs[col].clone() * &f;
            rhs[i] = t;
        }
    }
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = &m[(0, j)] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_identity_cases() {
        let m = RatMatrix::from_int_rows(&[&[7]]);
        assert_eq!(det_exact(&m).unwrap(), rat(7));
        let m = RatMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(det_exact(&m).unwrap(), rat(-2));
        for n in 1..=5 {
            let id = RatMatrix::from_fn(n, n, |i, j| if i == j { rat(1) } else { rat(0) });
            assert_eq!(det_exact(&id).unwrap(), rat(1));
        }
    }

    #[test]
    fn det_rejects_non_square() {
        let m = RatMatrix::zeros(2, 3);
        assert!(matches!(
            det_exact(&m),
            Err(LinAlgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn det_matches_cofactor_oracle_on_small_random_matrices() {
        // Randomized oracle sweep: sizes 1..=4, entries in {-3..3}.
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..500 {
            let n = (trial % 4) + 1;
            let m = IntMatrix::from_fn(n, n, |_, _| big((next() % 7) as i64 - 3));
            let expected = cofactor_det(&m);
            let rm = RatMatrix::from_fn(n, n, |i, j| BigRat::from_integer(m[(i, j)].clone()));
            assert_eq!(det_exact(&rm).unwrap(), BigRat::from_integer(expected));
        }
    }

    #[test]
    fn det_with_fractions() {
        // [[1/2, 1/3], [1/4, 1/5]] -> 1/10 - 1/12 = 1/60
        let m = RatMatrix::from_fn(2, 2, |i, j| {
            BigRat::new(big(1), big([[2, 3], [4, 5]][i][j]))
        });
        assert_eq!(det_exact(&m).unwrap(), BigRat::new(big(1), big(60)));
    }

    fn check_snf(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        // u m v diagonal with the reported d
        let prod = snf.u.mul(m).mul(&snf.v);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i == j && i < snf.d.len() {
                    assert_eq!(prod[(i, j)], snf.d[i]);
                } else {
                    assert!(prod[(i, j)].is_zero(), "off-diagonal residue at {i},{j}");
                }
            }
        }
        // divisibility chain over nonzero invariants
        for w in snf.d.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            }
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zero invariant before nonzero one");
            }
        }
        // transforms unimodular
        assert_eq!(det_bareiss(&snf.u).unwrap().abs(), BigInt::one());
        assert_eq!(det_bareiss(&snf.v).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, vec![big(1), big(6)]);
        check_snf(&m);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = IntMatrix::zeros(3, 3);
        assert_eq!(smith_normal_form(&z).d, vec![big(0), big(0), big(0)]);
        let id = IntMatrix::identity(4);
        assert_eq!(smith_normal_form(&id).d, vec![big(1); 4]);
        check_snf(&z);
        check_snf(&id);
    }

    #[test]
    fn snf_random_shapes() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..200 {
            let r = (trial % 4) + 1;
            let c = ((trial / 4) % 4) + 1;
            let m = IntMatrix::from_fn(r, c, |_, _| big((next() % 21) as i64 - 10));
            check_snf(&m);
        }
    }

    #[test]
    fn solve_mod_examples() {
        // x = 5 mod 9, trivial kernel
        let m = IntMatrix::from_rows(&[&[1]]);
        let sol = solve_mod(&m, &[big(5)], &big(9)).unwrap().unwrap();
        assert_eq!(sol.particular, vec![big(5)]);
        assert!(sol.kernel.is_empty());

        // 3x = 1 mod 9: no solution
        let m = IntMatrix::from_rows(&[&[3]]);
        assert_eq!(solve_mod(&m, &[big(1)], &big(9)).unwrap(), None);

        // 3x = 6 mod 9: x = 2, kernel generated by 3
        let sol = solve_mod(&m, &[big(6)], &big(9)).unwrap().unwrap();
        let brute: Vec<i64> = (0..9).filter(|x| (3 * x) % 9 == 6).collect();
        assert!(brute.contains(&sol.particular[0].to_i64().unwrap()));
        assert_eq!(sol.kernel, vec![vec![big(3)]]);
        // kernel + particular enumerates exactly the brute-force solutions
        let mut enumerated: Vec<i64> = (0..3)
            .map(|t| (sol.particular[0].to_i64().unwrap() + 3 * t) % 9)
            .collect();
        enumerated.sort();
        assert_eq!(enumerated, brute);
    }

    #[test]
    fn solve_mod_rejects_non_prime_power() {
        let m = IntMatrix::from_rows(&[&[1]]);
        assert!(matches!(
            solve_mod(&m, &[big(1)], &big(6)),
            Err(LinAlgError::NotPrimePower(_))
        ));
        assert!(solve_mod(&m, &[big(1)], &big(27)).is_ok());
        assert!(solve_mod(&m, &[big(1)], &big(2)).is_ok());
    }

    #[test]
    fn solve_mod_substitution_property() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let moduli = [big(9), big(27), big(5), big(8), big(125)];
        for trial in 0..200 {
            let rows = (trial % 3) + 1;
            let cols = ((trial / 3) % 3) + 1;
            let m = IntMatrix::from_fn(rows, cols, |_, _| big((next() % 19) as i64 - 9));
            let rhs: Vec<BigInt> = (0..rows).map(|_| big((next() % 19) as i64 - 9)).collect();
            let modulus = &moduli[trial % moduli.len()];
            if let Some(sol) = solve_mod(&m, &rhs, modulus).unwrap() {
                let check = m.mul_vec(&sol.particular);
                for i in 0..rows {
                    assert!(
                        (&check[i] - &rhs[i]).mod_floor(modulus).is_zero(),
                        "particular solution fails"
                    );
                }
                for k in &sol.kernel {
                    for v in m.mul_vec(k) {
                        assert!(v.mod_floor(modulus).is_zero(), "kernel vector fails");
                    }
                }
            }
        }
    }

    #[test]
    fn solve_mod_kernel_generates_all_solutions_small() {
        // exhaustive cross-check on a 2x2 system mod 9
        let m = IntMatrix::from_rows(&[&[3, 6], &[0, 3]]);
        let modulus = big(9);
        let rhs = vec![big(0), big(0)];
        let sol = solve_mod(&m, &rhs, &modulus).unwrap().unwrap();
        let mut brute: Vec<(i64, i64)> = Vec::new();
        for x in 0..9i64 {
            for y in 0..9i64 {
                if (3 * x + 6 * y) % 9 == 0 && (3 * y) % 9 == 0 {
                    brute.push((x, y));
                }
            }
        }
        // span the kernel generators over Z/9 and compare sets
        let mut spanned = std::collections::BTreeSet::new();
        let gens = &sol.kernel;
        let mut coeffs = vec![0i64; gens.len()];
        loop {
            let mut x = 0i64;
            let mut y = 0i64;
            for (c, g) in coeffs.iter().zip(gens) {
                x += c * g[0].to_i64().unwrap();
                y += c * g[1].to_i64().unwrap();
            }
            spanned.insert((x.rem_euclid(9), y.rem_euclid(9)));
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < 9 {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if coeffs.iter().all(|&c| c == 0) {
                break;
            }
        }
        let brute_set: std::collections::BTreeSet<(i64, i64)> = brute.into_iter().collect();
        assert_eq!(spanned, brute_set);
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_rows(&[&[2, 4, 6], &[1, 2, 3]]);
        let k = integer_kernel(&m);
        assert!(k.cols() >= 2);
        for j in 0..k.cols() {
            let v = k.column(j);
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        let sol = integer_solve(&m, &[big(10), big(5)]).unwrap();
        assert_eq!(m.mul_vec(&sol), vec![big(10), big(5)]);
        assert!(integer_solve(&m, &[big(1), big(1)]).is_none());
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        let not_uni = IntMatrix::from_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            unimodular_inverse(&not_uni),
            Err(LinAlgError::NotUnimodular)
        ));
    }

    #[test]
    fn quotient_invariants_of_standard_quotients() {
        // Z^2 / (2Z x 6Z) = Z/2 + Z/6
        let sup = IntMatrix::identity(2);
        let sub = IntMatrix::from_rows(&[&[2, 0], &[0, 6]]);
        assert_eq!(
            quotient_invariants(&sup, &sub).unwrap(),
            vec![big(2), big(6)]
        );
        // trivial quotient
        assert_eq!(quotient_invariants(&sup, &sup).unwrap(), Vec::<BigInt>::new());
        // non-sublattice detected
        let bad = IntMatrix::from_rows(&[&[1, 0], &[0, 1]]);
        let sup2 = IntMatrix::from_rows(&[&[2, 0], &[0, 2]]);
        assert!(quotient_invariants(&sup2, &bad).is_err());
    }

    #[test]
    fn prime_power_detection() {
        assert!(is_prime_power(&big(2)));
        assert!(is_prime_power(&big(9)));
        assert!(is_prime_power(&big(27)));
        assert!(is_prime_power(&big(125)));
        assert!(is_prime_power(&big(13)));
        assert!(!is_prime_power(&big(1)));
        assert!(!is_prime_power(&big(6)));
        assert!(!is_prime_power(&big(100)));
        assert!(!is_prime_power(&big(0)));
    }

    #[test]
    fn rational_solver() {
        let a = RatMatrix::from_int_rows(&[&[2, 1], &[1, 3]]);
        let b = vec![rat(5), rat(10)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        let sing = RatMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(solve_rational(&sing, &[rat(1), rat(2)]).is_none());
    }
}
