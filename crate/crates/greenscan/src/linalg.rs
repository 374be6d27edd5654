//! Exact dense linear algebra over a field.
//!
//! Everything in the core works over exact scalars: `Rat` (arbitrary
//! precision rationals) for the main computations, and small prime fields
//! for the submodule-completeness cross checks. No floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`, the wire format used everywhere.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// The scalar operations the matrix routines need.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Field for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        <Rat as One>::one() / self
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Prime field with a const modulus, used only for cross checking.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp((self.0 * o.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "division by zero in F_{}", P);
        // Fermat: P is a small prime.
        let mut acc = 1u64;
        let mut base = self.0 % P;
        let mut e = P - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

/// Dense row-major matrix over `F`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<F>,
}

pub type RatMat = Mat<Rat>;

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Mat<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, entries: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Mat { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Mat { rows: nr, cols: nc, entries: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.entries[r * self.cols + c]
    }

    pub fn entries_row_major(&self) -> Vec<F> {
        self.entries.clone()
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut F {
        &mut self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        Self::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let p = self.at(r, k).mul(o.at(k, c));
                acc = acc.add(&p);
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).add(o.at(r, c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).sub(o.at(r, c)))
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).mul(s))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).neg())
    }

    /// Horizontal concatenation `[self | o]`.
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols { self.at(r, c).clone() } else { o.at(r, c - self.cols).clone() }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        Self::from_fn(self.rows + o.rows, self.cols, |r, c| {
            if r < self.rows { self.at(r, c).clone() } else { o.at(r - self.rows, c).clone() }
        })
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.at(rows[r], cols[c]).clone())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.entries.swap(row * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = self.at(row, col).inv();
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&f.mul(self.at(row, c)));
                        *self.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, returned as columns.
    pub fn nullspace(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            *basis.at_mut(fc, k) = F::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                *basis.at_mut(pc, k) = m.at(prow, fc).neg();
            }
        }
        basis
    }

    /// Solves `self * X = b` exactly. Returns `None` when inconsistent.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let mut aug = self.hstack(b);
        let pivots = aug.rref();
        // any pivot in the b-part means inconsistent
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zero(self.cols, b.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                *x.at_mut(pc, c) = aug.at(prow, self.cols + c).clone();
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let mut aug = self.hstack(&Self::identity(self.rows));
        let pivots = aug.rref();
        if pivots.len() != self.rows || pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        Some(Self::from_fn(self.rows, self.cols, |r, c| aug.at(r, self.cols + c).clone()))
    }

    /// Determinant by fraction-free-ish Gaussian elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return F::zero();
            };
            if pr != col {
                for c in 0..n {
                    m.entries.swap(col * n + c, pr * n + c);
                }
                det = det.neg();
            }
            det = det.mul(m.at(col, col));
            let inv = m.at(col, col).inv();
            for r in col + 1..n {
                if !m.at(r, col).is_zero() {
                    let f = m.at(r, col).mul(&inv);
                    for c in col..n {
                        let v = m.at(r, c).sub(&f.mul(m.at(col, c)));
                        *m.at_mut(r, c) = v;
                    }
                }
            }
        }
        det
    }

    /// Canonical basis matrix of the column span: columns are the RREF rows
    /// of the transpose. Two matrices have equal column span iff the results
    /// are equal.
    pub fn span_canonical(&self) -> Self {
        let mut t = self.transpose();
        let pivots = t.rref();
        Self::from_fn(self.rows, pivots.len(), |r, c| t.at(c, r).clone())
    }
}

impl RatMat {
    pub fn from_i64(rows: Vec<Vec<i64>>) -> Self {
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    /// Entrywise reduction mod p, for the finite-field cross checks.
    pub fn to_fp<const P: u64>(&self) -> Option<Mat<Fp<P>>> {
        let mut out = Mat::zero(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c);
                let d = e.denom();
                let p = BigInt::from(P);
                if (d % &p).is_zero() {
                    return None; // denominator not invertible mod p
                }
                let dn: BigInt = d % &p;
                let nn: BigInt = e.numer() % &p;
                let dn = ((dn % &p) + &p) % &p;
                let nn = ((nn % &p) + &p) % &p;
                let num = Fp::<P>(u64::try_from(&nn).unwrap());
                let den = Fp::<P>(u64::try_from(&dn).unwrap());
                *out.at_mut(r, c) = num.mul(&den.inv());
            }
        }
        Some(out)
    }
}

/// Dot product of two rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[Rat], b: &[i64]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, &y)| x * rat(y)).sum()
}

/// Sign of a rational: -1, 0, 1.
pub fn sign(r: &Rat) -> i32 {
    if Zero::is_zero(r) {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
