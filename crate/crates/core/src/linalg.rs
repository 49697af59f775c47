//! Exact dense linear algebra over a prime field or the rationals.
//!
//! Every scalar is exact: prime-field elements are canonical representatives
//! in `[0, p)`, rationals are arbitrary-precision reduced fractions. No
//! rounding happens anywhere, so rank/kernel/solve answers are decisions,
//! not estimates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// The default prime: large enough that p > dim for desk-scale algebras
/// (trace-form radical computations need that) and that randomized
/// isomorphism search fails with probability at most dim/p per trial.
pub const DEFAULT_PRIME: u64 = 32003;

/// Coefficient field: `F_p` for a prime `p`, or `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(DEFAULT_PRIME)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Prime-mode values are already reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Prime(u64),
    Rational(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime(v) => write!(f, "{v}"),
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FieldSpec {
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            FieldSpec::Prime(p) if !is_prime(*p) => Err(Error::NotPrime(*p)),
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Prime(0),
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Prime(1),
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let p = *p as i128;
                let r = ((x as i128 % p) + p) % p;
                Scalar::Prime(r as u64)
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(x))),
        }
    }

    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar, Error> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldSpec::Prime(_) => {
                let d = self.from_i64(den);
                let inv = self.inv(&d).ok_or(Error::DivisionByZero)?;
                Ok(self.mul(&self.from_i64(num), &inv))
            }
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Prime(v) => *v == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => Scalar::Prime((x + y) % p),
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            _ => panic!("scalar/field mode mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime((x + p - y) % p)
            }
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x - y)
            }
            _ => panic!("scalar/field mode mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            _ => panic!("scalar/field mode mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Prime(x)) => {
                Scalar::Prime(if *x == 0 { 0 } else { p - x })
            }
            (FieldSpec::Rational, Scalar::Rational(x)) => Scalar::Rational(-x),
            _ => panic!("scalar/field mode mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Prime(x)) => {
                // Fermat: x^(p-2) mod p.
                let mut base = *x as u128;
                let m = *p as u128;
                let mut exp = m - 2;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Some(Scalar::Prime(acc as u64))
            }
            (FieldSpec::Rational, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            _ => panic!("scalar/field mode mismatch"),
        }
    }

    /// Scalar as a small signed integer when it has one (for reports).
    pub fn to_small_int(&self, a: &Scalar) -> Option<i64> {
        match a {
            Scalar::Prime(v) => {
                let FieldSpec::Prime(p) = self else {
                    return None;
                };
                if *v <= p / 2 {
                    Some(*v as i64)
                } else {
                    Some(*v as i64 - *p as i64)
                }
            }
            Scalar::Rational(r) => {
                if r.denom().is_one() && r.numer().abs() <= BigInt::from(i64::MAX) {
                    Some(r.numer().try_into().ok()?)
                } else {
                    None
                }
            }
        }
    }
}

/// Dense matrix over an exact field, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_entries(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    /// Integer literals, handy in tests and parsers.
    pub fn from_rows_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in row {
                data.push(field.from_i64(x));
            }
        }
        Matrix::from_entries(field, r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Matrix::from_entries(self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Matrix::from_entries(self.field, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Matrix::from_entries(self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix::from_entries(self.field, self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(i, j), &f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product, row-major blocks: `(A⊗B)[(i*rb+k),(j*cb+l)] = A[i,j]·B[k,l]`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = f.mul(a, other.get(k, l));
                        out.set(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m.set(i, j, col[i].clone());
            }
        }
        m
    }

    /// Columns `idx` of `self`, as a new matrix.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !f.is_zero(a) && !f.is_zero(&v[j]) {
                    out[i] = f.add(&out[i], &f.mul(a, &v[j]));
                }
            }
        }
        out
    }

    /// Row echelon reduction (Gauss-Jordan to RREF). Pivoting: first nonzero
    /// entry in column order, so results are deterministic.
    pub fn row_reduce(&self) -> Reduced {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, col))) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(r, col)).expect("pivot nonzero");
            for j in col..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, col)) {
                    continue;
                }
                let c = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&c, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        Reduced { rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().pivots.len()
    }

    /// Columns spanning the null space `{x : self·x = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let red = self.row_reduce();
        let pivots = &red.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = Matrix::zeros(f, self.cols, free.len());
        for (k, &j) in free.iter().enumerate() {
            out.set(j, k, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                let v = red.rref.get(r, j);
                if !f.is_zero(v) {
                    out.set(pc, k, f.neg(v));
                }
            }
        }
        out
    }

    /// Indices of a maximal independent subset of columns (the pivot columns).
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.row_reduce().pivots
    }

    /// Column-space basis: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Matrix {
        let idx = self.pivot_columns();
        self.select_columns(&idx)
    }

    /// Solves `self · X = b` columnwise. `Ok(None)` when some column of `b`
    /// is outside the image; the second component spans the kernel.
    pub fn solve(&self, b: &Matrix) -> Result<Option<(Matrix, Matrix)>, Error> {
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch {
                expected: self.rows,
                got: b.rows,
            });
        }
        let f = self.field;
        let aug = self.hstack(b);
        let red = aug.row_reduce();
        // Any pivot landing in the b-part means inconsistency.
        if red.pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (r, &pc) in red.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, red.rref.get(r, self.cols + j).clone());
            }
        }
        Ok(Some((x, self.kernel_basis())))
    }

    /// Unique solution expected (columns of `self` independent); panics otherwise.
    pub fn solve_unique(&self, b: &Matrix) -> Matrix {
        let (x, _) = self
            .solve(b)
            .expect("shape checked by caller")
            .expect("system must be consistent");
        x
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let red = self.hstack(&Matrix::identity(self.field, n)).row_reduce();
        if red.pivots.len() != n || red.pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(red.rref.select_columns(&idx))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// Result of row reduction: the RREF and its pivot column indices.
pub struct Reduced {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
}

/// Data for the quotient of `k^n` by the column span of `sub`:
/// `proj · section = id` on the quotient and `ker(proj) = span(sub)`.
pub struct Quotient {
    pub proj: Matrix,
    pub section: Matrix,
    /// Basis of the subspace that was quotiented out (pivot columns of `sub`).
    pub sub_basis: Matrix,
}

/// Quotient of the ambient space `k^n` (n = `sub.rows()`) by the span of the
/// columns of `sub`. The section picks standard basis vectors extending the
/// subspace basis, so everything is deterministic.
pub fn quotient_by_span(sub: &Matrix) -> Quotient {
    let f = sub.field();
    let n = sub.rows();
    let basis = sub.image_basis();
    let r = basis.cols();
    let aug = basis.hstack(&Matrix::identity(f, n));
    let red = aug.row_reduce();
    let ext: Vec<usize> = red
        .pivots
        .iter()
        .filter(|&&c| c >= r)
        .map(|&c| c - r)
        .collect();
    assert_eq!(ext.len(), n - r, "independent columns expected");
    let mut section = Matrix::zeros(f, n, n - r);
    for (k, &i) in ext.iter().enumerate() {
        section.set(i, k, f.one());
    }
    let change = basis.hstack(&section);
    let inv = change.inverse().expect("completed basis is invertible");
    let mut proj = Matrix::zeros(f, n - r, n);
    for i in 0..n - r {
        for j in 0..n {
            proj.set(i, j, inv.get(r + i, j).clone());
        }
    }
    Quotient {
        proj,
        section,
        sub_basis: basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp() -> FieldSpec {
        FieldSpec::Prime(DEFAULT_PRIME)
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(Matrix::identity(fp(), 3).rank(), 3);
        assert_eq!(Matrix::zeros(fp(), 2, 5).rank(), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        let m = Matrix::from_rows_i64(fp(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_identity_empty_zero_full() {
        let id = Matrix::identity(fp(), 4);
        assert_eq!(id.kernel_basis().cols(), 0);
        let z = Matrix::zeros(fp(), 3, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k, Matrix::identity(fp(), 3));
    }

    #[test]
    fn kernel_of_sum_row() {
        // x + y = 0 has kernel spanned by (1, -1).
        let m = Matrix::from_rows_i64(fp(), &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let expected = Matrix::from_rows_i64(fp(), &[vec![1], vec![-1]]);
        assert_eq!(k.hstack(&expected).rank(), 1, "same line as (1, -1)");
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = Matrix::identity(fp(), 3);
        let b = Matrix::from_rows_i64(fp(), &[vec![5], vec![7], vec![9]]);
        let (x, k) = id.solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        assert_eq!(k.cols(), 0);

        let z = Matrix::zeros(fp(), 2, 2);
        let b = Matrix::from_rows_i64(fp(), &[vec![1], vec![0]]);
        assert!(z.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let m = Matrix::from_rows_i64(fp(), &[vec![1, 1], vec![0, 0]]);
        let b = Matrix::from_rows_i64(fp(), &[vec![2], vec![0]]);
        let (x, k) = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul(&x), b);
        assert_eq!(*x.get(0, 0), fp().from_i64(2));
        assert_eq!(*x.get(1, 0), fp().from_i64(0));
        assert_eq!(k.cols(), 1);
        let expected = Matrix::from_rows_i64(fp(), &[vec![1], vec![-1]]);
        assert_eq!(k.hstack(&expected).rank(), 1, "kernel is the line (1, -1)");
    }

    #[test]
    fn solve_shape_mismatch() {
        let m = Matrix::identity(fp(), 2);
        let b = Matrix::zeros(fp(), 3, 1);
        assert!(matches!(m.solve(&b), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn quotient_by_span_projects() {
        let f = fp();
        let sub = Matrix::from_rows_i64(f, &[vec![1], vec![1], vec![0]]);
        let q = quotient_by_span(&sub);
        assert_eq!(q.proj.rows(), 2);
        assert!(q.proj.mul(&sub).is_zero());
        let comp = q.proj.mul(&q.section);
        assert_eq!(comp, Matrix::identity(f, 2));
    }

    #[test]
    fn rational_mode_cross_check() {
        let f = FieldSpec::Rational;
        let m = Matrix::from_rows_i64(f, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        let half = f.from_fraction(1, 2).unwrap();
        assert_eq!(f.mul(&half, &f.from_i64(2)), f.one());
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-20i64..20, r * c).prop_map(move |v| {
                let f = FieldSpec::Prime(DEFAULT_PRIME);
                let data = v.into_iter().map(|x| f.from_i64(x)).collect();
                Matrix::from_entries(f, r, c, data)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_reproduces_rhs(m in matrix_strategy(), seed in 0u64..1000) {
            // Take b in the image by construction, then solve must hit it.
            let f = m.field();
            let mut x = Matrix::zeros(f, m.cols(), 1);
            for i in 0..m.cols() {
                x.set(i, 0, f.from_i64((seed as i64).wrapping_mul(i as i64 + 1) % 17));
            }
            let b = m.mul(&x);
            let sol = m.solve(&b).unwrap();
            prop_assert!(sol.is_some());
            let (p, _) = sol.unwrap();
            prop_assert_eq!(m.mul(&p), b);
        }

        #[test]
        fn prime_field_axioms(a in 1i64..32002, b in -1000i64..1000, c in -1000i64..1000) {
            let f = FieldSpec::Prime(DEFAULT_PRIME);
            let (x, y, z) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
            prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
            // a^(p-1) = 1 for a != 0.
            let inv = f.inv(&x).unwrap();
            prop_assert_eq!(f.mul(&x, &inv), f.one());
        }
    }
}
