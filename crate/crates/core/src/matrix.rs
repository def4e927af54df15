//! Dense exact matrices over Q or F_p.
//!
//! Every matrix carries its [`FieldSpec`]. Storage is specialised per field
//! (`BigRational` or machine residues), and the elimination routines are
//! written once against the small [`Arith`] trait.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{mod_inverse, FieldSpec, Scalar};

trait Arith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct Q;

impl Arith for Q {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

struct Fp(u64);

impl Arith for Fp {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.0 - *b as u64) % self.0) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.0) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        ((self.0 - *a as u64) % self.0) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        mod_inverse(*a as u64, self.0) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Entries {
    Rational(Vec<BigRational>),
    Prime(Vec<u32>),
}

/// Dense row-major matrix with entries in a fixed field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Entries,
}

/// Runs `$body` with `$a` bound to the field arithmetic and `$d` to the
/// matching entry vector of `$m`.
macro_rules! with_arith {
    ($m:expr, |$a:ident, $d:ident| $body:expr) => {
        match (&$m.entries, $m.field) {
            (Entries::Rational($d), _) => {
                let $a = Q;
                $body
            }
            (Entries::Prime($d), FieldSpec::Prime(p)) => {
                let $a = Fp(p as u64);
                $body
            }
            _ => unreachable!("entry storage does not match field"),
        }
    };
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let entries = match field {
            FieldSpec::Rational => Entries::Rational(vec![BigRational::zero(); rows * cols]),
            FieldSpec::Prime(_) => Entries::Prime(vec![0; rows * cols]),
        };
        Matrix { rows, cols, field, entries }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, &field.one());
        }
        m
    }

    /// Builds a matrix from row-major integer values.
    ///
    /// Panics if `values.len() != rows * cols`.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "wrong number of entries");
        let entries = match field {
            FieldSpec::Rational => {
                Entries::Rational(values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
            }
            FieldSpec::Prime(p) => Entries::Prime(values.iter().map(|&v| v.rem_euclid(p as i64) as u32).collect()),
        };
        Matrix { rows, cols, field, entries }
    }

    /// Builds a matrix over F_p from residues already reduced mod p.
    pub fn from_residues(p: u32, rows: usize, cols: usize, values: Vec<u32>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", values.len())));
        }
        if let Some(v) = values.iter().find(|&&v| v >= p) {
            return Err(Error::NotInField { value: v.to_string(), field: format!("F_{p}") });
        }
        Ok(Matrix { rows, cols, field: FieldSpec::Prime(p), entries: Entries::Prime(values) })
    }

    pub fn from_scalars(field: FieldSpec, rows: usize, cols: usize, values: &[Scalar]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", values.len())));
        }
        let mut m = Self::zeros(field, rows, cols);
        for (idx, v) in values.iter().enumerate() {
            if !field.contains(v) {
                return Err(Error::MixedField);
            }
            m.set(idx / cols, idx % cols, v);
        }
        Ok(m)
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

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        match &self.entries {
            Entries::Rational(d) => Scalar::Rational(d[r * self.cols + c].clone()),
            Entries::Prime(d) => Scalar::Mod(d[r * self.cols + c]),
        }
    }

    /// Panics if `v` does not belong to the matrix field.
    pub fn set(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let idx = r * self.cols + c;
        match (&mut self.entries, v) {
            (Entries::Rational(d), Scalar::Rational(x)) => d[idx] = x.clone(),
            (Entries::Prime(d), Scalar::Mod(x)) => {
                assert!(self.field.contains(v), "residue out of range");
                d[idx] = *x
            }
            _ => panic!("scalar from a different field"),
        }
    }

    /// Row-major entries as scalars.
    pub fn scalars(&self) -> Vec<Scalar> {
        match &self.entries {
            Entries::Rational(d) => d.iter().cloned().map(Scalar::Rational).collect(),
            Entries::Prime(d) => d.iter().copied().map(Scalar::Mod).collect(),
        }
    }

    /// Raw residues for matrices over F_p.
    pub fn residues(&self) -> Option<&[u32]> {
        match &self.entries {
            Entries::Prime(d) => Some(d),
            Entries::Rational(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        with_arith!(self, |a, d| d.iter().all(|x| a.is_zero(x)))
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Rational(d) => {
                Entries::Rational((0..r * c).map(|idx| d[(idx % r) * c + idx / r].clone()).collect())
            }
            Entries::Prime(d) => Entries::Prime((0..r * c).map(|idx| d[(idx % r) * c + idx / r]).collect()),
        };
        Matrix { rows: c, cols: r, field: self.field, entries }
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            Err(Error::MixedField)
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, m, l) = (self.rows, self.cols, rhs.cols);
        let entries = match (&self.entries, &rhs.entries, self.field) {
            (Entries::Rational(x), Entries::Rational(y), _) => Entries::Rational(mul_generic(&Q, x, y, n, m, l)),
            (Entries::Prime(x), Entries::Prime(y), FieldSpec::Prime(p)) => {
                Entries::Prime(mul_generic(&Fp(p as u64), x, y, n, m, l))
            }
            _ => unreachable!(),
        };
        Ok(Matrix { rows: n, cols: l, field: self.field, entries })
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, false)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, true)
    }

    fn zip(&self, rhs: &Matrix, subtract: bool) -> Result<Matrix> {
        self.check_field(rhs)?;
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        fn go<A: Arith>(a: &A, x: &[A::E], y: &[A::E], subtract: bool) -> Vec<A::E> {
            x.iter().zip(y).map(|(u, v)| if subtract { a.sub(u, v) } else { a.add(u, v) }).collect()
        }
        let entries = match (&self.entries, &rhs.entries, self.field) {
            (Entries::Rational(x), Entries::Rational(y), _) => Entries::Rational(go(&Q, x, y, subtract)),
            (Entries::Prime(x), Entries::Prime(y), FieldSpec::Prime(p)) => {
                Entries::Prime(go(&Fp(p as u64), x, y, subtract))
            }
            _ => unreachable!(),
        };
        Ok(Matrix { rows: self.rows, cols: self.cols, field: self.field, entries })
    }

    pub fn neg(&self) -> Matrix {
        let entries = with_arith!(self, |a, d| wrap(d.iter().map(|x| a.neg(x)).collect::<Vec<_>>()));
        Matrix { entries, ..self.clone() }
    }

    /// Horizontal concatenation `[M_1 | M_2 | ...]`.
    pub fn hconcat(blocks: &[&Matrix]) -> Result<Matrix> {
        let first = blocks.first().ok_or(Error::EmptyInput("no blocks to concatenate"))?;
        for b in blocks {
            first.check_field(b)?;
            if b.rows != first.rows {
                return Err(Error::MixedAmbient(first.rows, b.rows));
            }
        }
        let rows = first.rows;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(first.field, rows, cols);
        let mut offset = 0;
        for b in blocks {
            for r in 0..rows {
                for c in 0..b.cols {
                    out.copy_entry(r, offset + c, b, r, c);
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vconcat(blocks: &[&Matrix]) -> Result<Matrix> {
        let ts: Vec<Matrix> = blocks.iter().map(|b| b.transpose()).collect();
        let refs: Vec<&Matrix> = ts.iter().collect();
        match Matrix::hconcat(&refs) {
            Ok(m) => Ok(m.transpose()),
            Err(Error::MixedAmbient(a, b)) => {
                Err(Error::ShapeMismatch(format!("cannot stack blocks with {a} and {b} columns")))
            }
            Err(e) => Err(e),
        }
    }

    fn copy_entry(&mut self, r: usize, c: usize, src: &Matrix, sr: usize, sc: usize) {
        let (di, si) = (r * self.cols + c, sr * src.cols + sc);
        match (&mut self.entries, &src.entries) {
            (Entries::Rational(d), Entries::Rational(s)) => d[di] = s[si].clone(),
            (Entries::Prime(d), Entries::Prime(s)) => d[di] = s[si],
            _ => unreachable!(),
        }
    }

    /// Sub-matrix of the given column range.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        assert!(range.end <= self.cols);
        let mut out = Matrix::zeros(self.field, self.rows, range.len());
        for r in 0..self.rows {
            for (c, sc) in range.clone().enumerate() {
                out.copy_entry(r, c, self, r, sc);
            }
        }
        out
    }

    /// Sub-matrix of the given row range.
    pub fn row_range(&self, range: std::ops::Range<usize>) -> Matrix {
        assert!(range.end <= self.rows);
        let mut out = Matrix::zeros(self.field, range.len(), self.cols);
        for (r, sr) in range.enumerate() {
            for c in 0..self.cols {
                out.copy_entry(r, c, self, sr, c);
            }
        }
        out
    }

    /// Reduced row-echelon form and pivot columns (strictly increasing).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut out = self.clone();
        let pivots = match (&mut out.entries, out.field) {
            (Entries::Rational(d), _) => rref_generic(&Q, self.rows, self.cols, d),
            (Entries::Prime(d), FieldSpec::Prime(p)) => rref_generic(&Fp(p as u64), self.rows, self.cols, d),
            _ => unreachable!(),
        };
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one column per free variable of the
    /// reduced row-echelon form. `M * K = 0` and `K` has `cols - rank` columns.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        let one = self.field.one();
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, &one);
            for (row, &pc) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if !v.is_zero() {
                    k.set(pc, j, &negate(self.field, &v));
                }
            }
        }
        k
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = Matrix::hconcat(&[self, &Matrix::identity(self.field, n)])?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(Error::Singular);
        }
        Ok(r.columns(n..2 * n))
    }

    /// Canonical basis of the column space: the transpose of the rref of the
    /// transpose, with zero columns dropped. Equal column spaces give equal
    /// matrices.
    pub fn column_echelon_basis(&self) -> Matrix {
        let (r, pivots) = self.transpose().rref();
        r.row_range(0..pivots.len()).transpose()
    }

    /// Pivot rows of a matrix in canonical column-echelon form.
    pub(crate) fn column_pivots(&self) -> Vec<usize> {
        (0..self.cols).map(|c| (0..self.rows).find(|&r| !self.get(r, c).is_zero()).expect("zero column")).collect()
    }
}

fn negate(field: FieldSpec, v: &Scalar) -> Scalar {
    match (field, v) {
        (_, Scalar::Rational(x)) => Scalar::Rational(-x),
        (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
        _ => unreachable!(),
    }
}

trait Wrap {
    fn wrap(self) -> Entries;
}

impl Wrap for Vec<BigRational> {
    fn wrap(self) -> Entries {
        Entries::Rational(self)
    }
}

impl Wrap for Vec<u32> {
    fn wrap(self) -> Entries {
        Entries::Prime(self)
    }
}

fn wrap<W: Wrap>(w: W) -> Entries {
    w.wrap()
}

fn mul_generic<A: Arith>(a: &A, x: &[A::E], y: &[A::E], n: usize, m: usize, l: usize) -> Vec<A::E> {
    let mut out = vec![a.zero(); n * l];
    for i in 0..n {
        for t in 0..m {
            let xv = &x[i * m + t];
            if a.is_zero(xv) {
                continue;
            }
            for j in 0..l {
                let prod = a.mul(xv, &y[t * l + j]);
                out[i * l + j] = a.add(&out[i * l + j], &prod);
            }
        }
    }
    out
}

/// In-place Gauss-Jordan elimination; returns pivot columns.
fn rref_generic<A: Arith>(a: &A, rows: usize, cols: usize, d: &mut [A::E]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a.is_zero(&d[r * cols + col])) else {
            continue;
        };
        if p != row {
            for c in 0..cols {
                d.swap(p * cols + c, row * cols + c);
            }
        }
        let inv = a.inv(&d[row * cols + col]);
        for c in col..cols {
            d[row * cols + c] = a.mul(&d[row * cols + c], &inv);
        }
        for r in 0..rows {
            if r == row || a.is_zero(&d[r * cols + col]) {
                continue;
            }
            let factor = d[r * cols + col].clone();
            for c in col..cols {
                let delta = a.mul(&factor, &d[row * cols + c]);
                d[r * cols + c] = a.sub(&d[r * cols + c], &delta);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn check_ambient(ms: &[Matrix]) -> Result<()> {
    let first = ms.first().ok_or(Error::EmptyInput("no matrices given"))?;
    for m in ms {
        if m.field != first.field {
            return Err(Error::MixedField);
        }
        if m.rows != first.rows {
            return Err(Error::MixedAmbient(first.rows, m.rows));
        }
    }
    Ok(())
}

/// Canonical basis of the sum of the column spans.
pub fn column_span_sum(ms: &[Matrix]) -> Result<Matrix> {
    check_ambient(ms)?;
    let refs: Vec<&Matrix> = ms.iter().collect();
    Ok(Matrix::hconcat(&refs)?.column_echelon_basis())
}

/// Canonical basis of the intersection of the column spans.
///
/// Pairs are intersected through the kernel of `[A | -B]`: a kernel vector
/// `(y, z)` gives the common vector `A y = B z`.
pub fn column_span_intersection(ms: &[Matrix]) -> Result<Matrix> {
    check_ambient(ms)?;
    let mut acc = ms[0].column_echelon_basis();
    for m in &ms[1..] {
        let b = m.column_echelon_basis();
        if acc.cols == 0 || b.cols == 0 {
            return Ok(Matrix::zeros(acc.field, acc.rows, 0));
        }
        let k = Matrix::hconcat(&[&acc, &b.neg()])?.kernel();
        let y = k.row_range(0..acc.cols);
        acc = acc.mul(&y)?.column_echelon_basis();
    }
    Ok(acc)
}
