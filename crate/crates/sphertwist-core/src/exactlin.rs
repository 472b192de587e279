//! Exact linear algebra over the rationals and prime fields.
//!
//! Vectors are rows. A matrix `m` acts on a row vector `v` by `v · m`, and
//! subspaces are carried as reduced row echelon bases.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("entries from different fields ({0} and {1})")]
    FieldMismatch(Field, Field),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl Field {
    /// The prime field with `p` elements; `p` must be prime and below 2^32.
    pub fn prime(p: u64) -> Result<Field, LinError> {
        if !(2..(1 << 32)).contains(&p) || !is_prime(p) {
            return Err(LinError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { value: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod { value: n.rem_euclid(*p as i64) as u64, p: *p },
        }
    }

    /// The image of the rational number `num/den` in this field.
    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<Scalar, LinError> {
        if den.is_zero() {
            return Err(LinError::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |x: &BigInt| -> u64 {
                    let m = BigInt::from(*p);
                    let r = ((x % &m) + &m) % &m;
                    r.to_u64().unwrap_or(0)
                };
                let n = Scalar::Mod { value: reduce(&num), p: *p };
                let d = Scalar::Mod { value: reduce(&den), p: *p };
                Ok(&n * &d.inv()?)
            }
        }
    }

    /// Parses an integer or a fraction such as `"-3/7"`.
    pub fn parse(&self, text: &str) -> Result<Scalar, LinError> {
        let t = text.trim();
        let err = || LinError::Parse(text.to_string());
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| err())?;
        let den: BigInt = d.parse().map_err(|_| err())?;
        self.from_ratio(num, den)
    }

    pub fn vec_zero(&self, n: usize) -> Vec<Scalar> {
        vec![self.zero(); n]
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = self.vec_zero(n);
        v[i] = self.one();
        v
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar, LinError> {
        if self.is_zero() {
            return Err(LinError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { value, p } => Scalar::Mod { value: pow_mod(*value, p - 2, *p), p: *p },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, LinError> {
        Ok(self * &other.inv()?)
    }

    fn same_field(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!("arithmetic between {} and {}", self.field(), other.field());
        }
    }

    /// `self += a * b`, the inner step of every elimination.
    pub fn add_mul_assign(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        match (&mut *self, a, b) {
            (Scalar::Mod { value, p }, Scalar::Mod { value: x, .. }, Scalar::Mod { value: y, .. }) => {
                *value = (*value + x * y % *p) % *p;
            }
            (Scalar::Rat(s), Scalar::Rat(x), Scalar::Rat(y)) => {
                *s += x * y;
            }
            _ => panic!("arithmetic between different fields"),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.same_field(o);
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod { value: (a + b) % p, p: *p },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.same_field(o);
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod { value: (a + p - b) % p, p: *p },
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.same_field(o);
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod { value: a * b % p, p: *p },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, p } => Scalar::Mod { value: (p - value) % p, p: *p },
        }
    }
}

impl Scalar {
    /// Absolute height of a rational (max of |numerator|, denominator); used for
    /// choosing small pivots deterministically.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Rat(r) => {
                let n = r.numer().abs().to_u64().unwrap_or(u64::MAX);
                let d = r.denom().to_u64().unwrap_or(u64::MAX);
                n.max(d)
            }
            Scalar::Mod { .. } => 1,
        }
    }
}

pub type Vector = Vec<Scalar>;

/// `dst += c * src`.
pub fn axpy(dst: &mut [Scalar], c: &Scalar, src: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        d.add_mul_assign(c, s);
    }
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_scale(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar], field: Field) -> Scalar {
    let mut s = field.zero();
    for (x, y) in a.iter().zip(b) {
        s.add_mul_assign(x, y);
    }
    s
}

/// A dense matrix with entries in a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting mixed fields.
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix, LinError> {
        if entries.len() != rows * cols {
            return Err(LinError::ShapeError(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(LinError::FieldMismatch(field, bad.field()));
        }
        Ok(Matrix { rows, cols, field, data: entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Stacks row vectors of length `cols`.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vector>) -> Matrix {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, field, data }
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        let vs = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Matrix::from_rows(field, cols, vs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Scalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// Row-major flattening.
    pub fn to_vector(&self) -> Vector {
        self.data.clone()
    }

    pub fn from_vector(field: Field, rows: usize, cols: usize, v: Vector) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix { rows, cols, field, data: v }
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinError> {
        if self.field != other.field {
            return Err(LinError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinError::ShapeError(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                axpy(dst, a, other.row(k));
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on incompatible shapes or fields.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("matrix product")
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = self.field.vec_zero(self.cols);
        for (k, a) in v.iter().enumerate() {
            if !a.is_zero() {
                axpy(&mut out, a, self.row(k));
            }
        }
        out
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, LinError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinError::ShapeError("sum of differently shaped matrices".into()));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, field: self.field, data: vec_add(&self.data, &other.data) })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.try_add(other).expect("matrix sum")
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data: vec_sub(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data: vec_scale(&self.data, c) }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(&mut self.data, c, &other.data);
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row counts");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let r = out.row_mut(i);
            r[..self.cols].clone_from_slice(self.row(i));
            r[self.cols..].clone_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].clone_from_slice(self.row(i));
        }
        for i in 0..other.rows {
            out.row_mut(self.rows + i)[self.cols..].clone_from_slice(other.row(i));
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let vs = rows.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(self.field, self.cols, vs)
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, r1 - r0, c1 - c0);
        for i in r0..r1 {
            out.row_mut(i - r0).clone_from_slice(&self.row(i)[c0..c1]);
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut space = RowSpace::new(self.field, self.cols);
        for i in 0..self.rows {
            space.insert(self.row(i).to_vec());
        }
        space.dim()
    }

    /// Columns spanning the null space `{x : self · x = 0}`, in canonical form.
    pub fn kernel_basis(&self) -> Matrix {
        let rows = column_kernel_rows(self);
        canonical_rows(self.field, self.cols, rows).transpose()
    }

    /// Columns spanning the column space, in canonical form.
    pub fn image_basis(&self) -> Matrix {
        let t = self.transpose();
        let basis = t.row_space();
        basis.transpose()
    }

    /// Reduced echelon basis of the row space (zero rows dropped).
    pub fn row_space(&self) -> Matrix {
        let (r, p) = self.rref();
        r.select_rows(&(0..p.len()).collect::<Vec<_>>())
    }

    /// Rows `v` with `v · self = 0`, reduced echelon form.
    pub fn left_kernel(&self) -> Matrix {
        let rows = column_kernel_rows(&self.transpose());
        canonical_rows(self.field, self.rows, rows)
    }

    /// Some `x` with `self · x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>, LinError> {
        if b.len() != self.rows {
            return Err(LinError::ShapeError(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        if let Some(bad) = b.iter().find(|x| x.field() != self.field) {
            return Err(LinError::FieldMismatch(self.field, bad.field()));
        }
        let bcol = Matrix::from_vector(self.field, self.rows, 1, b.to_vec());
        let aug = self.hstack(&bcol);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = self.field.vec_zero(self.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solves `v · self = b` for a row vector `v`.
    pub fn solve_left(&self, b: &[Scalar]) -> Option<Vector> {
        self.transpose().solve(b).expect("shape checked by caller")
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (r, p) = aug.rref();
        if p.len() < n || p[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, 2 * n))
    }

    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = a * b;
                    }
                }
            }
        }
        out
    }
}

fn rref_in_place(m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = m.get(r, c).inv().expect("nonzero pivot");
        for j in 0..cols {
            let v = &m.data[r * cols + j] * &inv;
            m.data[r * cols + j] = v;
        }
        let pivot_row: Vector = m.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            let nf = -&f;
            axpy(m.row_mut(i), &nf, &pivot_row);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Null space vectors of `m` (as rows), one per free column.
fn column_kernel_rows(m: &Matrix) -> Vec<Vector> {
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in 0..m.cols {
        if is_pivot[f] {
            continue;
        }
        let mut x = m.field.vec_zero(m.cols);
        x[f] = m.field.one();
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = -r.get(i, f);
        }
        out.push(x);
    }
    out
}

fn canonical_rows(field: Field, cols: usize, rows: Vec<Vector>) -> Matrix {
    let mut space = RowSpace::new(field, cols);
    for v in rows {
        space.insert(v);
    }
    space.basis_matrix()
}

pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    m.rref()
}

pub fn kernel_basis(m: &Matrix) -> Matrix {
    m.kernel_basis()
}

pub fn image_basis(m: &Matrix) -> Matrix {
    m.image_basis()
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vector>, LinError> {
    m.solve(b)
}

pub fn kronecker(a: &Matrix, b: &Matrix) -> Result<Matrix, LinError> {
    a.check_field(b)?;
    Ok(a.kronecker(b))
}

/// Basis (as columns) of the intersection of the column spans of `u` and `v`.
pub fn intersect_subspaces(u: &Matrix, v: &Matrix) -> Result<Matrix, LinError> {
    u.check_field(v)?;
    if u.rows != v.rows {
        return Err(LinError::ShapeError(format!("subspaces of dimension-{} and dimension-{} spaces", u.rows, v.rows)));
    }
    let a = RowSpace::from_rows(u.field, u.rows, u.transpose().row_vectors());
    let b = RowSpace::from_rows(v.field, v.rows, v.transpose().row_vectors());
    Ok(a.intersect(&b).basis_matrix().transpose())
}

/// A subspace of `field^cols` kept as a reduced row echelon basis, grown one
/// vector at a time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpace {
    field: Field,
    cols: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Field, cols: usize) -> RowSpace {
        RowSpace { field, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(field: Field, cols: usize, rows: impl IntoIterator<Item = Vector>) -> RowSpace {
        let mut s = RowSpace::new(field, cols);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn from_matrix(m: &Matrix) -> RowSpace {
        RowSpace::from_rows(m.field, m.cols, m.row_vectors())
    }

    pub fn full(field: Field, cols: usize) -> RowSpace {
        RowSpace::from_rows(field, cols, (0..cols).map(|i| field.unit_vector(cols, i)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.cols, self.rows.clone())
    }

    /// The remainder of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if w[pc].is_zero() {
                continue;
            }
            let f = -&w[pc];
            axpy(&mut w, &f, row);
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Coordinates without the membership check.
    pub fn coords_unchecked(&self, v: &[Scalar]) -> Vector {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut w = self.reduce(&v);
        let Some(q) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[q].inv().expect("nonzero");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[q].is_zero() {
                continue;
            }
            let f = -&row[q];
            axpy(row, &f, &w);
        }
        let pos = self.pivots.partition_point(|&p| p < q);
        self.pivots.insert(pos, q);
        self.rows.insert(pos, w);
        true
    }

    pub fn insert_all(&mut self, vs: impl IntoIterator<Item = Vector>) {
        for v in vs {
            self.insert(v);
        }
    }

    pub fn sum(&self, other: &RowSpace) -> RowSpace {
        let mut s = self.clone();
        s.insert_all(other.rows.iter().cloned());
        s
    }

    pub fn contains_space(&self, other: &RowSpace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn intersect(&self, other: &RowSpace) -> RowSpace {
        // x = Σ a_i u_i = Σ b_j v_j  ⇔  (a, b) in the left kernel of [U; -V].
        let mut out = RowSpace::new(self.field, self.cols);
        if self.dim() == 0 || other.dim() == 0 {
            return out;
        }
        let u = self.basis_matrix();
        let v = other.basis_matrix().scale(&-&self.field.one());
        let lk = u.vstack(&v).left_kernel();
        for i in 0..lk.rows() {
            let a = &lk.row(i)[..self.dim()];
            out.insert(u.left_apply(a));
        }
        out
    }

    /// Complement coordinates: the non-pivot columns, used as a basis of the
    /// quotient `field^cols / self`.
    pub fn complement_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }
}
