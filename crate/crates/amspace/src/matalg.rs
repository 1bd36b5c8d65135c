//! Small dense matrices and the analytic functions used pointwise.
//!
//! `SquareMatrix` is a general n×n row-major matrix. `Mat2` is a `Copy`
//! 2×2 used inside grid loops where allocation per point would dominate.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),
    #[error("matrix is singular")]
    Singular,
}

pub type MatResult<T> = Result<T, MatError>;

const SYM_TOL: f64 = 1e-12;
const EIG_FLOOR: f64 = 1e-14;

#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6e}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Panics if the rows are ragged; matrices in this crate are built from literals.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "row {i} has wrong length");
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn symmetric_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    pub fn is_symmetric(&self, rel: f64) -> bool {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= rel * scale))
    }

    fn check_dim(&self, other: &Self) -> MatResult<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(MatError::DimensionMismatch(self.n, other.n))
        }
    }

    pub fn try_add(&self, other: &Self) -> MatResult<Self> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> MatResult<Self> {
        self.check_dim(other)?;
        Ok(self * other)
    }

    pub fn det(&self) -> f64 {
        match self.n {
            1 => self.data[0],
            2 => self.data[0] * self.data[3] - self.data[1] * self.data[2],
            _ => {
                let Some((lu, _, sign)) = self.lu() else { return 0.0 };
                (0..self.n).map(|i| lu[(i, i)]).product::<f64>() * sign
            }
        }
    }

    // Partial-pivot LU; returns None on exact zero pivot.
    fn lu(&self) -> Option<(Self, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))?;
            if a[(p, k)] == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                a[(i, k)] = f;
                for j in (k + 1)..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn inverse(&self) -> MatResult<Self> {
        if !self.is_finite() {
            return Err(MatError::NonFinite);
        }
        if self.n == 2 {
            let d = self.det();
            if d == 0.0 || !d.is_finite() {
                return Err(MatError::Singular);
            }
            let [a, b, c, e] = [self.data[0], self.data[1], self.data[2], self.data[3]];
            return Ok(Self { n: 2, data: vec![e / d, -b / d, -c / d, a / d] });
        }
        let n = self.n;
        let (lu, perm, _) = self.lu().ok_or(MatError::Singular)?;
        let scale = self.max_abs();
        if (0..n).any(|i| lu[(i, i)].abs() <= 1e-15 * scale) {
            return Err(MatError::Singular);
        }
        let mut inv = Self::zeros(n);
        for col in 0..n {
            let mut x: Vec<f64> = (0..n).map(|i| if perm[i] == col { 1.0 } else { 0.0 }).collect();
            for i in 0..n {
                for k in 0..i {
                    x[i] -= lu[(i, k)] * x[k];
                }
            }
            for i in (0..n).rev() {
                for k in (i + 1)..n {
                    x[i] -= lu[(i, k)] * x[k];
                }
                x[i] /= lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, o: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        SquareMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, o: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        SquareMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, o: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Mul<f64> for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, s: f64) -> SquareMatrix {
        self.scale(s)
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(-1.0)
    }
}

/// Symmetric positive definite matrix, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SpdMatrix(SquareMatrix);

impl SpdMatrix {
    pub fn new(m: SquareMatrix) -> MatResult<Self> {
        if !m.is_finite() {
            return Err(MatError::NonFinite);
        }
        if !m.is_symmetric(SYM_TOL) {
            return Err(MatError::NotSpd("asymmetric".into()));
        }
        let m = m.symmetric_part();
        let (vals, _) = sym_eigen(&m);
        let floor = EIG_FLOOR * m.trace().abs();
        if let Some(v) = vals.iter().find(|&&v| v <= floor) {
            return Err(MatError::NotSpd(format!("eigenvalue {v:e}")));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_inner(self) -> SquareMatrix {
        self.0
    }
}

impl std::ops::Deref for SpdMatrix {
    type Target = SquareMatrix;
    fn deref(&self) -> &SquareMatrix {
        &self.0
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns eigenvalues and the matrix whose columns are eigenvectors.
pub fn sym_eigen(a: &SquareMatrix) -> (Vec<f64>, SquareMatrix) {
    let n = a.dim();
    if n == 2 {
        return sym_eigen2(a);
    }
    let mut m = a.symmetric_part();
    let mut v = SquareMatrix::identity(n);
    for _sweep in 0..64 {
        let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| m[(i, j)].powi(2)).sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)].powi(2)).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

fn sym_eigen2(a: &SquareMatrix) -> (Vec<f64>, SquareMatrix) {
    let (x, y, z) = (a[(0, 0)], 0.5 * (a[(0, 1)] + a[(1, 0)]), a[(1, 1)]);
    let (l1, l2, c, s) = Mat2::sym_eigen_parts(x, y, z);
    (vec![l1, l2], SquareMatrix::from_rows(&[&[c, -s], &[s, c]]))
}

fn sym_apply(a: &SquareMatrix, f: impl Fn(f64) -> f64) -> SquareMatrix {
    let (vals, v) = sym_eigen(a);
    let n = a.dim();
    SquareMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * f(vals[k]) * v[(j, k)]).sum())
}

/// Matrix exponential. Symmetric input goes through the eigendecomposition,
/// 2×2 through the closed form, everything else through scaling and squaring.
pub fn mat_exp(a: &SquareMatrix) -> MatResult<SquareMatrix> {
    if !a.is_finite() {
        return Err(MatError::NonFinite);
    }
    if a.dim() == 2 {
        return Ok(Mat2::from_square(a).exp().to_square());
    }
    if a.is_symmetric(1e-15) {
        return Ok(sym_apply(a, f64::exp));
    }
    Ok(exp_scaling_squaring(a))
}

fn exp_scaling_squaring(a: &SquareMatrix) -> SquareMatrix {
    let n = a.dim();
    let norm = a.norm_fro();
    let mut squarings = 0;
    let mut s = 1.0;
    while norm * s > 0.25 {
        s *= 0.5;
        squarings += 1;
    }
    let x = a.scale(s);
    let mut term = SquareMatrix::identity(n);
    let mut sum = SquareMatrix::identity(n);
    for k in 1..=20 {
        term = (&term * &x).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Principal logarithm of an SPD matrix; symmetric result.
pub fn mat_log(s: &SquareMatrix) -> MatResult<SquareMatrix> {
    let s = SpdMatrix::new(s.clone())?;
    Ok(sym_apply(&s, f64::ln))
}

/// (e^A + e^{-A})^{-1}(e^A - e^{-A}).
pub fn mat_tanh(a: &SquareMatrix) -> MatResult<SquareMatrix> {
    if !a.is_finite() {
        return Err(MatError::NonFinite);
    }
    if a.is_symmetric(1e-15) {
        return Ok(sym_apply(a, f64::tanh));
    }
    let ep = mat_exp(a)?;
    let em = mat_exp(&-a)?;
    Ok(&(&ep + &em).inverse()? * &(&ep - &em))
}

pub fn spd_sqrt(s: &SquareMatrix) -> MatResult<SquareMatrix> {
    let s = SpdMatrix::new(s.clone())?;
    Ok(sym_apply(&s, f64::sqrt))
}

pub fn commutator(a: &SquareMatrix, b: &SquareMatrix) -> MatResult<SquareMatrix> {
    a.check_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// Row-major 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn diag(x: f64, y: f64) -> Self {
        Self::new(x, 0.0, 0.0, y)
    }

    pub fn scalar(s: f64) -> Self {
        Self::diag(s, s)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            (1, 1) => self.d,
            _ => panic!("index ({i},{j}) out of range for 2x2"),
        }
    }

    pub fn from_square(m: &SquareMatrix) -> Self {
        assert_eq!(m.dim(), 2, "expected a 2x2 matrix");
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }

    pub fn to_square(self) -> SquareMatrix {
        SquareMatrix::from_rows(&[&[self.a, self.b], &[self.c, self.d]])
    }

    pub fn transpose(self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(self) -> Self {
        let det = self.det();
        Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn norm_fro(self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn sym(self) -> Self {
        let o = 0.5 * (self.b + self.c);
        Self::new(self.a, o, o, self.d)
    }

    pub fn commutator(self, o: Self) -> Self {
        self * o - o * self
    }

    pub fn apply(self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Inner product tr(self^T o).
    pub fn frob_dot(self, o: Self) -> f64 {
        self.a * o.a + self.b * o.b + self.c * o.c + self.d * o.d
    }

    // Eigen-decomposition of [[x,y],[y,z]]: (l1, l2, cos, sin) with the
    // rotation [[c,-s],[s,c]] carrying eigenvectors in its columns.
    fn sym_eigen_parts(x: f64, y: f64, z: f64) -> (f64, f64, f64, f64) {
        let half_diff = 0.5 * (x - z);
        let mean = 0.5 * (x + z);
        let rad = half_diff.hypot(y);
        let theta = 0.5 * y.atan2(half_diff);
        let (s, c) = theta.sin_cos();
        (mean + rad, mean - rad, c, s)
    }

    /// Applies `f` to the eigenvalues of the symmetric part.
    pub fn sym_apply(self, f: impl Fn(f64) -> f64) -> Self {
        let y = 0.5 * (self.b + self.c);
        let (l1, l2, c, s) = Self::sym_eigen_parts(self.a, y, self.d);
        let (f1, f2) = (f(l1), f(l2));
        Self::new(c * c * f1 + s * s * f2, c * s * (f1 - f2), c * s * (f1 - f2), s * s * f1 + c * c * f2)
    }

    pub fn sym_eigenvalues(self) -> (f64, f64) {
        let (l1, l2, _, _) = Self::sym_eigen_parts(self.a, 0.5 * (self.b + self.c), self.d);
        (l1, l2)
    }

    /// e^A = e^{m}(cosh θ·I + sinhc θ·(A − m I)), m = tr A / 2, θ² = −det(A − m I).
    pub fn exp(self) -> Self {
        let m = 0.5 * self.trace();
        let b = self - Mat2::scalar(m);
        let t2 = -b.det();
        let (ch, shc) = cosh_sinhc(t2);
        (Mat2::scalar(ch) + b.scale(shc)).scale(m.exp())
    }

    pub fn tanh(self) -> Self {
        let ep = self.exp();
        let em = (-self).exp();
        (ep + em).inverse() * (ep - em)
    }
}

// cosh θ and sinh θ / θ as functions of θ², valid for either sign of θ².
fn cosh_sinhc(t2: f64) -> (f64, f64) {
    if t2.abs() < 1e-8 {
        return (1.0 + t2 / 2.0 + t2 * t2 / 24.0, 1.0 + t2 / 6.0 + t2 * t2 / 120.0);
    }
    if t2 > 0.0 {
        let t = t2.sqrt();
        (t.cosh(), t.sinh() / t)
    } else {
        let t = (-t2).sqrt();
        (t.cos(), t.sin() / t)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Mat2) {
        *self = *self + o;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        self.scale(s)
    }
}
