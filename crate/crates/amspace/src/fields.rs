//! Midpoint grids on the sphere chart (φ, z) and the flat torus, with
//! quadrature, spectral / finite-difference partials and Fourier modes.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::matalg::Mat2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch")]
    GridMismatch,
    #[error("index error: {0}")]
    Index(String),
    #[error("operation not supported on the {0:?} chart")]
    UnsupportedChart(Chart),
    #[error("non-finite value at grid point {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// (φ, z) ∈ (0, 2π) × (−1, 1), μ = dφ∧dz.
    Sphere,
    /// (x, y) ∈ [0, 2π)², μ = dx∧dy.
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivMode {
    Spectral,
    Fd4Periodic,
    /// Fourth order with one-sided end stencils; for non-periodic data.
    Fd4Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    chart: Chart,
    n1: usize,
    n2: usize,
}

impl Grid {
    pub fn new(chart: Chart, n1: usize, n2: usize) -> Result<Self, FieldError> {
        if n1 < 4 || n2 < 4 || n1 % 2 != 0 || n2 % 2 != 0 {
            return Err(FieldError::InvalidGrid(format!("{n1}x{n2}: sizes must be even and at least 4")));
        }
        Ok(Self { chart, n1, n2 })
    }

    pub fn torus(n: usize) -> Result<Self, FieldError> {
        Self::new(Chart::Torus, n, n)
    }

    pub fn sphere(n: usize) -> Result<Self, FieldError> {
        Self::new(Chart::Sphere, n, n)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self, axis: Axis) -> f64 {
        match (self.chart, axis) {
            (Chart::Sphere, Axis::Two) => 2.0,
            _ => 2.0 * PI,
        }
    }

    pub fn size(&self, axis: Axis) -> usize {
        match axis {
            Axis::One => self.n1,
            Axis::Two => self.n2,
        }
    }

    pub fn step(&self, axis: Axis) -> f64 {
        self.period(axis) / self.size(axis) as f64
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.step(Axis::One) * (i as f64 + 0.5)
    }

    pub fn x2(&self, j: usize) -> f64 {
        let h = self.step(Axis::Two);
        match self.chart {
            Chart::Sphere => -1.0 + h * (j as f64 + 0.5),
            Chart::Torus => h * (j as f64 + 0.5),
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn coords(&self, idx: usize) -> (f64, f64) {
        (self.x1(idx / self.n2), self.x2(idx % self.n2))
    }

    /// Quadrature weight of every lattice cell against μ.
    pub fn weight(&self) -> f64 {
        self.step(Axis::One) * self.step(Axis::Two)
    }

    pub fn total_measure(&self) -> f64 {
        self.period(Axis::One) * self.period(Axis::Two)
    }
}

pub trait FieldValue: Copy + Send + Sync + 'static {
    fn finite(&self) -> bool;
}

impl FieldValue for f64 {
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl FieldValue for Complex64 {
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl FieldValue for [f64; 2] {
    fn finite(&self) -> bool {
        self[0].is_finite() && self[1].is_finite()
    }
}

impl FieldValue for Mat2 {
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid,
    values: Vec<T>,
}

pub type ScalarField = Field<f64>;
pub type ComplexField = Field<Complex64>;
pub type VectorField = Field<[f64; 2]>;
pub type MatField = Field<Mat2>;

impl<T: FieldValue> Field<T> {
    pub fn new(grid: Grid, values: Vec<T>) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::GridMismatch);
        }
        if let Some(idx) = values.iter().position(|v| !v.finite()) {
            return Err(FieldError::NonFinite(idx));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> T) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (a, b) = grid.coords(idx);
                f(a, b)
            })
            .collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid, v: T) -> Self {
        Self { grid, values: vec![v; grid.len()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.finite())
    }

    pub fn map<U: FieldValue>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise map that also sees the lattice coordinates.
    pub fn map_at<U: FieldValue>(&self, f: impl Fn(f64, f64, T) -> U) -> Field<U> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let (a, b) = self.grid.coords(idx);
                f(a, b, v)
            })
            .collect();
        Field { grid: self.grid, values }
    }

    pub fn zip_with<U: FieldValue, V: FieldValue>(&self, other: &Field<U>, f: impl Fn(T, U) -> V) -> Result<Field<V>, FieldError> {
        if self.grid != other.grid {
            return Err(FieldError::GridMismatch);
        }
        Ok(Field { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() })
    }
}

impl ScalarField {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest |f| over lattice points whose coordinates satisfy `keep`.
    pub fn max_abs_where(&self, keep: impl Fn(f64, f64) -> bool) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let (a, b) = self.grid.coords(*idx);
                keep(a, b)
            })
            .fold(0.0, |m, (_, v)| m.max(v.abs()))
    }

    pub fn to_complex(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }
}

impl ComplexField {
    pub fn re(&self) -> ScalarField {
        self.map(|c| c.re)
    }

    pub fn im(&self) -> ScalarField {
        self.map(|c| c.im)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn from_parts(re: &ScalarField, im: &ScalarField) -> Result<Self, FieldError> {
        re.zip_with(im, Complex64::new)
    }
}

impl MatField {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.max_abs()))
    }

    pub fn component(&self, r: usize, c: usize) -> ScalarField {
        self.map(|m| m.get(r, c))
    }

    pub fn from_components(c: [&ScalarField; 4]) -> Result<Self, FieldError> {
        let grid = *c[0].grid();
        if c.iter().any(|f| *f.grid() != grid) {
            return Err(FieldError::GridMismatch);
        }
        let values = (0..grid.len()).map(|k| Mat2::new(c[0].values[k], c[1].values[k], c[2].values[k], c[3].values[k])).collect();
        Ok(Field { grid, values })
    }
}

impl VectorField {
    pub fn component(&self, r: usize) -> ScalarField {
        self.map(|v| v[r])
    }

    pub fn from_components(x: &ScalarField, y: &ScalarField) -> Result<Self, FieldError> {
        x.zip_with(y, |a, b| [a, b])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v[0].abs()).max(v[1].abs()))
    }
}

/// Fixed-tree pairwise summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Midpoint-rule integral against μ (uniform weights in both charts).
pub fn integrate(f: &ScalarField) -> f64 {
    pairwise_sum(f.values()) * f.grid().weight()
}

fn for_each_line(grid: &Grid, axis: Axis, mut f: impl FnMut(&[usize])) {
    let (n1, n2) = (grid.n1, grid.n2);
    let mut idx = Vec::new();
    match axis {
        Axis::One => {
            for j in 0..n2 {
                idx.clear();
                idx.extend((0..n1).map(|i| i * n2 + j));
                f(&idx);
            }
        }
        Axis::Two => {
            for i in 0..n1 {
                idx.clear();
                idx.extend((0..n2).map(|j| i * n2 + j));
                f(&idx);
            }
        }
    }
}

// Signed wavenumber index of DFT bin m; the Nyquist bin maps to 0 so that
// odd derivatives of band-limited real data stay real.
fn signed_mode(m: usize, n: usize) -> i64 {
    if 2 * m == n {
        0
    } else if 2 * m < n {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

pub fn partial(f: &ScalarField, axis: Axis) -> ScalarField {
    partial_with(f, axis, DerivMode::Spectral)
}

pub fn partial_with(f: &ScalarField, axis: Axis, mode: DerivMode) -> ScalarField {
    let grid = *f.grid();
    let n = grid.size(axis);
    let period = grid.period(axis);
    let h = grid.step(axis);
    let mut out = vec![0.0; grid.len()];
    match mode {
        DerivMode::Spectral => {
            let mut planner = FftPlanner::<f64>::new();
            let fwd = planner.plan_fft_forward(n);
            let inv = planner.plan_fft_inverse(n);
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            let scale = 2.0 * PI / period;
            for_each_line(&grid, axis, |idx| {
                for (b, &k) in buf.iter_mut().zip(idx) {
                    *b = Complex64::new(f.values[k], 0.0);
                }
                fwd.process(&mut buf);
                for (m, b) in buf.iter_mut().enumerate() {
                    let kappa = scale * signed_mode(m, n) as f64;
                    *b *= Complex64::new(0.0, kappa / n as f64);
                }
                inv.process(&mut buf);
                for (b, &k) in buf.iter().zip(idx) {
                    out[k] = b.re;
                }
            });
        }
        DerivMode::Fd4Periodic => {
            for_each_line(&grid, axis, |idx| {
                for j in 0..n {
                    let at = |o: isize| f.values[idx[((j as isize + o).rem_euclid(n as isize)) as usize]];
                    out[idx[j]] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
                }
            });
        }
        DerivMode::Fd4Open => {
            assert!(n >= 5, "open stencil needs at least 5 points");
            for_each_line(&grid, axis, |idx| {
                let v = |k: usize| f.values[idx[k]];
                for j in 0..n {
                    let d = if j == 0 {
                        -25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)
                    } else if j == 1 {
                        -3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)
                    } else if j == n - 2 {
                        3.0 * v(n - 1) + 10.0 * v(n - 2) - 18.0 * v(n - 3) + 6.0 * v(n - 4) - v(n - 5)
                    } else if j == n - 1 {
                        25.0 * v(n - 1) - 48.0 * v(n - 2) + 36.0 * v(n - 3) - 16.0 * v(n - 4) + 3.0 * v(n - 5)
                    } else {
                        v(j - 2) - 8.0 * v(j - 1) + 8.0 * v(j + 1) - v(j + 2)
                    };
                    out[idx[j]] = d / (12.0 * h);
                }
            });
        }
    }
    Field { grid, values: out }
}

pub fn partial_complex(f: &ComplexField, axis: Axis, mode: DerivMode) -> ComplexField {
    let re = partial_with(&f.re(), axis, mode);
    let im = partial_with(&f.im(), axis, mode);
    ComplexField::from_parts(&re, &im).expect("same grid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn eval(self, t: f64) -> f64 {
        match self {
            Trig::Cos => t.cos(),
            Trig::Sin => t.sin(),
        }
    }
}

/// Real and imaginary trigonometric basis functions of the two charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisFunction {
    /// trig(k z + l φ) on the sphere chart, k an integer multiple of π.
    Sphere { k: f64, l: i64, trig: Trig, imaginary: bool },
    /// trig(k x + l y) on the torus.
    Torus { k: i64, l: i64, trig: Trig, imaginary: bool },
    /// Real horizontal family: trig(k x).
    TorusX { k: i64, trig: Trig },
    /// Real horizontal family: trig(l y).
    TorusY { l: i64, trig: Trig },
    /// Imaginary horizontal family: i·trig(p (x + y)).
    TorusDiag { p: i64, trig: Trig },
    /// Imaginary horizontal family: i·trig(q (x − y)).
    TorusAntiDiag { q: i64, trig: Trig },
}

pub fn basis_field(grid: &Grid, b: BasisFunction) -> Result<ComplexField, FieldError> {
    let need = match b {
        BasisFunction::Sphere { .. } => Chart::Sphere,
        _ => Chart::Torus,
    };
    if grid.chart() != need {
        return Err(FieldError::UnsupportedChart(grid.chart()));
    }
    let lift = |imag: bool, v: f64| if imag { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) };
    Ok(match b {
        BasisFunction::Sphere { k, l, trig, imaginary } => {
            let m = k / PI;
            if !m.is_finite() || (m - m.round()).abs() > 1e-12 * m.abs().max(1.0) {
                return Err(FieldError::Index(format!("sphere frequency {k} is not an integer multiple of pi")));
            }
            let k = PI * m.round();
            Field::from_fn(*grid, |phi, z| lift(imaginary, trig.eval(k * z + l as f64 * phi)))
        }
        BasisFunction::Torus { k, l, trig, imaginary } => Field::from_fn(*grid, |x, y| lift(imaginary, trig.eval(k as f64 * x + l as f64 * y))),
        BasisFunction::TorusX { k, trig } => Field::from_fn(*grid, |x, _| lift(false, trig.eval(k as f64 * x))),
        BasisFunction::TorusY { l, trig } => Field::from_fn(*grid, |_, y| lift(false, trig.eval(l as f64 * y))),
        BasisFunction::TorusDiag { p, trig } => Field::from_fn(*grid, |x, y| lift(true, trig.eval(p as f64 * (x + y)))),
        BasisFunction::TorusAntiDiag { q, trig } => Field::from_fn(*grid, |x, y| lift(true, trig.eval(q as f64 * (x - y)))),
    })
}

/// Coefficients c_{kl} of f = Σ c_{kl} e^{i(kx+ly)} for |k| < n1/2, |l| < n2/2.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierModes {
    n1: usize,
    n2: usize,
    coeffs: Vec<Complex64>,
}

impl FourierModes {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        Self { n1, n2, coeffs: vec![Complex64::new(0.0, 0.0); n1 * n2] }
    }

    pub fn kmax(&self) -> i64 {
        (self.n1 / 2) as i64 - 1
    }

    pub fn lmax(&self) -> i64 {
        (self.n2 / 2) as i64 - 1
    }

    fn slot(&self, k: i64, l: i64) -> Option<usize> {
        if k.abs() > self.kmax() || l.abs() > self.lmax() {
            return None;
        }
        let a = k.rem_euclid(self.n1 as i64) as usize;
        let b = l.rem_euclid(self.n2 as i64) as usize;
        Some(a * self.n2 + b)
    }

    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        self.slot(k, l).map_or(Complex64::new(0.0, 0.0), |s| self.coeffs[s])
    }

    pub fn set(&mut self, k: i64, l: i64, c: Complex64) -> Result<(), FieldError> {
        let s = self.slot(k, l).ok_or_else(|| FieldError::Index(format!("mode ({k},{l}) beyond Nyquist")))?;
        self.coeffs[s] = c;
        Ok(())
    }

    /// Nonzero modes (|c| > tol) in a fixed order.
    pub fn nonzero(&self, tol: f64) -> Vec<(i64, i64, Complex64)> {
        let mut out = Vec::new();
        for k in -self.kmax()..=self.kmax() {
            for l in -self.lmax()..=self.lmax() {
                let c = self.get(k, l);
                if c.norm() > tol {
                    out.push((k, l, c));
                }
            }
        }
        out
    }

    /// Multiplies every mode by `f(k, l)`.
    pub fn map(&self, f: impl Fn(i64, i64, Complex64) -> Complex64) -> Self {
        let mut out = Self::zeros(self.n1, self.n2);
        for k in -self.kmax()..=self.kmax() {
            for l in -self.lmax()..=self.lmax() {
                let s = self.slot(k, l).expect("in range");
                out.coeffs[s] = f(k, l, self.coeffs[s]);
            }
        }
        out
    }
}

fn fft2(data: &mut [Complex64], n1: usize, n2: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (p1, p2) = if inverse { (planner.plan_fft_inverse(n1), planner.plan_fft_inverse(n2)) } else { (planner.plan_fft_forward(n1), planner.plan_fft_forward(n2)) };
    for row in data.chunks_mut(n2) {
        p2.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n1];
    for j in 0..n2 {
        for i in 0..n1 {
            col[i] = data[i * n2 + j];
        }
        p1.process(&mut col);
        for i in 0..n1 {
            data[i * n2 + j] = col[i];
        }
    }
}

pub fn fourier_decompose(f: &ComplexField) -> Result<FourierModes, FieldError> {
    let grid = *f.grid();
    if grid.chart() != Chart::Torus {
        return Err(FieldError::UnsupportedChart(grid.chart()));
    }
    let (n1, n2) = (grid.n1(), grid.n2());
    let mut data = f.values().to_vec();
    fft2(&mut data, n1, n2, false);
    let norm = (n1 * n2) as f64;
    let mut modes = FourierModes::zeros(n1, n2);
    for a in 0..n1 {
        for b in 0..n2 {
            let (k, l) = (signed_mode(a, n1), signed_mode(b, n2));
            if (2 * a == n1) || (2 * b == n2) {
                continue;
            }
            // Midpoint lattice: samples sit half a cell off the origin.
            let shift = Complex64::from_polar(1.0, -PI * (k as f64 / n1 as f64 + l as f64 / n2 as f64));
            modes.coeffs[a * n2 + b] = data[a * n2 + b] / norm * shift;
        }
    }
    Ok(modes)
}

pub fn fourier_reconstruct(modes: &FourierModes, grid: &Grid) -> Result<ComplexField, FieldError> {
    if grid.chart() != Chart::Torus {
        return Err(FieldError::UnsupportedChart(grid.chart()));
    }
    if grid.n1() != modes.n1 || grid.n2() != modes.n2 {
        return Err(FieldError::GridMismatch);
    }
    let (n1, n2) = (modes.n1, modes.n2);
    let mut data = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for a in 0..n1 {
        for b in 0..n2 {
            let (k, l) = (signed_mode(a, n1), signed_mode(b, n2));
            let shift = Complex64::from_polar(1.0, PI * (k as f64 / n1 as f64 + l as f64 / n2 as f64));
            data[a * n2 + b] = modes.coeffs[a * n2 + b] * shift;
        }
    }
    fft2(&mut data, n1, n2, true);
    Ok(Field { grid: *grid, values: data })
}

/// Real-field convenience: apply a spectral multiplier on the torus.
pub fn spectral_apply(f: &ScalarField, mult: impl Fn(i64, i64) -> Complex64) -> Result<ScalarField, FieldError> {
    let modes = fourier_decompose(&f.to_complex())?;
    let out = fourier_reconstruct(&modes.map(|k, l, c| c * mult(k, l)), f.grid())?;
    Ok(out.re())
}

pub trait DumpValue {
    fn parts(&self) -> (f64, f64);
}

impl DumpValue for f64 {
    fn parts(&self) -> (f64, f64) {
        (*self, 0.0)
    }
}

impl DumpValue for Complex64 {
    fn parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// CSV dump: header `axis1,axis2,re,im`, row-major, 17 significant digits.
pub fn write_dump<T: FieldValue + DumpValue, W: Write>(field: &Field<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "axis1,axis2,re,im")?;
    for (idx, v) in field.values().iter().enumerate() {
        let (a, b) = field.grid().coords(idx);
        let (re, im) = v.parts();
        writeln!(w, "{a:.16e},{b:.16e},{re:.16e},{im:.16e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_odd_and_tiny() {
        assert!(Grid::torus(3).is_err());
        assert!(Grid::new(Chart::Sphere, 8, 7).is_err());
        assert!(Grid::sphere(8).is_ok());
    }

    #[test]
    fn measures() {
        let s = Grid::sphere(32).unwrap();
        assert!((integrate(&Field::constant(s, 1.0)) - 4.0 * PI).abs() < 1e-13);
        let t = Grid::torus(32).unwrap();
        assert!((integrate(&Field::constant(t, 1.0)) - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn spectral_derivative_single_mode() {
        let g = Grid::torus(8).unwrap();
        let f = Field::from_fn(g, |x, _| x.sin());
        let d = partial(&f, Axis::One);
        let err = d.zip_with(&Field::from_fn(g, |x, _| x.cos()), |a, b| a - b).unwrap().max_abs();
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn open_stencil_is_exact_on_quartics() {
        let g = Grid::sphere(16).unwrap();
        let f = Field::from_fn(g, |_, z| z.powi(4) - 2.0 * z.powi(3) + z);
        let d = partial_with(&f, Axis::Two, DerivMode::Fd4Open);
        let exact = Field::from_fn(g, |_, z| 4.0 * z.powi(3) - 6.0 * z * z + 1.0);
        assert!(d.zip_with(&exact, |a, b| a - b).unwrap().max_abs() < 1e-11);
    }

    #[test]
    fn fourier_indexing() {
        let mut m = FourierModes::zeros(8, 8);
        assert!(m.set(4, 0, Complex64::new(1.0, 0.0)).is_err());
        m.set(-3, 2, Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(m.nonzero(0.0), vec![(-3, 2, Complex64::new(0.5, 0.0))]);
    }
}
