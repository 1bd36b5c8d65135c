//! Orthogonal splittings of symmetric 2-forms at the flat torus metric and
//! the horizontality operator div J δ_g.
//!
//! Conventions: α(X) = ½ L_X g, δh^i = −∂_j h_{ij}, J(X¹, X²) = (−X², X¹),
//! E = div J δ α J grad, which at the flat metric is ½Δ². All solves are
//! spectral and exact mode by mode.

use num_complex::Complex64;
use thiserror::Error;

use crate::assoc::{standard_acs, TangentAm};
use crate::fields::{fourier_decompose, fourier_reconstruct, integrate, partial, Axis, Chart, FieldError, FourierModes, MatField, ScalarField, VectorField};
use crate::matalg::Mat2;
use crate::tensorcalc::{divergence_form, divergence_vector, gradient, lie_metric, MetricField, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("operator needs the flat torus metric")]
    NotFlatTorus,
    #[error("input has nonzero mean {0:e}; E is invertible only on zero-mean functions")]
    Kernel(f64),
}

pub type DecompResult<T> = Result<T, DecompError>;

/// Relative mean above which e_inverse refuses its input.
pub const KERNEL_TOL: f64 = 1e-10;

fn require_torus(chart: Chart) -> DecompResult<()> {
    if chart != Chart::Torus {
        return Err(DecompError::NotFlatTorus);
    }
    Ok(())
}

fn e_symbol(k: i64, l: i64) -> f64 {
    let s = (k * k + l * l) as f64;
    0.5 * s * s
}

/// Applies a real Fourier multiplier. Coefficients at the FFT roundoff level
/// are dropped first; otherwise the k⁴ growth of E amplifies them to ~1e−11.
fn multiply(f: &ScalarField, mult: impl Fn(i64, i64) -> f64) -> DecompResult<ScalarField> {
    let modes = fourier_decompose(&f.to_complex())?;
    let top = modes.nonzero(0.0).iter().map(|m| m.2.norm()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * top;
    let out = modes.map(|k, l, c| if c.norm() <= floor { Complex64::new(0.0, 0.0) } else { c * mult(k, l) });
    Ok(fourier_reconstruct(&out, f.grid())?.re())
}

/// E f = ½Δ² f.
pub fn e_apply(f: &ScalarField) -> DecompResult<ScalarField> {
    require_torus(f.grid().chart())?;
    multiply(f, e_symbol)
}

fn e_inverse_unchecked(f: &ScalarField) -> DecompResult<ScalarField> {
    multiply(f, |k, l| if k == 0 && l == 0 { 0.0 } else { 1.0 / e_symbol(k, l) })
}

/// E⁻¹ on zero-mean functions.
pub fn e_inverse(f: &ScalarField) -> DecompResult<ScalarField> {
    require_torus(f.grid().chart())?;
    let mean = integrate(f) / f.grid().total_measure();
    if mean.abs() > KERNEL_TOL * (1.0 + f.max_abs()) {
        return Err(DecompError::Kernel(mean));
    }
    e_inverse_unchecked(f)
}

/// E through its factorization div J δ α J grad, each factor taken from the
/// general tensor calculus (the flat metric is passed explicitly).
pub fn e_factorized(f: &ScalarField) -> DecompResult<ScalarField> {
    require_torus(f.grid().chart())?;
    let m = MetricField::standard(*f.grid());
    let x = rotate(&gradient(f, &m)?);
    let ax = lie_metric(&x, &m)?.map(|h| h.scale(0.5));
    let d = rotate(&divergence_form(&ax, &m)?);
    Ok(divergence_vector(&d, &m)?)
}

fn rotate(x: &VectorField) -> VectorField {
    x.map(|v| [-v[1], v[0]])
}

fn grad(f: &ScalarField) -> DecompResult<VectorField> {
    Ok(VectorField::from_components(&partial(f, Axis::One), &partial(f, Axis::Two))?)
}

fn delta(h: &MatField) -> DecompResult<VectorField> {
    let d = |r: usize| -> DecompResult<ScalarField> {
        let a = partial(&h.component(r, 0), Axis::One);
        let b = partial(&h.component(r, 1), Axis::Two);
        Ok(a.zip_with(&b, |a, b| -(a + b))?)
    };
    Ok(VectorField::from_components(&d(0)?, &d(1)?)?)
}

/// α(X) = ½ L_X g₀ = ½(∂_i X_j + ∂_j X_i).
fn alpha(x: &VectorField) -> DecompResult<MatField> {
    let (x1, x2) = (x.component(0), x.component(1));
    let a = partial(&x1, Axis::One);
    let d = partial(&x2, Axis::Two);
    let off = partial(&x1, Axis::Two).zip_with(&partial(&x2, Axis::One), |p, q| 0.5 * (p + q))?;
    Ok(MatField::from_components([&a, &off, &off, &d])?)
}

/// −div J δ h at the flat torus as one multiplier on h = [[a, b], [b, d]]:
/// b(k² − l²) + kl(d − a) per mode, times `post`. Same roundoff floor as `multiply`.
fn torus_residual_with(h: &MatField, post: impl Fn(i64, i64) -> f64) -> DecompResult<ScalarField> {
    let grid = *h.grid();
    let a = fourier_decompose(&h.component(0, 0).to_complex())?;
    let b = fourier_decompose(&h.component(0, 1).to_complex())?;
    let d = fourier_decompose(&h.component(1, 1).to_complex())?;
    let top = [&a, &b, &d].iter().flat_map(|m| m.nonzero(0.0)).map(|m| m.2.norm()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * top;
    let cut = |c: Complex64| if c.norm() <= floor { Complex64::new(0.0, 0.0) } else { c };
    let out = b.map(|k, l, cb| {
        let (kf, lf) = (k as f64, l as f64);
        let r = cut(cb) * (kf * kf - lf * lf) + (cut(d.get(k, l)) - cut(a.get(k, l))) * (kf * lf);
        r * post(k, l)
    });
    Ok(fourier_reconstruct(&out, &grid)?.re())
}

/// −div J δ_g h at the standard metric of the chart; vanishes exactly on
/// horizontal forms. On the torus this is v_xx − v_yy + 2u_xy for
/// h = [[u, −v], [−v, −u]]. On the sphere the z-derivatives use one-sided
/// stencils near the poles, so only |z| ≤ 0.9 is reliable.
pub fn horizontal_residual(h: &MatField) -> DecompResult<ScalarField> {
    let out = match h.grid().chart() {
        Chart::Torus => torus_residual_with(h, |_, _| 1.0)?,
        Chart::Sphere => {
            let m = MetricField::standard(*h.grid());
            let jd = divergence_form(h, &m)?.map_at(|_, z, v| standard_acs(Chart::Sphere, z).apply(v));
            divergence_vector(&jd, &m)?.map(|v| -v)
        }
    };
    Ok(out)
}

fn hamiltonian_potential(h: &MatField) -> DecompResult<ScalarField> {
    torus_residual_with(h, |k, l| if k == 0 && l == 0 { 0.0 } else { -1.0 / e_symbol(k, l) })
}

/// ½ L_{X_F} g₀ for the Hamiltonian field X_F = J grad F.
pub fn orbit_direction(f: &ScalarField) -> DecompResult<MatField> {
    require_torus(f.grid().chart())?;
    let a = multiply(f, |k, l| (k * l) as f64)?;
    let off = multiply(f, |k, l| 0.5 * (l * l - k * k) as f64)?;
    let d = a.map(|v| -v);
    Ok(MatField::from_components([&a, &off, &off, &d])?)
}

/// h^V = α J grad E⁻¹ div J δ h, for any symmetric form on the flat torus.
pub fn vertical_part(h: &MatField) -> DecompResult<MatField> {
    require_torus(h.grid().chart())?;
    orbit_direction(&hamiltonian_potential(h)?)
}

/// Orthogonal projection of a tangent vector at g₀ onto the orbit directions.
pub fn vertical_project(h: &TangentAm) -> DecompResult<MatField> {
    if !h.base().is_standard() || h.grid().chart() != Chart::Torus {
        return Err(DecompError::NotFlatTorus);
    }
    vertical_part(h.h())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub h0: MatField,
    pub lie_part: MatField,
    /// The vector field with lie_part = ½ L_X g₀.
    pub x: VectorField,
    /// Hamiltonian potential (X = J grad F) for the Hamiltonian split.
    pub f: Option<ScalarField>,
    /// Constant Fourier modes were kept on the h0 side.
    pub harmonic_to_h0: bool,
}

/// h = h0 + ½ L_X g₀ with δh0 = 0.
pub fn berger_ebin_split(h: &MatField) -> DecompResult<SplitResult> {
    let grid = *h.grid();
    require_torus(grid.chart())?;
    let d = delta(h)?;
    let m1 = fourier_decompose(&d.component(0).to_complex())?;
    let m2 = fourier_decompose(&d.component(1).to_complex())?;
    let (mut x1, mut x2) = (FourierModes::zeros(grid.n1(), grid.n2()), FourierModes::zeros(grid.n1(), grid.n2()));
    // δα X = ½(|κ|² + κκᵀ) X per mode
    for k in -m1.kmax()..=m1.kmax() {
        for l in -m1.lmax()..=m1.lmax() {
            if k == 0 && l == 0 {
                continue;
            }
            let (kf, lf) = (k as f64, l as f64);
            let s = kf * kf + lf * lf;
            let inv = Mat2::new(0.5 * (s + kf * kf), 0.5 * kf * lf, 0.5 * kf * lf, 0.5 * (s + lf * lf)).inverse();
            let (r1, r2) = (m1.get(k, l), m2.get(k, l));
            x1.set(k, l, r1 * inv.a + r2 * inv.b)?;
            x2.set(k, l, r1 * inv.c + r2 * inv.d)?;
        }
    }
    let x = VectorField::from_components(&fourier_reconstruct(&x1, &grid)?.re(), &fourier_reconstruct(&x2, &grid)?.re())?;
    let lie_part = alpha(&x)?;
    let h0 = h.zip_with(&lie_part, |a, b| a - b)?;
    Ok(SplitResult { h0, lie_part, x, f: None, harmonic_to_h0: true })
}

/// h = h* + ½ L_{X_F} g₀ with X_F = J grad F and div J δ h* = 0.
pub fn hamiltonian_split(h: &MatField) -> DecompResult<SplitResult> {
    require_torus(h.grid().chart())?;
    let f = hamiltonian_potential(h)?;
    let x = rotate(&grad(&f)?);
    let lie_part = orbit_direction(&f)?;
    let h0 = h.zip_with(&lie_part, |a, b| a - b)?;
    Ok(SplitResult { h0, lie_part, x, f: Some(f), harmonic_to_h0: true })
}

/// δ h at the flat torus, exposed for constraint checks.
pub fn flat_divergence(h: &MatField) -> DecompResult<VectorField> {
    require_torus(h.grid().chart())?;
    delta(h)
}

/// ∫ tr(a b) dx dy, the L² pairing of forms at g₀.
pub fn flat_pairing(a: &MatField, b: &MatField) -> DecompResult<f64> {
    Ok(integrate(&a.zip_with(b, |a, b| a.frob_dot(b))?))
}
