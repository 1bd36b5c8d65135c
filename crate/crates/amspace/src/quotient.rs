//! Sectional curvature of the orbit space of associated metrics modulo
//! symplectomorphisms, at the flat torus: K̄ = K + ¾‖[a,b]^V‖²/‖a∧b‖².

use thiserror::Error;

use crate::amgeom::{am_inner, am_sectional, AmError, GRAM_TOL};
use crate::assoc::{same_base, AssocError, TangentAm};
use crate::decomp::{e_inverse, horizontal_residual, orbit_direction, vertical_part, DecompError};
use crate::fields::{integrate, partial, Axis, Chart, FieldError, MatField, ScalarField, VectorField};
use crate::tensorcalc::{box_operator, divergence_form, MetricField, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuotientError {
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Am(#[from] AmError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("quotient curvature needs the flat torus base")]
    NotFlatTorus,
    #[error("{which} is not horizontal: residual {residual:e}")]
    NotHorizontal { which: &'static str, residual: f64 },
}

impl From<AssocError> for QuotientError {
    fn from(e: AssocError) -> Self {
        QuotientError::Am(e.into())
    }
}

impl From<FieldError> for QuotientError {
    fn from(e: FieldError) -> Self {
        QuotientError::Decomp(e.into())
    }
}

pub type QuotientResult<T> = Result<T, QuotientError>;

/// Horizontality tolerance, relative to the size of the form.
pub const HORIZONTAL_TOL: f64 = 1e-8;

/// Two horizontal tangent vectors at the flat torus metric.
#[derive(Debug, Clone)]
pub struct HorizontalPair {
    a: TangentAm,
    b: TangentAm,
}

fn check_horizontal(h: &TangentAm, which: &'static str) -> QuotientResult<()> {
    let residual = horizontal_residual(h.h())?.max_abs();
    if residual > HORIZONTAL_TOL * h.max_abs().max(1.0) {
        return Err(QuotientError::NotHorizontal { which, residual });
    }
    Ok(())
}

impl HorizontalPair {
    pub fn new(a: TangentAm, b: TangentAm) -> QuotientResult<Self> {
        same_base(&a, &b)?;
        if !a.base().is_standard() || a.grid().chart() != Chart::Torus {
            return Err(QuotientError::NotFlatTorus);
        }
        check_horizontal(&a, "a")?;
        check_horizontal(&b, "b")?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &TangentAm {
        &self.a
    }

    pub fn b(&self) -> &TangentAm {
        &self.b
    }

    pub fn scaled(&self, la: f64, lb: f64) -> Self {
        Self { a: self.a.scale(la), b: self.b.scale(lb) }
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }
}

/// (δb, a)^k + (□b, a)^k, with (δb, a)^k = a^k_i (δb)^i and
/// (□b, a)^k = (□b)^k_{ij} a^{ij}; indices move freely at g₀ = I.
fn half_brace(a: &MatField, b: &MatField, m: &MetricField) -> QuotientResult<VectorField> {
    let db = divergence_form(b, m)?;
    let bb = box_operator(b, m)?;
    let vals = (0..a.grid().len())
        .map(|idx| {
            let av = a.values()[idx];
            let d = av.apply(db.values()[idx]);
            let bx = &bb.values()[idx];
            let mut out = d;
            for (k, o) in out.iter_mut().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        *o += bx[k][i][j] * av.get(i, j);
                    }
                }
            }
            out
        })
        .collect();
    Ok(VectorField::new(*a.grid(), vals)?)
}

/// {a, b} = (δb, a) + (□b, a) − (δa, b) − (□a, b).
pub fn brace(pair: &HorizontalPair) -> QuotientResult<VectorField> {
    let m = MetricField::standard(*pair.a.grid());
    let ab = half_brace(pair.a.h(), pair.b.h(), &m)?;
    let ba = half_brace(pair.b.h(), pair.a.h(), &m)?;
    Ok(ab.zip_with(&ba, |p, q| [p[0] - q[0], p[1] - q[1]])?)
}

/// div J{a, b}, with J(X¹, X²) = (−X², X¹).
pub fn brace_source(pair: &HorizontalPair) -> QuotientResult<ScalarField> {
    let br = brace(pair)?;
    let dy = partial(&br.component(0), Axis::Two);
    let dx = partial(&br.component(1), Axis::One);
    Ok(dy.zip_with(&dx, |p, q| p - q)?)
}

/// [a, b]^V = −α J grad E⁻¹ div J{a, b}.
pub fn vertical_bracket(pair: &HorizontalPair) -> QuotientResult<MatField> {
    let phi = e_inverse(&brace_source(pair)?)?;
    Ok(orbit_direction(&phi)?.map(|m| -m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientCurvature {
    /// Sectional curvature of the total space.
    pub k: f64,
    /// ¾‖[a,b]^V‖²/‖a∧b‖².
    pub correction: f64,
    pub total: f64,
}

/// Gram determinant ‖a‖²‖b‖² − (a,b)².
pub fn wedge_norm_sq(pair: &HorizontalPair) -> QuotientResult<f64> {
    let (aa, bb, ab) = (am_inner(&pair.a, &pair.a)?, am_inner(&pair.b, &pair.b)?, am_inner(&pair.a, &pair.b)?);
    let g = aa * bb - ab * ab;
    if !(g > GRAM_TOL * aa * bb) {
        return Err(AmError::DegeneratePlane { gram: g, scale: aa * bb }.into());
    }
    Ok(g)
}

pub fn quotient_sectional(pair: &HorizontalPair) -> QuotientResult<QuotientCurvature> {
    let k = am_sectional(&pair.a, &pair.b)?;
    let gram = wedge_norm_sq(pair)?;
    let f = brace_source(pair)?;
    let phi = e_inverse(&f)?;
    let energy = integrate(&f.zip_with(&phi, |a, b| a * b)?);
    let correction = 0.75 * energy / gram;
    Ok(QuotientCurvature { k, correction, total: k + correction })
}

/// ‖[a,b]^V‖² through the explicit vertical bracket, and that bracket's
/// distance from its own vertical projection.
pub fn vertical_bracket_check(pair: &HorizontalPair) -> QuotientResult<(f64, f64)> {
    let v = vertical_bracket(pair)?;
    let norm = integrate(&v.map(|m| m.frob_dot(m)));
    let pv = vertical_part(&v)?;
    let defect = pv.zip_with(&v, |p, q| (p - q).max_abs())?.max_abs();
    Ok((norm, defect))
}
