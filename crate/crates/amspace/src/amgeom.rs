//! Inner product, curvature and geodesics of the space of associated metrics,
//! intrinsically (forms h at g, A = g⁻¹h) and in the Cayley chart
//! (J₀-anticommuting operators A at P, with D = (1 − P²)⁻¹).

use std::sync::Arc;

use thiserror::Error;

use crate::assoc::{acs_on_am, same_base, AssocError, AssocPair, CayleyOperator, TangentAm};
use crate::fields::{integrate, Field, FieldError, MatField};
use crate::matalg::Mat2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmError {
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error("degenerate plane: Gram determinant {gram:e} against scale {scale:e}")]
    DegeneratePlane { gram: f64, scale: f64 },
    #[error("zero tangent vector")]
    ZeroVector,
}

impl From<FieldError> for AmError {
    fn from(e: FieldError) -> Self {
        AmError::Assoc(e.into())
    }
}

pub type AmResult<T> = Result<T, AmError>;

/// Relative Gram determinant below which a plane counts as degenerate.
pub const GRAM_TOL: f64 = 1e-10;

fn integrate_pointwise(grid: crate::fields::Grid, vals: Vec<f64>) -> AmResult<f64> {
    Ok(integrate(&Field::new(grid, vals)?))
}

/// (a, b) = ∫ tr(AB) dμ.
pub fn am_inner(a: &TangentAm, b: &TangentAm) -> AmResult<f64> {
    same_base(a, b)?;
    let vals = a
        .h()
        .values()
        .iter()
        .zip(b.h().values())
        .zip(a.base().g().values())
        .map(|((&ha, &hb), &g)| {
            let gi = g.inverse();
            (gi * ha * gi * hb).trace()
        })
        .collect();
    integrate_pointwise(*a.grid(), vals)
}

/// R(a, b)c = −¼ g[[A, B], C].
pub fn am_curvature(a: &TangentAm, b: &TangentAm, c: &TangentAm) -> AmResult<TangentAm> {
    same_base(a, b)?;
    same_base(a, c)?;
    let base = a.base().clone();
    let mut out = Vec::with_capacity(a.grid().len());
    for (((&ha, &hb), &hc), &g) in a.h().values().iter().zip(b.h().values()).zip(c.h().values()).zip(base.g().values()) {
        let gi = g.inverse();
        let (am, bm, cm) = (gi * ha, gi * hb, gi * hc);
        out.push((g * am.commutator(bm).commutator(cm)).scale(-0.25).sym());
    }
    Ok(TangentAm::new(base, Field::new(*a.grid(), out)?)?)
}

fn gram(aa: f64, bb: f64, ab: f64) -> AmResult<f64> {
    let g = aa * bb - ab * ab;
    let scale = aa * bb;
    if !(g > GRAM_TOL * scale) {
        return Err(AmError::DegeneratePlane { gram: g, scale });
    }
    Ok(g)
}

/// Gram-normalized sectional curvature ¼∫tr([A,B]²)dμ / (‖a‖²‖b‖² − (a,b)²).
pub fn am_sectional(a: &TangentAm, b: &TangentAm) -> AmResult<f64> {
    same_base(a, b)?;
    let vals = a
        .h()
        .values()
        .iter()
        .zip(b.h().values())
        .zip(a.base().g().values())
        .map(|((&ha, &hb), &g)| {
            let gi = g.inverse();
            let c = (gi * ha).commutator(gi * hb);
            0.25 * (c * c).trace()
        })
        .collect();
    let num = integrate_pointwise(*a.grid(), vals)?;
    let den = gram(am_inner(a, a)?, am_inner(b, b)?, am_inner(a, b)?)?;
    Ok(num / den)
}

/// Sectional curvature of the plane (a, 𝐉a).
pub fn am_holomorphic_sectional(a: &TangentAm) -> AmResult<f64> {
    if a.max_abs() == 0.0 {
        return Err(AmError::ZeroVector);
    }
    am_sectional(a, &acs_on_am(a))
}

/// g_t = g e^{tA}, J_t = J e^{tA}.
pub fn am_geodesic(a: &TangentAm, t: f64) -> AmResult<AssocPair> {
    let base = a.base();
    let e = a.operator().map(|m| m.scale(t).exp());
    let g = base.g().zip_with(&e, |g, e| (g * e).sym())?;
    let j = base.j().zip_with(&e, |j, e| j * e)?;
    Ok(AssocPair::new(g, j)?)
}

fn chart_d(p: Mat2) -> Mat2 {
    (Mat2::IDENTITY - p * p).inverse()
}

fn chart_integral(p: &CayleyOperator, a: &MatField, b: &MatField, f: impl Fn(Mat2, Mat2, Mat2, Mat2) -> f64) -> AmResult<f64> {
    let j0 = p.base().j();
    let vals = p
        .p()
        .values()
        .iter()
        .zip(a.values())
        .zip(b.values())
        .zip(j0.values())
        .map(|(((&pm, &am), &bm), &j)| f(chart_d(pm), am, bm, j))
        .collect();
    integrate_pointwise(*p.grid(), vals)
}

/// 4∫tr(DA DB)dμ.
pub fn chart_inner(p: &CayleyOperator, a: &MatField, b: &MatField) -> AmResult<f64> {
    chart_integral(p, a, b, |d, a, b, _| 4.0 * (d * a * d * b).trace())
}

/// 4∫tr(DA J₀ DB)dμ.
pub fn chart_fundamental_form(p: &CayleyOperator, a: &MatField, b: &MatField) -> AmResult<f64> {
    chart_integral(p, a, b, |d, a, b, j| 4.0 * (d * a * j * d * b).trace())
}

/// −(1 − P²)[[DA, DB], DC].
pub fn chart_curvature(p: &CayleyOperator, a: &MatField, b: &MatField, c: &MatField) -> AmResult<MatField> {
    let mut out = Vec::with_capacity(p.grid().len());
    for (((&pm, &am), &bm), &cm) in p.p().values().iter().zip(a.values()).zip(b.values()).zip(c.values()) {
        let d = chart_d(pm);
        let inner = (d * am).commutator(d * bm).commutator(d * cm);
        out.push(-((Mat2::IDENTITY - pm * pm) * inner));
    }
    Ok(Field::new(*p.grid(), out)?)
}

/// 4∫tr([DA, DB]²)dμ over the chart Gram determinant.
pub fn chart_sectional(p: &CayleyOperator, a: &MatField, b: &MatField) -> AmResult<f64> {
    let num = chart_integral(p, a, b, |d, a, b, _| {
        let c = (d * a).commutator(d * b);
        4.0 * (c * c).trace()
    })?;
    let den = gram(chart_inner(p, a, a)?, chart_inner(p, b, b)?, chart_inner(p, a, b)?)?;
    Ok(num / den)
}

/// Levi-Civita connection in the chart: ∇_A B = dB(A) + A P D B + B P D A.
pub fn chart_connection(p: &CayleyOperator, a: &MatField, b: &MatField, db_a: &MatField) -> AmResult<MatField> {
    let mut out = Vec::with_capacity(p.grid().len());
    for (((&pm, &am), &bm), &dm) in p.p().values().iter().zip(a.values()).zip(b.values()).zip(db_a.values()) {
        let d = chart_d(pm);
        out.push(dm + am * pm * d * bm + bm * pm * d * am);
    }
    Ok(Field::new(*p.grid(), out)?)
}

/// Chart geodesic through P = 0: P(t) = tanh(tA).
pub fn chart_geodesic(base: Arc<AssocPair>, a: &MatField, t: f64) -> AmResult<CayleyOperator> {
    let p = a.map(|m| m.scale(t).tanh());
    Ok(CayleyOperator::new(base, p)?)
}
