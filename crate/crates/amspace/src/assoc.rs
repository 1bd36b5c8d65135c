//! Associated metrics g = ωJ on the sphere chart and the torus, the Cayley
//! chart P ↦ (g₀(1+P)(1−P)⁻¹, J₀(1+P)(1−P)⁻¹), its differential, and the
//! complex scalar form of J₀-anticommuting operators.
//!
//! Complex form: α ↦ F·[[Re α, −Im α], [−Im α, −Re α]]·F⁻¹ where F is the
//! g₀-orthonormal frame (identity on the torus, diag(1/s, s) with s = √(1−z²)
//! on the sphere chart).

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::fields::{partial_with, Axis, Chart, ComplexField, DerivMode, Field, FieldError, Grid, MatField, ScalarField};
use crate::matalg::Mat2;

/// ω in chart coordinates for both charts.
pub const OMEGA: Mat2 = Mat2::new(0.0, 1.0, -1.0, 0.0);

/// Relative defect accepted by the validating constructors.
pub const VALIDATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssocError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{what} violated at grid point {index} (defect {defect:e})")]
    Invariant { what: &'static str, index: usize, defect: f64 },
    #[error("positivity lost at grid point {index} (|p| = {modulus})")]
    Positivity { index: usize, modulus: f64 },
    #[error("tangent vectors live at different base metrics")]
    BaseMismatch,
    #[error("singular matrix at grid point {0}")]
    Singular(usize),
}

pub type AssocResult<T> = Result<T, AssocError>;

fn sphere_s(z: f64) -> f64 {
    (1.0 - z * z).sqrt()
}

/// g₀-orthonormal frame at a lattice point with second coordinate `x2`.
pub fn frame(chart: Chart, x2: f64) -> Mat2 {
    match chart {
        Chart::Torus => Mat2::IDENTITY,
        Chart::Sphere => {
            let s = sphere_s(x2);
            Mat2::diag(1.0 / s, s)
        }
    }
}

pub fn standard_metric(chart: Chart, x2: f64) -> Mat2 {
    match chart {
        Chart::Torus => Mat2::IDENTITY,
        Chart::Sphere => {
            let w = 1.0 - x2 * x2;
            Mat2::diag(w, 1.0 / w)
        }
    }
}

pub fn standard_acs(chart: Chart, x2: f64) -> Mat2 {
    match chart {
        Chart::Torus => Mat2::new(0.0, -1.0, 1.0, 0.0),
        Chart::Sphere => {
            let w = 1.0 - x2 * x2;
            Mat2::new(0.0, -1.0 / w, w, 0.0)
        }
    }
}

pub fn complex_to_frame_operator(c: Complex64) -> Mat2 {
    Mat2::new(c.re, -c.im, -c.im, -c.re)
}

pub fn frame_operator_to_complex(m: Mat2) -> Complex64 {
    Complex64::new(0.5 * (m.a - m.d), -0.5 * (m.b + m.c))
}

/// Chart operator field of a complex scalar field.
pub fn chart_operator(alpha: &ComplexField) -> MatField {
    let chart = alpha.grid().chart();
    alpha.map_at(|_, x2, c| {
        let f = frame(chart, x2);
        f * complex_to_frame_operator(c) * f.inverse()
    })
}

/// Inverse of [`chart_operator`] on J₀-anticommuting, g₀-symmetric operators.
pub fn chart_complex(a: &MatField) -> ComplexField {
    let chart = a.grid().chart();
    a.map_at(|_, x2, m| {
        let f = frame(chart, x2);
        frame_operator_to_complex(f.inverse() * m * f)
    })
}

fn rel(defect: f64, scale: f64) -> f64 {
    defect / scale.max(f64::MIN_POSITIVE)
}

fn worst(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values.enumerate().fold((0, 0.0), |(bi, bv), (i, v)| if v > bv || v.is_nan() { (i, v) } else { (bi, bv) })
}

/// Largest relative defects of the four associated-pair identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDefects {
    pub j_square: f64,
    pub hermitian: f64,
    pub omega: f64,
    pub det: f64,
}

impl PairDefects {
    pub fn max(&self) -> f64 {
        self.j_square.max(self.hermitian).max(self.omega).max(self.det)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssocPair {
    g: MatField,
    j: MatField,
}

impl AssocPair {
    /// (g₀, J₀) of the chart.
    pub fn standard(grid: Grid) -> Self {
        let chart = grid.chart();
        Self { g: Field::from_fn(grid, |_, x2| standard_metric(chart, x2)), j: Field::from_fn(grid, |_, x2| standard_acs(chart, x2)) }
    }

    pub fn new(g: MatField, j: MatField) -> AssocResult<Self> {
        if g.grid() != j.grid() {
            return Err(FieldError::GridMismatch.into());
        }
        let pair = Self { g, j };
        pair.validate(VALIDATION_TOL)?;
        Ok(pair)
    }

    pub(crate) fn from_parts(g: MatField, j: MatField) -> Self {
        Self { g, j }
    }

    pub fn grid(&self) -> &Grid {
        self.g.grid()
    }

    pub fn g(&self) -> &MatField {
        &self.g
    }

    pub fn j(&self) -> &MatField {
        &self.j
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard(*self.grid())
    }

    fn defect_fields(&self) -> [Vec<f64>; 4] {
        let gs = self.g.values();
        let js = self.j.values();
        let mut out: [Vec<f64>; 4] = Default::default();
        for (&g, &j) in gs.iter().zip(js) {
            let gn = g.max_abs();
            let jn = j.max_abs();
            out[0].push(rel((j * j + Mat2::IDENTITY).max_abs(), 1.0 + jn * jn));
            out[1].push(rel((j.transpose() * g * j - g).max_abs(), gn * (1.0 + jn * jn)));
            out[2].push(rel((OMEGA * j - g).max_abs(), gn));
            out[3].push(rel((g.det() - 1.0).abs(), gn * gn));
        }
        out
    }

    pub fn defects(&self) -> PairDefects {
        let [a, b, c, d] = self.defect_fields();
        let m = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
        PairDefects { j_square: m(a), hermitian: m(b), omega: m(c), det: m(d) }
    }

    pub fn validate(&self, tol: f64) -> AssocResult<()> {
        let names = ["J^2 = -I", "J^T g J = g", "g = omega J", "det g = 1"];
        for (what, v) in names.into_iter().zip(self.defect_fields()) {
            let (index, defect) = worst(v.into_iter());
            if !(defect <= tol) {
                return Err(AssocError::Invariant { what, index, defect });
            }
        }
        Ok(())
    }
}

/// Field of J₀-anticommuting, g₀-symmetric operators with 1 − P² > 0,
/// together with its image under the Cayley chart.
#[derive(Debug, Clone)]
pub struct CayleyOperator {
    base: Arc<AssocPair>,
    p: MatField,
    image: Arc<AssocPair>,
}

impl CayleyOperator {
    pub fn new(base: Arc<AssocPair>, p: MatField) -> AssocResult<Self> {
        if base.grid() != p.grid() {
            return Err(FieldError::GridMismatch.into());
        }
        for (idx, ((&pm, &g0), &j0)) in p.values().iter().zip(base.g.values()).zip(base.j.values()).enumerate() {
            let scale = pm.max_abs().max(1.0) * (1.0 + j0.max_abs());
            let anti = (pm * j0 + j0 * pm).max_abs();
            if !(anti <= VALIDATION_TOL * scale) {
                return Err(AssocError::Invariant { what: "P J0 + J0 P = 0", index: idx, defect: anti / scale });
            }
            let gp = g0 * pm;
            let asym = (gp - gp.transpose()).max_abs();
            if !(asym <= VALIDATION_TOL * g0.max_abs() * pm.max_abs().max(1.0)) {
                return Err(AssocError::Invariant { what: "g0 P symmetric", index: idx, defect: asym });
            }
            // P² = |p|² I for these operators; positivity of 1 − P² is |p| < 1.
            let m2 = 0.5 * (pm * pm).trace();
            if !(m2 < 1.0) {
                return Err(AssocError::Positivity { index: idx, modulus: m2.max(0.0).sqrt() });
            }
        }
        let mut gs = Vec::with_capacity(p.grid().len());
        let mut js = Vec::with_capacity(p.grid().len());
        for ((&pm, &g0), &j0) in p.values().iter().zip(base.g.values()).zip(base.j.values()) {
            let s = cayley_factor(pm);
            gs.push((g0 * s).sym());
            js.push(j0 * s);
        }
        let grid = *p.grid();
        let image = Arc::new(AssocPair::from_parts(Field::new(grid, gs)?, Field::new(grid, js)?));
        Ok(Self { base, p, image })
    }

    pub fn zero(base: Arc<AssocPair>) -> Self {
        let grid = *base.grid();
        let p = Field::constant(grid, Mat2::ZERO);
        let image = base.clone();
        Self { base, p, image }
    }

    /// P from its complex scalar, relative to the chart's standard pair.
    pub fn from_complex(base: Arc<AssocPair>, p: &ComplexField) -> AssocResult<Self> {
        if base.grid() != p.grid() {
            return Err(FieldError::GridMismatch.into());
        }
        if !base.is_standard() {
            return Err(AssocError::BaseMismatch);
        }
        Self::new(base, chart_operator(p))
    }

    pub fn base(&self) -> &Arc<AssocPair> {
        &self.base
    }

    pub fn p(&self) -> &MatField {
        &self.p
    }

    pub fn image(&self) -> &Arc<AssocPair> {
        &self.image
    }

    pub fn to_complex(&self) -> ComplexField {
        chart_complex(&self.p)
    }

    pub fn grid(&self) -> &Grid {
        self.p.grid()
    }
}

/// (1+P)(1−P)⁻¹.
pub fn cayley_factor(p: Mat2) -> Mat2 {
    (Mat2::IDENTITY + p) * (Mat2::IDENTITY - p).inverse()
}

pub fn cayley_to_pair(p: &CayleyOperator) -> Arc<AssocPair> {
    p.image.clone()
}

/// P = (1 − J J₀)⁻¹(1 + J J₀).
pub fn cayley_from_pair(j: &MatField, base: Arc<AssocPair>) -> AssocResult<CayleyOperator> {
    if j.grid() != base.grid() {
        return Err(FieldError::GridMismatch.into());
    }
    let mut ps = Vec::with_capacity(j.grid().len());
    for (idx, (&jm, &j0)) in j.values().iter().zip(base.j.values()).enumerate() {
        let jj = jm * j0;
        let m = Mat2::IDENTITY - jj;
        let cond = m.det().abs() / (m.max_abs() * m.max_abs()).max(f64::MIN_POSITIVE);
        if !(cond > 1e-13) {
            return Err(AssocError::Positivity { index: idx, modulus: f64::INFINITY });
        }
        ps.push(m.inverse() * (Mat2::IDENTITY + jj));
    }
    let p = Field::new(*j.grid(), ps)?;
    CayleyOperator::new(base, p)
}

/// Formula for the coordinate of J with respect to J₁ given its coordinate
/// K with respect to J₀.
pub fn chart_change(k: &MatField, j0: &MatField, j1: &MatField) -> AssocResult<MatField> {
    let t = k.zip_with(j0, |k, j0| (Mat2::IDENTITY - k) * (Mat2::IDENTITY + k).inverse() * j0)?;
    let tj = t.zip_with(j1, |t, j1| t * j1)?;
    let mut out = Vec::with_capacity(tj.grid().len());
    for (idx, &m) in tj.values().iter().enumerate() {
        let d = Mat2::IDENTITY - m;
        if d.det() == 0.0 {
            return Err(AssocError::Singular(idx));
        }
        out.push(d.inverse() * (Mat2::IDENTITY + m));
    }
    Ok(Field::new(*k.grid(), out)?)
}

/// Symmetric 2-form at an associated metric, anti-Hermitian and traceless.
#[derive(Debug, Clone)]
pub struct TangentAm {
    base: Arc<AssocPair>,
    h: MatField,
}

impl TangentAm {
    pub fn new(base: Arc<AssocPair>, h: MatField) -> AssocResult<Self> {
        if base.grid() != h.grid() {
            return Err(FieldError::GridMismatch.into());
        }
        // defects are measured against the size of the whole field, so
        // roundoff near zeros of h does not count as a violation
        let field_scale = h.values().iter().zip(base.j.values()).map(|(hm, j)| hm.max_abs() * (1.0 + j.max_abs() * j.max_abs())).fold(0.0, f64::max);
        for (idx, ((&hm, &g), &j)) in h.values().iter().zip(base.g.values()).zip(base.j.values()).enumerate() {
            let scale = field_scale;
            let sym = (hm - hm.transpose()).max_abs();
            let anti = (j.transpose() * hm * j + hm).max_abs();
            let tr = (g.inverse() * hm).trace().abs() * g.max_abs();
            let defect = sym.max(anti).max(tr);
            if !(defect <= VALIDATION_TOL * scale.max(f64::MIN_POSITIVE) || scale == 0.0) {
                return Err(AssocError::Invariant { what: "anti-Hermitian traceless form", index: idx, defect: defect / scale });
            }
        }
        Ok(Self { base, h })
    }

    pub(crate) fn from_parts(base: Arc<AssocPair>, h: MatField) -> Self {
        Self { base, h }
    }

    /// h = g A for an operator field A.
    pub fn from_operator(base: Arc<AssocPair>, a: &MatField) -> AssocResult<Self> {
        let h = base.g.zip_with(a, |g, a| (g * a).sym())?;
        Self::new(base, h)
    }

    /// At the chart's standard pair: h = g₀ A with A the chart operator of α.
    pub fn from_complex(base: Arc<AssocPair>, alpha: &ComplexField) -> AssocResult<Self> {
        if !base.is_standard() {
            return Err(AssocError::BaseMismatch);
        }
        Self::from_operator(base, &chart_operator(alpha))
    }

    pub fn zero(base: Arc<AssocPair>) -> Self {
        let h = Field::constant(*base.grid(), Mat2::ZERO);
        Self { base, h }
    }

    pub fn base(&self) -> &Arc<AssocPair> {
        &self.base
    }

    pub fn h(&self) -> &MatField {
        &self.h
    }

    pub fn grid(&self) -> &Grid {
        self.h.grid()
    }

    /// A = g⁻¹h.
    pub fn operator(&self) -> MatField {
        self.base.g.zip_with(&self.h, |g, h| g.inverse() * h).expect("same grid")
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { base: self.base.clone(), h: self.h.map(|m| m.scale(s)) }
    }

    pub fn add(&self, other: &Self) -> AssocResult<Self> {
        same_base(self, other)?;
        Ok(Self { base: self.base.clone(), h: self.h.zip_with(&other.h, |a, b| a + b)? })
    }

    pub fn sub(&self, other: &Self) -> AssocResult<Self> {
        same_base(self, other)?;
        Ok(Self { base: self.base.clone(), h: self.h.zip_with(&other.h, |a, b| a - b)? })
    }

    pub fn max_abs(&self) -> f64 {
        self.h.max_abs()
    }
}

pub fn same_base(a: &TangentAm, b: &TangentAm) -> AssocResult<()> {
    if Arc::ptr_eq(&a.base, &b.base) || *a.base == *b.base {
        Ok(())
    } else {
        Err(AssocError::BaseMismatch)
    }
}

/// h = 2g(1−P)(1−P²)⁻¹A(1−P)⁻¹ at g = g(P).
pub fn tangent_push(a: &MatField, p: &CayleyOperator) -> AssocResult<TangentAm> {
    let img = p.image.clone();
    let mut hs = Vec::with_capacity(a.grid().len());
    for ((&am, &pm), &g) in a.values().iter().zip(p.p.values()).zip(img.g.values()) {
        let one = Mat2::IDENTITY;
        let d = (one - pm * pm).inverse();
        hs.push((g * (one - pm) * d * am * (one - pm).inverse()).scale(2.0).sym());
    }
    let h = Field::new(*a.grid(), hs)?;
    Ok(TangentAm::from_parts(img, h))
}

/// A = ½(1−P)⁻¹(1−P²)g⁻¹h(1−P).
pub fn tangent_pull(h: &TangentAm, p: &CayleyOperator) -> AssocResult<MatField> {
    if !(Arc::ptr_eq(&h.base, &p.image) || *h.base == *p.image) {
        return Err(AssocError::BaseMismatch);
    }
    let one = Mat2::IDENTITY;
    let mut out = Vec::with_capacity(h.grid().len());
    for ((&hm, &pm), &g) in h.h.values().iter().zip(p.p.values()).zip(h.base.g.values()) {
        out.push(((one - pm).inverse() * (one - pm * pm) * g.inverse() * hm * (one - pm)).scale(0.5));
    }
    Ok(Field::new(*h.grid(), out)?)
}

/// 𝐉h = hJ, i.e. (𝐉h)(X, Y) = h(X, JY).
pub fn acs_on_am(h: &TangentAm) -> TangentAm {
    let hj = h.h.zip_with(&h.base.j, |h, j| (h * j).sym()).expect("same grid");
    TangentAm::from_parts(h.base.clone(), hj)
}

/// Ω(a, b) = ∫ tr(A J B) dμ, evaluated as ½∫(tr(AJB) − tr(BJA)) dμ so that
/// swapping the arguments flips the sign bit for bit.
pub fn fundamental_form(a: &TangentAm, b: &TangentAm) -> AssocResult<f64> {
    same_base(a, b)?;
    let vals: Vec<f64> = a
        .h
        .values()
        .iter()
        .zip(b.h.values())
        .zip(a.base.g.values().iter().zip(a.base.j.values()))
        .map(|((&ha, &hb), (&g, &j))| {
            let gi = g.inverse();
            let (am, bm) = (gi * ha, gi * hb);
            0.5 * ((am * j * bm).trace() - (bm * j * am).trace())
        })
        .collect();
    Ok(crate::fields::integrate(&Field::new(*a.grid(), vals)?))
}

/// Pointwise polar projection of an arbitrary metric onto the associated ones.
pub fn project_to_associated(gp: &MatField) -> AssocResult<AssocPair> {
    let mut gs = Vec::with_capacity(gp.grid().len());
    let mut js = Vec::with_capacity(gp.grid().len());
    for (idx, &m) in gp.values().iter().enumerate() {
        if !(m.det() > 0.0) || m.a <= 0.0 {
            return Err(AssocError::Singular(idx));
        }
        let a = -(m.inverse() * OMEGA);
        let h = (-(a * a)).sym().sym_apply(f64::sqrt);
        js.push(a * h.inverse());
        gs.push((m * h).sym());
    }
    let grid = *gp.grid();
    AssocPair::new(Field::new(grid, gs)?, Field::new(grid, js)?)
}

fn check_hermitian(g: &MatField, j: &MatField) -> AssocResult<()> {
    for (idx, (&m, &jm)) in g.values().iter().zip(j.values()).enumerate() {
        let d = (jm.transpose() * m * jm - m).max_abs();
        if !(d <= VALIDATION_TOL * m.max_abs() * (1.0 + jm.max_abs() * jm.max_abs())) {
            return Err(AssocError::Invariant { what: "J-Hermitian metric", index: idx, defect: d });
        }
        if !(m.det() > 0.0 && m.a > 0.0) {
            return Err(AssocError::Invariant { what: "positive definite", index: idx, defect: m.det() });
        }
    }
    Ok(())
}

fn transport(g: &MatField, p: &CayleyOperator, forward: bool) -> AssocResult<MatField> {
    let out = g.zip_with(&p.p, |m, pm| {
        let s = if forward { cayley_factor(pm) } else { cayley_factor(-pm) };
        (s.transpose() * m + m * s).scale(0.5)
    })?;
    Ok(out)
}

/// Carries a J₀-Hermitian metric to a J-Hermitian one, J the Cayley image of P.
pub fn fiber_transport(g0p: &MatField, p: &CayleyOperator) -> AssocResult<MatField> {
    check_hermitian(g0p, p.base.j())?;
    let out = transport(g0p, p, true)?;
    check_hermitian(&out, p.image.j())?;
    Ok(out)
}

/// Inverse map of the fibers, J-Hermitian back to J₀-Hermitian.
pub fn fiber_transport_inverse(gp: &MatField, p: &CayleyOperator) -> AssocResult<MatField> {
    check_hermitian(gp, p.image.j())?;
    let out = transport(gp, p, false)?;
    check_hermitian(&out, p.base.j())?;
    Ok(out)
}

/// ∂̄(J)f = ∂f/∂z̄ − p̄ ∂f/∂z, with ∂ = ½(e₁ − i e₂), ∂̄ = ½(e₁ + i e₂) along the
/// g₀-orthonormal frame. Torus partials are spectral; the sphere z-partial
/// uses open fourth-order stencils.
pub fn beltrami_apply(f: &ComplexField, p: &CayleyOperator) -> AssocResult<ComplexField> {
    let mode = match f.grid().chart() {
        Chart::Torus => DerivMode::Spectral,
        Chart::Sphere => DerivMode::Fd4Open,
    };
    beltrami_apply_with(f, p, mode)
}

/// As [`beltrami_apply`] with an explicit mode for the second axis.
pub fn beltrami_apply_with(f: &ComplexField, p: &CayleyOperator, axis2: DerivMode) -> AssocResult<ComplexField> {
    if f.grid() != p.grid() {
        return Err(FieldError::GridMismatch.into());
    }
    let axis1 = if axis2 == DerivMode::Spectral || f.grid().chart() == Chart::Sphere { DerivMode::Spectral } else { axis2 };
    let d = |part: &ScalarField| [partial_with(part, Axis::One, axis1), partial_with(part, Axis::Two, axis2)];
    let [rx, ry] = d(&f.re());
    let [ix, iy] = d(&f.im());
    let pc = p.to_complex();
    let chart = f.grid().chart();
    let mut out = Vec::with_capacity(f.grid().len());
    for idx in 0..f.grid().len() {
        let (_, x2) = f.grid().coords(idx);
        let fr = frame(chart, x2);
        let e1 = Complex64::new(rx.values()[idx], ix.values()[idx]) * fr.a;
        let e2 = Complex64::new(ry.values()[idx], iy.values()[idx]) * fr.d;
        let i = Complex64::i();
        let dz = 0.5 * (e1 - i * e2);
        let dzb = 0.5 * (e1 + i * e2);
        out.push(dzb - pc.values()[idx].conj() * dz);
    }
    Ok(Field::new(*f.grid(), out)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_operator_roundtrip() {
        let c = Complex64::new(0.3, -0.7);
        assert_eq!(frame_operator_to_complex(complex_to_frame_operator(c)), c);
    }

    #[test]
    fn standard_pairs_are_associated() {
        for grid in [Grid::torus(8).unwrap(), Grid::sphere(8).unwrap()] {
            assert!(AssocPair::standard(grid).defects().max() < 1e-14);
        }
    }

    #[test]
    fn square_of_frame_operator_is_modulus() {
        let m = complex_to_frame_operator(Complex64::new(0.3, 0.4));
        assert!((m * m - Mat2::scalar(0.25)).max_abs() < 1e-15);
    }
}
