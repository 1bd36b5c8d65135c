//! Weak Riemannian structures on the manifold of inner products at a point:
//! connections, curvature, sectional curvature and closed-form geodesics for
//! the flat, conformally flat, homogeneous, DeWitt, canonical and the
//! non-Riemannian (volume-preserving connection) structures.
//!
//! Tangent vectors are symmetric matrices a, b, c; capital letters denote the
//! operators A = g⁻¹a etc.

use thiserror::Error;

use crate::matalg::{mat_exp, spd_sqrt, sym_eigen, MatError, SpdMatrix, SquareMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("t = {t} outside the domain of the geodesic (blow-up at t = {blowup})")]
    Domain { t: f64, blowup: f64 },
    #[error("degenerate plane: Gram determinant {0:e}")]
    DegeneratePlane(f64),
    #[error("input is not symmetric")]
    NotSymmetric,
}

pub type PointResult<T> = Result<T, PointError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Flat,
    ConformallyFlat,
    Homogeneous,
    DeWitt,
    NonRiemannian,
    Canonical,
}

impl StructureKind {
    pub const ALL: [StructureKind; 6] = [Self::Flat, Self::ConformallyFlat, Self::Homogeneous, Self::DeWitt, Self::NonRiemannian, Self::Canonical];

    pub fn name(self) -> &'static str {
        match self {
            Self::Flat => "flat",
            Self::ConformallyFlat => "conformally-flat",
            Self::Homogeneous => "homogeneous",
            Self::DeWitt => "dewitt",
            Self::NonRiemannian => "non-riemannian",
            Self::Canonical => "canonical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakStructure {
    pub kind: StructureKind,
    /// Weight of the tr·tr term (flat, homogeneous, DeWitt).
    pub alpha: f64,
    /// Reference metric g₀ (flat, conformally flat); identity when absent.
    pub reference: Option<SpdMatrix>,
}

impl WeakStructure {
    pub fn new(kind: StructureKind, alpha: f64, reference: Option<SpdMatrix>) -> Self {
        Self { kind, alpha, reference }
    }

    pub fn flat(alpha: f64, reference: Option<SpdMatrix>) -> Self {
        Self::new(StructureKind::Flat, alpha, reference)
    }

    pub fn conformally_flat(reference: Option<SpdMatrix>) -> Self {
        Self::new(StructureKind::ConformallyFlat, 0.0, reference)
    }

    pub fn homogeneous(alpha: f64) -> Self {
        Self::new(StructureKind::Homogeneous, alpha, None)
    }

    pub fn dewitt(alpha: f64) -> Self {
        Self::new(StructureKind::DeWitt, alpha, None)
    }

    pub fn non_riemannian() -> Self {
        Self::new(StructureKind::NonRiemannian, 0.0, None)
    }

    pub fn canonical() -> Self {
        Self::new(StructureKind::Canonical, 0.0, None)
    }

    fn reference_for(&self, n: usize) -> PointResult<SquareMatrix> {
        match &self.reference {
            Some(r) if r.dim() != n => Err(MatError::DimensionMismatch(r.dim(), n).into()),
            Some(r) => Ok(r.matrix().clone()),
            None => Ok(SquareMatrix::identity(n)),
        }
    }

    fn check_alpha(&self, n: usize) -> PointResult<()> {
        let uses_alpha = matches!(self.kind, StructureKind::Flat | StructureKind::DeWitt | StructureKind::Homogeneous);
        if uses_alpha && (1.0 + self.alpha * n as f64).abs() < 1e-12 {
            return Err(PointError::Unsupported(format!("alpha = -1/{n} is degenerate")));
        }
        Ok(())
    }
}

fn tr(m: &SquareMatrix) -> f64 {
    m.trace()
}

fn traceless(a: &SquareMatrix, g: &SquareMatrix, big_a: &SquareMatrix) -> SquareMatrix {
    a - &g.scale(tr(big_a) / a.dim() as f64)
}

fn check_sym(ms: &[&SquareMatrix], n: usize) -> PointResult<()> {
    for m in ms {
        if m.dim() != n {
            return Err(MatError::DimensionMismatch(m.dim(), n).into());
        }
        if !m.is_symmetric(1e-12) {
            return Err(PointError::NotSymmetric);
        }
    }
    Ok(())
}

/// ∇_a b for the selected structure; `db_a` is the derivative of the field b along a.
pub fn covariant_derivative(s: &WeakStructure, g: &SpdMatrix, a: &SquareMatrix, b: &SquareMatrix, db_a: &SquareMatrix) -> PointResult<SquareMatrix> {
    let n = g.dim();
    check_sym(&[a, b, db_a], n)?;
    s.check_alpha(n)?;
    let gi = g.inverse()?;
    let (am, bm) = (&gi * a, &gi * b);
    let sym_prod = &(a * &bm) + &(b * &am);
    let homog = db_a - &sym_prod.scale(0.5);
    let trace_terms = &b.scale(tr(&am)) + &a.scale(tr(&bm));
    let nf = n as f64;
    Ok(match s.kind {
        StructureKind::Flat => db_a.clone(),
        StructureKind::Homogeneous => homog,
        StructureKind::Canonical | StructureKind::DeWitt => {
            let alpha = if s.kind == StructureKind::Canonical { 0.0 } else { s.alpha };
            let ip = tr(&(&am * &bm)) + alpha * tr(&am) * tr(&bm);
            &(&homog + &trace_terms.scale(0.25)) - &g.scale(ip / (4.0 * (1.0 + alpha * nf)))
        }
        StructureKind::NonRiemannian => &homog + &trace_terms.scale(0.125),
        StructureKind::ConformallyFlat => {
            let g0 = s.reference_for(n)?;
            let g0i = g0.inverse()?;
            let ip0 = tr(&(&(&g0i * a) * &(&g0i * b)));
            let corr = &(&g0 * &gi) * &g0;
            &(db_a + &trace_terms.scale(0.25)) - &corr.scale(0.25 * ip0)
        }
    })
}

/// R(a, b)c for constant directions a, b, c.
pub fn curvature_tensor(s: &WeakStructure, g: &SpdMatrix, a: &SquareMatrix, b: &SquareMatrix, c: &SquareMatrix) -> PointResult<SquareMatrix> {
    let n = g.dim();
    check_sym(&[a, b, c], n)?;
    s.check_alpha(n)?;
    let nf = n as f64;
    let gm = g.matrix();
    let gi = g.inverse()?;
    let (am, bm, cm) = (&gi * a, &gi * b, &gi * c);
    let comm = |x: &SquareMatrix, y: &SquareMatrix| &(x * y) - &(y * x);
    let homog = (gm * &comm(&comm(&am, &bm), &cm)).scale(-0.25);
    let (ta, tb, tc) = (tr(&am), tr(&bm), tr(&cm));
    Ok(match s.kind {
        StructureKind::Flat => SquareMatrix::zeros(n),
        StructureKind::Homogeneous => homog,
        StructureKind::Canonical | StructureKind::DeWitt => {
            let alpha = if s.kind == StructureKind::Canonical { 0.0 } else { s.alpha };
            let ip = |x: &SquareMatrix, y: &SquareMatrix| tr(&(x * y)) + alpha * tr(x) * tr(y);
            let trace_part = (&b.scale(ta) - &a.scale(tb)).scale(-tc / 16.0);
            let k = nf / (16.0 * (1.0 + alpha * nf));
            let bt = traceless(b, gm, &bm);
            let at = traceless(a, gm, &am);
            let tl = (&bt.scale(ip(&am, &cm)) - &at.scale(ip(&bm, &cm))).scale(k);
            &(&homog + &trace_part) + &tl
        }
        StructureKind::NonRiemannian => &homog - &(&b.scale(ta) - &a.scale(tb)).scale(tc / 64.0),
        StructureKind::ConformallyFlat => {
            let g0 = s.reference_for(n)?;
            let g0i = g0.inverse()?;
            let (a0, b0, c0) = (&g0i * a, &g0i * b, &g0i * c);
            let gg = &gi * &g0;
            let id = SquareMatrix::identity(n);
            let t1 = (&b.scale(4.0 * tr(&(&am * &cm)) + ta * tc) - &a.scale(4.0 * tr(&(&bm * &cm)) + tb * tc)).scale(-1.0 / 16.0);
            let t2 = (&(&g0 * &(&bm.scale(4.0) + &id.scale(tb))) * &gg).scale(-tr(&(&a0 * &c0)) / 16.0);
            let t3 = (&(&g0 * &(&am.scale(4.0) + &id.scale(ta))) * &gg).scale(tr(&(&b0 * &c0)) / 16.0);
            let t4 = (&b.scale(tr(&(&a0 * &c0))) - &a.scale(tr(&(&b0 * &c0)))).scale(tr(&(&gg * &gg)) / 16.0);
            &(&(&t1 + &t2) + &t3) + &t4
        }
    })
}

/// Pointwise inner product of the structure at g.
pub fn inner_product(s: &WeakStructure, g: &SpdMatrix, a: &SquareMatrix, b: &SquareMatrix) -> PointResult<f64> {
    let n = g.dim();
    check_sym(&[a, b], n)?;
    s.check_alpha(n)?;
    let gi = g.inverse()?;
    let (am, bm) = (&gi * a, &gi * b);
    let tab = tr(&(&am * &bm));
    let tt = tr(&am) * tr(&bm);
    let sd = g.det().sqrt();
    Ok(match s.kind {
        StructureKind::Flat => {
            let g0i = s.reference_for(n)?.inverse()?;
            let (a0, b0) = (&g0i * a, &g0i * b);
            tr(&(&a0 * &b0)) + s.alpha * tr(&a0) * tr(&b0)
        }
        StructureKind::ConformallyFlat => {
            let g0 = s.reference_for(n)?;
            let g0i = g0.inverse()?;
            let rho = (g.det() / g0.det()).sqrt();
            tr(&(&(&g0i * a) * &(&g0i * b))) * rho
        }
        StructureKind::Homogeneous => tab + s.alpha * tt,
        StructureKind::DeWitt => (tab + s.alpha * tt) * sd,
        StructureKind::Canonical => tab * sd,
        StructureKind::NonRiemannian => return Err(PointError::Unsupported("the non-Riemannian connection has no metric".into())),
    })
}

/// Gram-normalized (R(a,b)b, a) / (‖a‖²‖b‖² − (a,b)²).
pub fn sectional_curvature_point(s: &WeakStructure, g: &SpdMatrix, a: &SquareMatrix, b: &SquareMatrix) -> PointResult<f64> {
    let aa = inner_product(s, g, a, a)?;
    let bb = inner_product(s, g, b, b)?;
    let ab = inner_product(s, g, a, b)?;
    let gram = aa * bb - ab * ab;
    if !(gram.abs() > 1e-10 * (aa * bb).abs()) {
        return Err(PointError::DegeneratePlane(gram));
    }
    let r = curvature_tensor(s, g, a, b, b)?;
    Ok(inner_product(s, g, &r, a)? / gram)
}

/// Data of the canonical / DeWitt geodesic: q(t) = 1 + t·trA/4, the traceless
/// part B of A and r = ¼√(n tr B² / (1 + αn)).
struct VolumeGeodesic {
    tr_a: f64,
    b: SquareMatrix,
    r: f64,
    n: f64,
}

fn volume_geodesic(s: &WeakStructure, g0: &SpdMatrix, a0: &SquareMatrix) -> PointResult<VolumeGeodesic> {
    let n = g0.dim();
    let nf = n as f64;
    let alpha = if s.kind == StructureKind::DeWitt { s.alpha } else { 0.0 };
    if !(1.0 + alpha * nf > 0.0) {
        return Err(PointError::Unsupported(format!("geodesics need alpha > -1/{n}")));
    }
    let am = &g0.inverse()? * a0;
    let tr_a = tr(&am);
    let b = &am - &SquareMatrix::identity(n).scale(tr_a / nf);
    let r = 0.25 * (nf * tr(&(&b * &b)).max(0.0) / (1.0 + alpha * nf)).sqrt();
    Ok(VolumeGeodesic { tr_a, b, r, n: nf })
}

fn spd(m: SquareMatrix) -> PointResult<SpdMatrix> {
    Ok(SpdMatrix::new(m.symmetric_part())?)
}

/// Closed-form geodesic through g0 with initial velocity a0.
pub fn geodesic_point(s: &WeakStructure, g0: &SpdMatrix, a0: &SquareMatrix, t: f64) -> PointResult<SpdMatrix> {
    let n = g0.dim();
    check_sym(&[a0], n)?;
    s.check_alpha(n)?;
    let gm = g0.matrix();
    match s.kind {
        StructureKind::Flat => {
            let out = gm + &a0.scale(t);
            if SpdMatrix::new(out.clone()).is_err() {
                return Err(PointError::Domain { t, blowup: flat_blowup(g0, a0, t)? });
            }
            spd(out)
        }
        StructureKind::Homogeneous => {
            let am = &g0.inverse()? * a0;
            spd(gm * &mat_exp(&am.scale(t))?)
        }
        StructureKind::Canonical | StructureKind::DeWitt => {
            let v = volume_geodesic(s, g0, a0)?;
            let q = 1.0 + t * v.tr_a / 4.0;
            if v.r == 0.0 {
                if q <= 0.0 {
                    return Err(PointError::Domain { t, blowup: -4.0 / v.tr_a });
                }
                return spd(gm.scale(q.powf(4.0 / v.n)));
            }
            // The continuous branch of the arctan is the angle of (q, r t).
            let theta = (v.r * t).atan2(q);
            let factor = (q * q + v.r * v.r * t * t).powf(2.0 / v.n);
            spd((gm * &mat_exp(&v.b.scale(theta / v.r))?).scale(factor))
        }
        StructureKind::NonRiemannian => {
            let v = volume_geodesic(&WeakStructure::canonical(), g0, a0)?;
            let beta = v.tr_a / 4.0;
            if beta == 0.0 {
                return spd(gm * &mat_exp(&v.b.scale(t))?);
            }
            let q = beta * t + 1.0;
            if q <= 0.0 {
                return Err(PointError::Domain { t, blowup: -1.0 / beta });
            }
            spd((gm * &mat_exp(&v.b.scale(q.ln() / beta))?).scale(q.powf(4.0 / v.n)))
        }
        StructureKind::ConformallyFlat => Err(PointError::Unsupported("no closed-form geodesic for the conformally flat structure".into())),
    }
}

fn flat_blowup(g0: &SpdMatrix, a0: &SquareMatrix, t: f64) -> PointResult<f64> {
    let r = spd_sqrt(g0)?;
    let ri = r.inverse()?;
    let m = &(&ri * a0) * &ri;
    let (vals, _) = sym_eigen(&m);
    let hit = vals
        .iter()
        .filter(|&&l| l * t < 0.0)
        .map(|&l| -1.0 / l)
        .min_by(|x, y| x.abs().total_cmp(&y.abs()))
        .unwrap_or(f64::INFINITY);
    Ok(hit)
}

/// μ(g_t)/μ(g₀) of the canonical / DeWitt geodesic: q(t)² + r²t².
pub fn geodesic_volume_factor(s: &WeakStructure, g0: &SpdMatrix, a0: &SquareMatrix, t: f64) -> PointResult<f64> {
    let v = volume_geodesic(s, g0, a0)?;
    let q = 1.0 + t * v.tr_a / 4.0;
    Ok(q * q + v.r * v.r * t * t)
}

/// Default central-difference step 1e−3/(1 + ‖a0‖).
pub fn default_step(a0: &SquareMatrix) -> f64 {
    1e-3 / (1.0 + a0.norm_fro())
}

/// ‖∇_ġ ġ‖ at t from central differences of the closed-form geodesic.
pub fn fd_geodesic_residual(s: &WeakStructure, g0: &SpdMatrix, a0: &SquareMatrix, t: f64, dt: f64) -> PointResult<f64> {
    let gp = geodesic_point(s, g0, a0, t + dt)?;
    let gc = geodesic_point(s, g0, a0, t)?;
    let gm = geodesic_point(s, g0, a0, t - dt)?;
    let vel = (gp.matrix() - gm.matrix()).scale(0.5 / dt).symmetric_part();
    let acc = (&(gp.matrix() - &gc.matrix().scale(2.0)) + gm.matrix()).scale(1.0 / (dt * dt)).symmetric_part();
    Ok(covariant_derivative(s, &gc, &vel, &vel, &acc)?.norm_fro())
}

/// ∇_a∇_b c − ∇_b∇_a c for constant a, b, c, differentiating the
/// connection in g by central differences of step h.
pub fn fd_curvature(s: &WeakStructure, g: &SpdMatrix, a: &SquareMatrix, b: &SquareMatrix, c: &SquareMatrix, h: f64) -> PointResult<SquareMatrix> {
    let n = g.dim();
    let zero = SquareMatrix::zeros(n);
    let at = |m: &SquareMatrix| -> PointResult<SpdMatrix> { spd(g.matrix() + m) };
    let x = |gg: &SpdMatrix| covariant_derivative(s, gg, b, c, &zero);
    let y = |gg: &SpdMatrix| covariant_derivative(s, gg, a, c, &zero);
    let dx_a = (&x(&at(&a.scale(h))?)? - &x(&at(&a.scale(-h))?)?).scale(0.5 / h).symmetric_part();
    let dy_b = (&y(&at(&b.scale(h))?)? - &y(&at(&b.scale(-h))?)?).scale(0.5 / h).symmetric_part();
    let first = covariant_derivative(s, g, a, &x(g)?.symmetric_part(), &dx_a)?;
    let second = covariant_derivative(s, g, b, &y(g)?.symmetric_part(), &dy_b)?;
    Ok(&first - &second)
}

/// Q(a, b) = tr(A) tr(B) √det g, parallel for the non-Riemannian connection.
pub fn volume_form_pairing(g: &SpdMatrix, a: &SquareMatrix, b: &SquareMatrix) -> PointResult<f64> {
    let gi = g.inverse()?;
    Ok(tr(&(&gi * a)) * tr(&(&gi * b)) * g.det().sqrt())
}
