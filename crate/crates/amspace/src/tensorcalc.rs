//! Levi-Civita calculus of 2D metric fields: Christoffels, curvature, the
//! operators L_X g, δ_g and □, and the total scalar curvature functional.
//!
//! Metric derivatives come from 2-jets. On the sphere chart the metric is
//! written g = S ĝ S with S = diag(s, 1/s), s = √(1−z²); ĝ is differentiated
//! numerically and S analytically, which keeps the jets accurate up to the
//! poles. Derivatives of other fields are spectral on the torus and in φ;
//! along z on the sphere they use open fourth-order stencils and should only
//! be trusted on |z| ≤ 0.9.
//!
//! Integrals here are against dμ_g = √det g dx¹dx² unless stated otherwise.

use thiserror::Error;

use crate::assoc::AssocPair;
use crate::fields::{integrate, partial_with, Axis, Chart, DerivMode, Field, FieldError, FieldValue, Grid, MatField, ScalarField, VectorField};
use crate::matalg::Mat2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("metric not positive definite at grid point {0}")]
    NotSpd(usize),
}

pub type TensorResult<T> = Result<T, TensorError>;

/// Γ[k][i][j] = Γ^k_{ij}; also used for (□a)^k_{ij}.
pub type Christoffel = [[[f64; 2]; 2]; 2];
pub type ChristoffelField = Field<Christoffel>;

impl FieldValue for Christoffel {
    fn finite(&self) -> bool {
        self.iter().flatten().flatten().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    g: MatField,
    z_mode: DerivMode,
}

impl MetricField {
    /// On the sphere chart the framed metric S⁻¹gS⁻¹ is differentiated
    /// spectrally in z, which assumes it is smooth and 2-periodic in z (true
    /// for metrics built from the chart's trigonometric families).
    pub fn new(g: MatField) -> TensorResult<Self> {
        if let Some(idx) = g.values().iter().position(|m| !(m.a > 0.0 && m.det() > 0.0)) {
            return Err(TensorError::NotSpd(idx));
        }
        Ok(Self { g: g.map(Mat2::sym), z_mode: DerivMode::Spectral })
    }

    pub fn with_z_mode(mut self, mode: DerivMode) -> Self {
        self.z_mode = mode;
        self
    }

    pub fn from_pair(pair: &AssocPair) -> Self {
        Self { g: pair.g().clone(), z_mode: DerivMode::Spectral }
    }

    pub fn standard(grid: Grid) -> Self {
        Self::from_pair(&AssocPair::standard(grid))
    }

    pub fn g(&self) -> &MatField {
        &self.g
    }

    pub fn grid(&self) -> &Grid {
        self.g.grid()
    }

    /// g + ε h, re-validated.
    pub fn perturbed(&self, h: &MatField, eps: f64) -> TensorResult<Self> {
        let g = self.g.zip_with(h, |g, h| g + h.scale(eps))?;
        Ok(Self::new(g)?.with_z_mode(self.z_mode))
    }

    pub fn sqrt_det(&self) -> ScalarField {
        self.g.map(|m| m.det().sqrt())
    }
}

/// Metric value and first and second partials at one lattice point.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub g: Mat2,
    pub gi: Mat2,
    pub dg: [Mat2; 2],
    pub ddg: [[Mat2; 2]; 2],
}

fn frame_s(chart: Chart, z: f64) -> [Mat2; 3] {
    match chart {
        Chart::Torus => [Mat2::IDENTITY, Mat2::ZERO, Mat2::ZERO],
        Chart::Sphere => {
            let s = (1.0 - z * z).sqrt();
            let s3 = s * s * s;
            let s5 = s3 * s * s;
            [Mat2::diag(s, 1.0 / s), Mat2::diag(-z / s, z / s3), Mat2::diag(-1.0 / s3, (1.0 + 2.0 * z * z) / s5)]
        }
    }
}

fn mat_partial(m: &MatField, axis: Axis, mode: DerivMode) -> MatField {
    let c = |r, k| partial_with(&m.component(r, k), axis, mode);
    MatField::from_components([&c(0, 0), &c(0, 1), &c(1, 0), &c(1, 1)]).expect("same grid")
}

fn field_mode(grid: &Grid, axis: Axis, z_mode: DerivMode) -> DerivMode {
    match (grid.chart(), axis) {
        (Chart::Sphere, Axis::Two) => z_mode,
        _ => DerivMode::Spectral,
    }
}

/// First partials of a matrix field using the module's default modes.
pub fn partials_mat(m: &MatField) -> [MatField; 2] {
    let g = *m.grid();
    [mat_partial(m, Axis::One, field_mode(&g, Axis::One, DerivMode::Fd4Open)), mat_partial(m, Axis::Two, field_mode(&g, Axis::Two, DerivMode::Fd4Open))]
}

pub fn partials_scalar(f: &ScalarField) -> [ScalarField; 2] {
    let g = *f.grid();
    [partial_with(f, Axis::One, field_mode(&g, Axis::One, DerivMode::Fd4Open)), partial_with(f, Axis::Two, field_mode(&g, Axis::Two, DerivMode::Fd4Open))]
}

pub fn partials_vector(x: &VectorField) -> [[ScalarField; 2]; 2] {
    // [component][axis]
    [partials_scalar(&x.component(0)), partials_scalar(&x.component(1))]
}

pub fn metric_jets(m: &MetricField) -> Vec<Jet> {
    let grid = *m.grid();
    let chart = grid.chart();
    let framed = m.g.map_at(|_, z, g| {
        let [s, _, _] = frame_s(chart, z);
        let si = s.inverse();
        si * g * si
    });
    let d1 = mat_partial(&framed, Axis::One, DerivMode::Spectral);
    let d2 = mat_partial(&framed, Axis::Two, field_mode(&grid, Axis::Two, m.z_mode));
    let d11 = mat_partial(&d1, Axis::One, DerivMode::Spectral);
    let d12 = mat_partial(&d1, Axis::Two, field_mode(&grid, Axis::Two, m.z_mode));
    let d22 = mat_partial(&d2, Axis::Two, field_mode(&grid, Axis::Two, m.z_mode));
    (0..grid.len())
        .map(|idx| {
            let (_, z) = grid.coords(idx);
            let [s, s1, s2] = frame_s(chart, z);
            let gh = framed.values()[idx];
            let (a, b) = (d1.values()[idx], d2.values()[idx]);
            let (aa, ab, bb) = (d11.values()[idx], d12.values()[idx], d22.values()[idx]);
            let g = m.g.values()[idx];
            let dz = s1 * gh * s + s * b * s + s * gh * s1;
            let dpz = s1 * a * s + s * ab * s + s * a * s1;
            let dzz = s2 * gh * s + s * gh * s2 + (s1 * gh * s1).scale(2.0) + (s1 * b * s + s * b * s1).scale(2.0) + s * bb * s;
            let dpp = s * aa * s;
            Jet { g, gi: g.inverse(), dg: [s * a * s, dz], ddg: [[dpp, dpz], [dpz, dzz]] }
        })
        .collect()
}

fn christoffel_lower(dg: &[Mat2; 2]) -> [[[f64; 2]; 2]; 2] {
    // Γ_{l,ij} indexed [l][i][j]
    let mut out = [[[0.0; 2]; 2]; 2];
    for (l, row) in out.iter_mut().enumerate() {
        for (i, r) in row.iter_mut().enumerate() {
            for (j, v) in r.iter_mut().enumerate() {
                *v = 0.5 * (dg[i].get(j, l) + dg[j].get(i, l) - dg[l].get(i, j));
            }
        }
    }
    out
}

fn raise(gi: Mat2, low: &[[[f64; 2]; 2]; 2]) -> Christoffel {
    let mut out = [[[0.0; 2]; 2]; 2];
    for (k, row) in out.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                row[i][j] = gi.get(k, 0) * low[0][i][j] + gi.get(k, 1) * low[1][i][j];
            }
        }
    }
    out
}

/// Γ and its partials ∂_m Γ at one point.
fn christoffel_jet(jet: &Jet) -> (Christoffel, [Christoffel; 2]) {
    let low = christoffel_lower(&jet.dg);
    let gamma = raise(jet.gi, &low);
    let mut dgamma = [[[[0.0; 2]; 2]; 2]; 2];
    for (m, dgm) in dgamma.iter_mut().enumerate() {
        let dlow = christoffel_lower(&[jet.ddg[m][0], jet.ddg[m][1]]);
        let dgi = -(jet.gi * jet.dg[m] * jet.gi);
        let a = raise(dgi, &low);
        let b = raise(jet.gi, &dlow);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    dgm[k][i][j] = a[k][i][j] + b[k][i][j];
                }
            }
        }
    }
    (gamma, dgamma)
}

pub fn christoffels(m: &MetricField) -> ChristoffelField {
    let vals = metric_jets(m).iter().map(|j| christoffel_jet(j).0).collect();
    Field::new(*m.grid(), vals).expect("finite metric jets")
}

/// R^a_{bcd} = ∂_cΓ^a_{db} − ∂_dΓ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}.
fn riemann(gamma: &Christoffel, dgamma: &[Christoffel; 2], a: usize, b: usize, c: usize, d: usize) -> f64 {
    let mut r = dgamma[c][a][d][b] - dgamma[d][a][c][b];
    for e in 0..2 {
        r += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
    }
    r
}

fn ricci_at(jet: &Jet) -> Mat2 {
    let (gamma, dgamma) = christoffel_jet(jet);
    let ric = |b: usize, d: usize| (0..2).map(|a| riemann(&gamma, &dgamma, a, b, a, d)).sum::<f64>();
    Mat2::new(ric(0, 0), ric(0, 1), ric(1, 0), ric(1, 1)).sym()
}

pub fn gaussian_curvature(m: &MetricField) -> ScalarField {
    let vals = metric_jets(m)
        .iter()
        .map(|jet| {
            let (gamma, dgamma) = christoffel_jet(jet);
            let r1212: f64 = (0..2).map(|a| jet.g.get(0, a) * riemann(&gamma, &dgamma, a, 1, 0, 1)).sum();
            r1212 / jet.g.det()
        })
        .collect();
    Field::new(*m.grid(), vals).expect("finite metric jets")
}

/// r = g^{ij} Ric_{ij} (= 2K in dimension 2).
pub fn scalar_curvature(m: &MetricField) -> ScalarField {
    let vals = metric_jets(m).iter().map(|jet| (jet.gi * ricci_at(jet)).trace()).collect();
    Field::new(*m.grid(), vals).expect("finite metric jets")
}

pub fn ricci(m: &MetricField) -> MatField {
    let vals = metric_jets(m).iter().map(ricci_at).collect();
    Field::new(*m.grid(), vals).expect("finite metric jets")
}

/// Anti-Hermitian part ½(Ric − JᵀRic J).
pub fn aric(pair: &AssocPair) -> MatField {
    let ric = ricci(&MetricField::from_pair(pair));
    ric.zip_with(pair.j(), |r, j| (r - j.transpose() * r * j).scale(0.5)).expect("same grid")
}

/// g(a, b) = tr(g⁻¹ a g⁻¹ b), pointwise.
pub fn metric_pairing(m: &MetricField, a: &MatField, b: &MatField) -> TensorResult<ScalarField> {
    if a.grid() != m.grid() || b.grid() != m.grid() {
        return Err(FieldError::GridMismatch.into());
    }
    let vals = (0..m.grid().len())
        .map(|idx| {
            let gi = m.g.values()[idx].inverse();
            (gi * a.values()[idx] * gi * b.values()[idx]).trace()
        })
        .collect();
    Ok(Field::new(*m.grid(), vals)?)
}

/// ∫ f dμ_g.
pub fn integrate_volume(m: &MetricField, f: &ScalarField) -> TensorResult<f64> {
    Ok(integrate(&f.zip_with(&m.sqrt_det(), |a, b| a * b)?))
}

/// (L_X g)_{ij} = X^k ∂_k g_{ij} + g_{kj} ∂_i X^k + g_{ik} ∂_j X^k.
pub fn lie_metric(x: &VectorField, m: &MetricField) -> TensorResult<MatField> {
    if x.grid() != m.grid() {
        return Err(FieldError::GridMismatch.into());
    }
    let jets = metric_jets(m);
    let dx = partials_vector(x);
    let vals = (0..m.grid().len())
        .map(|idx| {
            let jet = &jets[idx];
            let xv = x.values()[idx];
            // dxm[k][i] = ∂_i X^k
            let dxm = Mat2::new(dx[0][0].values()[idx], dx[0][1].values()[idx], dx[1][0].values()[idx], dx[1][1].values()[idx]);
            let transport = jet.dg[0].scale(xv[0]) + jet.dg[1].scale(xv[1]);
            let gd = jet.g * dxm;
            transport + gd + gd.transpose()
        })
        .collect();
    Ok(Field::new(*m.grid(), vals)?)
}

/// ∇_k h_{ij} at every point, indexed [k] → matrix (i, j).
fn covariant_form_derivative(h: &MatField, m: &MetricField) -> TensorResult<(Vec<Jet>, Vec<Christoffel>, Vec<[Mat2; 2]>)> {
    if h.grid() != m.grid() {
        return Err(FieldError::GridMismatch.into());
    }
    let jets = metric_jets(m);
    let gammas: Vec<Christoffel> = jets.iter().map(|j| christoffel_jet(j).0).collect();
    let dh = partials_mat(h);
    let nab = (0..m.grid().len())
        .map(|idx| {
            let hv = h.values()[idx];
            let gam = &gammas[idx];
            let mut out = [Mat2::ZERO; 2];
            for (k, o) in out.iter_mut().enumerate() {
                let d = dh[k].values()[idx];
                let mut v = [[0.0; 2]; 2];
                for (i, row) in v.iter_mut().enumerate() {
                    for (j, e) in row.iter_mut().enumerate() {
                        let mut s = d.get(i, j);
                        for l in 0..2 {
                            s -= gam[l][k][i] * hv.get(l, j) + gam[l][k][j] * hv.get(i, l);
                        }
                        *e = s;
                    }
                }
                *o = Mat2::new(v[0][0], v[0][1], v[1][0], v[1][1]);
            }
            out
        })
        .collect();
    Ok((jets, gammas, nab))
}

/// (δ_g h)^i = −∇_j h^{ij}.
pub fn divergence_form(h: &MatField, m: &MetricField) -> TensorResult<VectorField> {
    let (jets, _, nab) = covariant_form_derivative(h, m)?;
    let vals = (0..m.grid().len())
        .map(|idx| {
            let gi = jets[idx].gi;
            // w_a = g^{jb} ∇_j h_{ab}
            let mut w = [0.0; 2];
            for (a, wa) in w.iter_mut().enumerate() {
                for j in 0..2 {
                    for b in 0..2 {
                        *wa += gi.get(j, b) * nab[idx][j].get(a, b);
                    }
                }
            }
            let v = gi.apply(w);
            [-v[0], -v[1]]
        })
        .collect();
    Ok(Field::new(*m.grid(), vals)?)
}

/// (□a)^k_{ij} = ½ g^{kl}(∇_i a_{jl} + ∇_j a_{il} − ∇_l a_{ij}).
pub fn box_operator(a: &MatField, m: &MetricField) -> TensorResult<ChristoffelField> {
    let (jets, _, nab) = covariant_form_derivative(a, m)?;
    let vals = (0..m.grid().len())
        .map(|idx| {
            let n = &nab[idx];
            let mut low = [[[0.0; 2]; 2]; 2];
            for (l, row) in low.iter_mut().enumerate() {
                for (i, r) in row.iter_mut().enumerate() {
                    for (j, v) in r.iter_mut().enumerate() {
                        *v = 0.5 * (n[i].get(j, l) + n[j].get(i, l) - n[l].get(i, j));
                    }
                }
            }
            raise(jets[idx].gi, &low)
        })
        .collect();
    Ok(Field::new(*m.grid(), vals)?)
}

/// div X = (1/√det g) ∂_i(√det g X^i).
pub fn divergence_vector(x: &VectorField, m: &MetricField) -> TensorResult<ScalarField> {
    let sd = m.sqrt_det();
    let wx = x.zip_with(&sd, |v, s| [v[0] * s, v[1] * s])?;
    let d = partials_vector(&wx);
    let vals = (0..m.grid().len()).map(|idx| (d[0][0].values()[idx] + d[1][1].values()[idx]) / sd.values()[idx]).collect();
    Ok(Field::new(*m.grid(), vals)?)
}

/// (grad f)^i = g^{ij} ∂_j f.
pub fn gradient(f: &ScalarField, m: &MetricField) -> TensorResult<VectorField> {
    let d = partials_scalar(f);
    let df = VectorField::from_components(&d[0], &d[1])?;
    Ok(df.zip_with(m.g(), |v, g| g.inverse().apply(v))?)
}

pub fn apply_operator(a: &MatField, x: &VectorField) -> TensorResult<VectorField> {
    Ok(a.zip_with(x, |a, v| a.apply(v))?)
}

/// Analyst's Laplacian div grad f.
pub fn laplacian(f: &ScalarField, m: &MetricField) -> TensorResult<ScalarField> {
    divergence_vector(&gradient(f, m)?, m)
}

/// δ_g δ_g h = ∇_i∇_j h^{ij}.
pub fn double_divergence(h: &MatField, m: &MetricField) -> TensorResult<ScalarField> {
    let d = divergence_form(h, m)?;
    Ok(divergence_vector(&d, m)?.map(|v| -v))
}

/// First variation of r along h: −Δ(tr_g h) + ∇_i∇_j h^{ij} − g(h, Ric).
pub fn scalar_curvature_variation(m: &MetricField, h: &MatField) -> TensorResult<ScalarField> {
    let trh = h.zip_with(m.g(), |h, g| (g.inverse() * h).trace())?;
    let lap = laplacian(&trh, m)?;
    let dd = double_divergence(h, m)?;
    let hr = metric_pairing(m, h, &ricci(m))?;
    let a = dd.zip_with(&lap, |d, l| d - l)?;
    Ok(a.zip_with(&hr, |a, b| a - b)?)
}

/// R(g) = ∫ r dμ_g.
pub fn total_scalar(m: &MetricField) -> TensorResult<f64> {
    integrate_volume(m, &scalar_curvature(m))
}

/// ⟨½ r g − Ric, h⟩_g = ∫ g(½ r g − Ric, h) dμ_g.
pub fn gradient_pairing(m: &MetricField, h: &MatField) -> TensorResult<f64> {
    let r = scalar_curvature(m);
    let ric = ricci(m);
    let grad = m.g().zip_with(&r, |g, r| g.scale(0.5 * r))?.zip_with(&ric, |a, b| a - b)?;
    integrate_volume(m, &metric_pairing(m, &grad, h)?)
}
