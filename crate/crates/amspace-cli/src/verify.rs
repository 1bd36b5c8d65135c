use std::f64::consts::PI;
use std::sync::Arc;

use amspace::amgeom::*;
use amspace::assoc::*;
use amspace::decomp::*;
use amspace::fields::*;
use amspace::matalg::{mat_exp, mat_tanh, Mat2, SpdMatrix, SquareMatrix};
use amspace::pointgeom::{self, StructureKind, WeakStructure};
use amspace::tensorcalc::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Row;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Group {
    All,
    Geodesics,
    Cayley,
    Decomp,
    Curvature,
    Gradient,
}

pub fn run(group: Group, grid: usize, seed: u64) -> Result<Vec<Row>, String> {
    let groups = match group {
        Group::All => vec![Group::Geodesics, Group::Cayley, Group::Decomp, Group::Curvature, Group::Gradient],
        g => vec![g],
    };
    let mut rows = Vec::new();
    for g in groups {
        // one stream per group, so `all` repeats the single-group output
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(g as u64));
        let out = match g {
            Group::Geodesics => geodesics(grid, &mut rng),
            Group::Cayley => cayley(grid, &mut rng),
            Group::Decomp => decomp(grid, &mut rng),
            Group::Curvature => curvature(grid, &mut rng),
            Group::Gradient => gradient(grid, &mut rng),
            Group::All => unreachable!(),
        };
        rows.extend(out.map_err(|e| format!("{g:?}: {e}"))?);
    }
    Ok(rows)
}

type Res<T> = Result<T, String>;

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// A few random low modes of the chart's basis family with sup|f| = cap.
fn random_modes(grid: Grid, rng: &mut ChaCha8Rng, cap: f64) -> ComplexField {
    let sphere = grid.chart() == Chart::Sphere;
    let terms: Vec<(f64, f64, Complex64, f64)> = (0..4)
        .map(|_| {
            let k = rng.gen_range(-3i64..=3) as f64;
            let l = rng.gen_range(-3i64..=3) as f64;
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (if sphere { k * PI } else { k }, l, c, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let f = Field::from_fn(grid, move |x1, x2| {
        terms
            .iter()
            .map(|&(k, l, c, ph)| c * (if sphere { k * x2 + l * x1 } else { k * x1 + l * x2 } + ph).cos())
            .sum::<Complex64>()
    });
    let m = f.max_abs().max(1e-300);
    f.map(|c| c * (cap / m))
}

fn random_p(grid: Grid, rng: &mut ChaCha8Rng) -> Res<CayleyOperator> {
    let base = Arc::new(AssocPair::standard(grid));
    let cap = rng.gen_range(0.1..0.8);
    CayleyOperator::from_complex(base, &random_modes(grid, rng, cap)).map_err(s)
}

fn random_operator(grid: Grid, rng: &mut ChaCha8Rng) -> MatField {
    chart_operator(&random_modes(grid, rng, 1.0))
}

fn rand_sym(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SquareMatrix {
    SquareMatrix::from_fn(n, |_, _| rng.gen_range(-scale..scale)).symmetric_part()
}

fn rand_spd(rng: &mut ChaCha8Rng, n: usize) -> Res<SpdMatrix> {
    let m = SquareMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    let p = &(&m * &m.transpose()) + &SquareMatrix::identity(n).scale(0.5);
    SpdMatrix::new(p.symmetric_part()).map_err(s)
}

fn max_rel_diff(a: &MatField, b: &MatField) -> Res<f64> {
    Ok(a.zip_with(b, |x, y| (x - y).max_abs() / y.max_abs().max(1.0)).map_err(s)?.max_abs())
}

fn form_diff(a: &MatField, b: &MatField) -> Res<f64> {
    Ok(a.zip_with(b, |p, q| (p - q).max_abs()).map_err(s)?.max_abs())
}

fn grids(n: usize) -> Res<[Grid; 2]> {
    Ok([Grid::torus(n).map_err(s)?, Grid::sphere(n).map_err(s)?])
}

/// sup over the grid of g̈ − ġ g⁻¹ ġ along the associated geodesic.
fn am_geodesic_residual(h: &TangentAm, t: f64, dt: f64) -> Res<f64> {
    let at = |u: f64| am_geodesic(h, u).map(|p| p.g().clone()).map_err(s);
    let (gm, g0, gp) = (at(t - dt)?, at(t)?, at(t + dt)?);
    let mut worst: f64 = 0.0;
    for idx in 0..g0.grid().len() {
        let (m, c, p) = (gm.values()[idx], g0.values()[idx], gp.values()[idx]);
        let v = (p - m).scale(0.5 / dt);
        let acc = (p - c.scale(2.0) + m).scale(1.0 / (dt * dt));
        worst = worst.max((acc - v * c.inverse() * v).max_abs());
    }
    Ok(worst)
}

fn geodesics(n: usize, rng: &mut ChaCha8Rng) -> Res<Vec<Row>> {
    let mut rows = Vec::new();
    for (name, st) in [
        ("canonical", WeakStructure::canonical()),
        ("homogeneous", WeakStructure::homogeneous(0.0)),
        ("dewitt-0.3", WeakStructure::dewitt(0.3)),
        ("non-riemannian", WeakStructure::non_riemannian()),
    ] {
        let mut worst = f64::INFINITY;
        for _ in 0..5 {
            let g = rand_spd(rng, 3)?;
            let a = rand_sym(rng, 3, 0.5);
            let r1 = pointgeom::fd_geodesic_residual(&st, &g, &a, 0.5, 0.04).map_err(s)?;
            let r2 = pointgeom::fd_geodesic_residual(&st, &g, &a, 0.5, 0.02).map_err(s)?;
            worst = worst.min((r1 / r2).log2());
        }
        rows.push(Row::at_least(format!("geodesics/{name}/order"), "n = 3, 5 random (g0, a0), t = 0.5, dt = 0.04 -> 0.02", worst, 1.9));
    }
    for grid in grids(n.min(64))? {
        let h = tangent_push(&random_operator(grid, rng), &random_p(grid, rng)?).map_err(s)?;
        let (r1, r2) = (am_geodesic_residual(&h, 0.7, 1e-2)?, am_geodesic_residual(&h, 0.7, 5e-3)?);
        rows.push(Row::at_least(format!("geodesics/associated-{:?}/order", grid.chart()).to_lowercase(), "random P and direction, t = 0.7, dt = 1e-2 -> 5e-3", (r1 / r2).log2(), 1.9));
    }
    let mut vol: f64 = 0.0;
    for st in [WeakStructure::canonical(), WeakStructure::dewitt(0.3)] {
        for _ in 0..10 {
            let g = rand_spd(rng, 3)?;
            let a = rand_sym(rng, 3, 0.8);
            for t in [0.3, 1.0, 2.5] {
                let gt = pointgeom::geodesic_point(&st, &g, &a, t).map_err(s)?;
                let f = pointgeom::geodesic_volume_factor(&st, &g, &a, t).map_err(s)?;
                vol = vol.max(((gt.det() / g.det()).sqrt() - f).abs() / f.max(1.0));
            }
        }
    }
    rows.push(Row::at_most("geodesics/volume-factor", "canonical and dewitt-0.3, 20 random launches, t in {0.3, 1, 2.5}", vol, 1e-10));
    let hom = WeakStructure::homogeneous(0.0);
    let mut det_drift: f64 = 0.0;
    for _ in 0..10 {
        let g0 = rand_spd(rng, 3)?;
        let raw = rand_sym(rng, 3, 1.0);
        let shift = (&g0.inverse().map_err(s)? * &raw).trace() / 3.0;
        let a = &raw - &g0.matrix().scale(shift);
        let gt = pointgeom::geodesic_point(&hom, &g0, &a, 1.5).map_err(s)?;
        det_drift = det_drift.max((gt.det() - g0.det()).abs() / g0.det().max(1.0));
    }
    rows.push(Row::at_most("geodesics/homogeneous/traceless-keeps-volume", "10 random launches with tr A = 0, t = 1.5", det_drift, 1e-12));
    Ok(rows)
}

fn cayley(n: usize, rng: &mut ChaCha8Rng) -> Res<Vec<Row>> {
    let [torus, sphere] = grids(n)?;
    let (mut pair_err, mut exp_err, mut tanh_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let grid = if i % 2 == 0 { torus } else { sphere };
        let base = Arc::new(AssocPair::standard(grid));
        let p = random_p(grid, rng)?;
        let back = cayley_from_pair(cayley_to_pair(&p).j(), base.clone()).map_err(s)?;
        pair_err = pair_err.max(form_diff(back.p(), p.p())?);

        let q = chart_operator(&random_modes(grid, rng, 1.5));
        let e = q.map(|m| m.exp());
        let j = base.j().zip_with(&e, |j, e| j * e).map_err(s)?;
        let pq = cayley_from_pair(&j, base.clone()).map_err(s)?;
        exp_err = exp_err.max(max_rel_diff(&pq.p().map(cayley_factor), &e)?);
        tanh_err = tanh_err.max(max_rel_diff(pq.p(), &q.map(|m| m.scale(0.5).tanh()))?);

        let dim = 2 + i % 3;
        let a = rand_sym(rng, dim, 2.0);
        let t = mat_tanh(&a).map_err(s)?;
        let one = SquareMatrix::identity(dim);
        let cay = &(&one + &t) * &(&one - &t).inverse().map_err(s)?;
        let e2 = mat_exp(&a.scale(2.0)).map_err(s)?;
        tanh_err = tanh_err.max((&cay - &e2).norm_fro() / e2.norm_fro());
    }
    let mut rows = vec![
        Row::at_most("cayley/pair-roundtrip", "100 random P, both charts", pair_err, 1e-11),
        Row::at_most("cayley/exponential-chart", "100 random J0 e^Q", exp_err, 1e-11),
        Row::at_most("cayley/tanh-exp-bridge", "100 random fields and matrices", tanh_err, 1e-11),
    ];

    let (mut anti, mut min_pos) = (0.0f64, f64::INFINITY);
    for grid in [torus, sphere] {
        for _ in 0..20 {
            let p = random_p(grid, rng)?;
            let a = tangent_push(&random_operator(grid, rng), &p).map_err(s)?;
            let b = tangent_push(&random_operator(grid, rng), &p).map_err(s)?;
            anti = anti.max((fundamental_form(&a, &b).map_err(s)? + fundamental_form(&b, &a).map_err(s)?).abs());
            min_pos = min_pos.min(fundamental_form(&a, &acs_on_am(&a)).map_err(s)?);
        }
    }
    rows.push(Row::absolute("cayley/omega-antisymmetry", "|Om(a,b) + Om(b,a)|, 40 random pairs", anti, 0.0, 0.0));
    rows.push(Row::at_least("cayley/omega-positive", "min Om(a, Ja), 40 random a", min_pos, f64::MIN_POSITIVE));

    let g8 = Grid::torus(8).map_err(s)?;
    let base = Arc::new(AssocPair::standard(g8));
    let mut konst = || chart_operator(&Field::constant(g8, Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))));
    let (a0, a1, a2) = (konst(), konst(), konst());
    let at = |u: f64| CayleyOperator::new(base.clone(), a0.map(|d| d.scale(u))).map_err(s);
    let eps = 1e-4;
    let d = (chart_fundamental_form(&at(eps)?, &a1, &a2).map_err(s)? - chart_fundamental_form(&at(-eps)?, &a1, &a2).map_err(s)?) / (2.0 * eps);
    rows.push(Row::at_most("cayley/omega-closed-at-zero", "central difference along constant A0 at P = 0", d.abs(), 1e-9));

    let (mut idem, mut defect, mut fiber) = (0.0f64, 0.0f64, 0.0f64);
    for grid in [torus, sphere] {
        for _ in 0..20 {
            let pair = cayley_to_pair(&random_p(grid, rng)?);
            let once = project_to_associated(pair.g()).map_err(s)?;
            let twice = project_to_associated(once.g()).map_err(s)?;
            idem = idem.max(max_rel_diff(twice.g(), once.g())?).max(max_rel_diff(twice.j(), once.j())?);
            defect = defect.max(once.defects().max());
            let sc = random_modes(grid, rng, 1.0).re();
            let gp = pair.g().zip_with(&sc, |g, v| g.scale(v.exp())).map_err(s)?;
            let back = project_to_associated(&gp).map_err(s)?;
            defect = defect.max(back.defects().max());
            fiber = fiber.max(max_rel_diff(back.g(), pair.g())?).max(max_rel_diff(back.j(), pair.j())?);
        }
    }
    rows.push(Row::at_most("cayley/projection-idempotent", "40 random associated metrics", idem, 1e-12));
    rows.push(Row::at_most("cayley/projection-invariants", "defects of projected pairs", defect, 1e-11));
    rows.push(Row::at_most("cayley/projection-fiber", "40 conformal rescalings e^s g", fiber, 1e-12));
    Ok(rows)
}

fn random_trig(rng: &mut ChaCha8Rng, grid: Grid) -> ScalarField {
    let terms: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| (rng.gen_range(-4..=4) as f64, rng.gen_range(-4..=4) as f64, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    ScalarField::from_fn(grid, move |x, y| terms.iter().map(|&(k, l, c, ph)| c * (k * x + l * y + ph).cos()).sum())
}

fn decomp(n: usize, rng: &mut ChaCha8Rng) -> Res<Vec<Row>> {
    let g = Grid::torus(n).map_err(s)?;
    let base = Arc::new(AssocPair::standard(g));
    let (mut orth, mut recon, mut div, mut horiz, mut efac, mut idem, mut adj) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut harmonic = true;
    for _ in 0..5 {
        let (a, b, d) = (random_trig(rng, g), random_trig(rng, g), random_trig(rng, g));
        let h = MatField::from_components([&a, &b, &b, &d]).map_err(s)?;
        let hh = flat_pairing(&h, &h).map_err(s)?;
        let be = berger_ebin_split(&h).map_err(s)?;
        let hs = hamiltonian_split(&h).map_err(s)?;
        for sp in [&be, &hs] {
            let sum = sp.h0.zip_with(&sp.lie_part, |a, b| a + b).map_err(s)?;
            recon = recon.max(form_diff(&sum, &h)?);
            orth = orth.max(flat_pairing(&sp.h0, &sp.lie_part).map_err(s)?.abs() / hh);
            harmonic &= sp.harmonic_to_h0;
        }
        div = div.max(flat_divergence(&be.h0).map_err(s)?.max_abs());
        horiz = horiz.max(horizontal_residual(&hs.h0).map_err(s)?.max_abs());

        let f = random_trig(rng, g);
        let (e1, e2) = (e_apply(&f).map_err(s)?, e_factorized(&f).map_err(s)?);
        efac = efac.max(e1.zip_with(&e2, |p, q| (p - q).abs()).map_err(s)?.max_abs() / e1.max_abs());

        let anti_hermitian = |rng: &mut ChaCha8Rng| {
            let (u, v) = (random_trig(rng, g), random_trig(rng, g));
            u.zip_with(&v, |u, v| Mat2::new(u, -v, -v, -u))
        };
        let ah = TangentAm::new(base.clone(), anti_hermitian(rng).map_err(s)?).map_err(s)?;
        let bh = anti_hermitian(rng).map_err(s)?;
        let pa = vertical_project(&ah).map_err(s)?;
        idem = idem.max(form_diff(&vertical_part(&pa).map_err(s)?, &pa)? / ah.max_abs());
        let scale = flat_pairing(ah.h(), ah.h()).map_err(s)?.max(flat_pairing(&bh, &bh).map_err(s)?);
        let lhs = flat_pairing(&pa, &bh).map_err(s)?;
        let rhs = flat_pairing(ah.h(), &vertical_part(&bh).map_err(s)?).map_err(s)?;
        adj = adj.max((lhs - rhs).abs() / scale);
    }
    let marker = if harmonic { "harmonic_to_h0: constant modes assigned to h0" } else { "harmonic_to_h0 not set" };
    Ok(vec![
        Row::at_most("decomp/orthogonality", "5 random symmetric forms, both splits, relative to |h|^2", orth, 1e-9).note(marker),
        Row::at_most("decomp/reconstruction", "h0 + lie part - h", recon, 1e-10).note(marker),
        Row::at_most("decomp/divergence-free-part", "sup |div h0| of the divergence split", div, 1e-8),
        Row::at_most("decomp/horizontal-part", "sup horizontal residual of the hamiltonian split", horiz, 1e-8),
        Row::at_most("decomp/e-factorization", "factorized E against half bilaplacian, relative", efac, 1e-9),
        Row::at_most("decomp/projector-idempotent", "5 random anti-hermitian forms", idem, 1e-9),
        Row::at_most("decomp/projector-self-adjoint", "5 random pairs, relative", adj, 1e-9),
    ])
}

fn curvature(n: usize, rng: &mut ChaCha8Rng) -> Res<Vec<Row>> {
    let mut rows = Vec::new();
    let kinds = [
        StructureKind::Flat,
        StructureKind::ConformallyFlat,
        StructureKind::Homogeneous,
        StructureKind::DeWitt,
        StructureKind::NonRiemannian,
        StructureKind::Canonical,
    ];
    for kind in kinds {
        let mut worst = f64::INFINITY;
        let mut max_err: f64 = 0.0;
        for i in 0..50 {
            let dim = 2 + i % 3;
            let st = match kind {
                StructureKind::Flat => WeakStructure::flat(0.3, Some(rand_spd(rng, dim)?)),
                StructureKind::ConformallyFlat => WeakStructure::conformally_flat(Some(rand_spd(rng, dim)?)),
                StructureKind::Homogeneous => WeakStructure::homogeneous(0.2),
                StructureKind::DeWitt => WeakStructure::dewitt(0.4),
                StructureKind::NonRiemannian => WeakStructure::non_riemannian(),
                StructureKind::Canonical => WeakStructure::canonical(),
            };
            let g = rand_spd(rng, dim)?;
            let (a, b, c) = (rand_sym(rng, dim, 1.0), rand_sym(rng, dim, 1.0), rand_sym(rng, dim, 1.0));
            let exact = pointgeom::curvature_tensor(&st, &g, &a, &b, &c).map_err(s)?;
            let err = |h: f64| pointgeom::fd_curvature(&st, &g, &a, &b, &c, h).map(|fd| (&exact - &fd).max_abs()).map_err(s);
            let (e1, e2) = (err(1e-2)?, err(5e-3)?);
            max_err = max_err.max(e2);
            if e1 <= 1e-13 * (1.0 + exact.max_abs()) {
                continue;
            }
            worst = worst.min((e1 / e2).log2());
        }
        let id = format!("curvature/{kind:?}/fd-order").to_lowercase();
        if worst.is_finite() {
            rows.push(Row::at_least(id, "50 random pointwise instances, h = 1e-2 -> 5e-3", worst, 1.9));
        } else {
            rows.push(Row::at_most(id, "50 random pointwise instances; both sides vanish", max_err, 1e-13));
        }
    }

    let [torus, sphere] = grids(n)?;
    let (mut anti, mut bianchi) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let p = random_p(sphere, rng)?;
        let mut v = Vec::new();
        for _ in 0..3 {
            v.push(tangent_push(&random_operator(sphere, rng), &p).map_err(s)?);
        }
        let scale = v.iter().map(|x| x.max_abs()).product::<f64>();
        let r = |x: usize, y: usize, z: usize| am_curvature(&v[x], &v[y], &v[z]).map_err(s);
        anti = anti.max(r(0, 1, 2)?.add(&r(1, 0, 2)?).map_err(s)?.max_abs() / scale);
        bianchi = bianchi.max(r(0, 1, 2)?.add(&r(1, 2, 0)?).map_err(s)?.add(&r(2, 0, 1)?).map_err(s)?.max_abs() / scale);
    }
    rows.push(Row::at_most("curvature/associated/antisymmetry", "5 random triples on the sphere chart", anti, 1e-12));
    rows.push(Row::at_most("curvature/associated/bianchi", "5 random triples on the sphere chart", bianchi, 1e-12));

    for (grid, bound, name) in [(sphere, -1.0 / (8.0 * PI), "sphere"), (torus, -1.0 / (8.0 * PI * PI), "torus")] {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..100 {
            let h = tangent_push(&random_operator(grid, rng), &random_p(grid, rng)?).map_err(s)?;
            worst = worst.max(am_holomorphic_sectional(&h).map_err(s)?);
        }
        rows.push(Row::at_most(format!("curvature/holomorphic-bound/{name}"), "max over 100 random (P, a), sup|p| < 0.8", worst, bound + 1e-9));
    }

    let base = Arc::new(AssocPair::standard(torus));
    let (t, k, l) = (0.3, 1.0, 2.0);
    let p = CayleyOperator::from_complex(base, &Field::from_fn(torus, |x, y| Complex64::from_polar(t, k * x + l * y))).map_err(s)?;
    let m = MetricField::from_pair(&cayley_to_pair(&p));
    let got = gaussian_curvature(&m);
    let want = Field::from_fn(torus, |x, y| -(t / (1.0 - t * t)) * ((k * k - l * l) * (k * x + l * y).cos() - 2.0 * k * l * (k * x + l * y).sin()));
    let e1 = got.zip_with(&want, |a, b| a - b).map_err(s)?.max_abs() / want.max_abs();
    rows.push(Row::at_most("curvature/gaussian/closed-form", "p = 0.3 exp(i(x + 2y)), sup relative error", e1, 1e-4));
    let e2 = gaussian_curvature(&MetricField::standard(sphere)).map(|v| v - 1.0).max_abs_where(|_, z| z.abs() <= 0.9);
    rows.push(Row::at_most("curvature/gaussian/round-sphere", "|K - 1| on |z| <= 0.9", e2, 1e-4));
    let mut gb: f64 = 0.0;
    for _ in 0..5 {
        let m = MetricField::from_pair(&cayley_to_pair(&random_p(torus, rng)?));
        gb = gb.max(integrate_volume(&m, &gaussian_curvature(&m)).map_err(s)?.abs());
    }
    rows.push(Row::at_most("curvature/gauss-bonnet/torus", "5 random associated metrics", gb, 1e-8));
    Ok(rows)
}

fn gradient(n: usize, rng: &mut ChaCha8Rng) -> Res<Vec<Row>> {
    let t = Grid::torus(n).map_err(s)?;
    let eps = 1e-4;
    let (mut grad, mut dd, mut ar) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..3 {
        let p = random_p(t, rng)?;
        let m = MetricField::from_pair(&cayley_to_pair(&p));
        let (c1, c2) = (random_modes(t, rng, 0.3), random_modes(t, rng, 0.3));
        let h = MatField::from_components([&c1.re(), &c1.im(), &c1.im(), &c2.re()]).map_err(s)?;
        let total = |sgn: f64| m.perturbed(&h, sgn * eps).map_err(s).and_then(|mp| total_scalar(&mp).map_err(s));
        let fd = (total(1.0)? - total(-1.0)?) / (2.0 * eps);
        let pairing = gradient_pairing(&m, &h).map_err(s)?;
        // both sides vanish on surfaces; compare against the size of the pointwise variation
        let scale = integrate_volume(&m, &scalar_curvature_variation(&m, &h).map_err(s)?.map(f64::abs)).map_err(s)?;
        grad = grad.max((fd - pairing).abs() / scale);

        let ha = tangent_push(&chart_operator(&random_modes(t, rng, 0.5)), &p).map_err(s)?;
        let rp = scalar_curvature(&m.perturbed(ha.h(), eps).map_err(s)?);
        let rm = scalar_curvature(&m.perturbed(ha.h(), -eps).map_err(s)?);
        let fdr = rp.zip_with(&rm, |a, b| (a - b) / (2.0 * eps)).map_err(s)?;
        let ddh = double_divergence(ha.h(), &m).map_err(s)?;
        dd = dd.max(fdr.zip_with(&ddh, |a, b| (a - b).abs()).map_err(s)?.max_abs());
    }
    for grid in grids(n)? {
        for _ in 0..3 {
            let v = aric(&cayley_to_pair(&random_p(grid, rng)?)).map(|m| m.max_abs());
            let sup = if grid.chart() == Chart::Sphere { v.max_abs_where(|_, z| z.abs() <= 0.9) } else { v.max_abs() };
            ar = ar.max(sup);
        }
    }
    Ok(vec![
        Row::at_most("gradient/total-scalar", "FD of the total scalar curvature vs gradient pairing, normalized by the integral of |r'|", grad, 1e-3),
        Row::at_most("gradient/scalar-variation", "FD of r along anti-hermitian h vs double divergence, sup norm", dd, 1e-3),
        Row::at_most("gradient/aric", "sup |ARic| of random associated metrics", ar, 1e-4),
    ])
}
