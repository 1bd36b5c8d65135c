mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use amspace::amgeom::*;
use amspace::assoc::*;
use amspace::fields::*;
use amspace::matalg::Mat2;
use common::{random_modes, rel_err};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tangent(grid: Grid, f: impl Fn(f64, f64) -> Complex64) -> TangentAm {
    let base = Arc::new(AssocPair::standard(grid));
    TangentAm::from_complex(base, &Field::from_fn(grid, f)).unwrap()
}

fn random_p(grid: Grid, rng: &mut ChaCha8Rng) -> CayleyOperator {
    let base = Arc::new(AssocPair::standard(grid));
    let cap = rng.gen_range(0.1..0.8);
    CayleyOperator::from_complex(base, &random_modes(grid, rng, cap)).unwrap()
}

fn random_operator(grid: Grid, rng: &mut ChaCha8Rng) -> MatField {
    chart_operator(&random_modes(grid, rng, 1.0))
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn im(v: f64) -> Complex64 {
    Complex64::new(0.0, v)
}

fn max_rel_diff(a: &MatField, b: &MatField) -> f64 {
    let scale = b.max_abs().max(1e-300);
    a.zip_with(b, |x, y| (x - y).max_abs()).unwrap().max_abs() / scale
}

#[test]
fn inner_product_examples() {
    let s = Grid::sphere(64).unwrap();
    let one = tangent(s, |_, _| re(1.0));
    assert!(rel_err(am_inner(&one, &one).unwrap(), 8.0 * PI) < 1e-12);
    let a = tangent(s, |_, z| re((PI * z).cos()));
    let b = tangent(s, |_, z| im((PI * z).cos()));
    assert!(am_inner(&a, &b).unwrap().abs() < 1e-14);

    let t = Grid::torus(64).unwrap();
    let c = tangent(t, |x, _| re(x.cos()));
    assert!(rel_err(am_inner(&c, &c).unwrap(), 4.0 * PI * PI) < 1e-12);
}

#[test]
fn inner_product_chart_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for grid in [Grid::torus(32).unwrap(), Grid::sphere(32).unwrap()] {
        for _ in 0..20 {
            let p = random_p(grid, &mut rng);
            let (a, b) = (random_operator(grid, &mut rng), random_operator(grid, &mut rng));
            let (ha, hb) = (tangent_push(&a, &p).unwrap(), tangent_push(&b, &p).unwrap());
            let intrinsic = am_inner(&ha, &hb).unwrap();
            let chart = chart_inner(&p, &a, &b).unwrap();
            let scale = (am_inner(&ha, &ha).unwrap() * am_inner(&hb, &hb).unwrap()).sqrt();
            assert!((intrinsic - chart).abs() <= 1e-11 * scale);
            let om = fundamental_form(&ha, &hb).unwrap();
            let om_chart = chart_fundamental_form(&p, &a, &b).unwrap();
            assert!((om - om_chart).abs() <= 1e-11 * scale);
            assert!(am_inner(&ha, &ha).unwrap() > 0.0);
        }
    }
}

#[test]
fn hermitian_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for grid in [Grid::torus(32).unwrap(), Grid::sphere(32).unwrap()] {
        for _ in 0..20 {
            let p = random_p(grid, &mut rng);
            let a = tangent_push(&random_operator(grid, &mut rng), &p).unwrap();
            let b = tangent_push(&random_operator(grid, &mut rng), &p).unwrap();
            let plain = am_inner(&a, &b).unwrap();
            let rotated = am_inner(&acs_on_am(&a), &acs_on_am(&b)).unwrap();
            let scale = (am_inner(&a, &a).unwrap() * am_inner(&b, &b).unwrap()).sqrt();
            assert!((plain - rotated).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn curvature_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let grid = Grid::sphere(32).unwrap();
    for _ in 0..10 {
        let p = random_p(grid, &mut rng);
        let [a, b, c] = [0, 1, 2].map(|_| tangent_push(&random_operator(grid, &mut rng), &p).unwrap());
        let scale = a.max_abs() * b.max_abs() * c.max_abs();
        assert!(am_curvature(&a, &a, &c).unwrap().max_abs() <= 1e-12 * scale);
        let rab = am_curvature(&a, &b, &c).unwrap();
        let rba = am_curvature(&b, &a, &c).unwrap();
        assert!(rab.add(&rba).unwrap().max_abs() <= 1e-12 * scale);
        let bianchi = rab.add(&am_curvature(&b, &c, &a).unwrap()).unwrap().add(&am_curvature(&c, &a, &b).unwrap()).unwrap();
        assert!(bianchi.max_abs() <= 1e-12 * scale, "{:e}", bianchi.max_abs() / scale);
    }
    // both real: operators commute pointwise
    let t = Grid::torus(32).unwrap();
    let a = tangent(t, |x, _| re(x.cos()));
    let b = tangent(t, |_, y| re((2.0 * y).sin()));
    assert!(am_curvature(&a, &b, &a).unwrap().max_abs() < 1e-15);
}

#[test]
fn chart_curvature_matches_intrinsic() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for grid in [Grid::torus(32).unwrap(), Grid::sphere(32).unwrap()] {
        for _ in 0..10 {
            let p = random_p(grid, &mut rng);
            let [a, b, c] = [0, 1, 2].map(|_| random_operator(grid, &mut rng));
            let [ha, hb, hc] = [&a, &b, &c].map(|x| tangent_push(x, &p).unwrap());
            let intrinsic = tangent_pull(&am_curvature(&ha, &hb, &hc).unwrap(), &p).unwrap();
            let chart = chart_curvature(&p, &a, &b, &c).unwrap();
            assert!(max_rel_diff(&chart, &intrinsic) <= 1e-10, "{:e}", max_rel_diff(&chart, &intrinsic));
            let k = am_sectional(&ha, &hb).unwrap();
            let kc = chart_sectional(&p, &a, &b).unwrap();
            assert!((k - kc).abs() <= 1e-10 * k.abs().max(1e-3));
        }
    }
}

#[test]
fn sphere_sectional_examples() {
    let s = Grid::sphere(128).unwrap();
    let cases: [(fn(f64, f64) -> Complex64, fn(f64, f64) -> Complex64, f64); 4] = [
        (|_, z| re((PI * z).cos()), |_, z| im((2.0 * PI * z).cos()), -1.0 / (8.0 * PI)),
        (|p, z| re((PI * z + p).cos()), |p, z| im((2.0 * PI * z - p).sin()), -1.0 / (8.0 * PI)),
        (|_, z| re((PI * z).cos()), |_, z| im((PI * z).cos()), -3.0 / (16.0 * PI)),
        (|_, _| re(1.0), |_, _| im(1.0), -1.0 / (8.0 * PI)),
    ];
    for (fa, fb, want) in cases {
        let k = am_sectional(&tangent(s, fa), &tangent(s, fb)).unwrap();
        assert!(rel_err(k, want) <= 1e-8, "{k} vs {want}");
    }
    // both real or both imaginary: flat
    let k = am_sectional(&tangent(s, |_, z| re((PI * z).cos())), &tangent(s, |p, z| re((PI * z + p).sin()))).unwrap();
    assert!(k.abs() < 1e-14);
}

#[test]
fn holomorphic_sectional_examples() {
    let s = Grid::sphere(128).unwrap();
    let k = am_holomorphic_sectional(&tangent(s, |_, _| re(1.0))).unwrap();
    assert!(rel_err(k, -1.0 / (8.0 * PI)) <= 1e-8);
    let k = am_holomorphic_sectional(&tangent(s, |p, z| re((PI * z + p).cos()))).unwrap();
    assert!(rel_err(k, -3.0 / (16.0 * PI)) <= 1e-8);
    let t = Grid::torus(128).unwrap();
    let k = am_holomorphic_sectional(&tangent(t, |x, _| re(x.cos()))).unwrap();
    assert!(rel_err(k, -3.0 / (16.0 * PI * PI)) <= 1e-8);
    assert!(matches!(am_holomorphic_sectional(&TangentAm::zero(Arc::new(AssocPair::standard(t)))), Err(AmError::ZeroVector)));
}

#[test]
fn torus_sectional_examples() {
    let t = Grid::torus(128).unwrap();
    let k = am_sectional(&tangent(t, |x, _| re(x.cos())), &tangent(t, |_, y| im((2.0 * y).cos()))).unwrap();
    assert!(rel_err(k, -1.0 / (8.0 * PI * PI)) <= 1e-8);
    let k = am_sectional(&tangent(t, |x, y| re((x + y).cos())), &tangent(t, |x, y| im((x + y).cos()))).unwrap();
    assert!(rel_err(k, -3.0 / (16.0 * PI * PI)) <= 1e-8);
    // exponential pair, quadrature oracle: −½·2π²/(4π²)² = −1/(16π²)
    let k = am_sectional(&tangent(t, |x, _| Complex64::from_polar(1.0, x)), &tangent(t, |_, y| Complex64::from_polar(1.0, y))).unwrap();
    assert!(rel_err(k, -1.0 / (16.0 * PI * PI)) <= 1e-8, "{k}");
    let k = am_sectional(&tangent(t, |x, _| Complex64::from_polar(1.0, x)), &tangent(t, |x, _| Complex64::from_polar(1.0, x) * Complex64::i())).unwrap();
    assert!(rel_err(k, -1.0 / (8.0 * PI * PI)) <= 1e-8, "{k}");
}

#[test]
fn sectional_degenerate_plane() {
    let t = Grid::torus(32).unwrap();
    let a = tangent(t, |x, _| re(x.cos()));
    assert!(matches!(am_sectional(&a, &a.scale(3.0)), Err(AmError::DegeneratePlane { .. })));
}

#[test]
fn holomorphic_bound_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for (grid, bound) in [(Grid::sphere(64).unwrap(), -1.0 / (8.0 * PI)), (Grid::torus(64).unwrap(), -1.0 / (8.0 * PI * PI))] {
        for _ in 0..100 {
            let p = random_p(grid, &mut rng);
            let h = tangent_push(&random_operator(grid, &mut rng), &p).unwrap();
            let k = am_holomorphic_sectional(&h).unwrap();
            assert!(k <= bound + 1e-9, "{k} > {bound}");
        }
    }
}

#[test]
fn geodesic_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for grid in [Grid::torus(32).unwrap(), Grid::sphere(32).unwrap()] {
        let base = Arc::new(AssocPair::standard(grid));
        for _ in 0..5 {
            let a = random_operator(grid, &mut rng);
            let h = TangentAm::from_operator(base.clone(), &a).unwrap();
            assert_eq!(am_geodesic(&h, 0.0).unwrap(), *base);
            for t in [0.3, 1.0, 2.5] {
                let gt = am_geodesic(&h, t).unwrap();
                assert!(gt.g().values().iter().all(|g| (g.det() - 1.0).abs() <= 1e-11 * g.max_abs().powi(2)));
                // the chart path tanh(tA/2) lands on the same pair
                let chart = chart_geodesic(base.clone(), &a, 0.5 * t).unwrap();
                let gc = cayley_to_pair(&chart);
                assert!(max_rel_diff(gc.g(), gt.g()) <= 1e-11);
                assert!(max_rel_diff(gc.j(), gt.j()) <= 1e-11);
            }
        }
    }
}

/// ∇_ġġ = g̈ − ġ g⁻¹ ġ by central differences, sup over the grid.
fn geodesic_residual(h: &TangentAm, t: f64, dt: f64) -> f64 {
    let at = |s: f64| am_geodesic(h, s).unwrap().g().clone();
    let (gm, g0, gp) = (at(t - dt), at(t), at(t + dt));
    let mut worst: f64 = 0.0;
    for idx in 0..g0.grid().len() {
        let (m, c, p) = (gm.values()[idx], g0.values()[idx], gp.values()[idx]);
        let v = (p - m).scale(0.5 / dt);
        let acc = (p - c.scale(2.0) + m).scale(1.0 / (dt * dt));
        worst = worst.max((acc - v * c.inverse() * v).max_abs());
    }
    worst
}

#[test]
fn geodesics_are_homogeneous_geodesics_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for grid in [Grid::torus(16).unwrap(), Grid::sphere(16).unwrap()] {
        let p = random_p(grid, &mut rng);
        let h = tangent_push(&random_operator(grid, &mut rng), &p).unwrap();
        let dt = 1e-2;
        let (r1, r2) = (geodesic_residual(&h, 0.7, dt), geodesic_residual(&h, 0.7, dt / 2.0));
        let order = (r1 / r2).log2();
        assert!(order >= 1.9, "order {order} ({r1:e}, {r2:e})");
    }
}

#[test]
fn chart_connection_is_metric() {
    // d/dt ⟨B, C⟩_{P+tA} = ⟨∇_A B, C⟩ + ⟨B, ∇_A C⟩ for constant B, C
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    let grid = Grid::torus(16).unwrap();
    let base = Arc::new(AssocPair::standard(grid));
    let p = random_p(grid, &mut rng);
    let [a, b, c] = [0, 1, 2].map(|_| random_operator(grid, &mut rng));
    let zero = Field::constant(grid, Mat2::ZERO);
    let eps = 1e-5;
    let shifted = |s: f64| CayleyOperator::new(base.clone(), p.p().zip_with(&a, |p, a| p + a.scale(s)).unwrap()).unwrap();
    let lhs = (chart_inner(&shifted(eps), &b, &c).unwrap() - chart_inner(&shifted(-eps), &b, &c).unwrap()) / (2.0 * eps);
    let nb = chart_connection(&p, &a, &b, &zero).unwrap();
    let nc = chart_connection(&p, &a, &c, &zero).unwrap();
    let rhs = chart_inner(&p, &nb, &c).unwrap() + chart_inner(&p, &b, &nc).unwrap();
    assert!((lhs - rhs).abs() <= 1e-7 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
}
