mod common;

use std::sync::Arc;

use amspace::assoc::*;
use amspace::fields::*;
use amspace::matalg::Mat2;
use common::random_modes;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grids() -> [Grid; 2] {
    [Grid::torus(32).unwrap(), Grid::sphere(32).unwrap()]
}

fn max_rel_diff(a: &MatField, b: &MatField) -> f64 {
    a.zip_with(b, |x, y| (x - y).max_abs() / y.max_abs().max(1.0)).unwrap().max_abs()
}

fn random_p(grid: Grid, rng: &mut ChaCha8Rng) -> CayleyOperator {
    let base = Arc::new(AssocPair::standard(grid));
    let cap = rng.gen_range(0.1..0.8);
    CayleyOperator::from_complex(base, &random_modes(grid, rng, cap)).unwrap()
}

fn random_operator(grid: Grid, rng: &mut ChaCha8Rng) -> MatField {
    chart_operator(&random_modes(grid, rng, 1.0))
}

#[test]
fn cayley_examples() {
    for grid in grids() {
        let base = Arc::new(AssocPair::standard(grid));
        let zero = CayleyOperator::new(base.clone(), Field::constant(grid, Mat2::ZERO)).unwrap();
        assert_eq!(*cayley_to_pair(&zero), *base);
    }
    let grid = Grid::torus(16).unwrap();
    let base = Arc::new(AssocPair::standard(grid));
    let r = 0.35;
    let p = CayleyOperator::from_complex(base, &Field::constant(grid, Complex64::new(r, 0.0))).unwrap();
    let want = Mat2::diag((1.0 + r) / (1.0 - r), (1.0 - r) / (1.0 + r));
    assert!(cayley_to_pair(&p).g().values().iter().all(|g| (*g - want).max_abs() < 1e-15));
}

#[test]
fn cayley_rejects_non_positive() {
    let grid = Grid::torus(16).unwrap();
    let base = Arc::new(AssocPair::standard(grid));
    let p = Field::from_fn(grid, |x, _| Complex64::new(1.2 * x.cos(), 0.0));
    assert!(matches!(CayleyOperator::from_complex(base.clone(), &p), Err(AssocError::Positivity { .. })));
    // commuting with J₀ is not allowed
    let bad = Field::constant(grid, Mat2::scalar(0.2));
    assert!(matches!(CayleyOperator::new(base, bad), Err(AssocError::Invariant { .. })));
}

#[test]
fn random_pairs_keep_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for grid in grids() {
        for _ in 0..100 {
            let p = random_p(grid, &mut rng);
            let pair = cayley_to_pair(&p);
            let d = pair.defects();
            assert!(d.max() <= 1e-11, "{d:?}");
            // −J₀J is positive with respect to g₀
            for ((&j, &j0), &g0) in pair.j().values().iter().zip(p.base().j().values()).zip(p.base().g().values()) {
                let m = g0 * -(j0 * j);
                let s = m.sym();
                assert!(s.a > 0.0 && s.det() > 0.0 && (m - s).max_abs() <= 1e-9 * m.max_abs());
            }
        }
    }
}

#[test]
fn cayley_from_pair_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for grid in grids() {
        let base = Arc::new(AssocPair::standard(grid));
        let p0 = cayley_from_pair(base.j(), base.clone()).unwrap();
        assert!(p0.p().max_abs() < 1e-15);
        for _ in 0..100 {
            let p = random_p(grid, &mut rng);
            let back = cayley_from_pair(cayley_to_pair(&p).j(), base.clone()).unwrap();
            let err = back.p().zip_with(p.p(), |a, b| (a - b).max_abs()).unwrap().max_abs();
            assert!(err <= 1e-11, "{err:e}");
            assert!(max_rel_diff(cayley_to_pair(&back).j(), cayley_to_pair(&p).j()) <= 1e-11);
        }
    }
}

#[test]
fn exponential_chart_matches_cayley() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for grid in grids() {
        let base = Arc::new(AssocPair::standard(grid));
        for _ in 0..20 {
            let q = chart_operator(&random_modes(grid, &mut rng, 1.5));
            let e = q.map(|m| m.exp());
            let j = base.j().zip_with(&e, |j, e| j * e).unwrap();
            let p = cayley_from_pair(&j, base.clone()).unwrap();
            let s = p.p().map(cayley_factor);
            assert!(max_rel_diff(&s, &e) <= 1e-11);
        }
    }
}

#[test]
fn chart_change_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for grid in grids() {
        let base = Arc::new(AssocPair::standard(grid));
        for _ in 0..20 {
            let p1 = random_p(grid, &mut rng);
            let base1 = cayley_to_pair(&p1);
            let target = cayley_to_pair(&random_p(grid, &mut rng));
            let k = cayley_from_pair(target.j(), base.clone()).unwrap();
            let p = cayley_from_pair(target.j(), base1.clone()).unwrap();
            let via = chart_change(k.p(), base.j(), base1.j()).unwrap();
            let err = via.zip_with(p.p(), |a, b| (a - b).max_abs()).unwrap().max_abs();
            assert!(err <= 1e-10, "{err:e}");
        }
    }
}

#[test]
fn push_pull_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for grid in grids() {
        let base = Arc::new(AssocPair::standard(grid));
        let a = random_operator(grid, &mut rng);
        let h0 = tangent_push(&a, &CayleyOperator::zero(base.clone())).unwrap();
        let want = base.g().zip_with(&a, |g, a| (g * a).scale(2.0)).unwrap();
        assert!(max_rel_diff(h0.h(), &want) <= 1e-14);
        let zero = TangentAm::zero(base.clone());
        assert!(tangent_pull(&zero, &CayleyOperator::zero(base.clone())).unwrap().max_abs() == 0.0);

        for _ in 0..50 {
            let p = random_p(grid, &mut rng);
            let a = random_operator(grid, &mut rng);
            let h = tangent_push(&a, &p).unwrap();
            // the pushed form is a valid tangent vector at g(P)
            let h = TangentAm::new(h.base().clone(), h.h().clone()).unwrap();
            let back = tangent_pull(&h, &p).unwrap();
            assert!(max_rel_diff(&back, &a) <= 1e-11);
            let again = tangent_push(&back, &p).unwrap();
            assert!(max_rel_diff(again.h(), h.h()) <= 1e-11);
            // pulled operators stay in End_SJ₀
            for ((&m, &g0), &j0) in back.values().iter().zip(base.g().values()).zip(base.j().values()) {
                assert!((m * j0 + j0 * m).max_abs() <= 1e-11 * (1.0 + m.max_abs()) * j0.max_abs());
                let gm = g0 * m;
                assert!((gm - gm.transpose()).max_abs() <= 1e-11 * (1.0 + gm.max_abs()));
            }
        }
    }
}

#[test]
fn push_matches_complex_frame_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let grid = Grid::torus(16).unwrap();
    let base = Arc::new(AssocPair::standard(grid));
    let pf = random_modes(grid, &mut rng, 0.7);
    let af = random_modes(grid, &mut rng, 1.0);
    let p = CayleyOperator::from_complex(base, &pf).unwrap();
    let h = tangent_push(&chart_operator(&af), &p).unwrap();
    let i = Complex64::i();
    for idx in 0..grid.len() {
        let (pc, al) = (pf.values()[idx], af.values()[idx]);
        let d = 1.0 / (1.0 - pc.norm_sqr()).powi(2);
        let m11 = (al + pc * pc * al.conj()) * d;
        let m12 = (pc * al.conj() + pc.conj() * al) * d;
        let m22 = (al.conj() + pc.conj() * pc.conj() * al) * d;
        // dz² ↦ [[1, i], [i, −1]], dz dz̄ + dz̄ dz ↦ 2I
        let e = |c11: Complex64, c12: Complex64, c22: Complex64| [c11 + c22 + 2.0 * c12, i * (c11 - c22), -(c11 + c22) + 2.0 * c12];
        let [xx, xy, yy] = e(m11, m12, m22);
        let hm = h.h().values()[idx];
        for (got, want) in [(hm.a, xx), (hm.b, xy), (hm.d, yy)] {
            assert!(want.im.abs() < 1e-13);
            assert!((got - want.re).abs() < 1e-12 * (1.0 + want.re.abs()), "{got} vs {want}");
        }
    }
}

#[test]
fn complex_structure_on_tangent_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let s = Grid::sphere(32).unwrap();
    let base = Arc::new(AssocPair::standard(s));
    let alpha = Field::from_fn(s, |_, z| Complex64::new((std::f64::consts::PI * z).cos(), 0.0));
    let h = TangentAm::from_complex(base, &alpha).unwrap();
    let jh = chart_complex(&acs_on_am(&h).operator());
    let err = jh.zip_with(&alpha, |a, b| (a - Complex64::i() * b).norm()).unwrap().max_abs();
    assert!(err < 1e-13, "{err:e}");

    for grid in grids() {
        for _ in 0..20 {
            let p = random_p(grid, &mut rng);
            let a = random_operator(grid, &mut rng);
            let h = tangent_push(&a, &p).unwrap();
            let jj = acs_on_am(&acs_on_am(&h));
            assert!(max_rel_diff(&jj.h().map(|m| -m), h.h()) <= 1e-12);
            // 𝐉 in the chart is A ↦ A J₀
            let pulled = tangent_pull(&acs_on_am(&h), &p).unwrap();
            let aj = a.zip_with(p.base().j(), |a, j| a * j).unwrap();
            assert!(max_rel_diff(&pulled, &aj) <= 1e-11);
        }
    }
}

#[test]
fn fundamental_form_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for grid in grids() {
        for _ in 0..20 {
            let p = random_p(grid, &mut rng);
            let a = tangent_push(&random_operator(grid, &mut rng), &p).unwrap();
            let b = tangent_push(&random_operator(grid, &mut rng), &p).unwrap();
            let (ab, ba) = (fundamental_form(&a, &b).unwrap(), fundamental_form(&b, &a).unwrap());
            assert!((ab + ba).abs() <= 1e-12 * (1.0 + ab.abs()));
            assert!(fundamental_form(&a, &a).unwrap().abs() <= 1e-12 * (1.0 + ab.abs()));
            let ja = acs_on_am(&a);
            let na = amspace::amgeom::am_inner(&a, &a).unwrap();
            let om = fundamental_form(&a, &ja).unwrap();
            assert!(om > 0.0 && (om - na).abs() <= 1e-12 * na, "{om} vs {na}");
        }
    }
    let g1 = Grid::torus(16).unwrap();
    let a = TangentAm::zero(Arc::new(AssocPair::standard(g1)));
    let b = TangentAm::zero(Arc::new(cayley_to_pair(&random_p(g1, &mut rng)).as_ref().clone()));
    assert!(matches!(fundamental_form(&a, &b), Err(AssocError::BaseMismatch)));
}

#[test]
fn fundamental_form_is_closed() {
    let grid = Grid::torus(8).unwrap();
    let base = Arc::new(AssocPair::standard(grid));
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let konst = |rng: &mut ChaCha8Rng| chart_operator(&Field::constant(grid, Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))));
    let at = |p: &MatField, s: f64, d: &MatField| CayleyOperator::new(base.clone(), p.zip_with(d, |p, d| p + d.scale(s)).unwrap()).unwrap();
    let om = |p: &CayleyOperator, a: &MatField, b: &MatField| amspace::amgeom::chart_fundamental_form(p, a, b).unwrap();
    let (a0, a1, a2) = (konst(&mut rng), konst(&mut rng), konst(&mut rng));
    let eps = 1e-4;

    // at P = 0 each directional derivative vanishes
    let zero = Field::constant(grid, Mat2::ZERO);
    let d = (om(&at(&zero, eps, &a0), &a1, &a2) - om(&at(&zero, -eps, &a0), &a1, &a2)) / (2.0 * eps);
    assert!(d.abs() <= 1e-9, "{d:e}");

    // at a generic point the cyclic sum dΩ(A₀, A₁, A₂) vanishes
    let p0 = konst(&mut rng);
    let deriv = |dir: &MatField, x: &MatField, y: &MatField| (om(&at(&p0, eps, dir), x, y) - om(&at(&p0, -eps, dir), x, y)) / (2.0 * eps);
    let cyc = deriv(&a0, &a1, &a2) + deriv(&a1, &a2, &a0) + deriv(&a2, &a0, &a1);
    let scale = deriv(&a0, &a1, &a2).abs().max(1.0);
    assert!(cyc.abs() <= 1e-7 * scale, "{cyc:e}");
}

#[test]
fn projection_examples() {
    let grid = Grid::torus(8).unwrap();
    let pair = project_to_associated(&Field::constant(grid, Mat2::diag(2.0, 1.0))).unwrap();
    let r = 2f64.sqrt();
    for (&g, &j) in pair.g().values().iter().zip(pair.j().values()) {
        assert!((g - Mat2::diag(r, 1.0 / r)).max_abs() < 1e-15);
        assert!((j - Mat2::new(0.0, -1.0 / r, r, 0.0)).max_abs() < 1e-15);
        assert!((g - OMEGA * j).max_abs() < 1e-15);
    }
    let bad = Field::constant(grid, Mat2::diag(1.0, -1.0));
    assert!(matches!(project_to_associated(&bad), Err(AssocError::Singular(_))));
}

#[test]
fn projection_is_idempotent_and_fibered() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for grid in grids() {
        for _ in 0..20 {
            let p = random_p(grid, &mut rng);
            let pair = cayley_to_pair(&p);
            let again = project_to_associated(pair.g()).unwrap();
            assert!(max_rel_diff(again.g(), pair.g()) <= 1e-12);
            assert!(max_rel_diff(again.j(), pair.j()) <= 1e-12);

            // gp = g B with B = e^s, s random, commuting with J
            let s = random_modes(grid, &mut rng, 1.0).re();
            let gp = pair.g().zip_with(&s, |g, s| g.scale(s.exp())).unwrap();
            let back = project_to_associated(&gp).unwrap();
            assert!(back.defects().max() <= 1e-11);
            assert!(max_rel_diff(back.g(), pair.g()) <= 1e-12);
            assert!(max_rel_diff(back.j(), pair.j()) <= 1e-12);
        }
    }
    // an arbitrary metric projects onto an associated pair
    let grid = Grid::torus(16).unwrap();
    let gp = Field::from_fn(grid, |x, y| Mat2::new(2.0 + x.sin(), 0.3 * y.cos(), 0.3 * y.cos(), 1.5 + 0.5 * (x + y).cos()));
    let pair = project_to_associated(&gp).unwrap();
    assert!(pair.defects().max() <= 1e-12);
}

#[test]
fn fiber_transport_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for grid in grids() {
        let base = Arc::new(AssocPair::standard(grid));
        let c = random_modes(grid, &mut rng, 1.0).re();
        let g0p = base.g().zip_with(&c, |g, c| g.scale(1.5 + c)).unwrap();
        let id = fiber_transport(&g0p, &CayleyOperator::zero(base.clone())).unwrap();
        assert!(max_rel_diff(&id, &g0p) <= 1e-15);
        for _ in 0..20 {
            let p = random_p(grid, &mut rng);
            let g = fiber_transport(base.g(), &p).unwrap();
            assert!(max_rel_diff(&g, cayley_to_pair(&p).g()) <= 1e-12);
            let t = fiber_transport(&g0p, &p).unwrap();
            let back = fiber_transport_inverse(&t, &p).unwrap();
            assert!(max_rel_diff(&back, &g0p) <= 1e-11);
        }
        // a metric that is not J₀-Hermitian is refused
        let p = random_p(grid, &mut rng);
        let skew = base.g().map(|g| g + Mat2::new(0.5, 0.0, 0.0, 0.0));
        assert!(fiber_transport(&skew, &p).is_err());
    }
}

#[test]
fn beltrami_examples() {
    let grid = Grid::torus(16).unwrap();
    let base = Arc::new(AssocPair::standard(grid));
    let zero = CayleyOperator::zero(base.clone());
    let lin = |a: Complex64, b: Complex64| Field::from_fn(grid, move |x, y| a * Complex64::new(x, y) + b * Complex64::new(x, -y));
    let fd = DerivMode::Fd4Open;

    let z = beltrami_apply_with(&lin(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)), &zero, fd).unwrap();
    assert!(z.max_abs() < 1e-12);
    let zb = beltrami_apply_with(&lin(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)), &zero, fd).unwrap();
    assert!(zb.values().iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-12));

    // constant p = c: z + c̄ z̄ is in the kernel; for real c this is z + c z̄
    for c in [Complex64::new(0.4, 0.0), Complex64::new(0.2, -0.5)] {
        let p = CayleyOperator::from_complex(base.clone(), &Field::constant(grid, c)).unwrap();
        let f = lin(Complex64::new(1.0, 0.0), c.conj());
        assert!(beltrami_apply_with(&f, &p, fd).unwrap().max_abs() < 1e-12);
        assert!(beltrami_apply_with(&lin(Complex64::new(1.0, 0.0), c), &p, fd).unwrap().max_abs() > 1e-3 || c.im == 0.0);
    }

    // spectral path on a periodic holomorphic-at-P=0 check: e^{i(x+iy)} is not
    // periodic, so use ∂̄ of a trigonometric function against its closed form
    let f = Field::from_fn(grid, |x, y| Complex64::new((x + 2.0 * y).cos(), 0.0));
    let got = beltrami_apply(&f, &zero).unwrap();
    let want = Field::from_fn(grid, |x, y| Complex64::new(-0.5, -1.0) * (x + 2.0 * y).sin());
    assert!(got.zip_with(&want, |a, b| (a - b).norm()).unwrap().max_abs() < 1e-12);
}
