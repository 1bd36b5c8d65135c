use std::f64::consts::PI;

use amspace::fields::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.zip_with(b, |p, q| p - q).unwrap().max_abs()
}

/// Random real trigonometric polynomial with |k|, |l| ≤ band.
fn band_limited(grid: Grid, rng: &mut ChaCha8Rng, band: i64) -> ScalarField {
    let mut terms = Vec::new();
    for k in -band..=band {
        for l in -band..=band {
            terms.push((k as f64, l as f64, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI)));
        }
    }
    Field::from_fn(grid, move |x, y| terms.iter().map(|&(k, l, a, ph)| a * (k * x + l * y + ph).cos()).sum())
}

#[test]
fn integrate_examples() {
    let s = Grid::sphere(128).unwrap();
    assert!((integrate(&Field::constant(s, 1.0)) - 4.0 * PI).abs() <= 1e-12 * 4.0 * PI);
    let c2 = Field::from_fn(s, |_, z| (PI * z).cos().powi(2));
    assert!((integrate(&c2) - 2.0 * PI).abs() <= 1e-12 * 2.0 * PI);
    let t = Grid::torus(128).unwrap();
    assert!(integrate(&Field::from_fn(t, |x, y| (x + y).cos())).abs() < 1e-12);
}

#[test]
fn quadrature_exact_on_basis_families() {
    let t = Grid::torus(64).unwrap();
    for (k, l) in [(1, 0), (2, 3), (5, -7), (0, 12)] {
        let f = basis_field(&t, BasisFunction::Torus { k, l, trig: Trig::Cos, imaginary: false }).unwrap().re();
        let sq = f.map(|v| v * v);
        assert!(integrate(&f).abs() < 1e-12);
        assert!((integrate(&sq) - 2.0 * PI * PI).abs() <= 1e-12 * 2.0 * PI * PI);
    }
    let s = Grid::sphere(64).unwrap();
    for (m, l) in [(1, 0), (2, 1), (3, -2)] {
        let f = basis_field(&s, BasisFunction::Sphere { k: m as f64 * PI, l, trig: Trig::Sin, imaginary: false }).unwrap().re();
        assert!(integrate(&f).abs() < 1e-12);
        assert!((integrate(&f.map(|v| v * v)) - 2.0 * PI).abs() <= 1e-12 * 2.0 * PI);
    }
}

#[test]
fn partial_examples() {
    let t = Grid::torus(8).unwrap();
    let d = partial(&Field::from_fn(t, |x, _| x.sin()), Axis::One);
    assert!(max_diff(&d, &Field::from_fn(t, |x, _| x.cos())) <= 1e-12);
    let t = Grid::torus(64).unwrap();
    assert!(partial(&Field::constant(t, 3.5), Axis::Two).max_abs() < 1e-15);

    let s = Grid::sphere(64).unwrap();
    let f = Field::from_fn(s, |phi, z| (PI * z + phi).cos());
    let dz = partial(&f, Axis::Two);
    assert!(max_diff(&dz, &Field::from_fn(s, |phi, z| -PI * (PI * z + phi).sin())) < 1e-11);
    let dphi = partial(&f, Axis::One);
    assert!(max_diff(&dphi, &Field::from_fn(s, |phi, z| -(PI * z + phi).sin())) < 1e-12);
}

#[test]
fn finite_difference_modes_converge() {
    let exact = |g: Grid| Field::from_fn(g, |x, y| 2.0 * (2.0 * x + y).cos());
    let errs: Vec<f64> = [32, 64]
        .iter()
        .map(|&n| {
            let g = Grid::torus(n).unwrap();
            let f = Field::from_fn(g, |x, y| (2.0 * x + y).sin());
            max_diff(&partial_with(&f, Axis::One, DerivMode::Fd4Periodic), &exact(g))
        })
        .collect();
    let order = (errs[0] / errs[1]).log2();
    assert!(order > 3.8, "periodic stencil order {order}");

    // open stencil on a non-periodic sphere function, interior band only
    let errs: Vec<f64> = [64, 128]
        .iter()
        .map(|&n| {
            let g = Grid::sphere(n).unwrap();
            let f = Field::from_fn(g, |_, z| 1.0 / (1.0 - z * z));
            let d = partial_with(&f, Axis::Two, DerivMode::Fd4Open);
            let e = Field::from_fn(g, |_, z| 2.0 * z / (1.0 - z * z).powi(2));
            d.zip_with(&e, |a, b| a - b).unwrap().max_abs_where(|_, z| z.abs() <= 0.9)
        })
        .collect();
    let order = (errs[0] / errs[1]).log2();
    assert!(order > 3.5, "open stencil order {order}");
}

#[test]
fn integration_by_parts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = Grid::torus(64).unwrap();
    for axis in [Axis::One, Axis::Two] {
        let f = band_limited(g, &mut rng, 5);
        let h = band_limited(g, &mut rng, 5);
        let s = partial(&f, axis).zip_with(&h, |a, b| a * b).unwrap().zip_with(&f.zip_with(&partial(&h, axis), |a, b| a * b).unwrap(), |a, b| a + b).unwrap();
        assert!(integrate(&s).abs() <= 1e-11, "{:e}", integrate(&s));
    }
    // also along φ on the sphere chart
    let s = Grid::sphere(64).unwrap();
    let f = Field::from_fn(s, |phi, z| (2.0 * PI * z + phi).cos() + 0.3 * (3.0 * phi).sin());
    let h = Field::from_fn(s, |phi, z| (PI * z - 2.0 * phi).sin());
    let ibp = partial(&f, Axis::One).zip_with(&h, |a, b| a * b).unwrap();
    let ibp2 = f.zip_with(&partial(&h, Axis::One), |a, b| a * b).unwrap();
    assert!((integrate(&ibp) + integrate(&ibp2)).abs() <= 1e-11);
}

#[test]
fn basis_examples() {
    let t = Grid::torus(32).unwrap();
    let f = basis_field(&t, BasisFunction::Torus { k: 1, l: 0, trig: Trig::Cos, imaginary: false }).unwrap();
    assert!(f.im().max_abs() == 0.0);
    assert!(max_diff(&f.re(), &Field::from_fn(t, |x, _| x.cos())) == 0.0);

    let s = Grid::sphere(32).unwrap();
    let f = basis_field(&s, BasisFunction::Sphere { k: PI, l: 1, trig: Trig::Sin, imaginary: true }).unwrap();
    assert!(f.re().max_abs() == 0.0);
    assert!(max_diff(&f.im(), &Field::from_fn(s, |phi, z| (PI * z + phi).sin())) < 1e-15);

    let f = basis_field(&t, BasisFunction::TorusDiag { p: 1, trig: Trig::Cos }).unwrap();
    assert!(f.re().max_abs() == 0.0);
    assert!(max_diff(&f.im(), &Field::from_fn(t, |x, y| (x + y).cos())) == 0.0);

    let bad = basis_field(&s, BasisFunction::Sphere { k: 1.0, l: 0, trig: Trig::Cos, imaginary: false });
    assert!(matches!(bad, Err(FieldError::Index(_))));
    assert!(matches!(basis_field(&t, BasisFunction::Sphere { k: PI, l: 0, trig: Trig::Cos, imaginary: false }), Err(FieldError::UnsupportedChart(_))));
}

#[test]
fn fourier_examples() {
    let g = Grid::torus(32).unwrap();
    let modes = fourier_decompose(&Field::from_fn(g, |x, _| Complex64::new(x.cos(), 0.0))).unwrap();
    let nz = modes.nonzero(1e-13);
    assert_eq!(nz.len(), 2);
    for (k, l, c) in nz {
        assert_eq!((k.abs(), l), (1, 0));
        assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    // 2kl sin kx sin ly = kl(cos(kx − ly) − cos(kx + ly))
    let (k, l) = (2, 3);
    let f = Field::from_fn(g, |x, y| Complex64::new(2.0 * (k * l) as f64 * (k as f64 * x).sin() * (l as f64 * y).sin(), 0.0));
    let nz = fourier_decompose(&f).unwrap().nonzero(1e-12);
    assert_eq!(nz.len(), 4);
    let half = 0.5 * (k * l) as f64;
    for (a, b, c) in nz {
        assert_eq!((a.abs(), b.abs()), (k, l));
        let want = if a * b < 0 { half } else { -half };
        assert!((c - Complex64::new(want, 0.0)).norm() < 1e-13, "({a},{b}) {c}");
    }

    assert!(matches!(fourier_decompose(&Field::constant(Grid::sphere(8).unwrap(), Complex64::new(1.0, 0.0))), Err(FieldError::UnsupportedChart(_))));
}

#[test]
fn fourier_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = Grid::new(Chart::Torus, 64, 32).unwrap();
    let re = band_limited(g, &mut rng, 7);
    let im = band_limited(g, &mut rng, 7);
    let f = ComplexField::from_parts(&re, &im).unwrap();
    let back = fourier_reconstruct(&fourier_decompose(&f).unwrap(), &g).unwrap();
    let err = back.zip_with(&f, |a, b| (a - b).norm()).unwrap().max_abs();
    assert!(err <= 1e-12 * f.max_abs(), "{err:e}");
}

#[test]
fn dump_format() {
    let g = Grid::torus(4).unwrap();
    let f = Field::from_fn(g, |x, y| Complex64::new(x, -y / 3.0));
    let mut buf = Vec::new();
    write_dump(&f, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "axis1,axis2,re,im");
    assert_eq!(lines.len(), 1 + g.len());
    // row-major: second coordinate varies fastest
    let row1: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
    let row2: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(row1[0], row2[0]);
    assert!(row2[1] > row1[1]);
    // 17 significant digits survive the text roundtrip
    assert_eq!(row1[3], -g.x2(0) / 3.0);
    assert_eq!(row1[0], g.x1(0));
}
