use std::f64::consts::PI;
use std::sync::Arc;

use amspace::amgeom::{am_holomorphic_sectional, am_sectional};
use amspace::assoc::{AssocPair, TangentAm};
use amspace::fields::{basis_field, BasisFunction, ComplexField, Field, Grid, Trig};
use amspace::matalg::{SpdMatrix, SquareMatrix};
use amspace::pointgeom::{self, WeakStructure};
use amspace::quotient::{brace_source, quotient_sectional, HorizontalPair};
use num_complex::Complex64;

use crate::report::Row;

/// Rows of a table plus the field written by `--dump`, when the table has one.
pub struct Table {
    pub rows: Vec<Row>,
    pub dump: Option<ComplexField>,
}

const SECTIONAL_TOL: f64 = 1e-8;
const QUOTIENT_TOL: f64 = 1e-6;

fn tangent(base: &Arc<AssocPair>, f: &ComplexField) -> Result<TangentAm, String> {
    TangentAm::from_complex(base.clone(), f).map_err(|e| e.to_string())
}

fn basis(grid: &Grid, b: BasisFunction) -> Result<ComplexField, String> {
    basis_field(grid, b).map_err(|e| e.to_string())
}

fn sphere(k: f64, l: i64, trig: Trig, imaginary: bool) -> BasisFunction {
    BasisFunction::Sphere { k: k * PI, l, trig, imaginary }
}

fn torus(k: i64, l: i64, trig: Trig, imaginary: bool) -> BasisFunction {
    BasisFunction::Torus { k, l, trig, imaginary }
}

fn sectional_row(id: &str, inputs: &str, base: &Arc<AssocPair>, a: &ComplexField, b: &ComplexField, want: f64) -> Row {
    let k = tangent(base, a).and_then(|a| tangent(base, b).and_then(|b| am_sectional(&a, &b).map_err(|e| e.to_string())));
    match k {
        Ok(k) if want == 0.0 => Row::absolute(id, inputs, k, 0.0, 1e-12),
        Ok(k) => Row::compare(id, inputs, k, want, SECTIONAL_TOL),
        Err(e) => Row::failed(id, inputs, e),
    }
}

fn holomorphic_row(id: &str, inputs: &str, base: &Arc<AssocPair>, a: &ComplexField, want: f64) -> Row {
    match tangent(base, a).and_then(|a| am_holomorphic_sectional(&a).map_err(|e| e.to_string())) {
        Ok(k) => Row::compare(id, inputs, k, want, SECTIONAL_TOL),
        Err(e) => Row::failed(id, inputs, e),
    }
}

pub fn sphere_curvature(n: usize) -> Result<Table, String> {
    let grid = Grid::sphere(n).map_err(|e| e.to_string())?;
    let base = Arc::new(AssocPair::standard(grid));
    let one = Field::constant(grid, Complex64::new(1.0, 0.0));
    let i = Field::constant(grid, Complex64::new(0.0, 1.0));
    let cos1 = basis(&grid, sphere(1.0, 0, Trig::Cos, false))?;
    let cos1_phi = basis(&grid, sphere(1.0, 1, Trig::Cos, false))?;
    let c8 = -1.0 / (8.0 * PI);
    let c16 = -3.0 / (16.0 * PI);
    let mut rows = vec![
        sectional_row("sphere/real-imag/distinct", "a: cos(pi z), b: i cos(2 pi z)", &base, &cos1, &basis(&grid, sphere(2.0, 0, Trig::Cos, true))?, c8).paper(c8),
        sectional_row("sphere/real-imag/distinct-phi", "a: cos(pi z + phi), b: i sin(2 pi z - phi)", &base, &cos1_phi, &basis(&grid, sphere(2.0, -1, Trig::Sin, true))?, c8).paper(c8),
        sectional_row("sphere/real-imag/equal", "a: cos(pi z), b: i cos(pi z)", &base, &cos1, &basis(&grid, sphere(1.0, 0, Trig::Cos, true))?, c16).paper(c16),
        sectional_row("sphere/real-imag/unit", "a: 1, b: i", &base, &one, &i, c8).paper(c8),
        sectional_row("sphere/real-real", "a: cos(pi z), b: sin(pi z + phi)", &base, &cos1, &basis(&grid, sphere(1.0, 1, Trig::Sin, false))?, 0.0).paper(0.0),
        sectional_row("sphere/imag-imag", "a: i cos(pi z), b: i cos(2 pi z)", &base, &basis(&grid, sphere(1.0, 0, Trig::Cos, true))?, &basis(&grid, sphere(2.0, 0, Trig::Cos, true))?, 0.0).paper(0.0),
    ];
    rows.push(holomorphic_row("sphere/holomorphic/unit", "a: 1", &base, &one, c8).paper(c8));
    rows.push(holomorphic_row("sphere/holomorphic/basis", "a: cos(pi z + phi)", &base, &cos1_phi, c16).paper(c16));
    Ok(Table { rows, dump: Some(cos1) })
}

pub fn torus_curvature(n: usize) -> Result<Table, String> {
    let grid = Grid::torus(n).map_err(|e| e.to_string())?;
    let base = Arc::new(AssocPair::standard(grid));
    let one = Field::constant(grid, Complex64::new(1.0, 0.0));
    let i = Field::constant(grid, Complex64::new(0.0, 1.0));
    let cos_x = basis(&grid, torus(1, 0, Trig::Cos, false))?;
    let e_x = Field::from_fn(grid, |x, _| Complex64::from_polar(1.0, x));
    let e_y = Field::from_fn(grid, |_, y| Complex64::from_polar(1.0, y));
    let ie_x = e_x.map(|c| c * Complex64::i());
    let pi2 = PI * PI;
    let (c8, c16) = (-1.0 / (8.0 * pi2), -3.0 / (16.0 * pi2));
    let rows = vec![
        sectional_row("torus/real-imag/distinct", "a: cos x, b: i cos 2y", &base, &cos_x, &basis(&grid, torus(0, 2, Trig::Cos, true))?, c8).paper(c8),
        sectional_row("torus/real-imag/equal", "a: cos(x + y), b: i cos(x + y)", &base, &basis(&grid, torus(1, 1, Trig::Cos, false))?, &basis(&grid, torus(1, 1, Trig::Cos, true))?, c16).paper(c16),
        sectional_row("torus/real-imag/unit", "a: 1, b: i", &base, &one, &i, c8).paper(c8),
        sectional_row("torus/real-real", "a: cos x, b: sin 2y", &base, &cos_x, &basis(&grid, torus(0, 2, Trig::Sin, false))?, 0.0).paper(0.0),
        sectional_row("torus/exponential/generic", "a: exp(i x), b: exp(i y)", &base, &e_x, &e_y, -1.0 / (16.0 * pi2))
            .paper(-1.0 / (16.0 * PI))
            .typo("published -1/(16 pi); quadrature oracle gives -1/(16 pi^2)"),
        sectional_row("torus/exponential/rotated", "a: exp(i x), b: i exp(i x)", &base, &e_x, &ie_x, -1.0 / (8.0 * pi2))
            .paper(-1.0 / (8.0 * PI))
            .typo("published -1/(8 pi); quadrature oracle gives -1/(8 pi^2)"),
        holomorphic_row("torus/holomorphic/basis", "a: cos x", &base, &cos_x, c16).paper(c16),
        holomorphic_row("torus/holomorphic/unit", "a: 1", &base, &one, c8).paper(c8),
    ];
    Ok(Table { rows, dump: Some(cos_x) })
}

fn quotient_row(id: String, inputs: String, base: &Arc<AssocPair>, a: BasisFunction, b: BasisFunction, want: f64) -> Row {
    let run = || -> Result<f64, String> {
        let ta = tangent(base, &basis(base.grid(), a)?)?;
        let tb = tangent(base, &basis(base.grid(), b)?)?;
        let pair = HorizontalPair::new(ta, tb).map_err(|e| e.to_string())?;
        Ok(quotient_sectional(&pair).map_err(|e| e.to_string())?.total)
    };
    match run() {
        Ok(k) if want == 0.0 => Row::absolute(id, inputs, k, 0.0, 1e-12),
        Ok(k) => Row::compare(id, inputs, k, want, QUOTIENT_TOL),
        Err(e) => Row::failed(id, inputs, e),
    }
}

pub fn quotient(n: usize) -> Result<Table, String> {
    let grid = Grid::torus(n).map_err(|e| e.to_string())?;
    let base = Arc::new(AssocPair::standard(grid));
    let shape = |k: i64, l: i64| {
        let (k2, l2) = ((k * k) as f64, (l * l) as f64);
        k2 * l2 / (k2 + l2).powi(2)
    };
    let pi2 = PI * PI;
    let x = |k| BasisFunction::TorusX { k, trig: Trig::Cos };
    let y = |l| BasisFunction::TorusY { l, trig: Trig::Cos };
    let d = |p| BasisFunction::TorusDiag { p, trig: Trig::Cos };
    let ad = |q| BasisFunction::TorusAntiDiag { q, trig: Trig::Cos };
    let mut rows = Vec::new();
    for k in 1..=3 {
        for l in 1..=3 {
            let v = 3.0 / (8.0 * pi2) * shape(k, l);
            rows.push(quotient_row(format!("quotient/real/k{k}-l{l}"), format!("a: cos {k}x, b: cos {l}y"), &base, x(k), y(l), v).paper(v));
        }
    }
    rows.push(quotient_row("quotient/real/same-axis".into(), "a: cos x, b: cos 2x".into(), &base, x(1), x(2), 0.0).paper(0.0));
    for p in 1..=3 {
        for q in 1..=3 {
            let printed = 3.0 / (32.0 * pi2) * shape(p, q);
            let derived = 3.0 / (8.0 * pi2) * shape(p, q);
            rows.push(
                quotient_row(format!("quotient/imaginary/p{p}-q{q}"), format!("a: i cos {p}(x+y), b: i cos {q}(x-y)"), &base, d(p), ad(q), derived)
                    .paper(printed)
                    .typo("published 3/(32 pi^2) p^2q^2/(p^2+q^2)^2; the bracket gives 3/(8 pi^2) p^2q^2/(p^2+q^2)^2"),
            );
        }
    }
    rows.push(quotient_row("quotient/imaginary/same-diagonal".into(), "a: i cos(x+y), b: i cos 2(x+y)".into(), &base, d(1), d(2), 0.0).paper(0.0));
    let c = 1.0 / (4.0 * pi2);
    for k in 1..=3 {
        for p in 1..=3 {
            rows.push(quotient_row(format!("quotient/mixed/k{k}-p{p}"), format!("a: cos {k}x, b: i cos {p}(x+y)"), &base, x(k), d(p), c).paper(c));
        }
    }
    for (a, b, inputs) in [(0, 1, "a: 1, b: i cos(x+y)"), (1, 0, "a: cos x, b: i")] {
        rows.push(
            quotient_row(format!("quotient/mixed/constant-{a}{b}"), inputs.into(), &base, x(a), d(b), c)
                .paper(-1.0 / (8.0 * PI))
                .typo("published -1/(8 pi) assuming a vanishing bracket; the bracket is nonzero and the value is 1/(4 pi^2)"),
        );
    }
    let pair = HorizontalPair::new(tangent(&base, &basis(&grid, x(1))?)?, tangent(&base, &basis(&grid, y(1))?)?).map_err(|e| e.to_string())?;
    let dump = brace_source(&pair).map_err(|e| e.to_string())?.to_complex();
    Ok(Table { rows, dump: Some(dump) })
}

fn mat(rows: &[&[f64]]) -> SquareMatrix {
    SquareMatrix::from_rows(rows)
}

/// Pointwise structures at g = diag(1, 2): sectional curvature of a fixed
/// plane and the geodesic equation residual of the closed-form geodesics.
pub fn point_structures() -> Result<Table, String> {
    let id = SpdMatrix::new(SquareMatrix::identity(2)).map_err(|e| e.to_string())?;
    let g = SpdMatrix::new(SquareMatrix::from_diag(&[1.0, 2.0])).map_err(|e| e.to_string())?;
    let a = mat(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let b = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let v = mat(&[&[0.3, 0.2], &[0.2, -0.5]]);
    let structures = [
        ("flat", WeakStructure::flat(0.0, None)),
        ("conformally-flat", WeakStructure::conformally_flat(None)),
        ("homogeneous", WeakStructure::homogeneous(0.0)),
        ("dewitt-0.3", WeakStructure::dewitt(0.3)),
        ("non-riemannian", WeakStructure::non_riemannian()),
        ("canonical", WeakStructure::canonical()),
    ];
    let mut rows = Vec::new();
    let k_hom = pointgeom::sectional_curvature_point(&WeakStructure::homogeneous(0.0), &id, &a, &b).map_err(|e| e.to_string())?;
    rows.push(Row::compare("point/homogeneous/sectional-identity", "g = I, a = diag(1,-1), b = [[0,1],[1,0]]", k_hom, -0.5, 1e-12));
    let k_can = pointgeom::sectional_curvature_point(&WeakStructure::canonical(), &g, &a, &b).map_err(|e| e.to_string())?;
    let k_dw0 = pointgeom::sectional_curvature_point(&WeakStructure::dewitt(0.0), &g, &a, &b).map_err(|e| e.to_string())?;
    rows.push(Row::compare("point/dewitt-0/sectional", "g = diag(1,2); canonical value as oracle", k_dw0, k_can, 1e-12));
    for (name, s) in &structures {
        if *name == "non-riemannian" {
            continue;
        }
        let row = match pointgeom::sectional_curvature_point(s, &g, &a, &b) {
            Ok(k) => Row::value(format!("point/{name}/sectional"), "g = diag(1,2), a = diag(1,-1), b = [[0,1],[1,0]]", k),
            Err(e) => Row::failed(format!("point/{name}/sectional"), "", e.to_string()),
        };
        rows.push(row);
    }
    for (name, s) in &structures {
        if *name == "conformally-flat" {
            continue;
        }
        match pointgeom::fd_geodesic_residual(s, &g, &v, 0.8, 1e-3) {
            Ok(r) => rows.push(Row::at_most(format!("point/{name}/geodesic-residual"), "g0 = diag(1,2), a0 = [[0.3,0.2],[0.2,-0.5]], t = 0.8, dt = 1e-3", r, 1e-5 * v.norm_fro().powi(2))),
            Err(e) => rows.push(Row::failed(format!("point/{name}/geodesic-residual"), "", e.to_string())),
        }
    }
    for (name, s) in [("canonical", WeakStructure::canonical()), ("dewitt-0.3", WeakStructure::dewitt(0.3))] {
        for t in [0.5, 2.0] {
            let run = || -> Result<(f64, f64), String> {
                let gt = pointgeom::geodesic_point(&s, &g, &v, t).map_err(|e| e.to_string())?;
                let f = pointgeom::geodesic_volume_factor(&s, &g, &v, t).map_err(|e| e.to_string())?;
                Ok(((gt.det() / g.det()).sqrt(), f))
            };
            let id = format!("point/{name}/volume-factor-t{t}");
            match run() {
                Ok((ratio, f)) => rows.push(Row::compare(id, "sqrt(det g_t / det g0) against q(t)^2 + r^2 t^2", ratio, f, 1e-10)),
                Err(e) => rows.push(Row::failed(id, "", e)),
            }
        }
    }
    Ok(Table { rows, dump: None })
}
