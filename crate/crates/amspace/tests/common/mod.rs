#![allow(dead_code)]

use std::f64::consts::PI;

use amspace::fields::{ComplexField, Field, Grid};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random complex field from a few low modes of the chart's basis family,
/// rescaled so that sup|p| = cap.
pub fn random_modes(grid: Grid, rng: &mut ChaCha8Rng, cap: f64) -> ComplexField {
    let sphere = grid.chart() == amspace::fields::Chart::Sphere;
    let terms: Vec<(f64, f64, Complex64, f64)> = (0..4)
        .map(|_| {
            let k = rng.gen_range(-3i64..=3) as f64;
            let l = rng.gen_range(-3i64..=3) as f64;
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let k = if sphere { k * PI } else { k };
            (k, l, c, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let f = Field::from_fn(grid, move |x1, x2| {
        terms
            .iter()
            .map(|&(k, l, c, ph)| {
                // sphere chart: trig(k z + l φ); torus: trig(k x + l y)
                let arg = if sphere { k * x2 + l * x1 + ph } else { k * x1 + l * x2 + ph };
                c * arg.cos()
            })
            .sum::<Complex64>()
    });
    let m = f.max_abs().max(1e-300);
    f.map(|c| c * (cap / m))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
