//! Checks that span several modules: spectrum, embedding, waves and nets.

use std::f64::consts::PI;

use eigenband::embed::Embedding;
use eigenband::entropy::{covering_curve, dudley_bound};
use eigenband::manifold::ManifoldModel;
use eigenband::waves::expected_sup;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn chord_is_shorter_than_pulled_back_path() {
    let models = [ManifoldModel::sphere2(), ManifoldModel::flat_torus(&[2.0 * PI, 3.0]).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in &models {
        let e = Embedding::for_lambda(m, 12.0).unwrap();
        for _ in 0..20 {
            let x = m.uniform_sample(&mut rng);
            let y = m.uniform_sample(&mut rng);
            let path = m.geodesic_polyline(&x, &y, 400);
            let length = e.path_length_glambda(&path).unwrap();
            let chord = e.dist_lambda(&x, &y).unwrap();
            assert!(chord <= length * (1.0 + 1e-3), "{chord} > {length}");
        }
    }
}

#[test]
fn net_size_scales_with_band_squared() {
    let s = ManifoldModel::sphere2();
    let pts = s.quasi_uniform_grid(60_000);
    let eps = [0.2];
    let count = |l: f64| {
        let e = Embedding::for_lambda(&s, l).unwrap();
        let table = e.radial_table(1 << 14).unwrap();
        covering_curve(&pts, |a, b| table.dist(a, b), &eps, "dlambda", 2).unwrap().entries[0].1
    };
    let ratio = count(20.0) / count(10.0);
    assert!(ratio > 2.0 && ratio < 8.0, "ratio {ratio}");
}

#[test]
fn entropy_integral_dominates_supremum() {
    let s = ManifoldModel::sphere2();
    let e = Embedding::for_lambda(&s, 6.0).unwrap();
    let half = 0.5 * e.diameter_estimate(2000).unwrap().value;
    let eps: Vec<f64> = (0..6).map(|i| half * 0.5f64.powf(i as f64 / 5.0)).collect();
    let pts = s.quasi_uniform_grid(20_000);
    let curve = covering_curve(&pts, |a, b| e.dist_unchecked(a, b), &eps, "dlambda", 2).unwrap();
    let bound = dudley_bound(&curve).unwrap();
    let est = expected_sup(&s, 6.0, 64, 8, 11).unwrap();
    assert!(est.sup_mean > 0.0 && est.sup_mean < bound, "{} vs {bound}", est.sup_mean);
}
