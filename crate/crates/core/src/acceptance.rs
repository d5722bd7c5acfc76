//! The acceptance suite: twelve numerical checks at desk scale, each with a
//! tolerance and a runtime budget. A check passes only if every assertion
//! holds and it finishes within budget.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::{cumulative_kernel, random_direction, Embedding};
use crate::entropy::{claim_integral, covering_curve, dudley_report, log_log_slope, lp_covering_bound};
use crate::error::{Error, Result};
use crate::manifold::{ManifoldModel, Point};
use crate::spectrum::{eigenvalue_count, enumerate_band};
use crate::waves::{eval_wave, expected_sup, mean_and_std_error, sample_wave, sup_norm_bound};

const SEED: u64 = 20_240_601;
const WAVE_DENSITY: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<22} {:>6.2}s of {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

/// `(id, name, budget in seconds, check)` for every criterion.
pub const CRITERIA: [(usize, &str, f64, Check); 12] = [
    (1, "weyl_law", 10.0, weyl_law),
    (2, "two_path_distance", 30.0, two_path_distance),
    (3, "mehler_heine_profile", 60.0, mehler_heine_profile),
    (4, "lipschitz_stability", 60.0, lipschitz_stability),
    (5, "almost_isometry", 60.0, almost_isometry),
    (6, "antipodal_degeneracy", 10.0, antipodal_degeneracy),
    (7, "diameter", 120.0, diameter),
    (8, "covering_bounds", 120.0, covering_bounds),
    (9, "dudley_chain", 300.0, dudley_chain),
    (10, "sup_norm_trend", 600.0, sup_norm_trend),
    (11, "claim_integral", 1.0, claim),
    (12, "covariance_distance", 120.0, covariance_distance),
];

pub fn run(id: usize) -> Option<Outcome> {
    let (id, name, budget, check) = CRITERIA.iter().find(|c| c.0 == id).cloned()?;
    let t0 = Instant::now();
    let result = check();
    let seconds = t0.elapsed().as_secs_f64();
    let (ok, detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let over = seconds > budget;
    Some(Outcome {
        id,
        name,
        passed: ok && !over,
        detail: if over { format!("{detail}; over budget") } else { detail },
        seconds,
        budget_seconds: budget,
    })
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|c| run(c.0)).collect()
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn torus(sides: &[f64]) -> ManifoldModel {
    ManifoldModel::flat_torus(sides).expect("valid side lengths")
}

fn sphere_band(l: usize) -> Result<Embedding> {
    let e = Embedding::for_lambda(&ManifoldModel::sphere2(), l as f64)?;
    if e.band.degrees() != [l] {
        return Err(Error::Numerical(format!("band at {l} holds degrees {:?}", e.band.degrees())));
    }
    Ok(e)
}

fn weyl_law() -> Result<(bool, String)> {
    let s = ManifoldModel::sphere2();
    let mut r = rng(1);
    let lambda = 60.0;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = s.uniform_sample(&mut r);
        let e = cumulative_kernel(&s, lambda, &x, &x)?;
        worst = worst.max((e / (lambda * lambda / (4.0 * PI)) - 1.0).abs());
    }
    let t = torus(&[2.0 * PI, 2.0 * PI]);
    let n = eigenvalue_count(&t, 50.0)? as f64;
    let dev = (n / (PI * 2500.0) - 1.0).abs();
    Ok((
        worst <= 0.01 && dev <= 0.02,
        format!("sphere kernel dev {worst:.2e} (<= 1e-2), torus count dev {dev:.2e} (<= 2e-2)"),
    ))
}

fn two_path_distance() -> Result<(bool, String)> {
    let models = [
        ManifoldModel::sphere2(),
        torus(&[2.0 * PI, 2.0 * PI]),
        torus(&[2.0 * PI, 4.0]),
        torus(&[2.0 * PI, 2.0 * PI, 2.0 * PI]),
    ];
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (i, m) in models.iter().enumerate() {
        for lambda in [9.0, 40.0] {
            let e = Embedding::for_lambda(m, lambda)?;
            let mut r = rng(100 + 2 * i as u64 + (lambda as u64 / 40));
            let pairs: Vec<(Point, Point)> =
                (0..1000).map(|_| (m.uniform_sample(&mut r), m.uniform_sample(&mut r))).collect();
            let err = pairs
                .par_iter()
                .map(|(x, y)| Ok((e.dist_lambda(x, y)? - e.dist_lambda_coords(x, y)?).abs()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            worst = worst.max(err);
            checked += pairs.len();
        }
    }
    Ok((worst <= 1e-10, format!("max |kernel - coords| {worst:.2e} over {checked} pairs (<= 1e-10)")))
}

fn mehler_heine_profile() -> Result<(bool, String)> {
    let e = sphere_band(200)?;
    let mean = e.mean_mu();
    let r: Vec<f64> = (0..=2000).map(|i| 10.0 * i as f64 / 2000.0 / mean).collect();
    let rows = e.distance_profile(&r)?;
    let worst = rows
        .iter()
        .map(|p| (p.measured * p.measured - p.reference * p.reference).abs())
        .fold(0.0, f64::max);
    let tol = 0.02 * 2.0 / (4.0 * PI);
    Ok((worst <= tol, format!("sup |d^2 - ref^2| {worst:.3e} (<= {tol:.3e})")))
}

fn lipschitz_stability() -> Result<(bool, String)> {
    let s = ManifoldModel::sphere2();
    let mut maxima = Vec::new();
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    for (i, lambda) in [30.0, 60.0].into_iter().enumerate() {
        let e = Embedding::for_lambda(&s, lambda)?;
        let scan = e.lipschitz_scan(2000, &mut rng(200 + i as u64))?;
        let mut r = rng(210 + i as u64);
        let mut pairs = Vec::with_capacity(10_000);
        for j in 0..10_000 {
            let x = s.uniform_sample(&mut r);
            let y = if j % 2 == 0 {
                s.uniform_sample(&mut r)
            } else {
                let t = 10.0 / lambda * (1.0 - r.gen::<f64>());
                let v: Vec<f64> = random_direction(2, &mut r).iter().map(|c| c * t).collect();
                s.exp_map(&x, &v)
            };
            pairs.push((x, y));
        }
        for (x, y) in &pairs {
            let dg = s.geodesic_distance(x, y)?;
            let d = e.dist_lambda(x, y)?;
            let bound = lambda * scan.max_ratio * dg;
            if d > bound * (1.0 + 1e-9) {
                violations += 1;
            }
            if dg > 0.0 {
                worst_ratio = worst_ratio.max(d / bound);
            }
        }
        maxima.push(scan.max_ratio);
    }
    let spread = (maxima[0] - maxima[1]).abs() / maxima[0].max(maxima[1]);
    Ok((
        spread <= 0.25 && violations == 0,
        format!(
            "scan max {:.4} / {:.4}, spread {spread:.3} (<= 0.25); fresh 2x1e4 pairs: {violations} violations, max d/bound {worst_ratio:.6}",
            maxima[0], maxima[1]
        ),
    ))
}

fn almost_isometry() -> Result<(bool, String)> {
    let l = 60usize;
    let e = sphere_band(l)?;
    let s = &e.model;
    let target = (l * (l + 1)) as f64 / (2.0 * 4.0 * PI);
    let mut r = rng(300);
    let (mut lo, mut hi, mut paths) = (f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let x = s.uniform_sample(&mut r);
        let g = e.pullback_metric(&x)?;
        let gk = e.pullback_metric_kernel(&x)?;
        let scale = g.matrix.abs().max();
        paths = paths.max((&g.matrix - &gk.matrix).abs().max() / scale);
        for ev in g.eigenvalues() {
            lo = lo.min(ev / target);
            hi = hi.max(ev / target);
        }
    }
    Ok((
        lo >= 0.95 && hi <= 1.05 && paths <= 1e-5,
        format!("eigenvalue ratio in [{lo:.5}, {hi:.5}] (within [0.95, 1.05]), path rel. diff {paths:.2e} (<= 1e-5)"),
    ))
}

fn antipodal_degeneracy() -> Result<(bool, String)> {
    let mut r = rng(400);
    let even = sphere_band(10)?;
    let odd = sphere_band(11)?;
    let l = 11.0;
    let analytic = (2.0 * (2.0 * l + 1.0) / (4.0 * PI * odd.k_lambda().powi(2)) * 2.0).sqrt();
    let (mut even_max, mut odd_err) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let x = even.model.uniform_sample(&mut r);
        let c = x.coords();
        let y = even.model.point(&[-c[0], -c[1], -c[2]])?;
        even_max = even_max.max(even.dist_lambda(&x, &y)?);
        odd_err = odd_err.max((odd.dist_lambda(&x, &y)? - analytic).abs());
    }
    Ok((
        even_max <= 1e-10 && odd_err <= 1e-10,
        format!("l=10 max d(x,-x) {even_max:.2e}; l=11 |d - {analytic:.6}| {odd_err:.2e} (both <= 1e-10)"),
    ))
}

fn diameter() -> Result<(bool, String)> {
    let upper = 2.0 / (4.0 * PI).sqrt() + 0.05;
    let mut sphere_ok = true;
    let mut parts = Vec::new();
    for l in [20usize, 40] {
        let d = sphere_band(l)?.diameter_estimate(4000)?.value;
        sphere_ok &= d > 0.1 && d <= upper;
        parts.push(format!("l={l}: {d:.4}"));
    }
    let t = torus(&[2.0 * PI, 2.0 * PI]);
    let d = Embedding::for_lambda(&t, 40.0)?.diameter_estimate(40_000)?.value;
    let reference = 2f64.sqrt() / t.volume.sqrt();
    let ratio = d / reference;
    Ok((
        sphere_ok && (ratio - 1.0).abs() <= 0.15,
        format!(
            "sphere {} (in (0.1, {upper:.4}]); torus {d:.5} vs sqrt(2/vol) {reference:.5}, ratio {ratio:.4} (within 15%)",
            parts.join(", ")
        ),
    ))
}

fn covering_bounds() -> Result<(bool, String)> {
    let s = ManifoldModel::sphere2();
    let pts = s.quasi_uniform_grid(20_000);
    let radii = [1.0, 0.5, 0.2];
    let curve = covering_curve(&pts, |a, b| s.geodesic_distance_unchecked(a, b), &radii, "geodesic", 2)?;
    let mut lp_ok = true;
    let mut parts = Vec::new();
    for (r, n) in &curve.entries {
        let bound = lp_covering_bound(&s, *r)?;
        lp_ok &= *n <= bound;
        parts.push(format!("N({r})={n} <= {bound:.1}"));
    }

    let e = sphere_band(20)?;
    let table = e.radial_table(1 << 17)?;
    let half = 0.5 * e.diameter_estimate(4000)?.value;
    let eps: Vec<f64> = (0..=8).map(|i| half * 0.25f64.powf(i as f64 / 8.0)).collect();
    let substrate = s.quasi_uniform_grid(200_000);
    let c = covering_curve(&substrate, |a, b| table.dist(a, b), &eps, "dlambda", 2)?;
    let slope = log_log_slope(&c, eps[8], eps[0])?;
    Ok((
        lp_ok && (slope - 2.0).abs() <= 0.3,
        format!("{}; d_lambda slope at l=20 over [D/4, D]: {slope:.3} (2 +- 0.3)", parts.join(", ")),
    ))
}

fn dudley_chain() -> Result<(bool, String)> {
    let e = sphere_band(40)?;
    let s = e.model.clone();
    let table = e.radial_table(1 << 17)?;
    let half = 0.5 * e.diameter_estimate(4000)?.value;
    let eps: Vec<f64> = (0..=8).map(|i| half * 0.5f64.powf(i as f64 / 8.0)).collect();
    let substrate = s.quasi_uniform_grid(200_000);
    let curve = covering_curve(&substrate, |a, b| table.dist(a, b), &eps, "dlambda", 2)?;
    let dudley = dudley_report(&curve)?.bound;
    let est = expected_sup(&s, 40.0, 200, WAVE_DENSITY, SEED)?;
    let bound = sup_norm_bound(&s, 40.0)?.general;
    let doubling = est.doubling_gap_mean <= 3.0 * est.doubling_gap_std_error;
    Ok((
        est.sup_mean <= dudley && est.sup_mean <= bound && doubling,
        format!(
            "E[sup] {:.4} +- {:.4} <= dudley {dudley:.4}, <= bound {bound:.4}; E||phi|| {:.4} - 2E[sup] = {:.4} (<= 3 se = {:.4})",
            est.sup_mean,
            est.sup_std_error,
            est.mean,
            est.doubling_gap_mean,
            3.0 * est.doubling_gap_std_error
        ),
    ))
}

fn sup_norm_trend() -> Result<(bool, String)> {
    let s = ManifoldModel::sphere2();
    let limit = 16.0 / PI.sqrt();
    let mut ratios = Vec::new();
    for lambda in [20.0f64, 40.0, 80.0] {
        let est = expected_sup(&s, lambda, 200, WAVE_DENSITY, SEED)?;
        ratios.push(est.mean / lambda.ln().sqrt());
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let spread = hi / lo - 1.0;
    Ok((
        hi <= limit && spread <= 0.3,
        format!(
            "E||phi||/sqrt(ln lambda) = {:.4}, {:.4}, {:.4} (<= {limit:.3}, margin {:.1}x), spread {spread:.3} (<= 0.3)",
            ratios[0],
            ratios[1],
            ratios[2],
            limit / hi
        ),
    ))
}

fn claim() -> Result<(bool, String)> {
    let mut ok = true;
    let mut worst_gap = 0.0f64;
    let mut worst_slack = f64::INFINITY;
    for a in [0.01, 0.05, 0.1, 0.2, 0.5] {
        let c = claim_integral(a)?;
        let gap = (c.quadrature - c.closed_form).abs();
        ok &= (c.value() - 1.0).abs() <= a / 2.0 && gap <= 1e-8;
        worst_gap = worst_gap.max(gap);
        worst_slack = worst_slack.min(a / 2.0 - (c.value() - 1.0).abs());
    }
    Ok((ok, format!("min slack of |I-1| <= a/2: {worst_slack:.3e}; max path gap {worst_gap:.2e} (<= 1e-8)")))
}

fn covariance_distance() -> Result<(bool, String)> {
    let t = torus(&[2.0 * PI, 2.0 * PI]);
    let band = enumerate_band(&t, 20.0)?;
    let e = Embedding::new(band.clone())?;
    let mut r = rng(1200);
    let pairs: Vec<(Point, Point)> = (0..20).map(|_| (t.uniform_sample(&mut r), t.uniform_sample(&mut r))).collect();
    let samples = 2000u64;
    let diffs: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let w = sample_wave(&band, SEED, i)?;
            pairs.iter().map(|(x, y)| Ok((eval_wave(&w, x)? - eval_wave(&w, y)?).powi(2))).collect()
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    let mut misses = 0;
    for (j, (x, y)) in pairs.iter().enumerate() {
        let col: Vec<f64> = diffs.iter().map(|d| d[j]).collect();
        let (mean, se) = mean_and_std_error(&col);
        let z = (mean - e.dist_lambda(x, y)?.powi(2)).abs() / se;
        worst = worst.max(z);
        if z > 3.0 {
            misses += 1;
        }
    }
    Ok((
        misses == 0,
        format!("max |mean (phi(x)-phi(y))^2 - d^2| / se = {worst:.2} over 20 pairs (<= 3), {misses} misses"),
    ))
}
