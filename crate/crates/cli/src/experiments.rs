use eigenband::acceptance;
use eigenband::embed::{cumulative_kernel, Embedding};
use eigenband::entropy::{claim_integral, covering_curve, dudley_report, log_log_slope, lp_covering_bound};
use eigenband::manifold::{ManifoldKind, ManifoldModel, Point};
use eigenband::spectrum::{eigenvalue_count, enumerate_band, weyl_count_deviation};
use eigenband::waves::{expected_sup, sup_norm_bound};
use eigenband::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::report::{num, Outcome, Table};

fn base_point(model: &ManifoldModel) -> Result<Point> {
    match model.kind {
        ManifoldKind::Sphere2 => Ok(ManifoldModel::sphere_point(0.7, 0.3)),
        ManifoldKind::FlatTorus => model.point(&vec![0.0; model.dim]),
    }
}

fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi / lo - 1.0
}

/// Count and on-diagonal kernel against their Weyl predictions.
pub fn weyl(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&[
        "lambda",
        "count",
        "prediction",
        "count_deviation",
        "kernel_diagonal",
        "kernel_prediction",
        "kernel_deviation",
    ]);
    let alpha = model.weyl_constants().alpha_n;
    let x = base_point(model)?;
    let (mut worst_count, mut worst_kernel) = (0.0f64, 0.0f64);
    for &lambda in &cfg.lambdas {
        let n = eigenvalue_count(model, lambda)?;
        let local = alpha * lambda.powi(model.dim as i32);
        let dev = weyl_count_deviation(model, lambda)?;
        let e = cumulative_kernel(model, lambda, &x, &x)?;
        let kdev = e / local - 1.0;
        worst_count = worst_count.max(dev.abs());
        worst_kernel = worst_kernel.max(kdev.abs());
        t.push(vec![
            num(lambda),
            n.to_string(),
            num(local * model.volume),
            num(dev),
            num(e),
            num(local),
            num(kdev),
        ]);
    }
    let mut out = Outcome::with_table(t);
    out.stat("max_abs_count_deviation", worst_count);
    out.stat("max_abs_kernel_deviation", worst_kernel);
    match model.kind {
        ManifoldKind::Sphere2 => out.flag("kernel_deviation_within_1pct", worst_kernel <= 0.01),
        ManifoldKind::FlatTorus => out.flag("count_deviation_within_2pct", worst_count <= 0.02),
    }
    Ok(out)
}

/// Band dimensions and normalizing constants.
pub fn band(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&["lambda", "m_lambda", "k_lambda", "k_sq_minus_m", "mean_mu"]);
    let mut ok = true;
    for &lambda in &cfg.lambdas {
        let b = enumerate_band(model, lambda)?;
        let (k, gap, mean) = match b.k_lambda {
            Some(k) => (num(k), num(k * k - b.m_lambda as f64), num(b.mean_mu())),
            None => (String::new(), String::new(), String::new()),
        };
        if let Some(k) = b.k_lambda {
            ok &= (k * k - b.m_lambda as f64).abs() < 1.0;
        }
        t.push(vec![num(lambda), b.m_lambda.to_string(), k, gap, mean]);
    }
    let mut out = Outcome::with_table(t);
    out.flag("k_squared_within_one_of_m", ok);
    Ok(out)
}

pub fn lipschitz(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&[
        "lambda",
        "max_ratio",
        "sampled_max",
        "infinitesimal_limit",
        "trace_limit",
        "argmax_separation",
        "pairs",
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut maxima = Vec::new();
    for &lambda in &cfg.lambdas {
        let scan = Embedding::for_lambda(model, lambda)?.lipschitz_scan(cfg.samples, &mut rng)?;
        maxima.push(scan.max_ratio);
        t.push(vec![
            num(lambda),
            num(scan.max_ratio),
            num(scan.sampled_max),
            num(scan.infinitesimal_limit),
            num(scan.trace_limit),
            num(scan.argmax_separation),
            scan.pairs.to_string(),
        ]);
    }
    let mut out = Outcome::with_table(t);
    if maxima.len() > 1 {
        let s = spread(&maxima);
        out.stat("max_ratio_spread", s);
        out.flag("maxima_within_25pct", s / (1.0 + s) <= 0.25);
    }
    Ok(out)
}

/// `d_λ` at separations with `λ̄ r ∈ [0, 10]` against the radial reference.
pub fn profile(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&["lambda", "r", "lambda_bar_r", "measured", "reference", "sq_difference"]);
    let mut worst = 0.0f64;
    for &lambda in &cfg.lambdas {
        let e = Embedding::for_lambda(model, lambda)?;
        let mean = e.mean_mu();
        let r_max = (10.0 / mean).min(model.injectivity_radius);
        let r: Vec<f64> = (0..=cfg.samples).map(|i| r_max * i as f64 / cfg.samples as f64).collect();
        for row in e.distance_profile(&r)? {
            let diff = row.measured * row.measured - row.reference * row.reference;
            worst = worst.max(diff.abs());
            t.push(vec![
                num(lambda),
                num(row.r),
                num(mean * row.r),
                num(row.measured),
                num(row.reference),
                num(diff),
            ]);
        }
    }
    let tol = 0.02 * 2.0 / model.volume;
    let mut out = Outcome::with_table(t);
    out.stat("max_abs_sq_difference", worst);
    out.stat("tolerance", tol);
    out.flag("profile_within_2pct", worst <= tol);
    Ok(out)
}

/// Pullback metric at random points against `λ̄² / (n vol) · I`.
pub fn isometry(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&[
        "lambda",
        "point",
        "eig_min",
        "eig_max",
        "constant",
        "oracle",
        "ratio",
        "path_rel_difference",
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut lo, mut hi, mut paths) = (f64::INFINITY, 0.0f64, 0.0f64);
    for &lambda in &cfg.lambdas {
        let e = Embedding::for_lambda(model, lambda)?;
        let mu_sq = e.band.modes.iter().map(|m| m.mu_sq).sum::<f64>() / e.band.m_lambda as f64;
        let oracle = mu_sq / (model.dim as f64 * model.volume);
        for i in 0..cfg.samples {
            let x = model.uniform_sample(&mut rng);
            let g = e.pullback_metric(&x)?;
            let gk = e.pullback_metric_kernel(&x)?;
            let diff = (&g.matrix - &gk.matrix).abs().max() / g.matrix.abs().max();
            let ev = g.eigenvalues();
            let c = g.trace() / model.dim as f64;
            lo = lo.min(ev[0] / oracle);
            hi = hi.max(ev[ev.len() - 1] / oracle);
            paths = paths.max(diff);
            t.push(vec![
                num(lambda),
                i.to_string(),
                num(ev[0]),
                num(ev[ev.len() - 1]),
                num(c),
                num(oracle),
                num(c / oracle),
                num(diff),
            ]);
        }
    }
    let mut out = Outcome::with_table(t);
    out.stat("min_eigenvalue_ratio", lo);
    out.stat("max_eigenvalue_ratio", hi);
    out.stat("max_path_rel_difference", paths);
    out.flag("ratio_within_5pct", lo >= 0.95 && hi <= 1.05);
    out.flag("paths_agree_1e-5", paths <= 1e-5);
    Ok(out)
}

pub fn supnorm(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&[
        "lambda",
        "samples",
        "grid_points",
        "mean",
        "std_error",
        "sup_mean",
        "sup_std_error",
        "bound_general",
        "bound_aperiodic",
        "mean_over_sqrt_log",
    ]);
    let mut per_lambda = Vec::new();
    let mut ratios = Vec::new();
    let mut below = true;
    for &lambda in &cfg.lambdas {
        let est = expected_sup(model, lambda, cfg.samples, cfg.grid_density, cfg.seed)?;
        let bound = sup_norm_bound(model, lambda)?;
        let ratio = est.mean / lambda.ln().sqrt();
        below &= est.mean <= bound.general;
        ratios.push(ratio);
        t.push(vec![
            num(lambda),
            est.samples.to_string(),
            est.grid_points.to_string(),
            num(est.mean),
            num(est.std_error),
            num(est.sup_mean),
            num(est.sup_std_error),
            num(bound.general),
            num(bound.aperiodic),
            num(ratio),
        ]);
        per_lambda.push(json!({
            "lambda": lambda,
            "mean": est.mean,
            "std_error": est.std_error,
            "sup_mean": est.sup_mean,
            "sup_std_error": est.sup_std_error,
            "bound_general": bound.general,
            "bound_aperiodic": bound.aperiodic,
            "grid_points": est.grid_points,
        }));
    }
    let mut out = Outcome::with_table(t);
    out.stat("per_lambda", per_lambda);
    out.flag("below_general_bound", below);
    if ratios.len() > 1 {
        out.stat("ratio_spread", spread(&ratios));
        out.flag("sqrt_log_flat_within_30pct", spread(&ratios) <= 0.3);
    }
    Ok(out)
}

/// Net curve under `d_λ`, the entropy integral and the Monte Carlo supremum.
pub fn dudley(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&["lambda", "eps", "count"]);
    let substrate = model.quasi_uniform_grid(cfg.substrate);
    let mut per_lambda = Vec::new();
    let (mut below_dudley, mut below_bound, mut doubling) = (true, true, true);
    for &lambda in &cfg.lambdas {
        let e = Embedding::for_lambda(model, lambda)?;
        let half = 0.5 * e.diameter_estimate(4000)?.value;
        let radii = cfg.radii(half);
        let curve = match model.kind {
            ManifoldKind::Sphere2 => {
                let table = e.radial_table(1 << 17)?;
                covering_curve(&substrate, |a, b| table.dist(a, b), &radii, "dlambda", model.dim)?
            }
            ManifoldKind::FlatTorus => {
                covering_curve(&substrate, |a, b| e.dist_unchecked(a, b), &radii, "dlambda", model.dim)?
            }
        };
        for (eps, n) in &curve.entries {
            t.push(vec![num(lambda), num(*eps), num(*n)]);
        }
        let rep = dudley_report(&curve)?;
        let est = expected_sup(model, lambda, cfg.samples, cfg.grid_density, cfg.seed)?;
        let bound = sup_norm_bound(model, lambda)?;
        below_dudley &= est.sup_mean <= rep.bound;
        below_bound &= est.sup_mean <= bound.general;
        doubling &= est.doubling_gap_mean <= 3.0 * est.doubling_gap_std_error;
        per_lambda.push(json!({
            "lambda": lambda,
            "dudley": rep,
            "sup_mean": est.sup_mean,
            "sup_std_error": est.sup_std_error,
            "sup_norm_mean": est.mean,
            "sup_norm_std_error": est.std_error,
            "doubling_gap_mean": est.doubling_gap_mean,
            "doubling_gap_std_error": est.doubling_gap_std_error,
            "bound_general": bound.general,
            "observed_diameter": curve.diameter,
        }));
    }
    let mut out = Outcome::with_table(t);
    out.stat("per_lambda", per_lambda);
    out.flag("sup_below_dudley", below_dudley);
    out.flag("sup_below_bound", below_bound);
    out.flag("sup_norm_within_doubling", doubling);
    Ok(out)
}

pub fn diameter(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&["lambda", "estimate", "sqrt2_over_sqrt_vol", "ratio", "upper_2_over_sqrt_vol"]);
    let reference = (2.0 / model.volume).sqrt();
    let upper = 2.0 / model.volume.sqrt();
    let mut ok = true;
    for &lambda in &cfg.lambdas {
        let d = Embedding::for_lambda(model, lambda)?.diameter_estimate(cfg.substrate)?.value;
        ok &= match model.kind {
            ManifoldKind::Sphere2 => d > 0.1 && d <= upper + 0.05,
            ManifoldKind::FlatTorus => (d / reference - 1.0).abs() <= 0.15,
        };
        t.push(vec![num(lambda), num(d), num(reference), num(d / reference), num(upper)]);
    }
    let mut out = Outcome::with_table(t);
    match model.kind {
        ManifoldKind::Sphere2 => out.flag("within_upper_bound", ok),
        ManifoldKind::FlatTorus => out.flag("within_15pct_of_sqrt2_over_sqrt_vol", ok),
    }
    Ok(out)
}

/// Geodesic nets against the packing bound (radii taken as absolute), and
/// `d_λ` nets with radii scaled by half the `d_λ` diameter.
pub fn covering(cfg: &ExperimentConfig, model: &ManifoldModel) -> Result<Outcome> {
    let mut t = Table::new(&["distance", "lambda", "eps", "count", "bound"]);
    let substrate = model.quasi_uniform_grid(cfg.substrate);
    let radii = cfg.radii(1.0);
    let geo = covering_curve(&substrate, |a, b| model.geodesic_distance(a, b).unwrap_or(f64::NAN), &radii, "geodesic", model.dim)?;
    let mut lp_ok = true;
    for (eps, n) in &geo.entries {
        let bound = lp_covering_bound(model, *eps).ok();
        if let Some(b) = bound {
            lp_ok &= *n <= b;
        }
        t.push(vec!["geodesic".into(), String::new(), num(*eps), num(*n), bound.map(num).unwrap_or_default()]);
    }
    let mut slopes = Vec::new();
    for &lambda in &cfg.lambdas {
        let e = Embedding::for_lambda(model, lambda)?;
        let half = 0.5 * e.diameter_estimate(4000)?.value;
        let radii = cfg.radii(half);
        let curve = match model.kind {
            ManifoldKind::Sphere2 => {
                let table = e.radial_table(1 << 17)?;
                covering_curve(&substrate, |a, b| table.dist(a, b), &radii, "dlambda", model.dim)?
            }
            ManifoldKind::FlatTorus => {
                covering_curve(&substrate, |a, b| e.dist_unchecked(a, b), &radii, "dlambda", model.dim)?
            }
        };
        for (eps, n) in &curve.entries {
            t.push(vec!["dlambda".into(), num(lambda), num(*eps), num(*n), String::new()]);
        }
        if radii.len() > 1 {
            slopes.push(json!({
                "lambda": lambda,
                "slope": log_log_slope(&curve, radii[radii.len() - 1], radii[0])?,
            }));
        }
    }
    let slope_ok = slopes
        .iter()
        .all(|s| (s["slope"].as_f64().unwrap_or(f64::NAN) - model.dim as f64).abs() <= 0.3);
    let mut out = Outcome::with_table(t);
    out.stat("dlambda_slopes", slopes);
    out.flag("packing_bound_holds", lp_ok);
    out.flag("slope_within_0.3_of_dim", slope_ok);
    Ok(out)
}

pub fn claim(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Table::new(&["a", "integral", "bound", "quadrature", "closed_form", "pass"]);
    let mut ok = true;
    for &a in &cfg.a_values {
        let c = claim_integral(a)?;
        let pass = (c.value() - 1.0).abs() <= a / 2.0;
        ok &= pass;
        t.push(vec![
            num(a),
            num(c.value()),
            num(1.0 + a / 2.0),
            num(c.quadrature),
            num(c.closed_form),
            pass.to_string(),
        ]);
    }
    let mut out = Outcome::with_table(t);
    out.flag("within_half_a", ok);
    Ok(out)
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut t = Table::new(&["id", "name", "passed", "seconds", "budget_seconds", "detail"]);
    let ids: Vec<usize> = if cfg.criteria.is_empty() {
        acceptance::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        cfg.criteria.clone()
    };
    let mut out = Outcome::default();
    for id in ids {
        let Some(o) = acceptance::run(id) else {
            return Err(eigenband::Error::Domain(format!("no acceptance criterion {id}")));
        };
        println!("{o}");
        t.push(vec![
            o.id.to_string(),
            o.name.to_string(),
            o.passed.to_string(),
            num(o.seconds),
            num(o.budget_seconds),
            o.detail.clone(),
        ]);
        out.flag(format!("criterion_{:02}_{}", o.id, o.name), o.passed);
    }
    out.table = t;
    Ok(out)
}
