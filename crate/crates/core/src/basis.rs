//! Pointwise evaluation of the orthonormal eigenfunctions and their
//! gradients, plus product quadrature rules for Gram and energy checks.
//!
//! Gradients are returned in the orthonormal tangent frame of
//! [`ManifoldModel::tangent_frame`].

use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Error, Result};
use crate::manifold::{dot, ManifoldKind, ManifoldModel, Point, Vec3};
use crate::specfun::{gauss_legendre, DegreeTable};
use crate::spectrum::{torus_frequency, Band, Flavor, Mode, ModeLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeValue {
    pub value: f64,
    pub gradient: Vec<f64>,
}

pub fn eval_mode(model: &ManifoldModel, mode: &Mode, x: &Point) -> Result<f64> {
    let mut v = [0.0];
    eval_modes(model, std::slice::from_ref(mode), x, &mut v, None)?;
    Ok(v[0])
}

pub fn grad_mode(model: &ManifoldModel, mode: &Mode, x: &Point) -> Result<Vec<f64>> {
    Ok(eval_mode_with_gradient(model, mode, x)?.gradient)
}

pub fn eval_mode_with_gradient(model: &ManifoldModel, mode: &Mode, x: &Point) -> Result<ModeValue> {
    let mut v = [0.0];
    let mut g = [[0.0; 3]];
    eval_modes(model, std::slice::from_ref(mode), x, &mut v, Some(&mut g))?;
    Ok(ModeValue {
        value: v[0],
        gradient: g[0][..model.dim].to_vec(),
    })
}

fn check_mode(model: &ManifoldModel, mode: &Mode) -> Result<()> {
    match (model.kind, mode.label) {
        (ManifoldKind::Sphere2, ModeLabel::Sphere { l, m }) if l >= 1 && m.unsigned_abs() as usize <= l => {
            Ok(())
        }
        (ManifoldKind::FlatTorus, ModeLabel::Torus { k, .. })
            if k[model.dim..].iter().all(|c| *c == 0) && k.iter().any(|c| *c != 0) =>
        {
            Ok(())
        }
        _ => Err(Error::ModelMismatch(format!(
            "mode {:?} is not in the spectrum of a {:?} of dimension {}",
            mode.label, model.kind, model.dim
        ))),
    }
}

/// Evaluates every mode of `modes` at `x` into `values`, and optionally the
/// frame gradients into `grads` (first `dim` entries of each row are used).
/// Consecutive sphere modes of equal degree share one Legendre table.
pub fn eval_modes(
    model: &ManifoldModel,
    modes: &[Mode],
    x: &Point,
    values: &mut [f64],
    mut grads: Option<&mut [[f64; 3]]>,
) -> Result<()> {
    model.check_point(x)?;
    assert_eq!(values.len(), modes.len());
    if let Some(g) = grads.as_deref() {
        assert_eq!(g.len(), modes.len());
    }
    for mode in modes {
        check_mode(model, mode)?;
    }
    match x {
        Point::Sphere(p) => {
            let t = p[2];
            let s = p[0].hypot(p[1]);
            let phi = p[1].atan2(p[0]);
            let (sp, cp) = phi.sin_cos();
            let e_theta = [t * cp, t * sp, -s];
            let e_phi = [-sp, cp, 0.0];
            let frame = model.tangent_frame(x);
            let mut table: Option<DegreeTable> = None;
            for (j, mode) in modes.iter().enumerate() {
                let ModeLabel::Sphere { l, m } = mode.label else { unreachable!() };
                if table.as_ref().map(|tb| tb.l) != Some(l) {
                    table = Some(DegreeTable::new(l, t, s));
                }
                let tb = table.as_ref().unwrap();
                let ma = m.unsigned_abs() as usize;
                let mf = ma as f64;
                let (value, d_theta, d_phi_over_s) = if m == 0 {
                    (tb.p[0], tb.dtheta[0], 0.0)
                } else {
                    let (sm, cm) = (mf * phi).sin_cos();
                    if m > 0 {
                        (
                            SQRT_2 * tb.p[ma] * cm,
                            SQRT_2 * tb.dtheta[ma] * cm,
                            -SQRT_2 * mf * tb.q[ma] * sm,
                        )
                    } else {
                        (
                            SQRT_2 * tb.p[ma] * sm,
                            SQRT_2 * tb.dtheta[ma] * sm,
                            SQRT_2 * mf * tb.q[ma] * cm,
                        )
                    }
                };
                values[j] = value;
                if let Some(g) = grads.as_deref_mut() {
                    let amb: Vec3 = [
                        d_theta * e_theta[0] + d_phi_over_s * e_phi[0],
                        d_theta * e_theta[1] + d_phi_over_s * e_phi[1],
                        d_theta * e_theta[2] + d_phi_over_s * e_phi[2],
                    ];
                    g[j] = [dot(&amb, &frame[0]), dot(&amb, &frame[1]), 0.0];
                }
            }
        }
        Point::Torus { coords, dim } => {
            let amp = (2.0 / model.volume).sqrt();
            for (j, mode) in modes.iter().enumerate() {
                let ModeLabel::Torus { k, flavor } = mode.label else { unreachable!() };
                let w = torus_frequency(model, &k);
                let phase: f64 = (0..*dim).map(|i| w[i] * coords[i]).sum();
                let (sn, cs) = phase.sin_cos();
                let (value, slope) = match flavor {
                    Flavor::Cos => (amp * cs, -amp * sn),
                    Flavor::Sin => (amp * sn, amp * cs),
                };
                values[j] = value;
                if let Some(g) = grads.as_deref_mut() {
                    g[j] = [slope * w[0], slope * w[1], slope * w[2]];
                }
            }
        }
    }
    Ok(())
}

/// Product quadrature rule on the whole manifold; weights sum to the volume.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

/// Sphere: `sizes = [n_theta, n_phi]`, Gauss–Legendre in `cos θ` times the
/// uniform rule in `φ`; exact for harmonics of degree `< min(2 n_theta, n_phi)`.
/// Torus: trapezoid product rule with `sizes[i]` nodes on axis `i` (a single
/// entry is used for every axis).
pub fn quadrature_rule(model: &ManifoldModel, sizes: &[usize]) -> Result<QuadratureRule> {
    if sizes.is_empty() || sizes.iter().any(|s| *s == 0) {
        return domain("quadrature sizes must be positive");
    }
    match model.kind {
        ManifoldKind::Sphere2 => {
            let n_theta = sizes[0];
            let n_phi = *sizes.get(1).unwrap_or(&(2 * n_theta));
            let (nodes, w) = gauss_legendre(n_theta);
            let dphi = 2.0 * PI / n_phi as f64;
            let mut points = Vec::with_capacity(n_theta * n_phi);
            let mut weights = Vec::with_capacity(n_theta * n_phi);
            for (t, wt) in nodes.iter().zip(&w) {
                let s = (1.0 - t * t).max(0.0).sqrt();
                for j in 0..n_phi {
                    let (sp, cp) = (j as f64 * dphi).sin_cos();
                    points.push(Point::Sphere([s * cp, s * sp, *t]));
                    weights.push(wt * dphi);
                }
            }
            Ok(QuadratureRule { points, weights })
        }
        ManifoldKind::FlatTorus => {
            let counts: Vec<usize> = (0..model.dim).map(|i| *sizes.get(i).unwrap_or(&sizes[0])).collect();
            let points = model.product_grid(&counts);
            let w = model.volume / points.len() as f64;
            let weights = vec![w; points.len()];
            Ok(QuadratureRule { points, weights })
        }
    }
}

/// Gram matrix of the band modes under the quadrature rule, row-major.
pub fn gram_matrix(model: &ManifoldModel, modes: &[Mode], rule: &QuadratureRule) -> Result<Vec<f64>> {
    let m = modes.len();
    let mut gram = vec![0.0; m * m];
    let mut values = vec![0.0; m];
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        eval_modes(model, modes, x, &mut values, None)?;
        for a in 0..m {
            let wa = w * values[a];
            for b in a..m {
                gram[a * m + b] += wa * values[b];
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            gram[a * m + b] = gram[b * m + a];
        }
    }
    Ok(gram)
}

/// Largest entrywise deviation of the quadrature Gram matrix from identity.
pub fn orthonormality_check(model: &ManifoldModel, band: &Band, quadrature_size: &[usize]) -> Result<f64> {
    if band.is_empty() {
        return Err(Error::EmptyBand(band.lambda));
    }
    let rule = quadrature_rule(model, quadrature_size)?;
    let gram = gram_matrix(model, &band.modes, &rule)?;
    let m = band.modes.len();
    let mut worst = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((gram[a * m + b] - target).abs());
        }
    }
    Ok(worst)
}

/// Quadrature of `|∇φ_j|²` for each mode.
pub fn gradient_energy(model: &ManifoldModel, modes: &[Mode], rule: &QuadratureRule) -> Result<Vec<f64>> {
    let m = modes.len();
    let mut out = vec![0.0; m];
    let mut values = vec![0.0; m];
    let mut grads = vec![[0.0; 3]; m];
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        eval_modes(model, modes, x, &mut values, Some(&mut grads))?;
        for j in 0..m {
            out[j] += w * grads[j].iter().map(|g| g * g).sum::<f64>();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::legendre_p;
    use crate::spectrum::{enumerate_band, modes_in_interval};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn torus2pi() -> ManifoldModel {
        ManifoldModel::flat_torus(&[2.0 * PI, 2.0 * PI]).unwrap()
    }

    fn torus_mode(k: [i64; 3], flavor: Flavor) -> Mode {
        Mode { id: 0, mu: 1.0, mu_sq: 1.0, label: ModeLabel::Torus { k, flavor } }
    }

    fn sphere_mode(l: usize, m: i64) -> Mode {
        let mu_sq = (l * (l + 1)) as f64;
        Mode { id: 0, mu: mu_sq.sqrt(), mu_sq, label: ModeLabel::Sphere { l, m } }
    }

    #[test]
    fn value_examples() {
        let t = torus2pi();
        let o = t.point(&[0.0, 0.0]).unwrap();
        let v = eval_mode(&t, &torus_mode([1, 0, 0], Flavor::Cos), &o).unwrap();
        assert!((v - 1.0 / (PI * SQRT_2)).abs() < 1e-15);
        let s = ManifoldModel::sphere2();
        let north = s.point(&[0.0, 0.0, 1.0]).unwrap();
        let v = eval_mode(&s, &sphere_mode(1, 0), &north).unwrap();
        assert!((v - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        assert!(eval_mode(&s, &torus_mode([1, 0, 0], Flavor::Cos), &north).is_err());
        assert!(eval_mode(&t, &sphere_mode(1, 0), &o).is_err());
        assert!(eval_mode(&t, &torus_mode([1, 0, 1], Flavor::Cos), &o).is_err());
    }

    #[test]
    fn single_harmonic_norm_by_quadrature() {
        let s = ManifoldModel::sphere2();
        let rule = quadrature_rule(&s, &[200, 400]).unwrap();
        let modes = [sphere_mode(5, 3)];
        let g = gram_matrix(&s, &modes, &rule).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-6);
        assert!((rule.weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn gradient_examples() {
        let t = torus2pi();
        let o = t.point(&[0.0, 0.0]).unwrap();
        let g = grad_mode(&t, &torus_mode([1, 0, 0], Flavor::Cos), &o).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g[0].abs() < 1e-15 && g[1].abs() < 1e-15);
        let g = grad_mode(&t, &torus_mode([1, 0, 0], Flavor::Sin), &o).unwrap();
        assert!((g[0] - (2.0 / t.volume).sqrt()).abs() < 1e-15 && g[1] == 0.0);
    }

    fn fd_gradient(model: &ManifoldModel, mode: &Mode, x: &Point, h: f64) -> Vec<f64> {
        (0..model.dim)
            .map(|a| {
                let mut u = vec![0.0; model.dim];
                u[a] = h;
                let plus = eval_mode(model, mode, &model.chart_point(x, &u)).unwrap();
                u[a] = -h;
                let minus = eval_mode(model, mode, &model.chart_point(x, &u)).unwrap();
                (plus - minus) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = ManifoldModel::sphere2();
        let mut modes = vec![sphere_mode(3, 1)];
        modes.extend((-7..=7).map(|m| sphere_mode(7, m)));
        let mut points: Vec<Point> = (0..20).map(|_| s.uniform_sample(&mut rng)).collect();
        points.push(s.point(&[0.0, 0.0, 1.0]).unwrap());
        points.push(s.point(&[0.0, 0.0, -1.0]).unwrap());
        points.push(s.point(&[1e-9, 0.0, 1.0]).unwrap());
        for x in &points {
            for mode in &modes {
                let g = grad_mode(&s, mode, x).unwrap();
                let fd = fd_gradient(&s, mode, x, 1e-5);
                let scale = mode.mu * (mode.mu_sq / (4.0 * PI)).sqrt();
                for a in 0..2 {
                    assert!(
                        (g[a] - fd[a]).abs() <= 1e-6 * scale,
                        "{:?} at {x:?}: {g:?} vs {fd:?}",
                        mode.label
                    );
                }
            }
        }
        let t = ManifoldModel::flat_torus(&[2.0, 3.0, 1.5]).unwrap();
        let band = enumerate_band(&t, 7.0).unwrap();
        for _ in 0..10 {
            let x = t.uniform_sample(&mut rng);
            for mode in &band.modes {
                let g = grad_mode(&t, mode, &x).unwrap();
                let fd = fd_gradient(&t, mode, &x, 1e-5);
                for a in 0..3 {
                    assert!((g[a] - fd[a]).abs() <= 1e-6 * mode.mu);
                }
            }
        }
    }

    #[test]
    fn orthonormality_examples() {
        let t = torus2pi();
        let band = enumerate_band(&t, 1.0).unwrap();
        assert!(orthonormality_check(&t, &band, &[64, 64]).unwrap() <= 1e-12);
        let s = ManifoldModel::sphere2();
        let band = enumerate_band(&s, 9.0).unwrap();
        assert!(orthonormality_check(&s, &band, &[64, 128]).unwrap() <= 1e-8);
        let mut single = band.clone();
        single.modes.truncate(1);
        single.m_lambda = 1;
        assert!(orthonormality_check(&s, &single, &[64, 128]).unwrap() <= 1e-8);
        let empty = enumerate_band(&s, 0.0).unwrap();
        assert!(orthonormality_check(&s, &empty, &[8]).is_err());
        let t3 = ManifoldModel::flat_torus(&[1.0, 2.0, 3.0]).unwrap();
        let band = enumerate_band(&t3, 6.0).unwrap();
        assert!(orthonormality_check(&t3, &band, &[16, 24, 32]).unwrap() <= 1e-12);
    }

    #[test]
    fn addition_theorem() {
        let s = ManifoldModel::sphere2();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for l in [1usize, 2, 5, 17, 40] {
            let modes: Vec<Mode> = (-(l as i64)..=l as i64).map(|m| sphere_mode(l, m)).collect();
            let mut vx = vec![0.0; modes.len()];
            let mut vy = vec![0.0; modes.len()];
            for _ in 0..100 {
                let x = s.uniform_sample(&mut rng);
                let y = s.uniform_sample(&mut rng);
                eval_modes(&s, &modes, &x, &mut vx, None).unwrap();
                eval_modes(&s, &modes, &y, &mut vy, None).unwrap();
                let sum: f64 = vx.iter().zip(&vy).map(|(a, b)| a * b).sum();
                let cos = s.geodesic_distance(&x, &y).unwrap().cos();
                let want = (2 * l + 1) as f64 / (4.0 * PI) * legendre_p(l, cos).unwrap();
                assert!((sum - want).abs() < 1e-10, "l={l}");
            }
        }
    }

    #[test]
    fn gradient_energy_equals_eigenvalue() {
        let s = ManifoldModel::sphere2();
        let rule = quadrature_rule(&s, &[32, 64]).unwrap();
        let modes = modes_in_interval(&s, 0.0, 11.0);
        let energy = gradient_energy(&s, &modes, &rule).unwrap();
        for (mode, e) in modes.iter().zip(&energy) {
            assert!((e / mode.mu_sq - 1.0).abs() < 1e-6, "{:?}: {e}", mode.label);
        }
        let t = ManifoldModel::flat_torus(&[2.0, 3.0]).unwrap();
        let rule = quadrature_rule(&t, &[48, 64]).unwrap();
        let modes = modes_in_interval(&t, 0.0, 12.0);
        let energy = gradient_energy(&t, &modes, &rule).unwrap();
        for (mode, e) in modes.iter().zip(&energy) {
            assert!((e / mode.mu_sq - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn torus_modes_are_periodic() {
        let t = ManifoldModel::flat_torus(&[2.0, 3.0]).unwrap();
        let band = enumerate_band(&t, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let c = [rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 3.0];
            let x = t.point(&c).unwrap();
            let y = t.point(&[c[0] + 2.0, c[1] - 3.0]).unwrap();
            for mode in &band.modes {
                let a = eval_mode(&t, mode, &x).unwrap();
                let b = eval_mode(&t, mode, &y).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_mean_vanishes() {
        let s = ManifoldModel::sphere2();
        let modes = modes_in_interval(&s, 0.0, 6.0);
        let mut coarse = 0.0f64;
        for (i, n) in [500usize, 20_000].into_iter().enumerate() {
            let grid = s.quasi_uniform_grid(n);
            let mut values = vec![0.0; modes.len()];
            let mut sums = vec![0.0; modes.len()];
            for x in &grid {
                eval_modes(&s, &modes, x, &mut values, None).unwrap();
                for (a, v) in sums.iter_mut().zip(&values) {
                    *a += v;
                }
            }
            let worst = sums.iter().map(|a| (a / n as f64).abs()).fold(0.0, f64::max);
            if i == 0 {
                coarse = worst;
            } else {
                assert!(worst < coarse && worst < 1e-3, "{worst} vs {coarse}");
            }
        }
    }
}
