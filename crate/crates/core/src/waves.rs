//! Gaussian random waves `φ_λ = Σ_j a_j φ_j` with `a_j ~ N(0, k_λ^{-2})`,
//! grid-based sup-norm estimation and the sup-norm bound.
//!
//! Coefficients for sample `i` under seed `s` are the leading draws of the
//! ChaCha8 stream `i` keyed by `s`, so any sample can be regenerated on its
//! own and parallel sampling is order independent.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::basis::eval_modes;
use crate::error::{domain, Error, Result};
use crate::manifold::{ManifoldKind, ManifoldModel, Point};
use crate::specfun::DegreeTable;
use crate::spectrum::{enumerate_band, torus_frequency, Band, Flavor, ModeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedInfo {
    pub seed: u64,
    pub sample_index: u64,
}

#[derive(Debug, Clone)]
pub struct RandomWave {
    pub band: Band,
    pub coefficients: Vec<f64>,
    pub seed_info: SeedInfo,
}

/// Draws the coefficients of sample `sample_index` under `seed`.
pub fn sample_wave(band: &Band, seed: u64, sample_index: u64) -> Result<RandomWave> {
    let k = band.k()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    let coefficients = (0..band.m_lambda)
        .map(|_| rng.sample::<f64, _>(StandardNormal) / k)
        .collect();
    Ok(RandomWave {
        band: band.clone(),
        coefficients,
        seed_info: SeedInfo { seed, sample_index },
    })
}

/// `φ_λ(x) = Σ_j a_j φ_j(x)`.
pub fn eval_wave(wave: &RandomWave, x: &Point) -> Result<f64> {
    let mut v = vec![0.0; wave.band.m_lambda];
    eval_modes(&wave.band.model, &wave.band.modes, x, &mut v, None)?;
    Ok(v.iter().zip(&wave.coefficients).map(|(a, b)| a * b).sum())
}

/// Extreme values of one wave: grid values and their refined counterparts.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaveExtrema {
    pub max: f64,
    pub min: f64,
    pub grid_max: f64,
    pub grid_min: f64,
    pub grid_points: usize,
}

impl WaveExtrema {
    pub fn sup_norm(&self) -> f64 {
        self.max.max(-self.min)
    }

    pub fn grid_sup_norm(&self) -> f64 {
        self.grid_max.max(-self.grid_min)
    }
}

/// Evaluates band functions on a fixed grid whose spacing is at most
/// `(2π/λ̄)/density`.
///
/// On S² the grid is equiangular, `θ_i = iπ/n_θ` for `i = 0..=n_θ` and
/// `φ_j = 2πj/n_φ` with `n_φ = 2n_θ`; each latitude row is one inverse FFT.
/// On a torus it is the product grid with `density · ⌈L_a λ̄/2π⌉` nodes per
/// axis. Doubling an integer density nests the grids.
const MAX_REFINE_STARTS: usize = 24;

pub struct GridEvaluator {
    band: Band,
    grid: GridKind,
}

enum GridKind {
    Sphere {
        n_theta: usize,
        n_phi: usize,
        /// Per row, per mode: `(bin, real weight, imaginary weight)`.
        rows: Vec<Vec<(usize, f64, f64)>>,
        fft: Arc<dyn Fft<f64>>,
    },
    Torus {
        counts: Vec<usize>,
        /// Per axis, per lattice pair, `e^{i ω_a x_j}` for each node `j`.
        phases: Vec<Vec<Vec<Complex<f64>>>>,
        /// Per lattice vector, the mode indices of its cos and sin members.
        pairs: Vec<(Option<usize>, Option<usize>)>,
    },
}

impl GridEvaluator {
    pub fn new(band: &Band, grid_density: usize) -> Result<Self> {
        if grid_density < 4 {
            return domain(format!("grid density must be >= 4, got {grid_density}"));
        }
        if band.is_empty() {
            return Err(Error::EmptyBand(band.lambda));
        }
        let mean = band.mean_mu();
        let model = &band.model;
        let grid = match model.kind {
            ManifoldKind::Sphere2 => {
                let n_theta = grid_density * (0.5 * mean).ceil().max(1.0) as usize;
                let n_phi = 2 * n_theta;
                let rows = (0..=n_theta)
                    .map(|i| {
                        let theta = i as f64 * PI / n_theta as f64;
                        let (s, t) = theta.sin_cos();
                        let mut table: Option<DegreeTable> = None;
                        band.modes
                            .iter()
                            .map(|mode| {
                                let ModeLabel::Sphere { l, m } = mode.label else { unreachable!() };
                                if table.as_ref().map(|tb| tb.l) != Some(l) {
                                    table = Some(DegreeTable::new(l, t, s.abs()));
                                }
                                let p = table.as_ref().unwrap().p[m.unsigned_abs() as usize];
                                match m {
                                    0 => (0, p, 0.0),
                                    m if m > 0 => (m as usize, SQRT_2 * p, 0.0),
                                    m => (m.unsigned_abs() as usize, 0.0, -SQRT_2 * p),
                                }
                            })
                            .collect()
                    })
                    .collect();
                let fft = FftPlanner::new().plan_fft_inverse(n_phi);
                GridKind::Sphere { n_theta, n_phi, rows, fft }
            }
            ManifoldKind::FlatTorus => {
                let counts: Vec<usize> = model
                    .side_lengths
                    .iter()
                    .map(|l| grid_density * (l * mean / (2.0 * PI)).ceil().max(1.0) as usize)
                    .collect();
                let mut pairs: Vec<(Option<usize>, Option<usize>)> = Vec::new();
                let mut keys: Vec<[i64; 3]> = Vec::new();
                for (j, mode) in band.modes.iter().enumerate() {
                    let ModeLabel::Torus { k, flavor } = mode.label else { unreachable!() };
                    let slot = match keys.iter().position(|q| *q == k) {
                        Some(p) => p,
                        None => {
                            keys.push(k);
                            pairs.push((None, None));
                            keys.len() - 1
                        }
                    };
                    match flavor {
                        Flavor::Cos => pairs[slot].0 = Some(j),
                        Flavor::Sin => pairs[slot].1 = Some(j),
                    }
                }
                let freqs: Vec<[f64; 3]> = keys.iter().map(|k| torus_frequency(model, k)).collect();
                let phases = (0..model.dim)
                    .map(|a| {
                        freqs
                            .iter()
                            .map(|w| {
                                (0..counts[a])
                                    .map(|j| {
                                        let x = model.side_lengths[a] * j as f64 / counts[a] as f64;
                                        Complex::from_polar(1.0, w[a] * x)
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                GridKind::Torus { counts, phases, pairs }
            }
        };
        Ok(Self { band: band.clone(), grid })
    }

    pub fn grid_points(&self) -> usize {
        match &self.grid {
            GridKind::Sphere { n_theta, n_phi, .. } => (n_theta + 1) * n_phi,
            GridKind::Torus { counts, .. } => counts.iter().product(),
        }
    }

    /// Grid node by flat index (row-major).
    pub fn point(&self, idx: usize) -> Point {
        match &self.grid {
            GridKind::Sphere { n_theta, n_phi, .. } => {
                let (i, j) = (idx / n_phi, idx % n_phi);
                ManifoldModel::sphere_point(i as f64 * PI / *n_theta as f64, 2.0 * PI * j as f64 / *n_phi as f64)
            }
            GridKind::Torus { counts, .. } => {
                let model = &self.band.model;
                let mut rem = idx;
                let mut c = [0.0; 3];
                for a in (0..model.dim).rev() {
                    c[a] = model.side_lengths[a] * (rem % counts[a]) as f64 / counts[a] as f64;
                    rem /= counts[a];
                }
                Point::Torus { coords: c, dim: model.dim }
            }
        }
    }

    /// Calls `f(index, value)` for every grid node in index order.
    pub fn for_each_value(&self, coefficients: &[f64], mut f: impl FnMut(usize, f64)) {
        assert_eq!(coefficients.len(), self.band.m_lambda);
        match &self.grid {
            GridKind::Sphere { n_phi, rows, fft, .. } => {
                let mut buf = vec![Complex::new(0.0, 0.0); *n_phi];
                let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
                for (i, row) in rows.iter().enumerate() {
                    buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
                    for ((bin, re, im), a) in row.iter().zip(coefficients) {
                        buf[*bin] += Complex::new(re * a, im * a);
                    }
                    fft.process_with_scratch(&mut buf, &mut scratch);
                    for (j, v) in buf.iter().enumerate() {
                        f(i * n_phi + j, v.re);
                    }
                }
            }
            GridKind::Torus { counts, phases, pairs } => {
                let amp = (2.0 / self.band.model.volume).sqrt();
                // cos θ·a + sin θ·b = Re[(a - i b) e^{iθ}]
                let z: Vec<Complex<f64>> = pairs
                    .iter()
                    .map(|(c, s)| {
                        let pick = |j: &Option<usize>| j.map_or(0.0, |j| coefficients[j]);
                        Complex::new(amp * pick(c), -amp * pick(s))
                    })
                    .collect();
                let total: usize = counts.iter().product();
                let dim = counts.len();
                let mut digits = vec![0usize; dim];
                for idx in 0..total {
                    let mut acc = 0.0;
                    for (p, zp) in z.iter().enumerate() {
                        let mut e = *zp;
                        for a in 0..dim {
                            e *= phases[a][p][digits[a]];
                        }
                        acc += e.re;
                    }
                    f(idx, acc);
                    for a in (0..dim).rev() {
                        digits[a] += 1;
                        if digits[a] < counts[a] {
                            break;
                        }
                        digits[a] = 0;
                    }
                }
            }
        }
    }

    pub fn values(&self, coefficients: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid_points()];
        self.for_each_value(coefficients, |i, v| out[i] = v);
        out
    }

    /// Grid extremes, each polished by local quadratic refinement.
    ///
    /// At a maximum `M` of a band function the Hessian is bounded by
    /// `μ_max² M`, so a grid of spacing `h` undershoots a peak by at most
    /// `μ_max² h² M / 4`. Every well-separated grid node within that margin
    /// of the grid extreme is refined and the best result kept.
    pub fn extrema(&self, wave: &RandomWave) -> Result<WaveExtrema> {
        let values = self.values(&wave.coefficients);
        let step = self.spacing();
        let mu_max = self.band.modes.iter().map(|m| m.mu).fold(0.0, f64::max);
        let margin = 0.25 * (mu_max * step).powi(2) + 1e-3;
        let model = &self.band.model;
        let mut best = [0.0; 2];
        let mut grid = [0.0; 2];
        for (slot, sign) in [(0usize, 1.0f64), (1, -1.0)] {
            let top = values.iter().map(|v| sign * v).fold(f64::NEG_INFINITY, f64::max);
            grid[slot] = top;
            let cut = top - margin * top.abs();
            let mut cands: Vec<(f64, usize)> = values
                .iter()
                .enumerate()
                .filter(|(_, v)| sign * **v >= cut)
                .map(|(i, v)| (sign * v, i))
                .collect();
            cands.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
            let separation = PI / mu_max.max(1e-12) * 0.5;
            let mut kept: Vec<(f64, Point)> = Vec::new();
            for (v, i) in cands {
                let p = self.point(i);
                if kept.iter().all(|(_, q)| model.geodesic_distance_unchecked(&p, q) > separation) {
                    kept.push((v, p));
                    if kept.len() >= MAX_REFINE_STARTS {
                        break;
                    }
                }
            }
            let mut out = top;
            for (v, p) in kept {
                let r = refine(model, |x| eval_wave(wave, x).map(|y| sign * y), p, v, step)?;
                out = out.max(r);
            }
            best[slot] = out;
        }
        Ok(WaveExtrema {
            max: best[0],
            min: -best[1],
            grid_max: grid[0],
            grid_min: -grid[1],
            grid_points: self.grid_points(),
        })
    }

    fn spacing(&self) -> f64 {
        match &self.grid {
            GridKind::Sphere { n_theta, .. } => PI / *n_theta as f64,
            GridKind::Torus { counts, .. } => self
                .band
                .model
                .side_lengths
                .iter()
                .zip(counts)
                .map(|(l, c)| l / *c as f64)
                .fold(0.0, f64::max),
        }
    }
}

// Coordinate-wise 3-point quadratic fits in the chart around the current
// point, shrinking the step until it is negligible; only improvements are
// accepted, so the result never falls below `start_value`.
fn refine(
    model: &ManifoldModel,
    f: impl Fn(&Point) -> Result<f64>,
    start: Point,
    start_value: f64,
    spacing: f64,
) -> Result<f64> {
    let n = model.dim;
    let mut x = start;
    let mut fx = start_value;
    let mut step = 0.5 * spacing;
    let mut iterations = 0;
    while step > 1e-10 * spacing && iterations < 400 {
        iterations += 1;
        let mut improved = false;
        for a in 0..n {
            let mut u = vec![0.0; n];
            u[a] = step;
            let xp = model.chart_point(&x, &u);
            u[a] = -step;
            let xm = model.chart_point(&x, &u);
            let (fp, fm) = (f(&xp)?, f(&xm)?);
            let curv = fp - 2.0 * fx + fm;
            let mut candidates = vec![(fp, xp), (fm, xm)];
            if curv < 0.0 {
                let delta = (0.5 * step * (fm - fp) / curv).clamp(-step, step);
                u[a] = delta;
                let xv = model.chart_point(&x, &u);
                candidates.push((f(&xv)?, xv));
            }
            for (fv, xv) in candidates {
                if fv > fx {
                    fx = fv;
                    x = xv;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.25;
        }
    }
    Ok(fx)
}

/// Extremes of one wave on the grid of the given density.
pub fn wave_extrema(wave: &RandomWave, grid_density: usize) -> Result<WaveExtrema> {
    GridEvaluator::new(&wave.band, grid_density)?.extrema(wave)
}

/// `‖φ_λ‖_∞` estimated on the grid of the given density, then refined.
pub fn sup_norm(wave: &RandomWave, grid_density: usize) -> Result<f64> {
    Ok(wave_extrema(wave, grid_density)?.sup_norm())
}

#[derive(Debug, Clone, Serialize)]
pub struct SupNormEstimate {
    /// Monte Carlo mean of `‖φ_λ‖_∞`.
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub grid_points: usize,
    pub lambda: f64,
    /// Monte Carlo mean of `sup φ_λ`.
    pub sup_mean: f64,
    pub sup_std_error: f64,
    /// Mean and standard error of the paired difference `‖φ‖_∞ - 2 sup φ`.
    pub doubling_gap_mean: f64,
    pub doubling_gap_std_error: f64,
    pub sup_norms: Vec<f64>,
    pub sups: Vec<f64>,
}

/// Mean and standard error of the mean (`n - 1` variance).
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo estimate of `E‖φ_λ‖_∞` and `E[sup φ_λ]` over samples
/// `0..n_samples` under `seed`.
pub fn expected_sup(
    model: &ManifoldModel,
    lambda: f64,
    n_samples: usize,
    grid_density: usize,
    seed: u64,
) -> Result<SupNormEstimate> {
    if n_samples < 2 {
        return domain("expected_sup needs at least two samples");
    }
    let band = enumerate_band(model, lambda)?;
    let grid = GridEvaluator::new(&band, grid_density)?;
    let extrema: Vec<WaveExtrema> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| grid.extrema(&sample_wave(&band, seed, i)?))
        .collect::<Result<_>>()?;
    let sup_norms: Vec<f64> = extrema.iter().map(|e| e.sup_norm()).collect();
    let sups: Vec<f64> = extrema.iter().map(|e| e.max).collect();
    let gaps: Vec<f64> = sup_norms.iter().zip(&sups).map(|(a, s)| a - 2.0 * s).collect();
    let (mean, std_error) = mean_and_std_error(&sup_norms);
    let (sup_mean, sup_std_error) = mean_and_std_error(&sups);
    let (doubling_gap_mean, doubling_gap_std_error) = mean_and_std_error(&gaps);
    Ok(SupNormEstimate {
        mean,
        std_error,
        samples: n_samples,
        grid_points: grid.grid_points(),
        lambda,
        sup_mean,
        sup_std_error,
        doubling_gap_mean,
        doubling_gap_std_error,
        sup_norms,
        sups,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNormBound {
    /// `16 √(2n/vol) √(ln λ)`.
    pub general: f64,
    /// `16 √(n/vol) √(ln λ)`, the aperiodic variant.
    pub aperiodic: f64,
}

impl SupNormBound {
    /// The coefficients of `√(ln λ)`.
    pub fn coefficients(model: &ManifoldModel) -> (f64, f64) {
        let n = model.dim as f64;
        (16.0 * (2.0 * n / model.volume).sqrt(), 16.0 * (n / model.volume).sqrt())
    }
}

pub fn sup_norm_bound(model: &ManifoldModel, lambda: f64) -> Result<SupNormBound> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return domain(format!("the sup-norm bound needs lambda > 1, got {lambda}"));
    }
    let (g, a) = SupNormBound::coefficients(model);
    let root = lambda.ln().sqrt();
    Ok(SupNormBound { general: g * root, aperiodic: a * root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::Embedding;
    use crate::spectrum::Mode;

    fn torus2pi() -> ManifoldModel {
        ManifoldModel::flat_torus(&[2.0 * PI, 2.0 * PI]).unwrap()
    }

    #[test]
    fn sampling_is_reproducible() {
        let band = enumerate_band(&ManifoldModel::sphere2(), 9.0).unwrap();
        let a = sample_wave(&band, 42, 7).unwrap();
        let b = sample_wave(&band, 42, 7).unwrap();
        let c = sample_wave(&band, 42, 8).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_ne!(a.coefficients, c.coefficients);
        assert_eq!(a.seed_info, SeedInfo { seed: 42, sample_index: 7 });
        let empty = enumerate_band(&ManifoldModel::sphere2(), 0.0).unwrap();
        assert!(sample_wave(&empty, 1, 0).is_err());
    }

    #[test]
    fn coefficient_statistics() {
        let band = enumerate_band(&torus2pi(), 3.0).unwrap();
        let k2 = band.k_lambda.unwrap().powi(2);
        let n = 10_000;
        let waves: Vec<RandomWave> = (0..n).map(|i| sample_wave(&band, 5, i).unwrap()).collect();
        for j in 0..band.m_lambda {
            let var = waves.iter().map(|w| w.coefficients[j].powi(2)).sum::<f64>() / n as f64;
            assert!((var * k2 - 1.0).abs() < 0.05);
        }
        // Second moment m/k² and first moment of ‖a‖ = ‖φ‖₂.
        let sq: Vec<f64> = waves.iter().map(|w| w.coefficients.iter().map(|a| a * a).sum()).collect();
        let (m2, se2) = mean_and_std_error(&sq);
        assert!((m2 - band.m_lambda as f64 / k2).abs() < 3.0 * se2);
        let norms: Vec<f64> = sq.iter().map(|s| s.sqrt()).collect();
        let (m1, se1) = mean_and_std_error(&norms);
        assert!((m1 - 1.0).abs() < 3.0 * se1, "{m1} ± {se1}");
    }

    #[test]
    fn coefficients_are_gaussian() {
        let band = enumerate_band(&ManifoldModel::sphere2(), 9.0).unwrap();
        let k = band.k_lambda.unwrap();
        let draws: Vec<f64> = (0..5264u64)
            .flat_map(|i| sample_wave(&band, 11, i).unwrap().coefficients)
            .map(|a| a * k)
            .collect();
        assert!(draws.len() >= 100_000);
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let m2 = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m4 = draws.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let kurt = m4 / (m2 * m2);
        assert!((2.8..=3.2).contains(&kurt), "{kurt}");
    }

    #[test]
    fn pointwise_covariance_matches_kernel() {
        let model = ManifoldModel::sphere2();
        let e = Embedding::for_lambda(&model, 5.0).unwrap();
        let x = ManifoldModel::sphere_point(0.7, 0.2);
        let y = ManifoldModel::sphere_point(0.9, 0.5);
        let n = 10_000;
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let w = sample_wave(&e.band, 3, i).unwrap();
                (eval_wave(&w, &x).unwrap(), eval_wave(&w, &y).unwrap())
            })
            .collect();
        let k2 = e.k_lambda().powi(2);
        let var = pairs.iter().map(|p| p.0 * p.0).sum::<f64>() / n as f64;
        assert!((var / (e.band_kernel(&x, &x).unwrap() / k2) - 1.0).abs() < 0.05);
        let prods: Vec<f64> = pairs.iter().map(|p| p.0 * p.1).collect();
        let (cov, se) = mean_and_std_error(&prods);
        assert!((cov - e.band_kernel(&x, &y).unwrap() / k2).abs() < 3.0 * se);
        let zero = RandomWave { coefficients: vec![0.0; e.band.m_lambda], ..sample_wave(&e.band, 0, 0).unwrap() };
        assert_eq!(eval_wave(&zero, &x).unwrap(), 0.0);
    }

    #[test]
    fn grid_values_match_pointwise_evaluation() {
        for (model, lambda) in [
            (ManifoldModel::sphere2(), 9.0),
            (ManifoldModel::sphere2(), 14.5),
            (torus2pi(), 4.0),
            (ManifoldModel::flat_torus(&[2.0, 3.0, 1.5]).unwrap(), 6.0),
            (ManifoldModel::flat_torus(&[1.0]).unwrap(), 12.0),
        ] {
            let band = enumerate_band(&model, lambda).unwrap();
            let grid = GridEvaluator::new(&band, 4).unwrap();
            let wave = sample_wave(&band, 1, 0).unwrap();
            let values = grid.values(&wave.coefficients);
            assert_eq!(values.len(), grid.grid_points());
            for idx in (0..values.len()).step_by(97) {
                let direct = eval_wave(&wave, &grid.point(idx)).unwrap();
                assert!((values[idx] - direct).abs() < 1e-12, "{lambda} {idx}");
            }
        }
    }

    #[test]
    fn single_mode_sup_norm() {
        let model = torus2pi();
        let mut band = enumerate_band(&model, 1.0).unwrap();
        band.modes.truncate(1);
        band.m_lambda = 1;
        band.k_lambda = Some(1.0);
        let wave = RandomWave {
            band: band.clone(),
            coefficients: vec![-0.7],
            seed_info: SeedInfo { seed: 0, sample_index: 0 },
        };
        let s = sup_norm(&wave, 8).unwrap();
        assert!((s - 0.7 * (2.0 / model.volume).sqrt()).abs() < 1e-12);

        // Single sphere harmonic Y_{3,0}: maximum at the poles.
        let s2 = ManifoldModel::sphere2();
        let mode = Mode { id: 0, mu: 12f64.sqrt(), mu_sq: 12.0, label: ModeLabel::Sphere { l: 3, m: 0 } };
        let band = Band { lambda: 3.0, modes: vec![mode], m_lambda: 1, k_lambda: Some(1.0), model: s2 };
        let wave = RandomWave { band, coefficients: vec![2.0], seed_info: SeedInfo { seed: 0, sample_index: 0 } };
        assert!((sup_norm(&wave, 4).unwrap() - 2.0 * (7.0 / (4.0 * PI)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grid_sup_is_monotone_under_doubling() {
        for (model, lambda) in [(ManifoldModel::sphere2(), 12.0), (torus2pi(), 8.0)] {
            let band = enumerate_band(&model, lambda).unwrap();
            for i in 0..10 {
                let wave = sample_wave(&band, 77, i).unwrap();
                let a = wave_extrema(&wave, 4).unwrap();
                let b = wave_extrema(&wave, 8).unwrap();
                assert!(a.grid_sup_norm() <= b.grid_sup_norm());
                assert!(a.grid_sup_norm() <= a.sup_norm());
                assert!(b.sup_norm() >= a.sup_norm() - 1e-9 * a.sup_norm());
            }
        }
    }

    #[test]
    fn refined_sup_converges_in_density() {
        let model = ManifoldModel::sphere2();
        let band = enumerate_band(&model, 40.0).unwrap();
        let g10 = GridEvaluator::new(&band, 10).unwrap();
        let g20 = GridEvaluator::new(&band, 20).unwrap();
        for i in 0..20 {
            let wave = sample_wave(&band, 2024, i).unwrap();
            let a = g10.extrema(&wave).unwrap().sup_norm();
            let b = g20.extrema(&wave).unwrap().sup_norm();
            assert!((a - b).abs() <= 0.01 * b, "wave {i}: {a} vs {b}");
        }
    }

    #[test]
    fn expected_sup_is_reproducible() {
        let model = torus2pi();
        let a = expected_sup(&model, 6.0, 2, 4, 99).unwrap();
        let b = expected_sup(&model, 6.0, 2, 4, 99).unwrap();
        assert_eq!(a.sup_norms, b.sup_norms);
        assert_eq!(a.samples, 2);
        assert!(a.std_error >= 0.0);
        assert!(expected_sup(&model, 6.0, 1, 4, 99).is_err());
        assert!(expected_sup(&ManifoldModel::sphere2(), 0.0, 4, 4, 99).is_err());
    }

    #[test]
    fn sup_norm_bound_examples() {
        let b = sup_norm_bound(&ManifoldModel::sphere2(), 100.0).unwrap();
        let want = 16.0 * (4.0 / (4.0 * PI)).sqrt() * 100f64.ln().sqrt();
        assert!((b.general - want).abs() < 1e-12);
        assert!((b.general - 19.37).abs() < 0.01);
        let t = sup_norm_bound(&torus2pi(), std::f64::consts::E).unwrap();
        assert!((t.general - 16.0 / PI).abs() < 1e-12);
        assert!((t.general / t.aperiodic - SQRT_2).abs() < 1e-14);
        assert!(sup_norm_bound(&torus2pi(), 1.0).is_err());
    }
}
