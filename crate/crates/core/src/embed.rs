//! Band embeddings `Φ_λ`, projector kernels, the canonical distance `d_λ`
//! and the pullback metric `g_λ`.
//!
//! Kernel fast paths use the addition theorem on S² and translation
//! invariance on tori. Distances are computed from the kernel deficit
//! `E(x,x) - E(x,y)`, which is evaluated without cancellation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::eval_modes;
use crate::error::{domain, Error, Result};
use crate::manifold::{ManifoldKind, ManifoldModel, Point, Vec3};
use crate::specfun::{legendre_p_unchecked, log_gamma, one_minus_legendre, radial_profile};
use crate::spectrum::{enumerate_band, modes_in_interval, torus_frequency, Band, Flavor, ModeLabel};

/// `k_λ = √2 Γ((m+1)/2) / Γ(m/2)`, so that `k_λ² ≈ m - 1/2`.
pub fn k_lambda(m: usize) -> Result<f64> {
    if m < 1 {
        return domain("k_lambda needs a band dimension >= 1");
    }
    let mf = m as f64;
    Ok(2f64.sqrt() * (log_gamma(0.5 * (mf + 1.0))? - log_gamma(0.5 * mf)?).exp())
}

#[derive(Debug, Clone)]
enum FastKernel {
    /// `(l, (2l+1)/4π)` per degree.
    Sphere(Vec<(usize, f64)>),
    /// One frequency vector per lattice pair.
    Torus(Vec<[f64; 3]>),
}

impl FastKernel {
    fn new(model: &ManifoldModel, band_modes: &[crate::spectrum::Mode]) -> Self {
        match model.kind {
            ManifoldKind::Sphere2 => {
                let mut degrees: Vec<(usize, f64)> = Vec::new();
                for mode in band_modes {
                    if let ModeLabel::Sphere { l, .. } = mode.label {
                        if degrees.last().map(|d| d.0) != Some(l) {
                            degrees.push((l, (2 * l + 1) as f64 / (4.0 * PI)));
                        }
                    }
                }
                FastKernel::Sphere(degrees)
            }
            ManifoldKind::FlatTorus => FastKernel::Torus(
                band_modes
                    .iter()
                    .filter_map(|m| match m.label {
                        ModeLabel::Torus { k, flavor: Flavor::Cos } => Some(torus_frequency(model, &k)),
                        _ => None,
                    })
                    .collect(),
            ),
        }
    }

    fn kernel(&self, model: &ManifoldModel, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (FastKernel::Sphere(deg), Point::Sphere(a), Point::Sphere(b)) => {
                let t = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
                deg.iter().map(|(l, c)| c * legendre_p_unchecked(*l, t)).sum()
            }
            (FastKernel::Torus(freqs), Point::Torus { coords: a, .. }, Point::Torus { coords: b, .. }) => {
                let delta = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                2.0 / model.volume
                    * freqs
                        .iter()
                        .map(|w| (w[0] * delta[0] + w[1] * delta[1] + w[2] * delta[2]).cos())
                        .sum::<f64>()
            }
            _ => f64::NAN,
        }
    }

    /// `E(x,x) - E(x,y)`; both spaces are homogeneous so `E(x,x) = E(y,y)`.
    fn deficit(&self, model: &ManifoldModel, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (FastKernel::Sphere(deg), Point::Sphere(a), Point::Sphere(b)) => {
                let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                let s = 0.5 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                sphere_deficit(deg, s)
            }
            (FastKernel::Torus(freqs), Point::Torus { coords: a, .. }, Point::Torus { coords: b, .. }) => {
                torus_deficit(model.volume, freqs, &[b[0] - a[0], b[1] - a[1], b[2] - a[2]])
            }
            _ => f64::NAN,
        }
    }

    fn diagonal(&self, model: &ManifoldModel) -> f64 {
        match self {
            FastKernel::Sphere(deg) => deg.iter().map(|(_, c)| c).sum(),
            FastKernel::Torus(freqs) => 2.0 * freqs.len() as f64 / model.volume,
        }
    }
}

#[inline]
fn sphere_deficit(degrees: &[(usize, f64)], s: f64) -> f64 {
    degrees.iter().map(|(l, c)| c * one_minus_legendre(*l, s)).sum()
}

#[inline]
fn torus_deficit(volume: f64, freqs: &[[f64; 3]], delta: &[f64; 3]) -> f64 {
    let sum: f64 = freqs
        .iter()
        .map(|w| {
            let h = (0.5 * (w[0] * delta[0] + w[1] * delta[1] + w[2] * delta[2])).sin();
            h * h
        })
        .sum();
    4.0 * sum / volume
}

/// Pullback metric at a point, in the point's orthonormal tangent frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    pub matrix: DMatrix<f64>,
    pub frame: Vec<Vec3>,
}

impl MetricTensor {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().cloned().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzScan {
    /// Largest of the sampled maximum and the infinitesimal limit.
    pub max_ratio: f64,
    /// Largest `d_λ / (λ d_g)` over the sampled pairs.
    pub sampled_max: f64,
    /// `√(largest eigenvalue of g_λ) / λ`, the `d_g → 0` limit of the ratio.
    pub infinitesimal_limit: f64,
    /// `√(trace g_λ / n) / λ`.
    pub trace_limit: f64,
    /// Geodesic separation of the best sampled pair.
    pub argmax_separation: f64,
    pub pairs: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub measured: f64,
    pub reference: f64,
}

#[derive(Debug, Clone)]
pub struct DiameterEstimate {
    pub value: f64,
    pub x: Point,
    pub y: Point,
}

/// `Φ_λ` for one band, with its kernel fast paths.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub band: Band,
    pub model: ManifoldModel,
    k: f64,
    fast: FastKernel,
}

impl Embedding {
    pub fn new(band: Band) -> Result<Self> {
        if band.is_empty() {
            return Err(Error::EmptyBand(band.lambda));
        }
        let k = k_lambda(band.m_lambda)?;
        let model = band.model.clone();
        let fast = FastKernel::new(&model, &band.modes);
        Ok(Self { band, model, k, fast })
    }

    pub fn for_lambda(model: &ManifoldModel, lambda: f64) -> Result<Self> {
        Self::new(enumerate_band(model, lambda)?)
    }

    pub fn k_lambda(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.band.lambda
    }

    pub fn mean_mu(&self) -> f64 {
        self.band.mean_mu()
    }

    fn check(&self, x: &Point) -> Result<()> {
        self.model.check_point(x)
    }

    /// `Φ_λ(x) = (φ_1(x), …, φ_m(x)) / k_λ`.
    pub fn phi(&self, x: &Point) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.band.m_lambda];
        eval_modes(&self.model, &self.band.modes, x, &mut v, None)?;
        for c in v.iter_mut() {
            *c /= self.k;
        }
        Ok(v)
    }

    /// `E_{(λ,λ+1]}(x, y)` by the addition theorem or translation invariance.
    pub fn band_kernel(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.fast.kernel(&self.model, x, y))
    }

    /// `E_{(λ,λ+1]}(x, y)` as an explicit mode sum.
    pub fn band_kernel_naive(&self, x: &Point, y: &Point) -> Result<f64> {
        let m = self.band.m_lambda;
        let (mut vx, mut vy) = (vec![0.0; m], vec![0.0; m]);
        eval_modes(&self.model, &self.band.modes, x, &mut vx, None)?;
        eval_modes(&self.model, &self.band.modes, y, &mut vy, None)?;
        Ok(vx.iter().zip(&vy).map(|(a, b)| a * b).sum())
    }

    /// `d_λ(x,y) = √(E(x,x) + E(y,y) - 2E(x,y)) / k_λ`.
    pub fn dist_lambda(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.dist_unchecked(x, y))
    }

    /// `d_λ` without the model check; both points must belong to the model.
    #[inline]
    pub fn dist_unchecked(&self, x: &Point, y: &Point) -> f64 {
        (2.0 * self.fast.deficit(&self.model, x, y)).max(0.0).sqrt() / self.k
    }

    /// `‖Φ_λ(x) - Φ_λ(y)‖` from explicit coordinates.
    pub fn dist_lambda_coords(&self, x: &Point, y: &Point) -> Result<f64> {
        let px = self.phi(x)?;
        let py = self.phi(y)?;
        Ok(px.iter().zip(&py).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
    }

    /// `d_λ` between two points at geodesic distance `r` on S², or at
    /// displacement `r` along the first axis on a torus.
    pub fn dist_at_separation(&self, r: f64) -> f64 {
        match &self.fast {
            FastKernel::Sphere(deg) => {
                let h = (0.5 * r).sin();
                (2.0 * sphere_deficit(deg, 2.0 * h * h)).max(0.0).sqrt() / self.k
            }
            FastKernel::Torus(freqs) => {
                (2.0 * torus_deficit(self.model.volume, freqs, &[r, 0.0, 0.0])).max(0.0).sqrt() / self.k
            }
        }
    }

    /// Tabulated `d_λ` for S², interpolating `d_λ²` in `s = 1 - x·y` on
    /// `nodes + 1` uniform nodes of `[0, 2]`.
    pub fn radial_table(&self, nodes: usize) -> Result<RadialTable> {
        let FastKernel::Sphere(deg) = &self.fast else {
            return domain("radial tables exist only for the sphere");
        };
        if nodes < 4 {
            return domain("a radial table needs at least 4 nodes");
        }
        let h = 2.0 / nodes as f64;
        let k2 = self.k * self.k;
        let values = (0..=nodes)
            .map(|i| 2.0 * sphere_deficit(deg, (i as f64 * h).min(2.0)) / k2)
            .collect();
        Ok(RadialTable { inv_h: 1.0 / h, values })
    }

    /// `‖Φ_λ(x)‖ = √E(x,x) / k_λ`.
    pub fn embed_norm(&self, x: &Point) -> Result<f64> {
        Ok(self.band_kernel(x, x)?.max(0.0).sqrt() / self.k)
    }

    /// `E(x,x)` on these homogeneous models, independent of `x`.
    pub fn kernel_diagonal(&self) -> f64 {
        self.fast.diagonal(&self.model)
    }

    /// `g_λ(x) = k_λ^{-2} Σ_j ∇φ_j(x) ⊗ ∇φ_j(x)`.
    pub fn pullback_metric(&self, x: &Point) -> Result<MetricTensor> {
        let m = self.band.m_lambda;
        let n = self.model.dim;
        let mut values = vec![0.0; m];
        let mut grads = vec![[0.0; 3]; m];
        eval_modes(&self.model, &self.band.modes, x, &mut values, Some(&mut grads))?;
        let mut g = DMatrix::zeros(n, n);
        for grad in &grads {
            for a in 0..n {
                for b in a..n {
                    g[(a, b)] += grad[a] * grad[b];
                }
            }
        }
        let k2 = self.k * self.k;
        for a in 0..n {
            for b in a..n {
                g[(a, b)] /= k2;
                g[(b, a)] = g[(a, b)];
            }
        }
        Ok(self.tensor(x, g))
    }

    /// `g_λ(x)_{ab} = -k_λ^{-2} ∂_{u_a} ∂_{v_b} D(x(u), x(v))` at `u = v = 0`,
    /// with `D(x,y) = E(x,x) - E(x,y)` and a four-point central stencil.
    pub fn pullback_metric_kernel(&self, x: &Point) -> Result<MetricTensor> {
        self.check(x)?;
        let n = self.model.dim;
        let h = 1e-3 / self.mean_mu().max(1.0);
        let shifted = |a: usize, sign: f64| {
            let mut u = vec![0.0; n];
            u[a] = sign * h;
            self.model.chart_point(x, &u)
        };
        let mut g = DMatrix::zeros(n, n);
        for a in 0..n {
            let (xp, xm) = (shifted(a, 1.0), shifted(a, -1.0));
            for b in 0..n {
                let (yp, ym) = (shifted(b, 1.0), shifted(b, -1.0));
                let d = |p: &Point, q: &Point| self.fast.deficit(&self.model, p, q);
                let mixed = (d(&xp, &yp) - d(&xp, &ym) - d(&xm, &yp) + d(&xm, &ym)) / (4.0 * h * h);
                g[(a, b)] = -mixed / (self.k * self.k);
            }
        }
        let sym = 0.5 * (&g + g.transpose());
        Ok(self.tensor(x, sym))
    }

    fn tensor(&self, x: &Point, matrix: DMatrix<f64>) -> MetricTensor {
        let frame = self.model.tangent_frame(x);
        MetricTensor {
            matrix,
            frame: frame[..self.model.dim].to_vec(),
        }
    }

    /// Length in `g_λ` of the polyline through `waypoints`: each segment
    /// contributes `√(Δuᵀ g_λ(mid) Δu)` in the chart at its midpoint.
    pub fn path_length_glambda(&self, waypoints: &[Point]) -> Result<f64> {
        if waypoints.len() < 2 {
            return domain("a path needs at least two waypoints");
        }
        for p in waypoints {
            self.check(p)?;
        }
        let mut total = 0.0;
        for seg in waypoints.windows(2) {
            let v = self.model.log_map(&seg[0], &seg[1]);
            if v.iter().all(|c| *c == 0.0) {
                continue;
            }
            let half: Vec<f64> = v.iter().map(|c| 0.5 * c).collect();
            let mid = self.model.exp_map(&seg[0], &half);
            let a = self.model.log_map(&mid, &seg[0]);
            let b = self.model.log_map(&mid, &seg[1]);
            let du: Vec<f64> = b.iter().zip(&a).map(|(p, q)| p - q).collect();
            let g = self.pullback_metric(&mid)?.matrix;
            let mut q = 0.0;
            for i in 0..du.len() {
                for j in 0..du.len() {
                    q += du[i] * g[(i, j)] * du[j];
                }
            }
            total += q.max(0.0).sqrt();
        }
        Ok(total)
    }

    /// Largest `d_λ(x,y) / (λ d_g(x,y))` over `pair_count` uniform pairs and
    /// `pair_count` pairs with `d_g ≤ 10/λ`, together with the `d_g → 0` limit.
    pub fn lipschitz_scan<R: Rng + ?Sized>(&self, pair_count: usize, rng: &mut R) -> Result<LipschitzScan> {
        let lambda = self.band.lambda;
        if !(lambda > 0.0) || pair_count < 1 {
            return domain("lipschitz_scan needs lambda > 0 and at least one pair");
        }
        let mut pairs = Vec::with_capacity(2 * pair_count);
        for _ in 0..pair_count {
            pairs.push((self.model.uniform_sample(rng), self.model.uniform_sample(rng)));
        }
        let near = (10.0 / lambda).min(self.model.injectivity_radius);
        for _ in 0..pair_count {
            let x = self.model.uniform_sample(rng);
            let r = near * (1.0 - rng.gen::<f64>());
            let dir = random_direction(self.model.dim, rng);
            let v: Vec<f64> = dir.iter().map(|c| c * r).collect();
            pairs.push((x, self.model.exp_map(&x, &v)));
        }
        let (sampled_max, argmax_separation) = pairs
            .par_iter()
            .map(|(x, y)| {
                let dg = self.model.geodesic_distance_unchecked(x, y);
                if dg <= 0.0 {
                    return (0.0, 0.0);
                }
                (self.dist_unchecked(x, y) / (lambda * dg), dg)
            })
            .reduce(|| (0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
        let mut infinitesimal_limit = 0.0f64;
        let mut trace_limit = 0.0f64;
        for (x, _) in pairs.iter().take(8) {
            let g = self.pullback_metric(x)?;
            let top = g.eigenvalues().last().cloned().unwrap_or(0.0);
            infinitesimal_limit = infinitesimal_limit.max(top.max(0.0).sqrt() / lambda);
            trace_limit = trace_limit.max((g.trace() / self.model.dim as f64).sqrt() / lambda);
        }
        Ok(LipschitzScan {
            max_ratio: sampled_max.max(infinitesimal_limit),
            sampled_max,
            infinitesimal_limit,
            trace_limit,
            argmax_separation,
            pairs: pairs.len(),
        })
    }

    /// Measured `d_λ` at geodesic separations `r` against the reference
    /// `√((2/vol)(1 - Λ_n(λ̄ r)))`, `λ̄` the mean band frequency.
    pub fn distance_profile(&self, r_values: &[f64]) -> Result<Vec<ProfileRow>> {
        let inj = self.model.injectivity_radius;
        let base = match self.model.kind {
            ManifoldKind::Sphere2 => ManifoldModel::sphere_point(0.7, 0.3),
            ManifoldKind::FlatTorus => self.model.point(&vec![0.0; self.model.dim])?,
        };
        let mean = self.mean_mu();
        let n = self.model.dim;
        r_values
            .iter()
            .map(|&r| {
                if !(r >= 0.0) || r > inj {
                    return domain(format!("separation {r} outside [0, {inj}]"));
                }
                let mut v = vec![0.0; n];
                v[0] = r;
                let y = self.model.exp_map(&base, &v);
                let measured = self.dist_unchecked(&base, &y);
                let lam = radial_profile(n, mean * r)?;
                let reference = (2.0 / self.model.volume * (1.0 - lam)).max(0.0).sqrt();
                Ok(ProfileRow { r, measured, reference })
            })
            .collect()
    }

    /// Largest `d_λ` between grid pairs. On S² the radial kernel is scanned
    /// over `grid_size` separations in `[0, π]`; on a torus all pair
    /// differences of a product grid are scanned. The best node is then
    /// polished by a local search that only accepts improvements.
    pub fn diameter_estimate(&self, grid_size: usize) -> Result<DiameterEstimate> {
        if grid_size < 2 {
            return domain("diameter_estimate needs grid_size >= 2");
        }
        match self.model.kind {
            ManifoldKind::Sphere2 => {
                let step = PI / (grid_size - 1) as f64;
                let (mut best_r, mut best) = (0.0, 0.0);
                for i in 0..grid_size {
                    let r = i as f64 * step;
                    let d = self.dist_at_separation(r);
                    if d > best {
                        best = d;
                        best_r = r;
                    }
                }
                let f = |r: f64| self.dist_at_separation(r.clamp(0.0, PI));
                let r = golden_max(f, (best_r - step).max(0.0), (best_r + step).min(PI));
                if f(r) > best {
                    best_r = r;
                }
                let x = ManifoldModel::sphere_point(0.7, 0.3);
                let y = self.model.exp_map(&x, &[best_r, 0.0]);
                let value = self.dist_lambda(&x, &y)?;
                Ok(DiameterEstimate { value, x, y })
            }
            ManifoldKind::FlatTorus => {
                let origin = self.model.point(&vec![0.0; self.model.dim])?;
                let grid = self.model.quasi_uniform_grid(grid_size);
                let (idx, _) = grid
                    .par_iter()
                    .enumerate()
                    .map(|(i, y)| (i, self.dist_unchecked(&origin, y)))
                    .reduce(|| (usize::MAX, -1.0), |a, b| {
                        if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                            b
                        } else {
                            a
                        }
                    });
                let n = self.model.dim;
                let spacing = (self.model.volume / grid.len() as f64).powf(1.0 / n as f64);
                let mut y = grid[idx];
                let mut best = self.dist_unchecked(&origin, &y);
                let mut step = 0.5 * spacing;
                while step > 1e-9 * spacing {
                    let mut improved = false;
                    for a in 0..n {
                        for sign in [1.0, -1.0] {
                            let mut u = vec![0.0; n];
                            u[a] = sign * step;
                            let cand = self.model.chart_point(&y, &u);
                            let d = self.dist_unchecked(&origin, &cand);
                            if d > best {
                                best = d;
                                y = cand;
                                improved = true;
                            }
                        }
                    }
                    if !improved {
                        step *= 0.5;
                    }
                }
                let value = self.dist_lambda(&origin, &y)?;
                Ok(DiameterEstimate { value, x: origin, y })
            }
        }
    }
}

/// Piecewise-cubic interpolant of `d_λ²(s)` on S², see
/// [`Embedding::radial_table`].
#[derive(Debug, Clone)]
pub struct RadialTable {
    inv_h: f64,
    values: Vec<f64>,
}

impl RadialTable {
    /// Interpolated `d_λ²` at `s = |x - y|² / 2`.
    #[inline]
    pub fn dist_sq_at(&self, s: f64) -> f64 {
        let n = self.values.len() - 1;
        let u = (s * self.inv_h).clamp(0.0, n as f64);
        let i = (u.floor() as usize).clamp(1, n - 2);
        let t = u - i as f64;
        let (p0, p1, p2, p3) = (self.values[i - 1], self.values[i], self.values[i + 1], self.values[i + 2]);
        // Four-point Lagrange through nodes i-1..=i+2.
        let a = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let b = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let c = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let d = (t + 1.0) * t * (t - 1.0) / 6.0;
        a * p0 + b * p1 + c * p2 + d * p3
    }

    #[inline]
    pub fn dist(&self, x: &Point, y: &Point) -> f64 {
        match (x, y) {
            (Point::Sphere(a), Point::Sphere(b)) => {
                let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                let s = 0.5 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                if s == 0.0 {
                    return 0.0;
                }
                self.dist_sq_at(s).max(0.0).sqrt()
            }
            _ => f64::NAN,
        }
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

pub(crate) fn random_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.iter().map(|c| c / norm).collect();
        }
    }
}

/// `E_{(0,λ]}(x, y)`, the kernel of the projector onto all nonconstant
/// modes with `μ ≤ λ`, by the addition theorem or translation invariance.
pub fn cumulative_kernel(model: &ManifoldModel, lambda: f64, x: &Point, y: &Point) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain("cumulative_kernel needs lambda > 0");
    }
    model.check_point(x)?;
    model.check_point(y)?;
    let modes = modes_in_interval(model, 0.0, lambda);
    Ok(FastKernel::new(model, &modes).kernel(model, x, y))
}

/// `E_{(0,λ]}(x, y)` as an explicit mode sum.
pub fn cumulative_kernel_naive(model: &ManifoldModel, lambda: f64, x: &Point, y: &Point) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain("cumulative_kernel needs lambda > 0");
    }
    let modes = modes_in_interval(model, 0.0, lambda);
    let (mut vx, mut vy) = (vec![0.0; modes.len()], vec![0.0; modes.len()]);
    eval_modes(model, &modes, x, &mut vx, None)?;
    eval_modes(model, &modes, y, &mut vy, None)?;
    Ok(vx.iter().zip(&vy).map(|(a, b)| a * b).sum())
}
