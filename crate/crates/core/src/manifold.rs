//! Geometry providers: the round unit sphere S² and flat rectangular tori
//! `Tⁿ = ℝⁿ / (L₁ℤ × … × L_nℤ)` for `n ∈ {1, 2, 3}`.
//!
//! Sphere points are stored as unit 3-vectors. Tangent quantities on the
//! sphere are expressed in a per-point orthonormal frame built by
//! [`ManifoldModel::tangent_frame`]; on tori the frame is the coordinate
//! basis.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    Sphere2,
    FlatTorus,
}

/// Serializable model descriptor, as read from experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub kind: ManifoldKind,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub side_lengths: Vec<f64>,
}

impl ManifoldSpec {
    pub fn build(&self) -> Result<ManifoldModel> {
        match self.kind {
            ManifoldKind::Sphere2 => {
                if let Some(d) = self.dim {
                    if d != 2 {
                        return domain(format!("sphere2 has dimension 2, config says {d}"));
                    }
                }
                Ok(ManifoldModel::sphere2())
            }
            ManifoldKind::FlatTorus => {
                let lengths = if self.side_lengths.is_empty() {
                    let d = self.dim.unwrap_or(2);
                    vec![2.0 * PI; d]
                } else {
                    self.side_lengths.clone()
                };
                if let Some(d) = self.dim {
                    if d != lengths.len() {
                        return domain(format!(
                            "torus dim {d} does not match {} side lengths",
                            lengths.len()
                        ));
                    }
                }
                ManifoldModel::flat_torus(&lengths)
            }
        }
    }
}

/// Unit-ball volume `ω_n`, `α_n = ω_n / (2π)ⁿ` and unit-sphere area `s_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylConstants {
    pub omega_n: f64,
    pub alpha_n: f64,
    pub sphere_area: f64,
}

impl WeylConstants {
    pub fn for_dim(n: usize) -> Self {
        let (omega_n, sphere_area) = match n {
            1 => (2.0, 2.0),
            2 => (PI, 2.0 * PI),
            3 => (4.0 * PI / 3.0, 4.0 * PI),
            _ => panic!("Weyl constants are tabulated for n = 1..=3"),
        };
        Self {
            omega_n,
            alpha_n: omega_n / (2.0 * PI).powi(n as i32),
            sphere_area,
        }
    }
}

/// A point of a [`ManifoldModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    /// Unit vector in ℝ³.
    Sphere(Vec3),
    /// Coordinates reduced into `[0, L_i)`; entries past `dim` are zero.
    Torus { coords: [f64; 3], dim: usize },
}

impl Point {
    pub fn coords(&self) -> &[f64] {
        match self {
            Point::Sphere(v) => v,
            Point::Torus { coords, dim } => &coords[..*dim],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifoldModel {
    pub kind: ManifoldKind,
    pub dim: usize,
    pub side_lengths: Vec<f64>,
    pub volume: f64,
    pub injectivity_radius: f64,
    pub curvature_sup: f64,
}

impl ManifoldModel {
    pub fn sphere2() -> Self {
        Self {
            kind: ManifoldKind::Sphere2,
            dim: 2,
            side_lengths: Vec::new(),
            volume: 4.0 * PI,
            injectivity_radius: PI,
            curvature_sup: 1.0,
        }
    }

    pub fn flat_torus(side_lengths: &[f64]) -> Result<Self> {
        if side_lengths.is_empty() || side_lengths.len() > 3 {
            return domain(format!(
                "flat tori are supported in dimensions 1..=3, got {}",
                side_lengths.len()
            ));
        }
        if side_lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return domain("torus side lengths must be positive and finite");
        }
        let min = side_lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Self {
            kind: ManifoldKind::FlatTorus,
            dim: side_lengths.len(),
            side_lengths: side_lengths.to_vec(),
            volume: side_lengths.iter().product(),
            injectivity_radius: min / 2.0,
            curvature_sup: 0.0,
        })
    }

    pub fn is_sphere(&self) -> bool {
        self.kind == ManifoldKind::Sphere2
    }

    pub fn weyl_constants(&self) -> WeylConstants {
        WeylConstants::for_dim(self.dim)
    }

    /// Largest possible geodesic distance: π on S², half the diagonal on a torus.
    pub fn diameter(&self) -> f64 {
        match self.kind {
            ManifoldKind::Sphere2 => PI,
            ManifoldKind::FlatTorus => {
                self.side_lengths.iter().map(|l| 0.25 * l * l).sum::<f64>().sqrt()
            }
        }
    }

    /// Builds a point from raw coordinates: sphere input is normalized,
    /// torus input is reduced modulo the periods.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        match self.kind {
            ManifoldKind::Sphere2 => {
                if coords.len() != 3 {
                    return domain("sphere points need 3 coordinates");
                }
                let v = [coords[0], coords[1], coords[2]];
                let n = norm(&v);
                if !(n > 0.0) || !n.is_finite() {
                    return domain("sphere point must be a nonzero finite vector");
                }
                Ok(Point::Sphere(scale(&v, 1.0 / n)))
            }
            ManifoldKind::FlatTorus => {
                if coords.len() != self.dim {
                    return domain(format!(
                        "torus points need {} coordinates, got {}",
                        self.dim,
                        coords.len()
                    ));
                }
                if coords.iter().any(|c| !c.is_finite()) {
                    return domain("torus coordinates must be finite");
                }
                let mut c = [0.0; 3];
                for (i, x) in coords.iter().enumerate() {
                    c[i] = reduce(*x, self.side_lengths[i]);
                }
                Ok(Point::Torus { coords: c, dim: self.dim })
            }
        }
    }

    /// Sphere point from polar angle `theta` and azimuth `phi`.
    pub fn sphere_point(theta: f64, phi: f64) -> Point {
        let s = theta.sin();
        Point::Sphere([s * phi.cos(), s * phi.sin(), theta.cos()])
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        match (self.kind, x) {
            (ManifoldKind::Sphere2, Point::Sphere(_)) => Ok(()),
            (ManifoldKind::FlatTorus, Point::Torus { dim, .. }) if *dim == self.dim => Ok(()),
            _ => Err(Error::ModelMismatch(format!(
                "point {x:?} does not belong to a {:?} of dimension {}",
                self.kind, self.dim
            ))),
        }
    }

    pub fn geodesic_distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.geodesic_distance_unchecked(x, y))
    }

    #[inline]
    pub(crate) fn geodesic_distance_unchecked(&self, x: &Point, y: &Point) -> f64 {
        match (x, y) {
            (Point::Sphere(a), Point::Sphere(b)) => sphere_angle(a, b),
            (Point::Torus { coords: a, .. }, Point::Torus { coords: b, .. }) => {
                let mut sum = 0.0;
                for i in 0..self.dim {
                    let d = wrapped_abs(b[i] - a[i], self.side_lengths[i]);
                    sum += d * d;
                }
                sum.sqrt()
            }
            _ => f64::NAN,
        }
    }

    /// Draws a point from the normalized Riemannian volume measure.
    pub fn uniform_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self.kind {
            ManifoldKind::Sphere2 => loop {
                let v: Vec3 = [
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                ];
                let n = norm(&v);
                if n > 1e-12 {
                    break Point::Sphere(scale(&v, 1.0 / n));
                }
            },
            ManifoldKind::FlatTorus => {
                let mut c = [0.0; 3];
                for i in 0..self.dim {
                    c[i] = reduce(rng.gen::<f64>() * self.side_lengths[i], self.side_lengths[i]);
                }
                Point::Torus { coords: c, dim: self.dim }
            }
        }
    }

    /// Quasi-uniform point set: a Fibonacci spiral of exactly `count_hint`
    /// points on S², a product grid with per-axis counts proportional to the
    /// side lengths (total ≥ `count_hint`) on a torus.
    pub fn quasi_uniform_grid(&self, count_hint: usize) -> Vec<Point> {
        let count = count_hint.max(1);
        match self.kind {
            ManifoldKind::Sphere2 => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..count)
                    .map(|i| {
                        let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        let phi = golden * i as f64;
                        Point::Sphere([r * phi.cos(), r * phi.sin(), z])
                    })
                    .collect()
            }
            ManifoldKind::FlatTorus => {
                let spacing = (self.volume / count as f64).powf(1.0 / self.dim as f64);
                let counts: Vec<usize> = self
                    .side_lengths
                    .iter()
                    .map(|l| ((l / spacing) - 1e-9).ceil().max(1.0) as usize)
                    .collect();
                self.product_grid(&counts)
            }
        }
    }

    /// Torus product grid with the given number of nodes per axis, last axis
    /// varying fastest.
    pub fn product_grid(&self, counts: &[usize]) -> Vec<Point> {
        assert_eq!(self.kind, ManifoldKind::FlatTorus);
        assert_eq!(counts.len(), self.dim);
        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut c = [0.0; 3];
            for axis in (0..self.dim).rev() {
                let idx = rem % counts[axis];
                rem /= counts[axis];
                c[axis] = self.side_lengths[axis] * idx as f64 / counts[axis] as f64;
            }
            out.push(Point::Torus { coords: c, dim: self.dim });
        }
        out
    }

    /// Metric tensor of `g` at `x` in the chart used for gradients.
    /// Both families use orthonormal frames, so this is the identity.
    pub fn chart_metric(&self, x: &Point) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        Ok(DMatrix::identity(self.dim, self.dim))
    }

    /// Orthonormal tangent frame at `x`, as `dim` ambient vectors.
    ///
    /// On the sphere the first axis is the projection of a fixed helper axis
    /// (ẑ, or x̂ close to the poles), the second completes a right-handed
    /// frame with the outward normal.
    pub fn tangent_frame(&self, x: &Point) -> [Vec3; 3] {
        match x {
            Point::Sphere(p) => {
                let helper = if p[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
                let e1 = normalize(&sub(&helper, &scale(p, dot(&helper, p))));
                let e2 = cross(p, &e1);
                [e1, e2, [0.0; 3]]
            }
            Point::Torus { .. } => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Chart around `x`: the sphere retraction `normalize(x + Σ u_a e_a)`,
    /// translation on the torus. Its differential at `u = 0` is the frame.
    pub fn chart_point(&self, x: &Point, u: &[f64]) -> Point {
        match x {
            Point::Sphere(p) => {
                let frame = self.tangent_frame(x);
                let mut v = *p;
                for a in 0..2 {
                    v = add(&v, &scale(&frame[a], u[a]));
                }
                Point::Sphere(normalize(&v))
            }
            Point::Torus { coords, dim } => {
                let mut c = *coords;
                for a in 0..*dim {
                    c[a] = reduce(c[a] + u[a], self.side_lengths[a]);
                }
                Point::Torus { coords: c, dim: *dim }
            }
        }
    }

    /// Exponential map: follow the geodesic from `x` with initial velocity
    /// `v` (frame coordinates) for unit time.
    pub fn exp_map(&self, x: &Point, v: &[f64]) -> Point {
        match x {
            Point::Sphere(p) => {
                let frame = self.tangent_frame(x);
                let w = add(&scale(&frame[0], v[0]), &scale(&frame[1], v[1]));
                let len = norm(&w);
                if len == 0.0 {
                    return *x;
                }
                let out = add(&scale(p, len.cos()), &scale(&w, len.sin() / len));
                Point::Sphere(normalize(&out))
            }
            Point::Torus { .. } => self.chart_point(x, v),
        }
    }

    /// Inverse of [`exp_map`](Self::exp_map) along the minimizing geodesic:
    /// frame coordinates of the initial velocity reaching `y` at unit time.
    pub fn log_map(&self, x: &Point, y: &Point) -> Vec<f64> {
        match (x, y) {
            (Point::Sphere(p), Point::Sphere(q)) => {
                let frame = self.tangent_frame(x);
                let tangent = sub(q, &scale(p, dot(p, q)));
                let tn = norm(&tangent);
                let angle = sphere_angle(p, q);
                if tn == 0.0 {
                    return vec![0.0, 0.0];
                }
                let dir = scale(&tangent, angle / tn);
                vec![dot(&dir, &frame[0]), dot(&dir, &frame[1])]
            }
            (Point::Torus { coords: a, .. }, Point::Torus { coords: b, .. }) => (0..self.dim)
                .map(|i| wrapped_delta(b[i] - a[i], self.side_lengths[i]))
                .collect(),
            _ => vec![f64::NAN; self.dim],
        }
    }

    /// `segments + 1` points along the minimizing geodesic from `x` to `y`.
    pub fn geodesic_polyline(&self, x: &Point, y: &Point, segments: usize) -> Vec<Point> {
        let v = self.log_map(x, y);
        (0..=segments)
            .map(|i| {
                let t = i as f64 / segments as f64;
                let vt: Vec<f64> = v.iter().map(|c| c * t).collect();
                self.exp_map(x, &vt)
            })
            .collect()
    }
}

#[inline]
pub(crate) fn reduce(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Minimal-image difference in `(-L/2, L/2]`.
#[inline]
pub(crate) fn wrapped_delta(d: f64, period: f64) -> f64 {
    let r = d.rem_euclid(period);
    if r > 0.5 * period {
        r - period
    } else {
        r
    }
}

/// Length of the minimal image, symmetric in the sign of `d`.
#[inline]
pub(crate) fn wrapped_abs(d: f64, period: f64) -> f64 {
    let r = d.abs() % period;
    r.min(period - r)
}

#[inline]
pub(crate) fn sphere_angle(a: &Vec3, b: &Vec3) -> f64 {
    norm(&cross(a, b)).atan2(dot(a, b))
}

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn normalize(a: &Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}
