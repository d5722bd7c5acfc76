//! Metric entropy: greedy ε-nets by farthest-point traversal, covering
//! curves, the Dudley entropy integral, the volume covering bound and the
//! integral `I(a) = ∫₀¹ (1 - a ln x)^{1/2} dx`.
//!
//! A single farthest-point traversal yields the greedy net for every radius
//! at once: the net at `ε` is the prefix of points inserted at a distance
//! greater than `ε`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::manifold::ManifoldModel;
use crate::specfun::{erfc, erfcx, integrate};

/// Farthest-point insertion order with the distance at which each point was
/// inserted. The first radius is `+∞`; the rest are nonincreasing.
#[derive(Debug, Clone, Serialize)]
pub struct Traversal {
    pub order: Vec<usize>,
    pub insertion_radius: Vec<f64>,
    /// Largest distance from a substrate point to its nearest center.
    pub covering_radius: f64,
}

impl Traversal {
    /// Greedy net size at radius `eps`.
    pub fn count_at(&self, eps: f64) -> usize {
        self.insertion_radius.partition_point(|r| *r > eps)
    }
}

/// Farthest-point traversal of `points` under `distance`, starting at index
/// 0 and stopping once every point lies within `stop_radius` of a center.
/// Ties go to the lowest index.
///
/// Each center owns the points nearest to it. A new center `q` can only
/// capture points of center `a` if `d(a, q) < 2 R_a`, `R_a` being the
/// largest distance within `a`'s cell, and only points `p` with
/// `d(a, q) < 2 d(p, a)`.
pub fn farthest_point_traversal<P, D>(points: &[P], distance: D, stop_radius: f64) -> Result<Traversal>
where
    P: Sync,
    D: Fn(&P, &P) -> f64 + Sync,
{
    if points.is_empty() {
        return domain("the substrate must not be empty");
    }
    let n = points.len();
    let mut dist: Vec<f64> = points.par_iter().map(|p| distance(&points[0], p)).collect();
    dist[0] = 0.0;
    let mut centers = vec![0usize];
    let mut members: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut best: Vec<(f64, usize)> = vec![cell_best(&members[0], &dist)];
    let mut order = vec![0usize];
    let mut insertion_radius = vec![f64::INFINITY];
    let mut moved = vec![false; n];

    loop {
        let (r, q) = best
            .iter()
            .cloned()
            .fold((f64::NEG_INFINITY, usize::MAX), |a, b| if better(b, a) { b } else { a });
        if !(r > stop_radius) {
            return Ok(Traversal { order, insertion_radius, covering_radius: r.max(0.0) });
        }
        order.push(q);
        insertion_radius.push(r);

        let scan = |a: usize| -> Vec<(usize, f64)> {
            let dq = distance(&points[centers[a]], &points[q]);
            if dq > PRUNE_SLACK * best[a].0 {
                return Vec::new();
            }
            let mut out = Vec::new();
            for &p in &members[a] {
                if p == q {
                    out.push((p, 0.0));
                } else if dq <= PRUNE_SLACK * dist[p] {
                    let dp = distance(&points[p], &points[q]);
                    if dp < dist[p] {
                        out.push((p, dp));
                    }
                }
            }
            out
        };
        let captured: Vec<(usize, Vec<(usize, f64)>)> = if centers.len() >= 256 {
            (0..centers.len()).into_par_iter().map(|a| (a, scan(a))).filter(|(_, m)| !m.is_empty()).collect()
        } else {
            (0..centers.len()).map(|a| (a, scan(a))).filter(|(_, m)| !m.is_empty()).collect()
        };

        let mut cell = Vec::new();
        for (a, moves) in captured {
            for (p, dp) in moves {
                dist[p] = dp;
                moved[p] = true;
                cell.push(p);
            }
            members[a].retain(|p| !moved[*p]);
            best[a] = cell_best(&members[a], &dist);
        }
        for p in &cell {
            moved[*p] = false;
        }
        cell.sort_unstable();
        best.push(cell_best(&cell, &dist));
        members.push(cell);
        centers.push(q);
    }
}

// Slightly above 2 so that rounding in the triangle inequality never skips
// a point that direct evaluation would reassign.
const PRUNE_SLACK: f64 = 2.0 * (1.0 + 1e-9);

#[inline]
fn better(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn cell_best(cell: &[usize], dist: &[f64]) -> (f64, usize) {
    cell.iter()
        .map(|&p| (dist[p], p))
        .fold((0.0, usize::MAX), |a, b| if better(b, a) { b } else { a })
}

/// A greedy ε-net of a substrate.
#[derive(Debug, Clone, Serialize)]
pub struct Net {
    /// Substrate indices of the centers, in insertion order.
    pub centers: Vec<usize>,
    pub radius: f64,
    /// Largest distance from a substrate point to its nearest center.
    pub covered_check: f64,
}

/// Farthest-point ε-net: centers are added while some substrate point is
/// farther than `epsilon` from all of them.
pub fn greedy_net<P, D>(points: &[P], distance: D, epsilon: f64) -> Result<Net>
where
    P: Sync,
    D: Fn(&P, &P) -> f64 + Sync,
{
    if !(epsilon > 0.0) {
        return domain(format!("net radius must be positive, got {epsilon}"));
    }
    let t = farthest_point_traversal(points, distance, epsilon)?;
    Ok(Net { centers: t.order, radius: epsilon, covered_check: t.covering_radius })
}

/// Net sizes `N̂(ε)` over a descending list of radii.
#[derive(Debug, Clone, Serialize)]
pub struct CoveringCurve {
    /// `(ε, N̂(ε))`, ε descending.
    pub entries: Vec<(f64, f64)>,
    pub distance_id: String,
    /// Largest eccentricity among the first traversal centers.
    pub diameter: f64,
    /// Exponent used for the small-ε extrapolation.
    pub dim: usize,
}

/// Number of early traversal centers whose eccentricity is measured.
const DIAMETER_PROBES: usize = 32;

pub fn covering_curve<P, D>(
    points: &[P],
    distance: D,
    epsilon_list: &[f64],
    distance_id: &str,
    dim: usize,
) -> Result<CoveringCurve>
where
    P: Sync,
    D: Fn(&P, &P) -> f64 + Sync,
{
    if epsilon_list.is_empty() {
        return domain("the radius list must not be empty");
    }
    if epsilon_list.iter().any(|e| !(*e > 0.0)) || epsilon_list.windows(2).any(|w| w[1] > w[0]) {
        return domain("radii must be positive and sorted descending");
    }
    let eps_min = *epsilon_list.last().unwrap();
    let t = farthest_point_traversal(points, &distance, eps_min)?;
    let diameter = t
        .order
        .iter()
        .take(DIAMETER_PROBES)
        .map(|&c| points.par_iter().map(|p| distance(&points[c], p)).reduce(|| 0.0, f64::max))
        .fold(0.0, f64::max);
    let entries = epsilon_list.iter().map(|&e| (e, t.count_at(e) as f64)).collect();
    Ok(CoveringCurve { entries, distance_id: distance_id.to_string(), diameter, dim })
}

/// Least-squares slope of `ln N̂` against `ln(1/ε)` over entries with
/// `lo ≤ ε ≤ hi`.
pub fn log_log_slope(curve: &CoveringCurve, lo: f64, hi: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .entries
        .iter()
        .filter(|(e, _)| *e >= lo && *e <= hi)
        .map(|(e, n)| (-e.ln(), n.ln()))
        .collect();
    if pts.len() < 2 {
        return domain("slope fit needs at least two radii in range");
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Serialize)]
pub struct DudleyReport {
    /// `8√2 (quadrature + tail)`.
    pub bound: f64,
    /// Trapezoid part over the tabulated radii in `[ε_min, D]`.
    pub quadrature: f64,
    /// Closed-form integral below the smallest radius.
    pub tail: f64,
    /// `D = diameter / 2`.
    pub half_diameter: f64,
    pub eps_min: f64,
    pub count_at_eps_min: f64,
}

/// `8√2 ∫₀^D √(ln N̂(ε)) dε` with `D = diameter/2`.
///
/// Tabulated radii in `[ε_min, D]` are combined by the trapezoid rule, with
/// `N̂(D)` taken from the nearest tabulated radius below `D`. Below `ε_min`
/// the curve is extended by `N̂(ε) = N̂(ε_min)(ε_min/ε)^n`, whose integral is
/// `√n c^{1/n} Γ(3/2, ln N̂(ε_min)/n)` with `c = N̂(ε_min) ε_min^n`.
pub fn dudley_report(curve: &CoveringCurve) -> Result<DudleyReport> {
    if curve.entries.is_empty() {
        return domain("empty covering curve");
    }
    let d = 0.5 * curve.diameter;
    let f = |n: f64| n.max(1.0).ln().sqrt();
    let mut pts: Vec<(f64, f64)> = curve.entries.iter().filter(|(e, _)| *e <= d).cloned().collect();
    pts.reverse();
    let (eps_min, n_min) = match pts.first() {
        Some(p) => *p,
        None => (d, curve.entries.last().unwrap().1),
    };
    if curve.entries.iter().all(|(_, n)| *n <= 1.0) || d <= 0.0 {
        return Ok(DudleyReport {
            bound: 0.0,
            quadrature: 0.0,
            tail: 0.0,
            half_diameter: d,
            eps_min,
            count_at_eps_min: n_min,
        });
    }
    if let Some(last) = pts.last().cloned() {
        if last.0 < d {
            pts.push((d, last.1));
        }
    }
    let quadrature: f64 = pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (f(w[0].1) + f(w[1].1))).sum();
    let tail = if n_min > 1.0 && eps_min > 0.0 {
        let nd = curve.dim.max(1) as f64;
        let x = n_min.ln() / nd;
        nd.sqrt() * n_min.powf(1.0 / nd) * eps_min * upper_gamma_three_halves(x)
    } else {
        0.0
    };
    Ok(DudleyReport {
        bound: 8.0 * 2f64.sqrt() * (quadrature + tail),
        quadrature,
        tail,
        half_diameter: d,
        eps_min,
        count_at_eps_min: n_min,
    })
}

pub fn dudley_bound(curve: &CoveringCurve) -> Result<f64> {
    Ok(dudley_report(curve)?.bound)
}

/// `Γ(3/2, x) = √x e^{-x} + (√π/2) erfc(√x)`.
pub fn upper_gamma_three_halves(x: f64) -> f64 {
    let r = x.max(0.0).sqrt();
    r * (-x).exp() + 0.5 * PI.sqrt() * erfc(r)
}

/// `vol (2n/s_{n-1}) π^{n-1} r^{-n}`, valid for
/// `0 < r < min(inj, π/√K, 2π)` with `K` the curvature bound.
pub fn lp_covering_bound(model: &ManifoldModel, r: f64) -> Result<f64> {
    let curv = if model.curvature_sup > 0.0 { PI / model.curvature_sup.sqrt() } else { f64::INFINITY };
    let limit = model.injectivity_radius.min(curv).min(2.0 * PI);
    if !(r > 0.0 && r < limit) {
        return domain(format!("radius {r} outside (0, {limit})"));
    }
    let n = model.dim as i32;
    let w = model.weyl_constants();
    Ok(model.volume * (2.0 * n as f64 / w.sphere_area) * PI.powi(n - 1) * r.powi(-n))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClaimIntegral {
    pub a: f64,
    /// `∫₀^∞ (1 + a u)^{1/2} e^{-u} du` by adaptive quadrature.
    pub quadrature: f64,
    /// `1 + (√(πa)/2) erfcx(1/√a)`.
    pub closed_form: f64,
}

impl ClaimIntegral {
    pub fn value(&self) -> f64 {
        self.closed_form
    }
}

/// `I(a) = ∫₀¹ (1 - a ln x)^{1/2} dx` by two independent routes, which
/// must agree to `1e-8`.
pub fn claim_integral(a: f64) -> Result<ClaimIntegral> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("claim integral needs a > 0, got {a}"));
    }
    let g = |u: f64| (1.0 + a * u).sqrt() * (-u).exp();
    let quadrature = [0.0, 2.0, 8.0, 20.0, 45.0, 80.0]
        .windows(2)
        .map(|w| integrate(g, w[0], w[1], 1e-14))
        .sum::<f64>();
    let closed_form = 1.0 + 0.5 * (PI * a).sqrt() * erfcx(1.0 / a.sqrt());
    if (quadrature - closed_form).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "claim integral at a = {a}: quadrature {quadrature} vs closed form {closed_form}"
        )));
    }
    Ok(ClaimIntegral { a, quadrature, closed_form })
}

/// `∫_x^∞ e^{-y²/2} dy = √(π/2) erfc(x/√2)`.
pub fn gaussian_tail(x: f64) -> f64 {
    (0.5 * PI).sqrt() * erfc(x / 2f64.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Point;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sphere_dg(a: &Point, b: &Point) -> f64 {
        ManifoldModel::sphere2().geodesic_distance(a, b).unwrap()
    }

    fn brute_net(points: &[Point], d: impl Fn(&Point, &Point) -> f64, eps: f64) -> Vec<usize> {
        let mut centers = vec![0usize];
        let mut nearest: Vec<f64> = points.iter().map(|p| d(&points[0], p)).collect();
        loop {
            let mut best = (f64::NEG_INFINITY, 0usize);
            for (i, nd) in nearest.iter().enumerate() {
                if *nd > best.0 {
                    best = (*nd, i);
                }
            }
            if best.0 <= eps {
                return centers;
            }
            centers.push(best.1);
            for (i, p) in points.iter().enumerate() {
                nearest[i] = nearest[i].min(d(&points[best.1], p));
            }
        }
    }

    #[test]
    fn traversal_matches_brute_force() {
        let s = ManifoldModel::sphere2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<Point> = (0..1500).map(|_| s.uniform_sample(&mut rng)).collect();
        for eps in [1.5, 0.6, 0.3, 0.12] {
            let net = greedy_net(&pts, sphere_dg, eps).unwrap();
            assert_eq!(net.centers, brute_net(&pts, sphere_dg, eps));
        }
        let grid = s.quasi_uniform_grid(800);
        let t = ManifoldModel::flat_torus(&[1.0, 1.0]).unwrap();
        let tgrid = t.quasi_uniform_grid(400);
        let td = |a: &Point, b: &Point| t.geodesic_distance(a, b).unwrap();
        for eps in [0.4, 0.2, 0.07] {
            assert_eq!(greedy_net(&grid, sphere_dg, eps).unwrap().centers, brute_net(&grid, sphere_dg, eps));
            assert_eq!(greedy_net(&tgrid, td, eps).unwrap().centers, brute_net(&tgrid, td, eps));
        }
    }

    #[test]
    fn net_validity() {
        let s = ManifoldModel::sphere2();
        let pts = s.quasi_uniform_grid(3000);
        for eps in [0.9, 0.25, 0.1] {
            let net = greedy_net(&pts, sphere_dg, eps).unwrap();
            assert!(net.covered_check <= eps);
            for p in &pts {
                let nd = net.centers.iter().map(|&c| sphere_dg(&pts[c], p)).fold(f64::INFINITY, f64::min);
                assert!(nd <= eps);
            }
            for (i, &a) in net.centers.iter().enumerate() {
                for &b in &net.centers[..i] {
                    assert!(sphere_dg(&pts[a], &pts[b]) > eps);
                }
            }
        }
    }

    #[test]
    fn net_examples() {
        let s = ManifoldModel::sphere2();
        let pts = s.quasi_uniform_grid(500);
        assert_eq!(greedy_net(&pts, sphere_dg, PI).unwrap().centers.len(), 1);
        let net = greedy_net(&pts, sphere_dg, 0.4).unwrap();
        let sub: Vec<Point> = net.centers.iter().map(|&c| pts[c]).collect();
        let again = greedy_net(&sub, sphere_dg, 0.4).unwrap();
        assert_eq!(again.centers.len(), sub.len());
        let dense = s.quasi_uniform_grid(20_000);
        let n = greedy_net(&dense, sphere_dg, PI / 2.0).unwrap().centers.len();
        assert!((2..=4).contains(&n), "{n}");
        assert!(greedy_net(&pts, sphere_dg, 0.0).is_err());
        let empty: Vec<Point> = Vec::new();
        assert!(greedy_net(&empty, sphere_dg, 1.0).is_err());
    }

    // Smallest number of substrate points whose closed r-balls cover it.
    fn minimal_cover(points: &[Point], d: impl Fn(&Point, &Point) -> f64, r: f64) -> usize {
        let n = points.len();
        let masks: Vec<u32> = (0..n)
            .map(|c| (0..n).filter(|&p| d(&points[c], &points[p]) <= r).fold(0u32, |m, p| m | (1 << p)))
            .collect();
        let full = (1u32 << n) - 1;
        (1..=n)
            .find(|&k| {
                let mut idx: Vec<usize> = (0..k).collect();
                loop {
                    if idx.iter().fold(0u32, |m, &i| m | masks[i]) == full {
                        return true;
                    }
                    let mut i = k;
                    while i > 0 && idx[i - 1] == n - k + i - 1 {
                        i -= 1;
                    }
                    if i == 0 {
                        return false;
                    }
                    idx[i - 1] += 1;
                    for j in i..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                }
            })
            .unwrap()
    }

    #[test]
    fn packing_covering_sandwich() {
        let s = ManifoldModel::sphere2();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..20 {
            let n = 4 + trial % 9;
            let pts: Vec<Point> = (0..n).map(|_| s.uniform_sample(&mut rng)).collect();
            let eps = 0.3 + rng.gen::<f64>() * 1.5;
            let greedy = greedy_net(&pts, sphere_dg, eps).unwrap().centers.len();
            assert!(greedy <= minimal_cover(&pts, sphere_dg, eps / 2.0));
            assert!(greedy >= minimal_cover(&pts, sphere_dg, eps));
        }
    }

    #[test]
    fn curve_examples() {
        let s = ManifoldModel::sphere2();
        let single = vec![ManifoldModel::sphere_point(0.2, 0.2)];
        let c = covering_curve(&single, sphere_dg, &[1.0, 0.1, 0.01], "geodesic", 2).unwrap();
        assert!(c.entries.iter().all(|(_, n)| *n == 1.0));
        assert_eq!(dudley_bound(&c).unwrap(), 0.0);
        let pts = s.quasi_uniform_grid(4000);
        let eps: Vec<f64> = (0..30).map(|i| 3.2 * 0.85f64.powi(i)).collect();
        let c = covering_curve(&pts, sphere_dg, &eps, "geodesic", 2).unwrap();
        assert!(c.entries.windows(2).all(|w| w[1].1 >= w[0].1));
        assert!((c.diameter - PI).abs() < 0.05);
        for (e, n) in c.entries.iter().step_by(4) {
            if *e >= c.diameter {
                assert_eq!(*n, 1.0);
            }
            let direct = greedy_net(&pts, sphere_dg, *e).unwrap().centers.len() as f64;
            assert_eq!(*n, direct);
        }
        assert!(covering_curve(&pts, sphere_dg, &[0.1, 0.2], "geodesic", 2).is_err());
        assert!(covering_curve(&pts, sphere_dg, &[], "geodesic", 2).is_err());
    }

    #[test]
    fn geodesic_covering_recovers_dimension() {
        let s = ManifoldModel::sphere2();
        let pts = s.quasi_uniform_grid(50_000);
        let eps: Vec<f64> = (0..=20).map(|i| 0.5 * (0.1f64).powf(i as f64 / 20.0)).collect();
        let c = covering_curve(&pts, sphere_dg, &eps, "geodesic", 2).unwrap();
        let slope = log_log_slope(&c, 0.05, 0.5).unwrap();
        assert!((slope - 2.0).abs() <= 0.3, "{slope}");
    }

    #[test]
    fn dudley_synthetic_power_law() {
        // N(ε) = ε^{-2} on (0, 1], D = 1/2.
        let eps: Vec<f64> = (0..=400).map(|i| 0.5 * (1e-3f64 / 0.5).powf(i as f64 / 400.0)).collect();
        let curve = CoveringCurve {
            entries: eps.iter().map(|e| (*e, e.powi(-2))).collect(),
            distance_id: "synthetic".into(),
            diameter: 1.0,
            dim: 2,
        };
        let got = dudley_bound(&curve).unwrap();
        let integrand = |e: f64| (2.0 * (1.0 / e).ln()).sqrt();
        let oracle = 8.0 * 2f64.sqrt()
            * [0.0, 1e-12, 1e-8, 1e-4, 1e-2, 0.1, 0.5]
                .windows(2)
                .map(|w| integrate(integrand, w[0], w[1], 1e-13))
                .sum::<f64>();
        assert!((got / oracle - 1.0).abs() < 0.01, "{got} vs {oracle}");
        let rep = dudley_report(&curve).unwrap();
        assert!(rep.tail > 0.0 && rep.quadrature > 0.0);
        assert!((rep.half_diameter - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dudley_tail_closed_form() {
        // ∫₀^{e0} √(A - n ln ε) dε by quadrature against the Γ(3/2, ·) form.
        for (n_min, e0, dim) in [(50.0, 0.01, 2usize), (3.0, 0.2, 1), (1e4, 0.05, 3)] {
            let curve = CoveringCurve {
                entries: vec![(e0, n_min)],
                distance_id: "synthetic".into(),
                diameter: 2.0 * e0,
                dim,
            };
            let rep = dudley_report(&curve).unwrap();
            let a = (n_min * e0.powi(dim as i32)).ln();
            let g = |e: f64| (a - dim as f64 * e.ln()).sqrt();
            let want = [0.0, 1e-14, 1e-9, 1e-5, 1e-3 * e0, e0]
                .windows(2)
                .map(|w| integrate(g, w[0], w[1], 1e-13))
                .sum::<f64>();
            assert!((rep.tail / want - 1.0).abs() < 1e-6, "{} vs {want}", rep.tail);
        }
    }

    #[test]
    fn lp_bound_examples() {
        let s = ManifoldModel::sphere2();
        for r in [0.2, 0.5, 1.0, 2.0] {
            assert!((lp_covering_bound(&s, r).unwrap() - 8.0 * PI / (r * r)).abs() < 1e-12);
        }
        assert!((lp_covering_bound(&s, 1.0).unwrap() - 25.13).abs() < 0.01);
        let pts = s.quasi_uniform_grid(20_000);
        assert!(greedy_net(&pts, sphere_dg, 1.0).unwrap().centers.len() <= 25);
        let t = ManifoldModel::flat_torus(&[2.0 * PI, 2.0 * PI]).unwrap();
        assert!((lp_covering_bound(&t, 1.0).unwrap() - 8.0 * PI * PI).abs() < 1e-10);
        assert!(lp_covering_bound(&s, 0.0).is_err());
        assert!(lp_covering_bound(&s, PI).is_err());
        assert!(lp_covering_bound(&t, PI).is_err());
    }

    #[test]
    fn claim_examples() {
        let c = claim_integral(1e-6).unwrap();
        assert!((c.value() - 1.0).abs() <= 1e-6);
        let c = claim_integral(0.1).unwrap();
        assert!(c.value() > 1.0 && c.value() <= 1.05);
        let c = claim_integral(0.5).unwrap();
        assert!((c.quadrature - c.closed_form).abs() <= 1e-8);
        for a in [0.01, 0.05, 0.1, 0.2, 0.5, 2.0, 30.0] {
            let c = claim_integral(a).unwrap();
            if a <= 0.5 {
                assert!((c.value() - 1.0).abs() <= a / 2.0);
            }
            // Direct quadrature on (0, 1] with the log singularity split off.
            let direct = [0.0, 1e-12, 1e-6, 1e-3, 0.1, 1.0]
                .windows(2)
                .map(|w| integrate(|x: f64| (1.0 - a * x.ln()).sqrt(), w[0], w[1], 1e-14))
                .sum::<f64>();
            assert!((direct - c.value()).abs() < 1e-8);
        }
        assert!(claim_integral(0.0).is_err());
        assert!(claim_integral(-1.0).is_err());
    }

    #[test]
    fn gaussian_tail_estimate() {
        for x in [1.0f64, 2.0, 4.0, 8.0] {
            let exact = gaussian_tail(x);
            // Scaled by e^{x²/2} so the quadrature tolerance is relative.
            let by_quad = integrate(|y: f64| (-0.5 * (y - x) * (y + x)).exp(), x, x + 40.0, 1e-14);
            assert!((exact * (0.5 * x * x).exp() / by_quad - 1.0).abs() < 1e-12);
            assert!(exact <= (-0.5 * x * x).exp() / x);
        }
    }
}
