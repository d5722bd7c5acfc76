use std::f64::consts::PI;

use crate::error::{domain, Result};

fn check_unit_interval(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return domain(format!("Legendre argument must lie in [-1, 1], got {t}"));
    }
    Ok(())
}

/// Legendre polynomial `P_l(t)` by the upward three-term recurrence.
pub fn legendre_p(l: usize, t: f64) -> Result<f64> {
    check_unit_interval(t)?;
    Ok(legendre_p_unchecked(l, t))
}

/// [`legendre_p`] without the range check.
#[inline]
pub fn legendre_p_unchecked(l: usize, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, t);
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `1 - P_l(1 - s)` for `s ∈ [0, 2]`, evaluated without cancellation.
///
/// With `D_l = 1 - P_l(1 - s)` the Legendre recurrence becomes
/// `(l+1) D_{l+1} = (2l+1)(s (1 - D_l) + D_l) - l D_{l-1}`, which keeps full
/// relative precision as `s → 0` where `D_l ≈ s l(l+1)/2`.
#[inline]
pub fn one_minus_legendre(l: usize, s: f64) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, s);
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * (s * (1.0 - cur) + cur) - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fully normalized associated Legendre value `N_l^m P_l^m(t)` without the
/// Condon–Shortley phase.
///
/// The normalization makes `Y_{l,0} = N P_l^0(cos θ)` and
/// `√2 N P_l^m(cos θ) {cos, sin}(mφ)` orthonormal on the unit sphere.
pub fn assoc_legendre_normalized(l: usize, m: usize, t: f64) -> Result<f64> {
    check_unit_interval(t)?;
    if m > l {
        return domain(format!("order m = {m} exceeds degree l = {l}"));
    }
    let s = (1.0 - t * t).max(0.0).sqrt();
    let table = DegreeTable::new(l, t, s);
    Ok(table.p[m])
}

/// Normalized associated Legendre data for one degree `l` at one point,
/// all orders `m = 0..=l`.
///
/// `p[m]` is `N_l^m P_l^m(cos θ)`, `dtheta[m]` its derivative in the polar
/// angle, and `q[m]` (for `m ≥ 1`) the pole-regular quotient `p[m] / sin θ`.
#[derive(Debug, Clone)]
pub struct DegreeTable {
    pub l: usize,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub dtheta: Vec<f64>,
}

impl DegreeTable {
    /// `t = cos θ`, `s = sin θ ≥ 0`.
    pub fn new(l: usize, t: f64, s: f64) -> Self {
        let mut p = vec![0.0; l + 1];
        let mut q = vec![0.0; l + 1];
        let mut dtheta = vec![0.0; l + 1];
        let lf = l as f64;

        // m = 0 runs on P directly.
        let y00 = 0.5 / PI.sqrt();
        let (mut prev, mut cur) = (0.0, y00);
        for k in 1..=l {
            let next = recur(k, 0, t, cur, prev);
            prev = cur;
            cur = next;
        }
        p[0] = cur;

        // m >= 1 runs on q = P / sin θ, which stays finite at the poles.
        let mut diag = y00; // N_m^m P_m^m / s^m
        for m in 1..=l {
            let mf = m as f64;
            diag *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
            let start = diag * s.powi(m as i32 - 1);
            let (mut prev, mut cur) = (0.0, start);
            for k in (m + 1)..=l {
                let next = recur(k, m, t, cur, prev);
                prev = cur;
                cur = next;
            }
            q[m] = cur;
            p[m] = cur * s;
            let f = ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt();
            dtheta[m] = lf * t * cur - f * prev;
        }
        if l >= 1 {
            dtheta[0] = -(lf * (lf + 1.0)).sqrt() * p[1];
        }
        Self { l, p, q, dtheta }
    }
}

// One step of the normalized recurrence in the degree at fixed order:
// value at degree k from values at k-1 and k-2.
#[inline]
fn recur(k: usize, m: usize, t: f64, cur: f64, prev: f64) -> f64 {
    let kf = k as f64;
    let mf = m as f64;
    let a = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
    if k == m + 1 {
        return a * t * cur;
    }
    let km1 = kf - 1.0;
    let b = ((km1 * km1 - mf * mf) / (4.0 * km1 * km1 - 1.0)).sqrt();
    a * (t * cur - b * prev)
}
