//! Closed-form spectra: frequencies `μ` of `√Δ` on S² and on flat tori,
//! unit-width bands `(λ, λ+1]`, counting functions and Weyl-law deviations.
//!
//! Membership tests compare squared frequencies, which are exact integers on
//! S² and exact for tori with side lengths `2π`.

use serde::Serialize;

use crate::embed::k_lambda;
use crate::error::{domain, Result};
use crate::manifold::{ManifoldKind, ManifoldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModeLabel {
    /// Real spherical harmonic `Y_{l,m}`, `-l ≤ m ≤ l`.
    Sphere { l: usize, m: i64 },
    /// `cos(ω_k·x)` or `sin(ω_k·x)` with `k` in the half-space whose first
    /// nonzero entry is positive. Entries past the torus dimension are zero.
    Torus { k: [i64; 3], flavor: Flavor },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode {
    pub id: usize,
    pub mu: f64,
    pub mu_sq: f64,
    pub label: ModeLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub lambda: f64,
    pub modes: Vec<Mode>,
    pub m_lambda: usize,
    /// `None` for an empty band.
    pub k_lambda: Option<f64>,
    #[serde(skip)]
    pub model: ManifoldModel,
}

impl Band {
    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn k(&self) -> Result<f64> {
        self.k_lambda
            .ok_or(crate::Error::EmptyBand(self.lambda))
    }

    /// Mean frequency `(Σ μ_j) / m_λ`.
    pub fn mean_mu(&self) -> f64 {
        if self.modes.is_empty() {
            return 0.0;
        }
        self.modes.iter().map(|m| m.mu).sum::<f64>() / self.modes.len() as f64
    }

    /// Distinct sphere degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for mode in &self.modes {
            if let ModeLabel::Sphere { l, .. } = mode.label {
                if out.last() != Some(&l) {
                    out.push(l);
                }
            }
        }
        out
    }

    /// Torus lattice vectors present (one per cos/sin pair), in mode order.
    pub fn lattice_vectors(&self) -> Vec<[i64; 3]> {
        self.modes
            .iter()
            .filter_map(|m| match m.label {
                ModeLabel::Torus { k, flavor: Flavor::Cos } => Some(k),
                _ => None,
            })
            .collect()
    }
}

/// Frequency vector `ω_k = 2π (k_1/L_1, …, k_n/L_n)`.
pub fn torus_frequency(model: &ManifoldModel, k: &[i64; 3]) -> [f64; 3] {
    let mut w = [0.0; 3];
    for i in 0..model.dim {
        w[i] = k[i] as f64 * (2.0 * std::f64::consts::PI / model.side_lengths[i]);
    }
    w
}

fn torus_mu_sq(model: &ManifoldModel, k: &[i64; 3]) -> f64 {
    let w = torus_frequency(model, k);
    w.iter().map(|c| c * c).sum()
}

fn sphere_mu_sq(l: usize) -> f64 {
    (l * (l + 1)) as f64
}

/// All modes with `lo < μ ≤ hi`, in the canonical order.
pub fn modes_in_interval(model: &ManifoldModel, lo: f64, hi: f64) -> Vec<Mode> {
    let lo2 = if lo > 0.0 { lo * lo } else { 0.0 };
    let hi2 = hi * hi;
    let mut modes = Vec::new();
    if !(hi > lo) || hi <= 0.0 {
        return modes;
    }
    match model.kind {
        ManifoldKind::Sphere2 => {
            let mut l = 1usize;
            while sphere_mu_sq(l) <= hi2 {
                let mu_sq = sphere_mu_sq(l);
                if mu_sq > lo2 {
                    for m in -(l as i64)..=(l as i64) {
                        modes.push(Mode {
                            id: modes.len(),
                            mu: mu_sq.sqrt(),
                            mu_sq,
                            label: ModeLabel::Sphere { l, m },
                        });
                    }
                }
                l += 1;
            }
        }
        ManifoldKind::FlatTorus => {
            for_each_lattice_point(model, hi2, |k| {
                if !in_half_space(k) {
                    return;
                }
                let mu_sq = torus_mu_sq(model, k);
                if mu_sq > lo2 && mu_sq <= hi2 {
                    for flavor in [Flavor::Cos, Flavor::Sin] {
                        modes.push(Mode {
                            id: modes.len(),
                            mu: mu_sq.sqrt(),
                            mu_sq,
                            label: ModeLabel::Torus { k: *k, flavor },
                        });
                    }
                }
            });
        }
    }
    modes
}

fn in_half_space(k: &[i64; 3]) -> bool {
    match k.iter().find(|c| **c != 0) {
        Some(c) => *c > 0,
        None => false,
    }
}

// Visits lattice vectors in lexicographic order inside the box
// |k_i| ≤ ceil(radius · L_i / 2π).
fn for_each_lattice_point(model: &ManifoldModel, radius_sq: f64, mut f: impl FnMut(&[i64; 3])) {
    let radius = radius_sq.sqrt();
    let bounds: Vec<i64> = model
        .side_lengths
        .iter()
        .map(|l| (radius * l / (2.0 * std::f64::consts::PI)).ceil() as i64)
        .collect();
    let mut k = [0i64; 3];
    let b = |i: usize| if i < bounds.len() { bounds[i] } else { 0 };
    for k0 in -b(0)..=b(0) {
        k[0] = k0;
        for k1 in -b(1)..=b(1) {
            k[1] = k1;
            for k2 in -b(2)..=b(2) {
                k[2] = k2;
                f(&k);
            }
        }
    }
}

/// The band `M_λ`: all modes with `λ < μ ≤ λ + 1`.
pub fn enumerate_band(model: &ManifoldModel, lambda: f64) -> Result<Band> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("band parameter must be finite and >= 0, got {lambda}"));
    }
    let modes = modes_in_interval(model, lambda, lambda + 1.0);
    let m_lambda = modes.len();
    let k_lambda = if m_lambda > 0 { Some(k_lambda(m_lambda)?) } else { None };
    Ok(Band {
        lambda,
        modes,
        m_lambda,
        k_lambda,
        model: model.clone(),
    })
}

/// `N(λ)`: number of modes with `0 < μ ≤ λ`, with multiplicity.
pub fn eigenvalue_count(model: &ManifoldModel, lambda: f64) -> Result<usize> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("lambda must be finite and >= 0, got {lambda}"));
    }
    let l2 = lambda * lambda;
    Ok(match model.kind {
        ManifoldKind::Sphere2 => {
            let mut l = 0usize;
            while sphere_mu_sq(l + 1) <= l2 {
                l += 1;
            }
            (l + 1) * (l + 1) - 1
        }
        ManifoldKind::FlatTorus => {
            let mut count = 0usize;
            for_each_lattice_point(model, l2, |k| {
                if in_half_space(k) && torus_mu_sq(model, k) <= l2 {
                    count += 2;
                }
            });
            count
        }
    })
}

/// `N(λ) / (α_n vol λⁿ) - 1`.
pub fn weyl_count_deviation(model: &ManifoldModel, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain("weyl_count_deviation needs lambda > 0");
    }
    let n = eigenvalue_count(model, lambda)? as f64;
    let alpha = model.weyl_constants().alpha_n;
    Ok(n / (alpha * model.volume * lambda.powi(model.dim as i32)) - 1.0)
}

/// `m_λ / (n α_n vol λ^{n-1}) - 1`.
pub fn band_dimension_deviation(model: &ManifoldModel, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain("band_dimension_deviation needs lambda > 0");
    }
    let m = enumerate_band(model, lambda)?.m_lambda as f64;
    let alpha = model.weyl_constants().alpha_n;
    let n = model.dim as f64;
    Ok(m / (n * alpha * model.volume * lambda.powi(model.dim as i32 - 1)) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn torus2pi() -> ManifoldModel {
        ManifoldModel::flat_torus(&[2.0 * PI, 2.0 * PI]).unwrap()
    }

    #[test]
    fn sphere_band_nine() {
        let band = enumerate_band(&ManifoldModel::sphere2(), 9.0).unwrap();
        assert_eq!(band.m_lambda, 19);
        assert_eq!(band.degrees(), vec![9]);
        // Independent scan over l ≤ 12.
        let expected: Vec<usize> = (1..=12usize)
            .filter(|l| {
                let mu = ((l * (l + 1)) as f64).sqrt();
                mu > 9.0 && mu <= 10.0
            })
            .collect();
        assert_eq!(expected, vec![9]);
        assert!((band.modes[0].mu - 90f64.sqrt()).abs() < 1e-14);
        let k = band.k_lambda.unwrap();
        assert!(k * k > 18.0 && k * k < 20.0);
    }

    #[test]
    fn torus_band_one() {
        let band = enumerate_band(&torus2pi(), 1.0).unwrap();
        assert_eq!(band.m_lambda, 8);
        // Lattice scan |k| ≤ 3 over the full plane, counting both signs.
        let mut full = 0;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let r2 = (a * a + b * b) as f64;
                if r2 > 1.0 && r2 <= 4.0 {
                    full += 1;
                }
            }
        }
        assert_eq!(full, 8);
        assert_eq!(
            band.lattice_vectors(),
            vec![[0, 2, 0], [1, -1, 0], [1, 1, 0], [2, 0, 0]]
        );
        assert_eq!(band.modes[0].label, ModeLabel::Torus { k: [0, 2, 0], flavor: Flavor::Cos });
        assert_eq!(band.modes[1].label, ModeLabel::Torus { k: [0, 2, 0], flavor: Flavor::Sin });
    }

    #[test]
    fn empty_band_is_valid() {
        let band = enumerate_band(&ManifoldModel::sphere2(), 0.0).unwrap();
        assert_eq!(band.m_lambda, 0);
        assert!(band.k_lambda.is_none());
        assert!(band.k().is_err());
        let t = ManifoldModel::flat_torus(&[1.0]).unwrap();
        let band = enumerate_band(&t, 0.5).unwrap();
        assert!(band.is_empty());
        assert!(enumerate_band(&t, -1.0).is_err());
    }

    #[test]
    fn count_examples() {
        let s = ManifoldModel::sphere2();
        assert_eq!(eigenvalue_count(&s, 10.0).unwrap(), 99);
        assert_eq!(eigenvalue_count(&s, 0.0).unwrap(), 0);
        assert_eq!(eigenvalue_count(&torus2pi(), 1.0).unwrap(), 4);
        assert_eq!(eigenvalue_count(&torus2pi(), 0.0).unwrap(), 0);
    }

    #[test]
    fn weyl_examples() {
        let d = weyl_count_deviation(&torus2pi(), 50.0).unwrap();
        assert!(d.abs() <= 0.02, "{d}");
        let d = weyl_count_deviation(&ManifoldModel::sphere2(), 60.0).unwrap();
        assert!(d.abs() <= 0.01, "{d}");
        assert!(weyl_count_deviation(&ManifoldModel::sphere2(), 2.0).unwrap().is_finite());
        assert!(weyl_count_deviation(&torus2pi(), 0.0).is_err());
    }

    #[test]
    fn band_dimension_examples() {
        let d = band_dimension_deviation(&ManifoldModel::sphere2(), 9.0).unwrap();
        assert!((d - (19.0 / 18.0 - 1.0)).abs() < 1e-14);
        let t = torus2pi();
        let lambdas: Vec<f64> = (0..=50).map(|i| 40.0 + 0.1 * i as f64).collect();
        let mean = lambdas
            .iter()
            .map(|l| band_dimension_deviation(&t, *l).unwrap())
            .sum::<f64>()
            / lambdas.len() as f64;
        assert!(mean.abs() <= 0.1, "{mean}");
        let empty = band_dimension_deviation(&ManifoldModel::sphere2(), 0.1).unwrap();
        assert_eq!(empty, -1.0);
    }

    #[test]
    fn band_count_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for model in [
            ManifoldModel::sphere2(),
            torus2pi(),
            ManifoldModel::flat_torus(&[1.3]).unwrap(),
            ManifoldModel::flat_torus(&[2.0, 3.0, 5.0]).unwrap(),
        ] {
            for _ in 0..100 {
                let lambda = rng.gen::<f64>() * 30.0;
                let m = enumerate_band(&model, lambda).unwrap().m_lambda;
                let n1 = eigenvalue_count(&model, lambda + 1.0).unwrap();
                let n0 = eigenvalue_count(&model, lambda).unwrap();
                assert_eq!(m, n1 - n0, "lambda {lambda}");
            }
        }
    }

    #[test]
    fn integer_band_edges() {
        // μ = λ excluded, μ = λ + 1 included.
        let t = torus2pi();
        let band = enumerate_band(&t, 2.0).unwrap();
        assert!(band.modes.iter().all(|m| m.mu_sq > 4.0 && m.mu_sq <= 9.0));
        assert!(band.modes.iter().any(|m| m.mu_sq == 9.0));
    }

    #[test]
    fn sphere_bands_have_few_degrees() {
        let s = ManifoldModel::sphere2();
        for i in 0..=400 {
            let band = enumerate_band(&s, 0.5 * i as f64).unwrap();
            assert!(band.degrees().len() <= 2);
            for mode in &band.modes {
                assert!(mode.mu > band.lambda && mode.mu <= band.lambda + 1.0);
            }
        }
    }

    #[test]
    fn ordering_is_deterministic() {
        let t = ManifoldModel::flat_torus(&[2.0, 3.0, 5.0]).unwrap();
        let a = enumerate_band(&t, 6.0).unwrap();
        let b = enumerate_band(&t, 6.0).unwrap();
        assert_eq!(a.modes, b.modes);
        for (i, m) in a.modes.iter().enumerate() {
            assert_eq!(m.id, i);
        }
        let s = enumerate_band(&ManifoldModel::sphere2(), 20.0).unwrap();
        let labels: Vec<_> = s.modes.iter().map(|m| m.label).collect();
        let expected: Vec<_> = (-20i64..=20).map(|m| ModeLabel::Sphere { l: 20, m }).collect();
        assert_eq!(labels, expected);
    }
}
