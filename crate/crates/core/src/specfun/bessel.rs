use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{domain, Result};

/// Crossover between the power series and the Hankel asymptotic expansion.
pub const J0_SWITCH: f64 = 12.0;

/// Bessel function of the first kind of order zero for real `r ≥ 0`.
pub fn bessel_j0(r: f64) -> f64 {
    let r = r.abs();
    if r < J0_SWITCH {
        bessel_j0_series(r)
    } else {
        bessel_j0_asymptotic(r)
    }
}

/// `J_0(r) = Σ_k (-1)^k (r²/4)^k / (k!)²`.
pub fn bessel_j0_series(r: f64) -> f64 {
    profile_series(0.0, r)
}

/// Hankel expansion `√(2/πr) [P cos(r - π/4) - Q sin(r - π/4)]`, summed up
/// to its smallest term.
pub fn bessel_j0_asymptotic(r: f64) -> f64 {
    // a_k = Π_{j=1..k} (-(2j-1)²) / (k! 8^k); P takes even k with sign
    // (-1)^{k/2}, Q odd k with sign (-1)^{(k-1)/2}.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (8.0 * kf * r);
        if next >= last || next < 1e-17 {
            break;
        }
        last = next;
        term = next;
        match k % 4 {
            1 => q -= term,
            2 => p -= term,
            3 => q += term,
            _ => p += term,
        }
    }
    let phase = r - FRAC_PI_4;
    (2.0 / (PI * r)).sqrt() * (p * phase.cos() - q * phase.sin())
}

/// Normalized radial profile `Λ_n(r) = 2^ν Γ(ν+1) J_ν(r) / r^ν`,
/// `ν = (n - 2)/2`, for ambient dimension `n ∈ {1, 2, 3}`. `Λ_n(0) = 1`.
pub fn radial_profile(n: usize, r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return domain(format!("radial_profile needs finite r >= 0, got {r}"));
    }
    match n {
        1 => Ok(r.cos()),
        2 => Ok(bessel_j0(r)),
        3 => {
            if r < 1e-3 {
                let r2 = r * r;
                Ok(1.0 - r2 / 6.0 * (1.0 - r2 / 20.0 * (1.0 - r2 / 42.0)))
            } else {
                Ok(r.sin() / r)
            }
        }
        _ => domain(format!("radial_profile supports n in 1..=3, got {n}")),
    }
}

/// Power series `Λ_n(r) = Σ_k (-r²/4)^k / (k! (ν+1)_k)` valid for any
/// supported `n`; intended for moderate `r` (cancellation grows like e^r).
pub fn radial_profile_series(n: usize, r: f64) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return domain(format!("radial_profile supports n in 1..=3, got {n}"));
    }
    if !(r >= 0.0) {
        return domain(format!("radial_profile needs r >= 0, got {r}"));
    }
    Ok(profile_series((n as f64 - 2.0) / 2.0, r))
}

fn profile_series(nu: f64, r: f64) -> f64 {
    let x = -0.25 * r * r;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..300 {
        let kf = k as f64;
        term *= x / (kf * (nu + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && kf > -x.sqrt() {
            break;
        }
    }
    sum
}
