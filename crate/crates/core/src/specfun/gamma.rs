use crate::error::{domain, Result};

// Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

const SHIFT: f64 = 15.0;

/// `ln Γ(x)` for positive finite `x`.
///
/// Arguments below 15 are shifted upward with the recurrence
/// `Γ(x+1) = x Γ(x)`; the asymptotic Stirling series is summed from there.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("log_gamma needs a positive finite argument, got {x}"));
    }
    let mut z = x;
    let mut prod = 1.0;
    let mut log_shift = 0.0;
    while z < SHIFT {
        prod *= z;
        z += 1.0;
        if prod > 1e280 {
            log_shift += prod.ln();
            prod = 1.0;
        }
    }
    log_shift += prod.ln();
    Ok(stirling(z) - log_shift)
}

fn stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}
