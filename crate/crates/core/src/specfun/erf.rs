use std::f64::consts::PI;

/// Scaled complementary error function `e^{x²} erfc(x)`.
///
/// Stable for large `x`, where `erfc` itself underflows. Uses the Taylor
/// series of `erf` below 0.5 and the Laplace continued fraction above.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 0.5 {
        return (x * x).exp() * (1.0 - erf_series(x));
    }
    // erfc(x) e^{x²} √π = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // evaluated with the modified Lentz algorithm.
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..20_000 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * PI.sqrt())
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 0.5 {
        return 1.0 - erf_series(x);
    }
    erfcx(x) * (-x * x).exp()
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..100 {
        let nf = n as f64;
        term *= -x2 / nf;
        let add = term / (2.0 * nf + 1.0);
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / PI.sqrt() * sum
}
