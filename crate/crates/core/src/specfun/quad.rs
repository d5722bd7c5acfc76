//! Quadrature rules: Gauss–Legendre nodes and adaptive Gauss–Kronrod.

use std::f64::consts::PI;

use super::legendre_p_unchecked;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let p = legendre_p_unchecked(n, x);
            let pm1 = legendre_p_unchecked(n - 1, x);
            deriv = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / deriv;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let p = legendre_p_unchecked(n, x);
        let pm1 = legendre_p_unchecked(n - 1, x);
        deriv = if x.abs() < 1.0 { nf * (x * p - pm1) / (x * x - 1.0) } else { deriv };
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]` to the
/// absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut stack = vec![(a, b, tol, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, eps, depth)) = stack.pop() {
        let (val, err) = kronrod15(&f, lo, hi);
        if err <= eps.max(1e-300) || depth >= 50 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * eps, depth + 1));
            stack.push((mid, hi, 0.5 * eps, depth + 1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn adaptive_integration() {
        let v = integrate(|x| x.exp(), 0.0, 1.0, 1e-14);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        let v = integrate(|x| (-x * x).exp(), 0.0, 30.0, 1e-14);
        assert!((v - PI.sqrt() / 2.0).abs() < 1e-13);
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }
}
