//! Adaptive quadrature and compensated summation.
//!
//! The integrators below are deliberately small: a Gauss–Kronrod 7/15 rule
//! with recursive bisection, a doubling-panel scheme for `[a, ∞)`, and a
//! complex variant used for straight-segment contour integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};

// Gauss-Kronrod 7-15 nodes on [-1, 1]; odd indices are the embedded Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_6,
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

/// One Gauss–Kronrod 7/15 panel; returns (estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(c);
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    for i in 0..7 {
        let x = half * XGK[i];
        let v = f(c - x) + f(c + x);
        res_k += WGK[i] * v;
        if i % 2 == 1 {
            res_g += WG[i / 2] * v;
        }
    }
    res_k *= half;
    res_g *= half;
    (res_k, (res_k - res_g).abs())
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Globally adaptive: always bisects the panel with the largest error
/// estimate, so integrable endpoint singularities converge instead of
/// exhausting a per-panel depth limit.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::argument("integrate: endpoints must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    let (v0, e0) = gk15(&f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = vec![(a, b, v0, e0)];
    let mut total = v0;
    let mut err_total = e0;
    for _ in 0..4000 {
        let tol = abs_tol.max(rel_tol * total.abs()).max(1e-300);
        if err_total <= tol || !err_total.is_finite() {
            break;
        }
        // Split the worst panel.
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.3 > panels[worst].3 {
                worst = i;
            }
        }
        let (pa, pb, pv, pe) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Panel width exhausted the floating point grid.
            panels.push((pa, pb, pv, 0.0));
            err_total -= pe;
            continue;
        }
        let (lv, le) = gk15(&f, pa, mid);
        let (rv, re) = gk15(&f, mid, pb);
        total += lv + rv - pv;
        err_total += le + re - pe;
        panels.push((pa, mid, lv, le));
        panels.push((mid, pb, rv, re));
    }
    if err_total.is_nan() {
        return Err(Error::accuracy("integrate: NaN encountered", None));
    }
    let tol = abs_tol.max(rel_tol * total.abs()).max(1e-300);
    if err_total > 1e3 * tol {
        return Err(Error::accuracy(
            format!("integrate: error estimate {err_total:.3e} above tolerance"),
            Some(total),
        ));
    }
    Ok(total)
}

/// Integration of `f` over `[a, ∞)` by doubling panels until the last
/// contribution is negligible. Suitable for integrands with eventual decay.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    let mut left = a;
    let mut width = 1.0_f64.max(a.abs());
    let mut total = 0.0;
    let mut quiet = 0;
    for _ in 0..64 {
        let right = left + width;
        let piece = integrate(&f, left, right, abs_tol * 0.25, rel_tol * 0.25)?;
        total += piece;
        if piece.abs() <= abs_tol.max(rel_tol * total.abs()) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        left = right;
        width *= 2.0;
    }
    Err(Error::accuracy(
        "integrate_to_inf: tail did not become negligible",
        Some(total),
    ))
}

/// Adaptive integration of a complex-valued function of a real parameter.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    let re = integrate(|t| f(t).re, a, b, abs_tol, rel_tol)?;
    let im = integrate(|t| f(t).im, a, b, abs_tol, rel_tol)?;
    Ok(Complex64::new(re, im))
}

/// Neumaier compensated accumulator. Keeps a running error term so that
/// alternating series lose no more digits than the data itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ∫_0^{x_max} e^{-βx} f(x) dx for f piecewise linear through uniformly
/// sampled `values` with step `h`, starting at x = 0. Each cell is
/// integrated in closed form, so the only error is the interpolation error.
pub fn laplace_piecewise_linear(values: &[f64], h: f64, beta: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ebh = (-beta * h).exp();
    let c1 = (1.0 - ebh) / beta;
    let c2 = (1.0 - (1.0 + beta * h) * ebh) / (beta * beta);
    let mut acc = NeumaierSum::new();
    for (j, w) in values.windows(2).enumerate() {
        let a = j as f64 * h;
        let slope = (w[1] - w[0]) / h;
        acc.add((-beta * a).exp() * (w[0] * c1 + slope * c2));
    }
    acc.value()
}

/// Cumulative trapezoid of uniformly sampled values with step `h`.
/// Output has the same length; entry 0 is 0.
pub fn cumtrapz(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = NeumaierSum::new();
    out.push(0.0);
    for w in values.windows(2) {
        acc.add(0.5 * h * (w[0] + w[1]));
        out.push(acc.value());
    }
    out
}
