//! Characteristic-function construction for the dual process started at 0,
//! FFT inversion to densities and distribution functions, and tabulation of
//! W and its derivatives W^(n+1) on uniform grids.
//!
//! Sampling conventions: the "Fourier transform" of a law is E[e^{-iuX}], so
//! a density is recovered as f(y) = (1/2π) ∫ g(u) e^{+iuy} du. The FFT plan
//! realizes the spatial step as dy = h/os with os a power of two, making
//! every requested grid point a bin of the inverse DFT.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::backward::BackwardExponent;
use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::quad::{self, NeumaierSum};

/// Rule used to integrate W' into W on the output grid.
///
/// `Trapezoid` integrates at full FFT resolution before subsampling.
/// `LeftRectangle` is a first-order cumulative sum at the coarse grid step,
/// kept for compatibility with coarse reference tabulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CumulativeRule {
    Trapezoid,
    LeftRectangle,
}

/// Frequency/space discretization for the inversion engine.
///
/// The spatial grid is {0, h, ..., m·h}. `u_max` is realized as os·π/h for a
/// power-of-two oversampling factor os (rounded up from the request), so the
/// inverse transform lands exactly on the spatial grid.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub h: f64,
    pub m: usize,
    pub u_max: f64,
    pub n_freq: usize,
}

impl GridSpec {
    pub fn new(h: f64, m: usize, u_max: f64, n_freq: usize) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::argument("GridSpec: h must be positive"));
        }
        if m == 0 {
            return Err(Error::argument("GridSpec: m must be >= 1"));
        }
        if !(u_max > 0.0) {
            return Err(Error::argument("GridSpec: u_max must be positive"));
        }
        if !n_freq.is_power_of_two() {
            return Err(Error::argument("GridSpec: n_freq must be a power of two"));
        }
        if n_freq < 2 * (m + 1) {
            return Err(Error::argument(
                "GridSpec: n_freq must be >= 2(m+1) to avoid aliasing",
            ));
        }
        Ok(GridSpec {
            h,
            m,
            u_max,
            n_freq,
        })
    }

    pub fn x_max(&self) -> f64 {
        self.h * self.m as f64
    }

    /// Oversampling factor: smallest power of two with os·π/h >= u_max.
    pub(crate) fn oversampling(&self) -> usize {
        let raw = self.u_max * self.h / PI;
        let mut os = 1usize;
        while (os as f64) < raw - 1e-9 {
            os *= 2;
        }
        os
    }
}

/// Tuning knobs for automatic grid selection.
#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    /// Target for |cf(u_max)| · u_max^{n_max} when picking the cutoff.
    pub decay_tol: f64,
    /// Target for wrap-around (aliasing) mass of the inversion window.
    pub alias_tol: f64,
    /// Hard cap on the FFT size.
    pub max_n_freq: usize,
    /// Negative spatial extension of derivative tables, in grid steps.
    pub neg_steps: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            decay_tol: 1e-10,
            alias_tol: 1e-8,
            max_n_freq: 1 << 22,
            neg_steps: 5,
        }
    }
}

/// Pick a grid for tabulating W and derivatives up to order n_max.
pub fn auto_grid_for_derivatives(
    be: &BackwardExponent,
    h: f64,
    m: usize,
    n_max: usize,
    opts: &GridOptions,
) -> Result<GridSpec> {
    let modulus = |u: f64| -> Result<f64> {
        let phi = be.varphi_r_complex(Complex64::new(0.0, u))?;
        Ok((-phi.re).exp() * u.max(1.0).powi(n_max as i32))
    };
    finish_auto_grid(be, h, m, opts, modulus)
}

/// Pick a grid for inverting the law of the dual process at time t
/// (t = None means the stationary law).
///
/// Compound-Poisson horizons leave a density jump at 0 and a 1/u transform
/// tail that never meets a raw modulus target; the stopping criterion is the
/// post-integration error proxy |cf(u)|/(π u h) instead.
pub fn auto_grid_for_cdf(
    be: &BackwardExponent,
    t: Option<f64>,
    h: f64,
    m: usize,
    opts: &GridOptions,
) -> Result<GridSpec> {
    let atom = atom_at_zero(be, t);
    let modulus = |u: f64| -> Result<f64> {
        let cf = dual_char_function_opt(be, t, u)?;
        Ok((cf - atom).norm() / (PI * u.max(1.0) * h))
    };
    finish_auto_grid(be, h, m, opts, modulus)
}

fn finish_auto_grid(
    be: &BackwardExponent,
    h: f64,
    m: usize,
    opts: &GridOptions,
    modulus: impl Fn(f64) -> Result<f64>,
) -> Result<GridSpec> {
    // Frequency cutoff: double until the modulus target is met (or the FFT
    // cap makes a larger cutoff pointless).
    let mut u_req = PI / h;
    let u_cap = PI / h * 4096.0;
    while u_req < u_cap {
        if modulus(u_req)? <= opts.decay_tol {
            break;
        }
        u_req *= 2.0;
    }
    let mut os = 1usize;
    while (os as f64) * PI / h < u_req - 1e-9 {
        os *= 2;
    }
    let dy = h / os as f64;

    // Aliasing period: the wrapped tail mass of the stationary law beyond L
    // is bounded through the density proxy tail(z)/(r z).
    let span = m as f64 * h;
    let base = 2.0 * (span + opts.neg_steps as f64 * h + 1.0);
    let mut big_l = base;
    let proxy = |z: f64| be.model().tail_unchecked(z) / (be.r() * z);
    for _ in 0..48 {
        let p = proxy(big_l);
        if !(p.is_finite())
            || (span.max(1.0) * p * 3.0 <= opts.alias_tol && p * 1.6 <= opts.alias_tol)
        {
            break;
        }
        big_l *= 2.0;
    }

    let mut n = 2usize;
    let min_points = ((big_l / dy).ceil() as usize)
        .max(16 * (m + 1))
        .max(2 * (m + 1) * os);
    while n < min_points {
        n *= 2;
    }
    if n > opts.max_n_freq {
        n = opts.max_n_freq;
        if (n as f64) * dy < 2.0 * (span + 1.0) {
            return Err(Error::accuracy(
                "auto grid: FFT cap too small for the requested span and cutoff",
                None,
            ));
        }
    }
    GridSpec::new(h, m, os as f64 * PI / h, n)
}

/// Fourier transform E[e^{-iuX_t}] of the dual law started at 0:
/// exp(φ_r(iu e^{-rt}) - φ_r(iu)).
pub fn dual_char_function(be: &BackwardExponent, t: f64, u: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Err(Error::domain("dual_char_function: t must be nonnegative"));
    }
    dual_char_function_opt(be, Some(t), u)
}

/// Same as [`dual_char_function`] with `None` meaning the t → ∞ limit
/// exp(-φ_r(iu)), the transform of the stationary law.
pub fn dual_char_function_opt(be: &BackwardExponent, t: Option<f64>, u: f64) -> Result<Complex64> {
    let iu = Complex64::new(0.0, u);
    let at_inf = be.varphi_r_complex(iu)?;
    match t {
        Some(t) => {
            let shrunk = be.varphi_r_complex(iu * (-be.r() * t).exp())?;
            Ok((shrunk - at_inf).exp())
        }
        None => Ok((-at_inf).exp()),
    }
}

/// Atom of the dual law at 0: e^{-ν(0,∞) t} for compound-Poisson drivers at
/// finite horizons, zero otherwise.
pub fn atom_at_zero(be: &BackwardExponent, t: Option<f64>) -> f64 {
    match t {
        Some(t) => {
            let nu0 = be.model().nu_total();
            if nu0.is_finite() {
                (-nu0 * t).exp()
            } else {
                0.0
            }
        }
        None => 0.0,
    }
}

struct Plan {
    dy: f64,
    du: f64,
    n: usize,
    os: usize,
}

fn plan(grid: &GridSpec) -> Plan {
    let os = grid.oversampling();
    let dy = grid.h / os as f64;
    let n = grid.n_freq;
    let du = 2.0 * PI / (n as f64 * dy);
    Plan { dy, du, n, os }
}

/// Invert Hermitian CF samples to a density on the full FFT circle.
/// `half` holds g(j·du) for j = 0..=n/2; the negative half is conjugated in.
fn invert_half_cf(half: &[Complex64], p: &Plan) -> Vec<f64> {
    let n = p.n;
    assert_eq!(half.len(), n / 2 + 1);
    let mut buf: Vec<Complex64> = Vec::with_capacity(n);
    buf.extend_from_slice(half);
    // Nyquist bin must be real for a real output.
    buf[n / 2] = Complex64::new(buf[n / 2].re, 0.0);
    for j in n / 2 + 1..n {
        buf.push(half[n - j].conj());
    }
    debug_assert_eq!(buf.len(), n);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    fft.process(&mut buf);
    let scale = p.du / (2.0 * PI);
    buf.into_iter().map(|z| z.re * scale).collect()
}

/// Distribution function on the spatial grid from frequency samples of the
/// absolutely continuous part of the transform, plus an optional atom at 0.
///
/// `cf_half` samples E[e^{-iuX}] - atom at u_j = j·du, j = 0..=n_freq/2 with
/// du = 2π/(n_freq · h/os). The density is reconstructed first, integrated by
/// the trapezoid rule from the far negative end of the window, clipped to
/// [0,1] and monotonized by running maximum.
pub fn invert_to_cdf(
    cf_half: &[Complex64],
    grid: &GridSpec,
    atom_zero: f64,
    decay_tol: f64,
) -> Result<Vec<f64>> {
    let p = plan(grid);
    if cf_half.len() != p.n / 2 + 1 {
        return Err(Error::argument(format!(
            "invert_to_cdf: expected {} frequency samples, got {}",
            p.n / 2 + 1,
            cf_half.len()
        )));
    }
    let edge = cf_half[p.n / 2].norm();
    if edge > decay_tol {
        return Err(Error::accuracy(
            format!(
                "invert_to_cdf: |cf(u_max)| = {edge:.3e} exceeds {decay_tol:.1e}; increase u_max"
            ),
            None,
        ));
    }
    let density = invert_half_cf(cf_half, &p);
    Ok(cdf_from_circle_density(&density, &p, grid, atom_zero, CdfStart::WindowEdge).0)
}

/// Where the cumulative integration of the reconstructed density starts.
///
/// `WindowEdge` sums the whole aliasing window [-L/2, L/2) (general laws).
/// `JustBelowZero` starts a few bins below 0: correct for laws supported on
/// [0, ∞), and essential for heavy tails, whose wrapped upper-tail mass
/// lands deep in the negative half of the window and must not be counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfStart {
    WindowEdge,
    JustBelowZero,
}

/// Cumulative distribution over the aliasing window, reported on the
/// nonnegative spatial grid. Returns (values, pre-monotonization defect).
fn cdf_from_circle_density(
    density: &[f64],
    p: &Plan,
    grid: &GridSpec,
    atom_zero: f64,
    start: CdfStart,
) -> (Vec<f64>, f64) {
    let n = p.n;
    let first = match start {
        CdfStart::WindowEdge => n / 2 + 1,
        // A short negative margin picks up the reconstruction ringing
        // around 0 without touching wrapped far-tail mass.
        CdfStart::JustBelowZero => n - 64.min(n / 4),
    };
    let mut cum = vec![0.0f64; n / 2 + 1]; // cumulative at k = 0..=n/2 (y >= 0)
    let mut acc = NeumaierSum::new();
    let mut prev = density[first];
    for k in first + 1..n {
        let d = density[k];
        acc.add(0.5 * p.dy * (prev + d));
        prev = d;
    }
    // Crossing y = 0 picks up the atom.
    acc.add(0.5 * p.dy * (prev + density[0]));
    acc.add(atom_zero);
    cum[0] = acc.value();
    let mut prev = density[0];
    for k in 1..=n / 2 {
        let d = density[k];
        acc.add(0.5 * p.dy * (prev + d));
        prev = d;
        cum[k] = acc.value();
    }
    // Collect requested grid points, clip and monotonize.
    let mut out = Vec::with_capacity(grid.m + 1);
    let mut defect = 0.0f64;
    let mut running = 0.0f64;
    for i in 0..=grid.m {
        let v = cum[i * p.os];
        if v < running {
            defect = defect.max(running - v);
        }
        running = running.max(v.clamp(0.0, 1.0));
        out.push(running);
    }
    (out, defect)
}

/// Distribution function of the dual process at horizon `t` (None = ∞) on
/// the spatial grid, with linear interpolation between nodes.
#[derive(Debug, Clone)]
pub struct CdfProfile {
    pub h: f64,
    pub values: Vec<f64>,
    pub atom_zero: f64,
    pub pre_monotone_defect: f64,
}

impl CdfProfile {
    /// F(x); 0 below the window, saturating at the last grid value above it.
    pub fn query(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let pos = x / self.h;
        let i = pos.floor() as usize;
        if i + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let w = pos - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

/// Build the dual CDF profile at horizon `t` (None = stationary).
pub fn dual_cdf_profile(
    be: &BackwardExponent,
    t: Option<f64>,
    grid: &GridSpec,
    decay_tol: f64,
) -> Result<CdfProfile> {
    if be.xi() == 1 {
        return Err(Error::unsupported(
            "dual_cdf_profile: xi = 1 drivers are not invertible here",
        ));
    }
    let p = plan(grid);
    let atom = atom_at_zero(be, t);
    let mut half = Vec::with_capacity(p.n / 2 + 1);
    for j in 0..=p.n / 2 {
        let u = j as f64 * p.du;
        half.push(dual_char_function_opt(be, t, u)? - atom);
    }
    let edge = half[p.n / 2].norm();
    if edge > decay_tol {
        return Err(Error::accuracy(
            format!(
                "dual_cdf_profile: |cf(u_max)| = {edge:.3e} above {decay_tol:.1e}; increase u_max"
            ),
            None,
        ));
    }
    let density = invert_half_cf(&half, &p);
    // Dual laws are supported on [0, ∞): never sweep the negative half of
    // the window, where heavy upper tails alias to.
    let (values, defect) =
        cdf_from_circle_density(&density, &p, grid, atom, CdfStart::JustBelowZero);
    Ok(CdfProfile {
        h: grid.h,
        values,
        atom_zero: atom,
        pre_monotone_defect: defect,
    })
}

/// Density of the dual law at horizon `t` on the extended grid
/// [-neg_steps·h, m·h] (absolutely continuous part; the atom is reported
/// separately).
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub h: f64,
    pub neg_steps: usize,
    pub values: Vec<f64>,
    pub atom_zero: f64,
}

impl DensityProfile {
    pub fn x_at(&self, i: usize) -> f64 {
        (i as f64 - self.neg_steps as f64) * self.h
    }

    pub fn query(&self, x: f64) -> f64 {
        let pos = x / self.h + self.neg_steps as f64;
        if pos < 0.0 {
            return 0.0;
        }
        let i = pos.floor() as usize;
        if i + 1 >= self.values.len() {
            return 0.0;
        }
        let w = pos - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

pub fn dual_density_profile(
    be: &BackwardExponent,
    t: Option<f64>,
    grid: &GridSpec,
    neg_steps: usize,
) -> Result<DensityProfile> {
    let p = plan(grid);
    let atom = atom_at_zero(be, t);
    let mut half = Vec::with_capacity(p.n / 2 + 1);
    for j in 0..=p.n / 2 {
        let u = j as f64 * p.du;
        half.push(dual_char_function_opt(be, t, u)? - atom);
    }
    let density = invert_half_cf(&half, &p);
    let values = extract_grid(&density, &p, grid.m, neg_steps);
    Ok(DensityProfile {
        h: grid.h,
        neg_steps,
        values,
        atom_zero: atom,
    })
}

fn extract_grid(circle: &[f64], p: &Plan, m: usize, neg_steps: usize) -> Vec<f64> {
    let n = p.n;
    let mut out = Vec::with_capacity(m + neg_steps + 1);
    for j in (1..=neg_steps).rev() {
        out.push(circle[n - j * p.os]);
    }
    for i in 0..=m {
        out.push(circle[i * p.os]);
    }
    out
}

/// Tabulated limiting distribution W and derivatives W^(n+1), n = 0..n_max.
#[derive(Debug, Clone)]
pub struct WFamily {
    h: f64,
    m: usize,
    neg_steps: usize,
    w: Vec<f64>,
    derivs: Vec<Vec<f64>>,
    r: f64,
    model: LevyModel,
    rule: CumulativeRule,
}

impl WFamily {
    /// Wrap an externally tabulated W (closed-form surrogates, tests).
    /// Carries no derivative tables.
    pub fn from_tabulated(h: f64, w: Vec<f64>, model: LevyModel, r: f64) -> Result<Self> {
        if !(h > 0.0) || w.len() < 2 {
            return Err(Error::argument(
                "from_tabulated: need h > 0 and at least two values",
            ));
        }
        let m = w.len() - 1;
        Ok(WFamily {
            h,
            m,
            neg_steps: 0,
            w,
            derivs: Vec::new(),
            r,
            model,
            rule: CumulativeRule::Trapezoid,
        })
    }

    /// Attach an externally computed W' table on the nonnegative grid
    /// (closed-form densities). Replaces any existing derivative tables.
    pub fn with_first_derivative(mut self, w_prime: Vec<f64>) -> Result<Self> {
        if w_prime.len() != self.m + 1 {
            return Err(Error::argument(format!(
                "with_first_derivative: expected {} values",
                self.m + 1
            )));
        }
        self.neg_steps = 0;
        self.derivs = vec![w_prime];
        Ok(self)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn rule(&self) -> CumulativeRule {
        self.rule
    }

    pub fn x_max(&self) -> f64 {
        self.h * self.m as f64
    }

    pub fn max_derivative_order(&self) -> usize {
        self.derivs.len()
    }

    /// W values on {0, h, ..., m·h}.
    pub fn w_values(&self) -> &[f64] {
        &self.w
    }

    /// Table of W^(n) for n >= 1, on the extended grid (includes neg_steps
    /// points below zero).
    pub fn deriv_values(&self, n: usize) -> Result<&[f64]> {
        if n == 0 || n > self.derivs.len() {
            return Err(Error::argument(format!(
                "deriv_values: order {n} outside 1..={}",
                self.derivs.len()
            )));
        }
        Ok(&self.derivs[n - 1])
    }

    pub fn neg_steps(&self) -> usize {
        self.neg_steps
    }

    /// W(x) with the off-grid convention W = 0 on x < 0.
    pub fn w_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let pos = x / self.h;
        let i = pos.floor() as usize;
        if i + 1 > self.m {
            return self.w[self.m];
        }
        let w = pos - i as f64;
        self.w[i] * (1.0 - w) + self.w[i + 1] * w
    }

    /// W^(n)(x) for n >= 1 by linear interpolation on the extended grid.
    pub fn deriv_at(&self, n: usize, x: f64) -> Result<f64> {
        let table = self.deriv_values(n)?;
        let pos = x / self.h + self.neg_steps as f64;
        if pos < 0.0 {
            return Ok(0.0);
        }
        let i = pos.floor() as usize;
        if i + 1 >= table.len() {
            return Ok(0.0);
        }
        let w = pos - i as f64;
        Ok(table[i] * (1.0 - w) + table[i + 1] * w)
    }

    /// W^(n)(x) with W^(0) = W.
    pub fn value_at(&self, n: usize, x: f64) -> Result<f64> {
        if n == 0 {
            Ok(self.w_at(x))
        } else {
            self.deriv_at(n, x)
        }
    }

    /// CSV table `x,W,W1,...,W{n_max+1}` over the nonnegative grid.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x");
        s.push_str(",W");
        for n in 1..=self.derivs.len() {
            s.push_str(&format!(",W{n}"));
        }
        s.push('\n');
        for i in 0..=self.m {
            let x = i as f64 * self.h;
            s.push_str(&format!("{x}"));
            s.push_str(&format!(",{}", self.w[i]));
            for d in &self.derivs {
                s.push_str(&format!(",{}", d[self.neg_steps + i]));
            }
            s.push('\n');
        }
        s
    }
}

/// Tabulate W^(n+1) for n = 0..=n_max by inverting (iu)^n e^{-φ_r(iu)}, and
/// W by cumulative integration of W'.
pub fn w_derivatives(
    be: &BackwardExponent,
    grid: &GridSpec,
    n_max: usize,
    rule: CumulativeRule,
    neg_steps: usize,
) -> Result<WFamily> {
    if be.xi() == 1 {
        return Err(Error::unsupported(
            "w_derivatives: xi = 1 drivers have no computable W here",
        ));
    }
    let nu0 = be.model().nu_total();
    if nu0.is_finite() && nu0 / be.r() <= (n_max + 1) as f64 {
        return Err(Error::unsupported(format!(
            "w_derivatives: existence requires nu(0,inf)/r > n_max+1 (= {}), got {}",
            n_max + 1,
            nu0 / be.r()
        )));
    }
    let p = plan(grid);
    // exp(-φ_r(iu)) on the nonnegative half; reused across orders.
    let mut base = Vec::with_capacity(p.n / 2 + 1);
    for j in 0..=p.n / 2 {
        let u = j as f64 * p.du;
        base.push((-be.varphi_r_complex(Complex64::new(0.0, u))?).exp());
    }
    let mut pw: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); p.n / 2 + 1];
    let mut derivs = Vec::with_capacity(n_max + 1);
    let mut w_fine: Option<Vec<f64>> = None;
    for order in 0..=n_max {
        if order > 0 {
            for (j, v) in pw.iter_mut().enumerate() {
                *v *= Complex64::new(0.0, j as f64 * p.du);
            }
        }
        let half: Vec<Complex64> = base.iter().zip(&pw).map(|(b, q)| b * q).collect();
        let circle = invert_half_cf(&half, &p);
        if order == 0 {
            w_fine = Some(circle[..=grid.m * p.os].to_vec());
        }
        derivs.push(extract_grid(&circle, &p, grid.m, neg_steps));
    }

    let w_fine = w_fine.unwrap();
    let w = match rule {
        CumulativeRule::Trapezoid => {
            let cum = quad::cumtrapz(&w_fine, p.dy);
            (0..=grid.m)
                .map(|i| cum[i * p.os].clamp(0.0, 1.0)) // W is a CDF
                .collect::<Vec<_>>()
        }
        CumulativeRule::LeftRectangle => {
            // First-order rule applied at the coarse step, matching legacy
            // reference tabulations: W(x_i) = h Σ_{j<i} W'(x_j).
            let mut acc = NeumaierSum::new();
            let mut out = Vec::with_capacity(grid.m + 1);
            out.push(0.0);
            for i in 1..=grid.m {
                acc.add(grid.h * w_fine[(i - 1) * p.os]);
                out.push(acc.value());
            }
            out
        }
    };

    Ok(WFamily {
        h: grid.h,
        m: grid.m,
        neg_steps,
        w,
        derivs,
        r: be.r(),
        model: be.model().clone(),
        rule,
    })
}

/// Tilted density W'(x; γ) = e^{φ_r(γ) - γx} W'(x; 0) on the family grid.
///
/// The prefactor sign is fixed by normalization: ∫ e^{-γx} W'(x) dx equals
/// e^{-φ_r(γ)} (the Laplace transform of W' at γ), so only e^{+φ_r(γ)}
/// makes the tilted density integrate to one.
pub fn esscher_tilt_density(wf: &WFamily, gamma: f64, varphi_r_gamma: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0) {
        return Err(Error::domain(
            "esscher_tilt_density: gamma must be positive",
        ));
    }
    let wp = wf.deriv_values(1)?;
    let pre = varphi_r_gamma.exp();
    Ok((0..wp.len())
        .map(|i| {
            let x = (i as f64 - wf.neg_steps as f64) * wf.h;
            if x < 0.0 {
                0.0
            } else {
                pre * (-gamma * x).exp() * wp[i]
            }
        })
        .collect())
}
