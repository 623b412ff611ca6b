//! The backward Laplace exponent φ_r(β) = (1/r) ∫_0^β φ(u)/u du, on real and
//! complex arguments, together with its Taylor coefficients at 0 and the
//! Esscher shift identity φ_r(β+γ) - φ_r(γ).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::levy::{LevyModel, NuMoment};
use crate::quad;
use crate::special;

/// Evaluator of φ_r for a fixed model and interest rate.
#[derive(Debug, Clone)]
pub struct BackwardExponent {
    model: LevyModel,
    r: f64,
    xi: u8,
}

impl BackwardExponent {
    pub fn new(model: LevyModel, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::spec("BackwardExponent: r must be strictly positive"));
        }
        let xi = if model.log_moment_finite() { 0 } else { 1 };
        Ok(BackwardExponent { model, r, xi })
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Indicator ξ = 1 iff ∫_1^∞ log(y) ν(dy) = ∞.
    pub fn xi(&self) -> u8 {
        self.xi
    }

    fn require_xi_zero(&self) -> Result<()> {
        if self.xi == 1 {
            return Err(Error::unsupported(
                "phi_r diverges at 0 for infinite log-moment drivers (xi = 1)",
            ));
        }
        Ok(())
    }

    /// φ_r(β) for β ≥ 0, by closed form where available.
    pub fn varphi_r(&self, beta: f64) -> Result<f64> {
        if beta < 0.0 {
            return Err(Error::domain("varphi_r: beta must be nonnegative"));
        }
        self.require_xi_zero()?;
        if beta == 0.0 {
            return Ok(0.0);
        }
        self.varphi_r_model(&self.model, beta)
    }

    fn varphi_r_model(&self, model: &LevyModel, beta: f64) -> Result<f64> {
        let r = self.r;
        match model {
            LevyModel::ExponentialJumps { eta, delta } => Ok(eta / r * (beta / delta).ln_1p()),
            LevyModel::Linnik { eta, delta, alpha } => {
                Ok(eta / (r * alpha) * (beta.powf(*alpha) / delta).ln_1p())
            }
            LevyModel::Stable { alpha } => {
                Ok(beta.powf(*alpha) / ((PI * alpha / 2.0).cos() * alpha * r))
            }
            LevyModel::TruncatedStable { c, a, alpha } => {
                let lower =
                    special::gamma_fn(1.0 - alpha) * special::gamma_p(1.0 - alpha, beta * a)?;
                let one_m_exp = -(-beta * a).exp_m1();
                Ok(c / (r * alpha) * (beta.powf(*alpha) * lower - a.powf(-alpha) * one_m_exp))
            }
            LevyModel::Esscher { base, gamma } => {
                Ok(self.varphi_r_model(base, beta + gamma)? - self.varphi_r_model(base, *gamma)?)
            }
            LevyModel::Custom(_) => self.varphi_r_quadrature(beta),
        }
    }

    /// Quadrature fallback for φ_r: a two-term series (or power-law model)
    /// on [0, ε] removes the 0/0 corner, adaptive quadrature does the rest.
    pub fn varphi_r_quadrature(&self, beta: f64) -> Result<f64> {
        if beta < 0.0 {
            return Err(Error::domain("varphi_r: beta must be nonnegative"));
        }
        self.require_xi_zero()?;
        if beta == 0.0 {
            return Ok(0.0);
        }
        let eps = 1e-6_f64.min(0.5 * beta);
        let model = self.model.clone();
        let integrand = move |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                model.phi(u).map(|p| p / u).unwrap_or(f64::NAN)
            }
        };
        // Two-term series head when the first moments exist; otherwise the
        // globally adaptive rule resolves the integrable u^{α-1} corner
        // directly (its nodes never touch u = 0).
        let head = match (self.model.nu_moment(1), self.model.nu_moment(2)) {
            (Ok(NuMoment::Finite(m1)), Ok(NuMoment::Finite(m2))) => {
                m1 * eps - 0.25 * m2 * eps * eps
            }
            _ => quad::integrate(&integrand, 0.0, eps, 1e-13, 1e-11)?,
        };
        let body = quad::integrate(&integrand, eps, beta, 1e-13, 1e-11)?;
        Ok((head + body) / self.r)
    }

    /// φ(z) on the closed right half-plane, principal branch.
    pub fn phi_complex(&self, z: Complex64) -> Result<Complex64> {
        Self::phi_complex_model(&self.model, z)
    }

    fn phi_complex_model(model: &LevyModel, z: Complex64) -> Result<Complex64> {
        if z.re < 0.0 {
            return Err(Error::domain("phi_complex: Re(z) must be nonnegative"));
        }
        if z.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        match model {
            LevyModel::ExponentialJumps { eta, delta } => Ok(*eta * z / (z + *delta)),
            LevyModel::Linnik { eta, delta, alpha } => {
                let za = z.powf(*alpha);
                Ok(*eta * za / (za + *delta))
            }
            LevyModel::Stable { alpha } => Ok(z.powf(*alpha) / (PI * alpha / 2.0).cos()),
            LevyModel::TruncatedStable { c, a, alpha } => {
                let lower = special::lower_gamma_complex(1.0 - alpha, z * *a)?;
                Ok(*c * z.powf(*alpha) * lower)
            }
            LevyModel::Esscher { base, gamma } => {
                let shifted = Self::phi_complex_model(base, z + *gamma)?;
                Ok(z / (z + *gamma) * shifted)
            }
            LevyModel::Custom(_) => Err(Error::unsupported(
                "phi_complex: custom models support real arguments only",
            )),
        }
    }

    /// φ_r(z) = (1/r) ∫_0^z φ(u)/u du along the straight segment, Re(z) ≥ 0.
    pub fn varphi_r_complex(&self, z: Complex64) -> Result<Complex64> {
        if z.re < 0.0 {
            return Err(Error::domain("varphi_r_complex: Re(z) must be nonnegative"));
        }
        self.require_xi_zero()?;
        if z.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.varphi_r_complex_model(&self.model, z)
    }

    fn varphi_r_complex_model(&self, model: &LevyModel, z: Complex64) -> Result<Complex64> {
        let r = self.r;
        match model {
            LevyModel::ExponentialJumps { eta, delta } => Ok((1.0 + z / *delta).ln() * (*eta / r)),
            LevyModel::Linnik { eta, delta, alpha } => {
                Ok((1.0 + z.powf(*alpha) / *delta).ln() * (*eta / (r * alpha)))
            }
            LevyModel::Stable { alpha } => {
                Ok(z.powf(*alpha) / ((PI * alpha / 2.0).cos() * alpha * r))
            }
            LevyModel::TruncatedStable { c, a, alpha } => {
                let lower = special::lower_gamma_complex(1.0 - alpha, z * *a)?;
                let one_m_exp = -(-z * *a).exp_m1_c();
                Ok((z.powf(*alpha) * lower - a.powf(-alpha) * one_m_exp) * (*c / (r * alpha)))
            }
            LevyModel::Esscher { base, gamma } => {
                let at = self.varphi_r_complex_model(base, z + *gamma)?;
                let ofs = self.varphi_r_model(base, *gamma)?;
                Ok(at - ofs)
            }
            LevyModel::Custom(_) => Err(Error::unsupported(
                "varphi_r_complex: custom models support real arguments only",
            )),
        }
    }

    /// Straight-segment quadrature of (1/r) ∫_0^z φ(u)/u du; independent
    /// cross-check for the closed forms.
    pub fn varphi_r_complex_segment(&self, z: Complex64) -> Result<Complex64> {
        if z.re < 0.0 {
            return Err(Error::domain("varphi_r_complex: Re(z) must be nonnegative"));
        }
        self.require_xi_zero()?;
        if z.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // u = z t on t ∈ (0, 1]: integral = (z/r) ∫_0^1 φ(zt)/(zt) dt.
        // Gauss-Kronrod nodes are interior, so the t -> 0 corner (where
        // φ(zt)/(zt) is an integrable power) is never evaluated exactly.
        let v = quad::integrate_complex(
            |t| {
                if t <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let u = z * t;
                match Self::phi_complex_model(&self.model, u) {
                    Ok(p) => p / u,
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                }
            },
            0.0,
            1.0,
            1e-11,
            1e-9,
        )?;
        Ok(v * z / self.r)
    }

    /// Re(φ_r(iu)) = (1/r) ∫_0^∞ (1 - cos(ux)) ν(x,∞)/x dx: the independent
    /// real-part route for purely imaginary arguments.
    pub fn varphi_r_imag_real_part(&self, u: f64) -> Result<f64> {
        self.require_xi_zero()?;
        if u == 0.0 {
            return Ok(0.0);
        }
        let u = u.abs();
        let model = self.model.clone();
        let f = move |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let w = u * x;
            // 1 - cos(w) evaluated without cancellation for small w.
            let omc = 2.0 * (0.5 * w).sin().powi(2);
            omc * model.tail_unchecked(x) / x
        };
        let head = quad::integrate(&f, 0.0, 1.0_f64.max(4.0 * PI / u), 1e-12, 1e-10)?;
        let tail = quad::integrate_to_inf(&f, 1.0_f64.max(4.0 * PI / u), 1e-12, 1e-10)?;
        Ok((head + tail) / self.r)
    }

    /// Taylor coefficients c_1..c_n of φ_r at 0:
    /// c_k = (-1)^{k+1} m_k / (r k k!), requiring every moment to be finite.
    pub fn taylor_coeffs(&self, n_max: usize) -> Result<Vec<f64>> {
        if n_max == 0 {
            return Err(Error::argument("taylor_coeffs: n_max must be >= 1"));
        }
        let mut out = Vec::with_capacity(n_max);
        let mut fact = 1.0f64;
        for k in 1..=n_max {
            fact *= k as f64;
            let mk = match self.model.nu_moment(k as u32)? {
                NuMoment::Finite(v) => v,
                NuMoment::Infinite => {
                    return Err(Error::unsupported(format!(
                        "taylor_coeffs: moment m_{k} of the Levy measure is infinite"
                    )))
                }
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out.push(sign * mk / (self.r * k as f64 * fact));
        }
        Ok(out)
    }

    /// φ_r(β+γ) - φ_r(γ); equals φ_r of the γ-tilted model at β.
    pub fn esscher_shift(&self, gamma: f64, beta: f64) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(Error::domain("esscher_shift: gamma must be positive"));
        }
        if beta < 0.0 {
            return Err(Error::domain("esscher_shift: beta must be nonnegative"));
        }
        Ok(self.varphi_r(beta + gamma)? - self.varphi_r(gamma)?)
    }
}

trait ExpM1C {
    fn exp_m1_c(self) -> Complex64;
}

impl ExpM1C for Complex64 {
    /// e^z - 1 with care near 0.
    fn exp_m1_c(self) -> Complex64 {
        if self.norm() < 1e-4 {
            // Four terms give ~1e-18 relative error at |z| = 1e-4.
            self * (1.0 + self * (0.5 + self * (1.0 / 6.0 + self * (1.0 / 24.0))))
        } else {
            self.exp() - 1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn be(model: LevyModel, r: f64) -> BackwardExponent {
        BackwardExponent::new(model, r).unwrap()
    }

    #[test]
    fn exponential_closed_form() {
        // η/r = 1: φ_r(1) = log 2.
        let b = be(LevyModel::exponential_jumps(0.2, 1.0).unwrap(), 0.2);
        assert_abs_diff_eq!(b.varphi_r(1.0).unwrap(), 2.0f64.ln(), epsilon = 1e-14);
        assert_eq!(b.varphi_r(0.0).unwrap(), 0.0);
        assert!(b.varphi_r(-1.0).is_err());
    }

    #[test]
    fn truncated_stable_vs_quadrature() {
        let b = be(LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(), 0.2);
        for &beta in &[0.3, 1.0, 4.0, 20.0] {
            let closed = b.varphi_r(beta).unwrap();
            let quadrature = b.varphi_r_quadrature(beta).unwrap();
            assert!(
                (closed - quadrature).abs() <= 1e-8 * closed.max(1.0),
                "beta={beta}: {closed} vs {quadrature}"
            );
        }
    }

    #[test]
    fn all_families_quadrature_consistency() {
        for model in [
            LevyModel::exponential_jumps(1.0, 2.0).unwrap(),
            LevyModel::linnik(1.0, 1.0, 0.5).unwrap(),
            LevyModel::stable(0.5).unwrap(),
            LevyModel::truncated_stable(1.0, 1.0, 0.5)
                .unwrap()
                .esscher(0.4)
                .unwrap(),
        ] {
            let b = be(model, 0.5);
            for &beta in &[0.5, 2.0] {
                let closed = b.varphi_r(beta).unwrap();
                let q = b.varphi_r_quadrature(beta).unwrap();
                assert!((closed - q).abs() <= 1e-8 * closed.abs().max(1.0), "{b:?}");
            }
        }
    }

    #[test]
    fn xi_one_is_rejected() {
        let heavy = LevyModel::custom(
            |x| 1.0f64.min(1.0 / x.max(std::f64::consts::E).ln()),
            false,
            1.0,
            "log-tail",
        );
        let b = be(heavy, 0.2);
        assert_eq!(b.xi(), 1);
        assert!(matches!(b.varphi_r(1.0), Err(Error::Unsupported(_))));
        assert!(b.varphi_r_complex(Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn taylor_coeffs_exponential() {
        // η = δ = 1, r = 1: φ_r(v) = log(1+v), c_k = (-1)^{k+1}/k.
        let b = be(LevyModel::exponential_jumps(1.0, 1.0).unwrap(), 1.0);
        let c = b.taylor_coeffs(8).unwrap();
        for (i, ck) in c.iter().enumerate() {
            let k = i + 1;
            let expect = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            assert_abs_diff_eq!(*ck, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn taylor_coeffs_truncated_stable_first() {
        // c₁ = m₁/(r·1·1) with m₁ = 2 and r = 0.2.
        let b = be(LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(), 0.2);
        let c = b.taylor_coeffs(1).unwrap();
        assert_abs_diff_eq!(c[0], 10.0, epsilon = 1e-12);
    }

    #[test]
    fn taylor_rejects_infinite_moments() {
        let b = be(LevyModel::stable(0.5).unwrap(), 1.0);
        assert!(matches!(b.taylor_coeffs(3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn taylor_partial_sums_converge_to_varphi() {
        for (model, r, radius) in [
            (LevyModel::exponential_jumps(1.0, 1.0).unwrap(), 1.0, 1.0),
            (
                LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(),
                0.2,
                4.0,
            ),
        ] {
            let b = be(model, r);
            let coeffs = b.taylor_coeffs(40).unwrap();
            for &beta in &[0.1 * radius, 0.25 * radius, 0.5 * radius] {
                let mut acc = quad::NeumaierSum::new();
                let mut p = 1.0;
                for ck in &coeffs {
                    p *= beta;
                    acc.add(ck * p);
                }
                let truth = b.varphi_r(beta).unwrap();
                assert!(
                    (acc.value() - truth).abs() <= 1e-8 * truth.abs().max(1.0),
                    "beta={beta}: {} vs {truth}",
                    acc.value()
                );
            }
        }
    }

    #[test]
    fn esscher_shift_examples() {
        let b = be(LevyModel::exponential_jumps(1.0, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            b.esscher_shift(1.0, 1.0).unwrap(),
            1.5f64.ln(),
            epsilon = 1e-14
        );
        assert_eq!(b.esscher_shift(1.0, 0.0).unwrap(), 0.0);

        // Stable: φ_r(9) - φ_r(4) = (3 - 2)/(cos(π/4)·0.5).
        let s = be(LevyModel::stable(0.5).unwrap(), 1.0);
        let expect = 1.0 / ((PI / 4.0).cos() * 0.5);
        assert_abs_diff_eq!(s.esscher_shift(4.0, 5.0).unwrap(), expect, epsilon = 1e-12);
    }

    #[test]
    fn esscher_shift_matches_tilted_model() {
        let grid_g = [0.3, 1.0, 2.5];
        let grid_b = [0.0, 0.4, 1.7, 6.0];
        for model in [
            LevyModel::exponential_jumps(1.0, 1.0).unwrap(),
            LevyModel::linnik(0.7, 1.3, 0.6).unwrap(),
            LevyModel::stable(0.5).unwrap(),
            LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(),
        ] {
            let b = be(model.clone(), 0.4);
            for &g in &grid_g {
                let tilted = be(model.clone().esscher(g).unwrap(), 0.4);
                for &beta in &grid_b {
                    let lhs = b.esscher_shift(g, beta).unwrap_or(0.0);
                    let rhs = tilted.varphi_r(beta).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-10, "{model:?} g={g} beta={beta}");
                }
            }
        }
    }

    #[test]
    fn complex_agrees_with_real_axis() {
        for model in [
            LevyModel::exponential_jumps(1.0, 1.0).unwrap(),
            LevyModel::linnik(0.7, 1.3, 0.6).unwrap(),
            LevyModel::stable(0.5).unwrap(),
            LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(),
        ] {
            let b = be(model, 0.3);
            for &beta in &[0.5, 3.0, 30.0] {
                let re = b.varphi_r(beta).unwrap();
                let z = b.varphi_r_complex(Complex64::new(beta, 0.0)).unwrap();
                assert!(
                    (z.re - re).abs() <= 1e-12 * re.max(1.0),
                    "{b:?} beta={beta}"
                );
                assert!(z.im.abs() <= 1e-12 * re.max(1.0));
            }
        }
    }

    #[test]
    fn complex_closed_forms_vs_segment_quadrature() {
        // Stable at z = i: principal branch continuation of the closed form.
        let s = be(LevyModel::stable(0.5).unwrap(), 1.0);
        let z = Complex64::new(0.0, 1.0);
        let closed = s.varphi_r_complex(z).unwrap();
        let expect = Complex64::new(0.0, 1.0).powf(0.5) / ((PI / 4.0).cos() * 0.5);
        assert!((closed - expect).norm() < 1e-14);
        let seg = s.varphi_r_complex_segment(z).unwrap();
        assert!((closed - seg).norm() < 1e-8, "{closed} vs {seg}");

        let ts = be(LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(), 0.2);
        for &u in &[0.7, 5.0, 40.0] {
            let z = Complex64::new(0.0, u);
            let closed = ts.varphi_r_complex(z).unwrap();
            let seg = ts.varphi_r_complex_segment(z).unwrap();
            assert!(
                (closed - seg).norm() < 1e-7 * closed.norm().max(1.0),
                "u={u}: {closed} vs {seg}"
            );
        }
    }

    #[test]
    fn imaginary_axis_real_part_routes_agree() {
        let ts = be(LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(), 0.2);
        let closed = ts.varphi_r_complex(Complex64::new(0.0, 5.0)).unwrap();
        let cosine = ts.varphi_r_imag_real_part(5.0).unwrap();
        assert!(
            (closed.re - cosine).abs() < 1e-6,
            "{} vs {cosine}",
            closed.re
        );

        // Exponential family has a closed real part: (η/2r) ln(1 + u²/δ²).
        let ej = be(LevyModel::exponential_jumps(1.0, 2.0).unwrap(), 0.5);
        let u = 3.0f64;
        let expect = 1.0 / (2.0 * 0.5) * (1.0 + u * u / 4.0).ln();
        assert_abs_diff_eq!(
            ej.varphi_r_imag_real_part(u).unwrap(),
            expect,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            ej.varphi_r_complex(Complex64::new(0.0, u)).unwrap().re,
            expect,
            epsilon = 1e-12
        );
    }

    #[test]
    fn imaginary_axis_symmetry() {
        let ts = be(LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap(), 0.2);
        for &u in &[0.3, 1.0, 8.0] {
            let plus = ts.varphi_r_complex(Complex64::new(0.0, u)).unwrap();
            let minus = ts.varphi_r_complex(Complex64::new(0.0, -u)).unwrap();
            assert!((plus.re - minus.re).abs() < 1e-13 * plus.re.abs().max(1.0));
            assert!((plus.im + minus.im).abs() < 1e-13 * plus.im.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_left_half_plane() {
        let b = be(LevyModel::stable(0.5).unwrap(), 1.0);
        assert!(b.varphi_r_complex(Complex64::new(-0.1, 1.0)).is_err());
    }
}
