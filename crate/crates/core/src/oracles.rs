//! Closed-form reference solutions used as ground truth in tests and
//! exposed through the CLI for debugging: the exponential-jumps finite-time
//! survival, the Linnik/Wright family and its series expansion, and the
//! stable scaling law.

use crate::error::{Error, Result};
use crate::quad::{self, NeumaierSum};
use crate::special::{self, SeriesControl};

/// Value plus bookkeeping about how it was computed.
#[derive(Debug, Clone, Copy)]
pub struct OracleResult {
    pub value: f64,
    pub series_terms_used: usize,
    pub truncation_bound: f64,
}

/// Finite-time absolute survival for exponential jumps:
/// P_x(τ_0 > t) = e^{-ηt} (1 + (ηδ/r)(e^{rt}-1) ∫_0^x e^{-δy}
///     ₁F₁(1-η/r; 2; δ(1-e^{rt}) y) dy).
pub fn exp_case_survival(eta: f64, delta: f64, r: f64, x: f64, t: f64) -> Result<f64> {
    if !(eta > 0.0 && delta > 0.0 && r > 0.0) {
        return Err(Error::domain(
            "exp_case_survival: eta, delta, r must be positive",
        ));
    }
    if !(x > 0.0) {
        return Err(Error::domain("exp_case_survival: x must be positive"));
    }
    if !(t >= 0.0) {
        return Err(Error::domain("exp_case_survival: t must be nonnegative"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    if (eta - r).abs() < 1e-13 * r {
        // η = r makes ₁F₁(0; 2; ·) ≡ 1 and the integral elementary.
        let v = (-eta * t).exp() + (1.0 - (-eta * t).exp()) * (1.0 - (-delta * x).exp());
        return Ok(v.clamp(0.0, 1.0));
    }
    let ctl = SeriesControl::default();
    let a = 1.0 - eta / r;
    let z = delta * (1.0 - (r * t).exp());
    let integral = quad::integrate(
        |y| {
            if y <= 0.0 {
                return 0.0;
            }
            (-delta * y).exp() * special::kummer_1f1(a, 2.0, z * y, &ctl).unwrap_or(f64::NAN)
        },
        0.0,
        x,
        1e-12,
        1e-10,
    )?;
    let v = (-eta * t).exp() * (1.0 + eta * delta / r * ((r * t).exp() - 1.0) * integral);
    Ok(v.clamp(0.0, 1.0))
}

/// Density of the Wright-type family: ₖW'(x) = δ^κ x^{ακ-1} · series with
/// argument -δ x^α. For α = 1 it is the Gamma(κ, 1/δ) density.
pub fn linnik_kw_density(
    kappa: f64,
    delta: f64,
    alpha: f64,
    x: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(kappa > 0.0 && delta > 0.0) {
        return Err(Error::domain(
            "linnik_kw_density: kappa and delta must be positive",
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain("linnik_kw_density: alpha must lie in (0, 1]"));
    }
    if !(x > 0.0) {
        return Err(Error::domain("linnik_kw_density: x must be positive"));
    }
    if alpha == 1.0 {
        let lg = kappa * delta.ln() + (kappa - 1.0) * x.ln() - delta * x - special::ln_gamma(kappa);
        return Ok(lg.exp());
    }
    let series = special::wright_1psi1(kappa, alpha, -delta * x.powf(alpha), ctl)?;
    Ok(delta.powf(kappa) * x.powf(alpha * kappa - 1.0) * series)
}

/// Distribution function ₖW(z) by cumulative integration of the density.
pub fn linnik_kw_cdf(
    kappa: f64,
    delta: f64,
    alpha: f64,
    z: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if z <= 0.0 {
        return Ok(0.0);
    }
    if alpha == 1.0 {
        return special::gamma_cdf(kappa, 1.0 / delta, z);
    }
    // The Wright series carries ~1e-9 relative noise at large κ; tighter
    // quadrature targets would chase that noise forever.
    let v = quad::integrate(
        |y| {
            if y <= 0.0 {
                0.0
            } else {
                linnik_kw_density(kappa, delta, alpha, y, ctl).unwrap_or(f64::NAN)
            }
        },
        0.0,
        z,
        3e-9,
        1e-8,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// Series expansion of the finite-time survival for the Linnik driver:
/// P_x(τ_0 > t) = e^{-ηt} (1 + Σ_{n≥1} Γ(n+κ)/(Γ(κ) n!) (1-e^{-αrt})^n
///      ₙW(e^{rt} x)),   κ = η/(αr).
pub fn linnik_survival_series(
    eta: f64,
    delta: f64,
    alpha: f64,
    r: f64,
    x: f64,
    t: f64,
    n_terms: usize,
) -> Result<OracleResult> {
    if !(eta > 0.0 && delta > 0.0 && r > 0.0) {
        return Err(Error::domain(
            "linnik_survival_series: eta, delta, r must be positive",
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(
            "linnik_survival_series: alpha must lie in (0, 1]",
        ));
    }
    if !(x > 0.0 && t >= 0.0) {
        return Err(Error::domain("linnik_survival_series: need x > 0, t >= 0"));
    }
    if t == 0.0 {
        return Ok(OracleResult {
            value: 1.0,
            series_terms_used: 0,
            truncation_bound: 0.0,
        });
    }
    let kappa = eta / (alpha * r);
    let w = 1.0 - (-alpha * r * t).exp();
    let z = (r * t).exp() * x;
    let ctl = SeriesControl::default();
    let lg_kappa = special::ln_gamma(kappa);
    let mut acc = NeumaierSum::new();
    let mut used = 0;
    let mut coef_tail = 0.0;
    for n in 1..=n_terms.min(40) {
        let nf = n as f64;
        let coef = (special::ln_gamma(kappa + nf) - lg_kappa - special::ln_gamma(nf + 1.0)
            + nf * w.ln())
        .exp();
        let cdf = linnik_kw_cdf(nf, delta, alpha, z, &ctl)?;
        acc.add(coef * cdf);
        used = n;
        // Geometric bound on the coefficient tail; ₙW <= 1 bounds the rest.
        let ratio = w * (nf + 1.0 + kappa) / (nf + 2.0);
        if ratio < 1.0 {
            coef_tail = coef * w * (nf + kappa) / (nf + 1.0) / (1.0 - ratio);
            let damp = (-eta * t).exp();
            if coef_tail * damp < 1e-10 {
                break;
            }
        }
    }
    let damp = (-eta * t).exp();
    if !(coef_tail * damp < 1e-6) {
        return Err(Error::accuracy(
            format!("linnik_survival_series: tail bound {coef_tail:.3e} not met at {used} terms"),
            Some((damp * (1.0 + acc.value())).clamp(0.0, 1.0)),
        ));
    }
    Ok(OracleResult {
        value: (damp * (1.0 + acc.value())).clamp(0.0, 1.0),
        series_terms_used: used,
        truncation_bound: coef_tail * damp,
    })
}

/// Stable scaling law: P_x(τ_0 > t) = P_α(x v(t)^{-1/α}),
/// v(t) = (1 - e^{-αrt})/(αr); t = ∞ gives P_α((αr)^{1/α} x).
pub fn stable_survival(alpha: f64, r: f64, x: f64, t: Option<f64>) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("stable_survival: alpha must lie in (0, 1)"));
    }
    if !(r > 0.0) {
        return Err(Error::domain("stable_survival: r must be positive"));
    }
    if !(x > 0.0) {
        return Err(Error::domain("stable_survival: x must be positive"));
    }
    let scale = match t {
        Some(t) if t > 0.0 => {
            let v = (1.0 - (-alpha * r * t).exp()) / (alpha * r);
            v.powf(-1.0 / alpha)
        }
        Some(_) => return Ok(1.0), // t = 0: survival certain for x > 0
        None => (alpha * r).powf(1.0 / alpha),
    };
    special::stable_cdf(alpha, x * scale)
}
