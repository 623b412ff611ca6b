//! Driving subordinator models: parametric Lévy-tail families, the Laplace
//! exponent φ, raw moments of ν, the log-moment test and the Esscher-type
//! tilt T_γ.
//!
//! Downstream modules never see the raw measure ν(dy); a model is fully
//! described by its tail `ν(x, ∞)`, its exponent `φ`, its moments and the
//! log-moment indicator.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::quad;
use crate::special::{self, SeriesControl};

/// Raw moment of the Lévy measure: `m_k = ∫ y^k ν(dy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuMoment {
    Finite(f64),
    Infinite,
}

impl NuMoment {
    pub fn finite(self) -> Option<f64> {
        match self {
            NuMoment::Finite(v) => Some(v),
            NuMoment::Infinite => None,
        }
    }
}

type TailFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A driftless subordinator, described through its Lévy tail.
///
/// `TruncatedStable { c, a, alpha }` has tail `c x^{-α}` on `(0, a]` and no
/// jumps above `a`; the bounded support puts an atom of mass `c a^{-α}` at
/// the maximal jump size `a`.
#[derive(Clone)]
pub enum LevyModel {
    ExponentialJumps { eta: f64, delta: f64 },
    Linnik { eta: f64, delta: f64, alpha: f64 },
    Stable { alpha: f64 },
    TruncatedStable { c: f64, a: f64, alpha: f64 },
    Esscher { base: Box<LevyModel>, gamma: f64 },
    Custom(CustomModel),
}

/// User-supplied model behind the same interface. Closed-form fast paths do
/// not exist, so every evaluation falls back to quadrature on the tail.
#[derive(Clone)]
pub struct CustomModel {
    pub tail: TailFn,
    pub log_moment_finite: bool,
    pub nu_total: f64,
    pub label: String,
}

impl fmt::Debug for LevyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevyModel::ExponentialJumps { eta, delta } => {
                write!(f, "ExponentialJumps {{ eta: {eta}, delta: {delta} }}")
            }
            LevyModel::Linnik { eta, delta, alpha } => {
                write!(f, "Linnik {{ eta: {eta}, delta: {delta}, alpha: {alpha} }}")
            }
            LevyModel::Stable { alpha } => write!(f, "Stable {{ alpha: {alpha} }}"),
            LevyModel::TruncatedStable { c, a, alpha } => {
                write!(f, "TruncatedStable {{ c: {c}, a: {a}, alpha: {alpha} }}")
            }
            LevyModel::Esscher { base, gamma } => {
                write!(f, "Esscher {{ base: {base:?}, gamma: {gamma} }}")
            }
            LevyModel::Custom(cm) => write!(f, "Custom {{ label: {:?} }}", cm.label),
        }
    }
}

impl LevyModel {
    pub fn exponential_jumps(eta: f64, delta: f64) -> Result<Self> {
        if !(eta > 0.0 && delta > 0.0) {
            return Err(Error::spec(
                "exponential_jumps: eta and delta must be positive",
            ));
        }
        Ok(LevyModel::ExponentialJumps { eta, delta })
    }

    pub fn linnik(eta: f64, delta: f64, alpha: f64) -> Result<Self> {
        if !(eta > 0.0 && delta > 0.0) {
            return Err(Error::spec("linnik: eta and delta must be positive"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::spec("linnik: alpha must lie in (0, 1]"));
        }
        Ok(LevyModel::Linnik { eta, delta, alpha })
    }

    pub fn stable(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::spec("stable: alpha must lie in (0, 1)"));
        }
        Ok(LevyModel::Stable { alpha })
    }

    pub fn truncated_stable(c: f64, a: f64, alpha: f64) -> Result<Self> {
        if !(c > 0.0 && a > 0.0) {
            return Err(Error::spec("truncated_stable: c and a must be positive"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::spec("truncated_stable: alpha must lie in (0, 1)"));
        }
        Ok(LevyModel::TruncatedStable { c, a, alpha })
    }

    /// Esscher tilt: the tail becomes `e^{-γx} ν(x, ∞)`.
    pub fn esscher(self, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::spec("esscher: gamma must be nonnegative"));
        }
        Ok(LevyModel::Esscher {
            base: Box::new(self),
            gamma,
        })
    }

    pub fn custom(
        tail: impl Fn(f64) -> f64 + Send + Sync + 'static,
        log_moment_finite: bool,
        nu_total: f64,
        label: impl Into<String>,
    ) -> Self {
        LevyModel::Custom(CustomModel {
            tail: Arc::new(tail),
            log_moment_finite,
            nu_total,
            label: label.into(),
        })
    }

    pub fn family_name(&self) -> String {
        match self {
            LevyModel::ExponentialJumps { .. } => "exponential".into(),
            LevyModel::Linnik { .. } => "linnik".into(),
            LevyModel::Stable { .. } => "stable".into(),
            LevyModel::TruncatedStable { .. } => "truncated_stable".into(),
            LevyModel::Esscher { base, .. } => format!("esscher({})", base.family_name()),
            LevyModel::Custom(cm) => format!("custom({})", cm.label),
        }
    }

    /// Lévy tail ν(x, ∞) for x > 0.
    pub fn tail(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain("tail: x must be positive"));
        }
        Ok(self.tail_unchecked(x))
    }

    pub(crate) fn tail_unchecked(&self, x: f64) -> f64 {
        match self {
            LevyModel::ExponentialJumps { eta, delta } => eta * (-delta * x).exp(),
            LevyModel::Linnik { eta, delta, alpha } => {
                if *alpha == 1.0 {
                    eta * (-delta * x).exp()
                } else {
                    let ctl = SeriesControl::default();
                    eta * special::mittag_leffler(*alpha, -delta * x.powf(*alpha), &ctl)
                        .unwrap_or_else(|e| match e {
                            Error::Accuracy {
                                partial: Some(p), ..
                            } => p,
                            _ => f64::NAN,
                        })
                }
            }
            LevyModel::Stable { alpha } => stable_tail_const(*alpha) * x.powf(-alpha),
            LevyModel::TruncatedStable { c, a, alpha } => {
                if x <= *a {
                    c * x.powf(-alpha)
                } else {
                    0.0
                }
            }
            LevyModel::Esscher { base, gamma } => (-gamma * x).exp() * base.tail_unchecked(x),
            LevyModel::Custom(cm) => (cm.tail)(x),
        }
    }

    /// Laplace exponent φ(β) = ∫ (1 - e^{-βy}) ν(dy), β ≥ 0.
    pub fn phi(&self, beta: f64) -> Result<f64> {
        if beta < 0.0 {
            return Err(Error::domain("phi: beta must be nonnegative"));
        }
        if beta == 0.0 {
            return Ok(0.0);
        }
        match self {
            LevyModel::ExponentialJumps { eta, delta } => Ok(eta * beta / (beta + delta)),
            LevyModel::Linnik { eta, delta, alpha } => {
                let ba = beta.powf(*alpha);
                Ok(eta * ba / (delta + ba))
            }
            LevyModel::Stable { alpha } => Ok(beta.powf(*alpha) / (PI * alpha / 2.0).cos()),
            LevyModel::TruncatedStable { c, a, alpha } => {
                // φ(β) = C β^α γ(1-α, βA), by parts from the tail.
                let lower =
                    special::gamma_fn(1.0 - alpha) * special::gamma_p(1.0 - alpha, beta * a)?;
                Ok(c * beta.powf(*alpha) * lower)
            }
            LevyModel::Esscher { base, gamma } => {
                Ok(beta / (beta + gamma) * base.phi(beta + gamma)?)
            }
            LevyModel::Custom(_) => self.phi_by_tail_quadrature(beta),
        }
    }

    /// φ(β) = β ∫_0^∞ e^{-βx} ν(x, ∞) dx, evaluated by adaptive quadrature.
    /// Implementation path for custom models and the numeric cross-check for
    /// the closed forms.
    pub fn phi_by_tail_quadrature(&self, beta: f64) -> Result<f64> {
        if beta < 0.0 {
            return Err(Error::domain("phi: beta must be nonnegative"));
        }
        if beta == 0.0 {
            return Ok(0.0);
        }
        let f = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (-beta * x).exp() * self.tail_unchecked(x)
            }
        };
        let head = quad::integrate(&f, 0.0, 1.0, 1e-13, 1e-11)?;
        let tail = quad::integrate_to_inf(&f, 1.0, 1e-13, 1e-11)?;
        Ok(beta * (head + tail))
    }

    /// Whether ∫_1^∞ log(y) ν(dy) is finite.
    pub fn log_moment_finite(&self) -> bool {
        match self {
            LevyModel::ExponentialJumps { .. }
            | LevyModel::Linnik { .. }
            | LevyModel::Stable { .. }
            | LevyModel::TruncatedStable { .. } => true,
            // Tilting only lightens the tail.
            LevyModel::Esscher { base, gamma } => *gamma > 0.0 || base.log_moment_finite(),
            LevyModel::Custom(cm) => cm.log_moment_finite,
        }
    }

    /// Total mass ν(0, ∞); infinite for infinite-activity drivers.
    pub fn nu_total(&self) -> f64 {
        match self {
            LevyModel::ExponentialJumps { eta, .. } => *eta,
            LevyModel::Linnik { eta, .. } => *eta,
            LevyModel::Stable { .. } | LevyModel::TruncatedStable { .. } => f64::INFINITY,
            LevyModel::Esscher { base, .. } => base.nu_total(),
            LevyModel::Custom(cm) => cm.nu_total,
        }
    }

    /// The stable-like index of the tail near the origin, when there is one.
    pub fn stable_index(&self) -> Option<f64> {
        match self {
            LevyModel::Stable { alpha } => Some(*alpha),
            LevyModel::TruncatedStable { alpha, .. } => Some(*alpha),
            LevyModel::Esscher { base, .. } => base.stable_index(),
            _ => None,
        }
    }

    /// Raw moment m_k = ∫ y^k ν(dy) for k ≥ 1.
    pub fn nu_moment(&self, k: u32) -> Result<NuMoment> {
        if k == 0 {
            return Err(Error::domain("nu_moment: k must be >= 1"));
        }
        let kf = k as f64;
        match self {
            LevyModel::ExponentialJumps { eta, delta } => Ok(NuMoment::Finite(
                eta * (special::ln_gamma(kf + 1.0) - kf * delta.ln()).exp(),
            )),
            LevyModel::Linnik { eta, delta, alpha } => {
                if *alpha == 1.0 {
                    Ok(NuMoment::Finite(
                        eta * (special::ln_gamma(kf + 1.0) - kf * delta.ln()).exp(),
                    ))
                } else {
                    Ok(NuMoment::Infinite)
                }
            }
            LevyModel::Stable { .. } => Ok(NuMoment::Infinite),
            LevyModel::TruncatedStable { c, a, alpha } => {
                // Continuous part C α A^{k-α}/(k-α) plus the boundary atom C A^{k-α}.
                Ok(NuMoment::Finite(c * a.powf(kf - alpha) * kf / (kf - alpha)))
            }
            LevyModel::Esscher { base, gamma } => {
                if *gamma == 0.0 {
                    return base.nu_moment(k);
                }
                esscher_moment(base, *gamma, k)
            }
            LevyModel::Custom(_) => self.moment_by_quadrature(k, 0.0),
        }
    }

    /// m_k of the γ-tilted model by quadrature on the tail:
    /// m_k = k ∫_0^∞ x^{k-1} e^{-γx} ν(x, ∞) dx.
    fn moment_by_quadrature(&self, k: u32, gamma: f64) -> Result<NuMoment> {
        let kf = k as f64;
        let f = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                x.powf(kf - 1.0) * (-gamma * x).exp() * self.tail_unchecked(x)
            }
        };
        let head = quad::integrate(&f, 0.0, 1.0, 1e-12, 1e-10)?;
        // Doubling panels; steadily growing contributions signal divergence.
        let mut left = 1.0;
        let mut width = 1.0;
        let mut total = head;
        let mut prev = f64::INFINITY;
        let mut growing = 0;
        for _ in 0..60 {
            let piece = quad::integrate(&f, left, left + width, 1e-12, 1e-10)?;
            total += piece;
            if piece > prev && piece > 1e-12 {
                growing += 1;
                if growing >= 3 {
                    return Ok(NuMoment::Infinite);
                }
            } else {
                growing = 0;
            }
            if piece.abs() < 1e-12 * total.abs().max(1.0) {
                return Ok(NuMoment::Finite(kf * total));
            }
            prev = piece;
            left += width;
            width *= 2.0;
        }
        Err(Error::accuracy(
            "nu_moment: quadrature did not settle",
            Some(kf * total),
        ))
    }
}

fn stable_tail_const(alpha: f64) -> f64 {
    // tail(x) = x^{-α} / (Γ(1-α) cos(πα/2)) reproduces φ(β) = β^α/cos(πα/2).
    1.0 / (special::gamma_fn(1.0 - alpha) * (PI * alpha / 2.0).cos())
}

fn esscher_moment(base: &LevyModel, gamma: f64, k: u32) -> Result<NuMoment> {
    let kf = k as f64;
    match base {
        LevyModel::ExponentialJumps { eta, delta } => Ok(NuMoment::Finite(
            eta * (special::ln_gamma(kf + 1.0) - kf * (delta + gamma).ln()).exp(),
        )),
        LevyModel::Linnik { eta, delta, alpha } if *alpha == 1.0 => Ok(NuMoment::Finite(
            eta * (special::ln_gamma(kf + 1.0) - kf * (delta + gamma).ln()).exp(),
        )),
        LevyModel::Stable { alpha } => {
            // k C_st Γ(k-α) / γ^{k-α}.
            let c = stable_tail_const(*alpha);
            Ok(NuMoment::Finite(
                kf * c * (special::ln_gamma(kf - alpha) - (kf - alpha) * gamma.ln()).exp(),
            ))
        }
        LevyModel::TruncatedStable { c, a, alpha } => {
            // m_k = k ∫_0^A x^{k-1-α} e^{-γx} C dx = k C γ^{α-k} γ(k-α, γA);
            // the tail integral already carries the boundary atom at A.
            let lower = special::gamma_fn(kf - alpha) * special::gamma_p(kf - alpha, gamma * a)?;
            Ok(NuMoment::Finite(kf * c * gamma.powf(alpha - kf) * lower))
        }
        LevyModel::Esscher {
            base: inner,
            gamma: g0,
        } => esscher_moment(inner, gamma + g0, k),
        _ => base_tilted_moment_by_quadrature(base, gamma, k),
    }
}

fn base_tilted_moment_by_quadrature(base: &LevyModel, gamma: f64, k: u32) -> Result<NuMoment> {
    let model = LevyModel::Esscher {
        base: Box::new(base.clone()),
        gamma,
    };
    model.moment_by_quadrature(k, 0.0)
}

/// Interest and premium rates of the risk process dX = (rX + c) dt - dZ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    r: f64,
    c: f64,
}

impl ProcessParams {
    pub fn new(r: f64, c: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::spec(
                "ProcessParams: interest rate r must be strictly positive",
            ));
        }
        if !c.is_finite() {
            return Err(Error::spec("ProcessParams: premium rate c must be finite"));
        }
        Ok(ProcessParams { r, c })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Effective initial level for the c = 0 reduction: x + c/r.
    pub fn x_eff(&self, x: f64) -> f64 {
        x + self.c / self.r
    }
}

// ---------------------------------------------------------------------------
// JSON model specification
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: String,
    params: serde_json::Value,
    #[serde(default)]
    esscher_gamma: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentialParams {
    eta: f64,
    delta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinnikParams {
    eta: f64,
    delta: f64,
    alpha: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StableParams {
    alpha: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncatedStableParams {
    c: f64,
    a: f64,
    alpha: f64,
}

impl LevyModel {
    /// Parse the strict JSON model specification:
    /// `{"family": ..., "params": {...}, "esscher_gamma": optional}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec =
            serde_json::from_str(text).map_err(|e| Error::spec(format!("model spec: {e}")))?;
        let base = match raw.family.as_str() {
            "exponential" => {
                let p: ExponentialParams = serde_json::from_value(raw.params)
                    .map_err(|e| Error::spec(format!("exponential params: {e}")))?;
                LevyModel::exponential_jumps(p.eta, p.delta)?
            }
            "linnik" => {
                let p: LinnikParams = serde_json::from_value(raw.params)
                    .map_err(|e| Error::spec(format!("linnik params: {e}")))?;
                LevyModel::linnik(p.eta, p.delta, p.alpha)?
            }
            "stable" => {
                let p: StableParams = serde_json::from_value(raw.params)
                    .map_err(|e| Error::spec(format!("stable params: {e}")))?;
                LevyModel::stable(p.alpha)?
            }
            "truncated_stable" => {
                let p: TruncatedStableParams = serde_json::from_value(raw.params)
                    .map_err(|e| Error::spec(format!("truncated_stable params: {e}")))?;
                LevyModel::truncated_stable(p.c, p.a, p.alpha)?
            }
            other => {
                return Err(Error::spec(format!(
                    "unknown family `{other}` (expected exponential|linnik|stable|truncated_stable)"
                )))
            }
        };
        match raw.esscher_gamma {
            Some(g) if g > 0.0 => base.esscher(g),
            Some(g) => {
                if g == 0.0 {
                    Ok(base)
                } else {
                    Err(Error::spec("esscher_gamma must be nonnegative"))
                }
            }
            None => Ok(base),
        }
    }
}
