//! Finite- and infinite-time absolute ruin probabilities.
//!
//! Everything reduces to the c = 0 case through the effective level
//! x_eff = x + c/r: ruin below -c/r for the process started at x is ruin
//! below 0 for the shifted process started at x_eff. Finite-time
//! probabilities come from the duality P_x(τ_0 ≤ t) = P̂(X_t > x) with X̂
//! the dual Ornstein-Uhlenbeck-type process started at 0.

use crate::backward::BackwardExponent;
use crate::error::{Error, Result};
use crate::levy::{LevyModel, ProcessParams};
use crate::transform::{self, CdfProfile, GridOptions, WFamily};

/// Time horizon of a ruin query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

impl Horizon {
    pub fn finite(self) -> Option<f64> {
        match self {
            Horizon::Finite(t) => Some(t),
            Horizon::Infinite => None,
        }
    }
}

/// A ruin problem: model, rates, initial capital and horizon.
#[derive(Debug, Clone)]
pub struct RuinQuery {
    pub model: LevyModel,
    pub params: ProcessParams,
    pub x: f64,
    pub horizon: Horizon,
}

impl RuinQuery {
    pub fn new(model: LevyModel, params: ProcessParams, x: f64, horizon: Horizon) -> Result<Self> {
        if let Horizon::Finite(t) = horizon {
            if !(t >= 0.0) {
                return Err(Error::domain("RuinQuery: t must be nonnegative"));
            }
        }
        Ok(RuinQuery {
            model,
            params,
            x,
            horizon,
        })
    }

    pub fn x_eff(&self) -> f64 {
        self.params.x_eff(self.x)
    }
}

/// Controls for the Fourier pipeline behind finite-time queries.
#[derive(Debug, Clone, Copy)]
pub struct InversionConfig {
    /// Spatial step of the inversion grid.
    pub h: f64,
    /// Modulus acceptance threshold at the frequency cutoff.
    pub decay_tol: f64,
    pub grid: GridOptions,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            h: 0.05,
            decay_tol: 1e-4,
            grid: GridOptions {
                decay_tol: 1e-8,
                ..GridOptions::default()
            },
        }
    }
}

/// Distribution profile of the dual process at a finite horizon, reusable
/// across initial capitals.
pub fn finite_time_profile(
    model: &LevyModel,
    r: f64,
    t: f64,
    x_max: f64,
    cfg: &InversionConfig,
) -> Result<CdfProfile> {
    if !(t >= 0.0) {
        return Err(Error::domain("finite_time_profile: t must be nonnegative"));
    }
    let be = BackwardExponent::new(model.clone(), r)?;
    let m = (x_max / cfg.h).ceil() as usize + 1;
    let grid = transform::auto_grid_for_cdf(&be, Some(t), cfg.h, m, &cfg.grid)?;
    transform::dual_cdf_profile(&be, Some(t), &grid, cfg.decay_tol)
}

/// P(τ ≤ t) for a finite horizon via the duality with the dual transition
/// law: 1 - F_t(x_eff).
pub fn finite_time_ruin(q: &RuinQuery, cfg: &InversionConfig) -> Result<f64> {
    let t = match q.horizon {
        Horizon::Finite(t) => t,
        Horizon::Infinite => {
            return Err(Error::argument(
                "finite_time_ruin: infinite horizon; use infinite_time_ruin",
            ))
        }
    };
    let x_eff = q.x_eff();
    if x_eff <= 0.0 {
        // At or below the absolute-ruin barrier already.
        return Ok(1.0);
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let profile = finite_time_profile(&q.model, q.params.r(), t, x_eff + 1.0, cfg)?;
    Ok((1.0 - profile.query(x_eff)).clamp(0.0, 1.0))
}

/// Same, but evaluated against a precomputed profile.
pub fn finite_time_ruin_with_profile(q: &RuinQuery, profile: &CdfProfile) -> Result<f64> {
    let x_eff = q.x_eff();
    if x_eff <= 0.0 {
        return Ok(1.0);
    }
    Ok((1.0 - profile.query(x_eff)).clamp(0.0, 1.0))
}

/// P(τ < ∞): 1 - W(x_eff) when the log-moment is finite, 1 otherwise.
pub fn infinite_time_ruin(q: &RuinQuery, wf: &WFamily) -> f64 {
    if !q.model.log_moment_finite() {
        return 1.0;
    }
    let x_eff = q.x_eff();
    if x_eff <= 0.0 {
        return 1.0;
    }
    (1.0 - wf.w_at(x_eff)).clamp(0.0, 1.0)
}

/// Survival probability from an exponentially distributed initial capital
/// with rate β: exp(-∫_0^t φ(β e^{-rs}) ds), which after substitution is
/// exp(-(φ_r(β) - φ_r(β e^{-rt}))); for t = ∞ this is exp(-φ_r(β)).
pub fn exp_initial_survival(model: &LevyModel, r: f64, beta: f64, horizon: Horizon) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::domain("exp_initial_survival: beta must be positive"));
    }
    let be = BackwardExponent::new(model.clone(), r)?;
    match horizon {
        Horizon::Finite(t) => {
            if !(t >= 0.0) {
                return Err(Error::domain("exp_initial_survival: t must be nonnegative"));
            }
            if t == 0.0 {
                return Ok(1.0);
            }
            if be.xi() == 1 {
                // Finite-horizon survival still makes sense; integrate φ
                // directly since φ_r itself diverges at 0.
                let exponent = crate::quad::integrate(
                    |s| model.phi(beta * (-r * s).exp()).unwrap_or(f64::NAN),
                    0.0,
                    t,
                    1e-12,
                    1e-10,
                )?;
                return Ok((-exponent).exp());
            }
            let exponent = be.varphi_r(beta)? - be.varphi_r(beta * (-r * t).exp())?;
            Ok((-exponent).exp())
        }
        Horizon::Infinite => {
            if be.xi() == 1 {
                // Ruin is certain; survival mass is zero.
                return Ok(0.0);
            }
            Ok((-be.varphi_r(beta)?).exp())
        }
    }
}

/// Build the W family needed by [`infinite_time_ruin`] with default-quality
/// inversion settings.
pub fn build_w_family(model: &LevyModel, r: f64, h: f64, x_max: f64) -> Result<WFamily> {
    let be = BackwardExponent::new(model.clone(), r)?;
    let m = (x_max / h).ceil() as usize;
    let grid = transform::auto_grid_for_derivatives(&be, h, m, 0, &GridOptions::default())?;
    transform::w_derivatives(&be, &grid, 0, transform::CumulativeRule::Trapezoid, 5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special;
    use approx::assert_abs_diff_eq;

    fn expj_query(x: f64, horizon: Horizon) -> RuinQuery {
        RuinQuery::new(
            LevyModel::exponential_jumps(0.4, 1.0).unwrap(),
            ProcessParams::new(0.2, 0.0).unwrap(),
            x,
            horizon,
        )
        .unwrap()
    }

    #[test]
    fn below_barrier_is_certain_ruin() {
        let q = expj_query(-0.5, Horizon::Finite(3.0));
        assert_eq!(
            finite_time_ruin(&q, &InversionConfig::default()).unwrap(),
            1.0
        );
        let q0 = RuinQuery::new(
            LevyModel::exponential_jumps(0.4, 1.0).unwrap(),
            ProcessParams::new(0.2, -0.4).unwrap(),
            2.0,
            Horizon::Finite(3.0),
        )
        .unwrap();
        // x_eff = 2 - 2 = 0: exactly at the barrier.
        assert_eq!(
            finite_time_ruin(&q0, &InversionConfig::default()).unwrap(),
            1.0
        );
    }

    #[test]
    fn zero_horizon_is_zero_ruin() {
        let q = expj_query(1.0, Horizon::Finite(0.0));
        assert_eq!(
            finite_time_ruin(&q, &InversionConfig::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn infinite_time_matches_gamma_survival() {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let wf = build_w_family(&model, 0.2, 0.05, 15.0).unwrap();
        for &x in &[0.5, 1.0, 2.0, 5.0] {
            let q = expj_query(x, Horizon::Infinite);
            let ruin = infinite_time_ruin(&q, &wf);
            let survival = special::gamma_cdf(2.0, 1.0, x).unwrap();
            assert!((ruin - (1.0 - survival)).abs() < 1e-4, "x={x}");
        }
    }

    #[test]
    fn infinite_log_moment_means_certain_ruin() {
        let heavy = LevyModel::custom(
            |x| 1.0f64.min(1.0 / x.max(std::f64::consts::E).ln()),
            false,
            1.0,
            "log-tail",
        );
        let wf = build_w_family(
            &LevyModel::exponential_jumps(0.4, 1.0).unwrap(),
            0.2,
            0.1,
            10.0,
        )
        .unwrap();
        let q = RuinQuery::new(
            heavy,
            ProcessParams::new(0.2, 0.0).unwrap(),
            100.0,
            Horizon::Infinite,
        )
        .unwrap();
        assert_eq!(infinite_time_ruin(&q, &wf), 1.0);
    }

    #[test]
    fn shift_reduction_is_exact() {
        let cfg = InversionConfig::default();
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let with_premium = RuinQuery::new(
            model.clone(),
            ProcessParams::new(0.2, 0.3).unwrap(),
            1.0,
            Horizon::Finite(4.0),
        )
        .unwrap();
        let shifted = RuinQuery::new(
            model,
            ProcessParams::new(0.2, 0.0).unwrap(),
            1.0 + 0.3 / 0.2,
            Horizon::Finite(4.0),
        )
        .unwrap();
        let a = finite_time_ruin(&with_premium, &cfg).unwrap();
        let b = finite_time_ruin(&shifted, &cfg).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn monotone_in_t_and_x() {
        let cfg = InversionConfig::default();
        let mut last = 0.0;
        for &t in &[0.5, 1.0, 2.0, 4.0, 8.0] {
            let v = finite_time_ruin(&expj_query(2.0, Horizon::Finite(t)), &cfg).unwrap();
            assert!(v >= last - 1e-9, "t={t}");
            last = v;
        }
        let mut last = 1.0;
        for &x in &[0.5, 1.0, 2.0, 4.0] {
            let v = finite_time_ruin(&expj_query(x, Horizon::Finite(3.0)), &cfg).unwrap();
            assert!(v <= last + 1e-9, "x={x}");
            last = v;
        }
    }

    #[test]
    fn finite_time_approaches_infinite_time() {
        // t = 50/r on the truncated-stable defaults: within 2e-3 of the
        // infinite-horizon value.
        let model = LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap();
        let r = 0.2;
        let wf = super::build_w_family(&model, r, 0.05, 30.0).unwrap();
        let cfg = InversionConfig::default();
        let params = ProcessParams::new(r, 0.0).unwrap();
        for &x in &[2.0, 8.0, 14.0] {
            let qf = RuinQuery::new(model.clone(), params, x, Horizon::Finite(250.0)).unwrap();
            let qi = RuinQuery::new(model.clone(), params, x, Horizon::Infinite).unwrap();
            let finite = finite_time_ruin(&qf, &cfg).unwrap();
            let infinite = infinite_time_ruin(&qi, &wf);
            assert!(
                (finite - infinite).abs() < 2e-3,
                "x={x}: {finite} vs {infinite}"
            );
        }
    }

    #[test]
    fn exp_initial_survival_values() {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        assert_abs_diff_eq!(
            exp_initial_survival(&model, 0.2, 1.0, Horizon::Finite(0.0)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        // t = ∞: (1 + β/δ)^{-η/r}.
        let v = exp_initial_survival(&model, 0.2, 1.0, Horizon::Infinite).unwrap();
        assert_abs_diff_eq!(v, 0.25, epsilon = 1e-12);

        // xi = 1 with t = ∞: survival is impossible.
        let heavy = LevyModel::custom(
            |x| 1.0f64.min(1.0 / x.max(std::f64::consts::E).ln()),
            false,
            1.0,
            "log-tail",
        );
        assert_eq!(
            exp_initial_survival(&heavy, 0.2, 1.0, Horizon::Infinite).unwrap(),
            0.0
        );
    }

    #[test]
    fn mixing_identity_over_initial_capital() {
        // ∫ survival(x, t) β e^{-βx} dx = exp_initial_survival(β, t).
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let r = 0.2;
        let t = 3.0;
        let cfg = InversionConfig::default();
        let profile = finite_time_profile(&model, r, t, 60.0, &cfg).unwrap();
        for &beta in &[0.5, 1.0, 2.0] {
            let mix = crate::quad::integrate(
                |x| {
                    if x <= 0.0 {
                        0.0
                    } else {
                        profile.query(x) * beta * (-beta * x).exp()
                    }
                },
                0.0,
                60.0,
                1e-10,
                1e-9,
            )
            .unwrap();
            let expect = exp_initial_survival(&model, r, beta, Horizon::Finite(t)).unwrap();
            assert!(
                (mix - expect).abs() < 1e-4,
                "beta={beta}: {mix} vs {expect}"
            );
        }
    }
}
