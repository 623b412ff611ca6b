//! Monte Carlo oracle: pathwise simulation of the risk process
//! dX = (rX + c) dt - dZ with exact exponential flow between jumps, plus
//! estimators for ruin probabilities, first passage upward and dual-law
//! samples.
//!
//! Infinite-activity drivers are truncated below `small_jump_cutoff`; the
//! discarded mass is compensated by its mean drift when requested. Each path
//! owns an independent counter-based RNG stream, so estimates are
//! reproducible bit for bit regardless of scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::quad::{self, NeumaierSum};
use crate::special;

/// Simulation controls.
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub n_paths: usize,
    pub horizon: f64,
    pub seed: u64,
    pub small_jump_cutoff: f64,
    pub drift_compensation: bool,
}

impl SimConfig {
    pub fn new(n_paths: usize, horizon: f64, seed: u64) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::argument("SimConfig: n_paths must be >= 1"));
        }
        if !(horizon > 0.0) {
            return Err(Error::argument("SimConfig: horizon must be positive"));
        }
        Ok(SimConfig {
            n_paths,
            horizon,
            seed,
            small_jump_cutoff: 1e-4,
            drift_compensation: true,
        })
    }

    pub fn with_cutoff(mut self, cutoff: f64, compensate: bool) -> Result<Self> {
        if !(cutoff > 0.0) {
            return Err(Error::argument(
                "SimConfig: small_jump_cutoff must be positive",
            ));
        }
        self.small_jump_cutoff = cutoff;
        self.drift_compensation = compensate;
        Ok(self)
    }
}

/// Estimator output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_effective: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    Jump { size: f64 },
    Ruin,
    Horizon,
}

#[derive(Debug, Clone, Copy)]
pub struct PathEvent {
    pub time: f64,
    pub kind: EventKind,
    pub surplus_after: f64,
}

// ---------------------------------------------------------------------------
// Jump machinery
// ---------------------------------------------------------------------------

enum SamplerKind {
    Exponential {
        delta: f64,
    },
    LinnikMixture {
        alpha: f64,
        delta: f64,
    },
    Pareto {
        eps: f64,
        alpha: f64,
        cap: Option<f64>,
    },
    InverseTail {
        model: LevyModel,
        eps: f64,
        tail_eps: f64,
    },
}

/// Jumps above the cutoff: arrival rate, small-jump compensation drift and
/// the size sampler.
pub(crate) struct JumpSampler {
    rate: f64,
    comp_drift: f64,
    kind: SamplerKind,
}

impl JumpSampler {
    fn for_model(model: &LevyModel, cfg: &SimConfig) -> Result<JumpSampler> {
        let eps = cfg.small_jump_cutoff;
        match model {
            LevyModel::ExponentialJumps { eta, delta } => Ok(JumpSampler {
                rate: *eta,
                comp_drift: 0.0,
                kind: SamplerKind::Exponential { delta: *delta },
            }),
            LevyModel::Linnik { eta, delta, alpha } => Ok(JumpSampler {
                rate: *eta,
                comp_drift: 0.0,
                kind: if *alpha == 1.0 {
                    SamplerKind::Exponential { delta: *delta }
                } else {
                    SamplerKind::LinnikMixture {
                        alpha: *alpha,
                        delta: *delta,
                    }
                },
            }),
            LevyModel::Stable { alpha } => {
                let c = 1.0 / (special::gamma_fn(1.0 - alpha) * (PI * alpha / 2.0).cos());
                let comp = if cfg.drift_compensation {
                    c * alpha * eps.powf(1.0 - alpha) / (1.0 - alpha)
                } else {
                    0.0
                };
                Ok(JumpSampler {
                    rate: c * eps.powf(-alpha),
                    comp_drift: comp,
                    kind: SamplerKind::Pareto {
                        eps,
                        alpha: *alpha,
                        cap: None,
                    },
                })
            }
            LevyModel::TruncatedStable { c, a, alpha } => {
                if eps >= *a {
                    return Err(Error::argument(
                        "SimConfig: cutoff must lie below the maximal jump size",
                    ));
                }
                let comp = if cfg.drift_compensation {
                    c * alpha * eps.powf(1.0 - alpha) / (1.0 - alpha)
                } else {
                    0.0
                };
                Ok(JumpSampler {
                    rate: c * eps.powf(-alpha),
                    comp_drift: comp,
                    kind: SamplerKind::Pareto {
                        eps,
                        alpha: *alpha,
                        cap: Some(*a),
                    },
                })
            }
            LevyModel::Esscher { base, gamma } => {
                if *gamma == 0.0 {
                    return JumpSampler::for_model(base, cfg);
                }
                if let LevyModel::ExponentialJumps { eta, delta } = base.as_ref() {
                    // Tilted exponential jumps are exponential again.
                    return Ok(JumpSampler {
                        rate: *eta,
                        comp_drift: 0.0,
                        kind: SamplerKind::Exponential {
                            delta: delta + gamma,
                        },
                    });
                }
                Self::inverse_tail(model.clone(), cfg)
            }
            LevyModel::Custom(_) => Self::inverse_tail(model.clone(), cfg),
        }
    }

    /// Generic sampler from the tilted/custom tail by bisection on
    /// P(J > x) = tail(x)/tail(ε).
    fn inverse_tail(model: LevyModel, cfg: &SimConfig) -> Result<JumpSampler> {
        let nu0 = model.nu_total();
        let eps = if nu0.is_finite() {
            0.0
        } else {
            cfg.small_jump_cutoff
        };
        let tail_eps = if eps == 0.0 { nu0 } else { model.tail(eps)? };
        if !(tail_eps > 0.0) && !tail_eps.is_finite() {
            return Err(Error::argument(
                "mc: infinite-activity driver requires a positive cutoff",
            ));
        }
        let comp_drift = if eps > 0.0 && cfg.drift_compensation {
            // ∫_0^ε y ν(dy) = ∫_0^ε (tail(x) - tail(ε)) dx.
            let m = model.clone();
            quad::integrate(
                move |x| {
                    if x <= 0.0 {
                        0.0
                    } else {
                        m.tail_unchecked(x) - tail_eps
                    }
                },
                0.0,
                eps,
                1e-12,
                1e-9,
            )?
        } else {
            0.0
        };
        Ok(JumpSampler {
            rate: tail_eps,
            comp_drift,
            kind: SamplerKind::InverseTail {
                model,
                eps,
                tail_eps,
            },
        })
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        let u = open01(rng.random::<f64>());
        match &self.kind {
            SamplerKind::Exponential { delta } => -u.ln() / delta,
            SamplerKind::LinnikMixture { alpha, delta } => {
                // J = δ^{-1/α} S E^{1/α}: S one-sided stable (LT e^{-β^α})
                // via Kanter, E unit exponential.
                let v = open01(rng.random::<f64>()) * PI;
                let w = -open01(rng.random::<f64>()).ln();
                let s = (special::kanter_a(*alpha, v) / w).powf((1.0 - alpha) / alpha);
                let e = -u.ln();
                delta.powf(-1.0 / alpha) * s * e.powf(1.0 / alpha)
            }
            SamplerKind::Pareto { eps, alpha, cap } => {
                let j = eps * u.powf(-1.0 / alpha);
                match cap {
                    Some(a) => j.min(*a), // the overflow mass is the boundary atom
                    None => j,
                }
            }
            SamplerKind::InverseTail {
                model,
                eps,
                tail_eps,
            } => {
                let target = u * tail_eps;
                // Bracket then bisect the nonincreasing tail.
                let mut lo = *eps;
                let mut hi = eps.max(1e-6) * 2.0;
                let mut guard = 0;
                while model.tail_unchecked(hi) > target && guard < 200 {
                    lo = hi;
                    hi *= 2.0;
                    guard += 1;
                }
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if model.tail_unchecked(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

fn open01(u: f64) -> f64 {
    u.clamp(1e-15, 1.0 - 1e-15)
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

// ---------------------------------------------------------------------------
// Path dynamics
// ---------------------------------------------------------------------------

/// Exact flow between jumps under the compensated premium c_eff = c - μ_ε:
/// X(s) = (X_0 + c_eff/r) e^{rs} - c_eff/r.
struct Flow {
    r: f64,
    c_eff: f64,
    barrier: f64, // -c/r with the true premium
}

impl Flow {
    fn at(&self, x0: f64, s: f64) -> f64 {
        (x0 + self.c_eff / self.r) * (self.r * s).exp() - self.c_eff / self.r
    }

    /// Time at which the flow from x0 crosses the absolute-ruin barrier,
    /// if it does within (0, dt]. Only possible when compensation makes the
    /// effective flow decreasing.
    fn ruin_crossing(&self, x0: f64, dt: f64) -> Option<f64> {
        let v = x0 + self.c_eff / self.r;
        if v >= 0.0 {
            return None;
        }
        let mu_over_r = (x0 - self.barrier) - v; // μ_ε/r + (c - c)/r adjustment
        debug_assert!(mu_over_r >= -1e-12);
        if x0 <= self.barrier {
            return Some(0.0);
        }
        let ratio = mu_over_r / (-v);
        if ratio < 1.0 {
            return None; // asymptote above the barrier is impossible here
        }
        let s = ratio.ln() / self.r;
        (s <= dt).then_some(s)
    }

    /// Time at which the flow from x0 reaches level a within (0, dt].
    fn level_crossing(&self, x0: f64, a: f64, dt: f64) -> Option<f64> {
        if x0 >= a {
            return Some(0.0);
        }
        let v = x0 + self.c_eff / self.r;
        let va = a + self.c_eff / self.r;
        if v <= 0.0 || va <= v {
            return None;
        }
        let s = (va / v).ln() / self.r;
        (s > 0.0 && s <= dt).then_some(s)
    }
}

struct Setup {
    sampler: JumpSampler,
    flow: Flow,
}

fn setup(model: &LevyModel, r: f64, c: f64, cfg: &SimConfig) -> Result<Setup> {
    if !(r > 0.0) {
        return Err(Error::argument("mc: r must be positive"));
    }
    let sampler = JumpSampler::for_model(model, cfg)?;
    let flow = Flow {
        r,
        c_eff: c - sampler.comp_drift,
        barrier: -c / r,
    };
    Ok(Setup { sampler, flow })
}

/// Simulate one path and materialize its events (jump times and sizes, the
/// ruin time when absolute ruin happens, or the horizon stop).
pub fn simulate_risk_path(
    model: &LevyModel,
    r: f64,
    c: f64,
    x: f64,
    path_index: u64,
    cfg: &SimConfig,
) -> Result<Vec<PathEvent>> {
    let st = setup(model, r, c, cfg)?;
    let mut rng = path_rng(cfg.seed, path_index);
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut xt = x;
    if xt < st.flow.barrier {
        events.push(PathEvent {
            time: 0.0,
            kind: EventKind::Ruin,
            surplus_after: xt,
        });
        return Ok(events);
    }
    loop {
        let dt = -open01(rng.random::<f64>()).ln() / st.sampler.rate;
        let step = dt.min(cfg.horizon - t);
        if let Some(s) = st.flow.ruin_crossing(xt, step) {
            let tr = t + s;
            events.push(PathEvent {
                time: tr,
                kind: EventKind::Ruin,
                surplus_after: st.flow.barrier,
            });
            return Ok(events);
        }
        if t + dt >= cfg.horizon {
            let xh = st.flow.at(xt, cfg.horizon - t);
            events.push(PathEvent {
                time: cfg.horizon,
                kind: EventKind::Horizon,
                surplus_after: xh,
            });
            return Ok(events);
        }
        t += dt;
        xt = st.flow.at(xt, dt);
        let j = st.sampler.draw(&mut rng);
        xt -= j;
        events.push(PathEvent {
            time: t,
            kind: EventKind::Jump { size: j },
            surplus_after: xt,
        });
        if xt < st.flow.barrier {
            events.push(PathEvent {
                time: t,
                kind: EventKind::Ruin,
                surplus_after: xt,
            });
            return Ok(events);
        }
    }
}

/// Fraction of paths with absolute ruin by time t, with binomial standard
/// error.
pub fn estimate_finite_time_ruin(
    model: &LevyModel,
    r: f64,
    c: f64,
    x: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<MCEstimate> {
    if !(t >= 0.0) {
        return Err(Error::domain(
            "estimate_finite_time_ruin: t must be nonnegative",
        ));
    }
    let mut local = *cfg;
    local.horizon = t.max(1e-12);
    let st = setup(model, r, c, &local)?;
    let mut ruined = 0usize;
    for p in 0..local.n_paths {
        let mut rng = path_rng(local.seed, p as u64);
        if run_to_ruin_or_horizon(&st, &mut rng, x, local.horizon).is_some() {
            ruined += 1;
        }
    }
    let n = local.n_paths as f64;
    let mean = ruined as f64 / n;
    Ok(MCEstimate {
        mean,
        std_error: (mean * (1.0 - mean) / n).sqrt(),
        n_effective: local.n_paths,
    })
}

fn run_to_ruin_or_horizon<R: Rng>(st: &Setup, rng: &mut R, x: f64, horizon: f64) -> Option<f64> {
    let mut t = 0.0;
    let mut xt = x;
    if xt < st.flow.barrier {
        return Some(0.0);
    }
    loop {
        let dt = -open01(rng.random::<f64>()).ln() / st.sampler.rate;
        let step = dt.min(horizon - t);
        if let Some(s) = st.flow.ruin_crossing(xt, step) {
            return Some(t + s);
        }
        if t + dt >= horizon {
            return None;
        }
        t += dt;
        xt = st.flow.at(xt, dt);
        xt -= st.sampler.draw(rng);
        if xt < st.flow.barrier {
            return Some(t);
        }
    }
}

/// Terminal surplus values X_t under the risk law started at x (paths run
/// through ruin; the surplus keeps evolving).
pub fn sample_terminal_values(
    model: &LevyModel,
    r: f64,
    c: f64,
    x: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<Vec<f64>> {
    let mut local = *cfg;
    local.horizon = t.max(1e-12);
    let st = setup(model, r, c, &local)?;
    let mut out = Vec::with_capacity(local.n_paths);
    for p in 0..local.n_paths {
        let mut rng = path_rng(local.seed, p as u64);
        let mut time = 0.0;
        let mut xt = x;
        loop {
            let dt = -open01(rng.random::<f64>()).ln() / st.sampler.rate;
            if time + dt >= t {
                xt = st.flow.at(xt, t - time);
                break;
            }
            time += dt;
            xt = st.flow.at(xt, dt);
            xt -= st.sampler.draw(&mut rng);
        }
        out.push(xt);
    }
    Ok(out)
}

/// Samples of the exponentially discounted jump sum ∫_0^t e^{-rs} dZ_s
/// (plus the deterministic compensation of discarded small jumps).
pub fn sample_dual_integral(
    model: &LevyModel,
    r: f64,
    t: f64,
    cfg: &SimConfig,
) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(Error::domain("sample_dual_integral: t must be nonnegative"));
    }
    let mut local = *cfg;
    local.horizon = t.max(1e-12);
    let st = setup(model, r, 0.0, &local)?;
    let comp = st.sampler.comp_drift * (1.0 - (-r * t).exp()) / r;
    let mut out = Vec::with_capacity(local.n_paths);
    for p in 0..local.n_paths {
        let mut rng = path_rng(local.seed, p as u64);
        let mut acc = NeumaierSum::new();
        acc.add(comp);
        let mut time = 0.0;
        loop {
            let dt = -open01(rng.random::<f64>()).ln() / st.sampler.rate;
            time += dt;
            if time >= t {
                break;
            }
            acc.add((-r * time).exp() * st.sampler.draw(&mut rng));
        }
        out.push(acc.value());
    }
    Ok(out)
}

/// Exit-upward estimate with the unresolved horizon mass reported.
#[derive(Debug, Clone, Copy)]
pub struct ExitEstimate {
    pub estimate: MCEstimate,
    /// Fraction of paths that neither exited above a nor ruined by the
    /// horizon; a warning-level quantity when above 1%.
    pub unresolved: f64,
}

/// Mean of e^{-q τ_a^+} over paths that reach a before absolute ruin
/// (zero contribution otherwise).
pub fn estimate_exit_upward(
    model: &LevyModel,
    r: f64,
    x: f64,
    a: f64,
    q: f64,
    cfg: &SimConfig,
) -> Result<ExitEstimate> {
    if !(a > 0.0) || x > a || x < 0.0 {
        return Err(Error::domain("estimate_exit_upward: need 0 <= x <= a"));
    }
    if q < 0.0 {
        return Err(Error::domain("estimate_exit_upward: q must be nonnegative"));
    }
    let st = setup(model, r, 0.0, cfg)?;
    let mut acc = NeumaierSum::new();
    let mut acc2 = NeumaierSum::new();
    let mut unresolved = 0usize;
    for p in 0..cfg.n_paths {
        let mut rng = path_rng(cfg.seed, p as u64);
        let mut t = 0.0;
        let mut xt = x;
        let mut value = 0.0;
        if xt >= a {
            value = 1.0;
        } else {
            loop {
                let dt = -open01(rng.random::<f64>()).ln() / st.sampler.rate;
                let step = dt.min(cfg.horizon - t);
                if let Some(s) = st.flow.level_crossing(xt, a, step) {
                    value = (-q * (t + s)).exp();
                    break;
                }
                if let Some(_s) = st.flow.ruin_crossing(xt, step) {
                    break;
                }
                if t + dt >= cfg.horizon {
                    unresolved += 1;
                    break;
                }
                t += dt;
                xt = st.flow.at(xt, dt);
                xt -= st.sampler.draw(&mut rng);
                if xt < st.flow.barrier {
                    break;
                }
            }
        }
        acc.add(value);
        acc2.add(value * value);
    }
    let n = cfg.n_paths as f64;
    let mean = acc.value() / n;
    let var = (acc2.value() / n - mean * mean).max(0.0);
    Ok(ExitEstimate {
        estimate: MCEstimate {
            mean,
            std_error: (var / n).sqrt(),
            n_effective: cfg.n_paths,
        },
        unresolved: unresolved as f64 / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::ProcessParams;
    use crate::oracles;

    fn zero_model() -> LevyModel {
        LevyModel::custom(|_| 0.0, true, 1e-9, "null")
    }

    #[test]
    fn deterministic_flow_without_jumps() {
        // ν ≡ 0: X_t + c/r = (x + c/r) e^{rt} exactly (rate ~ 0 means the
        // first jump lands far beyond the horizon).
        let cfg = SimConfig::new(1, 5.0, 7).unwrap();
        let events = simulate_risk_path(&zero_model(), 0.2, 0.3, 1.0, 0, &cfg).unwrap();
        assert_eq!(events.len(), 1);
        match events[0].kind {
            EventKind::Horizon => {}
            _ => panic!("expected horizon event"),
        }
        let expect = (1.0 + 0.3 / 0.2) * (0.2f64 * 5.0).exp() - 0.3 / 0.2;
        assert!((events[0].surplus_after - expect).abs() < 1e-12);
    }

    #[test]
    fn determinism_same_seed() {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let cfg = SimConfig::new(2000, 10.0, 42).unwrap();
        let a = estimate_finite_time_ruin(&model, 0.2, 0.0, 2.0, 10.0, &cfg).unwrap();
        let b = estimate_finite_time_ruin(&model, 0.2, 0.0, 2.0, 10.0, &cfg).unwrap();
        assert_eq!(a, b);
        let s1 = sample_dual_integral(&model, 0.2, 3.0, &cfg).unwrap();
        let s2 = sample_dual_integral(&model, 0.2, 3.0, &cfg).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn paths_stop_at_ruin_and_never_recover() {
        let model = LevyModel::exponential_jumps(1.5, 0.8).unwrap();
        let cfg = SimConfig::new(1, 50.0, 0).unwrap();
        let mut saw_ruin = 0;
        for p in 0..300 {
            let events = simulate_risk_path(&model, 0.2, 0.1, 0.5, p, &cfg).unwrap();
            if let Some(pos) = events.iter().position(|e| e.kind == EventKind::Ruin) {
                saw_ruin += 1;
                assert_eq!(pos, events.len() - 1, "no events after ruin");
                assert!(events[pos].surplus_after <= -0.1 / 0.2 + 1e-12);
            }
        }
        assert!(saw_ruin > 0, "expected some ruined paths in this regime");
    }

    #[test]
    fn ruin_estimate_matches_exp_case_oracle() {
        let (eta, delta, r) = (0.4, 1.0, 0.2);
        let model = LevyModel::exponential_jumps(eta, delta).unwrap();
        let cfg = SimConfig::new(40_000, 5.0, 11).unwrap();
        let est = estimate_finite_time_ruin(&model, r, 0.0, 2.0, 5.0, &cfg).unwrap();
        let expect = 1.0 - oracles::exp_case_survival(eta, delta, r, 2.0, 5.0).unwrap();
        assert!(
            (est.mean - expect).abs() <= 3.0 * est.std_error,
            "{} vs {expect} (se {})",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn t_zero_gives_zero_ruin() {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let cfg = SimConfig::new(100, 1.0, 3).unwrap();
        let est = estimate_finite_time_ruin(&model, 0.2, 0.0, 1.0, 0.0, &cfg).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn stable_ruin_with_cutoff_matches_scaling_oracle() {
        let model = LevyModel::stable(0.5).unwrap();
        let cfg = SimConfig::new(20_000, 5.0, 23)
            .unwrap()
            .with_cutoff(1e-4, true)
            .unwrap();
        let est = estimate_finite_time_ruin(&model, 0.2, 0.0, 1.0, 5.0, &cfg).unwrap();
        let expect = 1.0 - oracles::stable_survival(0.5, 0.2, 1.0, Some(5.0)).unwrap();
        assert!(
            (est.mean - expect).abs() <= 5.0 * est.std_error,
            "{} vs {expect} (se {})",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn dual_integral_empirical_cf_matches_transform() {
        use crate::backward::BackwardExponent;
        use crate::transform::dual_char_function;
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let be = BackwardExponent::new(model.clone(), 0.2).unwrap();
        let cfg = SimConfig::new(30_000, 3.0, 5).unwrap();
        let samples = sample_dual_integral(&model, 0.2, 3.0, &cfg).unwrap();
        assert!(samples.len() == 30_000);
        let u = 1.0;
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        let mut re2 = NeumaierSum::new();
        let mut im2 = NeumaierSum::new();
        for &s in &samples {
            // E[e^{-iuX}] convention.
            re.add((u * s).cos());
            im.add(-(u * s).sin());
            re2.add((u * s).cos().powi(2));
            im2.add((u * s).sin().powi(2));
        }
        let n = samples.len() as f64;
        let (mre, mim) = (re.value() / n, im.value() / n);
        let se_re = ((re2.value() / n - mre * mre).max(0.0) / n).sqrt();
        let se_im = ((im2.value() / n - mim * mim).max(0.0) / n).sqrt();
        let expect = dual_char_function(&be, 3.0, u).unwrap();
        assert!(
            (mre - expect.re).abs() <= 3.0 * se_re,
            "re: {mre} vs {}",
            expect.re
        );
        assert!(
            (mim - expect.im).abs() <= 3.0 * se_im,
            "im: {mim} vs {}",
            expect.im
        );
    }

    #[test]
    fn dual_integral_empirical_tail_matches_inverted_cdf() {
        use crate::backward::BackwardExponent;
        use crate::transform::{auto_grid_for_cdf, dual_cdf_profile, GridOptions};
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let be = BackwardExponent::new(model.clone(), 0.2).unwrap();
        let t = 4.0;
        let cfg = SimConfig::new(30_000, t, 19).unwrap();
        let samples = sample_dual_integral(&model, 0.2, t, &cfg).unwrap();
        let grid = auto_grid_for_cdf(&be, Some(t), 0.05, 200, &GridOptions::default()).unwrap();
        let prof = dual_cdf_profile(&be, Some(t), &grid, 1e-3).unwrap();
        for &x in &[0.5, 1.5, 3.0] {
            let tail = samples.iter().filter(|&&s| s > x).count() as f64 / samples.len() as f64;
            let se = (tail * (1.0 - tail) / samples.len() as f64).sqrt();
            let expect = 1.0 - prof.query(x);
            assert!(
                (tail - expect).abs() <= 3.0 * se.max(1e-6),
                "x={x}: {tail} vs {expect} (se {se})"
            );
        }
    }

    #[test]
    fn dual_integral_t_zero_is_empty() {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let cfg = SimConfig::new(50, 1.0, 9).unwrap();
        let samples = sample_dual_integral(&model, 0.2, 0.0, &cfg).unwrap();
        assert!(samples.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn exit_at_start_level() {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let cfg = SimConfig::new(100, 10.0, 4).unwrap();
        let est = estimate_exit_upward(&model, 0.2, 3.0, 3.0, 0.5, &cfg).unwrap();
        assert_eq!(est.estimate.mean, 1.0);
        assert_eq!(est.unresolved, 0.0);
    }

    #[test]
    fn exit_probability_matches_w_ratio() {
        use crate::ruin::build_w_family;
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let wf = build_w_family(&model, 0.2, 0.02, 12.0).unwrap();
        let cfg = SimConfig::new(40_000, 120.0, 17).unwrap();
        let est = estimate_exit_upward(&model, 0.2, 1.0, 3.0, 0.0, &cfg).unwrap();
        assert!(est.unresolved < 0.01, "unresolved {}", est.unresolved);
        let expect = wf.w_at(1.0) / wf.w_at(3.0);
        assert!(
            (est.estimate.mean - expect).abs() <= 3.0 * est.estimate.std_error,
            "{} vs {expect} (se {})",
            est.estimate.mean,
            est.estimate.std_error
        );
    }

    #[test]
    fn linnik_sampler_matches_series_oracle() {
        let (eta, delta, alpha, r) = (0.4, 1.0, 0.5, 0.2);
        let model = LevyModel::linnik(eta, delta, alpha).unwrap();
        let cfg = SimConfig::new(30_000, 3.0, 31).unwrap();
        let est = estimate_finite_time_ruin(&model, r, 0.0, 1.0, 3.0, &cfg).unwrap();
        let expect = 1.0
            - oracles::linnik_survival_series(eta, delta, alpha, r, 1.0, 3.0, 40)
                .unwrap()
                .value;
        assert!(
            (est.mean - expect).abs() <= 3.0 * est.std_error,
            "{} vs {expect} (se {})",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn shift_reduction_in_mc() {
        // (x, c) and (x + c/r, 0) run through identical dynamics.
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let cfg = SimConfig::new(5000, 6.0, 13).unwrap();
        let a = estimate_finite_time_ruin(&model, 0.2, 0.4, 1.0, 6.0, &cfg).unwrap();
        let b = estimate_finite_time_ruin(&model, 0.2, 0.0, 3.0, 6.0, &cfg).unwrap();
        assert!((a.mean - b.mean).abs() < 1e-12);
        let _ = ProcessParams::new(0.2, 0.4).unwrap();
    }
}
