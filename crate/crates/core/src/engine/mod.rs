//! Explicit time stepping of the coupled robot / chemical system.
//!
//! Every robot state moves by diffusion, uniform flow and chemotactic drift
//! in conservative upwind form with closed walls, then exchanges mass with
//! the other states through the controller kinetics. All operators are
//! evaluated at the start of the step (forward Euler).

pub mod ops;

use crate::chem;
use crate::controller::reaction_terms;
use crate::error::{Result, SwarmError};
use crate::model::{RhoMode, ScalarField, ScenarioConfig, SwarmState, TaxisMode};
use ops::{advect_drift, chemotaxis_velocity, laplacian, Boundary};

/// Densities may dip this far below zero from round-off before a step is
/// treated as a scheme violation.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-12;

/// Largest explicit step allowed by `config`:
/// `cfl_safety * min(dx^2 / (2 D_max), dx / |v|_max)`.
///
/// `D_max` covers every robot state, the signal when some state deposits it,
/// and the chemical when it evolves dynamically. `|v|_max` is the flow speed
/// plus the largest constant-speed drift of any state (plus the steepest
/// linear-sensitivity response to the closed-form chemical profile).
pub fn stable_dt(config: &ScenarioConfig) -> Result<f64> {
    let dx = config.grid.dx();
    let mut d_max = config.states.iter().map(|s| s.diffusion).fold(0.0, f64::max);
    if config.signal_active() {
        d_max = d_max.max(config.fields.d_c);
    }
    if config.fields.rho_mode == RhoMode::Dynamic {
        d_max = d_max.max(config.fields.d_rho);
    }
    let rho_slope = match config.fields.rho_mode {
        RhoMode::AnalyticSteady => {
            let f = &config.fields;
            f.sources.first().map_or(0.0, |s| s.q * (f.gamma_rho / f.d_rho).sqrt())
        }
        RhoMode::Dynamic => 0.0,
    };
    let drift = config
        .states
        .iter()
        .map(|s| {
            let linear = if s.chemotaxis.mode == TaxisMode::LinearSensitivity {
                s.chemotaxis.sensitivity * rho_slope
            } else {
                0.0
            };
            s.chemotaxis.max_constant_speed() + s.signal_taxis.max_constant_speed() + linear
        })
        .fold(0.0, f64::max);
    let v_max = config.flow_v.abs() + drift;

    let mut bound = f64::INFINITY;
    if d_max > 0.0 {
        bound = bound.min(dx * dx / (2.0 * d_max));
    }
    if v_max > 0.0 {
        bound = bound.min(dx / v_max);
    }
    if !bound.is_finite() {
        return Err(SwarmError::InvalidConfig(
            "no transport: every diffusivity and velocity is zero".into(),
        ));
    }
    Ok(config.numerics.cfl_safety * bound)
}

/// Per-face transport velocity of robots in state `k`.
pub(crate) fn state_face_velocity(state: &SwarmState, config: &ScenarioConfig, k: usize) -> Vec<f64> {
    let eps = config.numerics.threshold_smoothing;
    let params = &config.states[k];
    let chemo = chemotaxis_velocity(&state.rho, &params.chemotaxis, eps);
    let signal = chemotaxis_velocity(&state.c, &params.signal_taxis, eps);
    chemo
        .into_iter()
        .zip(signal)
        .map(|(a, b)| config.flow_v + a + b)
        .collect()
}

fn has_linear_drift(config: &ScenarioConfig) -> bool {
    config.states.iter().any(|s| {
        s.chemotaxis.mode == TaxisMode::LinearSensitivity || s.signal_taxis.mode == TaxisMode::LinearSensitivity
    })
}

/// Advances the signal unless it is identically zero and nothing deposits it.
pub(crate) fn advance_signal_field(
    c: &ScalarField,
    densities: &[ScalarField],
    config: &ScenarioConfig,
    dt: f64,
) -> Result<ScalarField> {
    if !config.signal_active() && c.values().iter().all(|&v| v == 0.0) {
        return Ok(c.clone());
    }
    let f = &config.fields;
    chem::advance_signal(
        c,
        |i| {
            config
                .states
                .iter()
                .zip(densities)
                .map(|(s, n)| s.q * n.values()[i])
                .sum()
        },
        f.d_c,
        f.gamma_c,
        config.flow_v,
        dt,
    )
}

pub(crate) fn advance_rho_field(rho: &ScalarField, config: &ScenarioConfig, dt: f64) -> Result<ScalarField> {
    match config.fields.rho_mode {
        RhoMode::AnalyticSteady => Ok(rho.clone()),
        RhoMode::Dynamic => chem::step_rho(rho, &config.fields, config.flow_v, dt),
    }
}

fn check_nonnegative(field: &ScalarField, name: &str, t: f64) -> Result<()> {
    match field
        .values()
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v >= -NEGATIVITY_TOLERANCE))
    {
        Some((cell, &value)) => Err(SwarmError::SchemeViolation {
            field: name.to_string(),
            cell,
            value,
            t,
        }),
        None => Ok(()),
    }
}

/// One forward-Euler step of the full system.
pub fn step(state: &SwarmState, config: &ScenarioConfig, dt: f64) -> Result<SwarmState> {
    let limit = stable_dt(config)?;
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(SwarmError::Unstable {
            operator: "step",
            dt,
            bound: limit,
        });
    }
    step_unchecked(state, config, dt)
}

fn step_unchecked(state: &SwarmState, config: &ScenarioConfig, dt: f64) -> Result<SwarmState> {
    let grid = *state.grid();
    let dx = grid.dx();
    let kinetics = reaction_terms(state, config)?;
    let check_cfl = has_linear_drift(config);

    let mut n = Vec::with_capacity(state.n.len());
    for (k, (density, reaction)) in state.n.iter().zip(&kinetics).enumerate() {
        let faces = state_face_velocity(state, config, k);
        if check_cfl {
            let u_max = faces.iter().fold(0.0f64, |m, u| m.max(u.abs()));
            if u_max * dt > dx {
                return Err(SwarmError::Unstable {
                    operator: "drift",
                    dt,
                    bound: dx / u_max,
                });
            }
        }
        let lap = laplacian(density, Boundary::ZeroFlux);
        let adv = advect_drift(density, &faces);
        let d = config.states[k].diffusion;
        let values = density
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| v + dt * (d * lap.values()[i] + adv.values()[i] + reaction.values()[i]))
            .collect();
        n.push(ScalarField::from_values(grid, values)?);
    }
    let c = advance_signal_field(&state.c, &state.n, config, dt)?;
    let rho = advance_rho_field(&state.rho, config, dt)?;

    let t = state.t + dt;
    for (k, f) in n.iter().enumerate() {
        check_nonnegative(f, &format!("n{}", k + 1), t)?;
    }
    check_nonnegative(&c, "c", t)?;
    check_nonnegative(&rho, "rho", t)?;
    Ok(SwarmState { t, n, rho, c })
}

/// Output times and the uniform sub-step used to reach each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub t_out: f64,
    pub steps: usize,
    pub dt: f64,
}

/// Splits `[0, t_end]` into output segments of length `interval` (the last
/// one possibly shorter), each stepped with the largest uniform `dt` not
/// exceeding `dt_max`.
pub fn schedule(t_end: f64, interval: f64, dt_max: f64) -> Vec<Segment> {
    let mut out = Vec::new();
    if t_end <= 0.0 {
        return out;
    }
    let segments = ((t_end / interval) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let mut t_prev = 0.0;
    for k in 1..=segments {
        let t_out = if k == segments { t_end } else { (k as f64 * interval).min(t_end) };
        let len = t_out - t_prev;
        let steps = ((len / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        out.push(Segment {
            t_out,
            steps,
            dt: len / steps as f64,
        });
        t_prev = t_out;
    }
    out
}

/// Snapshots of one run, in time order, starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<SwarmState>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &SwarmState {
        self.snapshots.last().expect("trajectory is never empty")
    }

    /// Snapshot whose time is closest to `t`.
    pub fn at(&self, t: f64) -> &SwarmState {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .expect("trajectory is never empty")
    }
}

/// Runs `config` from its own initial condition.
pub fn run(config: &ScenarioConfig) -> Result<Trajectory> {
    config.validate()?;
    let initial = SwarmState::initial(config)?;
    run_from(config, initial)
}

/// Runs `config` with steps no larger than `dt_cap` (and never above
/// [`stable_dt`]). Used to put several related runs on one time grid.
pub fn run_with_dt(config: &ScenarioConfig, dt_cap: f64) -> Result<Trajectory> {
    config.validate()?;
    let initial = SwarmState::initial(config)?;
    integrate(config, initial, stable_dt(config)?.min(dt_cap))
}

/// Runs `config` from an explicit initial state.
pub fn run_from(config: &ScenarioConfig, initial: SwarmState) -> Result<Trajectory> {
    integrate(config, initial, stable_dt(config)?)
}

fn integrate(config: &ScenarioConfig, initial: SwarmState, dt_max: f64) -> Result<Trajectory> {
    let mut snapshots = vec![initial];
    let mut state = snapshots[0].clone();
    for seg in schedule(config.numerics.t_end, config.numerics.output_interval, dt_max) {
        for _ in 0..seg.steps {
            state = step_unchecked(&state, config, seg.dt)?;
        }
        state.t = seg.t_out;
        snapshots.push(state.clone());
    }
    Ok(Trajectory { snapshots })
}
