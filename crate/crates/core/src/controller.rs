//! State-transition kinetics of the robot controller.
//!
//! Two states: search -> communicate at rate `F(rho)`.
//! Three states adds communicate -> disperse at rate `G(n2, rho, c)` and
//! disperse -> search at rate `1 / tau`.

use crate::error::{Result, SwarmError};
use crate::model::{threshold, ControllerParams, DispersalMode, ScalarField, ScenarioConfig, SwarmState};

/// Search -> communicate rate `k_F * theta(rho - rho0)`.
pub fn rate_f(rho: f64, params: &ControllerParams, eps: f64) -> f64 {
    params.f_rate * threshold(rho - params.rho0, eps)
}

/// Communicate -> disperse rate.
pub fn rate_g(n2: f64, _rho: f64, _c: f64, params: &ControllerParams, eps: f64) -> Result<f64> {
    if params.n_states != 3 {
        return Err(SwarmError::Unsupported(
            "dispersal rate is only defined for the three-state controller".into(),
        ));
    }
    let g = &params.dispersal;
    Ok(match g.mode {
        DispersalMode::Off => 0.0,
        DispersalMode::ConstantRate => g.g0,
        DispersalMode::CrowdingThreshold => g.g0 * threshold(n2 - g.n2_star, eps),
    })
}

/// Outgoing transition rate of a robot in `state` (0-based) given the local
/// field values. Every state has exactly one successor.
pub fn exit_rate(state: usize, n2: f64, rho: f64, c: f64, params: &ControllerParams, eps: f64) -> f64 {
    match (params.n_states, state) {
        (_, 0) => rate_f(rho, params, eps),
        (3, 1) => rate_g(n2, rho, c, params, eps).unwrap_or(0.0),
        (3, 2) => 1.0 / params.tau,
        _ => 0.0,
    }
}

/// Successor state of `state` (0-based).
pub fn next_state(state: usize, n_states: usize) -> usize {
    if state + 1 == n_states {
        0
    } else {
        state + 1
    }
}

/// Pointwise kinetic increments `dn_k/dt` for every state.
pub fn reaction_terms(state: &SwarmState, config: &ScenarioConfig) -> Result<Vec<ScalarField>> {
    let params = &config.controller;
    let eps = config.numerics.threshold_smoothing;
    let grid = *state.grid();
    let n_states = params.n_states;
    if state.n.len() != n_states {
        return Err(SwarmError::InvalidConfig(format!(
            "state holds {} densities for a {}-state controller",
            state.n.len(),
            n_states
        )));
    }
    let mut out = vec![vec![0.0; grid.n_cells]; n_states];
    let rho = state.rho.values();
    let c = state.c.values();
    for i in 0..grid.n_cells {
        let n2 = state.n[1].values()[i];
        // Flux out of each state into its successor.
        let mut flow = [0.0; 3];
        for (k, f) in flow.iter_mut().enumerate().take(n_states) {
            let rate = exit_rate(k, n2, rho[i], c[i], params, eps);
            *f = rate * state.n[k].values()[i];
        }
        if n_states == 2 {
            out[0][i] = -flow[0];
            out[1][i] = flow[0];
        } else {
            out[0][i] = -flow[0] + flow[2];
            out[1][i] = flow[0] - flow[1];
            out[2][i] = flow[1] - flow[2];
        }
    }
    out.into_iter().map(|v| ScalarField::from_values(grid, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{paper_preset, three_state_preset, DispersalTrigger, Grid1D};

    fn two_state() -> ControllerParams {
        paper_preset().controller
    }

    fn three_state(mode: DispersalMode) -> ControllerParams {
        let mut p = three_state_preset().controller;
        p.dispersal = DispersalTrigger {
            mode,
            g0: 0.2,
            n2_star: 1.5,
        };
        p
    }

    #[test]
    fn f_is_a_step_at_rho0() {
        let p = two_state();
        assert_eq!(rate_f(0.02, &p, 0.0), 1.0);
        assert_eq!(rate_f(0.005, &p, 0.0), 0.0);
        assert_eq!(rate_f(0.01, &p, 0.0), 1.0);
    }

    #[test]
    fn g_modes() {
        let off = three_state(DispersalMode::Off);
        assert_eq!(rate_g(5.0, 0.1, 0.1, &off, 0.0).unwrap(), 0.0);
        let constant = three_state(DispersalMode::ConstantRate);
        assert_eq!(rate_g(0.0, 0.0, 0.0, &constant, 0.0).unwrap(), 0.2);
        assert_eq!(rate_g(9.0, 1.0, 3.0, &constant, 0.0).unwrap(), 0.2);
        let crowd = three_state(DispersalMode::CrowdingThreshold);
        assert_eq!(rate_g(0.0, 0.1, 0.1, &crowd, 0.0).unwrap(), 0.0);
        assert_eq!(rate_g(2.0, 0.1, 0.1, &crowd, 0.0).unwrap(), 0.2);
    }

    #[test]
    fn g_rejected_for_two_states() {
        assert!(rate_g(0.0, 0.0, 0.0, &two_state(), 0.0).is_err());
    }

    fn state_with(cfg: &ScenarioConfig, n: Vec<Vec<f64>>) -> SwarmState {
        let mut s = SwarmState::initial(cfg).unwrap();
        let g = *s.grid();
        s.n = n.into_iter().map(|v| ScalarField::from_values(g, v).unwrap()).collect();
        s
    }

    #[test]
    fn no_searchers_no_kinetics() {
        let cfg = paper_preset().with_cells(8);
        let s = state_with(&cfg, vec![vec![0.0; 8], vec![3.0; 8]]);
        let d = reaction_terms(&s, &cfg).unwrap();
        assert!(d.iter().all(|f| f.values().iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn two_state_increments() {
        let cfg = paper_preset().with_cells(8);
        let n1: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let s = state_with(&cfg, vec![n1.clone(), vec![1.0; 8]]);
        let d = reaction_terms(&s, &cfg).unwrap();
        for i in 0..8 {
            assert_eq!(d[0].values()[i], -n1[i]);
            assert_eq!(d[1].values()[i], n1[i]);
        }
    }

    #[test]
    fn three_state_reduces_to_two_state() {
        let mut cfg3 = three_state_preset().with_cells(8);
        cfg3.controller.dispersal.mode = DispersalMode::Off;
        let cfg2 = paper_preset().with_cells(8);
        let n1: Vec<f64> = (0..8).map(|i| 0.5 + i as f64).collect();
        let n2: Vec<f64> = (0..8).map(|i| 2.0 - 0.1 * i as f64).collect();
        let d3 = reaction_terms(&state_with(&cfg3, vec![n1.clone(), n2.clone(), vec![0.0; 8]]), &cfg3).unwrap();
        let d2 = reaction_terms(&state_with(&cfg2, vec![n1, n2]), &cfg2).unwrap();
        assert_eq!(d3[0], d2[0]);
        assert_eq!(d3[1], d2[1]);
        assert!(d3[2].values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn three_state_kinetics_close() {
        let cfg = three_state_preset().with_cells(6);
        let g = Grid1D::unit(6).unwrap();
        let s = state_with(
            &cfg,
            vec![vec![1.0, 0.0, 2.0, 0.5, 0.1, 3.0], vec![0.3; 6], vec![0.7, 0.2, 0.0, 1.0, 4.0, 0.0]],
        );
        let d = reaction_terms(&s, &cfg).unwrap();
        for i in 0..g.n_cells {
            let sum: f64 = d.iter().map(|f| f.values()[i]).sum();
            assert!(sum.abs() < 1e-15);
        }
        // dn3 = G n2 - n3 / tau with G = 0.1, tau = 2.
        assert!((d[2].values()[0] - (0.1 * 0.3 - 0.7 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn successor_cycle() {
        assert_eq!(next_state(0, 2), 1);
        assert_eq!(next_state(1, 2), 0);
        assert_eq!(next_state(1, 3), 2);
        assert_eq!(next_state(2, 3), 0);
    }
}
