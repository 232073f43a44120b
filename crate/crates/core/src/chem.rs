//! Target chemical `rho` and communication signal `c`.
//!
//! `rho` is either the closed-form steady profile of a single source at the
//! right edge or evolves under diffusion, flow, point sources and decay with
//! zero-flux walls. `c` diffuses, decays and is deposited by robots; it is
//! absorbed (`c = 0`) at both ends of the domain.

use crate::engine::ops::{advect_drift_open, advect_drift, laplacian, Boundary};
use crate::error::{Result, SwarmError};
use crate::model::{FieldParams, Grid1D, ScalarField};

/// Steady profile `Q0 * exp(-sqrt(gamma/D) * (x_source - x))` at a point.
pub fn steady_rho_at(x: f64, x_source: f64, q0: f64, d_rho: f64, gamma_rho: f64) -> f64 {
    q0 * (-(gamma_rho / d_rho).sqrt() * (x_source - x)).exp()
}

/// Closed-form steady chemical profile of a source of intensity `q0` at the
/// right edge of `grid`, sampled at cell centers.
pub fn steady_state_rho(grid: &Grid1D, q0: f64, d_rho: f64, gamma_rho: f64) -> Result<ScalarField> {
    if !(d_rho > 0.0) {
        return Err(SwarmError::InvalidConfig("steady rho profile needs d_rho > 0".into()));
    }
    if !(gamma_rho >= 0.0 && q0 >= 0.0) {
        return Err(SwarmError::InvalidConfig(
            "steady rho profile needs gamma_rho >= 0 and q0 >= 0".into(),
        ));
    }
    let x_source = grid.x_max;
    Ok(ScalarField::from_fn(*grid, |x| steady_rho_at(x, x_source, q0, d_rho, gamma_rho)))
}

/// Largest positivity-preserving explicit step for the chemical equation.
pub fn rho_dt_bound(grid: &Grid1D, d_rho: f64, gamma_rho: f64, flow_v: f64) -> f64 {
    let dx = grid.dx();
    1.0 / (2.0 * d_rho / (dx * dx) + flow_v.abs() / dx + gamma_rho)
}

/// Largest positivity-preserving explicit step for the signal equation. The
/// absorbing ghost cell makes the boundary stencil weight `3 D / dx^2`.
pub fn signal_dt_bound(grid: &Grid1D, d_c: f64, gamma_c: f64, flow_v: f64) -> f64 {
    let dx = grid.dx();
    1.0 / (3.0 * d_c / (dx * dx) + flow_v.abs() / dx + gamma_c)
}

/// One explicit step of the chemical equation with zero-flux walls. Each
/// point source deposits `Q_i / dx` per unit time into the cell holding it.
pub fn step_rho(rho: &ScalarField, params: &FieldParams, flow_v: f64, dt: f64) -> Result<ScalarField> {
    let grid = *rho.grid();
    let bound = rho_dt_bound(&grid, params.d_rho, params.gamma_rho, flow_v);
    if !(dt > 0.0) || dt > bound {
        return Err(SwarmError::Unstable {
            operator: "step_rho",
            dt,
            bound,
        });
    }
    let dx = grid.dx();
    let lap = laplacian(rho, Boundary::ZeroFlux);
    let faces = vec![flow_v; grid.n_cells + 1];
    let adv = advect_drift(rho, &faces);
    let mut source = vec![0.0; grid.n_cells];
    for s in &params.sources {
        source[grid.cell_index(s.x)] += s.q / dx;
    }
    let values = rho
        .values()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            r + dt * (params.d_rho * lap.values()[i] + adv.values()[i] + source[i] - params.gamma_rho * r)
        })
        .collect();
    ScalarField::from_values(grid, values)
}

/// One explicit step of the signal equation with source `q_c * n2` and
/// absorbing walls.
pub fn step_c(
    c: &ScalarField,
    n2: &ScalarField,
    q_c: f64,
    d_c: f64,
    gamma_c: f64,
    flow_v: f64,
    dt: f64,
) -> Result<ScalarField> {
    if !(q_c >= 0.0) {
        return Err(SwarmError::InvalidConfig("q_c must be >= 0".into()));
    }
    advance_signal(c, |i| q_c * n2.values()[i], d_c, gamma_c, flow_v, dt)
}

/// Signal step with an arbitrary per-cell deposition rate.
pub(crate) fn advance_signal(
    c: &ScalarField,
    deposition: impl Fn(usize) -> f64,
    d_c: f64,
    gamma_c: f64,
    flow_v: f64,
    dt: f64,
) -> Result<ScalarField> {
    if !(gamma_c >= 0.0) || !(d_c >= 0.0) {
        return Err(SwarmError::InvalidConfig("d_c and gamma_c must be >= 0".into()));
    }
    let grid = *c.grid();
    let bound = signal_dt_bound(&grid, d_c, gamma_c, flow_v);
    if !(dt > 0.0) || dt > bound {
        return Err(SwarmError::Unstable {
            operator: "step_c",
            dt,
            bound,
        });
    }
    let lap = laplacian(c, Boundary::DirichletZero);
    let faces = vec![flow_v; grid.n_cells + 1];
    let adv = advect_drift_open(c, &faces);
    let values = c
        .values()
        .iter()
        .enumerate()
        .map(|(i, &ci)| ci + dt * (d_c * lap.values()[i] + adv.values()[i] + deposition(i) - gamma_c * ci))
        .collect();
    ScalarField::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PointSource, RhoMode};
    use approx::assert_relative_eq;

    fn grid() -> Grid1D {
        Grid1D::unit(200).unwrap()
    }

    fn dynamic(q: f64, d: f64, gamma: f64, x: f64) -> FieldParams {
        FieldParams {
            d_rho: d,
            gamma_rho: gamma,
            d_c: 0.05,
            gamma_c: 0.01,
            sources: vec![PointSource { x, q }],
            rho_mode: RhoMode::Dynamic,
        }
    }

    #[test]
    fn steady_profile_endpoints() {
        assert_eq!(steady_rho_at(1.0, 1.0, 0.1, 0.2, 0.5), 0.1);
        // 0.1 * exp(-sqrt(2.5)) evaluated at 40 digits.
        assert_relative_eq!(
            steady_rho_at(0.0, 1.0, 0.1, 0.2, 0.5),
            0.020_574_066_108_381_444,
            max_relative = 1e-14
        );
    }

    #[test]
    fn steady_profile_on_grid() {
        let rho = steady_state_rho(&grid(), 0.1, 0.2, 0.5).unwrap();
        assert_relative_eq!(rho.values()[0], 0.020_655_553_192_310_89, max_relative = 1e-14);
        assert!(rho.values().windows(2).all(|w| w[1] > w[0]));
        assert!(rho.max() < 0.1);

        let flat = steady_state_rho(&grid(), 0.1, 0.2, 0.0).unwrap();
        assert!(flat.values().iter().all(|&v| v == 0.1));
    }

    #[test]
    fn steady_profile_rejects_zero_diffusion() {
        assert!(steady_state_rho(&grid(), 0.1, 0.0, 0.5).is_err());
    }

    #[test]
    fn rho_zero_is_fixed_point() {
        let g = grid();
        let p = dynamic(0.0, 0.2, 0.5, 1.0);
        let out = step_rho(&ScalarField::zeros(g), &p, 0.0, 1e-5).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rho_rejects_unstable_step() {
        let g = grid();
        let p = dynamic(0.1, 0.2, 0.5, 1.0);
        let bound = rho_dt_bound(&g, 0.2, 0.5, 0.0);
        assert!(step_rho(&ScalarField::zeros(g), &p, 0.0, bound * 1.01).is_err());
        assert!(step_rho(&ScalarField::zeros(g), &p, 0.0, bound).is_ok());
    }

    #[test]
    fn rho_single_cell_source_matches_scalar_ode() {
        // D = 0, v = 0: the source cell obeys r' = Q/dx - gamma r.
        let g = grid();
        let (q, gamma) = (0.1, 0.5);
        let p = dynamic(q, 0.0, gamma, 0.5);
        let dt = 1e-3;
        let mut rho = ScalarField::zeros(g);
        let steps = 4000;
        for _ in 0..steps {
            rho = step_rho(&rho, &p, 0.0, dt).unwrap();
        }
        let t = steps as f64 * dt;
        let exact = q / (g.dx() * gamma) * (1.0 - (-gamma * t).exp());
        let cell = g.cell_index(0.5);
        assert_relative_eq!(rho.values()[cell], exact, max_relative = 1e-3);
        assert_eq!(rho.integral(), rho.values()[cell] * g.dx());
    }

    #[test]
    fn rho_mass_balance_reaches_source_over_decay() {
        let g = Grid1D::unit(50).unwrap();
        let p = FieldParams {
            sources: vec![PointSource { x: 1.0, q: 0.1 }, PointSource { x: 0.3, q: 0.05 }],
            ..dynamic(0.0, 0.2, 0.5, 1.0)
        };
        let dt = 0.4 * rho_dt_bound(&g, p.d_rho, p.gamma_rho, 0.0);
        let mut rho = ScalarField::zeros(g);
        let mut t = 0.0;
        while t < 30.0 {
            rho = step_rho(&rho, &p, 0.0, dt).unwrap();
            t += dt;
        }
        let target = 0.15 / 0.5;
        assert_relative_eq!(rho.integral(), target, max_relative = 1e-3);
    }

    #[test]
    fn signal_zero_is_fixed_point() {
        let g = grid();
        let z = ScalarField::zeros(g);
        let out = step_c(&z, &z, 0.1, 0.05, 0.01, 0.0, 1e-4).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn signal_without_diffusion_matches_scalar_ode() {
        let g = grid();
        let (q_c, gamma_c, nbar) = (0.1, 0.01, 2.0);
        let n2 = ScalarField::constant(g, nbar);
        let mut c = ScalarField::zeros(g);
        let dt = 0.01;
        let steps = 1000;
        for _ in 0..steps {
            c = step_c(&c, &n2, q_c, 0.0, gamma_c, 0.0, dt).unwrap();
        }
        let t = steps as f64 * dt;
        let exact = q_c * nbar / gamma_c * (1.0 - (-gamma_c * t).exp());
        for &v in &c.values()[1..g.n_cells - 1] {
            assert_relative_eq!(v, exact, max_relative = 1e-3);
        }
    }

    #[test]
    fn signal_ghosts_vanish_at_walls() {
        // Absorbing walls: the ghost -c[0] makes the linear interpolant zero at x = 0.
        let g = Grid1D::unit(8).unwrap();
        let c = ScalarField::constant(g, 1.0);
        let lap = laplacian(&c, Boundary::DirichletZero);
        let dx2 = g.dx() * g.dx();
        assert_relative_eq!(lap.values()[0], -2.0 / dx2);
        assert_relative_eq!(lap.values()[7], -2.0 / dx2);
        assert_eq!(lap.values()[3], 0.0);

        let n2 = ScalarField::constant(g, 1.0);
        let out = step_c(&c, &n2, 0.1, 0.05, 0.01, 0.0, 1e-3).unwrap();
        assert!(out.values()[0] < out.values()[3]);
        assert_eq!(out.values()[0], out.values()[7]);
    }

    #[test]
    fn signal_rejects_bad_inputs() {
        let g = grid();
        let z = ScalarField::zeros(g);
        assert!(step_c(&z, &z, -0.1, 0.05, 0.01, 0.0, 1e-4).is_err());
        assert!(step_c(&z, &z, 0.1, 0.05, -0.01, 0.0, 1e-4).is_err());
        assert!(step_c(&z, &z, 0.1, 0.05, 0.01, 0.0, 1e-3).is_err());
    }

    #[test]
    fn signal_linear_in_state_and_source() {
        let g = Grid1D::unit(16).unwrap();
        let c = ScalarField::from_fn(g, |x| x * (1.0 - x));
        let n2 = ScalarField::from_fn(g, |x| (3.0 * x).sin().abs());
        let base = step_c(&c, &n2, 0.1, 0.05, 0.01, 0.0, 1e-3).unwrap();
        for alpha in [0.5, 2.0, 4.0] {
            let scaled = step_c(&c.scaled(alpha), &n2.scaled(alpha), 0.1, 0.05, 0.01, 0.0, 1e-3).unwrap();
            assert_eq!(scaled, base.scaled(alpha));
        }
    }

    #[test]
    fn signal_outflow_leaves_with_the_flow() {
        let g = Grid1D::unit(20).unwrap();
        let c = ScalarField::constant(g, 1.0);
        let z = ScalarField::zeros(g);
        let out = step_c(&c, &z, 0.0, 0.0, 0.0, 0.5, 1e-3).unwrap();
        // Interior cells see no net flux, the inflow cell loses mass, the outflow cell keeps its inflow.
        assert!(out.values()[0] < 1.0);
        assert_eq!(out.values()[10], 1.0);
        assert_relative_eq!(out.integral(), 1.0 - 1e-3 * 0.5, max_relative = 1e-12);
    }
}
