//! Domain types shared by every module: the grid, scalar fields, the swarm
//! state, and the scenario configuration with its presets.

use serde::{Deserialize, Serialize};

use crate::chem;
use crate::error::{Result, SwarmError};

/// Uniform cell-centered discretization of `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1D {
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 4;

    pub fn new(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        let grid = Grid1D {
            n_cells,
            x_min,
            x_max,
        };
        grid.check()?;
        Ok(grid)
    }

    /// The unit interval with `n_cells` cells.
    pub fn unit(n_cells: usize) -> Result<Self> {
        Self::new(n_cells, 0.0, 1.0)
    }

    pub fn check(&self) -> Result<()> {
        if self.n_cells < Self::MIN_CELLS {
            return Err(SwarmError::InvalidConfig(format!(
                "grid needs at least {} cells, got {}",
                Self::MIN_CELLS,
                self.n_cells
            )));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(SwarmError::InvalidConfig(format!(
                "grid bounds must satisfy x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Index of the cell containing `x`; points outside the domain map to the
    /// nearest boundary cell and `x_max` belongs to the last cell.
    pub fn cell_index(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.dx()).floor();
        if raw <= 0.0 {
            0
        } else {
            (raw as usize).min(self.n_cells - 1)
        }
    }
}

/// One real value per grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid1D,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid1D, value: f64) -> Self {
        ScalarField {
            grid,
            values: vec![value; grid.n_cells],
        }
    }

    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_cells {
            return Err(SwarmError::InvalidConfig(format!(
                "field has {} values for a grid of {} cells",
                values.len(),
                grid.n_cells
            )));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        ScalarField {
            grid,
            values: grid.centers().into_iter().map(f).collect(),
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Midpoint-rule integral over the whole domain.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// Integral over `[a, b]`, weighting each cell by its overlap with the
    /// interval (piecewise-constant reconstruction).
    pub fn integral_over(&self, a: f64, b: f64) -> f64 {
        let dx = self.grid.dx();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let lo = self.grid.x_min + i as f64 * dx;
                let overlap = (b.min(lo + dx) - a.max(lo)).max(0.0);
                v * overlap
            })
            .sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scaled(&self, alpha: f64) -> ScalarField {
        self.map(|v| alpha * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &ScalarField) -> ScalarField {
        debug_assert_eq!(self.len(), other.len());
        ScalarField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &ScalarField) -> ScalarField {
        self.axpy(1.0, other)
    }

    /// Linear interpolation between cell centers. Outside the outermost
    /// centers the field is held flat, or ramps to zero at the domain edge
    /// when `zero_at_edges` is set (absorbing fields).
    pub fn interpolate(&self, x: f64, zero_at_edges: bool) -> f64 {
        let (value, _) = self.interpolate_with_slope(x, zero_at_edges);
        value
    }

    /// Interpolated value together with the slope of the interpolant at `x`.
    pub fn interpolate_with_slope(&self, x: f64, zero_at_edges: bool) -> (f64, f64) {
        let g = &self.grid;
        let dx = g.dx();
        let n = self.values.len();
        let s = (x - g.x_min) / dx - 0.5;
        if s <= 0.0 {
            let v0 = self.values[0];
            if zero_at_edges {
                let slope = v0 / (0.5 * dx);
                let d = (x - g.x_min).max(0.0);
                return (slope * d, slope);
            }
            return (v0, 0.0);
        }
        if s >= (n - 1) as f64 {
            let vn = self.values[n - 1];
            if zero_at_edges {
                let slope = -vn / (0.5 * dx);
                let d = (g.x_max - x).max(0.0);
                return (-slope * d, slope);
            }
            return (vn, 0.0);
        }
        let i = s.floor() as usize;
        let w = s - i as f64;
        let (a, b) = (self.values[i], self.values[i + 1]);
        (a + w * (b - a), (b - a) / dx)
    }
}

/// Step function used for every threshold in the model. With `eps == 0` it
/// is the exact step with `theta(0) = 1`; otherwise the logistic
/// `1 / (1 + exp(-u / eps))`.
#[inline]
pub fn threshold(u: f64, eps: f64) -> f64 {
    if eps > 0.0 {
        1.0 / (1.0 + (-u / eps).exp())
    } else if u >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Robot densities (one per controller state) plus the target chemical and
/// the communication signal at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub t: f64,
    pub n: Vec<ScalarField>,
    pub rho: ScalarField,
    pub c: ScalarField,
}

impl SwarmState {
    pub fn grid(&self) -> &Grid1D {
        self.rho.grid()
    }

    /// Sum of all per-state densities.
    pub fn total_density(&self) -> ScalarField {
        let mut total = ScalarField::zeros(*self.grid());
        for n in &self.n {
            total = total.add(n);
        }
        total
    }

    /// Initial state for `config`: all robots in the first state, `c = 0`,
    /// and `rho` either the closed-form steady profile or zero.
    pub fn initial(config: &ScenarioConfig) -> Result<SwarmState> {
        let grid = config.grid;
        let n1 = config.initial.density(&grid)?;
        let mut n = vec![n1];
        for _ in 1..config.controller.n_states {
            n.push(ScalarField::zeros(grid));
        }
        let rho = match config.fields.rho_mode {
            RhoMode::AnalyticSteady => {
                let src = config.fields.sources[0];
                chem::steady_state_rho(&grid, src.q, config.fields.d_rho, config.fields.gamma_rho)?
            }
            RhoMode::Dynamic => ScalarField::zeros(grid),
        };
        Ok(SwarmState {
            t: 0.0,
            n,
            rho,
            c: ScalarField::zeros(grid),
        })
    }
}

/// Total robot mass summed over states.
pub fn total_mass(state: &SwarmState) -> f64 {
    state.n.iter().map(ScalarField::integral).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaxisMode {
    None,
    ConstantSpeed,
    LinearSensitivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaxisDirection {
    /// Always toward increasing x (the literal 1D drift term).
    PlusX,
    /// Along the sign of the local field gradient.
    SignOfGradient,
}

/// How robots in one state drift in response to one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChemotaxisSpec {
    pub mode: TaxisMode,
    /// Drift speed in constant-speed mode.
    pub speed: f64,
    /// Drift per unit gradient in linear-sensitivity mode.
    pub sensitivity: f64,
    /// Whether constant-speed drift only switches on above `gate_threshold`.
    pub gated: bool,
    pub gate_threshold: f64,
    pub direction: TaxisDirection,
    /// +1 toward the field, -1 away from it.
    pub sign: i32,
}

impl ChemotaxisSpec {
    pub fn none() -> Self {
        ChemotaxisSpec {
            mode: TaxisMode::None,
            speed: 0.0,
            sensitivity: 0.0,
            gated: false,
            gate_threshold: 0.0,
            direction: TaxisDirection::PlusX,
            sign: 1,
        }
    }

    pub fn constant_speed(speed: f64, direction: TaxisDirection) -> Self {
        ChemotaxisSpec {
            mode: TaxisMode::ConstantSpeed,
            speed,
            direction,
            ..Self::none()
        }
    }

    pub fn gated_at(mut self, threshold: f64) -> Self {
        self.gated = true;
        self.gate_threshold = threshold;
        self
    }

    pub fn repulsive(mut self) -> Self {
        self.sign = -1;
        self
    }

    pub fn linear(sensitivity: f64) -> Self {
        ChemotaxisSpec {
            mode: TaxisMode::LinearSensitivity,
            sensitivity,
            ..Self::none()
        }
    }

    /// Largest drift speed this spec can produce in constant-speed mode.
    pub fn max_constant_speed(&self) -> f64 {
        match self.mode {
            TaxisMode::ConstantSpeed => self.speed.abs(),
            _ => 0.0,
        }
    }

    fn check(&self, what: &str) -> Result<()> {
        if !(self.speed >= 0.0) {
            return Err(invalid(format!("{what}: speed must be >= 0")));
        }
        if !(self.sensitivity >= 0.0) {
            return Err(invalid(format!("{what}: sensitivity must be >= 0")));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(invalid(format!("{what}: sign must be +1 or -1")));
        }
        if !self.gate_threshold.is_finite() {
            return Err(invalid(format!("{what}: gate_threshold must be finite")));
        }
        Ok(())
    }
}

/// Motion and signalling parameters of robots in one controller state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateParams {
    /// Robot diffusion coefficient.
    pub diffusion: f64,
    /// Response to the target chemical.
    pub chemotaxis: ChemotaxisSpec,
    /// Response to the communication signal.
    pub signal_taxis: ChemotaxisSpec,
    /// Signal deposition rate per unit density.
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSource {
    pub x: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoMode {
    /// Closed-form steady profile of a single source at `x_max`.
    AnalyticSteady,
    /// Evolve the chemical with its own reaction-diffusion equation.
    Dynamic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldParams {
    pub d_rho: f64,
    pub gamma_rho: f64,
    pub d_c: f64,
    pub gamma_c: f64,
    pub sources: Vec<PointSource>,
    pub rho_mode: RhoMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DispersalMode {
    Off,
    ConstantRate,
    CrowdingThreshold,
}

/// Trigger for the communicate -> disperse transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersalTrigger {
    pub mode: DispersalMode,
    pub g0: f64,
    /// Crowding density above which dispersal switches on.
    pub n2_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerParams {
    pub n_states: usize,
    /// Detection threshold on the target chemical.
    pub rho0: f64,
    /// Magnitude of the search -> communicate rate.
    pub f_rate: f64,
    pub dispersal: DispersalTrigger,
    /// Mean dispersal duration; disperse -> search happens at rate 1/tau.
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialMode {
    /// Unit mass in the single cell containing `x0`.
    Delta,
    /// Normalized Gaussian bump centered at `x0`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub mode: InitialMode,
    pub x0: f64,
    pub width: f64,
}

impl InitialCondition {
    /// Unit-mass density for the first controller state.
    pub fn density(&self, grid: &Grid1D) -> Result<ScalarField> {
        match self.mode {
            InitialMode::Delta => {
                let mut v = vec![0.0; grid.n_cells];
                v[grid.cell_index(self.x0)] = 1.0 / grid.dx();
                ScalarField::from_values(*grid, v)
            }
            InitialMode::Gaussian => {
                let w = self.width;
                let bump = ScalarField::from_fn(*grid, |x| (-(x - self.x0).powi(2) / (2.0 * w * w)).exp());
                let mass = bump.integral();
                if !(mass > 0.0) {
                    return Err(invalid("gaussian initial condition has zero mass on the grid"));
                }
                Ok(bump.scaled(1.0 / mass))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    pub cfl_safety: f64,
    pub t_end: f64,
    pub output_interval: f64,
    /// Width of the logistic threshold; 0 means an exact step.
    pub threshold_smoothing: f64,
}

/// Every model parameter plus the numerical controls of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub grid: Grid1D,
    pub flow_v: f64,
    pub states: Vec<StateParams>,
    pub fields: FieldParams,
    pub controller: ControllerParams,
    pub initial: InitialCondition,
    pub numerics: Numerics,
}

fn invalid(msg: impl Into<String>) -> SwarmError {
    SwarmError::InvalidConfig(msg.into())
}

/// Largest `cfl_safety` for which the explicit update stays monotone once the
/// diffusive and advective limits are combined.
pub const MONOTONE_SAFETY: f64 = 0.5;

impl ScenarioConfig {
    /// Checks every invariant. Returns non-fatal warnings on success.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        self.grid.check()?;
        let c = &self.controller;
        if c.n_states != 2 && c.n_states != 3 {
            return Err(invalid(format!("n_states must be 2 or 3, got {}", c.n_states)));
        }
        if self.states.len() != c.n_states {
            return Err(invalid(format!(
                "{} state parameter blocks for n_states = {}",
                self.states.len(),
                c.n_states
            )));
        }
        if !self.flow_v.is_finite() {
            return Err(invalid("flow_v must be finite"));
        }
        for (k, s) in self.states.iter().enumerate() {
            if !(s.diffusion >= 0.0) {
                return Err(invalid(format!("state {}: diffusion must be >= 0", k + 1)));
            }
            if !(s.q >= 0.0) {
                return Err(invalid(format!("state {}: q must be >= 0", k + 1)));
            }
            s.chemotaxis.check(&format!("state {} chemotaxis", k + 1))?;
            s.signal_taxis.check(&format!("state {} signal_taxis", k + 1))?;
        }

        let f = &self.fields;
        for (name, v) in [
            ("d_rho", f.d_rho),
            ("gamma_rho", f.gamma_rho),
            ("d_c", f.d_c),
            ("gamma_c", f.gamma_c),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be finite and >= 0")));
            }
        }
        for s in &f.sources {
            if !(s.q >= 0.0) {
                return Err(invalid("source intensity must be >= 0"));
            }
            if !(s.x >= self.grid.x_min && s.x <= self.grid.x_max) {
                return Err(invalid(format!("source at x = {} lies outside the domain", s.x)));
            }
        }
        if f.rho_mode == RhoMode::AnalyticSteady {
            if f.sources.len() != 1 {
                return Err(invalid("analytic-steady rho mode requires exactly one source"));
            }
            if f.sources[0].x != self.grid.x_max {
                return Err(invalid("analytic-steady rho mode requires the source at x_max"));
            }
            if !(f.d_rho > 0.0) {
                return Err(invalid("analytic-steady rho mode requires d_rho > 0"));
            }
        }

        if !(c.rho0 >= 0.0) {
            return Err(invalid("rho0 must be >= 0"));
        }
        if !(c.f_rate > 0.0) {
            return Err(invalid("f_rate must be > 0"));
        }
        if c.n_states == 3 {
            if !(c.tau > 0.0) {
                return Err(invalid("tau must be > 0 with three states"));
            }
            if !(c.dispersal.g0 >= 0.0 && c.dispersal.n2_star >= 0.0) {
                return Err(invalid("dispersal g0 and n2_star must be >= 0"));
            }
        }

        let i = &self.initial;
        if !(i.x0 >= self.grid.x_min && i.x0 <= self.grid.x_max) {
            return Err(invalid("initial x0 lies outside the domain"));
        }
        if i.mode == InitialMode::Gaussian && !(i.width > 0.0) {
            return Err(invalid("gaussian initial width must be > 0"));
        }

        let nm = &self.numerics;
        if !(nm.cfl_safety > 0.0 && nm.cfl_safety < 1.0) {
            return Err(invalid("cfl_safety must lie in (0, 1)"));
        }
        if !(nm.t_end >= 0.0 && nm.t_end.is_finite()) {
            return Err(invalid("t_end must be finite and >= 0"));
        }
        if !(nm.output_interval > 0.0) {
            return Err(invalid("output_interval must be > 0"));
        }
        if !(nm.threshold_smoothing >= 0.0) {
            return Err(invalid("threshold_smoothing must be >= 0"));
        }
        if nm.cfl_safety > MONOTONE_SAFETY {
            warnings.push(format!(
                "cfl_safety {} exceeds {}; positivity of the explicit update is not guaranteed",
                nm.cfl_safety, MONOTONE_SAFETY
            ));
        }
        let linear = self.states.iter().any(|s| {
            s.chemotaxis.mode == TaxisMode::LinearSensitivity || s.signal_taxis.mode == TaxisMode::LinearSensitivity
        });
        if linear {
            warnings.push(
                "linear-sensitivity drift is not covered by stable_dt; the CFL limit is checked every step".into(),
            );
        }
        Ok(warnings)
    }

    /// True when the signal field can become nonzero.
    pub fn signal_active(&self) -> bool {
        self.states.iter().any(|s| s.q > 0.0)
    }

    /// Sets the constant-speed drift magnitude of every state to `v_d`.
    pub fn with_drift_speed(mut self, v_d: f64) -> Self {
        for s in &mut self.states {
            if s.chemotaxis.mode == TaxisMode::ConstantSpeed {
                s.chemotaxis.speed = v_d;
            }
            if s.signal_taxis.mode == TaxisMode::ConstantSpeed {
                s.signal_taxis.speed = v_d;
            }
        }
        self
    }

    /// Sets every state's signal deposition rate to `q`.
    pub fn with_signal_rate(mut self, q: f64) -> Self {
        for s in &mut self.states {
            s.q = q;
        }
        self
    }

    /// Re-grids the configuration with `n_cells` cells over the same domain.
    pub fn with_cells(mut self, n_cells: usize) -> Self {
        self.grid.n_cells = n_cells;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.numerics.t_end = t_end;
        self
    }
}

/// The two-state 1D target-localization scenario in dimensionless units.
///
/// Robots start at `x = 0` in the search state; the target at `x = 1` emits
/// the chemical whose steady profile is used directly. Searching robots
/// drift toward `+x` once the signal exceeds `c0 = 0.001`; communicating
/// robots drift toward `+x` at `V_D` and deposit signal at `q_c`.
pub fn paper_preset() -> ScenarioConfig {
    let v_d = 0.1;
    let d_n = 0.01;
    ScenarioConfig {
        grid: Grid1D {
            n_cells: 200,
            x_min: 0.0,
            x_max: 1.0,
        },
        flow_v: 0.0,
        states: vec![
            StateParams {
                diffusion: d_n,
                chemotaxis: ChemotaxisSpec::none(),
                signal_taxis: ChemotaxisSpec::constant_speed(v_d, TaxisDirection::PlusX).gated_at(0.001),
                q: 0.0,
            },
            StateParams {
                diffusion: d_n,
                chemotaxis: ChemotaxisSpec::constant_speed(v_d, TaxisDirection::PlusX),
                signal_taxis: ChemotaxisSpec::none(),
                q: 0.1,
            },
        ],
        fields: FieldParams {
            d_rho: 0.2,
            gamma_rho: 0.5,
            d_c: 0.05,
            gamma_c: 0.01,
            sources: vec![PointSource { x: 1.0, q: 0.1 }],
            rho_mode: RhoMode::AnalyticSteady,
        },
        controller: ControllerParams {
            n_states: 2,
            rho0: 0.01,
            f_rate: 1.0,
            dispersal: DispersalTrigger {
                mode: DispersalMode::Off,
                g0: 0.0,
                n2_star: 0.0,
            },
            tau: 1.0,
        },
        initial: InitialCondition {
            mode: InitialMode::Delta,
            x0: 0.0,
            width: 0.05,
        },
        numerics: Numerics {
            cfl_safety: 0.4,
            t_end: 20.0,
            output_interval: 0.1,
            threshold_smoothing: 0.0,
        },
    }
}

/// Three-state search / communicate / disperse controller on the same
/// domain, with dispersing robots drifting down the chemical gradient and a
/// constant dispersal rate of 0.1.
pub fn three_state_preset() -> ScenarioConfig {
    let mut cfg = paper_preset();
    let v_d = 0.1;
    cfg.states[0].signal_taxis =
        ChemotaxisSpec::constant_speed(v_d, TaxisDirection::SignOfGradient).gated_at(0.001);
    cfg.states[1].chemotaxis = ChemotaxisSpec::constant_speed(v_d, TaxisDirection::SignOfGradient);
    cfg.states.push(StateParams {
        diffusion: 0.01,
        chemotaxis: ChemotaxisSpec::constant_speed(v_d, TaxisDirection::SignOfGradient).repulsive(),
        signal_taxis: ChemotaxisSpec::none(),
        q: 0.0,
    });
    cfg.controller.n_states = 3;
    cfg.controller.dispersal = DispersalTrigger {
        mode: DispersalMode::ConstantRate,
        g0: 0.1,
        n2_star: 0.0,
    };
    cfg.controller.tau = 2.0;
    cfg
}
