//! Metrics computed from trajectories and the two design experiments:
//! the three-strategy comparison and the drift-speed sweep.

use rayon::prelude::*;

use crate::engine::{run, run_with_dt, stable_dt, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{ScenarioConfig, SwarmState};

/// Left edge of the target vicinity as a fraction of the domain.
pub const VICINITY_START: f64 = 0.95;

/// Time at which the strategy comparison is reported.
pub const COMPARE_TIME: f64 = 10.0;

/// A scalar observable sampled at snapshot times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub value: Vec<f64>,
}

impl TimeSeries {
    pub fn from_trajectory(traj: &Trajectory, f: impl Fn(&SwarmState) -> f64) -> Self {
        TimeSeries {
            t: traj.times(),
            value: traj.snapshots.iter().map(f).collect(),
        }
    }

    /// Linear interpolation; `None` outside the sampled range.
    pub fn at(&self, t: f64) -> Option<f64> {
        let n = self.t.len();
        if n == 0 || t < self.t[0] || t > self.t[n - 1] {
            return None;
        }
        let j = self.t.partition_point(|&s| s < t);
        if self.t[j] == t || j == 0 {
            return Some(self.value[j]);
        }
        let (t0, t1) = (self.t[j - 1], self.t[j]);
        let w = (t - t0) / (t1 - t0);
        Some(self.value[j - 1] + w * (self.value[j] - self.value[j - 1]))
    }
}

/// Total robot density in the last cell (nearest the target at `x_max`).
pub fn target_density(state: &SwarmState) -> f64 {
    let last = state.grid().n_cells - 1;
    state.n.iter().map(|f| f.values()[last]).sum()
}

/// Robot mass inside the target vicinity `[x_min + 0.95 L, x_max]`.
pub fn vicinity_mass(state: &SwarmState) -> f64 {
    let g = state.grid();
    let a = g.x_min + VICINITY_START * g.length();
    state.n.iter().map(|f| f.integral_over(a, g.x_max)).sum()
}

pub fn density_at_target(traj: &Trajectory) -> TimeSeries {
    TimeSeries::from_trajectory(traj, target_density)
}

pub fn vicinity_series(traj: &Trajectory) -> TimeSeries {
    TimeSeries::from_trajectory(traj, vicinity_mass)
}

/// First time the series reaches `n0`, interpolated linearly between
/// samples. `n0 <= 0` is met at the first sample.
pub fn first_crossing(series: &TimeSeries, n0: f64) -> Option<f64> {
    if n0 <= 0.0 {
        return series.t.first().copied();
    }
    let j = series.value.iter().position(|&m| m >= n0)?;
    if j == 0 {
        return Some(series.t[0]);
    }
    let (m0, m1) = (series.value[j - 1], series.value[j]);
    let (t0, t1) = (series.t[j - 1], series.t[j]);
    Some(t0 + (n0 - m0) / (m1 - m0) * (t1 - t0))
}

/// Time for a fraction `n0` of the robots to reach the target vicinity, or
/// `None` if that never happens within the trajectory.
pub fn aggregation_time(traj: &Trajectory, n0: f64) -> Option<f64> {
    first_crossing(&vicinity_series(traj), n0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub t: f64,
    pub density_free: f64,
    pub density_no_comm: f64,
    pub density_comm: f64,
    /// `density_comm / density_no_comm`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyComparison {
    pub free: Trajectory,
    pub no_comm: Trajectory,
    pub comm: Trajectory,
    pub report: ComparisonReport,
}

/// Free diffusion (no drift, no signal), gradient following without
/// signalling, and gradient following with signalling, all derived from
/// `base` and run to at least `t = 10`.
pub fn compare_strategies(base: &ScenarioConfig) -> Result<StrategyComparison> {
    if base.controller.n_states != 2 {
        return Err(SwarmError::Unsupported(
            "strategy comparison needs the two-state controller".into(),
        ));
    }
    let mut base = base.clone();
    base.numerics.t_end = base.numerics.t_end.max(COMPARE_TIME);
    let configs = [
        base.clone().with_drift_speed(0.0).with_signal_rate(0.0),
        base.clone().with_signal_rate(0.0),
        base,
    ];
    // One shared step so that runs differing only in inert parameters coincide.
    let dt = configs
        .iter()
        .map(stable_dt)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let mut runs: Vec<Trajectory> = configs
        .par_iter()
        .map(|cfg| run_with_dt(cfg, dt))
        .collect::<Result<_>>()?;
    let comm = runs.pop().expect("three runs");
    let no_comm = runs.pop().expect("three runs");
    let free = runs.pop().expect("three runs");

    let at = |traj: &Trajectory| density_at_target(traj).at(COMPARE_TIME).expect("run covers t = 10");
    let (density_free, density_no_comm, density_comm) = (at(&free), at(&no_comm), at(&comm));
    let report = ComparisonReport {
        t: COMPARE_TIME,
        density_free,
        density_no_comm,
        density_comm,
        ratio: density_comm / density_no_comm,
    };
    Ok(StrategyComparison {
        free,
        no_comm,
        comm,
        report,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub v_d: f64,
    pub n0: f64,
    pub t_agg: Option<f64>,
}

/// Aggregation time for every `(V_D, n0)` pair, one run per drift speed.
/// Rows are ordered by `vd_values`, then `n0_values`.
pub fn sweep_vd(base: &ScenarioConfig, vd_values: &[f64], n0_values: &[f64]) -> Result<Vec<SweepRow>> {
    if vd_values.is_empty() {
        return Err(SwarmError::InvalidConfig("sweep needs at least one drift speed".into()));
    }
    if vd_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SwarmError::InvalidConfig("drift speeds must be strictly ascending".into()));
    }
    if n0_values.iter().any(|&n0| !(0.0..=1.0).contains(&n0)) {
        return Err(SwarmError::InvalidConfig("n0 values must lie in [0, 1]".into()));
    }
    let series: Vec<TimeSeries> = vd_values
        .par_iter()
        .map(|&v| run(&base.clone().with_drift_speed(v)).map(|t| vicinity_series(&t)))
        .collect::<Result<_>>()?;
    Ok(vd_values
        .iter()
        .zip(&series)
        .flat_map(|(&v_d, s)| {
            n0_values.iter().map(move |&n0| SweepRow {
                v_d,
                n0,
                t_agg: first_crossing(s, n0),
            })
        })
        .collect())
}
