//! Agent-based Monte Carlo model of the same robots.
//!
//! Each robot performs an Euler-Maruyama random walk with the drift its
//! state prescribes, reflects off the walls, and switches state with
//! probability `1 - exp(-rate * dt)` per step. The signal is still a grid
//! field, fed by the histogram of depositing robots.
//!
//! Agents are processed in fixed-size chunks, each with its own ChaCha
//! stream, so results depend only on the seed and not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::controller::{exit_rate, next_state};
use crate::engine::ops::chemotaxis_velocity_at;
use crate::engine::{advance_rho_field, advance_signal_field, schedule, stable_dt, Trajectory};
use crate::error::{Result, SwarmError};
use crate::model::{DispersalMode, Grid1D, InitialMode, ScalarField, ScenarioConfig, SwarmState};

/// Agents per RNG stream.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct AgentPopulation {
    pub positions: Vec<f64>,
    pub states: Vec<u8>,
    pub rng_seed: u64,
}

impl AgentPopulation {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `m` agents in the first state drawn from the initial density of
    /// `config`: uniform within the starting cell for a delta start, a
    /// reflected normal for a Gaussian start.
    pub fn initial(config: &ScenarioConfig, m: usize, seed: u64) -> Self {
        let grid = config.grid;
        let init = &config.initial;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let positions = (0..m)
            .map(|_| match init.mode {
                InitialMode::Delta => {
                    let cell = grid.cell_index(init.x0);
                    let lo = grid.x_min + cell as f64 * grid.dx();
                    lo + rng.random::<f64>() * grid.dx()
                }
                InitialMode::Gaussian => {
                    let z: f64 = rng.sample(StandardNormal);
                    reflect(init.x0 + init.width * z, grid.x_min, grid.x_max)
                }
            })
            .collect();
        AgentPopulation {
            positions,
            states: vec![0; m],
            rng_seed: seed,
        }
    }
}

/// Independent random streams, one per chunk of agents.
#[derive(Debug, Clone)]
pub struct AbmRng {
    streams: Vec<ChaCha8Rng>,
}

impl AbmRng {
    pub fn new(seed: u64, n_agents: usize) -> Self {
        let streams = (0..n_agents.div_ceil(CHUNK).max(1))
            .map(|k| {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                r.set_stream(k as u64);
                r
            })
            .collect();
        AbmRng { streams }
    }
}

#[inline]
fn reflect(mut x: f64, lo: f64, hi: f64) -> f64 {
    if !x.is_finite() {
        return lo;
    }
    loop {
        if x < lo {
            x = 2.0 * lo - x;
        } else if x > hi {
            x = 2.0 * hi - x;
        } else {
            return x;
        }
    }
}

/// Frozen grid fields seen by the agents during one step.
#[derive(Debug, Clone, Copy)]
pub struct AgentFields<'a> {
    pub rho: &'a ScalarField,
    pub c: &'a ScalarField,
}

/// One step of every agent; returns the updated population.
pub fn abm_step(
    pop: &AgentPopulation,
    fields: AgentFields<'_>,
    config: &ScenarioConfig,
    dt: f64,
    rng: &mut AbmRng,
) -> Result<AgentPopulation> {
    let mut next = pop.clone();
    advance_agents(&mut next, fields, config, dt, rng)?;
    Ok(next)
}

fn advance_agents(
    pop: &mut AgentPopulation,
    fields: AgentFields<'_>,
    config: &ScenarioConfig,
    dt: f64,
    rng: &mut AbmRng,
) -> Result<()> {
    if !(dt > 0.0) {
        return Err(SwarmError::InvalidConfig("agent step needs dt > 0".into()));
    }
    let chunks = pop.len().div_ceil(CHUNK);
    if rng.streams.len() < chunks {
        return Err(SwarmError::InvalidConfig(format!(
            "{} random streams for {} agent chunks",
            rng.streams.len(),
            chunks
        )));
    }
    let grid = config.grid;
    let crowding = config.controller.n_states == 3 && config.controller.dispersal.mode == DispersalMode::CrowdingThreshold;
    let n2 = if crowding {
        Some(density_histogram(pop, &grid, 1))
    } else {
        None
    };
    let eps = config.numerics.threshold_smoothing;
    let n_states = config.controller.n_states;
    let (lo, hi) = (grid.x_min, grid.x_max);

    pop.positions
        .par_chunks_mut(CHUNK)
        .zip(pop.states.par_chunks_mut(CHUNK))
        .zip(rng.streams.par_iter_mut())
        .for_each(|((xs, ks), r)| {
            for (x, k) in xs.iter_mut().zip(ks.iter_mut()) {
                let s = &config.states[*k as usize];
                let v = config.flow_v
                    + chemotaxis_velocity_at(fields.rho, *x, false, &s.chemotaxis, eps)
                    + chemotaxis_velocity_at(fields.c, *x, true, &s.signal_taxis, eps);
                let xi: f64 = r.sample(StandardNormal);
                *x = reflect(*x + v * dt + (2.0 * s.diffusion * dt).sqrt() * xi, lo, hi);

                let n2_here = n2.as_ref().map_or(0.0, |h| h.values()[grid.cell_index(*x)]);
                let rate = exit_rate(
                    *k as usize,
                    n2_here,
                    fields.rho.interpolate(*x, false),
                    fields.c.interpolate(*x, true),
                    &config.controller,
                    eps,
                );
                if rate > 0.0 {
                    let p = -(-rate * dt).exp_m1();
                    if r.random::<f64>() < p {
                        *k = next_state(*k as usize, n_states) as u8;
                    }
                }
            }
        });
    Ok(())
}

/// Per-cell density of agents in `state_index`, normalized by the whole
/// population so it integrates to that state's fraction.
pub fn density_histogram(pop: &AgentPopulation, grid: &Grid1D, state_index: usize) -> ScalarField {
    let mut counts = vec![0u64; grid.n_cells];
    for (&x, &k) in pop.positions.iter().zip(&pop.states) {
        if k as usize == state_index {
            counts[grid.cell_index(x)] += 1;
        }
    }
    let scale = if pop.is_empty() {
        0.0
    } else {
        1.0 / (pop.len() as f64 * grid.dx())
    };
    ScalarField::from_values(*grid, counts.into_iter().map(|c| c as f64 * scale).collect())
        .expect("histogram matches grid")
}

fn histograms(pop: &AgentPopulation, config: &ScenarioConfig) -> Vec<ScalarField> {
    (0..config.controller.n_states)
        .map(|k| density_histogram(pop, &config.grid, k))
        .collect()
}

/// Runs `m` agents under `config` on the PDE's output schedule and time
/// step. Snapshots carry per-state histograms in place of densities.
pub fn abm_run(config: &ScenarioConfig, m: usize, seed: u64) -> Result<Trajectory> {
    config.validate()?;
    let mut pop = AgentPopulation::initial(config, m, seed);
    let mut rng = AbmRng::new(seed, m);
    let start = SwarmState::initial(config)?;
    let mut rho = start.rho;
    let mut c = start.c;
    let mut snapshots = vec![SwarmState {
        t: 0.0,
        n: histograms(&pop, config),
        rho: rho.clone(),
        c: c.clone(),
    }];
    let dt_max = stable_dt(config)?;
    for seg in schedule(config.numerics.t_end, config.numerics.output_interval, dt_max) {
        for _ in 0..seg.steps {
            let deposit = if config.signal_active() {
                histograms(&pop, config)
            } else {
                Vec::new()
            };
            advance_agents(&mut pop, AgentFields { rho: &rho, c: &c }, config, seg.dt, &mut rng)?;
            if config.signal_active() {
                c = advance_signal_field(&c, &deposit, config, seg.dt)?;
            }
            rho = advance_rho_field(&rho, config, seg.dt)?;
        }
        snapshots.push(SwarmState {
            t: seg.t_out,
            n: histograms(&pop, config),
            rho: rho.clone(),
            c: c.clone(),
        });
    }
    Ok(Trajectory { snapshots })
}

/// `sum |a - b| dx` between two fields on the same grid.
pub fn l1_distance(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        * a.grid().dx()
}
