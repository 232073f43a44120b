//! Mean-field simulation of chemotactic microscopic robot swarms.
//!
//! Robots in each controller state are described by a density on a 1D
//! domain. Densities diffuse, drift along chemical gradients and switch
//! state when the local chemistry crosses a threshold; communicating robots
//! lay down a signal that recruits searchers. An agent-based Monte Carlo
//! model of the same robots serves as an independent check on the
//! continuum solver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abm;
pub mod analysis;
pub mod chem;
pub mod controller;
pub mod engine;
pub mod error;
pub mod io;
pub mod model;

pub use error::{Result, SwarmError};
pub use model::{paper_preset, three_state_preset, total_mass, Grid1D, ScalarField, ScenarioConfig, SwarmState};
