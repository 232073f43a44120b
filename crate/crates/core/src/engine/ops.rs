//! Finite-volume spatial operators on a cell-centered grid.
//!
//! Face `j` sits between cells `j - 1` and `j`; faces `0` and `n_cells` are
//! the domain walls.

use crate::model::{threshold, ChemotaxisSpec, ScalarField, TaxisDirection, TaxisMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Mirror ghost cell, zero gradient at the wall.
    ZeroFlux,
    /// Antisymmetric ghost cell, field vanishes at the wall.
    DirichletZero,
}

/// Second-order central Laplacian with ghost cells set by `bc`.
pub fn laplacian(f: &ScalarField, bc: Boundary) -> ScalarField {
    let v = f.values();
    let n = v.len();
    let inv_dx2 = 1.0 / (f.grid().dx() * f.grid().dx());
    let (left, right) = match bc {
        Boundary::ZeroFlux => (v[0], v[n - 1]),
        Boundary::DirichletZero => (-v[0], -v[n - 1]),
    };
    let out = (0..n)
        .map(|i| {
            let l = if i == 0 { left } else { v[i - 1] };
            let r = if i == n - 1 { right } else { v[i + 1] };
            ((l + r) - 2.0 * v[i]) * inv_dx2
        })
        .collect();
    ScalarField::from_values(*f.grid(), out).expect("same grid")
}

/// Upwind flux divergence `-(F_{j+1} - F_j) / dx` with closed walls: the
/// boundary faces carry no flux whatever their velocity.
pub fn advect_drift(f: &ScalarField, face_velocity: &[f64]) -> ScalarField {
    flux_divergence(f, face_velocity, false)
}

/// Same as [`advect_drift`] but with open walls: inflow brings zero,
/// outflow carries the boundary cell value out of the domain.
pub fn advect_drift_open(f: &ScalarField, face_velocity: &[f64]) -> ScalarField {
    flux_divergence(f, face_velocity, true)
}

fn flux_divergence(f: &ScalarField, face_velocity: &[f64], open: bool) -> ScalarField {
    let v = f.values();
    let n = v.len();
    assert_eq!(face_velocity.len(), n + 1, "need one velocity per face");
    let inv_dx = 1.0 / f.grid().dx();
    let mut flux = vec![0.0; n + 1];
    for j in 1..n {
        let u = face_velocity[j];
        flux[j] = if u > 0.0 { u * v[j - 1] } else { u * v[j] };
    }
    if open {
        let (ul, ur) = (face_velocity[0], face_velocity[n]);
        flux[0] = if ul < 0.0 { ul * v[0] } else { 0.0 };
        flux[n] = if ur > 0.0 { ur * v[n - 1] } else { 0.0 };
    }
    let out = (0..n).map(|i| -(flux[i + 1] - flux[i]) * inv_dx).collect();
    ScalarField::from_values(*f.grid(), out).expect("same grid")
}

/// Face values and gradients of `field`. Interior faces average / difference
/// the two neighbours; wall faces copy the adjacent cell value and the
/// nearest interior gradient.
fn face_samples(field: &ScalarField) -> (Vec<f64>, Vec<f64>) {
    let v = field.values();
    let n = v.len();
    let inv_dx = 1.0 / field.grid().dx();
    let mut value = vec![0.0; n + 1];
    let mut grad = vec![0.0; n + 1];
    for j in 1..n {
        value[j] = 0.5 * (v[j - 1] + v[j]);
        grad[j] = (v[j] - v[j - 1]) * inv_dx;
    }
    value[0] = v[0];
    value[n] = v[n - 1];
    grad[0] = grad[1];
    grad[n] = grad[n - 1];
    (value, grad)
}

/// Per-face drift velocity induced by `field` under `spec`. `eps` is the
/// threshold smoothing width (0 for an exact step).
pub fn chemotaxis_velocity(field: &ScalarField, spec: &ChemotaxisSpec, eps: f64) -> Vec<f64> {
    let faces = field.len() + 1;
    let sign = f64::from(spec.sign);
    match spec.mode {
        TaxisMode::None => vec![0.0; faces],
        TaxisMode::ConstantSpeed => {
            let (value, grad) = face_samples(field);
            (0..faces)
                .map(|j| {
                    let gate = if spec.gated {
                        threshold(value[j] - spec.gate_threshold, eps)
                    } else {
                        1.0
                    };
                    let dir = match spec.direction {
                        TaxisDirection::PlusX => 1.0,
                        TaxisDirection::SignOfGradient => signum0(grad[j]),
                    };
                    sign * spec.speed * gate * dir
                })
                .collect()
        }
        TaxisMode::LinearSensitivity => {
            let (_, grad) = face_samples(field);
            grad.into_iter().map(|g| sign * spec.sensitivity * g).collect()
        }
    }
}

/// Drift velocity felt by a single agent at `x`, sampling `field` by linear
/// interpolation. Mirrors [`chemotaxis_velocity`].
pub fn chemotaxis_velocity_at(field: &ScalarField, x: f64, zero_at_edges: bool, spec: &ChemotaxisSpec, eps: f64) -> f64 {
    let sign = f64::from(spec.sign);
    match spec.mode {
        TaxisMode::None => 0.0,
        TaxisMode::ConstantSpeed => {
            let (value, slope) = field.interpolate_with_slope(x, zero_at_edges);
            let gate = if spec.gated {
                threshold(value - spec.gate_threshold, eps)
            } else {
                1.0
            };
            let dir = match spec.direction {
                TaxisDirection::PlusX => 1.0,
                TaxisDirection::SignOfGradient => signum0(slope),
            };
            sign * spec.speed * gate * dir
        }
        TaxisMode::LinearSensitivity => {
            let (_, slope) = field.interpolate_with_slope(x, zero_at_edges);
            sign * spec.sensitivity * slope
        }
    }
}

#[inline]
fn signum0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
