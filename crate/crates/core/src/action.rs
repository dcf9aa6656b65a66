//! Reduced action, its Riemann-sheet continuation, conjugate momentum,
//! quantum potential and effective quantum mass.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::numerics::central_derivative;
use crate::params::ModelParams;
use crate::wavefunction::{checked_amplitude_squared, phase_components};

/// Default relative energy step for derivatives with respect to `E`.
pub const DEFAULT_ENERGY_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionSample {
    pub x: f64,
    /// Principal tangent branch, in `(-πħ/2, πħ/2]`.
    pub w_principal: f64,
    pub w_unwrapped: f64,
    pub sheet: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumMassSample {
    pub x: f64,
    pub q: f64,
    pub m_q: f64,
}

/// Folds an angle from `(-π, π]` onto the tangent branch `(-π/2, π/2]`.
fn fold_to_tangent_branch(phi: f64) -> f64 {
    if phi > FRAC_PI_2 {
        phi - PI
    } else if phi <= -FRAC_PI_2 {
        phi + PI
    } else {
        phi
    }
}

/// `ħ·arctan((sin kx - α sin(kx+β)) / (cos kx + α cos(kx+β)))` on the principal branch.
pub fn reduced_action_principal(x: f64, p: &ModelParams) -> f64 {
    let (num, den) = phase_components(x, p);
    p.hbar() * fold_to_tangent_branch(num.atan2(den))
}

/// Marches the principal action from `x = 0` and counts Riemann sheets.
///
/// The step is chosen so that the continuous action changes by at most
/// `πħ/8` between samples, so any principal jump larger than `πħ/2` is a
/// branch crossing.
#[derive(Debug, Clone)]
pub struct ActionUnwrapper {
    params: ModelParams,
    max_step: f64,
    x: f64,
    principal: f64,
    sheet: i64,
}

impl ActionUnwrapper {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let a = params.alpha();
        if a == 1.0 {
            return Err(ModelError::invalid(
                "alpha",
                "must differ from 1 to unwrap the action (standing wave has no running phase)",
            ));
        }
        // |dW/dx|/ħ peaks at k(1+α)/|1-α| on the nodes
        let max_rate = params.k() * (1.0 + a) / (1.0 - a).abs();
        Ok(Self {
            params: *params,
            max_step: (PI / 8.0) / max_rate,
            x: 0.0,
            principal: reduced_action_principal(0.0, params) / params.hbar(),
            sheet: 0,
        })
    }

    /// Moves the marcher to `x` (either direction) and returns the sample there.
    pub fn advance_to(&mut self, x: f64) -> Result<ActionSample> {
        if !x.is_finite() {
            return Err(ModelError::invalid("x", "must be finite"));
        }
        let span = x - self.x;
        let n = (span.abs() / self.max_step).ceil() as usize;
        if n > 500_000_000 {
            return Err(ModelError::NumericalFailure(format!(
                "unwrapping to x = {x} needs {n} steps"
            )));
        }
        let start = self.x;
        for i in 1..=n {
            let xi = if i == n {
                x
            } else {
                start + span * (i as f64 / n as f64)
            };
            let next = reduced_action_principal(xi, &self.params) / self.params.hbar();
            self.sheet -= ((next - self.principal) / PI).round() as i64;
            self.principal = next;
        }
        self.x = x;
        let hbar = self.params.hbar();
        Ok(ActionSample {
            x,
            w_principal: hbar * self.principal,
            w_unwrapped: hbar * (self.principal + self.sheet as f64 * PI),
            sheet: self.sheet,
        })
    }
}

/// Continuous reduced action at `x`, anchored to the principal value at 0.
pub fn reduced_action_sample(x: f64, p: &ModelParams) -> Result<ActionSample> {
    ActionUnwrapper::new(p)?.advance_to(x)
}

pub fn reduced_action_unwrapped(x: f64, p: &ModelParams) -> Result<f64> {
    Ok(reduced_action_sample(x, p)?.w_unwrapped)
}

/// Unwrapped action on a grid, marching once through the points in order.
pub fn reduced_action_grid(xs: &[f64], p: &ModelParams) -> Result<Vec<ActionSample>> {
    let mut u = ActionUnwrapper::new(p)?;
    xs.iter().map(|&x| u.advance_to(x)).collect()
}

/// Conjugate momentum in the closed form `ħk / D(x)`.
///
/// Note this is not the x-derivative of the reduced action above, which is
/// [`action_gradient`] and carries an extra factor `1-α²`.
pub fn conjugate_momentum(x: f64, p: &ModelParams) -> Result<f64> {
    let d = checked_amplitude_squared(x, p)?;
    Ok(p.hbar() * p.k() / d)
}

/// Exact `dW/dx = ħk(1-α²)/D(x)` of the reduced action.
pub fn action_gradient(x: f64, p: &ModelParams) -> Result<f64> {
    let d = checked_amplitude_squared(x, p)?;
    let a = p.alpha();
    Ok(p.hbar() * p.k() * (1.0 - a) * (1.0 + a) / d)
}

/// Quantum potential as the free stationary Hamilton-Jacobi residual
/// `Q = E - (dW/dx)²/(2M) = E(1 - (1-α²)²/D²)`.
///
/// For the exact solution this equals the amplitude form `-ħ²R''/(2MR)`.
pub fn quantum_potential(x: f64, p: &ModelParams) -> Result<f64> {
    let w = action_gradient(x, p)?;
    Ok(p.energy() - w * w / (2.0 * p.mass()))
}

/// Effective quantum mass `M(1 - ∂Q/∂E)`.
///
/// `∂Q/∂E` is a central difference with relative energy step `step`, at fixed
/// `x`, with `k` re-derived from each perturbed energy.
pub fn effective_quantum_mass(x: f64, p: &ModelParams, step: f64) -> Result<QuantumMassSample> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(ModelError::invalid("step", "must be positive"));
    }
    let q = quantum_potential(x, p)?;
    let e = p.energy();
    let (e_lo, e_hi) = (e * (1.0 - step), e * (1.0 + step));
    let realized = (e_hi - e_lo) / (2.0 * e);
    if ((realized - step) / step).abs() > 1e-3 {
        return Err(ModelError::NumericalFailure(format!(
            "energy step {step:e} is below the resolution of E = {e}"
        )));
    }
    let q_hi = quantum_potential(x, &p.with_energy(e_hi)?)?;
    let q_lo = quantum_potential(x, &p.with_energy(e_lo)?)?;
    let dq_de = (q_hi - q_lo) / (e_hi - e_lo);
    Ok(QuantumMassSample {
        x,
        q,
        m_q: p.mass() * (1.0 - dq_de),
    })
}

/// `∂W/∂E` of the unwrapped action by central difference in `E`
/// (relative step `step`, `k` re-derived from each energy).
pub fn action_energy_derivative(x: f64, p: &ModelParams, step: f64) -> Result<f64> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(ModelError::invalid("step", "must be positive"));
    }
    let e = p.energy();
    let w = |energy: f64| reduced_action_unwrapped(x, &p.with_energy(energy)?);
    central_derivative(w, e, e * step)
}
