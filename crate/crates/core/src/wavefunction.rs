//! Bipolar and polar forms of the molecule wave function.
//!
//! The molecule wave is the superposition of the two recoil waves
//! `ψ₁ = exp(ikx)` and `ψ₂ = α·exp(-ikx - iβ)`. Its polar form carries the
//! amplitude `R = D^{1/2}` with `D = 1 + α² + 2α·cos(2kx+β)` and the phase
//! that generates the reduced action.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::limits::{LimitEntry, LimitSeries, LimitSide, Quantity};
use crate::params::ModelParams;

/// Complex value of a wave function at a point.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarForm {
    pub amplitude: f64,
    /// Principal phase in `(-π, π]`.
    pub phase: f64,
    pub amplitude_squared: f64,
}

impl PolarForm {
    pub fn to_complex(&self) -> ComplexValue {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

pub fn psi_particle1(x: f64, p: &ModelParams) -> ComplexValue {
    Complex64::cis(p.k() * x)
}

pub fn psi_particle2(x: f64, p: &ModelParams) -> ComplexValue {
    Complex64::cis(-p.k() * x - p.beta()) * p.alpha()
}

/// `exp(ikx) + α·exp(-ikx - iβ)`.
pub fn psi_bipolar(x: f64, p: &ModelParams) -> ComplexValue {
    psi_particle1(x, p) + psi_particle2(x, p)
}

/// `D(x) = 1 + α² + 2α·cos(2kx+β)`, evaluated as `(1-α)² + 4α·cos²(kx+β/2)`.
///
/// The second form is the same polynomial but keeps full relative precision
/// near the nodes when α is close to 1, where `D → (1-α)²`.
pub fn amplitude_squared(x: f64, p: &ModelParams) -> f64 {
    let a = p.alpha();
    let c = (p.k() * x + 0.5 * p.beta()).cos();
    (1.0 - a) * (1.0 - a) + 4.0 * a * c * c
}

/// Numerator and denominator of the phase tangent.
pub(crate) fn phase_components(x: f64, p: &ModelParams) -> (f64, f64) {
    let kx = p.k() * x;
    let a = p.alpha();
    let num = kx.sin() - a * (kx + p.beta()).sin();
    let den = kx.cos() + a * (kx + p.beta()).cos();
    (num, den)
}

pub fn psi_polar(x: f64, p: &ModelParams) -> PolarForm {
    let d = amplitude_squared(x, p);
    let (num, den) = phase_components(x, p);
    PolarForm {
        amplitude: d.sqrt(),
        phase: num.atan2(den),
        amplitude_squared: d,
    }
}

/// Evaluates the wave at `x` along a sequence of α approaching 1.
///
/// The sequence must move monotonically toward 1 from one side; it may end
/// exactly at α = 1, where the wave is the standing wave `2cos(kx)` (β = 0)
/// or `2i·sin(kx)` (β = π).
pub fn epr_limit_wave(
    x: f64,
    p: &ModelParams,
    alphas: &[f64],
) -> Result<LimitSeries<ComplexValue>> {
    let side = LimitSide::infer(alphas, true)?;
    let entries = alphas
        .iter()
        .map(|&a| {
            let q = p.with_alpha(a)?;
            Ok(LimitEntry {
                alpha: a,
                value: psi_bipolar(x, &q),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSeries {
        quantity: Quantity::WaveFunction,
        side,
        x,
        entries,
    })
}

/// Lower bound on `max_i |ψ(xᵢ) - K·ψ₁(xᵢ)ψ₂(xᵢ)|` over all complex `K`.
///
/// The product `ψ₁ψ₂ = α·e^{-iβ}` is constant in x, so any `K·ψ₁ψ₂` is a
/// single point of the plane and the best it can do is half the diameter of
/// the sampled ψ values. A positive result means ψ is not factorable.
pub fn factorization_gap(xs: &[f64], p: &ModelParams) -> f64 {
    let vals: Vec<ComplexValue> = xs.iter().map(|&x| psi_bipolar(x, p)).collect();
    let mut diam: f64 = 0.0;
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            diam = diam.max((a - b).norm());
        }
    }
    0.5 * diam
}

/// Guard used by every operation that divides by `D`.
pub const NODE_GUARD: f64 = 1e-14;

/// `D(x)`, or a [`ModelError::Singular`] when it falls below [`NODE_GUARD`].
pub fn checked_amplitude_squared(x: f64, p: &ModelParams) -> Result<f64> {
    let d = amplitude_squared(x, p);
    if d < NODE_GUARD {
        Err(ModelError::Singular { x, d })
    } else {
        Ok(d)
    }
}
