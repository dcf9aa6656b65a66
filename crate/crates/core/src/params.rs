//! Physical constants and entanglement parameters of the two-particle molecule.
//!
//! The molecule is built from a pair of recoiling plane waves with wavenumbers
//! `k` and `-k`; the second particle carries mass `α²m` and amplitude `α`.
//! Every quantity downstream is a pure function of [`ModelParams`].

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{ModelError, Result};

/// Immutable, validated parameter set.
///
/// `energy` and `mass` are derived on construction and always satisfy
/// `E = ħ²k²/(2M)` with the composite mass `M = m(1+α²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    hbar: f64,
    m: f64,
    alpha: f64,
    beta: f64,
    k: f64,
    energy: f64,
    mass: f64,
    tau: f64,
}

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(ModelError::invalid(field, "must be finite"));
    }
    if value <= 0.0 {
        return Err(ModelError::invalid(field, "must be positive"));
    }
    Ok(())
}

/// Reduces a phase into `(-π, π]`.
pub fn normalize_phase(beta: f64) -> f64 {
    let r = beta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

impl ModelParams {
    /// Validates raw inputs and derives `E` and `M`. `tau` starts at 0.
    pub fn new(hbar: f64, m: f64, alpha: f64, beta: f64, k: f64) -> Result<Self> {
        require_positive("hbar", hbar)?;
        require_positive("m", m)?;
        require_positive("alpha", alpha)?;
        require_positive("k", k)?;
        if !beta.is_finite() {
            return Err(ModelError::invalid("beta", "must be finite"));
        }
        let mass = m * (1.0 + alpha * alpha);
        Ok(Self {
            hbar,
            m,
            alpha,
            beta: normalize_phase(beta),
            k,
            energy: hbar * hbar * k * k / (2.0 * mass),
            mass,
            tau: 0.0,
        })
    }

    /// The worked example: ħ = m = 1, k = π/2, α = 0.5, β = 0, τ = 0.
    pub fn reference() -> Self {
        Self::new(1.0, 1.0, 0.5, 0.0, PI / 2.0).expect("reference parameters are valid")
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(ModelError::invalid("tau", "must be finite"));
        }
        self.tau = tau;
        Ok(self)
    }

    /// Same molecule with a different amplitude ratio, keeping `k` fixed
    /// (the energy is re-derived).
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.hbar, self.m, alpha, self.beta, self.k)?.with_tau(self.tau)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.hbar, self.m, self.alpha, beta, self.k)?.with_tau(self.tau)
    }

    pub fn with_wavenumber(&self, k: f64) -> Result<Self> {
        Self::new(self.hbar, self.m, self.alpha, self.beta, k)?.with_tau(self.tau)
    }

    /// Same molecule at energy `e`, with `k` re-derived from the k–E relation.
    pub fn with_energy(&self, e: f64) -> Result<Self> {
        let k = wavenumber_from_energy(e, self)?;
        self.with_wavenumber(k)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }
    /// Composite mass `m(1+α²)`.
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `m/(ħk)`, the time per unit length of a free particle of mass `m`.
    pub fn time_scale(&self) -> f64 {
        self.m / (self.hbar * self.k)
    }
}

/// Validates inputs into a [`ModelParams`]; same as [`ModelParams::new`].
pub fn validate_params(hbar: f64, m: f64, alpha: f64, beta: f64, k: f64) -> Result<ModelParams> {
    ModelParams::new(hbar, m, alpha, beta, k)
}

/// `E = ħ²k²/(2m(1+α²))` using the mass and α of `params`.
pub fn energy_from_wavenumber(k: f64, params: &ModelParams) -> Result<f64> {
    if !k.is_finite() || k < 0.0 {
        return Err(ModelError::invalid("k", "must be non-negative"));
    }
    Ok(params.hbar * params.hbar * k * k / (2.0 * params.mass))
}

/// `k = [2(1+α²)mE]^{1/2}/ħ`.
pub fn wavenumber_from_energy(energy: f64, params: &ModelParams) -> Result<f64> {
    if !energy.is_finite() || energy < 0.0 {
        return Err(ModelError::invalid("energy", "must be non-negative"));
    }
    Ok((2.0 * params.mass * energy).sqrt() / params.hbar)
}

/// Positions of the two particles for molecule coordinate `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticlePositions {
    pub x1: f64,
    pub x2: f64,
}

/// Conservation of relative position: `x1 = x`, `x2 = -α²x`.
pub fn particle_positions(x: f64, params: &ModelParams) -> ParticlePositions {
    ParticlePositions {
        x1: x,
        x2: -params.alpha * params.alpha * x,
    }
}
