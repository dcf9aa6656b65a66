//! Dissection of the equation of motion into particle and entanglon parts,
//! and the α → 1 limit studies built on it.
//!
//! Limit studies hold `k` fixed while α moves toward 1; the energy follows
//! from the k–E relation at each α.

use serde::Serialize;

use crate::action::{effective_quantum_mass, DEFAULT_ENERGY_STEP};
use crate::error::{ModelError, Result};
use crate::params::ModelParams;
use crate::trajectory::time_of_position;
use crate::wavefunction::checked_amplitude_squared;

/// `|cos(2kx+β) + 1|` below this marks a trigger point.
pub const TRIGGER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitSide {
    /// α → 1⁻
    Below,
    /// α → 1⁺
    Above,
}

impl LimitSide {
    pub fn as_str(&self) -> &'static str {
        match self {
            LimitSide::Below => "below",
            LimitSide::Above => "above",
        }
    }

    /// Side of a sequence approaching 1. With `allow_one`, the last entry may
    /// be exactly 1.
    pub fn infer(alphas: &[f64], allow_one: bool) -> Result<Self> {
        if alphas.is_empty() {
            return Err(ModelError::InvalidSequence("empty alpha sequence".into()));
        }
        let (body, tail) = match alphas.split_last() {
            Some((&last, rest)) if allow_one && last == 1.0 => (rest, true),
            _ => (alphas, false),
        };
        if body.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(ModelError::InvalidSequence(
                "alphas must be positive and finite".into(),
            ));
        }
        let side = match body.first() {
            None => LimitSide::Below,
            Some(&a) if a < 1.0 => LimitSide::Below,
            Some(&a) if a > 1.0 => LimitSide::Above,
            Some(_) => {
                return Err(ModelError::InvalidSequence(
                    "alpha = 1 may only close the sequence".into(),
                ))
            }
        };
        for &a in body {
            let ok = match side {
                LimitSide::Below => a < 1.0,
                LimitSide::Above => a > 1.0,
            };
            if !ok {
                return Err(ModelError::InvalidSequence(format!(
                    "alpha {a} is not on the {} side of 1",
                    side.as_str()
                )));
            }
        }
        if body
            .windows(2)
            .any(|w| (1.0 - w[1]).abs() >= (1.0 - w[0]).abs())
        {
            return Err(ModelError::InvalidSequence(
                "alphas must approach 1 strictly monotonically".into(),
            ));
        }
        let _ = tail;
        Ok(side)
    }
}

impl std::str::FromStr for LimitSide {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "below" => Ok(LimitSide::Below),
            "above" => Ok(LimitSide::Above),
            other => Err(ModelError::invalid(
                "side",
                format!("must be 'below' or 'above', got '{other}'"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    WaveFunction,
    Time,
    EntanglonRatio,
    EffectiveMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitEntry<T> {
    pub alpha: f64,
    pub value: T,
}

/// Values of one quantity at fixed `x` along an α sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitSeries<T> {
    pub quantity: Quantity,
    pub side: LimitSide,
    pub x: f64,
    pub entries: Vec<LimitEntry<T>>,
}

impl<T: Copy> LimitSeries<T> {
    pub fn values(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

/// Signed addends of the elapsed time `t - τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub x: f64,
    pub c_p1: f64,
    pub c_p2: f64,
    pub c_ent: f64,
    pub total: f64,
}

impl Decomposition {
    pub fn sum(&self) -> f64 {
        self.c_p1 + self.c_p2 + self.c_ent
    }
}

/// Splits `t - τ` into the particle-1 term, the particle-2 term and the
/// entanglon term, each stored with the sign it carries in the sum:
///
/// ```text
/// c_p1  =  (mx/ħk) / (1+α²)
/// c_p2  = -(mx/ħk) · α²/(1+α²)
/// c_ent = -(mx/ħk) · 2α(1-α²)/(1+α²) · cos(2kx+β) / D
/// ```
pub fn decompose_time(x: f64, p: &ModelParams) -> Result<Decomposition> {
    let d = checked_amplitude_squared(x, p)?;
    let a = p.alpha();
    let a2 = a * a;
    let base = p.time_scale() * x;
    let one_minus = (1.0 - a) * (1.0 + a);
    let cos = (2.0 * p.k() * x + p.beta()).cos();
    Ok(Decomposition {
        x,
        c_p1: base / (1.0 + a2),
        c_p2: -base * a2 / (1.0 + a2),
        c_ent: -base * 2.0 * a * one_minus / (1.0 + a2) * cos / d,
        total: time_of_position(x, p)? - p.tau(),
    })
}

/// Whether `cos(2kx+β) = -1`, the support of the δ-like limit.
pub fn is_trigger_point(x: f64, p: &ModelParams) -> bool {
    ((2.0 * p.k() * x + p.beta()).cos() + 1.0).abs() < TRIGGER_TOLERANCE
}

fn alpha_params(p: &ModelParams, alphas: &[f64]) -> Result<Vec<(f64, ModelParams)>> {
    alphas.iter().map(|&a| Ok((a, p.with_alpha(a)?))).collect()
}

/// `(t - τ) / (2mx/(ħk(1-α)))` for a single parameter set.
pub fn trigger_ratio(x: f64, p: &ModelParams) -> Result<f64> {
    let elapsed = time_of_position(x, p)? - p.tau();
    Ok(elapsed * (1.0 - p.alpha()) / (2.0 * p.time_scale() * x))
}

/// Ratio of the elapsed time to `2mx/(ħk(1-α))` at a trigger point, for α → 1⁻.
/// The ratio equals `(1+α)/2` and tends to 1.
pub fn entanglon_divergence(x: f64, p: &ModelParams, alphas: &[f64]) -> Result<LimitSeries<f64>> {
    if x == 0.0 || !is_trigger_point(x, p) {
        return Err(ModelError::NotTriggerPoint { x });
    }
    let side = LimitSide::infer(alphas, false)?;
    if side != LimitSide::Below {
        return Err(ModelError::InvalidSequence(
            "entanglon divergence needs alpha -> 1 from below".into(),
        ));
    }
    let entries = alpha_params(p, alphas)?
        .into_iter()
        .map(|(a, q)| {
            Ok(LimitEntry {
                alpha: a,
                value: trigger_ratio(x, &q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSeries {
        quantity: Quantity::EntanglonRatio,
        side,
        x,
        entries,
    })
}

/// Time at `x` along an α sequence approaching 1 from `side`.
///
/// Below pairs with `x > 0`, above with `x < 0`; both give `t - τ ≥ 0`.
pub fn epr_limit_time(
    x: f64,
    p: &ModelParams,
    alphas: &[f64],
    side: LimitSide,
) -> Result<LimitSeries<f64>> {
    let inferred = LimitSide::infer(alphas, false)?;
    if inferred != side {
        return Err(ModelError::InvalidSequence(format!(
            "sequence approaches 1 from {} but side {} was requested",
            inferred.as_str(),
            side.as_str()
        )));
    }
    let x_ok = match side {
        LimitSide::Below => x > 0.0,
        LimitSide::Above => x < 0.0,
    };
    if !x_ok {
        return Err(ModelError::invalid(
            "x",
            "must be positive for the below limit and negative for the above limit",
        ));
    }
    let entries = alpha_params(p, alphas)?
        .into_iter()
        .map(|(a, q)| {
            Ok(LimitEntry {
                alpha: a,
                value: time_of_position(x, &q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSeries {
        quantity: Quantity::Time,
        side,
        x,
        entries,
    })
}

/// Energy step for the mass derivative at a given α. Near α = 1 the node
/// value `D = (1-α)²` is tiny and the k-perturbation must stay well below it.
pub fn limit_energy_step(alpha: f64) -> f64 {
    DEFAULT_ENERGY_STEP.min(1e-3 * (1.0 - alpha).abs())
}

/// Effective quantum mass at `x` along α → 1⁻.
pub fn epr_limit_mass(x: f64, p: &ModelParams, alphas: &[f64]) -> Result<LimitSeries<f64>> {
    let side = LimitSide::infer(alphas, false)?;
    if side != LimitSide::Below {
        return Err(ModelError::InvalidSequence(
            "mass limit needs alpha -> 1 from below".into(),
        ));
    }
    let entries = alpha_params(p, alphas)?
        .into_iter()
        .map(|(a, q)| {
            let s = effective_quantum_mass(x, &q, limit_energy_step(a))?;
            Ok(LimitEntry {
                alpha: a,
                value: s.m_q,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSeries {
        quantity: Quantity::EffectiveMass,
        side,
        x,
        entries,
    })
}

/// `1 - 10^{-j}` (below) or `1 + 10^{-j}` (above) for `j = 1..=n`.
pub fn decade_sequence(side: LimitSide, n: u32) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let d = 10f64.powi(-(j as i32));
            match side {
                LimitSide::Below => 1.0 - d,
                LimitSide::Above => 1.0 + d,
            }
        })
        .collect()
}
