//! Tabular outputs: trajectory, β sweep, decomposition, limit and inversion
//! reports, as CSV (9 significant digits) or JSON (shortest round-trip
//! representation, so re-reading is bit-exact).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::action::effective_quantum_mass;
use crate::error::{ModelError, Result};
use crate::limits::{
    decompose_time, epr_limit_time, is_trigger_point, limit_energy_step, trigger_ratio,
    Decomposition, LimitSide,
};
use crate::params::ModelParams;
use crate::trajectory::{
    find_turning_points, pair_events, positions_at_time, time_of_position, trajectory_point,
    wedge_bounds, Direction, Event, TurningPoint,
};

/// Formats like C's `%.{digits}g`: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros trimmed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

const CSV_DIGITS: usize = 9;

fn csv_num(v: f64) -> String {
    format_sig(v, CSV_DIGITS)
}

/// `samples` evenly spaced points from `x_min` to `x_max` inclusive.
pub fn sample_grid(x_min: f64, x_max: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(ModelError::invalid("samples", "must be at least 2"));
    }
    if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
        return Err(ModelError::invalid(
            "range",
            "requires finite x_min < x_max",
        ));
    }
    let n = (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| {
            if i == samples - 1 {
                x_max
            } else {
                x_min + (x_max - x_min) * (i as f64 / n)
            }
        })
        .collect())
}

/// Parameters as written into JSON outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub hbar: f64,
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k: f64,
    pub tau: f64,
    pub energy: f64,
    pub mass: f64,
}

impl From<&ModelParams> for ParamsEcho {
    fn from(p: &ModelParams) -> Self {
        Self {
            hbar: p.hbar(),
            m: p.m(),
            alpha: p.alpha(),
            beta: p.beta(),
            k: p.k(),
            tau: p.tau(),
            energy: p.energy(),
            mass: p.mass(),
        }
    }
}

impl ParamsEcho {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value\n");
        for (name, v) in [
            ("hbar", self.hbar),
            ("m", self.m),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("k", self.k),
            ("tau", self.tau),
            ("energy", self.energy),
            ("mass", self.mass),
        ] {
            let _ = writeln!(out, "{name},{}", csv_num(v));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameters are finite")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub x: f64,
    pub t: f64,
    pub dtdx: f64,
    pub branch_id: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDataset {
    pub params: ParamsEcho,
    pub rows: Vec<TrajectoryRow>,
    pub turning_points: Vec<TurningPoint>,
    pub events: Vec<Event>,
}

impl TrajectoryDataset {
    /// Samples the trajectory on a uniform grid. Turning points are searched
    /// with `grid_step` independently of the sampling.
    pub fn build(
        p: &ModelParams,
        x_min: f64,
        x_max: f64,
        samples: usize,
        grid_step: f64,
    ) -> Result<Self> {
        let xs = sample_grid(x_min, x_max, samples)?;
        let turning_points = find_turning_points(x_min, x_max, p, grid_step)?;
        let events = pair_events(&turning_points)?;
        let rows = xs
            .iter()
            .map(|&x| {
                let pt = trajectory_point(x, p)?;
                Ok(TrajectoryRow {
                    x,
                    t: pt.t,
                    dtdx: pt.dtdx,
                    branch_id: turning_points.partition_point(|tp| tp.x < x),
                    direction: pt.direction,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: p.into(),
            rows,
            turning_points,
            events,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,t,dtdx,branch_id,direction\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_num(r.x),
                csv_num(r.t),
                csv_num(r.dtdx),
                r.branch_id,
                r.direction.as_str()
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dataset contains only finite numbers")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub t: f64,
    pub t_lower: f64,
    pub t_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub beta: f64,
    pub rows: Vec<SweepRow>,
}

/// One trajectory per phase shift, each row carrying the wedge envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDataset {
    pub params: ParamsEcho,
    pub curves: Vec<SweepCurve>,
}

/// The phase shifts `jπ/4`, `j = 0..8`.
pub fn quarter_pi_betas() -> Vec<f64> {
    (0..8)
        .map(|j| j as f64 * std::f64::consts::FRAC_PI_4)
        .collect()
}

impl SweepDataset {
    pub fn build(
        p: &ModelParams,
        betas: &[f64],
        x_min: f64,
        x_max: f64,
        samples: usize,
    ) -> Result<Self> {
        if betas.is_empty() {
            return Err(ModelError::invalid("betas", "must not be empty"));
        }
        let xs = sample_grid(x_min, x_max, samples)?;
        let curves = betas
            .iter()
            .map(|&beta| {
                let q = p.with_beta(beta)?;
                let rows = xs
                    .iter()
                    .map(|&x| {
                        let w = wedge_bounds(x, &q)?;
                        Ok(SweepRow {
                            x,
                            t: time_of_position(x, &q)?,
                            t_lower: w.t_lower,
                            t_upper: w.t_upper,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SweepCurve {
                    beta: q.beta(),
                    rows,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: p.into(),
            curves,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,x,t,t_lower,t_upper\n");
        for c in &self.curves {
            for r in &c.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_num(c.beta),
                    csv_num(r.x),
                    csv_num(r.t),
                    csv_num(r.t_lower),
                    csv_num(r.t_upper)
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dataset contains only finite numbers")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub params: ParamsEcho,
    pub rows: Vec<Decomposition>,
}

impl DecompositionReport {
    pub fn build(p: &ModelParams, x_min: f64, x_max: f64, samples: usize) -> Result<Self> {
        let rows = sample_grid(x_min, x_max, samples)?
            .into_iter()
            .map(|x| decompose_time(x, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: p.into(),
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,c_p1,c_p2,c_ent,total\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_num(r.x),
                csv_num(r.c_p1),
                csv_num(r.c_p2),
                csv_num(r.c_ent),
                csv_num(r.total)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report contains only finite numbers")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub alpha: f64,
    pub x: f64,
    pub t: f64,
    pub m_q: f64,
    /// Only at trigger points.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub params: ParamsEcho,
    pub side: LimitSide,
    pub rows: Vec<LimitRow>,
}

impl LimitReport {
    /// Time, effective mass and (at trigger points) divergence ratio at `x`
    /// for each α of a sequence approaching 1 from `side`.
    pub fn build(p: &ModelParams, x: f64, side: LimitSide, alphas: &[f64]) -> Result<Self> {
        let times = epr_limit_time(x, p, alphas, side)?;
        let trigger = is_trigger_point(x, p);
        let rows = times
            .entries
            .iter()
            .map(|e| {
                let q = p.with_alpha(e.alpha)?;
                let m_q = effective_quantum_mass(x, &q, limit_energy_step(e.alpha))?.m_q;
                let ratio = if trigger {
                    Some(trigger_ratio(x, &q)?)
                } else {
                    None
                };
                Ok(LimitRow {
                    alpha: e.alpha,
                    x,
                    t: e.value,
                    m_q,
                    ratio,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: p.into(),
            side,
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,x,t,m_q,ratio\n");
        for r in &self.rows {
            let ratio = r.ratio.map(csv_num).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                // α = 1 - 1e-6 needs more than 9 digits to stay distinguishable
                format_sig(r.alpha, 17),
                csv_num(r.x),
                csv_num(r.t),
                csv_num(r.m_q),
                ratio
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report contains only finite numbers")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    pub params: ParamsEcho,
    pub t: f64,
    pub positions: Vec<f64>,
}

impl InversionReport {
    pub fn build(p: &ModelParams, t: f64, x_min: f64, x_max: f64, grid_step: f64) -> Result<Self> {
        Ok(Self {
            params: p.into(),
            t,
            positions: positions_at_time(t, x_min, x_max, p, grid_step)?,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x\n");
        for x in &self.positions {
            let _ = writeln!(out, "{},{}", csv_num(self.t), csv_num(*x));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report contains only finite numbers")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::DEFAULT_GRID_STEP;
    use proptest::prelude::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.19098593171027442, 9), "0.190985932");
        assert_eq!(format_sig(1.909859317102744, 9), "1.90985932");
        assert_eq!(format_sig(2.0, 9), "2");
        assert_eq!(format_sig(-0.0636619772, 9), "-0.0636619772");
        assert_eq!(format_sig(3.1830988618e-7, 9), "3.18309886e-7");
        assert_eq!(format_sig(1.5e12, 9), "1.5e12");
        assert_eq!(format_sig(123456789.4, 9), "123456789");
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(3.18293971e-5, 9), "3.18293971e-5");
        assert_eq!(format_sig(1.25e-4, 9), "0.000125");
    }

    proptest! {
        #[test]
        fn nine_digit_formatting_keeps_nine_digits(v in -1e12f64..1e12) {
            prop_assume!(v != 0.0);
            let back: f64 = format_sig(v, 9).parse().unwrap();
            prop_assert!((back - v).abs() <= 5e-9 * v.abs());
            prop_assert!(!format_sig(v, 9).contains(','));
        }
    }

    #[test]
    fn grid() {
        let g = sample_grid(0.0, 4.0, 9).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
        assert!(sample_grid(0.0, 1.0, 1).is_err());
        assert!(sample_grid(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn trajectory_dataset() {
        let p = ModelParams::reference();
        let d = TrajectoryDataset::build(&p, 0.0, 4.0, 4001, DEFAULT_GRID_STEP).unwrap();
        assert_eq!(d.rows.len(), 4001);
        assert_eq!(d.turning_points.len(), 4);
        assert_eq!(d.events.len(), 4);
        assert!(d
            .rows
            .windows(2)
            .all(|w| w[0].x < w[1].x && w[0].branch_id <= w[1].branch_id));
        let csv = d.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,t,dtdx,branch_id,direction"));
        let row = csv.lines().find(|l| l.starts_with("0.5,")).unwrap();
        assert!(row.starts_with("0.5,0.190985932,"), "{row}");
        assert!(row.ends_with(",0,forward"));
        // rows between the first two turning points are retrograde on branch 1
        let r = d.rows.iter().find(|r| r.x == 1.5).unwrap();
        assert_eq!((r.branch_id, r.direction), (1, Direction::Retrograde));

        let back: TrajectoryDataset = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn sweep_dataset() {
        let p = ModelParams::reference();
        let s = SweepDataset::build(&p, &quarter_pi_betas(), 0.0, 4.0, 801).unwrap();
        assert_eq!(s.curves.len(), 8);
        for c in &s.curves {
            for r in &c.rows {
                assert!(r.t >= r.t_lower - 1e-9 && r.t <= r.t_upper + 1e-9);
            }
        }
        assert!(SweepDataset::build(&p, &[], 0.0, 4.0, 10).is_err());
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 1 + 8 * 801);
        let back: SweepDataset = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn decomposition_report() {
        let p = ModelParams::reference();
        let r = DecompositionReport::build(&p, 0.0, 2.0, 5).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("x,c_p1,c_p2,c_ent,total\n"));
        let row = csv.lines().find(|l| l.starts_with("1,")).unwrap();
        let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        for (v, want) in vals[1..]
            .iter()
            .zip([0.509296, -0.127324, 1.527887, 1.909859])
        {
            assert!((v - want).abs() < 1e-6);
        }
    }

    #[test]
    fn limit_report() {
        let p = ModelParams::reference();
        let r = LimitReport::build(&p, 1.0, LimitSide::Below, &[0.9, 1.0 - 1e-6]).unwrap();
        let csv = r.to_csv();
        let last = csv.lines().last().unwrap();
        let cols: Vec<&str> = last.split(',').collect();
        assert_eq!(cols[0].parse::<f64>().unwrap(), 1.0 - 1e-6);
        assert!((cols[4].parse::<f64>().unwrap() - 0.9999995).abs() < 1e-9);

        let off = LimitReport::build(&p, 0.5, LimitSide::Below, &[0.9]).unwrap();
        assert!(off.to_csv().lines().nth(1).unwrap().ends_with(','));

        let above = LimitReport::build(&p, -0.5, LimitSide::Above, &[1.1, 1.01]).unwrap();
        assert!(above.rows.iter().all(|r| r.t > 0.0 && r.ratio.is_none()));
    }

    #[test]
    fn inversion_report() {
        let p = ModelParams::reference();
        let r = InversionReport::build(&p, 1.0, 0.0, 3.0, DEFAULT_GRID_STEP).unwrap();
        assert_eq!(r.positions.len(), 3);
        assert_eq!(r.to_csv().lines().count(), 4);
    }
}
