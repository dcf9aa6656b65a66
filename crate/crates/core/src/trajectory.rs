//! Equation of motion from Jacobi's theorem and the structure of the
//! resulting trajectory: turning points, forward and retrograde segments,
//! multiple positions at one time, the wedge envelope and creation /
//! annihilation events. Also the Bohmian curve for comparison.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::numerics::{find_roots, Bracket};
use crate::params::ModelParams;
use crate::wavefunction::checked_amplitude_squared;

/// Grid spacing for bracketing sign changes. Turning points closer together
/// than this can be missed.
pub const DEFAULT_GRID_STEP: f64 = 1e-3;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOLERANCE: f64 = 1e-10;
/// `|dt/dx|` below this fraction of `m/(ħk)` counts as a turning point.
pub const TURNING_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Retrograde,
    Turning,
}

impl Direction {
    pub fn from_slope(dtdx: f64) -> Self {
        if dtdx > 0.0 {
            Direction::Forward
        } else if dtdx < 0.0 {
            Direction::Retrograde
        } else {
            Direction::Turning
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Retrograde => "retrograde",
            Direction::Turning => "turning",
        }
    }

    fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Retrograde,
            Direction::Retrograde => Direction::Forward,
            Direction::Turning => Direction::Turning,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub x: f64,
    pub t: f64,
    pub dtdx: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurningKind {
    /// Local maximum of t(x): two branches meet and annihilate.
    TemporalMax,
    /// Local minimum of t(x): a pair of branches is created.
    TemporalMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    pub x: f64,
    pub t: f64,
    pub kind: TurningKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x_start: f64,
    pub x_end: f64,
    pub direction: Direction,
    pub branch_id: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WedgeBounds {
    pub t_lower: f64,
    pub t_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Creation,
    Annihilation,
}

/// A creation or annihilation event at a turning point. The two branches are
/// the segments on either side, by `branch_id`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub x: f64,
    pub t: f64,
    /// Branch on the `-x` side of the event.
    pub lower_branch: usize,
    /// Branch on the `+x` side of the event.
    pub upper_branch: usize,
}

/// `t = τ + m·x·(1-α²) / (ħk·D(x))`.
pub fn time_of_position(x: f64, p: &ModelParams) -> Result<f64> {
    let d = checked_amplitude_squared(x, p)?;
    let a = p.alpha();
    Ok(p.tau() + p.time_scale() * x * (1.0 - a) * (1.0 + a) / d)
}

/// Analytic `dt/dx = C·(D - x·D')/D²`, `C = m(1-α²)/(ħk)`, `D' = -4αk·sin(2kx+β)`.
pub fn dtdx(x: f64, p: &ModelParams) -> Result<f64> {
    let d = checked_amplitude_squared(x, p)?;
    let a = p.alpha();
    let c = p.time_scale() * (1.0 - a) * (1.0 + a);
    let d_prime = -4.0 * a * p.k() * (2.0 * p.k() * x + p.beta()).sin();
    Ok(c * (d - x * d_prime) / (d * d))
}

pub fn trajectory_point(x: f64, p: &ModelParams) -> Result<TrajectoryPoint> {
    let slope = dtdx(x, p)?;
    Ok(TrajectoryPoint {
        x,
        t: time_of_position(x, p)?,
        dtdx: slope,
        direction: Direction::from_slope(slope),
    })
}

/// All sign changes of `dt/dx` on `[x_min, x_max]`, refined by bisection and
/// sorted by `x`. A `+ → -` change is a temporal maximum.
pub fn find_turning_points(
    x_min: f64,
    x_max: f64,
    p: &ModelParams,
    grid_step: f64,
) -> Result<Vec<TurningPoint>> {
    let roots = find_roots(|x| dtdx(x, p), x_min, x_max, grid_step, ROOT_TOLERANCE)?;
    roots
        .into_iter()
        .map(|(x, br): (f64, Bracket)| {
            let kind = if br.sign_before > 0.0 {
                TurningKind::TemporalMax
            } else {
                TurningKind::TemporalMin
            };
            Ok(TurningPoint {
                x,
                t: time_of_position(x, p)?,
                kind,
            })
        })
        .collect()
}

/// Partition of `[x_min, x_max]` at the given turning points.
pub fn segments_from_turning_points(
    x_min: f64,
    x_max: f64,
    p: &ModelParams,
    turning: &[TurningPoint],
) -> Result<Vec<Segment>> {
    let mut bounds = Vec::with_capacity(turning.len() + 2);
    bounds.push(x_min);
    bounds.extend(turning.iter().map(|tp| tp.x));
    bounds.push(x_max);

    let first = match turning.first() {
        Some(tp) if tp.kind == TurningKind::TemporalMax => Direction::Forward,
        Some(_) => Direction::Retrograde,
        None => Direction::from_slope(dtdx(0.5 * (x_min + x_max), p)?),
    };
    let mut dir = first;
    Ok(bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let seg = Segment {
                x_start: w[0],
                x_end: w[1],
                direction: dir,
                branch_id: i,
            };
            dir = dir.reversed();
            seg
        })
        .collect())
}

/// Forward / retrograde segments of the trajectory on `[x_min, x_max]`.
pub fn segment_trajectory(x_min: f64, x_max: f64, p: &ModelParams) -> Result<Vec<Segment>> {
    let tps = find_turning_points(x_min, x_max, p, DEFAULT_GRID_STEP)?;
    segments_from_turning_points(x_min, x_max, p, &tps)
}

/// Every position on `[x_min, x_max]` the molecule occupies at time `t`.
/// More than one root means the trajectory is at several places at once.
pub fn positions_at_time(
    t: f64,
    x_min: f64,
    x_max: f64,
    p: &ModelParams,
    grid_step: f64,
) -> Result<Vec<f64>> {
    if !t.is_finite() {
        return Err(ModelError::invalid("t", "must be finite"));
    }
    let roots = find_roots(
        |x| time_of_position(x, p).map(|tx| tx - t),
        x_min,
        x_max,
        grid_step,
        ROOT_TOLERANCE,
    )?;
    Ok(roots.into_iter().map(|r| r.0).collect())
}

/// Envelope `(1-α)mx/((1+α)ħk) ≤ t - τ ≤ (1+α)mx/((1-α)ħk)`, ordered so that
/// `t_lower ≤ t_upper` for either sign of `x` and either side of α = 1.
pub fn wedge_bounds(x: f64, p: &ModelParams) -> Result<WedgeBounds> {
    let a = p.alpha();
    if a == 1.0 {
        return Err(ModelError::UnboundedWedge);
    }
    let base = p.time_scale() * x;
    let r = (1.0 - a) / (1.0 + a);
    let (u, v) = (base * r, base / r);
    Ok(WedgeBounds {
        t_lower: p.tau() + u.min(v),
        t_upper: p.tau() + u.max(v),
    })
}

/// Labels temporal minima as creation events and temporal maxima as
/// annihilation events. Branch ids match [`segments_from_turning_points`]
/// over the same range.
pub fn pair_events(turning: &[TurningPoint]) -> Result<Vec<Event>> {
    for w in turning.windows(2) {
        if w[0].kind == w[1].kind || w[1].x <= w[0].x {
            return Err(ModelError::MalformedTurningPoints { x: w[1].x });
        }
    }
    Ok(turning
        .iter()
        .enumerate()
        .map(|(i, tp)| Event {
            kind: match tp.kind {
                TurningKind::TemporalMin => EventKind::Creation,
                TurningKind::TemporalMax => EventKind::Annihilation,
            },
            x: tp.x,
            t: tp.t,
            lower_branch: i,
            upper_branch: i + 1,
        })
        .collect())
}

/// Bohmian time: integral of `M/p` with `p = ħk/D`,
/// `τ + (M/(ħk))·[(1+α²)x + (α/k)(sin(2kx+β) - sin β)]`.
pub fn bohmian_time_of_position(x: f64, p: &ModelParams) -> f64 {
    let (a, k, b) = (p.alpha(), p.k(), p.beta());
    let integral = (1.0 + a * a) * x + (a / k) * ((2.0 * k * x + b).sin() - b.sin());
    p.tau() + p.mass() / (p.hbar() * k) * integral
}

/// `M·dx/dt` along the trajectory. Fails with
/// [`ModelError::InfiniteVelocity`] at turning points.
pub fn mechanical_momentum(x: f64, p: &ModelParams) -> Result<f64> {
    let slope = dtdx(x, p)?;
    if slope.abs() <= TURNING_TOLERANCE * p.time_scale() {
        return Err(ModelError::InfiniteVelocity { x });
    }
    Ok(p.mass() / slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::conjugate_momentum;
    use crate::numerics::five_point_derivative;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn reference() -> ModelParams {
        ModelParams::reference()
    }

    // independent turning-point oracle: 5-point FD of t(x) on a dense grid, bisection on the FD
    fn fd_turning_points(a: f64, b: f64, p: &ModelParams) -> Vec<f64> {
        let g = |x: f64| five_point_derivative(|y| time_of_position(y, p), x, 1e-5).unwrap();
        let n = ((b - a) / 2e-4) as usize;
        let mut out = vec![];
        for i in 0..n {
            let (mut lo, mut hi) = (
                a + (b - a) * i as f64 / n as f64,
                a + (b - a) * (i + 1) as f64 / n as f64,
            );
            if g(lo).signum() != g(hi).signum() {
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if g(mid).signum() == g(lo).signum() {
                        lo = mid
                    } else {
                        hi = mid
                    }
                }
                out.push(0.5 * (lo + hi));
            }
        }
        out
    }

    #[test]
    fn time_values() {
        let p = reference();
        assert_eq!(time_of_position(0.0, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(
            time_of_position(0.5, &p).unwrap(),
            0.375 / (PI / 2.0 * 1.25),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(time_of_position(0.5, &p).unwrap(), 0.190986, epsilon = 1e-6);
        assert_abs_diff_eq!(time_of_position(1.0, &p).unwrap(), 1.909859, epsilon = 1e-6);
        let shifted = p.with_tau(2.0).unwrap();
        assert_abs_diff_eq!(
            time_of_position(1.0, &shifted).unwrap(),
            3.909859,
            epsilon = 1e-6
        );
        let node = p.with_alpha(1.0).unwrap();
        assert!(matches!(
            time_of_position(1.0, &node),
            Err(ModelError::Singular { .. })
        ));
        assert_eq!(time_of_position(0.3, &node).unwrap(), 0.0);
    }

    #[test]
    fn slope_matches_finite_difference() {
        let p = reference();
        let s = dtdx(0.5, &p).unwrap();
        let fd = five_point_derivative(|y| time_of_position(y, &p), 0.5, 1e-4).unwrap();
        assert_abs_diff_eq!(s, fd, epsilon = 1e-8);
        assert_abs_diff_eq!(s, 0.861972, epsilon = 1e-6);
        for &(a, b) in &[(0.5, 0.0), (0.3, 1.0), (0.8, -2.0), (2.0, 0.5)] {
            let q = p.with_alpha(a).unwrap().with_beta(b).unwrap();
            for i in 0..100 {
                let x = -4.0 + 0.0803 * i as f64;
                let fd = five_point_derivative(|y| time_of_position(y, &q), x, 1e-4).unwrap();
                assert!((dtdx(x, &q).unwrap() - fd).abs() <= 1e-7 * fd.abs().max(1.0));
            }
        }
        let free = p.with_alpha(1e-9).unwrap();
        for i in 0..20 {
            // α = 1e-9 leaves an O(α·kx) ripple
            assert!((dtdx(0.37 * i as f64, &free).unwrap() / free.time_scale() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn reference_turning_points() {
        let p = reference();
        let tps = find_turning_points(0.0, 2.0, &p, DEFAULT_GRID_STEP).unwrap();
        assert_eq!(tps.len(), 2);
        let oracle = fd_turning_points(1e-3, 2.0, &p);
        assert_eq!(oracle.len(), 2);
        assert_abs_diff_eq!(tps[0].x, oracle[0], epsilon = 1e-8);
        assert_abs_diff_eq!(tps[1].x, oracle[1], epsilon = 1e-8);
        assert_abs_diff_eq!(tps[0].x, 1.02501, epsilon = 1e-3);
        assert_abs_diff_eq!(tps[1].x, 1.87970, epsilon = 1e-3);
        assert_eq!(tps[0].kind, TurningKind::TemporalMax);
        assert_eq!(tps[1].kind, TurningKind::TemporalMin);
        assert!(dtdx(tps[0].x, &p).unwrap().abs() < 1e-6);

        let tps = find_turning_points(0.0, 4.0, &p, DEFAULT_GRID_STEP).unwrap();
        assert_eq!(tps.len(), 4);
        assert!(tps
            .windows(2)
            .all(|w| w[0].kind != w[1].kind && w[0].x < w[1].x));
        assert_eq!(fd_turning_points(1e-3, 4.0, &p).len(), 4);

        let free = p.with_alpha(1e-9).unwrap();
        assert!(find_turning_points(0.0, 4.0, &free, DEFAULT_GRID_STEP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn segments() {
        let p = reference();
        let segs = segment_trajectory(0.0, 2.0, &p).unwrap();
        let dirs: Vec<Direction> = segs.iter().map(|s| s.direction).collect();
        assert_eq!(
            dirs,
            vec![
                Direction::Forward,
                Direction::Retrograde,
                Direction::Forward
            ]
        );
        assert_abs_diff_eq!(segs[0].x_end, 1.02501, epsilon = 1e-3);
        assert_abs_diff_eq!(segs[1].x_end, 1.87970, epsilon = 1e-3);
        assert_eq!(segs[2].x_end, 2.0);
        assert_eq!(
            segs.iter().map(|s| s.branch_id).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        // each segment's direction agrees with dt/dx inside it
        for s in &segs {
            let mid = 0.5 * (s.x_start + s.x_end);
            assert_eq!(Direction::from_slope(dtdx(mid, &p).unwrap()), s.direction);
        }

        let free = p.with_alpha(1e-9).unwrap();
        let segs = segment_trajectory(0.0, 2.0, &free).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].direction, Direction::Forward);
    }

    #[test]
    fn inversion() {
        let p = reference();
        let t05 = time_of_position(0.5, &p).unwrap();
        let xs = positions_at_time(t05, 0.0, 2.0, &p, DEFAULT_GRID_STEP).unwrap();
        assert_eq!(xs.len(), 1);
        assert_abs_diff_eq!(xs[0], 0.5, epsilon = 1e-9);

        let xs = positions_at_time(1.0, 0.0, 3.0, &p, DEFAULT_GRID_STEP).unwrap();
        assert_eq!(xs.len(), 3);
        for (x, want) in xs
            .iter()
            .zip([0.8266341165552411, 1.2792678387970815, 2.5155724079026784])
        {
            // values frozen from a scipy brentq scan of the closed form
            assert_abs_diff_eq!(*x, want, epsilon = 1e-9);
        }
        assert!(positions_at_time(-1.0, 0.0, 3.0, &p, DEFAULT_GRID_STEP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn horizontal_line_crosses_each_segment_once() {
        let p = reference();
        let tps = find_turning_points(0.0, 6.0, &p, DEFAULT_GRID_STEP).unwrap();
        let segs = segments_from_turning_points(0.0, 6.0, &p, &tps).unwrap();
        for i in 1..40 {
            let t = 0.2 * i as f64;
            let xs = positions_at_time(t, 0.0, 6.0, &p, DEFAULT_GRID_STEP).unwrap();
            for s in &segs {
                let hits = xs
                    .iter()
                    .filter(|&&x| x >= s.x_start && x <= s.x_end)
                    .count();
                assert!(hits <= 1, "t={t} segment {s:?}");
            }
        }
    }

    #[test]
    fn wedge() {
        let p = reference();
        let w = wedge_bounds(1.0, &p).unwrap();
        assert_abs_diff_eq!(w.t_lower, 1.0 / (3.0 * PI / 2.0), epsilon = 1e-15);
        assert_abs_diff_eq!(w.t_lower, 0.212207, epsilon = 1e-6);
        assert_abs_diff_eq!(w.t_upper, 1.909859, epsilon = 1e-6);
        assert_abs_diff_eq!(
            w.t_upper,
            time_of_position(1.0, &p).unwrap(),
            epsilon = 1e-14
        );
        let z = wedge_bounds(0.0, &p).unwrap();
        assert_eq!((z.t_lower, z.t_upper), (0.0, 0.0));
        assert_eq!(
            wedge_bounds(1.0, &p.with_alpha(1.0).unwrap()),
            Err(ModelError::UnboundedWedge)
        );
        // α > 1, x < 0: the bounds stay ordered
        let q = p.with_alpha(2.0).unwrap();
        let w = wedge_bounds(-1.0, &q).unwrap();
        let t = time_of_position(-1.0, &q).unwrap();
        assert!(w.t_lower <= t && t <= w.t_upper);
    }

    #[test]
    fn events() {
        let p = reference();
        let tps = find_turning_points(0.0, 2.0, &p, DEFAULT_GRID_STEP).unwrap();
        let ev = pair_events(&tps).unwrap();
        assert_eq!(ev[0].kind, EventKind::Annihilation);
        assert_abs_diff_eq!(ev[0].x, 1.02501, epsilon = 1e-3);
        assert_eq!(ev[1].kind, EventKind::Creation);
        assert_abs_diff_eq!(ev[1].x, 1.87970, epsilon = 1e-3);
        assert_eq!((ev[1].lower_branch, ev[1].upper_branch), (1, 2));
        // creation point is a minimum: both neighbouring branches run later in t
        let segs = segments_from_turning_points(0.0, 2.0, &p, &tps).unwrap();
        assert_eq!(segs[ev[1].lower_branch].direction, Direction::Retrograde);
        assert_eq!(segs[ev[1].upper_branch].direction, Direction::Forward);

        let free = p.with_alpha(1e-9).unwrap();
        assert!(
            pair_events(&find_turning_points(0.0, 2.0, &free, DEFAULT_GRID_STEP).unwrap())
                .unwrap()
                .is_empty()
        );

        let bad = [tps[0], tps[0]];
        assert!(matches!(
            pair_events(&bad),
            Err(ModelError::MalformedTurningPoints { .. })
        ));
    }

    #[test]
    fn bohmian_curve() {
        let p = reference();
        assert_eq!(bohmian_time_of_position(0.0, &p), 0.0);
        let expect = 1.25 / (PI / 2.0) * (0.625 + 0.5 / (PI / 2.0));
        assert_abs_diff_eq!(bohmian_time_of_position(0.5, &p), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(bohmian_time_of_position(0.5, &p), 0.750662, epsilon = 1e-6);
        // Simpson quadrature of M/p
        for &(a, b) in &[(0.5, 0.0), (0.9, 1.3), (0.2, -2.0)] {
            let q = p.with_alpha(a).unwrap().with_beta(b).unwrap();
            let (x, n) = (2.7, 1000);
            let h = x / n as f64;
            let f = |y: f64| q.mass() / conjugate_momentum(y, &q).unwrap();
            let mut acc = f(0.0) + f(x);
            for i in 1..n {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
            }
            assert_abs_diff_eq!(
                bohmian_time_of_position(x, &q),
                acc * h / 3.0,
                epsilon = 1e-10
            );
            let ts: Vec<f64> = (0..2000)
                .map(|i| bohmian_time_of_position(0.002 * i as f64, &q))
                .collect();
            assert!(ts.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn momenta() {
        let p = reference();
        let mech = mechanical_momentum(0.5, &p).unwrap();
        let fd = five_point_derivative(|y| time_of_position(y, &p), 0.5, 1e-4).unwrap();
        assert_abs_diff_eq!(mech, p.mass() / fd, epsilon = 1e-8);
        assert_abs_diff_eq!(mech, 1.450163, epsilon = 1e-6);
        let cm = conjugate_momentum(0.5, &p).unwrap();
        assert_abs_diff_eq!(cm, 1.256637, epsilon = 1e-6);
        assert!((mech - cm).abs() > 0.1);

        let free = p.with_alpha(1e-9).unwrap();
        for i in 0..10 {
            let x = 0.31 * i as f64;
            let hk = free.hbar() * free.k();
            assert!((mechanical_momentum(x, &free).unwrap() / hk - 1.0).abs() < 1e-7);
            assert_abs_diff_eq!(conjugate_momentum(x, &free).unwrap(), hk, epsilon = 1e-8);
        }

        let tp = find_turning_points(0.0, 2.0, &p, DEFAULT_GRID_STEP).unwrap()[0];
        assert!(matches!(
            mechanical_momentum(tp.x, &p),
            Err(ModelError::InfiniteVelocity { .. })
        ));
        assert!(conjugate_momentum(tp.x, &p).unwrap().is_finite());
    }
}
