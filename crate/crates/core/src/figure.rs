//! Static SVG rendering of trajectory families, time on the horizontal axis
//! and position on the vertical axis, launched from the origin.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::dataset::{format_sig, quarter_pi_betas, sample_grid};
use crate::error::{ModelError, Result};
use crate::params::ModelParams;
use crate::trajectory::{
    find_turning_points, pair_events, time_of_position, EventKind, DEFAULT_GRID_STEP,
};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub dashed: bool,
    /// `(t, x)` pairs in data coordinates.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marker {
    pub t: f64,
    pub x: f64,
    pub creation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub title: String,
    pub curves: Vec<Curve>,
    pub markers: Vec<Marker>,
    /// Wedge edges as `t = slope·x` lines.
    pub wedge_slopes: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub x_max: f64,
    pub samples: usize,
    pub markers: bool,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            x_max: 4.0,
            samples: 2001,
            markers: false,
        }
    }
}

fn curve_for(p: &ModelParams, beta: f64, xs: &[f64], dashed: bool) -> Result<(Curve, ModelParams)> {
    let q = p.with_beta(beta)?;
    let points = xs
        .iter()
        .map(|&x| Ok((time_of_position(x, &q)?, x)))
        .collect::<Result<Vec<_>>>()?;
    let label = format!("beta = {}", format_sig(q.beta(), 4));
    Ok((
        Curve {
            label,
            dashed,
            points,
        },
        q,
    ))
}

fn wedge_slopes(p: &ModelParams) -> Option<(f64, f64)> {
    let a = p.alpha();
    if a == 1.0 {
        return None;
    }
    let r = (1.0 - a) / (1.0 + a);
    let s = p.time_scale();
    Some(((s * r).min(s / r), (s * r).max(s / r)))
}

fn add_markers(fig: &mut Figure, q: &ModelParams, x_max: f64) -> Result<()> {
    let tps = find_turning_points(0.0, x_max, q, DEFAULT_GRID_STEP)?;
    for ev in pair_events(&tps)? {
        fig.markers.push(Marker {
            t: ev.t,
            x: ev.x,
            creation: ev.kind == EventKind::Creation,
        });
    }
    Ok(())
}

/// Two trajectories, β = 0 solid and β = π dashed.
pub fn figure_one(p: &ModelParams, opts: &FigureOptions) -> Result<Figure> {
    let xs = sample_grid(0.0, opts.x_max, opts.samples)?;
    let (solid, q0) = curve_for(p, 0.0, &xs, false)?;
    let (dashed, q1) = curve_for(p, PI, &xs, true)?;
    let mut fig = Figure {
        title: format!(
            "Motion x(t), alpha = {}: beta = 0 solid, beta = pi dashed",
            format_sig(p.alpha(), 4)
        ),
        curves: vec![solid, dashed],
        markers: vec![],
        wedge_slopes: wedge_slopes(p),
    };
    if opts.markers {
        add_markers(&mut fig, &q0, opts.x_max)?;
        add_markers(&mut fig, &q1, opts.x_max)?;
    }
    Ok(fig)
}

/// Eight trajectories for β = jπ/4, all solid.
pub fn figure_two(p: &ModelParams, opts: &FigureOptions) -> Result<Figure> {
    let xs = sample_grid(0.0, opts.x_max, opts.samples)?;
    let mut fig = Figure {
        title: format!(
            "Trajectories for beta = 0, pi/4, ..., 7pi/4, alpha = {}",
            format_sig(p.alpha(), 4)
        ),
        curves: vec![],
        markers: vec![],
        wedge_slopes: wedge_slopes(p),
    };
    for beta in quarter_pi_betas() {
        let (c, q) = curve_for(p, beta, &xs, false)?;
        fig.curves.push(c);
        if opts.markers {
            add_markers(&mut fig, &q, opts.x_max)?;
        }
    }
    Ok(fig)
}

pub fn figure_by_id(id: u32, p: &ModelParams, opts: &FigureOptions) -> Result<Figure> {
    match id {
        1 => figure_one(p, opts),
        2 => figure_two(p, opts),
        other => Err(ModelError::invalid(
            "figure",
            format!("must be 1 or 2, got {other}"),
        )),
    }
}

/// Rounds an axis span up to a 1/2/5 × 10ⁿ tick step.
fn tick_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders the figure. The plot group carries its data ranges and pixel box
/// as `data-*` attributes so the curves can be mapped back to data space.
pub fn render_svg(fig: &Figure) -> String {
    let (mut t_min, mut t_max) = (0.0f64, f64::MIN);
    let (mut x_min, mut x_max) = (0.0f64, f64::MIN);
    for c in &fig.curves {
        for &(t, x) in &c.points {
            t_min = t_min.min(t);
            t_max = t_max.max(t);
            x_min = x_min.min(x);
            x_max = x_max.max(x);
        }
    }
    if !(t_max > t_min) {
        t_max = t_min + 1.0;
    }
    if !(x_max > x_min) {
        x_max = x_min + 1.0;
    }
    t_max *= 1.05;

    let w = WIDTH - LEFT - RIGHT;
    let h = HEIGHT - TOP - BOTTOM;
    let px = |t: f64| LEFT + (t - t_min) / (t_max - t_min) * w;
    let py = |x: f64| TOP + (1.0 - (x - x_min) / (x_max - x_min)) * h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&fig.title)
    );
    let _ = writeln!(
        s,
        r#"<g id="plot" data-t-min="{t_min:e}" data-t-max="{t_max:e}" data-x-min="{x_min:e}" data-x-max="{x_max:e}" data-left="{LEFT}" data-top="{TOP}" data-width="{w}" data-height="{h}">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{w}" height="{h}"/></clipPath></defs>"#
    );

    // axes and ticks
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{LEFT}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        TOP + h,
        LEFT + w,
        TOP + h
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>"#,
        TOP + h
    );
    let ts = tick_step(t_max - t_min);
    let mut t = (t_min / ts).ceil() * ts;
    while t <= t_max + 1e-12 {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            TOP + h,
            TOP + h + 5.0,
            TOP + h + 18.0,
            format_sig(t, 4)
        );
        t += ts;
    }
    let xs = tick_step(x_max - x_min);
    let mut xv = (x_min / xs).ceil() * xs;
    while xv <= x_max + 1e-12 {
        let y = py(xv);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            format_sig(xv, 4)
        );
        xv += xs;
    }
    let _ = writeln!(
        s,
        r#"<text class="label" x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">t</text>"#,
        LEFT + w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text class="label" x="20" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">x</text>"#,
        TOP + h / 2.0
    );

    if let Some((lo, hi)) = fig.wedge_slopes {
        for slope in [lo, hi] {
            // t = slope·x, clipped to the plot
            let x_end = x_max.min(t_max / slope);
            let _ = writeln!(
                s,
                r##"<line class="wedge" x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="#999999" stroke-dasharray="2,3" clip-path="url(#plot-area)"/>"##,
                px(0.0),
                py(0.0),
                px(slope * x_end),
                py(x_end)
            );
        }
    }

    for (i, c) in fig.curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if c.dashed {
            r#" stroke-dasharray="8,5""#
        } else {
            ""
        };
        let _ = write!(
            s,
            r#"<polyline class="curve" data-label="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash} clip-path="url(#plot-area)" points=""#,
            escape(&c.label)
        );
        for (j, &(t, x)) in c.points.iter().enumerate() {
            if j > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.4},{:.4}", px(t), py(x));
        }
        let _ = writeln!(s, r#""/>"#);
    }

    for m in &fig.markers {
        let (cls, fill) = if m.creation {
            ("creation", "white")
        } else {
            ("annihilation", "black")
        };
        let _ = writeln!(
            s,
            r#"<circle class="event {cls}" cx="{:.4}" cy="{:.4}" r="3.5" fill="{fill}" stroke="black"/>"#,
            px(m.t),
            py(m.x)
        );
    }

    // legend
    for (i, c) in fig.curves.iter().enumerate() {
        let y = TOP + 14.0 + 16.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        let dash = if c.dashed {
            r#" stroke-dasharray="8,5""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<line class="legend" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            LEFT + w - 130.0,
            LEFT + w - 100.0,
            LEFT + w - 94.0,
            y + 4.0,
            escape(&c.label)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
