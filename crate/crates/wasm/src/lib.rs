//! Browser bindings: figure rendering, position inversion and the time
//! decomposition, for the static page in `www/`.

use wasm_bindgen::prelude::*;

use eprmol::figure::{figure_by_id, render_svg, FigureOptions};
use eprmol::limits::decompose_time;
use eprmol::trajectory::{positions_at_time, DEFAULT_GRID_STEP};
use eprmol::ModelParams;

const FIGURE_SAMPLES: usize = 1201;

fn params(alpha: f64, beta: f64, k: f64) -> Result<ModelParams, String> {
    ModelParams::new(1.0, 1.0, alpha, beta, k).map_err(|e| e.to_string())
}

pub fn figure_svg(id: u32, alpha: f64, k: f64, x_max: f64, events: bool) -> Result<String, String> {
    let p = params(alpha, 0.0, k)?;
    let opts = FigureOptions {
        x_max,
        samples: FIGURE_SAMPLES,
        markers: events,
    };
    figure_by_id(id, &p, &opts)
        .map(|f| render_svg(&f))
        .map_err(|e| e.to_string())
}

pub fn positions(
    t: f64,
    alpha: f64,
    beta: f64,
    k: f64,
    x_min: f64,
    x_max: f64,
) -> Result<Vec<f64>, String> {
    let p = params(alpha, beta, k)?;
    positions_at_time(t, x_min, x_max, &p, DEFAULT_GRID_STEP).map_err(|e| e.to_string())
}

/// `[c_p1, c_p2, c_ent, total]` at `x`.
pub fn decomposition(x: f64, alpha: f64, beta: f64, k: f64) -> Result<Vec<f64>, String> {
    let p = params(alpha, beta, k)?;
    let d = decompose_time(x, &p).map_err(|e| e.to_string())?;
    Ok(vec![d.c_p1, d.c_p2, d.c_ent, d.total])
}

#[wasm_bindgen(js_name = renderFigure)]
pub fn render_figure(
    id: u32,
    alpha: f64,
    k: f64,
    x_max: f64,
    events: bool,
) -> Result<String, JsValue> {
    figure_svg(id, alpha, k, x_max, events).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = positionsAtTime)]
pub fn positions_at(
    t: f64,
    alpha: f64,
    beta: f64,
    k: f64,
    x_min: f64,
    x_max: f64,
) -> Result<Vec<f64>, JsValue> {
    positions(t, alpha, beta, k, x_min, x_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = decomposeTime)]
pub fn decompose_at(x: f64, alpha: f64, beta: f64, k: f64) -> Result<Vec<f64>, JsValue> {
    decomposition(x, alpha, beta, k).map_err(|e| JsValue::from_str(&e))
}
