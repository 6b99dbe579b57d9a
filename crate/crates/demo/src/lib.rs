//! WebAssembly bindings for the static page in `www/`.
//!
//! Every entry point takes plain strings and numbers and returns a string, so
//! the page needs no bundler and no generated TypeScript types.

use capra_core::conjugacy::{box_grid, capra_biconjugate, l0, l0_function};
use capra_core::scene::{report_to_string, run_scene, Analysis, RunOptions, Scene, SetOutcome};
use capra_core::{Error, SourceNorm};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Parses `"1,0; -1,1; -1,-1"` into planar generators. Entries may be
/// integers, decimals or fractions like `1/2`.
fn parse_generators(text: &str) -> Result<Vec<Value>, Error> {
    let rows: Vec<Value> = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| {
            let coords: Vec<&str> = row.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            if coords.len() != 2 {
                return Err(Error::Parse(format!("expected two coordinates in {row:?}")));
            }
            for c in &coords {
                capra_core::scalar::parse_rational(c)?;
            }
            Ok(json!(coords))
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(Error::InvalidInput("enter at least one generator".into()));
    }
    Ok(rows)
}

fn run(generators: &str, norm: &str, kind: &str, with_origin: bool, figures: bool) -> Result<SetOutcome, Error> {
    let norm: SourceNorm = norm.parse()?;
    let set = match kind {
        "ray_fan" | "convex_cone" => json!({
            "kind": kind,
            "label": "K",
            "generators": parse_generators(generators)?,
            "include_origin": with_origin,
        }),
        other => return Err(Error::Unsupported(format!("set kind {other}"))),
    };
    let scene = Scene::from_json(&json!({"schema": "capra-scene/1", "dimension": 2, "set": set}).to_string())?;
    let opts = RunOptions { norm: Some(norm), analyses: Some(vec![Analysis::Decide]), figures, ..RunOptions::default() };
    Ok(run_scene(&scene, &opts)?.remove(0))
}

fn to_js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// The decision report as pretty JSON.
pub fn decide_report(generators: &str, norm: &str, kind: &str, with_origin: bool) -> Result<String, Error> {
    run(generators, norm, kind, with_origin, false).map(|o| report_to_string(&o.report))
}

/// The SVG figure of the cone, the unit sphere and the radial image.
pub fn figure_svg(generators: &str, norm: &str, kind: &str, with_origin: bool) -> Result<String, Error> {
    run(generators, norm, kind, with_origin, true)?.svg.ok_or_else(|| Error::Unsupported("no figure".into()))
}

/// The Capra biconjugate of the ℓ0 pseudonorm at `(x1, x2)`, taken over a
/// square dual grid, next to ℓ0 itself.
pub fn l0_biconjugate_report(x1: f64, x2: f64, norm: &str, radius: f64, resolution: usize) -> Result<String, Error> {
    let norm: SourceNorm = norm.parse()?;
    if radius.is_nan() || radius <= 0.0 || !(3..=401).contains(&resolution) {
        return Err(Error::InvalidInput("radius must be positive and resolution between 3 and 401".into()));
    }
    let x = vec![x1, x2];
    let f = l0_function(box_grid(2, 2.0, 41));
    let b = capra_biconjugate(&f, std::slice::from_ref(&x), &box_grid(2, radius, resolution), &norm);
    let report = json!({"x": x, "l0": l0(&x), "biconjugate": b.values.values[0], "radius": radius, "resolution": resolution});
    Ok(report_to_string(&report))
}

#[wasm_bindgen]
pub fn decide(generators: &str, norm: &str, kind: &str, with_origin: bool) -> Result<String, JsValue> {
    decide_report(generators, norm, kind, with_origin).map_err(to_js)
}

#[wasm_bindgen]
pub fn figure(generators: &str, norm: &str, kind: &str, with_origin: bool) -> Result<String, JsValue> {
    figure_svg(generators, norm, kind, with_origin).map_err(to_js)
}

#[wasm_bindgen]
pub fn l0_biconjugate(x1: f64, x2: f64, norm: &str, radius: f64, resolution: usize) -> Result<String, JsValue> {
    l0_biconjugate_report(x1, x2, norm, radius, resolution).map_err(to_js)
}
