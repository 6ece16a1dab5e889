//! WebAssembly bindings for the browser demo. Every export returns a flat
//! `Float64Array` of fixed-width rows so the page can plot it without parsing.

use qwalk_core::analytics::{self, Regime};
use qwalk_core::experiments::{log_grid, overlap_sweep};
use qwalk_core::reduced::{search_hamiltonian, state_s, state_sigma};
use qwalk_core::spectral::{target_probability, uniform_grid};
use qwalk_core::{BipartiteInstance, Propagator, Targets, WalkKind};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 5000;

fn instance(n1: u32, n2: u32, k1: u32, k2: u32) -> Result<BipartiteInstance, String> {
    BipartiteInstance::new(n1 as usize, n2 as usize, k1 as usize, k2 as usize).map_err(|e| e.to_string())
}

fn walk(name: &str) -> Result<WalkKind, String> {
    name.parse().map_err(|e: qwalk_core::Error| e.to_string())
}

fn points(n: u32) -> Result<usize, String> {
    match n as usize {
        n @ 2..=MAX_POINTS => Ok(n),
        n => Err(format!("points must be between 2 and {MAX_POINTS}, got {n}")),
    }
}

fn regime_for(inst: &BipartiteInstance, kind: WalkKind) -> Regime {
    match kind {
        WalkKind::Adjacency => Regime::Adjacency,
        WalkKind::Laplacian if inst.k1() > 0 => Regime::LaplacianA,
        WalkKind::Laplacian => Regime::LaplacianB,
    }
}

/// Rows `[gamma, |<start|psi_0>|^2, ..., |<start|psi_{dim-1}>|^2]`, preceded by `dim`.
pub fn overlap_rows(n1: u32, n2: u32, k1: u32, k2: u32, walk_name: &str, n_points: u32) -> Result<Vec<f64>, String> {
    let inst = instance(n1, n2, k1, k2)?;
    let kind = walk(walk_name)?;
    let (a, b) = (inst.n1() as f64, inst.n2() as f64);
    let grid = log_grid(0.1 / a.max(b), 10.0 / (a * b).sqrt(), points(n_points)?);
    let start = match kind {
        WalkKind::Laplacian => state_s(&inst),
        WalkKind::Adjacency => state_sigma(&inst),
    };
    let curve = overlap_sweep(&inst, kind, &grid, &[("start", start)]).map_err(|e| e.to_string())?;
    let mut out = vec![curve.dim() as f64];
    for (gamma, rows) in curve.gammas.iter().zip(&curve.overlaps) {
        out.push(*gamma);
        out.extend_from_slice(&rows[0]);
    }
    Ok(out)
}

/// Rows `[t, p_a, p_b, p_total]`. A non-positive `gamma` or `t_max` selects
/// the critical rate or twice the predicted runtime.
#[allow(clippy::too_many_arguments)]
pub fn evolution_rows(
    n1: u32,
    n2: u32,
    k1: u32,
    k2: u32,
    walk_name: &str,
    gamma: f64,
    t_max: f64,
    n_points: u32,
) -> Result<Vec<f64>, String> {
    let inst = instance(n1, n2, k1, k2)?;
    let kind = walk(walk_name)?;
    let regime = regime_for(&inst, kind);
    let gamma = if gamma > 0.0 { gamma } else { analytics::critical_gamma(&inst, regime) };
    let t_max = if t_max > 0.0 { t_max } else { 2.0 * analytics::runtime(&inst, regime) };
    let h = search_hamiltonian(&inst, kind, gamma).map_err(|e| e.to_string())?;
    let psi0 = regime.initial_state(&inst).to_complex();
    let propagator = Propagator::new(&h, &psi0).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for t in uniform_grid(t_max, points(n_points)?) {
        let state = propagator.state_at(t);
        out.push(t);
        for targets in [Targets::A, Targets::B, Targets::Both] {
            out.push(target_probability(&inst, h.basis(), &state, targets));
        }
    }
    Ok(out)
}

/// Rows `[k, t_a, t_b, t_star]` as the marked count of the larger set runs
/// over `1..=k_max`, preceded by the crossover threshold (NaN when the sets
/// are too close in size for either walk to win).
pub fn comparison_rows(n1: u32, n2: u32, k_other: u32, k_max: u32) -> Result<Vec<f64>, String> {
    let first_larger = n1 >= n2;
    let make = |k: u32| if first_larger { instance(n1, n2, k, k_other) } else { instance(n1, n2, k_other, k) };
    if k_max == 0 {
        return Err("k_max must be at least 1".into());
    }
    let mut out = vec![analytics::faster_walk(&make(1)?).threshold.unwrap_or(f64::NAN)];
    for k in 1..=k_max {
        let inst = make(k)?;
        out.push(k as f64);
        for regime in Regime::ALL {
            out.push(analytics::runtime(&inst, regime));
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn overlap_curve(n1: u32, n2: u32, k1: u32, k2: u32, walk: &str, points: u32) -> Result<Vec<f64>, JsError> {
    overlap_rows(n1, n2, k1, k2, walk, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn evolution_curve(
    n1: u32,
    n2: u32,
    k1: u32,
    k2: u32,
    walk: &str,
    gamma: f64,
    t_max: f64,
    points: u32,
) -> Result<Vec<f64>, JsError> {
    evolution_rows(n1, n2, k1, k2, walk, gamma, t_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn runtime_comparison(n1: u32, n2: u32, k_other: u32, k_max: u32) -> Result<Vec<f64>, JsError> {
    comparison_rows(n1, n2, k_other, k_max).map_err(|e| JsError::new(&e))
}
