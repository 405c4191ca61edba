//! Browser bindings: level sweeps, Yang-Baxter residual maps and momentum maps.
//!
//! Everything returns flat `Float64Array`s in row-major order so the page can
//! draw straight onto a canvas.

use bhlab_core::bethe::{mat2_max_abs, ybe_residual};
use bhlab_core::diag::{sector_states, sweep_spectrum, SweepConfig, SweepParam};
use bhlab_core::momentum::{classify_diffraction, dft_region102, peak_report};
use bhlab_core::{Bc, Error, LatticeSpec, Parity, C64};
use wasm_bindgen::prelude::*;

/// Largest lattice the page accepts; keeps the dense solvers interactive.
pub const MAX_SITES: usize = 61;

fn spec(m: usize, u: f64, v: f64, periodic: bool) -> Result<LatticeSpec, String> {
    if m > MAX_SITES {
        return Err(format!("M = {m} is above the browser limit of {MAX_SITES}"));
    }
    let bc = if periodic { Bc::Periodic } else { Bc::Open };
    LatticeSpec::new(m, u, v, bc).map_err(|e| e.to_string())
}

fn parity(odd: bool) -> Parity {
    if odd {
        Parity::Odd
    } else {
        Parity::Even
    }
}

#[wasm_bindgen]
pub struct Sweep {
    grid: Vec<f64>,
    levels: Vec<f64>,
    dim: usize,
    smallest_gap: f64,
}

#[wasm_bindgen]
impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        self.grid.clone()
    }
    /// `points * dim` energies, one ascending spectrum per grid point.
    pub fn levels(&self) -> Vec<f64> {
        self.levels.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn dim(&self) -> usize {
        self.dim
    }
    /// NaN when no gap needed refinement.
    #[wasm_bindgen(getter)]
    pub fn smallest_gap(&self) -> f64 {
        self.smallest_gap
    }
}

/// Sector spectrum as `V` runs over `points` values in `[v_from, v_to]`.
#[wasm_bindgen]
pub fn spectrum_sweep(
    m: usize,
    u: f64,
    periodic: bool,
    odd: bool,
    v_from: f64,
    v_to: f64,
    points: usize,
) -> Result<Sweep, String> {
    if !(2..=400).contains(&points) {
        return Err("points must be between 2 and 400".into());
    }
    let s = spec(m, u, v_from, periodic)?;
    let cfg = SweepConfig::linspace(SweepParam::V, v_from, v_to, points);
    let sw = sweep_spectrum(&s, &cfg, parity(odd)).map_err(|e| e.to_string())?;
    Ok(Sweep {
        dim: s.sector_dim(parity(odd)),
        smallest_gap: sw.smallest_refined_gap().unwrap_or(f64::NAN),
        levels: sw.levels.concat(),
        grid: sw.grid,
    })
}

#[wasm_bindgen]
pub struct YbeMap {
    points: usize,
    odd: Vec<f64>,
    even: Vec<f64>,
}

#[wasm_bindgen]
impl YbeMap {
    #[wasm_bindgen(getter)]
    pub fn points(&self) -> usize {
        self.points
    }
    /// Max-entry residual per `(k1, k2)` cell, NaN at poles.
    pub fn odd(&self) -> Vec<f64> {
        self.odd.clone()
    }
    pub fn even(&self) -> Vec<f64> {
        self.even.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn odd_max(&self) -> f64 {
        self.odd
            .iter()
            .copied()
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max)
    }
}

/// Residuals on the square `(0, pi)^2`, sampled at cell centres.
#[wasm_bindgen]
pub fn ybe_map(u: f64, v: f64, points: usize) -> Result<YbeMap, String> {
    if !(2..=200).contains(&points) {
        return Err("points must be between 2 and 200".into());
    }
    let k = |i: usize| std::f64::consts::PI * (i as f64 + 0.5) / points as f64;
    let cell = |k1: f64, k2: f64, p: Parity| match ybe_residual(
        C64::new(k1, 0.0),
        C64::new(k2, 0.0),
        u,
        v,
        p,
    ) {
        Ok(r) => Ok(mat2_max_abs(&r)),
        Err(Error::Pole(_)) => Ok(f64::NAN),
        Err(e) => Err(e.to_string()),
    };
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for i in 0..points {
        for j in 0..points {
            odd.push(cell(k(i), k(j), Parity::Odd)?);
            even.push(cell(k(i), k(j), Parity::Even)?);
        }
    }
    Ok(YbeMap { points, odd, even })
}

#[wasm_bindgen]
pub struct MomentumView {
    n: usize,
    weight: Vec<f64>,
    energy: f64,
    top8: f64,
    class: String,
}

#[wasm_bindgen]
impl MomentumView {
    #[wasm_bindgen(getter)]
    pub fn n(&self) -> usize {
        self.n
    }
    /// `n * n` weights; row `n1`, column `n2`, index 0 at zero momentum.
    pub fn weight(&self) -> Vec<f64> {
        self.weight.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn energy(&self) -> f64 {
        self.energy
    }
    #[wasm_bindgen(getter)]
    pub fn top8(&self) -> f64 {
        self.top8
    }
    #[wasm_bindgen(getter)]
    pub fn class(&self) -> String {
        self.class.clone()
    }
}

/// Momentum map of the sector state closest to `energy`.
#[wasm_bindgen]
pub fn momentum_map(
    m: usize,
    u: f64,
    v: f64,
    periodic: bool,
    odd: bool,
    energy: f64,
) -> Result<MomentumView, String> {
    let s = spec(m, u, v, periodic)?;
    let states = sector_states(&s, parity(odd)).map_err(|e| e.to_string())?;
    let psi = states
        .iter()
        .min_by(|a, b| {
            (a.energy - energy)
                .abs()
                .total_cmp(&(b.energy - energy).abs())
        })
        .ok_or("empty sector")?;
    let map = dft_region102(psi);
    let rep = peak_report(&map);
    Ok(MomentumView {
        n: map.n,
        energy: psi.energy,
        top8: rep.top8_weight,
        class: format!("{:?}", classify_diffraction(&rep)),
        weight: map.weight,
    })
}
