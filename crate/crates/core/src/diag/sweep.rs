//! Level tracking along a line in the (V, U) plane.

use serde::{Deserialize, Serialize};

use super::eigenvalues_f64;
use crate::lattice::{sector_hamiltonian, ExactMatrix, LatticeSpec, Parity};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    V,
    U,
}

impl SweepParam {
    /// Bound on the slope of any level gap with respect to the parameter.
    ///
    /// The impurity term is diagonal with entries 0, 1 or 2 and the on-site
    /// term has entries 0 or 1, so each level moves at a rate inside that range.
    pub fn gap_slope_bound(self) -> f64 {
        match self {
            SweepParam::V => 2.0,
            SweepParam::U => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub param: SweepParam,
    pub grid: Vec<f64>,
    pub crossing_tol: f64,
    pub anticrossing_floor: f64,
}

impl SweepConfig {
    pub const CROSSING_TOL: f64 = 1e-8;
    pub const ANTICROSSING_FLOOR: f64 = 1e-4;

    pub fn linspace(param: SweepParam, from: f64, to: f64, points: usize) -> Self {
        let grid = match points {
            0 => vec![],
            1 => vec![from],
            _ => (0..points)
                .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
                .collect(),
        };
        SweepConfig {
            param,
            grid,
            crossing_tol: Self::CROSSING_TOL,
            anticrossing_floor: Self::ANTICROSSING_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapKind {
    Crossing,
    AntiCrossing,
    /// Refined gap between the two thresholds.
    Narrow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapMinimum {
    /// Gap is between `lower_level` and `lower_level + 1`.
    pub lower_level: usize,
    pub grid_index: usize,
    pub location: f64,
    pub gap: f64,
    /// False when the slope bound alone proved the gap stays above the floor.
    pub refined: bool,
    pub kind: GapKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSweep {
    pub sweep_parameter: SweepParam,
    pub grid: Vec<f64>,
    pub sector: Parity,
    /// `levels[i]` is the ascending spectrum at `grid[i]`.
    pub levels: Vec<Vec<f64>>,
    pub min_gaps: Vec<GapMinimum>,
}

impl SpectralSweep {
    pub fn smallest_refined_gap(&self) -> Option<f64> {
        self.min_gaps
            .iter()
            .filter(|g| g.refined)
            .map(|g| g.gap)
            .min_by(f64::total_cmp)
    }

    pub fn count(&self, kind: GapKind) -> usize {
        self.min_gaps.iter().filter(|g| g.kind == kind).count()
    }
}

fn with_param(h: &ExactMatrix, p: SweepParam, x: f64) -> ExactMatrix {
    let mut m = h.clone();
    match p {
        SweepParam::V => m.v = x,
        SweepParam::U => m.u = x,
    }
    m
}

fn spectrum_at(h: &ExactMatrix, p: SweepParam, x: f64) -> Result<Vec<f64>> {
    eigenvalues_f64(&with_param(h, p, x))
}

#[cfg(feature = "parallel")]
fn all_levels(h: &ExactMatrix, p: SweepParam, grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    use rayon::prelude::*;
    grid.par_iter().map(|&x| spectrum_at(h, p, x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn all_levels(h: &ExactMatrix, p: SweepParam, grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    grid.iter().map(|&x| spectrum_at(h, p, x)).collect()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the smallest gap of level pair `k` on `[a, b]`.
///
/// Stops early once the classification is settled either way.
fn refine(
    h: &ExactMatrix,
    cfg: &SweepConfig,
    k: usize,
    (mut a, mut b): (f64, f64),
    start: (f64, f64),
) -> Result<(f64, f64)> {
    let slope = cfg.param.gap_slope_bound();
    let gap = |x: f64| -> Result<f64> {
        let s = spectrum_at(h, cfg.param, x)?;
        Ok(s[k + 1] - s[k])
    };
    let mut best = start;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = gap(c)?;
    let mut gd = gap(d)?;
    for _ in 0..200 {
        for (x, g) in [(c, gc), (d, gd)] {
            if g < best.1 {
                best = (x, g);
            }
        }
        if best.1 < cfg.crossing_tol || best.1 - slope * (b - a) > cfg.anticrossing_floor {
            break;
        }
        if (b - a) < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = gap(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = gap(d)?;
        }
    }
    Ok(best)
}

pub fn sweep_spectrum(
    base: &LatticeSpec,
    cfg: &SweepConfig,
    sector: Parity,
) -> Result<SpectralSweep> {
    if cfg.grid.is_empty() {
        return Err(crate::Error::InvalidInput("sweep grid is empty".into()));
    }
    let (_, h, _) = sector_hamiltonian(base, sector)?;
    let levels = all_levels(&h, cfg.param, &cfg.grid)?;
    let slope = cfg.param.gap_slope_bound();
    let g = &cfg.grid;
    let mut min_gaps = vec![];
    let n = h.dim;
    for k in 0..n.saturating_sub(1) {
        for i in 1..g.len().saturating_sub(1) {
            let gp = levels[i - 1][k + 1] - levels[i - 1][k];
            let gi = levels[i][k + 1] - levels[i][k];
            let gn = levels[i + 1][k + 1] - levels[i + 1][k];
            if !(gi < gp && gi <= gn) {
                continue;
            }
            let step = (g[i] - g[i - 1]).abs().max((g[i + 1] - g[i]).abs());
            let bracket = (g[i - 1].min(g[i + 1]), g[i - 1].max(g[i + 1]));
            let (location, gap, refined) = if gi - slope * step > cfg.anticrossing_floor {
                (g[i], gi, false)
            } else {
                let (x, v) = refine(&h, cfg, k, bracket, (g[i], gi))?;
                (x, v, true)
            };
            let kind = if gap < cfg.crossing_tol {
                GapKind::Crossing
            } else if gap > cfg.anticrossing_floor {
                GapKind::AntiCrossing
            } else {
                GapKind::Narrow
            };
            min_gaps.push(GapMinimum {
                lower_level: k,
                grid_index: i,
                location,
                gap,
                refined,
                kind,
            });
        }
    }
    Ok(SpectralSweep {
        sweep_parameter: cfg.param,
        grid: cfg.grid.clone(),
        sector,
        levels,
        min_gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Bc;

    #[test]
    fn zero_width_sweep_is_constant() {
        let s = LatticeSpec::new(7, 0.0, 0.0, Bc::Periodic).unwrap();
        let cfg = SweepConfig::linspace(SweepParam::V, 0.0, 0.0, 5);
        let r = sweep_spectrum(&s, &cfg, Parity::Odd).unwrap();
        for l in &r.levels {
            assert_eq!(l, &r.levels[0]);
        }
        assert!(r.min_gaps.is_empty());
    }

    #[test]
    fn level_jumps_shrink_with_step() {
        let s = LatticeSpec::new(9, 2.0, 0.0, Bc::Open).unwrap();
        let jump = |pts: usize| {
            let cfg = SweepConfig::linspace(SweepParam::V, -2.0, 0.0, pts);
            let r = sweep_spectrum(&s, &cfg, Parity::Even).unwrap();
            r.levels
                .windows(2)
                .flat_map(|w| {
                    w[0].iter()
                        .zip(&w[1])
                        .map(|(a, b)| (a - b).abs())
                        .collect::<Vec<_>>()
                })
                .fold(0.0, f64::max)
        };
        let (j1, j2) = (jump(11), jump(21));
        assert!(j2 < 0.6 * j1, "{j1} {j2}");
        // slope bound holds
        assert!(j1 <= 2.0 * 0.2 + 1e-12);
    }

    #[test]
    fn slope_bound_screening_is_consistent() {
        // odd sector of a small ring: every refined gap is at most the grid gap
        let s = LatticeSpec::new(11, 2.0, 0.0, Bc::Periodic).unwrap();
        let cfg = SweepConfig::linspace(SweepParam::V, -4.0, 0.0, 41);
        let r = sweep_spectrum(&s, &cfg, Parity::Odd).unwrap();
        for m in &r.min_gaps {
            let i = m.grid_index;
            let grid_gap = r.levels[i][m.lower_level + 1] - r.levels[i][m.lower_level];
            assert!(m.gap <= grid_gap + 1e-12);
        }
    }
}
