use serde::{Deserialize, Serialize};

use super::bands::{find_bound_state, free_roots, solve_band1, solve_band2, solve_band3, Hole};
use super::{Band, BetheRoot};
use crate::diag::eigenvalues_f64;
use crate::lattice::{sector_hamiltonian, LatticeSpec, Parity};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub root: BetheRoot,
    /// Index into the ascending odd-sector spectrum, `None` if nothing was close enough.
    pub level: Option<usize>,
    pub level_energy: Option<f64>,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub spec: LatticeSpec,
    pub band1: usize,
    pub band2: usize,
    pub band3: usize,
    pub bound: usize,
    pub expected: usize,
    pub tolerance: f64,
    pub matches: Vec<Match>,
    /// Odd-sector levels no root was assigned to.
    pub unclaimed_levels: Vec<f64>,
    pub holes: Vec<Hole>,
    pub notices: Vec<String>,
}

impl CompletenessReport {
    pub fn total(&self) -> usize {
        self.band1 + self.band2 + self.band3 + self.bound
    }

    pub fn max_difference(&self) -> f64 {
        self.matches
            .iter()
            .map(|m| m.difference)
            .fold(0.0, f64::max)
    }

    pub fn unmatched(&self) -> impl Iterator<Item = &Match> {
        self.matches.iter().filter(|m| m.level.is_none())
    }

    pub fn passed(&self) -> bool {
        self.total() == self.expected
            && self.unmatched().count() == 0
            && self.unclaimed_levels.is_empty()
    }
}

/// Runs every band solver and assigns each root to a distinct odd-sector level.
///
/// Without interaction and impurity the free enumeration replaces the solvers.
pub fn completeness_report(spec: &LatticeSpec, tolerance: f64) -> Result<CompletenessReport> {
    let mut roots = Vec::new();
    let mut holes = Vec::new();
    let mut notices = Vec::new();
    if spec.u == 0.0 && spec.v == 0.0 {
        roots = free_roots(spec)?;
        notices.push("noninteracting: free enumeration".to_string());
    } else {
        for sol in [solve_band1(spec)?, solve_band2(spec)?, solve_band3(spec)?] {
            roots.extend(sol.roots);
            holes.extend(sol.holes);
            notices.extend(sol.notice);
        }
        roots.extend(find_bound_state(spec)?);
    }
    let count = |b: Band| roots.iter().filter(|r| r.band == b).count();
    let (band1, band2, band3, bound) = (
        count(Band::One),
        count(Band::Two),
        count(Band::Three),
        count(Band::Bound),
    );

    let (_, h, _) = sector_hamiltonian(spec, Parity::Odd)?;
    let levels = eigenvalues_f64(&h)?;
    let mut used = vec![false; levels.len()];
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| roots[a].energy.total_cmp(&roots[b].energy));
    let mut matches = Vec::with_capacity(roots.len());
    for i in order {
        let e = roots[i].energy;
        let best = (0..levels.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (levels[a] - e).abs().total_cmp(&(levels[b] - e).abs()));
        let m = match best {
            Some(j) if (levels[j] - e).abs() <= tolerance => {
                used[j] = true;
                Match {
                    root: roots[i].clone(),
                    level: Some(j),
                    level_energy: Some(levels[j]),
                    difference: (levels[j] - e).abs(),
                }
            }
            Some(j) => Match {
                root: roots[i].clone(),
                level: None,
                level_energy: None,
                difference: (levels[j] - e).abs(),
            },
            None => Match {
                root: roots[i].clone(),
                level: None,
                level_energy: None,
                difference: f64::INFINITY,
            },
        };
        matches.push(m);
    }
    let unclaimed_levels = levels
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(&e, _)| e)
        .collect();
    Ok(CompletenessReport {
        spec: *spec,
        band1,
        band2,
        band3,
        bound,
        expected: spec.odd_dim(),
        tolerance,
        matches,
        unclaimed_levels,
        holes,
        notices,
    })
}
