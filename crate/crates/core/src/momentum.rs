//! Fourier diagnostics on the quadrant `x1 <= 0 <= x2`.
//!
//! The map is `F(q1, q2) = 1/(M'+1) sum psi(x1, x2) exp(-i (q1 x1 + q2 x2))` over
//! `-M' <= x1 <= 0 <= x2 <= M'`, with `q = 2 pi n / (M'+1)`.

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::lattice::{Parity, WaveFunction};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumMap {
    /// Grid side `M' + 1`.
    pub n: usize,
    pub parity: Parity,
    pub energy: f64,
    /// Row-major over `(n1, n2)`.
    pub f: Vec<C64>,
    /// `|F|^2` normalized to unit sum.
    pub weight: Vec<f64>,
    /// `sum |psi|^2` over the quadrant.
    pub region_norm: f64,
}

/// Grid momentum of index `k`, folded into `[-pi, pi)`.
pub fn grid_momentum(k: usize, n: usize) -> f64 {
    let q = 2.0 * PI * k as f64 / n as f64;
    if q >= PI - 1e-12 {
        q - 2.0 * PI
    } else {
        q
    }
}

/// Nearest grid index of momentum `q`.
pub fn grid_index(q: f64, n: usize) -> usize {
    let k = (q * n as f64 / (2.0 * PI)).round() as i64;
    k.rem_euclid(n as i64) as usize
}

impl MomentumMap {
    pub fn at(&self, n1: usize, n2: usize) -> C64 {
        self.f[n1 * self.n + n2]
    }

    pub fn total_power(&self) -> f64 {
        self.f.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Transforms a quadrant sample `g[j1][j2] = psi(-j1, j2)` laid out row-major.
pub fn dft_quadrant(samples: &[C64], n: usize) -> Vec<C64> {
    assert_eq!(samples.len(), n * n);
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = samples.to_vec();
    // x2 = j2 carries exp(-i q2 j2)
    for row in buf.chunks_mut(n) {
        fwd.process(row);
    }
    // x1 = -j1 carries exp(+i q1 j1)
    let mut col = vec![C64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = buf[r * n + c];
        }
        inv.process(&mut col);
        for r in 0..n {
            buf[r * n + c] = col[r] / n as f64;
        }
    }
    buf
}

pub fn dft_region102(psi: &WaveFunction) -> MomentumMap {
    let h = psi.spec.half();
    let n = h as usize + 1;
    let mut samples = Vec::with_capacity(n * n);
    for j1 in 0..=h {
        for j2 in 0..=h {
            samples.push(C64::new(psi.psi(-j1, j2), 0.0));
        }
    }
    let region_norm = samples.iter().map(|z| z.norm_sqr()).sum();
    let f = dft_quadrant(&samples, n);
    let total: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    let weight = f
        .iter()
        .map(|z| {
            if total > 0.0 {
                z.norm_sqr() / total
            } else {
                0.0
            }
        })
        .collect();
    MomentumMap {
        n,
        parity: psi.parity,
        energy: psi.energy,
        f,
        weight,
        region_norm,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub n1: usize,
    pub n2: usize,
    pub q1: f64,
    pub q2: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub parity: Parity,
    pub energy: f64,
    pub grid: usize,
    /// Greedy local maxima, strongest first.
    pub peaks: Vec<Peak>,
    /// Summed weight of the eight strongest cells.
    pub top8_weight: f64,
    pub top4_weight: f64,
    /// The four strongest peaks are closed under the symmetry group on their own.
    pub four_fold: bool,
    /// Weighted fraction of symmetry images of the top eight peaks that land near a top-16 peak.
    pub symmetry_score: f64,
    /// Largest `||q1| - |q2||` over the four strongest peaks.
    pub diagonal_spread: f64,
    /// All four strongest peaks within one cell of `|q1| = |q2|`.
    pub equal_momenta: bool,
}

fn cell_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

fn near(a: (usize, usize), b: (usize, usize), n: usize) -> bool {
    cell_distance(a.0, b.0, n) <= 1 && cell_distance(a.1, b.1, n) <= 1
}

/// Images under inversion, exchange and single-axis reflection.
fn symmetry_images((a, b): (usize, usize), n: usize) -> [(usize, usize); 7] {
    let neg = |k: usize| (n - k) % n;
    [
        (neg(a), neg(b)),
        (b, a),
        (neg(b), neg(a)),
        (neg(a), b),
        (a, neg(b)),
        (neg(b), a),
        (b, neg(a)),
    ]
}

pub fn peak_report(map: &MomentumMap) -> PeakReport {
    let n = map.n;
    let mut order: Vec<usize> = (0..n * n).collect();
    order.sort_by(|&a, &b| map.weight[b].total_cmp(&map.weight[a]).then(a.cmp(&b)));
    let mut peaks: Vec<Peak> = Vec::new();
    for idx in order {
        let cell = (idx / n, idx % n);
        if peaks.iter().any(|p| near((p.n1, p.n2), cell, n)) {
            continue;
        }
        peaks.push(Peak {
            n1: cell.0,
            n2: cell.1,
            q1: grid_momentum(cell.0, n),
            q2: grid_momentum(cell.1, n),
            weight: map.weight[idx],
        });
    }
    let mut sorted = map.weight.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let top = |k: usize| sorted.iter().take(k).sum::<f64>();
    // images are matched against a wider set so that orbits cut off at the eighth peak still close
    let closure = |k: usize, against: usize| {
        let pool: Vec<(usize, usize)> = peaks.iter().take(against).map(|p| (p.n1, p.n2)).collect();
        let mut hit = 0.0;
        let mut total = 0.0;
        for p in peaks.iter().take(k) {
            let found = symmetry_images((p.n1, p.n2), n)
                .iter()
                .filter(|&&img| pool.iter().any(|&d| near(d, img, n)))
                .count();
            hit += p.weight * found as f64 / 7.0;
            total += p.weight;
        }
        if total > 0.0 {
            hit / total
        } else {
            0.0
        }
    };
    let cell = 2.0 * PI / n as f64;
    let diagonal_spread = peaks
        .iter()
        .take(4)
        .map(|p| (p.q1.abs() - p.q2.abs()).abs())
        .fold(0.0, f64::max);
    PeakReport {
        parity: map.parity,
        energy: map.energy,
        grid: n,
        top8_weight: top(8),
        top4_weight: top(4),
        symmetry_score: closure(8, 16),
        four_fold: closure(4, 4) == 1.0,
        diagonal_spread,
        equal_momenta: diagonal_spread <= cell + 1e-9,
        peaks,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Diffraction {
    BetheLike8,
    WeaklyDiffractive8,
    WeaklyDiffractive4,
    StronglyDiffractive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffractionThresholds {
    pub bethe8: f64,
    pub weak8: f64,
    pub weak4: f64,
}

impl Default for DiffractionThresholds {
    fn default() -> Self {
        DiffractionThresholds {
            bethe8: 0.5,
            weak8: 0.5,
            weak4: 0.45,
        }
    }
}

pub fn classify_diffraction(report: &PeakReport) -> Diffraction {
    classify_with(report, &DiffractionThresholds::default())
}

pub fn classify_with(report: &PeakReport, t: &DiffractionThresholds) -> Diffraction {
    match report.parity {
        Parity::Odd if report.top8_weight > t.bethe8 => Diffraction::BetheLike8,
        Parity::Odd => Diffraction::StronglyDiffractive,
        Parity::Even if report.four_fold && report.top4_weight > t.weak4 => {
            Diffraction::WeaklyDiffractive4
        }
        Parity::Even if report.top8_weight > t.weak8 => Diffraction::WeaklyDiffractive8,
        Parity::Even if report.top4_weight > t.weak4 => Diffraction::WeaklyDiffractive4,
        Parity::Even => Diffraction::StronglyDiffractive,
    }
}
