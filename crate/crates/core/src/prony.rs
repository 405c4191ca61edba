//! Bethe-form test for eigenstates along the line `x1 = 0`.
//!
//! A Bethe state restricted to that line is a sum of four exponentials, so its samples
//! obey a four-term linear recurrence `g[n+4] = r3 g[n+3] + r2 g[n+2] + r1 g[n+1] + r0 g[n]`
//! with `r0 = -1`, `r1 = r3` and `r1 = -E`. The recurrence is solved from Hankel systems at
//! every offset and its constancy decides the verdict.

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::field::{solve_full_pivot, ComplexField, Field};
use crate::lattice::{wrap, Bc, LatticeSpec, WaveFunction};
use crate::poly::companion_roots_polished;
use crate::{Error, Result, C64};

/// Number of exponentials in a two-particle Bethe line.
pub const ORDER: usize = 4;

/// Acceptance threshold on the recurrence deviations at the given working precision.
pub fn bethe_tol(digits: u32) -> f64 {
    10f64.powi(30 - digits as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PronySequence<F> {
    pub values: Vec<F>,
    pub precision_digits: u32,
}

/// Sites `x2` sampled on the line `x1 = 0`: `0..=M'` for open chains, once around for rings.
pub fn line_positions(spec: &LatticeSpec) -> Vec<i32> {
    match spec.bc {
        Bc::Open => (0..=spec.half()).collect(),
        Bc::Periodic => (0..spec.m as i32).map(|x| wrap(spec, x)).collect(),
    }
}

#[cfg(feature = "mp")]
pub fn extract_line(psi: &crate::lattice::PreciseWaveFunction) -> PronySequence<rug::Float> {
    let values = line_positions(&psi.spec)
        .into_iter()
        .map(|x| psi.psi(0, x).clone())
        .collect();
    PronySequence {
        values,
        precision_digits: psi.precision_digits,
    }
}

pub fn extract_line_f64(psi: &WaveFunction) -> PronySequence<f64> {
    let values = line_positions(&psi.spec)
        .into_iter()
        .map(|x| psi.psi(0, x))
        .collect();
    PronySequence {
        values,
        precision_digits: psi.precision_digits.min(16),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HankelSolve<F> {
    pub offset: usize,
    /// `r[0..order]`, lowest shift first.
    pub r: Vec<F>,
    /// Largest over smallest pivot magnitude of the elimination.
    pub pivot_ratio: f64,
}

/// Recurrence coefficients of the given order from samples `g[n..n + 2 order]`.
pub fn solve_recurrence<F: Field>(g: &[F], n: usize, order: usize) -> Result<HankelSolve<F>> {
    if order == 0 || n + 2 * order > g.len() {
        return Err(Error::InvalidInput(format!(
            "offset {n} needs {} samples, sequence has {}",
            n + 2 * order,
            g.len()
        )));
    }
    let mut a = Vec::with_capacity(order * order);
    for j in 0..order {
        for i in 0..order {
            a.push(g[n + j + i].clone());
        }
    }
    let b: Vec<F> = (0..order).map(|j| g[n + j + order].clone()).collect();
    match solve_full_pivot(&a, &b, order) {
        Some((r, pivot_ratio)) if pivot_ratio.is_finite() => Ok(HankelSolve {
            offset: n,
            r,
            pivot_ratio,
        }),
        _ => Err(Error::Singular(format!(
            "Hankel system at offset {n} is singular"
        ))),
    }
}

pub fn prony_coefficients<F: Field>(seq: &PronySequence<F>, n: usize) -> Result<HankelSolve<F>> {
    solve_recurrence(&seq.values, n, ORDER)
}

/// Largest `|g[n+p] - sum r_i g[n+i]|` over the sequence, relative to the largest sample.
pub fn recurrence_residual<F: Field>(g: &[F], r: &[F]) -> f64 {
    let p = r.len();
    let scale = g
        .iter()
        .map(|x| x.mag())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for n in 0..g.len().saturating_sub(p) {
        let mut acc = g[n + p].clone();
        for i in 0..p {
            acc = acc.sub(&r[i].mul(&g[n + i]));
        }
        worst = worst.max(acc.mag());
    }
    worst / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    /// Both momenta real.
    I,
    /// One momentum bound to the impurity.
    II,
    /// Complex-conjugate pair bound to each other.
    III,
    /// Both momenta imaginary.
    IV,
    NotBethe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RRow {
    pub offset: usize,
    pub r: [f64; 4],
    pub pivot_ratio: f64,
    /// Whether the offset was conditioned well enough to vote.
    pub used: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumClass {
    pub category: Category,
    pub mu: [C64; 2],
    pub momenta: [C64; 2],
    /// Some `|mu|` lies within `1e-9` of 2.
    pub boundary: bool,
    /// Asymptotic imaginary part expected for categories II and III.
    pub nu_reference: Option<f64>,
    pub nu_deviation: Option<f64>,
    /// Category II: real part is 0 for an attractive impurity and pi for a repulsive one.
    pub real_part_consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PronyReport {
    pub r_table: Vec<RRow>,
    pub is_bethe: bool,
    /// `max |r0 + 1|` over used offsets.
    pub r0_deviation: f64,
    /// `max |r1 - r3|`.
    pub r13_deviation: f64,
    /// `max |r1 + E|`, absent without an energy.
    pub energy_deviation: Option<f64>,
    pub bethe_tol: f64,
    pub precision_digits: u32,
    pub mu: Option<[C64; 2]>,
    pub momenta: Option<[C64; 2]>,
    pub category: Category,
    pub classification: Option<MomentumClass>,
    pub overlap: Option<f64>,
    pub flags: Vec<String>,
}

/// Recurrence table and verdict for a sequence, without momentum classification.
pub fn sequence_report<F: Field>(seq: &PronySequence<F>, energy: Option<&F>) -> PronyReport {
    let digits = seq.precision_digits;
    let tol = bethe_tol(digits);
    let ratio_cap = 10f64.powf(digits as f64 / 2.0);
    let mut flags = Vec::new();
    let mut rows = Vec::new();
    let mut solves = Vec::new();
    let offsets = seq.values.len().saturating_sub(2 * ORDER - 1);
    for n in 0..offsets {
        match prony_coefficients(seq, n) {
            Ok(s) => {
                let used = s.pivot_ratio <= ratio_cap;
                let r = [
                    s.r[0].to_c64().re,
                    s.r[1].to_c64().re,
                    s.r[2].to_c64().re,
                    s.r[3].to_c64().re,
                ];
                rows.push(RRow {
                    offset: n,
                    r,
                    pivot_ratio: s.pivot_ratio,
                    used,
                });
                if used {
                    solves.push(s);
                }
            }
            Err(_) => rows.push(RRow {
                offset: n,
                r: [f64::NAN; 4],
                pivot_ratio: f64::INFINITY,
                used: false,
            }),
        }
    }
    let mut report = PronyReport {
        r_table: rows,
        is_bethe: false,
        r0_deviation: f64::INFINITY,
        r13_deviation: f64::INFINITY,
        energy_deviation: None,
        bethe_tol: tol,
        precision_digits: digits,
        mu: None,
        momenta: None,
        category: Category::NotBethe,
        classification: None,
        overlap: None,
        flags: Vec::new(),
    };
    if solves.is_empty() {
        flags.push("no well-conditioned Hankel offset".to_string());
        report.flags = flags;
        return report;
    }
    let one = seq.values[0].one_like();
    let mut r0_dev = 0.0f64;
    let mut r13_dev = 0.0f64;
    let mut e_dev = 0.0f64;
    for s in &solves {
        r0_dev = r0_dev.max(s.r[0].add(&one).mag());
        r13_dev = r13_dev.max(s.r[1].sub(&s.r[3]).mag());
        if let Some(e) = energy {
            e_dev = e_dev.max(s.r[1].add(e).mag());
        }
    }
    report.r0_deviation = r0_dev;
    report.r13_deviation = r13_dev;
    report.energy_deviation = energy.map(|_| e_dev);
    report.is_bethe = r0_dev < tol && r13_dev < tol && (energy.is_none() || e_dev < tol);
    let best = solves
        .iter()
        .min_by(|a, b| a.pivot_ratio.total_cmp(&b.pivot_ratio))
        .unwrap();
    if report.is_bethe {
        let mu = mu_from_r(best.r[1].to_c64(), best.r[2].to_c64());
        if (mu[0] - mu[1]).norm() < 1e-6 {
            report.is_bethe = false;
            flags.push("coinciding mu roots".into());
        } else {
            report.mu = Some(mu);
        }
    }
    report.flags = flags;
    report
}

/// Roots of `t^2 - r1 t - (r2 + 2)`, the two values `2 cos k`.
pub fn mu_from_r(r1: C64, r2: C64) -> [C64; 2] {
    let disc = (r1 * r1 + 4.0 * (r2 + 2.0)).sqrt();
    let a = if (r1 + disc).norm() >= (r1 - disc).norm() {
        (r1 + disc) / 2.0
    } else {
        (r1 - disc) / 2.0
    };
    let prod = -(r2 + 2.0);
    let b = if a.norm() > 0.0 {
        prod / a
    } else {
        (r1 - disc) / 2.0
    };
    [a, b]
}

const BOUNDARY_TOL: f64 = 1e-9;

/// Sorts a `mu` pair into a momentum category.
pub fn classify_momenta(mu: [C64; 2], spec: &LatticeSpec) -> MomentumClass {
    let real = mu[0].im.abs() < 1e-12 * (1.0 + mu[0].norm())
        && mu[1].im.abs() < 1e-12 * (1.0 + mu[1].norm());
    let boundary = mu.iter().any(|m| (m.norm() - 2.0).abs() < BOUNDARY_TOL);
    if !real {
        // complex-conjugate pair: k0 +- i nu
        let k = (mu[0] / 2.0).acos();
        let (k0, nu) = (k.re, k.im.abs());
        let reference = (spec.u.abs() / (4.0 * k0.cos().abs())).asinh();
        return MomentumClass {
            category: Category::III,
            mu,
            momenta: [C64::new(k0, nu), C64::new(k0, -nu)],
            boundary,
            nu_reference: Some(reference),
            nu_deviation: Some((nu - reference).abs()),
            real_part_consistent: None,
        };
    }
    let m = [mu[0].re, mu[1].re];
    let inside = |x: f64| x.abs() <= 2.0;
    let to_k = |x: f64| -> C64 {
        if inside(x) {
            C64::new((x / 2.0).acos(), 0.0)
        } else if x > 0.0 {
            C64::new(0.0, (x / 2.0).acosh())
        } else {
            C64::new(std::f64::consts::PI, (-x / 2.0).acosh())
        }
    };
    let (a, b) = (to_k(m[0]), to_k(m[1]));
    match (inside(m[0]), inside(m[1])) {
        (true, true) => {
            let (k1, k2) = if a.re >= b.re { (a, b) } else { (b, a) };
            MomentumClass {
                category: Category::I,
                mu,
                momenta: [k1, k2],
                boundary,
                nu_reference: None,
                nu_deviation: None,
                real_part_consistent: None,
            }
        }
        (false, false) => MomentumClass {
            category: Category::IV,
            mu,
            momenta: [a, b],
            boundary,
            nu_reference: None,
            nu_deviation: None,
            real_part_consistent: None,
        },
        (in0, _) => {
            let (bound, free, mb) = if in0 { (b, a, m[1]) } else { (a, b, m[0]) };
            let reference = (spec.v.abs() / 2.0).asinh();
            MomentumClass {
                category: Category::II,
                mu,
                momenta: [bound, free],
                boundary,
                nu_reference: Some(reference),
                nu_deviation: Some((bound.im - reference).abs()),
                real_part_consistent: Some((mb > 0.0) == (spec.v < 0.0)),
            }
        }
    }
}

/// Full test of a precise eigenstate: recurrence verdict, momenta, category and overlap
/// with the fitted Bethe wavefunction.
#[cfg(feature = "mp")]
pub fn bethe_form_report(psi: &crate::lattice::PreciseWaveFunction) -> PronyReport {
    let seq = extract_line(psi);
    let mut rep = sequence_report(&seq, Some(&psi.energy));
    if let Some(mu) = rep.mu {
        let class = classify_momenta(mu, &psi.spec);
        if class.boundary {
            rep.flags.push("|mu| on the band edge".into());
        }
        rep.category = class.category;
        rep.momenta = Some(class.momenta);
        rep.classification = Some(class);
        match reconstruct_bethe_state(class.momenta[0], class.momenta[1], &psi.to_double()) {
            Ok(rec) => {
                if rec.regions.iter().any(|r| r.rank_deficient) {
                    rep.flags.push("rank-deficient plane-wave basis".into());
                }
                rep.overlap = Some(rec.overlap_with_input);
            }
            Err(e) => rep.flags.push(format!("reconstruction failed: {e}")),
        }
    }
    rep
}

/// Exponents recovered from order-4 recurrence coefficients by two independent routes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRecovery<F> {
    /// Through `mu` and `z^2 - mu z + 1 = 0`; valid when the exponents come in `z, 1/z` pairs.
    pub paired: Vec<F>,
    /// Eigenvalues of the 4x4 transfer matrix, polished in the working field.
    pub transfer: Vec<F>,
    /// Largest distance between matched roots of the two routes.
    pub disagreement: f64,
}

pub fn momenta_from_r<F: ComplexField>(r: &[F]) -> Result<ExponentRecovery<F>> {
    if r.len() != ORDER {
        return Err(Error::InvalidInput(
            "four recurrence coefficients expected".into(),
        ));
    }
    let one = r[0].one_like();
    let two = one.lift(2.0);
    let four = one.lift(4.0);
    // mu^2 - r1 mu - (r2 + 2) = 0
    let r2p = r[2].add(&two);
    let disc = r[1].mul(&r[1]).add(&four.mul(&r2p)).csqrt();
    let mus = [r[1].add(&disc).div(&two), r[1].sub(&disc).div(&two)];
    let mut paired = Vec::with_capacity(4);
    for mu in &mus {
        let d = mu.mul(mu).sub(&four).csqrt();
        paired.push(mu.add(&d).div(&two));
        paired.push(mu.sub(&d).div(&two));
    }
    let coeffs: Vec<F> = r.iter().map(|x| x.neg()).collect();
    let transfer = companion_roots_polished(&coeffs)?;
    let mut disagreement = 0.0f64;
    for z in &paired {
        let d = transfer
            .iter()
            .map(|t| t.sub(z).mag())
            .fold(f64::INFINITY, f64::min);
        disagreement = disagreement.max(d);
    }
    Ok(ExponentRecovery {
        paired,
        transfer,
        disagreement,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionFit {
    /// Octant number, counterclockwise from the positive `x1` axis.
    pub region: usize,
    pub points: usize,
    /// Coefficients of `exp(i(s1 k1 x1 + s2 k2 x2))` then `exp(i(s1 k2 x1 + s2 k1 x2))`,
    /// signs in the order `++, +-, -+, --`.
    pub coefficients: Vec<C64>,
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheReconstruction {
    pub regions: Vec<RegionFit>,
    pub overlap_with_input: f64,
}

/// Octants bounded by `x1 = 0`, `x2 = 0`, `x1 = x2` and `x1 = -x2`; boundary points belong to every
/// adjacent octant.
pub fn octants_of(x1: i32, x2: i32) -> Vec<usize> {
    let (a1, a2) = (x1 as f64, x2 as f64);
    let theta = a2.atan2(a1).rem_euclid(2.0 * std::f64::consts::PI);
    let step = std::f64::consts::FRAC_PI_4;
    if x1 == 0 && x2 == 0 {
        return (1..=8).collect();
    }
    let s = theta / step;
    let f = s.round();
    if (s - f).abs() < 1e-12 {
        let k = f as usize % 8;
        // on a ray between octant k and k+1
        vec![if k == 0 { 8 } else { k }, k + 1]
    } else {
        vec![s.floor() as usize + 1]
    }
}

fn plane_waves(k1: C64, k2: C64, x1: i32, x2: i32) -> [C64; 8] {
    let i = C64::new(0.0, 1.0);
    let (a, b) = (x1 as f64, x2 as f64);
    let mut out = [C64::new(0.0, 0.0); 8];
    let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    for (j, (s1, s2)) in signs.iter().enumerate() {
        out[j] = (i * (s1 * k1 * a + s2 * k2 * b)).exp();
        out[4 + j] = (i * (s1 * k2 * a + s2 * k1 * b)).exp();
    }
    out
}

/// Least-squares fit of eight plane waves per octant and the overlap of the fit with `psi`.
pub fn reconstruct_bethe_state(
    k1: C64,
    k2: C64,
    psi: &WaveFunction,
) -> Result<BetheReconstruction> {
    let h = psi.spec.half();
    let mut members: Vec<Vec<(i32, i32)>> = vec![Vec::new(); 9];
    for x1 in -h..=h {
        for x2 in -h..=h {
            for o in octants_of(x1, x2) {
                members[o].push((x1, x2));
            }
        }
    }
    let mut regions = Vec::with_capacity(8);
    let mut fitted: std::collections::HashMap<(i32, i32), (C64, usize)> = Default::default();
    for (o, pts) in members.iter().enumerate().skip(1) {
        let rows = pts.len();
        let design: Vec<[C64; 8]> = pts
            .iter()
            .map(|&(a, b)| plane_waves(k1, k2, a, b))
            .collect();
        // column scaling keeps growing and decaying exponentials comparable
        let mut scale = [0.0f64; 8];
        for row in &design {
            for j in 0..8 {
                scale[j] = scale[j].max(row[j].norm());
            }
        }
        let a = Mat::<C64>::from_fn(rows, 8, |i, j| design[i][j] / scale[j]);
        let rhs = Mat::<C64>::from_fn(rows, 1, |i, _| C64::new(psi.psi(pts[i].0, pts[i].1), 0.0));
        let sv = a
            .singular_values()
            .map_err(|e| Error::NoConvergence(format!("{e:?}")))?;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let rank_deficient = !(smin > 1e-10 * smax);
        let sol = a.col_piv_qr().solve_lstsq(&rhs);
        let coefficients: Vec<C64> = (0..8).map(|j| sol[(j, 0)] / scale[j]).collect();
        for (i, &p) in pts.iter().enumerate() {
            let v: C64 = (0..8).map(|j| design[i][j] * coefficients[j]).sum();
            let e = fitted.entry(p).or_insert((C64::new(0.0, 0.0), 0));
            e.0 += v;
            e.1 += 1;
        }
        regions.push(RegionFit {
            region: o,
            points: rows,
            coefficients,
            rank_deficient,
        });
    }
    let (mut dot, mut nf, mut np) = (C64::new(0.0, 0.0), 0.0, 0.0);
    for x1 in -h..=h {
        for x2 in -h..=h {
            let (sum, count) = fitted[&(x1, x2)];
            let f = sum / count as f64;
            let p = psi.psi(x1, x2);
            dot += f.conj() * p;
            nf += f.norm_sqr();
            np += p * p;
        }
    }
    let overlap = if nf > 0.0 && np > 0.0 {
        (dot.norm() / (nf * np).sqrt()).min(1.0)
    } else {
        0.0
    };
    Ok(BetheReconstruction {
        regions,
        overlap_with_input: overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_sequence(zs: &[C64], ws: &[C64], len: usize) -> Vec<C64> {
        (0..len)
            .map(|n| zs.iter().zip(ws).map(|(z, w)| w * z.powu(n as u32)).sum())
            .collect()
    }

    #[test]
    fn unit_exponentials_give_closed_form_r() {
        let i = C64::new(0.0, 1.0);
        let zs = [
            (0.3 * i).exp(),
            (-0.3 * i).exp(),
            (0.7 * i).exp(),
            (-0.7 * i).exp(),
        ];
        let g = exp_sequence(&zs, &[C64::new(1.0, 0.0); 4], 10);
        let s = solve_recurrence(&g, 0, 4).unwrap();
        let (c3, c7) = (2.0 * 0.3f64.cos(), 2.0 * 0.7f64.cos());
        assert!((s.r[0] + 1.0).norm() < 1e-10);
        assert!((s.r[1] - (c3 + c7)).norm() < 1e-10);
        assert!((s.r[3] - (c3 + c7)).norm() < 1e-10);
        assert!((s.r[2] + (c3 * c7 + 2.0)).norm() < 1e-10);
    }

    #[test]
    fn integer_bases() {
        let g: Vec<f64> = (0..8)
            .map(|n| [2f64, 3.0, 5.0, 7.0].iter().map(|b| b.powi(n)).sum())
            .collect();
        let s = solve_recurrence(&g, 0, 4).unwrap();
        for (got, want) in s.r.iter().zip([-210.0, 247.0, -101.0, 17.0]) {
            assert!((got - want).abs() < 1e-8, "{:?}", s.r);
        }
        assert!(recurrence_residual(&g, &s.r) < 1e-14);
    }

    #[test]
    fn constant_sequence_is_singular() {
        let g = vec![1.0f64; 8];
        assert!(matches!(
            solve_recurrence(&g, 0, 4),
            Err(Error::Singular(_))
        ));
        assert!(solve_recurrence(&g, 1, 4).is_err());
    }

    #[test]
    fn mu_roots() {
        let mu = mu_from_r(C64::new(1.6, 0.0), C64::new(-2.48, 0.0));
        let mut m = [mu[0].re, mu[1].re];
        m.sort_by(f64::total_cmp);
        assert!((m[0] - 0.4).abs() < 1e-14 && (m[1] - 1.2).abs() < 1e-14);
    }

    #[test]
    fn categories() {
        let spec = LatticeSpec::new(31, -1.0, -2.0, Bc::Open).unwrap();
        let c =
            |a: f64, b: f64| classify_momenta([C64::new(a, 0.0), C64::new(b, 0.0)], &spec).category;
        assert_eq!(c(1.2, 0.4), Category::I);
        assert_eq!(c(2.9, 0.4), Category::II);
        assert_eq!(c(2.9, -2.5), Category::IV);
        let z = C64::new(1.0, 0.8);
        let cl = classify_momenta([z, z.conj()], &spec);
        assert_eq!(cl.category, Category::III);
        assert!(cl.momenta[0].im > 0.0 && cl.momenta[1] == cl.momenta[0].conj());
        let two = classify_momenta(
            [C64::new(2.0 * 1f64.cosh(), 0.0), C64::new(0.3, 0.0)],
            &spec,
        );
        assert_eq!(two.real_part_consistent, Some(true));
        assert!((two.momenta[0] - C64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn octant_membership() {
        assert_eq!(octants_of(3, 1), vec![1]);
        assert_eq!(octants_of(1, 3), vec![2]);
        assert_eq!(octants_of(-1, 3), vec![3]);
        assert_eq!(octants_of(2, 2), vec![1, 2]);
        assert_eq!(octants_of(2, 0), vec![8, 1]);
        assert_eq!(octants_of(2, -2), vec![7, 8]);
    }

    #[test]
    fn paired_and_transfer_routes_agree() {
        let i = C64::new(0.0, 1.0);
        let zs = [
            (1.1 * i).exp(),
            (-1.1 * i).exp(),
            (0.4 * i).exp(),
            (-0.4 * i).exp(),
        ];
        let ws = [
            C64::new(0.3, 0.1),
            C64::new(-1.0, 0.5),
            C64::new(0.7, 0.0),
            C64::new(0.2, -0.9),
        ];
        let g = exp_sequence(&zs, &ws, 8);
        let s = solve_recurrence(&g, 0, 4).unwrap();
        let rec = momenta_from_r(&s.r).unwrap();
        assert!(rec.disagreement < 1e-10);
        for z in zs {
            assert!(rec.paired.iter().any(|p| (p - z).norm() < 1e-10));
        }
    }
}
