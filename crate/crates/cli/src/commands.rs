use std::collections::BTreeMap;
use std::f64::consts::PI;

use bhlab_core::bethe::{
    completeness_report, find_bound_state, mat2_max_abs, mat2_sub, solve_band1, ybe_closed_form,
    ybe_residual, BetheRoot, Branch, CompletenessReport,
};
use bhlab_core::diag::{
    eigenvalues_f64, precise_sector_states, refine_state, sector_states, sweep_spectrum, GapKind,
    SweepConfig, SweepParam,
};
use bhlab_core::lattice::{sector_hamiltonian, PreciseWaveFunction};
use bhlab_core::momentum::{classify_diffraction, dft_region102, grid_momentum, peak_report};
use bhlab_core::prony::{bethe_form_report, PronyReport};
use bhlab_core::{Error, LatticeSpec, Parity, WaveFunction, C64};
use serde::Serialize;

use crate::config::{Grid, ParamArg, RunConfig};
use crate::output::{num, Output, Table};

pub enum Failure {
    Validation(String),
    Numerical(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLattice(_) | Error::InvalidInput(_) | Error::Unsupported(_) => {
                Failure::Validation(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Internal(e)
    }
}

/// `Some(reason)` when the run finished but a numerical acceptance check failed.
pub type Verdict = Option<String>;

fn label(p: Parity) -> &'static str {
    match p {
        Parity::Odd => "odd",
        Parity::Even => "even",
    }
}

fn nearest(levels: &[f64], e: f64) -> usize {
    (0..levels.len())
        .min_by(|&a, &b| (levels[a] - e).abs().total_cmp(&(levels[b] - e).abs()))
        .unwrap_or(0)
}

pub fn spectrum(cfg: &RunConfig, out: &mut Output) -> Result<Verdict, Failure> {
    let spec = cfg.spec();
    let grid = cfg.grid.filter(|g| g.points > 1);
    let mut summary = BTreeMap::new();
    for p in cfg.sector.parities() {
        let name = label(p);
        let Some(g) = grid else {
            let (_, h, _) = sector_hamiltonian(&spec, p)?;
            let mut t = Table::new(&["index", "energy"]);
            for (i, e) in eigenvalues_f64(&h)?.iter().enumerate() {
                t.row(&[i.to_string(), num(*e)]);
            }
            out.write(&format!("spectrum_{name}.csv"), &t.into_string())?;
            continue;
        };
        let param = match cfg.param {
            ParamArg::V => SweepParam::V,
            ParamArg::U => SweepParam::U,
        };
        let sc = SweepConfig::linspace(param, g.from, g.to, g.points);
        let sw = sweep_spectrum(&spec, &sc, p)?;
        let n = sw.levels.first().map_or(0, Vec::len);
        let mut header = vec!["param".to_string()];
        header.extend((0..n).map(|i| format!("e{i}")));
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut t = Table::new(&refs);
        for (x, lv) in sw.grid.iter().zip(&sw.levels) {
            let mut row = vec![num(*x)];
            row.extend(lv.iter().map(|e| num(*e)));
            t.row(&row);
        }
        out.write(&format!("levels_{name}.csv"), &t.into_string())?;
        let mut gaps = Table::new(&["lower_level", "location", "gap", "refined", "kind"]);
        for gm in &sw.min_gaps {
            gaps.row(&[
                gm.lower_level.to_string(),
                num(gm.location),
                num(gm.gap),
                gm.refined.to_string(),
                format!("{:?}", gm.kind).to_lowercase(),
            ]);
        }
        out.write(&format!("gaps_{name}.csv"), &gaps.into_string())?;
        summary.insert(
            name,
            serde_json::json!({
                "crossings": sw.count(GapKind::Crossing),
                "anticrossings": sw.count(GapKind::AntiCrossing),
                "narrow": sw.count(GapKind::Narrow),
                "smallest_refined_gap": sw.smallest_refined_gap(),
                "crossing_tol": sc.crossing_tol,
                "anticrossing_floor": sc.anticrossing_floor,
            }),
        );
    }
    if !summary.is_empty() {
        out.write_json("summary.json", &summary)?;
    }
    Ok(None)
}

fn select_precise(
    cfg: &RunConfig,
    spec: &LatticeSpec,
    p: Parity,
) -> Result<Vec<(usize, PreciseWaveFunction)>, Failure> {
    if !cfg.select_energy.is_empty() {
        let (_, h, _) = sector_hamiltonian(spec, p)?;
        let levels = eigenvalues_f64(&h)?;
        return cfg
            .select_energy
            .iter()
            .map(|&e| Ok((nearest(&levels, e), refine_state(spec, p, e, cfg.digits)?)))
            .collect();
    }
    let all = precise_sector_states(spec, p, cfg.digits)?;
    if cfg.state.is_empty() {
        return Ok(all.into_iter().enumerate().collect());
    }
    let dim = all.len();
    cfg.state
        .iter()
        .map(|&i| {
            all.get(i).cloned().map(|s| (i, s)).ok_or_else(|| {
                Failure::Validation(format!("state {i} outside sector of dimension {dim}"))
            })
        })
        .collect()
}

#[derive(Serialize)]
struct PreciseValue {
    value: String,
    digits: u32,
}

#[derive(Serialize)]
struct PronyEntry {
    index: usize,
    energy: PreciseValue,
    report: PronyReport,
}

pub fn prony(cfg: &RunConfig, out: &mut Output) -> Result<Verdict, Failure> {
    let spec = cfg.spec();
    for p in cfg.sector.parities() {
        let states = select_precise(cfg, &spec, p)?;
        let mut t = Table::new(&[
            "index",
            "energy",
            "is_bethe",
            "r0_deviation",
            "r13_deviation",
            "energy_deviation",
            "category",
            "k1_re",
            "k1_im",
            "k2_re",
            "k2_im",
            "overlap",
            "flags",
        ]);
        let mut entries = Vec::new();
        for (i, st) in states {
            let r = bethe_form_report(&st);
            let k = r.momenta.unwrap_or([C64::new(f64::NAN, f64::NAN); 2]);
            t.row(&[
                i.to_string(),
                num(st.energy.to_f64()),
                r.is_bethe.to_string(),
                num(r.r0_deviation),
                num(r.r13_deviation),
                r.energy_deviation.map_or(String::new(), num),
                format!("{:?}", r.category),
                num(k[0].re),
                num(k[0].im),
                num(k[1].re),
                num(k[1].im),
                r.overlap.map_or(String::new(), num),
                r.flags.join(";").replace(',', " "),
            ]);
            entries.push(PronyEntry {
                index: i,
                energy: PreciseValue {
                    value: st.energy.to_string_radix(10, Some(cfg.digits as usize)),
                    digits: cfg.digits,
                },
                report: r,
            });
        }
        out.write(&format!("prony_{}.csv", label(p)), &t.into_string())?;
        out.write_json(&format!("prony_{}.json", label(p)), &entries)?;
    }
    Ok(None)
}

fn roots_table(roots: &[(BetheRoot, Option<usize>, Option<f64>, f64)]) -> String {
    let mut t = Table::new(&[
        "band",
        "branch",
        "m1",
        "m2",
        "k1_re",
        "k1_im",
        "k2_re",
        "k2_im",
        "energy",
        "residual",
        "level",
        "level_energy",
        "difference",
    ]);
    for (r, level, le, diff) in roots {
        t.row(&[
            format!("{:?}", r.band).to_lowercase(),
            format!("{:?}", r.branch).to_lowercase(),
            r.quantum_numbers.0.to_string(),
            r.quantum_numbers.1.map_or(String::new(), |m| m.to_string()),
            num(r.k1.re),
            num(r.k1.im),
            num(r.k2.re),
            num(r.k2.im),
            num(r.energy),
            num(r.residual),
            level.map_or(String::new(), |l| l.to_string()),
            le.map_or(String::new(), num),
            num(*diff),
        ]);
    }
    t.into_string()
}

/// Band-1 roots of the compensating branch sit on `2 pi m / M` when `U = -V`.
fn free_quantization(spec: &LatticeSpec) -> Result<Option<bool>, Failure> {
    if spec.u != -spec.v {
        return Ok(None);
    }
    let step = 2.0 * PI / spec.m as f64;
    let sol = solve_band1(spec)?;
    Ok(Some(
        sol.roots
            .iter()
            .filter(|r| r.branch == Branch::Plus)
            .all(|r| {
                [r.k1, r.k2].iter().all(|k| {
                    (k.re - (k.re / step).round() * step).abs() < 1e-10 && k.im.abs() < 1e-10
                })
            }),
    ))
}

#[derive(Serialize)]
struct CompletenessDoc<'a> {
    passed: bool,
    total: usize,
    expected: usize,
    max_difference: f64,
    free_quantization: Option<bool>,
    report: &'a CompletenessReport,
}

fn completeness_doc(
    cfg: &RunConfig,
    out: &mut Output,
    with_roots: bool,
) -> Result<Verdict, Failure> {
    let spec = cfg.spec();
    let rep = completeness_report(&spec, cfg.tol.unwrap_or(1e-8))?;
    if with_roots {
        let rows: Vec<_> = rep
            .matches
            .iter()
            .map(|m| (m.root.clone(), m.level, m.level_energy, m.difference))
            .collect();
        out.write("roots.csv", &roots_table(&rows))?;
    }
    let mut counts = Table::new(&[
        "band1",
        "band2",
        "band3",
        "bound",
        "total",
        "expected",
        "unmatched",
        "unclaimed",
    ]);
    counts.row(&[
        rep.band1.to_string(),
        rep.band2.to_string(),
        rep.band3.to_string(),
        rep.bound.to_string(),
        rep.total().to_string(),
        rep.expected.to_string(),
        rep.unmatched().count().to_string(),
        rep.unclaimed_levels.len().to_string(),
    ]);
    out.write("counts.csv", &counts.into_string())?;
    let doc = CompletenessDoc {
        passed: rep.passed(),
        total: rep.total(),
        expected: rep.expected,
        max_difference: rep.max_difference(),
        free_quantization: free_quantization(&spec)?,
        report: &rep,
    };
    out.write_json("completeness.json", &doc)?;
    Ok((!rep.passed()).then(|| {
        format!(
            "{} roots for {} odd levels, {} unmatched, {} levels unclaimed",
            rep.total(),
            rep.expected,
            rep.unmatched().count(),
            rep.unclaimed_levels.len()
        )
    }))
}

fn bound_scan(cfg: &RunConfig, out: &mut Output, vgrid: Grid) -> Result<Verdict, Failure> {
    let us = cfg.grid2.map_or(vec![cfg.u], |g| g.values());
    let mut t = Table::new(&[
        "U", "V", "present", "energy", "k1_re", "k1_im", "k2_re", "k2_im", "residual",
    ]);
    for &u in &us {
        for v in vgrid.values() {
            let spec = LatticeSpec::new(cfg.m, u, v, cfg.spec().bc)?;
            let found = match find_bound_state(&spec) {
                Ok(f) => f,
                Err(Error::Pole(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let mut row = vec![num(u), num(v), found.is_some().to_string()];
            match found {
                Some(r) => {
                    row.extend([r.energy, r.k1.re, r.k1.im, r.k2.re, r.k2.im, r.residual].map(num))
                }
                None => row.extend(std::iter::repeat(String::new()).take(6)),
            }
            t.row(&row);
        }
    }
    out.write("bound_scan.csv", &t.into_string())?;
    Ok(None)
}

pub fn bands(cfg: &RunConfig, out: &mut Output) -> Result<Verdict, Failure> {
    match cfg.grid {
        Some(g) => bound_scan(cfg, out, g),
        None => completeness_doc(cfg, out, true),
    }
}

pub fn completeness(cfg: &RunConfig, out: &mut Output) -> Result<Verdict, Failure> {
    completeness_doc(cfg, out, false)
}

fn select_double(cfg: &RunConfig, states: &[WaveFunction]) -> Result<Vec<usize>, Failure> {
    let levels: Vec<f64> = states.iter().map(|s| s.energy).collect();
    if !cfg.select_energy.is_empty() {
        return Ok(cfg
            .select_energy
            .iter()
            .map(|&e| nearest(&levels, e))
            .collect());
    }
    if let Some(&bad) = cfg.state.iter().find(|&&i| i >= states.len()) {
        return Err(Failure::Validation(format!(
            "state {bad} outside sector of dimension {}",
            states.len()
        )));
    }
    Ok(cfg.state.clone())
}

pub fn momentum(cfg: &RunConfig, out: &mut Output) -> Result<Verdict, Failure> {
    let spec = cfg.spec();
    for p in cfg.sector.parities() {
        let states = sector_states(&spec, p)?;
        let chosen = select_double(cfg, &states)?;
        let dump_maps = !chosen.is_empty();
        let indices = if dump_maps {
            chosen
        } else {
            (0..states.len()).collect()
        };
        let mut t = Table::new(&[
            "index",
            "energy",
            "top8_weight",
            "top4_weight",
            "symmetry_score",
            "four_fold",
            "equal_momenta",
            "diagonal_spread",
            "class",
        ]);
        for i in indices {
            let map = dft_region102(&states[i]);
            let rep = peak_report(&map);
            t.row(&[
                i.to_string(),
                num(states[i].energy),
                num(rep.top8_weight),
                num(rep.top4_weight),
                num(rep.symmetry_score),
                rep.four_fold.to_string(),
                rep.equal_momenta.to_string(),
                num(rep.diagonal_spread),
                format!("{:?}", classify_diffraction(&rep)),
            ]);
            if dump_maps {
                let mut m = Table::new(&["n1", "n2", "q1", "q2", "re", "im", "weight"]);
                for n1 in 0..map.n {
                    for n2 in 0..map.n {
                        let z = map.at(n1, n2);
                        m.row(&[
                            n1.to_string(),
                            n2.to_string(),
                            num(grid_momentum(n1, map.n)),
                            num(grid_momentum(n2, map.n)),
                            num(z.re),
                            num(z.im),
                            num(map.weight[n1 * map.n + n2]),
                        ]);
                    }
                }
                let mut rep = rep;
                rep.peaks.truncate(16);
                out.write(&format!("map_{}_{i}.csv", label(p)), &m.into_string())?;
                out.write_json(&format!("peaks_{}_{i}.json", label(p)), &rep)?;
            }
        }
        out.write(&format!("momentum_{}.csv", label(p)), &t.into_string())?;
    }
    Ok(None)
}

pub fn ybe(cfg: &RunConfig, out: &mut Output) -> Result<Verdict, Failure> {
    let g1 = cfg.grid.unwrap_or(Grid {
        from: 0.0,
        to: PI,
        points: 33,
    });
    let g2 = cfg.grid2.unwrap_or(g1);
    let (u, v) = (cfg.u, cfg.v);
    let mut t = Table::new(&["k1", "k2", "odd", "even", "closed_form"]);
    let (mut odd_max, mut even_max, mut poles) = (0.0f64, 0.0f64, 0usize);
    for k1 in g1.values() {
        for k2 in g2.values() {
            let (a, b) = (C64::new(k1, 0.0), C64::new(k2, 0.0));
            let res = ybe_residual(a, b, u, v, Parity::Odd).and_then(|odd| {
                let even = ybe_residual(a, b, u, v, Parity::Even)?;
                let cf = ybe_closed_form(a, b, u, v)?;
                Ok((
                    mat2_max_abs(&odd),
                    mat2_max_abs(&even),
                    mat2_max_abs(&cf),
                    mat2_max_abs(&mat2_sub(&even, &cf)),
                ))
            });
            match res {
                Ok((o, e, c, _)) => {
                    odd_max = odd_max.max(o);
                    even_max = even_max.max(e);
                    t.row(&[num(k1), num(k2), num(o), num(e), num(c)]);
                }
                Err(Error::Pole(_)) => {
                    poles += 1;
                    t.row(&[
                        num(k1),
                        num(k2),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]);
                }
                Err(e) => return Err(Failure::Numerical(e.to_string())),
            }
        }
    }
    out.write("ybe.csv", &t.into_string())?;
    out.write_json(
        "summary.json",
        &serde_json::json!({ "odd_max": odd_max, "even_max": even_max, "poles": poles }),
    )?;
    Ok((odd_max > 1e-13).then(|| format!("odd-sector residual {odd_max:e} exceeds 1e-13")))
}
