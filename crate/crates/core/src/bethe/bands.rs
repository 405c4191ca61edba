//! Root finding for the four solution families of the periodic odd sector.

use std::f64::consts::PI;

use roots::{find_root_brent, SimpleConvergency};
use serde::{Deserialize, Serialize};

use super::{
    energy_of, lambda_parts, paired_lambda2, particle1_residual, particle2_residual, Band,
    BetheRoot, Branch, I,
};
use crate::lattice::{Bc, LatticeSpec};
use crate::{Error, Result, C64};

/// Roots of one family plus cells that did not produce one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BandSolution {
    pub roots: Vec<BetheRoot>,
    pub holes: Vec<Hole>,
    pub notice: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub branch: Branch,
    pub quantum_numbers: (i64, Option<i64>),
    pub reason: String,
    pub last_k: (f64, f64),
}

fn require_periodic(spec: &LatticeSpec) -> Result<()> {
    spec.validate()?;
    if spec.bc != Bc::Periodic {
        return Err(Error::Unsupported(
            "Bethe equations are only available for periodic boundaries".into(),
        ));
    }
    Ok(())
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Continuous argument of `f(t)` for `t` in `[0, k]`, starting from `arg f(0)` in `[0, 2 pi)`.
pub(crate) fn lift(f: impl Fn(f64) -> C64, k: f64, m: usize) -> f64 {
    let n = ((64.0 * m as f64 * k.abs() / PI) as usize + 8).max(8);
    let mut start = f(0.0);
    if !(start.re.is_finite() && start.im.is_finite()) || start.norm() == 0.0 {
        // removable singularity at the origin
        start = f(1e-12 * k.signum());
    }
    let mut prev = start.arg();
    let mut ph0 = prev.rem_euclid(2.0 * PI);
    if (ph0 - 2.0 * PI).abs() < 1e-9 {
        ph0 = 0.0;
    }
    let mut total = 0.0;
    for i in 1..=n {
        let z = f(k * i as f64 / n as f64);
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
            continue;
        }
        let a = z.arg();
        total += wrap_pi(a - prev);
        prev = a;
    }
    ph0 + total
}

fn lam1_real(k1: f64, k2: f64, u: f64, v: f64, sign: f64) -> C64 {
    lambda_parts(C64::new(k1.sin(), 0.0), C64::new(k2.sin(), 0.0), u, v).lambda(sign)
}

/// Counting functions `(M k_j + arg lambda_j) / 2 pi` of the real-momentum band.
fn counting(k1: f64, k2: f64, m: usize, u: f64, v: f64, sign: f64) -> [f64; 2] {
    let mf = m as f64;
    let z1 = mf * k1 + lift(|t| lam1_real(t, k2, u, v, sign), k1, m);
    let z2 = mf * k2 + lift(|t| lam1_real(t, k1, u, v, sign), k2, m);
    [z1 / (2.0 * PI), z2 / (2.0 * PI)]
}

const K_FLOOR: f64 = 1e-9;

fn clamp_k(k: f64) -> f64 {
    k.clamp(K_FLOOR, PI - K_FLOOR)
}

/// Damped fixed point, then Newton with a finite-difference Jacobian if that stalls.
fn solve_cell(
    m: usize,
    u: f64,
    v: f64,
    sign: f64,
    q: [f64; 2],
) -> std::result::Result<([f64; 2], f64), (String, [f64; 2])> {
    let mf = m as f64;
    let mut k = [
        (2.0 * PI * q[0] / mf).min(PI - 1e-3),
        (2.0 * PI * q[1] / mf).max(1e-3),
    ];
    let mut converged = false;
    for _ in 0..200 {
        let z = counting(k[0], k[1], m, u, v, sign);
        let n = [
            clamp_k(k[0] + 0.8 * 2.0 * PI * (q[0] - z[0]) / mf),
            clamp_k(k[1] + 0.8 * 2.0 * PI * (q[1] - z[1]) / mf),
        ];
        let step = (n[0] - k[0]).abs() + (n[1] - k[1]).abs();
        k = n;
        if step < 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        for _ in 0..50 {
            let z = counting(k[0], k[1], m, u, v, sign);
            let f = [z[0] - q[0], z[1] - q[1]];
            if f[0].abs() + f[1].abs() < 1e-13 {
                converged = true;
                break;
            }
            let h = 1e-7;
            let mut jac = [[0.0; 2]; 2];
            for j in 0..2 {
                let mut kp = k;
                kp[j] += h;
                let zp = counting(kp[0], kp[1], m, u, v, sign);
                jac[0][j] = (zp[0] - z[0]) / h;
                jac[1][j] = (zp[1] - z[1]) / h;
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det.abs() < 1e-14 {
                break;
            }
            let d0 = (jac[1][1] * f[0] - jac[0][1] * f[1]) / det;
            let d1 = (jac[0][0] * f[1] - jac[1][0] * f[0]) / det;
            k = [clamp_k(k[0] - d0), clamp_k(k[1] - d1)];
        }
    }
    let z = counting(k[0], k[1], m, u, v, sign);
    let miss = (z[0] - q[0]).abs() + (z[1] - q[1]).abs();
    if !converged || miss > 1e-9 {
        return Err((format!("no convergence, counting mismatch {miss:.3e}"), k));
    }
    Ok((k, miss))
}

fn root_residual(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> f64 {
    particle1_residual(k1, k2, m, u, v).max(super::particle2_cleared_residual(k1, k2, m, u, v))
}

/// Both momenta real, `0 < k2 < k1 < pi`, quantum numbers `1 <= m2 < m1 <= M'` on each branch.
pub fn solve_band1(spec: &LatticeSpec) -> Result<BandSolution> {
    require_periodic(spec)?;
    let (m, u, v) = (spec.m, spec.u, spec.v);
    let half = spec.half() as i64;
    let mut out = BandSolution::default();
    for branch in [Branch::Plus, Branch::Minus] {
        let sign = branch.sign();
        for m1 in 1..=half {
            for m2 in 1..m1 {
                match solve_cell(m, u, v, sign, [m1 as f64, m2 as f64]) {
                    Ok(([k1, k2], _)) => {
                        if (k1 - k2).abs() < 1e-8 {
                            out.holes.push(Hole {
                                branch,
                                quantum_numbers: (m1, Some(m2)),
                                reason: "coinciding momenta".into(),
                                last_k: (k1, k2),
                            });
                            continue;
                        }
                        let (c1, c2) = (C64::new(k1, 0.0), C64::new(k2, 0.0));
                        let l1 = lam1_real(k1, k2, u, v, sign) * (I * k1 * m as f64).exp();
                        let l2 = lam1_real(k2, k1, u, v, sign) * (I * k2 * m as f64).exp();
                        let branch_res = (l1 - 1.0).norm().max((l2 - 1.0).norm());
                        out.roots.push(BetheRoot {
                            band: Band::One,
                            branch,
                            quantum_numbers: (m1, Some(m2)),
                            k1: c1,
                            k2: c2,
                            nu: None,
                            k0: None,
                            energy: energy_of(c1, c2).re,
                            residual: branch_res.max(root_residual(c1, c2, m, u, v)),
                        });
                    }
                    Err((reason, k)) => out.holes.push(Hole {
                        branch,
                        quantum_numbers: (m1, Some(m2)),
                        reason,
                        last_k: (k[0], k[1]),
                    }),
                }
            }
        }
    }
    dedup_band1(&mut out);
    Ok(out)
}

/// Two cells landing on the same root leave a hole behind.
fn dedup_band1(sol: &mut BandSolution) {
    let mut kept: Vec<BetheRoot> = Vec::new();
    for r in sol.roots.drain(..) {
        let dup = kept
            .iter()
            .any(|o| o.branch == r.branch && (o.k1 - r.k1).norm() + (o.k2 - r.k2).norm() < 1e-9);
        if dup {
            sol.holes.push(Hole {
                branch: r.branch,
                quantum_numbers: r.quantum_numbers,
                reason: "converged onto a root of another cell".into(),
                last_k: (r.k1.re, r.k2.re),
            });
        } else {
            kept.push(r);
        }
    }
    sol.roots = kept;
}

/// Particle-1 right side divided by `A+ B+`; equals `s1 + iV/2` at a root.
fn e1_rhs(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> C64 {
    let (s1, s2) = (k1.sin(), k2.sin());
    let (hu, hv) = (I * (u / 2.0), I * (v / 2.0));
    let (ap, am, bp, bm) = (s1 - s2 + hu, s1 - s2 - hu, s1 + s2 + hu, s1 + s2 - hu);
    let q = (I * k1 * m as f64).exp();
    (s1 * (ap * bm + bp * am) * q - (s1 - hv) * am * bm * q * q) / (ap * bp)
}

/// Particle 1 localized at the impurity: `k1 = i nu` (V < 0) or `pi + i nu` (V > 0), `k2` real.
pub fn solve_band2(spec: &LatticeSpec) -> Result<BandSolution> {
    require_periodic(spec)?;
    let (m, u, v) = (spec.m, spec.u, spec.v);
    let mut out = BandSolution::default();
    if v == 0.0 {
        out.notice = Some("no impurity-bound band without an impurity potential".into());
        return Ok(out);
    }
    let center = if v < 0.0 { 0.0 } else { PI };
    let c = center.cos();
    let nu_of = |k2: f64| -> Option<f64> {
        let mut h = v.abs() / 2.0;
        for _ in 0..500 {
            let w = e1_rhs(C64::new(center, h.asinh()), C64::new(k2, 0.0), m, u, v);
            let hn = (w.im - v / 2.0) / c;
            if !hn.is_finite() || hn <= 0.0 {
                return None;
            }
            let done = (hn - h).abs() < 1e-16;
            h = hn;
            if done {
                break;
            }
        }
        Some(h.asinh())
    };
    let mf = m as f64;
    for q in 1..=spec.half() as i64 {
        let mut k2 = 2.0 * PI * q as f64 / mf;
        let mut failed = None;
        for _ in 0..300 {
            let Some(nu) = nu_of(k2) else {
                failed = Some("impurity equation has no positive solution".to_string());
                break;
            };
            let k1 = C64::new(center, nu);
            let z = (mf * k2
                + lift(
                    |t| {
                        paired_lambda2(k1, C64::new(t, 0.0), m, u, v)
                            .unwrap_or(C64::new(f64::NAN, 0.0))
                    },
                    k2,
                    m,
                ))
                / (2.0 * PI);
            let nk = k2 + 0.7 * 2.0 * PI * (q as f64 - z) / mf;
            let step = (nk - k2).abs();
            k2 = nk;
            if !k2.is_finite() {
                failed = Some("diverged".into());
                break;
            }
            if step < 1e-14 {
                break;
            }
        }
        let nu = if failed.is_none() { nu_of(k2) } else { None };
        let Some(nu) = nu else {
            out.holes.push(Hole {
                branch: Branch::Plus,
                quantum_numbers: (q, None),
                reason: failed
                    .unwrap_or_else(|| "impurity equation has no positive solution".into()),
                last_k: (center, k2),
            });
            continue;
        };
        let k1 = C64::new(center, nu);
        let k2c = C64::new(k2, 0.0);
        let w = e1_rhs(k1, k2c, m, u, v);
        if w.re.abs() > 1e-8 {
            out.holes.push(Hole {
                branch: Branch::Plus,
                quantum_numbers: (q, None),
                reason: format!("impurity equation not satisfied, Re = {:.3e}", w.re),
                last_k: (center, k2),
            });
            continue;
        }
        let s2 = k2.sin();
        let branch = if 4.0 * s2 * s2 < u * u - v * v {
            Branch::Plus
        } else {
            Branch::Minus
        };
        let residual = particle1_residual(k1, k2c, m, u, v)
            .max(particle2_residual(k1, k2c, m, u, v))
            .max(super::particle2_cleared_residual(k1, k2c, m, u, v));
        out.roots.push(BetheRoot {
            band: Band::Two,
            branch,
            quantum_numbers: (q, None),
            k1,
            k2: k2c,
            nu: Some(nu),
            k0: None,
            energy: energy_of(k1, k2c).re,
            residual,
        });
    }
    Ok(out)
}

/// Band-3 equation solved for its vanishing factor: at a root the value equals
/// `U + 4 cos k0 sinh nu`.
fn string_rhs(k0: f64, nu: f64, sign: f64, m: usize, u: f64, v: f64) -> C64 {
    let k1 = C64::new(k0, nu);
    let k2 = C64::new(k0, -nu);
    let (s1, s2) = (k1.sin(), k2.sin());
    let p = lambda_parts(s1, s2, u, v);
    let dm = I * 2.0 * k0.cos() * nu.sinh();
    let sp = 2.0 * k0.sin() * nu.cosh();
    64.0 * (p.a + I * p.b * sign) * (p.c - I * p.d) * (I * k1 * m as f64).exp()
        / ((v * v + 4.0 * s1 * s1) * (u + 2.0 * I * dm) * (u * u + 4.0 * sp * sp))
}

fn string_nu(k0: f64, sign: f64, m: usize, u: f64, v: f64) -> f64 {
    let cc = 4.0 * k0.cos();
    let mut nu = (-u / cc).asinh();
    for _ in 0..60 {
        let e = string_rhs(k0, nu, sign, m, u, v).re;
        let n2 = ((e - u) / cc).asinh();
        let done = (n2 - nu).abs() < 1e-16;
        nu = n2;
        if done {
            break;
        }
    }
    nu
}

fn string_phase(k0: f64, sign: f64, m: usize, u: f64, v: f64) -> f64 {
    let r = string_rhs(k0, string_nu(k0, sign, m, u, v), sign, m, u, v);
    r.im / r.norm()
}

/// Bound pairs `k1 = k0 + i nu`, `k2 = k0 - i nu` with `cos k0 sinh nu` near `-U/4`.
pub fn solve_band3(spec: &LatticeSpec) -> Result<BandSolution> {
    require_periodic(spec)?;
    let (m, u, v) = (spec.m, spec.u, spec.v);
    let mut out = BandSolution::default();
    if u == 0.0 {
        out.notice = Some("no pair-bound band without interaction".into());
        return Ok(out);
    }
    let branch = if u > 0.0 { Branch::Minus } else { Branch::Plus };
    let sign = branch.sign();
    let (lo, hi) = if u > 0.0 {
        (PI / 2.0, PI)
    } else {
        (0.0, PI / 2.0)
    };
    let n = 40 * m;
    let grid: Vec<f64> = (1..n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let vals: Vec<f64> = grid
        .iter()
        .map(|&k| string_phase(k, sign, m, u, v))
        .collect();
    for i in 0..grid.len() - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if !(a.is_finite() && b.is_finite() && a * b < 0.0) {
            continue;
        }
        let mut conv = SimpleConvergency {
            eps: 1e-15,
            max_iter: 200,
        };
        let Ok(k0) = find_root_brent(
            grid[i],
            grid[i + 1],
            |k| string_phase(k, sign, m, u, v),
            &mut conv,
        ) else {
            continue;
        };
        let nu = string_nu(k0, sign, m, u, v);
        let r = string_rhs(k0, nu, sign, m, u, v);
        let eps = u + 4.0 * k0.cos() * nu.sinh();
        // sign changes through a pole of the phase are rejected here
        if !((eps - r).norm() < 1e-9 * r.norm().max(1.0) && nu > 0.0) {
            continue;
        }
        let k1 = C64::new(k0, nu);
        let k2 = C64::new(k0, -nu);
        out.roots.push(BetheRoot {
            band: Band::Three,
            branch,
            quantum_numbers: ((k0 * m as f64 / PI).round() as i64, None),
            k1,
            k2,
            nu: Some(nu),
            k0: Some(k0),
            energy: -4.0 * k0.cos() * nu.cosh(),
            residual: root_residual(k1, k2, m, u, v),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Factor {
    Ap,
    Am,
    Bp,
}

/// Both `sin k_j` purely imaginary. At most one such state is returned.
pub fn find_bound_state(spec: &LatticeSpec) -> Result<Option<BetheRoot>> {
    require_periodic(spec)?;
    let (m, u, v) = (spec.m, spec.u, spec.v);
    let mut found: Vec<BetheRoot> = Vec::new();
    for centers in [(0.0, 0.0), (0.0, PI), (PI, 0.0), (PI, PI)] {
        let c = [f64::cos(centers.0), f64::cos(centers.1)];
        for a in 0..2usize {
            let b = 1 - a;
            for uf in [Factor::Ap, Factor::Am, Factor::Bp] {
                // the pinned-U factor must appear on the left of equation b
                let in_left = |eq: usize, f: Factor| match eq {
                    0 => f == Factor::Ap || f == Factor::Bp,
                    _ => f == Factor::Bp || f == Factor::Am,
                };
                if !in_left(b, uf) {
                    continue;
                }
                let mut x = [0.0; 2];
                x[a] = -v / 2.0;
                x[b] = match (uf, b) {
                    (Factor::Ap, 1) => x[a] + u / 2.0,
                    (Factor::Ap, _) => x[a] - u / 2.0,
                    (Factor::Am, 1) => x[a] - u / 2.0,
                    (Factor::Am, _) => x[a] + u / 2.0,
                    (Factor::Bp, _) => -u / 2.0 - x[a],
                };
                if x[0] * c[0] <= 0.0 || x[1] * c[1] <= 0.0 {
                    continue;
                }
                let mut ok = true;
                for _ in 0..1000 {
                    let q: Vec<f64> = (0..2)
                        .map(|j| c[j].powi(m as i32) * (-(x[j] * c[j]).asinh() * m as f64).exp())
                        .collect();
                    let ap = x[0] - x[1] + u / 2.0;
                    let am = x[0] - x[1] - u / 2.0;
                    let bp = x[0] + x[1] + u / 2.0;
                    let bm = x[0] + x[1] - u / 2.0;
                    let p = [x[0] + v / 2.0, x[1] + v / 2.0];
                    let pm = [x[0] - v / 2.0, x[1] - v / 2.0];
                    let r = [
                        x[0] * (ap * bm + bp * am) * q[0] - pm[0] * am * bm * q[0] * q[0],
                        x[1] * (am * bm + ap * bp) * q[1] - pm[1] * ap * bm * q[1] * q[1],
                    ];
                    let left: [Vec<(Option<Factor>, f64)>; 2] = [
                        vec![(None, p[0]), (Some(Factor::Ap), ap), (Some(Factor::Bp), bp)],
                        vec![(None, p[1]), (Some(Factor::Bp), bp), (Some(Factor::Am), am)],
                    ];
                    let rest_b: f64 = left[b]
                        .iter()
                        .filter(|f| f.0 != Some(uf))
                        .map(|f| f.1)
                        .product();
                    let e_u = r[b] / rest_b;
                    let rest_a: f64 = left[a]
                        .iter()
                        .filter(|f| f.0.is_some() && f.0 != Some(uf))
                        .map(|f| f.1)
                        .product();
                    let shares = left[a].iter().any(|f| f.0 == Some(uf));
                    let e_v = r[a] / (rest_a * if shares { e_u } else { 1.0 });
                    let mut xn = x;
                    xn[a] = e_v - v / 2.0;
                    xn[b] = match (uf, b) {
                        (Factor::Ap, 1) => xn[a] + u / 2.0 - e_u,
                        (Factor::Ap, _) => e_u + xn[1] - u / 2.0,
                        (Factor::Am, 1) => xn[a] - u / 2.0 - e_u,
                        (Factor::Am, _) => e_u + xn[1] + u / 2.0,
                        (Factor::Bp, _) => e_u - u / 2.0 - xn[a],
                    };
                    if !(xn[0].is_finite() && xn[1].is_finite())
                        || xn[0] * c[0] <= 0.0
                        || xn[1] * c[1] <= 0.0
                    {
                        ok = false;
                        break;
                    }
                    let step = (xn[0] - x[0]).abs().max((xn[1] - x[1]).abs());
                    x = xn;
                    if step < 1e-16 {
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let nu = [(x[0] * c[0]).asinh(), (x[1] * c[1]).asinh()];
                let k1 = C64::new(centers.0, nu[0]);
                let k2 = C64::new(centers.1, nu[1]);
                if particle2_residual(k1, k2, m, u, v) >= 1e-6 {
                    continue;
                }
                let energy = energy_of(k1, k2).re;
                if found.iter().any(|r| (r.energy - energy).abs() < 1e-10) {
                    continue;
                }
                let branch = match paired_branch(k1, k2, m, u, v) {
                    Some(b) => b,
                    None => continue,
                };
                found.push(BetheRoot {
                    band: Band::Bound,
                    branch,
                    quantum_numbers: (0, None),
                    k1,
                    k2,
                    nu: None,
                    k0: None,
                    energy,
                    residual: root_residual(k1, k2, m, u, v),
                });
            }
        }
    }
    found.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    Ok(found.into_iter().next())
}

/// Which closed-form branch the particle-1 eigenvalue sits on, if either matches.
fn paired_branch(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> Option<Branch> {
    let p = lambda_parts(k1.sin(), k2.sin(), u, v);
    let q = (I * k1 * m as f64).exp();
    let scale = p.a.norm() + p.b.norm() + p.c.norm() + p.d.norm();
    let miss =
        |s: f64| ((p.a + I * p.b * s) * q - (p.c + I * p.d)).norm() / scale.max(f64::MIN_POSITIVE);
    let (mp, mm) = (miss(1.0), miss(-1.0));
    Some(if mp <= mm {
        Branch::Plus
    } else {
        Branch::Minus
    })
}

/// Noninteracting odd states: `k = 2 pi n / M`, unordered pairs up to a global sign flip,
/// excluding the parity-even self-images.
pub fn free_roots(spec: &LatticeSpec) -> Result<Vec<BetheRoot>> {
    require_periodic(spec)?;
    let half = spec.half() as i64;
    let mf = spec.m as f64;
    let mut out = Vec::new();
    let mut push = |band, branch, n1: i64, n2: i64| {
        let k1 = C64::new(2.0 * PI * n1 as f64 / mf, 0.0);
        let k2 = C64::new(2.0 * PI * n2 as f64 / mf, 0.0);
        out.push(BetheRoot {
            band,
            branch,
            quantum_numbers: (n1, Some(n2)),
            k1,
            k2,
            nu: None,
            k0: None,
            energy: energy_of(k1, k2).re,
            residual: 0.0,
        });
    };
    for n1 in 1..=half {
        for n2 in 1..n1 {
            push(Band::One, Branch::Plus, n1, n2);
            push(Band::One, Branch::Minus, n1, -n2);
        }
        push(Band::Two, Branch::Plus, 0, n1);
        push(Band::Three, Branch::Plus, n1, n1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(m: usize, u: f64, v: f64) -> LatticeSpec {
        LatticeSpec::new(m, u, v, Bc::Periodic).unwrap()
    }

    #[test]
    fn lift_tracks_winding() {
        let m = 11;
        let th = lift(|t| (I * 3.0 * t).exp(), 2.0, m);
        assert!((th - 6.0).abs() < 1e-12);
    }

    #[test]
    fn open_boundaries_rejected() {
        let s = LatticeSpec::new(11, 1.0, 1.0, Bc::Open).unwrap();
        assert!(matches!(solve_band1(&s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn band1_free_quantization() {
        let s = ring(11, 0.0, 0.0);
        let sol = solve_band1(&s).unwrap();
        assert_eq!(sol.roots.len(), 20);
        for r in &sol.roots {
            let (m1, m2) = (
                r.quantum_numbers.0 as f64,
                r.quantum_numbers.1.unwrap() as f64,
            );
            assert!((r.k1.re - 2.0 * PI * m1 / 11.0).abs() < 1e-10);
            assert!((r.k2.re - 2.0 * PI * m2 / 11.0).abs() < 1e-10);
        }
    }

    #[test]
    fn band1_compensated_branch_is_free() {
        let s = ring(11, 2.0, -2.0);
        let sol = solve_band1(&s).unwrap();
        assert_eq!(sol.roots.len(), 20, "{:?}", sol.holes);
        for r in sol.roots.iter().filter(|r| r.branch == Branch::Plus) {
            let (m1, m2) = (
                r.quantum_numbers.0 as f64,
                r.quantum_numbers.1.unwrap() as f64,
            );
            assert!((r.k1.re - 2.0 * PI * m1 / 11.0).abs() < 1e-10);
            assert!((r.k2.re - 2.0 * PI * m2 / 11.0).abs() < 1e-10);
        }
    }

    #[test]
    fn band2_without_impurity_is_empty() {
        let sol = solve_band2(&ring(11, 3.0, 0.0)).unwrap();
        assert!(sol.roots.is_empty() && sol.notice.is_some());
        let sol = solve_band3(&ring(11, 0.0, 1.0)).unwrap();
        assert!(sol.roots.is_empty() && sol.notice.is_some());
    }

    #[test]
    fn free_count() {
        assert_eq!(free_roots(&ring(11, 0.0, 0.0)).unwrap().len(), 30);
    }
}
