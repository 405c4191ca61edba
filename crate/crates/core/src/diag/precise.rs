//! Cyclic Jacobi and inverse iteration on MPFR numbers.

use std::cmp::Ordering;

use rug::ops::NegAssign;
use rug::{Assign, Float};

use super::{check_symmetric, eigenvalues_f64, eigh_f64, EigenDecomposition, SymSource};
use crate::lattice::{sector_hamiltonian, LatticeSpec, Parity, PreciseWaveFunction};
use crate::mp::{bits, pow10};
use crate::{Error, Result};

/// Starting basis for the rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiStart {
    /// Rotate the matrix itself.
    Identity,
    /// Rotate `Q^T A Q` where `Q` holds double-precision eigenvectors,
    /// re-orthonormalized at full precision.
    DoubleSeed,
}

const MAX_SWEEPS: usize = 60;

fn dot(a: &[Float], b: &[Float], prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

fn norm(a: &[Float], prec: u32) -> Float {
    dot(a, a, prec).sqrt()
}

fn sparse_mul(rows: &[Vec<(usize, Float)>], x: &[Float], prec: u32) -> Vec<Float> {
    rows.iter()
        .map(|r| {
            let mut acc = Float::new(prec);
            for (j, a) in r {
                acc += a * &x[*j];
            }
            acc
        })
        .collect()
}

fn residual(rows: &[Vec<(usize, Float)>], lambda: &Float, v: &[Float], prec: u32) -> f64 {
    let av = sparse_mul(rows, v, prec);
    let mut acc = Float::new(prec);
    let mut t = Float::new(prec);
    for (a, x) in av.iter().zip(v) {
        t.assign(a - lambda * x);
        acc += &t * &t;
    }
    acc.sqrt().to_f64()
}

/// Copies `a[src]` into `a[dst]`.
fn copy_in(a: &mut [Float], src: usize, dst: usize) {
    if src < dst {
        let (l, r) = a.split_at_mut(dst);
        r[0].assign(&l[src]);
    } else {
        let (l, r) = a.split_at_mut(src);
        l[dst].assign(&r[0]);
    }
}

/// Rotates the dense symmetric `a` to diagonal form, accumulating into `cols`.
fn jacobi(
    a: &mut [Float],
    n: usize,
    cols: &mut [Vec<Float>],
    tol: &Float,
    prec: u32,
) -> Result<usize> {
    let mut tx = Float::new(prec);
    let mut ty = Float::new(prec);
    let mut theta = Float::new(prec);
    let mut t = Float::new(prec);
    let mut c = Float::new(prec);
    let mut s = Float::new(prec);
    let mut tmp = Float::new(prec);
    for sweep in 0..MAX_SWEEPS {
        let mut rotations = 0usize;
        for p in 0..n {
            for q in p + 1..n {
                let apq = &a[p * n + q];
                if apq.cmp_abs(tol) != Some(Ordering::Greater) {
                    continue;
                }
                rotations += 1;
                theta.assign(&a[q * n + q] - &a[p * n + p]);
                tmp.assign(apq * 2u32);
                theta /= &tmp;
                // t = sign(theta) / (|theta| + sqrt(theta^2 + 1))
                tmp.assign(theta.square_ref());
                tmp += 1u32;
                tmp.sqrt_mut();
                t.assign(theta.abs_ref());
                t += &tmp;
                t.recip_mut();
                if theta.is_sign_negative() {
                    t = -t;
                }
                c.assign(t.square_ref());
                c += 1u32;
                c.sqrt_mut();
                c.recip_mut();
                s.assign(&t * &c);

                tmp.assign(&t * &a[p * n + q]);
                a[p * n + p] -= &tmp;
                a[q * n + q] += &tmp;
                a[p * n + q].assign(0u32);
                a[q * n + p].assign(0u32);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    {
                        let x = &a[r * n + p];
                        let y = &a[r * n + q];
                        tx.assign(x.mul_sub_mul_ref(&c, y, &s));
                        ty.assign(x.mul_add_mul_ref(&s, y, &c));
                    }
                    std::mem::swap(&mut a[r * n + p], &mut tx);
                    std::mem::swap(&mut a[r * n + q], &mut ty);
                    copy_in(a, r * n + p, p * n + r);
                    copy_in(a, r * n + q, q * n + r);
                }
                let (lo, hi) = cols.split_at_mut(q);
                let (vp, vq) = (&mut lo[p], &mut hi[0]);
                for r in 0..vp.len() {
                    tx.assign(vp[r].mul_sub_mul_ref(&c, &vq[r], &s));
                    ty.assign(vp[r].mul_add_mul_ref(&s, &vq[r], &c));
                    std::mem::swap(&mut vp[r], &mut tx);
                    std::mem::swap(&mut vq[r], &mut ty);
                }
            }
        }
        if rotations == 0 {
            return Ok(sweep);
        }
    }
    Err(Error::NoConvergence(format!(
        "Jacobi rotations did not settle in {MAX_SWEEPS} sweeps"
    )))
}

fn frobenius(rows: &[Vec<(usize, Float)>], prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for r in rows {
        for (_, x) in r {
            acc += x * x;
        }
    }
    acc.sqrt()
}

/// Full decomposition at `digits` decimal digits by cyclic Jacobi rotations.
pub fn eigh_precise(
    a: &impl SymSource,
    digits: u32,
    start: JacobiStart,
) -> Result<EigenDecomposition<Float>> {
    check_symmetric(a)?;
    let n = a.dim();
    let prec = bits(digits);
    let rows = a.rows_mp(prec);
    let fro = frobenius(&rows, prec);
    let tol = Float::with_val(prec, &fro * &pow10(prec, -(digits as i32) - 3));

    let (mut work, mut cols) = match start {
        JacobiStart::Identity => {
            let mut w = vec![Float::new(prec); n * n];
            for (i, r) in rows.iter().enumerate() {
                for (j, x) in r {
                    w[i * n + j].assign(x);
                }
            }
            let cols = (0..n)
                .map(|j| {
                    let mut c = vec![Float::new(prec); n];
                    c[j].assign(1u32);
                    c
                })
                .collect::<Vec<_>>();
            (w, cols)
        }
        JacobiStart::DoubleSeed => {
            let seed = eigh_f64(a)?;
            let mut q: Vec<Vec<Float>> = seed
                .vectors
                .iter()
                .map(|v| v.iter().map(|&x| Float::with_val(prec, x)).collect())
                .collect();
            // one modified Gram-Schmidt pass at full precision
            for j in 0..n {
                let (done, rest) = q.split_at_mut(j);
                let v = &mut rest[0];
                for u in done.iter() {
                    let d = dot(u, v, prec);
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= &d * y;
                    }
                }
                let nv = norm(v, prec);
                for x in v.iter_mut() {
                    *x /= &nv;
                }
            }
            let aq: Vec<Vec<Float>> = q.iter().map(|v| sparse_mul(&rows, v, prec)).collect();
            let mut w = vec![Float::new(prec); n * n];
            for i in 0..n {
                for j in i..n {
                    let d = dot(&q[i], &aq[j], prec);
                    if i != j {
                        w[j * n + i].assign(&d);
                    }
                    w[i * n + j] = d;
                }
            }
            (w, q)
        }
    };

    jacobi(&mut work, n, &mut cols, &tol, prec)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        work[i * n + i]
            .partial_cmp(&work[j * n + j])
            .unwrap_or(Ordering::Equal)
    });
    let values: Vec<Float> = order.iter().map(|&i| work[i * n + i].clone()).collect();
    let mut slots: Vec<Option<Vec<Float>>> = cols.into_iter().map(Some).collect();
    let vectors: Vec<Vec<Float>> = order.iter().map(|&i| slots[i].take().unwrap()).collect();
    let residual_norm = values
        .iter()
        .zip(&vectors)
        .map(|(l, v)| residual(&rows, l, v, prec))
        .fold(0.0, f64::max);
    Ok(EigenDecomposition {
        values,
        vectors,
        precision_digits: digits,
        residual_norm,
    })
}

/// Eigenpair polished by inverse iteration.
#[derive(Debug, Clone)]
pub struct RefinedPair {
    pub value: Float,
    pub vector: Vec<Float>,
    pub residual: f64,
    pub iterations: usize,
}

const REFINE_BUDGET: usize = 30;

/// Dense LU with partial pivoting, in place. Returns the row permutation.
fn lu_in_place(a: &mut [Float], n: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let prec = a[0].prec();
    let mut l = Float::new(prec);
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if a[i * n + k].cmp_abs(&a[piv * n + k]) == Some(Ordering::Greater) {
                piv = i;
            }
        }
        if a[piv * n + k].is_zero() {
            return Err(Error::Singular(format!("zero pivot in column {k}")));
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            perm.swap(k, piv);
        }
        let (top, bottom) = a.split_at_mut((k + 1) * n);
        let row_k = &top[k * n..];
        for i in 0..n - k - 1 {
            let row_i = &mut bottom[i * n..(i + 1) * n];
            if row_i[k].is_zero() {
                continue;
            }
            l.assign(&row_i[k] / &row_k[k]);
            for j in k + 1..n {
                row_i[j] -= &l * &row_k[j];
            }
            row_i[k].assign(&l);
        }
    }
    Ok(perm)
}

fn lu_solve(lu: &[Float], perm: &[usize], b: &[Float], n: usize) -> Vec<Float> {
    let mut x: Vec<Float> = perm.iter().map(|&p| b[p].clone()).collect();
    for i in 0..n {
        let (done, rest) = x.split_at_mut(i);
        for (j, xj) in done.iter().enumerate() {
            rest[0] -= &lu[i * n + j] * xj;
        }
    }
    for i in (0..n).rev() {
        let (head, tail) = x.split_at_mut(i + 1);
        for (j, xj) in tail.iter().enumerate() {
            head[i] -= &lu[i * n + i + 1 + j] * xj;
        }
        head[i] /= &lu[i * n + i];
    }
    x
}

/// Polishes a double-precision eigenpair to `digits` digits.
///
/// Refuses when another eigenvalue lies within ten times the starting residual.
pub fn refine_eigenpair(
    a: &impl SymSource,
    lambda0: f64,
    v0: &[f64],
    digits: u32,
) -> Result<RefinedPair> {
    check_symmetric(a)?;
    let n = a.dim();
    if v0.len() != n {
        return Err(Error::InvalidInput(
            "vector length does not match matrix".into(),
        ));
    }
    let prec = bits(digits);
    let rows_d = a.rows_f64();
    let v0n = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if v0n == 0.0 {
        return Err(Error::InvalidInput("zero starting vector".into()));
    }
    let r0 = rows_d
        .iter()
        .zip(v0)
        .map(|(r, &vi)| {
            let av: f64 = r.iter().map(|&(j, x)| x * v0[j]).sum();
            (av - lambda0 * vi).powi(2)
        })
        .sum::<f64>()
        .sqrt()
        / v0n;
    if r0 >= 1e-6 {
        return Err(Error::InvalidInput(format!(
            "starting residual {r0:e} is not below 1e-6"
        )));
    }
    let evals = eigenvalues_f64(a)?;
    let anorm = evals
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let closest = evals
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - lambda0).abs().total_cmp(&(y.1 - lambda0).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let separation = evals
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != closest)
        .map(|(_, x)| (x - lambda0).abs())
        .fold(f64::INFINITY, f64::min);
    // double-precision eigenvalues carry their own error, so never demand less than that
    let threshold = 10.0 * r0.max(1e-14 * anorm);
    if separation <= threshold {
        return Err(Error::NearDegenerate {
            separation,
            threshold,
        });
    }

    let rows = a.rows_mp(prec);
    let target = 10f64.powi(3 - digits as i32) * anorm;
    let inv = Float::with_val(prec, v0n).recip();
    let mut x: Vec<Float> = v0
        .iter()
        .map(|&vi| Float::with_val(prec, vi) * &inv)
        .collect();
    let lambda_start = Float::with_val(prec, lambda0);
    let res0 = residual(&rows, &lambda_start, &x, prec);
    if res0 <= target {
        return Ok(RefinedPair {
            value: lambda_start,
            vector: x,
            residual: res0,
            iterations: 0,
        });
    }

    let build = |nudge: f64| {
        let mut m = vec![Float::new(prec); n * n];
        for (i, r) in rows.iter().enumerate() {
            for (j, e) in r {
                m[i * n + j].assign(e);
            }
            m[i * n + i] -= &lambda_start;
            m[i * n + i] -= nudge;
        }
        m
    };
    let mut shifted = build(0.0);
    let perm = match lu_in_place(&mut shifted, n) {
        Ok(p) => p,
        Err(_) => {
            // the shift hit an eigenvalue exactly
            shifted = build(anorm * 1e-20);
            lu_in_place(&mut shifted, n)?
        }
    };

    let floor = 10f64.powi(1 - digits as i32) * anorm;
    let mut best: Option<RefinedPair> = None;
    for it in 1..=REFINE_BUDGET {
        let mut y = lu_solve(&shifted, &perm, &x, n);
        let ny = norm(&y, prec);
        // keep the orientation of the starting vector
        let sgn = dot(&y, &x, prec);
        for e in y.iter_mut() {
            *e /= &ny;
            if sgn.is_sign_negative() {
                e.neg_assign();
            }
        }
        x = y;
        let ax = sparse_mul(&rows, &x, prec);
        let lambda = dot(&x, &ax, prec);
        let res = residual(&rows, &lambda, &x, prec);
        let improved = best.as_ref().map_or(true, |b| res < 0.5 * b.residual);
        let cand = RefinedPair {
            value: lambda,
            vector: x.clone(),
            residual: res,
            iterations: it,
        };
        if best.as_ref().map_or(true, |b| res < b.residual) {
            best = Some(cand);
        }
        let b = best.as_ref().unwrap();
        if b.residual <= floor || (b.residual <= target && !improved) {
            break;
        }
    }
    let b = best.unwrap();
    if b.residual > target {
        return Err(Error::NoConvergence(format!(
            "inverse iteration reached residual {:e} above {target:e}",
            b.residual
        )));
    }
    Ok(b)
}

/// All states of a sector at `digits` digits, ascending in energy.
pub fn precise_sector_states(
    spec: &LatticeSpec,
    parity: Parity,
    digits: u32,
) -> Result<Vec<PreciseWaveFunction>> {
    let (basis, h, emb) = sector_hamiltonian(spec, parity)?;
    let e = eigh_precise(&h, digits, JacobiStart::DoubleSeed)?;
    Ok(e.values
        .into_iter()
        .zip(e.vectors)
        .map(|(val, vec)| PreciseWaveFunction::from_sector(&basis, &emb, &vec, val, digits))
        .collect())
}

/// The sector state whose double-precision energy is closest to `energy`, refined to `digits`.
pub fn refine_state(
    spec: &LatticeSpec,
    parity: Parity,
    energy: f64,
    digits: u32,
) -> Result<PreciseWaveFunction> {
    let (basis, h, emb) = sector_hamiltonian(spec, parity)?;
    let e = eigh_f64(&h)?;
    let k = e
        .values
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - energy).abs().total_cmp(&(b.1 - energy).abs()))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::InvalidInput("empty sector".into()))?;
    match refine_eigenpair(&h, e.values[k], &e.vectors[k], digits) {
        Ok(r) => Ok(PreciseWaveFunction::from_sector(
            &basis, &emb, &r.vector, r.value, digits,
        )),
        Err(Error::NearDegenerate { .. }) => {
            // a cluster cannot be split by inverse iteration; rotate the whole sector
            let full = eigh_precise(&h, digits, JacobiStart::DoubleSeed)?;
            let (val, vec) = full
                .values
                .into_iter()
                .zip(full.vectors)
                .min_by(|a, b| {
                    (a.0.to_f64() - energy)
                        .abs()
                        .total_cmp(&(b.0.to_f64() - energy).abs())
                })
                .expect("nonempty sector");
            Ok(PreciseWaveFunction::from_sector(
                &basis, &emb, &vec, val, digits,
            ))
        }
        Err(err) => Err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::DenseSym;
    use crate::lattice::Bc;
    use rand::{Rng, SeedableRng};

    fn random_sym(n: usize, seed: u64) -> DenseSym {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.gen_range(-1.0..1.0);
                d[i * n + j] = x;
                d[j * n + i] = x;
            }
        }
        DenseSym::new(n, d).unwrap()
    }

    #[test]
    fn exchange_matrix_precise() {
        let a = DenseSym::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = eigh_precise(&a, 40, JacobiStart::Identity).unwrap();
        assert!((e.values[0].to_f64() + 1.0).abs() < 1e-30);
        assert!(e.residual_norm < 1e-38);
    }

    #[test]
    fn random_matches_double_both_starts() {
        let a = random_sym(50, 7);
        let d = eigh_f64(&a).unwrap();
        for start in [JacobiStart::Identity, JacobiStart::DoubleSeed] {
            let e = eigh_precise(&a, 30, start).unwrap();
            for (x, y) in e.values.iter().zip(&d.values) {
                assert!((x.to_f64() - y).abs() < 1e-12);
            }
            assert!(e.residual_norm < 1e-26);
            // trace is preserved
            let tr: f64 = (0..50).map(|i| a.data[i * 50 + i]).sum();
            let s = e.values.iter().fold(Float::new(120), |acc, x| acc + x);
            assert!((s.to_f64() - tr).abs() < 1e-12);
        }
    }

    #[test]
    fn lattice_sector_at_fifty_digits() {
        let s = LatticeSpec::new(15, -2.0, -2.0, Bc::Open).unwrap();
        let (_, h, _) = sector_hamiltonian(&s, Parity::Odd).unwrap();
        let e = eigh_precise(&h, 50, JacobiStart::DoubleSeed).unwrap();
        assert!(e.residual_norm < 1e-45, "{}", e.residual_norm);
        // orthonormality
        let p = bits(50);
        for i in [0, 17, 54] {
            for j in [0, 17, 54] {
                let d = dot(&e.vectors[i], &e.vectors[j], p).to_f64();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-45);
            }
        }
    }

    #[test]
    fn refine_exact_pair_is_unchanged() {
        let a = DenseSym::new(2, vec![2.0, 0.0, 0.0, 3.0]).unwrap();
        let r = refine_eigenpair(&a, 2.0, &[1.0, 0.0], 50).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.value.to_f64(), 2.0);
        assert_eq!(r.vector[1].to_f64(), 0.0);
    }

    #[test]
    fn refine_degenerate_refuses() {
        let a = DenseSym::new(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let r = refine_eigenpair(&a, 1.0, &[1.0, 0.0], 50);
        assert!(matches!(r, Err(Error::NearDegenerate { .. })));
    }

    #[test]
    fn refine_random_pair() {
        let a = random_sym(40, 3);
        let d = eigh_f64(&a).unwrap();
        let r = refine_eigenpair(&a, d.values[11], &d.vectors[11], 45).unwrap();
        assert!(r.residual < 1e-42 * 10.0, "{}", r.residual);
        let full = eigh_precise(&a, 45, JacobiStart::DoubleSeed).unwrap();
        let diff = Float::with_val(bits(45), &r.value - &full.values[11])
            .to_f64()
            .abs();
        assert!(diff < 1e-40, "{diff:e}");
    }
}
