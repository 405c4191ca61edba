//! Roots of monic polynomials in any complex scalar field.

use faer::Mat;

use crate::field::ComplexField;
use crate::{Error, Result, C64};

/// `p(z)` and `p'(z)` for `p(z) = z^n + c[n-1] z^(n-1) + ... + c[0]`.
pub fn eval_monic<F: ComplexField>(c: &[F], z: &F) -> (F, F) {
    let mut p = z.one_like();
    let mut dp = z.zero_like();
    for ck in c.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(ck);
    }
    (p, dp)
}

fn root_bound<F: ComplexField>(c: &[F]) -> f64 {
    1.0 + c.iter().map(|x| x.mag()).fold(0.0, f64::max)
}

/// Simultaneous Weierstrass iteration. Converges to all roots when they are simple.
pub fn durand_kerner<F: ComplexField>(c: &[F]) -> Result<Vec<F>> {
    let n = c.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let proto = &c[0];
    let digits = proto.digits() as i32;
    let r = root_bound(c);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<F> = (0..n)
        .map(|k| proto.lift_c(seed.powu(k as u32) * (r / 2.0).max(0.5)))
        .collect();
    let tol = 10f64.powi(-digits + 2) * r;
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, _) = eval_monic(c, &z[i]);
            let mut den = proto.one_like();
            for j in 0..n {
                if j != i {
                    den = den.mul(&z[i].sub(&z[j]));
                }
            }
            if den.mag() == 0.0 {
                return Err(Error::NoConvergence("coincident root estimates".into()));
            }
            let step = p.div(&den);
            worst = worst.max(step.mag());
            z[i] = z[i].sub(&step);
        }
        if worst <= tol {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(
        "Durand-Kerner iteration did not settle".into(),
    ))
}

/// Eigenvalues of the companion matrix in double precision.
pub fn companion_roots(c: &[C64]) -> Result<Vec<C64>> {
    let n = c.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let m = Mat::<C64>::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j]
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    m.eigenvalues()
        .map_err(|e| Error::NoConvergence(format!("{e:?}")))
}

/// Newton steps from `z0` in the field of `c` until the correction stalls.
pub fn newton_polish<F: ComplexField>(c: &[F], z0: C64) -> F {
    let proto = &c[0];
    let mut z = proto.lift_c(z0);
    let tol = 10f64.powi(-(proto.digits() as i32)) * root_bound(c);
    for _ in 0..100 {
        let (p, dp) = eval_monic(c, &z);
        if dp.mag() == 0.0 {
            break;
        }
        let step = p.div(&dp);
        z = z.sub(&step);
        if step.mag() <= tol {
            break;
        }
    }
    z
}

/// Companion eigenvalues polished to the working precision of `c`.
pub fn companion_roots_polished<F: ComplexField>(c: &[F]) -> Result<Vec<F>> {
    let approx: Vec<C64> = c.iter().map(|x| x.to_c64()).collect();
    Ok(companion_roots(&approx)?
        .into_iter()
        .map(|z| newton_polish(c, z))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn integer_roots() {
        // (t-2)(t-3)(t-5)(t-7)
        let p = [c(210.0), c(-247.0), c(101.0), c(-17.0)];
        for roots in [durand_kerner(&p).unwrap(), companion_roots(&p).unwrap()] {
            let r = sorted(roots);
            for (z, want) in r.iter().zip([2.0, 3.0, 5.0, 7.0]) {
                assert!((z - want).norm() < 1e-10, "{r:?}");
            }
        }
    }

    #[test]
    fn unit_circle_roots() {
        let zs = [
            C64::from_polar(1.0, 0.3),
            C64::from_polar(1.0, -0.3),
            C64::from_polar(1.0, 2.0),
        ];
        // expand monic product
        let mut poly = vec![c(1.0)];
        for z in zs {
            let mut next = vec![c(0.0); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * z;
            }
            poly = next;
        }
        let monic = &poly[..3];
        let got = durand_kerner(monic).unwrap();
        for z in zs {
            assert!(got.iter().any(|g| (g - z).norm() < 1e-12));
        }
        let polished = newton_polish(monic, zs[2] + 1e-6);
        assert!((polished.sub(&zs[2])).norm() < 1e-14);
    }

    #[cfg(feature = "mp")]
    #[test]
    fn polish_to_high_precision() {
        use crate::mp::{bits, MpComplex};
        let p = bits(50);
        let coeffs: Vec<MpComplex> = [210.0, -247.0, 101.0, -17.0]
            .iter()
            .map(|&x| MpComplex::from_c64(p, c(x)))
            .collect();
        for r in companion_roots_polished(&coeffs).unwrap() {
            let (val, _) = eval_monic(&coeffs, &r);
            assert!(val.mag() < 1e-40);
        }
        for r in durand_kerner(&coeffs).unwrap() {
            let (val, _) = eval_monic(&coeffs, &r);
            assert!(val.mag() < 1e-40);
        }
    }
}
