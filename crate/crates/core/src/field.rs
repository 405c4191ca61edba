//! Minimal arithmetic interface shared by double and multiprecision scalars.

use crate::C64;

pub trait Field: Clone + std::fmt::Debug {
    fn lift(&self, x: f64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Magnitude rounded to double, used for pivoting and reporting.
    fn mag(&self) -> f64;
    fn to_c64(&self) -> C64;
    /// Decimal digits carried.
    fn digits(&self) -> u32;

    fn zero_like(&self) -> Self {
        self.lift(0.0)
    }
    fn one_like(&self) -> Self {
        self.lift(1.0)
    }
}

pub trait ComplexField: Field {
    fn lift_c(&self, z: C64) -> Self;
    /// Principal square root.
    fn csqrt(&self) -> Self;
}

impl Field for f64 {
    fn lift(&self, x: f64) -> Self {
        x
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mag(&self) -> f64 {
        self.abs()
    }
    fn to_c64(&self) -> C64 {
        C64::new(*self, 0.0)
    }
    fn digits(&self) -> u32 {
        16
    }
}

impl Field for C64 {
    fn lift(&self, x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mag(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn digits(&self) -> u32 {
        16
    }
}

impl ComplexField for C64 {
    fn lift_c(&self, z: C64) -> Self {
        z
    }
    fn csqrt(&self) -> Self {
        self.sqrt()
    }
}

/// Solves `a x = b` (row-major `n x n`) by complete pivoting.
///
/// Returns the solution and the ratio of largest to smallest pivot magnitude.
pub fn solve_full_pivot<F: Field>(a: &[F], b: &[F], n: usize) -> Option<(Vec<F>, f64)> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let m = a[i * n + j].mag();
                if m > best {
                    (pi, pj, best) = (i, j, m);
                }
            }
        }
        if !(best > 0.0) || !best.is_finite() {
            return None;
        }
        pivots.push(best);
        if pi != k {
            for j in 0..n {
                a.swap(k * n + j, pi * n + j);
            }
            b.swap(k, pi);
        }
        if pj != k {
            for i in 0..n {
                a.swap(i * n + k, i * n + pj);
            }
            col_perm.swap(k, pj);
        }
        let p = a[k * n + k].clone();
        for i in k + 1..n {
            let f = a[i * n + k].div(&p);
            for j in k + 1..n {
                let t = f.mul(&a[k * n + j]);
                a[i * n + j] = a[i * n + j].sub(&t);
            }
            let t = f.mul(&b[k]);
            b[i] = b[i].sub(&t);
        }
    }
    let mut y = vec![b[0].zero_like(); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for j in k + 1..n {
            s = s.sub(&a[k * n + j].mul(&y[j]));
        }
        y[k] = s.div(&a[k * n + k]);
    }
    let mut x = y.clone();
    for (k, &c) in col_perm.iter().enumerate() {
        x[c] = y[k].clone();
    }
    let ratio = pivots[0] / pivots[n - 1];
    Some((x, ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_pivot_solves_small_system() {
        let a = [0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let x0 = [1.0, -2.0, 0.5];
        let b: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| a[i * 3 + j] * x0[j]).sum())
            .collect();
        let (x, r) = solve_full_pivot(&a, &b, 3).unwrap();
        for i in 0..3 {
            assert!((x[i] - x0[i]).abs() < 1e-14);
        }
        assert!(r >= 1.0);
    }

    #[test]
    fn singular_is_none() {
        let a = [1.0, 2.0, 2.0, 4.0];
        let r = solve_full_pivot(&a, &[1.0, 2.0], 2);
        assert!(r.map_or(true, |(_, ratio)| ratio > 1e15));
    }
}
