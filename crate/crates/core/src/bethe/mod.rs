//! Scattering data, transfer matrices and Bethe equations of the odd sector.

mod bands;
mod complete;
mod smatrix;

pub use bands::{find_bound_state, free_roots, solve_band1, solve_band2, solve_band3};
pub use complete::{completeness_report, CompletenessReport, Match};
pub use smatrix::{
    full_smatrices, impurity_transfer, sector_smatrices, unitarized_impurity, ybe_closed_form,
    ybe_residual, FullSMatrices, ImpurityTransfer, SectorSMatrices,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub(crate) const I: C64 = C64::new(0.0, 1.0);
/// Distance below which a denominator counts as a pole.
pub const POLE_TOL: f64 = 1e-12;

pub type Mat2 = [[C64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat2_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn mat2_scale(a: &Mat2, s: C64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn mat2_max_abs(a: &Mat2) -> f64 {
    a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn mat2_apply(a: &Mat2, v: &[C64; 2]) -> [C64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

/// Largest entry of `A A^dagger - 1`.
pub fn mat2_unitarity_error(a: &Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let s = a[i][0] * a[j][0].conj() + a[i][1] * a[j][1].conj();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - want).norm());
        }
    }
    worst
}

fn check_pole(z: C64, what: &str) -> Result<()> {
    if z.norm() < POLE_TOL {
        return Err(Error::Pole(format!("{what} vanishes")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringPhases {
    pub s1: C64,
    pub s2: C64,
    pub alpha: C64,
    pub beta: C64,
}

/// Two-body phases for momenta `k1`, `k2` at interaction `u`.
pub fn scattering_phases(k1: C64, k2: C64, u: f64) -> Result<ScatteringPhases> {
    let (s1, s2) = (k1.sin(), k2.sin());
    if u == 0.0 {
        let one = C64::new(1.0, 0.0);
        return Ok(ScatteringPhases {
            s1,
            s2,
            alpha: one,
            beta: one,
        });
    }
    let h = I * (u / 2.0);
    let (am, bm) = (s1 - s2 - h, s1 + s2 - h);
    check_pole(am, "s1 - s2 - iU/2")?;
    check_pole(bm, "s1 + s2 - iU/2")?;
    Ok(ScatteringPhases {
        s1,
        s2,
        alpha: (s1 - s2 + h) / am,
        beta: (s1 + s2 + h) / bm,
    })
}

/// Pieces of the closed-form eigenvalue `(a + sigma i b) / (c + i d)` for particle 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaParts {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

pub fn lambda_parts(s1: C64, s2: C64, u: f64, v: f64) -> LambdaParts {
    let (x, y) = (s1 * s1, s2 * s2);
    let diff = (s1 - s2) * (s1 + s2);
    let u2 = u * u;
    // sum of squares for real momenta, so no cancellation
    let disc = v * v / 4.0 * (diff * diff + u2 / 2.0 * (x + y) + u2 * u2 / 16.0) + u2 * x * y;
    LambdaParts {
        a: s1 * (diff + u2 / 4.0),
        b: disc.sqrt(),
        c: s1 * (diff - u2 / 4.0 - u * v / 2.0),
        d: v / 2.0 * (diff - u2 / 4.0) + u * x,
    }
}

impl LambdaParts {
    pub fn lambda(&self, sign: f64) -> C64 {
        (self.a + I * self.b * sign) / (self.c + I * self.d)
    }
}

/// Closed-form eigenvalue of the particle-1 transfer matrix on branch `sign` (±1).
pub fn lambda1(k1: C64, k2: C64, u: f64, v: f64, sign: f64) -> C64 {
    lambda_parts(k1.sin(), k2.sin(), u, v).lambda(sign)
}

/// Particle-2 eigenvalue: particle 1 with the momenta exchanged.
pub fn lambda2(k1: C64, k2: C64, u: f64, v: f64, sign: f64) -> C64 {
    lambda1(k2, k1, u, v, sign)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferPair {
    pub m1: Mat2,
    pub m2: Mat2,
    /// `[plus, minus]` from the closed form.
    pub lambda1: [C64; 2],
    pub lambda2: [C64; 2],
    pub parts1: LambdaParts,
    pub parts2: LambdaParts,
    pub v_plus: [C64; 2],
    pub v_minus: [C64; 2],
    /// Eigenvalues of `m1` from the 2x2 characteristic polynomial, ordered to match `lambda1`.
    pub direct1: [C64; 2],
    /// `m2` evaluated on the eigenvectors of `m1`.
    pub direct2: [C64; 2],
}

impl TransferPair {
    pub fn commutator(&self) -> f64 {
        mat2_max_abs(&mat2_sub(
            &mat2_mul(&self.m1, &self.m2),
            &mat2_mul(&self.m2, &self.m1),
        ))
    }

    /// Largest disagreement between closed-form and direct eigenvalues.
    pub fn closed_form_mismatch(&self) -> f64 {
        (0..2)
            .map(|i| {
                (self.lambda1[i] - self.direct1[i])
                    .norm()
                    .max((self.lambda2[i] - self.direct2[i]).norm())
            })
            .fold(0.0, f64::max)
    }

    /// `a^2 + b^2 - c^2 - d^2` for both particles.
    pub fn identity_defect(&self) -> f64 {
        let f = |p: &LambdaParts| (p.a * p.a + p.b * p.b - p.c * p.c - p.d * p.d).norm();
        f(&self.parts1).max(f(&self.parts2))
    }
}

pub fn transfer_m1(ph: &ScatteringPhases, v: f64) -> Result<Mat2> {
    let h = I * (v / 2.0);
    check_pole(ph.s1 + h, "s1 + iV/2")?;
    let pre = 1.0 / (ph.s1 + h);
    Ok(mat2_scale(
        &[
            [ph.s1 / ph.beta, h / ph.beta],
            [h / ph.alpha, ph.s1 / ph.alpha],
        ],
        pre,
    ))
}

pub fn transfer_m2(ph: &ScatteringPhases, v: f64) -> Result<Mat2> {
    let h = I * (v / 2.0);
    check_pole(ph.s2 + h, "s2 + iV/2")?;
    let pre = 1.0 / (ph.s2 + h);
    Ok(mat2_scale(
        &[
            [ph.s2 / ph.beta, -h * ph.alpha / ph.beta],
            [-h, ph.s2 * ph.alpha],
        ],
        pre,
    ))
}

/// Eigenvector of a 2x2 matrix for eigenvalue `t`, scaled to unit max entry.
fn eigvec(m: &Mat2, t: C64) -> [C64; 2] {
    let r0 = [m[0][1], t - m[0][0]];
    let r1 = [t - m[1][1], m[1][0]];
    let n0 = r0[0].norm().max(r0[1].norm());
    let n1 = r1[0].norm().max(r1[1].norm());
    let (v, n) = if n0 >= n1 { (r0, n0) } else { (r1, n1) };
    if n == 0.0 {
        return [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    }
    [v[0] / n, v[1] / n]
}

/// Ratio `(m v)_i / v_i` on the largest component of `v`.
fn rayleigh(m: &Mat2, v: &[C64; 2]) -> C64 {
    let w = mat2_apply(m, v);
    let i = if v[0].norm() >= v[1].norm() { 0 } else { 1 };
    w[i] / v[i]
}

pub fn transfer_matrices(k1: C64, k2: C64, u: f64, v: f64) -> Result<TransferPair> {
    let ph = scattering_phases(k1, k2, u)?;
    let m1 = transfer_m1(&ph, v)?;
    let m2 = transfer_m2(&ph, v)?;
    let parts1 = lambda_parts(ph.s1, ph.s2, u, v);
    let parts2 = lambda_parts(ph.s2, ph.s1, u, v);
    let lambda1 = [parts1.lambda(1.0), parts1.lambda(-1.0)];
    let lambda2 = [parts2.lambda(1.0), parts2.lambda(-1.0)];

    let tr = m1[0][0] + m1[1][1];
    let det = m1[0][0] * m1[1][1] - m1[0][1] * m1[1][0];
    let root = (tr * tr - 4.0 * det).sqrt();
    let mut ev = [(tr + root) / 2.0, (tr - root) / 2.0];
    if (ev[0] - lambda1[0]).norm() + (ev[1] - lambda1[1]).norm()
        > (ev[1] - lambda1[0]).norm() + (ev[0] - lambda1[1]).norm()
    {
        ev.swap(0, 1);
    }
    let v_plus = eigvec(&m1, ev[0]);
    let v_minus = eigvec(&m1, ev[1]);
    let direct2 = [rayleigh(&m2, &v_plus), rayleigh(&m2, &v_minus)];
    Ok(TransferPair {
        m1,
        m2,
        lambda1,
        lambda2,
        parts1,
        parts2,
        v_plus,
        v_minus,
        direct1: ev,
        direct2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Band {
    One,
    Two,
    Three,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRoot {
    pub band: Band,
    pub branch: Branch,
    /// `(m1, Some(m2))` in band 1, `(m, None)` otherwise.
    pub quantum_numbers: (i64, Option<i64>),
    pub k1: C64,
    pub k2: C64,
    pub nu: Option<f64>,
    pub k0: Option<f64>,
    pub energy: f64,
    /// Largest residual over the two equations.
    pub residual: f64,
}

pub fn energy_of(k1: C64, k2: C64) -> C64 {
    -2.0 * k1.cos() - 2.0 * k2.cos()
}

/// Branch-free particle-1 equation, both sides.
///
/// With `A± = s1 - s2 ± iU/2`, `B± = s1 + s2 ± iU/2` and `q = exp(i k1 M)`:
/// `(s1 + iV/2) A+ B+ = s1 (A+ B- + B+ A-) q - (s1 - iV/2) A- B- q^2`.
pub(crate) fn particle1_sides(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> (C64, C64, f64) {
    let (s1, s2) = (k1.sin(), k2.sin());
    let (hu, hv) = (I * (u / 2.0), I * (v / 2.0));
    let (ap, am, bp, bm) = (s1 - s2 + hu, s1 - s2 - hu, s1 + s2 + hu, s1 + s2 - hu);
    let q = (I * k1 * m as f64).exp();
    let lhs = (s1 + hv) * ap * bp;
    let t1 = s1 * (ap * bm + bp * am) * q;
    let t2 = (s1 - hv) * am * bm * q * q;
    // coefficient scale: each factor at its size without cancellation
    let sz = |z: C64, w: f64| z.norm() + w.abs();
    let scale = (s1.norm() + v.abs() / 2.0)
        * (sz(s1 - s2, u / 2.0) * sz(s1 + s2, u / 2.0))
        * (1.0 + q.norm() + q.norm_sqr());
    (lhs, t1 - t2, scale)
}

/// Normalized residual of the particle-1 equation.
pub fn particle1_residual(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> f64 {
    let (l, r, s) = particle1_sides(k1, k2, m, u, v);
    (l - r).norm() / s.max(f64::MIN_POSITIVE)
}

/// Branch-free particle-2 equation:
/// `(s2 + iV/2) B+ A- = s2 (A- B- + A+ B+) q2 - (s2 - iV/2) A+ B- q2^2`.
pub(crate) fn particle2_sides(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> (C64, C64, f64) {
    let (s1, s2) = (k1.sin(), k2.sin());
    let (hu, hv) = (I * (u / 2.0), I * (v / 2.0));
    let (ap, am, bp, bm) = (s1 - s2 + hu, s1 - s2 - hu, s1 + s2 + hu, s1 + s2 - hu);
    let q = (I * k2 * m as f64).exp();
    let lhs = (s2 + hv) * bp * am;
    let rhs = s2 * (am * bm + ap * bp) * q - (s2 - hv) * ap * bm * q * q;
    let sz = |z: C64, w: f64| z.norm() + w.abs();
    let scale = (s2.norm() + v.abs() / 2.0)
        * (sz(s1 - s2, u / 2.0) * sz(s1 + s2, u / 2.0))
        * (1.0 + q.norm() + q.norm_sqr());
    (lhs, rhs, scale)
}

pub fn particle2_cleared_residual(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> f64 {
    let (l, r, s) = particle2_sides(k1, k2, m, u, v);
    (l - r).norm() / s.max(f64::MIN_POSITIVE)
}

/// Particle-2 eigenvalue paired with the particle-1 eigenvector selected by `exp(-i k1 M)`.
///
/// The particle-1 eigenvalue is taken in the exact form `kappa = s1 (alpha + beta) - (s1 - iV/2) q`
/// (times `1 / (s1 + iV/2)`), which stays accurate when `q` is exponentially small.
pub fn paired_lambda2(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> Result<C64> {
    let ph = scattering_phases(k1, k2, u)?;
    let (s1, al, be) = (ph.s1, ph.alpha, ph.beta);
    let hv = I * (v / 2.0);
    let q = (I * k1 * m as f64).exp();
    let kap = s1 * (al + be) - (s1 - hv) * q;
    let mut vec = [hv * al, kap - s1 * al];
    let big = vec[0].norm().max(vec[1].norm());
    if big < 1e-300 || vec[0].norm() < 1e-14 * big {
        vec = [kap - s1 * be, hv * be];
    }
    let m2 = transfer_m2(&ph, v)?;
    Ok(rayleigh(&m2, &vec))
}

/// Residual of the particle-2 equation through eigenvector pairing.
pub fn particle2_residual(k1: C64, k2: C64, m: usize, u: f64, v: f64) -> f64 {
    match paired_lambda2(k1, k2, m, u, v) {
        Ok(l2) => (l2 * (I * k2 * m as f64).exp() - 1.0).norm(),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn phases_basic() {
        let p = scattering_phases(c(1.0), c(0.3), 0.0).unwrap();
        assert_eq!((p.alpha, p.beta), (c(1.0), c(1.0)));
        let p = scattering_phases(c(0.7), c(0.7), 1.5).unwrap();
        assert!((p.alpha + 1.0).norm() < 1e-15);
        let p = scattering_phases(c(1.0), c(0.3), 2.0).unwrap();
        assert!((p.alpha.norm() - 1.0).abs() < 1e-15 && (p.beta.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_pole_rejected() {
        // s1 - s2 = iU/2 with s1 = i, s2 = 0, U = 2
        let k1 = C64::new(0.0, 1f64.asinh());
        assert!(matches!(
            scattering_phases(k1, c(0.0), 2.0),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn transfer_identities_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let k1 = c(rng.gen_range(0.05..3.1));
            let k2 = c(rng.gen_range(0.05..3.1));
            let u = rng.gen_range(-4.0..4.0);
            let v = rng.gen_range(-4.0..4.0);
            let t = transfer_matrices(k1, k2, u, v).unwrap();
            assert!(t.commutator() < 1e-13);
            assert!(
                t.closed_form_mismatch() < 1e-12,
                "{}",
                t.closed_form_mismatch()
            );
            for l in t.lambda1.iter().chain(&t.lambda2) {
                assert!((l.norm() - 1.0).abs() < 1e-13);
            }
            assert!(t.identity_defect() < 1e-12);
            // exchange symmetry
            let l = lambda1(k2, k1, u, v, 1.0);
            assert!((l - lambda2(k1, k2, u, v, 1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn compensating_branch_is_trivial() {
        for (k1, k2) in [(0.4, 1.2), (2.0, 0.1), (3.0, 2.2)] {
            let t = transfer_matrices(c(k1), c(k2), 3.0, -3.0).unwrap();
            assert!((t.lambda1[0] - 1.0).norm() < 1e-14);
            assert!((t.lambda2[0] - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn complex_momenta_commute() {
        let t = transfer_matrices(C64::new(0.3, 0.7), C64::new(1.1, -0.2), 1.3, -0.7).unwrap();
        assert!(t.commutator() < 1e-13);
    }
}
