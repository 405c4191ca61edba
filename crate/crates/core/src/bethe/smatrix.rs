//! Two-body and impurity S-matrices, their sector projections and the consistency check.

use serde::{Deserialize, Serialize};

use super::{
    check_pole, mat2_max_abs, mat2_mul, mat2_scale, mat2_sub, mat2_unitarity_error,
    scattering_phases, Mat2, I,
};
use crate::lattice::Parity;
use crate::{Error, Result, C64};

pub type Mat4 = [[C64; 4]; 4];

fn zero4() -> Mat4 {
    [[C64::new(0.0, 0.0); 4]; 4]
}

fn diag4(d: [C64; 4]) -> Mat4 {
    let mut m = zero4();
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = zero4();
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn mat4_max_abs(a: &Mat4) -> f64 {
    a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn mat4_sub(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = zero4();
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = a[i][j] - b[i][j];
        }
    }
    c
}

/// Parity reversal of the amplitude vector, `R e_k = e_{5-k}`.
pub fn reversal() -> Mat4 {
    let mut r = zero4();
    for k in 0..4 {
        r[k][3 - k] = C64::new(1.0, 0.0);
    }
    r
}

/// Orthonormal sector basis as two columns of length 4.
pub fn sector_basis(parity: Parity) -> [[f64; 4]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match parity {
        Parity::Even => [[h, 0.0, 0.0, h], [0.0, h, h, 0.0]],
        Parity::Odd => [[0.0, h, -h, 0.0], [h, 0.0, 0.0, -h]],
    }
}

/// `B^T S B` for the sector basis `B`.
pub fn project(s: &Mat4, parity: Parity) -> Mat2 {
    let b = sector_basis(parity);
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, bi) in b.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..4 {
                for l in 0..4 {
                    acc += bi[k] * s[k][l] * bj[l];
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Largest entry coupling the two sectors.
pub fn sector_leak(s: &Mat4) -> f64 {
    let (e, o) = (sector_basis(Parity::Even), sector_basis(Parity::Odd));
    let mut worst = 0.0f64;
    for (x, y) in [(&e, &o), (&o, &e)] {
        for bi in x.iter() {
            for bj in y.iter() {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..4 {
                    for l in 0..4 {
                        acc += bi[k] * s[k][l] * bj[l];
                    }
                }
                worst = worst.max(acc.norm());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorSMatrices {
    pub parity: Parity,
    /// Impurity passage of particle 1.
    pub s10: Mat2,
    /// Impurity passage of particle 2.
    pub s20: Mat2,
    /// Particle exchange, difference momentum.
    pub s12: Mat2,
    /// Particle exchange, sum momentum.
    pub s12p: Mat2,
}

impl SectorSMatrices {
    pub fn max_unitarity_error(&self) -> f64 {
        [self.s10, self.s20, self.s12, self.s12p]
            .iter()
            .map(mat2_unitarity_error)
            .fold(0.0, f64::max)
    }
}

fn check_impurity_poles(s1: C64, s2: C64, v: f64) -> Result<()> {
    let h = I * (v / 2.0);
    for (z, what) in [
        (s1 - h, "s1 - iV/2"),
        (s2 - h, "s2 - iV/2"),
        (s1 + h, "s1 + iV/2"),
        (s2 + h, "s2 + iV/2"),
    ] {
        check_pole(z, what)?;
    }
    Ok(())
}

pub fn sector_smatrices(
    k1: C64,
    k2: C64,
    u: f64,
    v: f64,
    parity: Parity,
) -> Result<SectorSMatrices> {
    let ph = scattering_phases(k1, k2, u)?;
    let (s1, s2) = (ph.s1, ph.s2);
    check_impurity_poles(s1, s2, v)?;
    let h = I * (v / 2.0);
    let one = C64::new(1.0, 0.0);
    let s20 = mat2_scale(&[[h, s2], [s2, h]], 1.0 / (s2 - h));
    Ok(match parity {
        Parity::Even => SectorSMatrices {
            parity,
            s10: mat2_scale(&[[h, s1], [s1, h]], 1.0 / (s1 - h)),
            s20,
            s12: [[1.0 / ph.alpha, 0.0.into()], [0.0.into(), one]],
            s12p: [[ph.beta, 0.0.into()], [0.0.into(), one]],
        },
        Parity::Odd => SectorSMatrices {
            parity,
            s10: mat2_scale(&[[h, -s1], [-s1, h]], 1.0 / (s1 - h)),
            s20,
            s12: [[one, 0.0.into()], [0.0.into(), 1.0 / ph.alpha]],
            s12p: [[one, 0.0.into()], [0.0.into(), ph.beta]],
        },
    })
}

/// The eight link matrices around the amplitude octagon, `links[j-1] = S(j, j-1)` with `S(1, 0) = S(1, 8)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullSMatrices {
    pub links: [Mat4; 8],
    /// Largest sector-coupling entry over all links.
    pub block_leak: f64,
    /// Largest `|R S R - S|` over all links.
    pub reversal_defect: f64,
    /// Largest deviation of the projected links from [`sector_smatrices`], both sectors.
    pub projection_mismatch: f64,
    /// Largest entry of the projected consistency difference in each sector.
    pub ybe_even: f64,
    pub ybe_odd: f64,
}

impl FullSMatrices {
    pub fn link(&self, j: usize) -> &Mat4 {
        &self.links[j - 1]
    }
}

pub fn full_smatrices(k1: C64, k2: C64, u: f64, v: f64) -> Result<FullSMatrices> {
    let ph = scattering_phases(k1, k2, u)?;
    let (s1, s2) = (ph.s1, ph.s2);
    check_impurity_poles(s1, s2, v)?;
    let h = I * (v / 2.0);
    let one = C64::new(1.0, 0.0);
    let (a, b) = (ph.alpha, ph.beta);

    // impurity passage of particle 1 mixes components (1,3) and (2,4)
    let imp1 = |x: C64, y: C64| {
        let mut m = zero4();
        for (p, q) in [(0, 2), (1, 3)] {
            m[p][p] = x;
            m[q][q] = x;
            m[p][q] = y;
            m[q][p] = y;
        }
        m
    };
    // particle 2 mixes (1,2) and (3,4)
    let imp2 = |x: C64, y: C64| {
        let mut m = zero4();
        for (p, q) in [(0, 1), (2, 3)] {
            m[p][p] = x;
            m[q][q] = x;
            m[p][q] = y;
            m[q][p] = y;
        }
        m
    };
    let s_1_8 = diag4([1.0 / a, one, one, 1.0 / a]);
    let s_2_1 = imp1(-h / (s1 + h), s1 / (s1 + h));
    let s_3_2 = diag4([1.0 / b, one, one, 1.0 / b]);
    let s_4_3 = imp2(-h / (s2 + h), s2 / (s2 + h));
    let s_5_4 = diag4([a, one, one, a]);
    let s_6_5 = imp1(h / (s1 - h), s1 / (s1 - h));
    let s_7_6 = diag4([b, one, one, b]);
    let s_8_7 = imp2(h / (s2 - h), s2 / (s2 - h));
    let links = [s_1_8, s_2_1, s_3_2, s_4_3, s_5_4, s_6_5, s_7_6, s_8_7];

    let r = reversal();
    let mut block_leak = 0.0f64;
    let mut reversal_defect = 0.0f64;
    for l in &links {
        block_leak = block_leak.max(sector_leak(l));
        reversal_defect =
            reversal_defect.max(mat4_max_abs(&mat4_sub(&mat4_mul(&mat4_mul(&r, l), &r), l)));
    }

    // S10 = S(1,2) = S(6,5), S12' = S(7,6), S20 = S(8,7), S12 = S(1,8)
    let (s10, s12p, s20, s12) = (&links[5], &links[6], &links[7], &links[0]);
    let lhs = mat4_mul(&mat4_mul(&mat4_mul(s10, s12p), s20), s12);
    let rhs = mat4_mul(&mat4_mul(&mat4_mul(s12, s20), s12p), s10);
    let diff = mat4_sub(&lhs, &rhs);

    let mut projection_mismatch = 0.0f64;
    for p in [Parity::Even, Parity::Odd] {
        let sec = sector_smatrices(k1, k2, u, v, p)?;
        for (full, small) in [
            (s10, sec.s10),
            (s20, sec.s20),
            (s12, sec.s12),
            (s12p, sec.s12p),
        ] {
            projection_mismatch =
                projection_mismatch.max(mat2_max_abs(&mat2_sub(&project(full, p), &small)));
        }
    }
    Ok(FullSMatrices {
        links,
        block_leak,
        reversal_defect,
        projection_mismatch,
        ybe_even: mat2_max_abs(&project(&diff, Parity::Even)),
        ybe_odd: mat2_max_abs(&project(&diff, Parity::Odd)),
    })
}

/// `S10 S12' S20 S12 - S12 S20 S12' S10` in one sector. In the even sector the product
/// difference is compared with the closed form and a mismatch above `1e-10` relative is an error.
pub fn ybe_residual(k1: C64, k2: C64, u: f64, v: f64, parity: Parity) -> Result<Mat2> {
    let s = sector_smatrices(k1, k2, u, v, parity)?;
    let lhs = mat2_mul(&mat2_mul(&mat2_mul(&s.s10, &s.s12p), &s.s20), &s.s12);
    let rhs = mat2_mul(&mat2_mul(&mat2_mul(&s.s12, &s.s20), &s.s12p), &s.s10);
    let d = mat2_sub(&lhs, &rhs);
    if parity == Parity::Even {
        let cf = ybe_closed_form(k1, k2, u, v)?;
        let gap = mat2_max_abs(&mat2_sub(&d, &cf));
        if gap > 1e-10 * mat2_max_abs(&cf).max(1.0) {
            return Err(Error::NoConvergence(format!(
                "closed form and product disagree by {gap:.3e}"
            )));
        }
    }
    Ok(d)
}

/// Even-sector difference, `-2i U V s1 s2 sigma_y / ((s1 - iV/2)(s2 - iV/2)(s1 - s2 + iU/2)(s1 + s2 - iU/2))`.
pub fn ybe_closed_form(k1: C64, k2: C64, u: f64, v: f64) -> Result<Mat2> {
    let (s1, s2) = (k1.sin(), k2.sin());
    let (hu, hv) = (I * (u / 2.0), I * (v / 2.0));
    let den = (s1 - hv) * (s2 - hv) * (s1 - s2 + hu) * (s1 + s2 - hu);
    check_pole(den, "consistency denominator")?;
    let f = -2.0 * I * u * v * s1 * s2 / den;
    let zero = C64::new(0.0, 0.0);
    // sigma_y = [[0, -i], [i, 0]]
    Ok([[zero, -I * f], [I * f, zero]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpurityTransfer {
    /// Maps `(A_{++}, A_{-+})` on one side of the impurity to the other.
    pub matrix: Mat2,
    /// Largest change of `|A_{++}|^2 - |A_{-+}|^2` over a fixed set of probe amplitudes.
    pub current_defect: f64,
}

pub fn impurity_transfer(k: C64, v: f64) -> Result<ImpurityTransfer> {
    let s = k.sin();
    check_pole(s, "sin k")?;
    let g = I * v / (2.0 * s);
    let matrix = [[1.0 + g, g], [-g, 1.0 - g]];
    let probes = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(0.3, -0.8), C64::new(-1.1, 0.2)],
        [C64::new(0.7, 0.7), C64::new(0.1, -0.5)],
    ];
    let mut current_defect = 0.0f64;
    for p in probes {
        let o = super::mat2_apply(&matrix, &p);
        let before = p[0].norm_sqr() - p[1].norm_sqr();
        let after = o[0].norm_sqr() - o[1].norm_sqr();
        current_defect = current_defect.max((after - before).abs());
    }
    Ok(ImpurityTransfer {
        matrix,
        current_defect,
    })
}

/// Incoming-to-outgoing form of the impurity scattering, unitary for real `k`.
pub fn unitarized_impurity(k: C64, v: f64) -> Result<Mat2> {
    let s = k.sin();
    let h = I * (v / 2.0);
    check_pole(s + h, "sin k + iV/2")?;
    Ok(mat2_scale(&[[s, -h], [-h, s]], 1.0 / (s + h)))
}
