//! Symmetric eigenproblems in double and multiple precision, and parameter sweeps.

#[cfg(feature = "mp")]
mod precise;
mod sweep;

#[cfg(feature = "mp")]
pub use precise::{
    eigh_precise, precise_sector_states, refine_eigenpair, refine_state, JacobiStart, RefinedPair,
};
pub use sweep::{sweep_spectrum, GapKind, GapMinimum, SpectralSweep, SweepConfig, SweepParam};

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::lattice::{sector_hamiltonian, ExactMatrix, LatticeSpec, Parity, WaveFunction};
use crate::{Error, Result};

/// Real symmetric matrix that can be read in double or lifted to higher precision.
pub trait SymSource {
    fn dim(&self) -> usize;
    /// Row-major dense copy.
    fn dense_f64(&self) -> Vec<f64>;
    /// Nonzero entries per row, as doubles.
    fn rows_f64(&self) -> Vec<Vec<(usize, f64)>>;
    #[cfg(feature = "mp")]
    fn rows_mp(&self, prec: u32) -> Vec<Vec<(usize, rug::Float)>>;

    fn to_faer(&self) -> Mat<f64> {
        let n = self.dim();
        let d = self.dense_f64();
        Mat::from_fn(n, n, |i, j| d[i * n + j])
    }
}

impl SymSource for ExactMatrix {
    fn dim(&self) -> usize {
        self.dim
    }
    fn dense_f64(&self) -> Vec<f64> {
        self.to_dense()
    }
    fn rows_f64(&self) -> Vec<Vec<(usize, f64)>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(j, e)| (j, e.eval(self.u, self.v)))
                    .collect()
            })
            .collect()
    }
    #[cfg(feature = "mp")]
    fn rows_mp(&self, prec: u32) -> Vec<Vec<(usize, rug::Float)>> {
        let ctx = crate::mp::EntryContext::new(prec, self.u, self.v);
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, e)| (j, ctx.eval(&e))).collect())
            .collect()
    }
}

/// Dense row-major symmetric matrix of doubles, taken as exact values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseSym {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseSym {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(DenseSym { n, data })
    }
}

impl SymSource for DenseSym {
    fn dim(&self) -> usize {
        self.n
    }
    fn dense_f64(&self) -> Vec<f64> {
        self.data.clone()
    }
    fn rows_f64(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (j, self.data[i * self.n + j]))
                    .filter(|x| x.1 != 0.0)
                    .collect()
            })
            .collect()
    }
    #[cfg(feature = "mp")]
    fn rows_mp(&self, prec: u32) -> Vec<Vec<(usize, rug::Float)>> {
        self.rows_f64()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|(j, x)| (j, rug::Float::with_val(prec, x)))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// `vectors[j]` belongs to `values[j]`.
    pub vectors: Vec<Vec<T>>,
    pub precision_digits: u32,
    /// Largest `|A v - lambda v|` over all pairs.
    pub residual_norm: f64,
}

/// Result of [`eigh`]: double or multiprecision depending on the requested digits.
#[derive(Debug, Clone)]
pub enum Spectrum {
    Double(EigenDecomposition<f64>),
    #[cfg(feature = "mp")]
    Precise(EigenDecomposition<rug::Float>),
}

impl Spectrum {
    pub fn values_f64(&self) -> Vec<f64> {
        match self {
            Spectrum::Double(e) => e.values.clone(),
            #[cfg(feature = "mp")]
            Spectrum::Precise(e) => e.values.iter().map(|x| x.to_f64()).collect(),
        }
    }

    pub fn residual_norm(&self) -> f64 {
        match self {
            Spectrum::Double(e) => e.residual_norm,
            #[cfg(feature = "mp")]
            Spectrum::Precise(e) => e.residual_norm,
        }
    }
}

/// Digits at or below which the double-precision path is used.
pub const DOUBLE_DIGITS: u32 = 17;

pub fn check_symmetric(a: &impl SymSource) -> Result<()> {
    let n = a.dim();
    let d = a.dense_f64();
    let scale = d.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((d[i * n + j] - d[j * n + i]).abs());
        }
    }
    if worst > 1e-12 * scale {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(())
}

/// Full decomposition. Double path up to [`DOUBLE_DIGITS`], Jacobi rotations above.
pub fn eigh(a: &impl SymSource, precision_digits: u32) -> Result<Spectrum> {
    if precision_digits < 15 {
        return Err(Error::InvalidInput(
            "precision_digits must be at least 15".into(),
        ));
    }
    if precision_digits <= DOUBLE_DIGITS {
        return eigh_f64(a).map(Spectrum::Double);
    }
    #[cfg(feature = "mp")]
    {
        eigh_precise(a, precision_digits, JacobiStart::DoubleSeed).map(Spectrum::Precise)
    }
    #[cfg(not(feature = "mp"))]
    {
        Err(Error::Unsupported(
            "built without multiprecision support".into(),
        ))
    }
}

pub fn eigh_f64(a: &impl SymSource) -> Result<EigenDecomposition<f64>> {
    check_symmetric(a)?;
    let m = a.to_faer();
    let n = a.dim();
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
    let au = &m * u;
    let mut residual_norm = 0.0f64;
    let mut vectors = Vec::with_capacity(n);
    for j in 0..n {
        let mut r2 = 0.0;
        for i in 0..n {
            let r = au[(i, j)] - values[j] * u[(i, j)];
            r2 += r * r;
        }
        residual_norm = residual_norm.max(r2.sqrt());
        vectors.push((0..n).map(|i| u[(i, j)]).collect());
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        precision_digits: 15,
        residual_norm,
    })
}

pub fn eigenvalues_f64(a: &impl SymSource) -> Result<Vec<f64>> {
    a.to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("{e:?}")))
}

/// All eigenstates of one parity sector in double precision, ascending in energy.
pub fn sector_states(spec: &LatticeSpec, parity: Parity) -> Result<Vec<WaveFunction>> {
    let (basis, h, emb) = sector_hamiltonian(spec, parity)?;
    let e = eigh_f64(&h)?;
    Ok(e.values
        .iter()
        .zip(&e.vectors)
        .map(|(&val, vec)| {
            let pair = emb.embed(vec);
            WaveFunction::from_pair_coefficients(&basis, &pair, val, parity, 15)
        })
        .collect())
}

/// Spectrum of the full pair-basis Hamiltonian.
pub fn pair_spectrum(spec: &LatticeSpec) -> Result<Vec<f64>> {
    let basis = crate::lattice::build_symmetric_basis(spec)?;
    eigenvalues_f64(&crate::lattice::build_hamiltonian(&basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Bc;

    #[test]
    fn exchange_matrix() {
        let a = DenseSym::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = eigh_f64(&a).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let v = &e.vectors[0];
        assert!((v[0] + v[1]).abs() < 1e-15 && (v[0].abs() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric() {
        let a = DenseSym::new(2, vec![0.0, 1.0, 1.5, 0.0]).unwrap();
        assert!(matches!(eigh_f64(&a), Err(Error::NotSymmetric(_))));
        assert!(eigh(&a, 40).is_err());
    }

    #[test]
    fn free_periodic_m3() {
        let s = LatticeSpec::new(3, 0.0, 0.0, Bc::Periodic).unwrap();
        let e = pair_spectrum(&s).unwrap();
        let want = [-4.0, -1.0, -1.0, 2.0, 2.0, 2.0];
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn free_open_m5_pair_sums() {
        let s = LatticeSpec::new(5, 0.0, 0.0, Bc::Open).unwrap();
        let e = pair_spectrum(&s).unwrap();
        let single: Vec<f64> = (1..=5)
            .map(|n| -2.0 * (n as f64 * std::f64::consts::PI / 6.0).cos())
            .collect();
        let mut want = vec![];
        for i in 0..5 {
            for j in i..5 {
                want.push(single[i] + single[j]);
            }
        }
        want.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sector_union_matches_full_and_trace() {
        let s = LatticeSpec::new(9, 2.0, -2.0, Bc::Periodic).unwrap();
        let mut both = vec![];
        for p in [Parity::Odd, Parity::Even] {
            let (_, h, _) = sector_hamiltonian(&s, p).unwrap();
            let e = eigh_f64(&h).unwrap();
            let tr: f64 = e.values.iter().sum();
            assert!((tr - h.trace()).abs() < 1e-10);
            assert!(e.residual_norm < 1e-12);
            both.extend(e.values);
        }
        both.sort_by(f64::total_cmp);
        let full = pair_spectrum(&s).unwrap();
        for (a, b) in both.iter().zip(&full) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sector_states_are_normalized_with_parity() {
        let s = LatticeSpec::new(7, 1.0, -0.5, Bc::Open).unwrap();
        for p in [Parity::Odd, Parity::Even] {
            for w in sector_states(&s, p).unwrap() {
                assert!((w.norm_sqr() - 1.0).abs() < 1e-12);
                for x1 in -3..=3 {
                    for x2 in -3..=3 {
                        assert_eq!(w.psi(-x1, -x2), p.sign() * w.psi(x1, x2));
                    }
                }
            }
        }
    }
}
