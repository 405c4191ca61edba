//! Two-boson Hilbert space on an odd chain with a centered impurity.
//!
//! Sites run over `-half..=half` with `half = (m - 1) / 2`. The pair basis holds
//! `(x1, x2)` with `x1 <= x2`; a coefficient `c` on a pair with distinct sites
//! corresponds to the first-quantized amplitude `c / sqrt 2` on both orderings.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Odd => -1.0,
            Parity::Even => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub m: usize,
    pub u: f64,
    pub v: f64,
    pub bc: Bc,
}

impl LatticeSpec {
    pub fn new(m: usize, u: f64, v: f64, bc: Bc) -> Result<Self> {
        let s = LatticeSpec { m, u, v, bc };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 3 {
            return Err(Error::InvalidLattice(format!(
                "need at least 3 sites, got {}",
                self.m
            )));
        }
        if self.m % 2 == 0 {
            return Err(Error::InvalidLattice(format!(
                "lattice size must be odd so that a center site exists, got {}",
                self.m
            )));
        }
        if !self.u.is_finite() || !self.v.is_finite() {
            return Err(Error::InvalidLattice("U and V must be finite".into()));
        }
        Ok(())
    }

    /// Largest site coordinate.
    pub fn half(&self) -> i32 {
        ((self.m - 1) / 2) as i32
    }

    pub fn odd_dim(&self) -> usize {
        (self.m * self.m - 1) / 4
    }

    pub fn even_dim(&self) -> usize {
        (self.m + 1) * (self.m + 1) / 4
    }

    pub fn pair_dim(&self) -> usize {
        self.m * (self.m + 1) / 2
    }

    pub fn sector_dim(&self, p: Parity) -> usize {
        match p {
            Parity::Odd => self.odd_dim(),
            Parity::Even => self.even_dim(),
        }
    }

    /// Neighbor of `x` in direction `d` (±1), `None` past an open edge.
    pub fn hop(&self, x: i32, d: i32) -> Option<i32> {
        let h = self.half();
        let y = x + d;
        if (-h..=h).contains(&y) {
            return Some(y);
        }
        match self.bc {
            Bc::Open => None,
            Bc::Periodic => Some((y + h).rem_euclid(self.m as i32) - h),
        }
    }
}

/// Exact number `a + b sqrt 2` with dyadic `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Surd {
    pub a: f64,
    pub b: f64,
}

impl Surd {
    pub const ZERO: Surd = Surd { a: 0.0, b: 0.0 };
    pub const ONE: Surd = Surd { a: 1.0, b: 0.0 };
    /// `1 / sqrt 2`
    pub const INV_SQRT2: Surd = Surd { a: 0.0, b: 0.5 };

    pub fn int(a: f64) -> Self {
        Surd { a, b: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.a + self.b * SQRT_2
    }

    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        Surd {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        Surd {
            a: self.a * o.a + 2.0 * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

/// Matrix element `hop + u * U + v * V` with exact coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Entry {
    pub hop: Surd,
    pub u: Surd,
    pub v: Surd,
}

impl Entry {
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.hop.value() + self.u.value() * u + self.v.value() * v
    }

    pub fn is_zero(&self) -> bool {
        self.hop.is_zero() && self.u.is_zero() && self.v.is_zero()
    }

    fn scale(self, s: Surd) -> Entry {
        Entry {
            hop: self.hop * s,
            u: self.u * s,
            v: self.v * s,
        }
    }
}

impl Add for Entry {
    type Output = Entry;
    fn add(self, o: Entry) -> Entry {
        Entry {
            hop: self.hop + o.hop,
            u: self.u + o.u,
            v: self.v + o.v,
        }
    }
}

/// Sparse symmetric matrix of exact entries, rows sorted by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactMatrix {
    pub dim: usize,
    pub u: f64,
    pub v: f64,
    pub rows: Vec<Vec<(usize, Entry)>>,
}

impl ExactMatrix {
    fn from_maps(u: f64, v: f64, maps: Vec<BTreeMap<usize, Entry>>) -> Self {
        let rows = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, e)| !e.is_zero()).collect())
            .collect::<Vec<_>>();
        ExactMatrix {
            dim: rows.len(),
            u,
            v,
            rows,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Entry {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(p) => self.rows[i][p].1,
            Err(_) => Entry::default(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, e) in row {
                out[i * n + j] = e.eval(self.u, self.v);
            }
        }
        out
    }

    pub fn to_faer(&self) -> faer::Mat<f64> {
        let d = self.to_dense();
        let n = self.dim;
        faer::Mat::from_fn(n, n, |i, j| d[i * n + j])
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(j, e)| e.eval(self.u, self.v) * x[j])
                    .sum()
            })
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.get(i, i).eval(self.u, self.v))
            .sum()
    }
}

/// Pair basis with parity bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorBasis {
    pub spec: LatticeSpec,
    /// Pairs `(x1, x2)`, `x1 <= x2`, in lexicographic order.
    pub states: Vec<(i32, i32)>,
    /// Index of the parity image of each state.
    pub partner: Vec<usize>,
    /// Odd sector: `(s, Ps)` with `s < Ps`, vector `(e_s - e_Ps) / sqrt 2`.
    pub odd: Vec<(usize, usize)>,
    /// Even sector: pairs as above with a plus sign, or fixed points `(s, s)`.
    pub even: Vec<(usize, usize)>,
}

pub fn parity_image((x1, x2): (i32, i32)) -> (i32, i32) {
    (-x2, -x1)
}

impl SectorBasis {
    pub fn index(&self, x1: i32, x2: i32) -> usize {
        pair_index(&self.spec, x1, x2)
    }

    pub fn sector(&self, p: Parity) -> &[(usize, usize)] {
        match p {
            Parity::Odd => &self.odd,
            Parity::Even => &self.even,
        }
    }

    pub fn parity_label(&self, i: usize) -> Option<Parity> {
        // fixed points carry a definite (even) label; other states mix both sectors
        (self.partner[i] == i).then_some(Parity::Even)
    }
}

pub fn build_symmetric_basis(spec: &LatticeSpec) -> Result<SectorBasis> {
    spec.validate()?;
    let h = spec.half();
    let states: Vec<(i32, i32)> = (-h..=h)
        .flat_map(|a| (a..=h).map(move |b| (a, b)))
        .collect();
    let mut basis = SectorBasis {
        spec: *spec,
        states,
        partner: vec![],
        odd: vec![],
        even: vec![],
    };
    let partner: Vec<usize> = basis
        .states
        .iter()
        .map(|&s| {
            let (a, b) = parity_image(s);
            basis.index(a, b)
        })
        .collect();
    for (i, &p) in partner.iter().enumerate() {
        if i < p {
            basis.odd.push((i, p));
            basis.even.push((i, p));
        } else if i == p {
            basis.even.push((i, i));
        }
    }
    basis.partner = partner;
    Ok(basis)
}

fn pair_weight(x1: i32, x2: i32) -> Surd {
    if x1 == x2 {
        Surd::ONE
    } else {
        Surd::INV_SQRT2
    }
}

/// Pair-basis Hamiltonian: hopping, on-site interaction and the impurity at site 0.
pub fn build_hamiltonian(basis: &SectorBasis) -> ExactMatrix {
    let spec = basis.spec;
    let n = basis.states.len();
    let mut maps: Vec<BTreeMap<usize, Entry>> = vec![BTreeMap::new(); n];
    for (col, &(y1, y2)) in basis.states.iter().enumerate() {
        let wb = pair_weight(y1, y2);
        // each ordering of the source pair, one particle hops
        let orders: &[(i32, i32)] = if y1 == y2 {
            &[(y1, y2)]
        } else {
            &[(y1, y2), (y2, y1)]
        };
        for &(p1, p2) in orders {
            for d in [-1, 1] {
                if let Some(z) = spec.hop(p1, d) {
                    let row = basis.index(z, p2);
                    let (a, b) = basis.states[row];
                    let cur = maps[row].entry(col).or_default();
                    *cur = *cur
                        + Entry {
                            hop: -(wb * pair_weight(a, b)),
                            ..Default::default()
                        };
                }
                if let Some(z) = spec.hop(p2, d) {
                    let row = basis.index(p1, z);
                    let (a, b) = basis.states[row];
                    let cur = maps[row].entry(col).or_default();
                    *cur = *cur
                        + Entry {
                            hop: -(wb * pair_weight(a, b)),
                            ..Default::default()
                        };
                }
            }
        }
        let on_site = if y1 == y2 { 1.0 } else { 0.0 };
        let imp = (y1 == 0) as i32 as f64 + (y2 == 0) as i32 as f64;
        let e = maps[col].entry(col).or_default();
        *e = *e
            + Entry {
                u: Surd::int(on_site),
                v: Surd::int(imp),
                ..Default::default()
            };
    }
    ExactMatrix::from_maps(spec.u, spec.v, maps)
}

/// Coefficients of sector state `k` on the pair basis.
fn sector_vector(pair: (usize, usize), parity: Parity) -> Vec<(usize, Surd)> {
    let (s, p) = pair;
    if s == p {
        vec![(s, Surd::ONE)]
    } else {
        let sign = parity.sign();
        vec![
            (s, Surd::INV_SQRT2),
            (
                p,
                Surd {
                    a: 0.0,
                    b: 0.5 * sign,
                },
            ),
        ]
    }
}

/// Maps sector vectors back to the pair basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub parity: Parity,
    pub pair_dim: usize,
    pub columns: Vec<Vec<(usize, Surd)>>,
}

impl Embedding {
    pub fn embed(&self, c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.pair_dim];
        for (k, col) in self.columns.iter().enumerate() {
            for &(i, w) in col {
                out[i] += w.value() * c[k];
            }
        }
        out
    }
}

pub fn project_sector(
    h: &ExactMatrix,
    basis: &SectorBasis,
    parity: Parity,
) -> (ExactMatrix, Embedding) {
    let sec = basis.sector(parity);
    let mut slot = vec![usize::MAX; basis.states.len()];
    let columns: Vec<Vec<(usize, Surd)>> = sec
        .iter()
        .map(|&pair| sector_vector(pair, parity))
        .collect();
    for (k, col) in columns.iter().enumerate() {
        for &(i, _) in col {
            slot[i] = k;
        }
    }
    let mut coeff = vec![Surd::ZERO; basis.states.len()];
    for col in &columns {
        for &(i, w) in col {
            coeff[i] = w;
        }
    }
    let mut maps: Vec<BTreeMap<usize, Entry>> = vec![BTreeMap::new(); sec.len()];
    for (k, col) in columns.iter().enumerate() {
        for &(i, wi) in col {
            for &(j, e) in &h.rows[i] {
                let l = slot[j];
                if l == usize::MAX {
                    continue;
                }
                let add = e.scale(wi * coeff[j]);
                let cur = maps[k].entry(l).or_default();
                *cur = *cur + add;
            }
        }
    }
    let m = ExactMatrix::from_maps(h.u, h.v, maps);
    (
        m,
        Embedding {
            parity,
            pair_dim: basis.states.len(),
            columns,
        },
    )
}

/// Convenience: sector matrix straight from a spec.
pub fn sector_hamiltonian(
    spec: &LatticeSpec,
    parity: Parity,
) -> Result<(SectorBasis, ExactMatrix, Embedding)> {
    let basis = build_symmetric_basis(spec)?;
    let h = build_hamiltonian(&basis);
    let (s, e) = project_sector(&h, &basis, parity);
    Ok((basis, s, e))
}

/// Eigenstate in first-quantized form over the pair basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFunction {
    pub spec: LatticeSpec,
    /// `psi(x1, x2)` for each basis pair `x1 <= x2`.
    pub amplitudes: Vec<f64>,
    pub energy: f64,
    pub parity: Parity,
    pub precision_digits: u32,
}

impl WaveFunction {
    /// Builds from pair-basis coefficients.
    pub fn from_pair_coefficients(
        basis: &SectorBasis,
        coeffs: &[f64],
        energy: f64,
        parity: Parity,
        precision_digits: u32,
    ) -> Self {
        let amplitudes = basis
            .states
            .iter()
            .zip(coeffs)
            .map(|(&(a, b), &c)| if a == b { c } else { c / SQRT_2 })
            .collect();
        WaveFunction {
            spec: basis.spec,
            amplitudes,
            energy,
            parity,
            precision_digits,
        }
    }

    pub fn psi(&self, x1: i32, x2: i32) -> f64 {
        self.amplitudes[pair_index(&self.spec, x1, x2)]
    }

    /// Norm with both orderings of distinct pairs counted.
    pub fn norm_sqr(&self) -> f64 {
        let h = self.spec.half();
        let mut k = 0;
        let mut acc = 0.0;
        for a in -h..=h {
            for b in a..=h {
                let p = self.amplitudes[k];
                acc += if a == b { p * p } else { 2.0 * p * p };
                k += 1;
            }
        }
        acc
    }
}

/// Eigenstate carried at multiple precision.
#[cfg(feature = "mp")]
#[derive(Debug, Clone, PartialEq)]
pub struct PreciseWaveFunction {
    pub spec: LatticeSpec,
    pub amplitudes: Vec<rug::Float>,
    pub energy: rug::Float,
    pub parity: Parity,
    pub precision_digits: u32,
}

#[cfg(feature = "mp")]
impl PreciseWaveFunction {
    /// Builds from sector coefficients through the embedding.
    pub fn from_sector(
        basis: &SectorBasis,
        emb: &Embedding,
        coeffs: &[rug::Float],
        energy: rug::Float,
        precision_digits: u32,
    ) -> Self {
        let prec = energy.prec();
        let ctx = crate::mp::EntryContext::new(prec, 0.0, 0.0);
        let mut pair = vec![rug::Float::new(prec); emb.pair_dim];
        for (k, col) in emb.columns.iter().enumerate() {
            for &(i, w) in col {
                pair[i] += ctx.surd(w) * &coeffs[k];
            }
        }
        for (c, &(a, b)) in pair.iter_mut().zip(&basis.states) {
            if a != b {
                *c /= &ctx.sqrt2;
            }
        }
        PreciseWaveFunction {
            spec: basis.spec,
            amplitudes: pair,
            energy,
            parity: emb.parity,
            precision_digits,
        }
    }

    pub fn psi(&self, x1: i32, x2: i32) -> &rug::Float {
        &self.amplitudes[pair_index(&self.spec, x1, x2)]
    }

    pub fn to_double(&self) -> WaveFunction {
        WaveFunction {
            spec: self.spec,
            amplitudes: self.amplitudes.iter().map(|x| x.to_f64()).collect(),
            energy: self.energy.to_f64(),
            parity: self.parity,
            precision_digits: 15,
        }
    }
}

/// Index of `(x1, x2)` in the pair ordering, either order accepted.
pub fn pair_index(spec: &LatticeSpec, x1: i32, x2: i32) -> usize {
    let (a, b) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    let h = spec.half();
    let m = spec.m as i32;
    // row r of the upper triangle holds m - r entries
    let r = a + h;
    (r * m - r * (r - 1) / 2 + (b - a)) as usize
}

/// Wraps any integer coordinate onto the ring.
pub fn wrap(spec: &LatticeSpec, x: i32) -> i32 {
    let h = spec.half();
    (x + h).rem_euclid(spec.m as i32) - h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize, u: f64, v: f64, bc: Bc) -> LatticeSpec {
        LatticeSpec::new(m, u, v, bc).unwrap()
    }

    #[test]
    fn rejects_even_sizes() {
        assert!(LatticeSpec::new(4, 0.0, 0.0, Bc::Open).is_err());
        assert!(LatticeSpec::new(1, 0.0, 0.0, Bc::Open).is_err());
    }

    #[test]
    fn counts() {
        let b = build_symmetric_basis(&spec(3, 0.0, 0.0, Bc::Open)).unwrap();
        assert_eq!((b.states.len(), b.odd.len(), b.even.len()), (6, 2, 4));
        let b = build_symmetric_basis(&spec(31, 0.0, 0.0, Bc::Open)).unwrap();
        assert_eq!((b.states.len(), b.odd.len(), b.even.len()), (496, 240, 256));
    }

    #[test]
    fn m55_odd_by_enumeration() {
        let h = 27;
        let mut odd = 0;
        for a in -h..=h {
            for b in a..=h {
                let (c, d) = (-b, -a);
                if (c, d) > (a, b) {
                    odd += 1;
                }
            }
        }
        assert_eq!(odd, 756);
        let b = build_symmetric_basis(&spec(55, 0.0, 0.0, Bc::Open)).unwrap();
        assert_eq!(b.odd.len(), odd);
    }

    #[test]
    fn index_roundtrip_and_involution() {
        let b = build_symmetric_basis(&spec(9, 0.0, 0.0, Bc::Open)).unwrap();
        for (i, &(x1, x2)) in b.states.iter().enumerate() {
            assert_eq!(b.index(x1, x2), i);
            assert_eq!(b.index(x2, x1), i);
            assert_eq!(b.partner[b.partner[i]], i);
        }
    }

    #[test]
    fn periodic_wrap_single_bond() {
        let s = spec(5, 0.0, 0.0, Bc::Periodic);
        assert_eq!(s.hop(2, 1), Some(-2));
        assert_eq!(s.hop(-2, -1), Some(2));
        let o = spec(5, 0.0, 0.0, Bc::Open);
        assert_eq!(o.hop(2, 1), None);
    }

    #[test]
    fn doubly_occupied_links_carry_root_two() {
        let b = build_symmetric_basis(&spec(5, 0.0, 0.0, Bc::Open)).unwrap();
        let h = build_hamiltonian(&b);
        let e = h.get(b.index(0, 0), b.index(0, 1));
        assert_eq!(e.hop, Surd { a: 0.0, b: -1.0 });
        let e = h.get(b.index(0, 1), b.index(0, 2));
        assert_eq!(e.hop, Surd::int(-1.0));
    }

    #[test]
    fn exact_symmetry_and_parity_commutation() {
        for bc in [Bc::Open, Bc::Periodic] {
            let b = build_symmetric_basis(&spec(7, 1.3, -0.7, bc)).unwrap();
            let h = build_hamiltonian(&b);
            for i in 0..h.dim {
                for &(j, e) in &h.rows[i] {
                    assert_eq!(h.get(j, i), e);
                    assert_eq!(h.get(b.partner[i], b.partner[j]), e);
                }
            }
        }
    }

    #[test]
    fn sector_blocks_have_expected_size() {
        let (_, m, _) = sector_hamiltonian(&spec(3, 1.0, 2.0, Bc::Open), Parity::Odd).unwrap();
        assert_eq!(m.dim, 2);
    }

    #[test]
    fn normalization_convention() {
        let b = build_symmetric_basis(&spec(5, 0.0, 0.0, Bc::Open)).unwrap();
        let n = b.states.len();
        let c: Vec<f64> = (0..n)
            .map(|i| 1.0 / (n as f64).sqrt() * if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let w = WaveFunction::from_pair_coefficients(&b, &c, 0.0, Parity::Even, 15);
        assert!((w.norm_sqr() - 1.0).abs() < 1e-14);
    }
}
