#![allow(dead_code)]

use bhlab_core::field::{ComplexField, Field};
use bhlab_core::mp::{bits, MpComplex};
use bhlab_core::prony::PronySequence;
use bhlab_core::C64;
use rand::Rng;

/// Random four-exponential line with exponents `exp(+-i k1)`, `exp(+-i k2)`.
pub struct Synthetic {
    pub momenta: [f64; 2],
    pub exponents: [C64; 4],
    pub exact: Vec<MpComplex>,
    pub seq: PronySequence<MpComplex>,
}

pub fn synthetic(rng: &mut impl Rng, len: usize, digits: u32) -> Synthetic {
    let prec = bits(digits);
    let (k1, k2) = loop {
        let a: f64 = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        let b: f64 = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        if (a - b).abs() > 0.05 {
            break (a, b);
        }
    };
    let i = C64::new(0.0, 1.0);
    let exponents = [
        (i * k1).exp(),
        (-i * k1).exp(),
        (i * k2).exp(),
        (-i * k2).exp(),
    ];
    let zs: Vec<MpComplex> = exponents
        .iter()
        .map(|&z| {
            // exact unimodular value at full precision
            let theta = rug::Float::with_val(prec, z.im.atan2(z.re));
            MpComplex::cis(&theta)
        })
        .collect();
    let ws: Vec<MpComplex> = (0..4)
        .map(|_| {
            MpComplex::from_c64(
                prec,
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    let mut pows: Vec<MpComplex> = ws.clone();
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        let mut acc = ws[0].zero_like();
        for p in &pows {
            acc = acc.add(p);
        }
        values.push(acc);
        for (p, z) in pows.iter_mut().zip(&zs) {
            *p = p.mul(z);
        }
    }
    let exponents = [
        zs[0].to_c64(),
        zs[1].to_c64(),
        zs[2].to_c64(),
        zs[3].to_c64(),
    ];
    Synthetic {
        momenta: [k1, k2],
        exponents,
        exact: zs,
        seq: PronySequence {
            values,
            precision_digits: digits,
        },
    }
}

/// Multiplies every sample by `1 + eps * xi` with `xi` uniform in `[-1, 1]`.
pub fn add_noise(
    seq: &PronySequence<MpComplex>,
    eps: f64,
    rng: &mut impl Rng,
) -> PronySequence<MpComplex> {
    let values = seq
        .values
        .iter()
        .map(|g| {
            let f = g.lift_c(C64::new(
                1.0 + eps * rng.gen_range(-1.0..1.0),
                eps * rng.gen_range(-1.0..1.0),
            ));
            g.mul(&f)
        })
        .collect();
    PronySequence {
        values,
        precision_digits: seq.precision_digits,
    }
}

/// Two-boson spectrum built in the occupation-number basis, independent of the pair basis.
pub fn fock_spectrum(m: usize, u: f64, v: f64, periodic: bool) -> Vec<f64> {
    use bhlab_core::diag::{eigenvalues_f64, DenseSym};
    let mut states: Vec<Vec<u8>> = Vec::new();
    for i in 0..m {
        for j in i..m {
            let mut n = vec![0u8; m];
            n[i] += 1;
            n[j] += 1;
            states.push(n);
        }
    }
    let index = |n: &[u8]| states.iter().position(|s| s == n).unwrap();
    let dim = states.len();
    let centre = m / 2;
    let mut h = vec![0.0; dim * dim];
    let mut bonds: Vec<(usize, usize)> = (0..m - 1).map(|i| (i, i + 1)).collect();
    if periodic && m > 2 {
        bonds.push((m - 1, 0));
    }
    for (col, n) in states.iter().enumerate() {
        let diag: f64 = n
            .iter()
            .map(|&k| 0.5 * u * (k as f64) * (k as f64 - 1.0))
            .sum::<f64>()
            + v * n[centre] as f64;
        h[col * dim + col] += diag;
        for &(a, b) in &bonds {
            for (to, from) in [(a, b), (b, a)] {
                if n[from] == 0 {
                    continue;
                }
                let amp = ((n[from] as f64) * (n[to] as f64 + 1.0)).sqrt();
                let mut out = n.clone();
                out[from] -= 1;
                out[to] += 1;
                h[index(&out) * dim + col] -= amp;
            }
        }
    }
    let mut e = eigenvalues_f64(&DenseSym::new(dim, h).unwrap()).unwrap();
    e.sort_by(f64::total_cmp);
    e
}
