mod common;

use bhlab_core::field::Field;
use bhlab_core::prony::*;
use rand::SeedableRng;

#[test]
fn exponents_recovered_and_noise_rejected() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let syn = common::synthetic(&mut rng, 12, 40);
        let rep = sequence_report(&syn.seq, None);
        assert!(rep.is_bethe, "{rep:?}");
        let best = prony_coefficients(&syn.seq, 0).unwrap();
        let rec = momenta_from_r(&best.r).unwrap();
        assert!(rec.disagreement < 1e-10);
        for z in syn.exponents {
            assert!(rec.paired.iter().any(|p| (p.to_c64() - z).norm() < 1e-10));
            assert!(rec.transfer.iter().any(|p| (p.to_c64() - z).norm() < 1e-10));
        }
        assert!(recurrence_residual(&syn.seq.values, &best.r) < 1e-30);
        let noisy = common::add_noise(&syn.seq, 1e-8, &mut rng);
        let bad = sequence_report(&noisy, None);
        assert!(
            !bad.is_bethe,
            "noisy sequence passed: {:e} {:e}",
            bad.r0_deviation, bad.r13_deviation
        );
    }
}

mod props {
    use bhlab_core::prony::*;
    use bhlab_core::C64;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn paired_exponentials_have_bethe_coefficients(
            k1 in 0.2f64..2.9,
            dk in 0.3f64..2.5,
            w in proptest::array::uniform4((-1.0f64..1.0, -1.0f64..1.0)),
        ) {
            let k2 = (k1 + dk) % 3.0 + 0.1;
            prop_assume!((k1 - k2).abs() > 0.2 && w.iter().all(|&(a, b)| a.abs() + b.abs() > 0.1));
            let i = C64::new(0.0, 1.0);
            let zs = [(i * k1).exp(), (-i * k1).exp(), (i * k2).exp(), (-i * k2).exp()];
            let values: Vec<C64> = (0..12)
                .map(|n| zs.iter().zip(&w).map(|(z, &(a, b))| C64::new(a, b) * z.powu(n)).sum())
                .collect();
            let seq = PronySequence { values, precision_digits: 15 };
            let s = prony_coefficients(&seq, 0).unwrap();
            prop_assert!((s.r[0] + 1.0).norm() < 1e-6);
            prop_assert!((s.r[1] - s.r[3]).norm() < 1e-6);
            let mu = mu_from_r(s.r[1], s.r[2]);
            let want = [2.0 * k1.cos(), 2.0 * k2.cos()];
            for t in want {
                prop_assert!(mu.iter().any(|m| (m - t).norm() < 1e-6), "{mu:?} {want:?}");
            }
        }
    }
}
