use bhlab_core::bethe::*;
use bhlab_core::{Parity, C64};
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn transfer_matrices_commute_and_are_unimodular(
        k1 in 0.02f64..3.12, k2 in 0.02f64..3.12, u in -5.0f64..5.0, v in -5.0f64..5.0
    ) {
        let t = transfer_matrices(c(k1), c(k2), u, v).unwrap();
        prop_assert!(t.commutator() < 1e-12);
        prop_assert!(t.closed_form_mismatch() < 1e-12);
        prop_assert!(t.identity_defect() < 1e-11);
        for l in t.lambda1.iter().chain(&t.lambda2) {
            prop_assert!((l.norm() - 1.0).abs() < 1e-12);
        }
        let swapped = lambda1(c(k2), c(k1), u, v, -1.0);
        prop_assert!((swapped - lambda2(c(k1), c(k2), u, v, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn phases_unimodular(k1 in 0.0f64..3.14, k2 in 0.0f64..3.14, u in -5.0f64..5.0) {
        prop_assume!(u.abs() > 1e-6);
        let p = scattering_phases(c(k1), c(k2), u).unwrap();
        prop_assert!((p.alpha.norm() - 1.0).abs() < 1e-14);
        prop_assert!((p.beta.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_sector_consistency_holds(
        k1 in 0.02f64..3.12, k2 in 0.02f64..3.12, u in -5.0f64..5.0, v in -5.0f64..5.0
    ) {
        let d = ybe_residual(c(k1), c(k2), u, v, Parity::Odd).unwrap();
        prop_assert!(mat2_max_abs(&d) < 1e-13);
        let s = sector_smatrices(c(k1), c(k2), u, v, Parity::Even).unwrap();
        prop_assert!(s.max_unitarity_error() < 1e-13);
    }

    #[test]
    fn impurity_current_conserved(k in 0.05f64..3.1, v in -4.0f64..4.0) {
        prop_assert!(impurity_transfer(c(k), v).unwrap().current_defect < 1e-12);
    }
}
