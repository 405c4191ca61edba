use bhlab_core::bethe::*;
use bhlab_core::lattice::{Bc, LatticeSpec};

fn ring(m: usize, u: f64, v: f64) -> LatticeSpec {
    LatticeSpec::new(m, u, v, Bc::Periodic).unwrap()
}

#[test]
fn m11_counts_and_energies() {
    for (u, v) in [(3.0, -2.0), (3.0, -1.5), (-2.0, 1.0)] {
        let r = completeness_report(&ring(11, u, v), 1e-9).unwrap();
        assert_eq!(
            (r.band1, r.band2, r.band3, r.bound),
            (20, 5, 5, 0),
            "U={u} V={v}"
        );
        assert!(r.passed(), "{:?}", r.unclaimed_levels);
        for m in &r.matches {
            assert!(m.root.residual < 1e-10);
        }
    }
}

#[test]
fn impurity_band_near_asymptote() {
    let sol = solve_band2(&ring(11, 3.0, -1.5)).unwrap();
    assert_eq!(sol.roots.len(), 5);
    for r in &sol.roots {
        assert!((r.nu.unwrap() - 0.75f64.asinh()).abs() < 0.05);
        assert_eq!(r.branch, Branch::Plus);
        assert!(r.k1.re == 0.0);
    }
}

#[test]
fn string_band_attractive() {
    let sol = solve_band3(&ring(11, -2.0, 1.0)).unwrap();
    assert_eq!(sol.roots.len(), 5);
    for r in &sol.roots {
        assert_eq!(r.branch, Branch::Plus);
        assert_eq!(r.k2, r.k1.conj());
        let (k0, nu) = (r.k0.unwrap(), r.nu.unwrap());
        assert!((k0.cos() * nu.sinh() - 0.5).abs() < 0.05);
        let e = energy_of(r.k1, r.k2);
        assert!(e.im.abs() < 1e-12 && (e.re - r.energy).abs() < 1e-12);
    }
}

#[test]
fn bound_state_presence() {
    assert!(find_bound_state(&ring(11, -2.0, 1.0)).unwrap().is_none());
    assert!(find_bound_state(&ring(11, 2.0, 2.0)).unwrap().is_none());
    let s = ring(31, -1.0, -2.0);
    let b = find_bound_state(&s).unwrap().expect("bound state");
    let levels = bhlab_core::diag::sector_states(&s, bhlab_core::Parity::Odd).unwrap();
    // sits inside the scattering continuum, not below it
    assert!(b.energy > levels[0].energy + 1.0);
    assert!(levels.iter().any(|w| (w.energy - b.energy).abs() < 1e-9));
    assert!(b.k1.sin().re.abs() < 1e-12 && b.k2.sin().re.abs() < 1e-12);
}

#[test]
fn free_limit_totals() {
    let r = completeness_report(&ring(11, 0.0, 0.0), 1e-9).unwrap();
    assert_eq!(r.total(), 30);
    assert!(r.passed());
}
