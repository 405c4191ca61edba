use bhlab_wasm::{momentum_map, spectrum_sweep, ybe_map};

#[test]
fn sweep_shapes() {
    let s = spectrum_sweep(9, 1.0, true, true, -2.0, 0.0, 21).unwrap();
    assert_eq!(s.dim(), 20);
    assert_eq!(s.grid().len(), 21);
    let lv = s.levels();
    assert_eq!(lv.len(), 21 * 20);
    for row in lv.chunks(20) {
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }
    assert!(spectrum_sweep(8, 1.0, true, true, -2.0, 0.0, 21).is_err());
    assert!(spectrum_sweep(101, 1.0, true, true, -2.0, 0.0, 21).is_err());
}

#[test]
fn ybe_odd_vanishes() {
    let y = ybe_map(1.2, -0.8, 12).unwrap();
    assert_eq!(y.odd().len(), 144);
    assert!(y.odd_max() < 1e-13);
    assert!(y.even().iter().filter(|x| x.is_finite()).any(|&x| x > 1e-3));
}

#[test]
fn momentum_weights_normalised() {
    let mv = momentum_map(15, -1.0, -1.0, true, true, -4.0).unwrap();
    assert_eq!(mv.n(), 8);
    let w = mv.weight();
    assert_eq!(w.len(), 64);
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(mv.top8() > 0.5);
    assert!(!mv.class().is_empty());
}
