use std::f64::consts::PI;

use gp_perturb::series::SeriesState;
use gp_perturb::spectral::{
    hermite_spectrum, well_spectrum, DEFAULT_OSCILLATOR_HALF_WIDTH, DEFAULT_OSCILLATOR_N2,
    DEFAULT_OSCILLATOR_NODES, DEFAULT_WELL_N2,
};
use gp_perturb::{DoubleDouble, Real};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn well_energy_coefficients_closed_forms() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 6).unwrap();
    let expect = [
        0.25,
        3.0 / (4.0 * PI),
        -3.0 / (32.0 * PI.powi(2)),
        15.0 / (256.0 * PI.powi(3)),
        -69.0 / (2048.0 * PI.powi(4)),
        75.0 / (4096.0 * PI.powi(5)),
        -1257.0 / (131072.0 * PI.powi(6)),
    ];
    for (n, (&got, &want)) in s.e().iter().zip(&expect).enumerate() {
        assert!(rel(got, want) < 1e-12, "e_{n}: {got} vs {want}");
    }
}

#[test]
fn well_wavefunction_coefficients_closed_forms() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 6).unwrap();
    // q_j = cos(j x / 2) / sqrt(pi), so a cos(j x/2) / pi^{k+1/2} has coefficient a / pi^k
    let listed: [(f64, i32, &[f64]); 6] = [
        (-8.0, 1, &[1.0]),
        (64.0, 2, &[3.0, 1.0]),
        (-512.0, 3, &[9.0, 5.0, 1.0]),
        (4096.0, 4, &[27.0, 20.0, 7.0, 1.0]),
        (-32768.0, 5, &[81.0, 75.0, 35.0, 9.0, 1.0]),
        (262144.0, 6, &[243.0, 275.0, 154.0, 54.0, 11.0, 1.0]),
    ];
    for (n, (den, pow, nums)) in listed.iter().enumerate() {
        let coeffs = s.phi(n + 1).coeffs();
        for (j, &c) in coeffs.iter().enumerate() {
            let mode = j + 1;
            let want = if mode >= 3 && mode % 2 == 1 && (mode - 3) / 2 < nums.len() {
                nums[(mode - 3) / 2] / (den * PI.powi(*pow))
            } else {
                0.0
            };
            assert!((c - want).abs() < 1e-12, "phi_{} mode {mode}: {c} vs {want}", n + 1);
        }
    }
}

#[test]
fn well_signs_alternate() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 6).unwrap();
    for n in 1..=6 {
        assert_eq!(s.e()[n] > 0.0, n % 2 == 1, "sign of e_{n}");
    }
}

#[test]
fn oscillator_first_coefficient() {
    let spec = hermite_spectrum(
        DEFAULT_OSCILLATOR_N2,
        DEFAULT_OSCILLATOR_HALF_WIDTH,
        DEFAULT_OSCILLATOR_NODES,
    )
    .unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 1).unwrap();
    assert_eq!(s.e()[0], 1.0);
    assert!((s.e()[1] - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
}

#[test]
fn orthogonality_and_resolvent_bound_both_backends() {
    let well = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let osc = hermite_spectrum(
        DEFAULT_OSCILLATOR_N2,
        DEFAULT_OSCILLATOR_HALF_WIDTH,
        DEFAULT_OSCILLATOR_NODES,
    )
    .unwrap();
    for spec in [&well, &osc] {
        let s = SeriesState::<f64>::with_order(spec, 10).unwrap();
        let p0 = spec.phi0::<f64>();
        for n in 1..=10 {
            let phin = s.phi(n);
            assert!(phin.dot(&p0).unwrap().abs() <= 1e-10 * phin.norm());
            assert!(s.varphi(n).dot(&p0).unwrap().abs() <= 1e-10 * s.varphi(n).norm());
            assert!(s.c()[n] <= s.varphi(n).norm() / spec.gap() + 1e-12);
            assert!(s.e()[n].is_finite());
        }
    }
}

#[test]
fn well_table_spot_values() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 6).unwrap();
    let a = s.partial_sums(0.1, 1).unwrap();
    assert!((a.energy - 0.273873).abs() < 5e-7);
    let b = s.partial_sums(-0.1, 6).unwrap();
    assert!((b.energy - 0.226030).abs() < 5e-7);
    assert!((b.psi_norm - 1.000008108).abs() < 1e-9);
    let r = s.residual(1.0, 6).unwrap();
    assert!((r / 1e-5 - 0.22).abs() < 0.005, "{r}");
}

#[test]
fn residual_shrinks_with_order_at_small_nu() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 6).unwrap();
    for &nu in &[0.1, -0.1] {
        let r: Vec<f64> = (0..=6).map(|n| s.residual(nu, n).unwrap()).collect();
        for w in r.windows(2) {
            assert!(w[1] * 5.0 < w[0], "{r:?}");
        }
    }
}

#[test]
fn tail_formula_matches_direct_residual() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<DoubleDouble>::with_order(&spec, 6).unwrap();
    for n in [1, 4, 6] {
        let rep = s.cancellation_check(n, &[0.1, -0.1, 1.0, -1.0]).unwrap();
        for sample in &rep.samples {
            assert!(sample.mismatch <= 1e-9, "N = {n}: {sample:?}");
        }
    }
}

#[test]
fn residual_slope_is_order_plus_one() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<DoubleDouble>::with_order(&spec, 4).unwrap();
    for n in [0, 2, 4] {
        let rep = s.cancellation_check(n, &[1e-3, 1e-2]).unwrap();
        let slope = rep.slope.unwrap();
        assert!((slope - (n as f64 + 1.0)).abs() <= 0.05, "N = {n}: slope {slope}");
    }
}

#[test]
fn double_double_energies_agree() {
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<DoubleDouble>::with_order(&spec, 6).unwrap();
    let e6 = -1257.0 / (131072.0 * PI.powi(6));
    assert!(rel(s.e()[6].to_f64(), e6) < 1e-12);
}
