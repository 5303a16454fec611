//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gp_perturb::bounds::{
    appendix_j_scan, constant_chain, empirical_radius, f_bound_holds, triple_sum_i_scan,
    ChainOptions, ConstantMode, FEASIBILITY_SLACK,
};
use gp_perturb::elliptic::{jacobi_sncndn, reconstruct_and_check, solve_defocusing, solve_focusing};
use gp_perturb::series::SeriesState;
use gp_perturb::spectral::{
    hermite_spectrum, well_spectrum, Backend, LinearSpectrum, DEFAULT_OSCILLATOR_HALF_WIDTH,
    DEFAULT_OSCILLATOR_N2, DEFAULT_OSCILLATOR_NODES, DEFAULT_WELL_N2,
};
use gp_perturb::DoubleDouble;
use gp_perturb_cli::format::residual as residual_2sf;
use gp_perturb_cli::{compare, table, ConfigFile, RunConfig, TableRow};

/// Printed row: (E_N, ||psi_N||, ||r_N||).
type Row = (f64, f64, f64);

const WELL_NU_P01: [Row; 7] = [
    (0.25, 1.0, 0.25e-1),
    (0.273873, 1.000007916, 0.16e-3),
    (0.273778, 1.000007728, 0.30e-5),
    (0.273780, 1.000007730, 0.52e-7),
    (0.273780, 1.000007730, 0.88e-9),
    (0.273780, 1.000007730, 0.15e-10),
    (0.273780, 1.000007730, 0.24e-12),
];
const WELL_NU_P1: [Row; 7] = [
    (0.25, 1.0, 0.25),
    (0.488732, 1.000791259, 0.16e-1),
    (0.479234, 1.000614941, 0.28e-2),
    (0.481123, 1.000634507, 0.48e-3),
    (0.480777, 1.000632165, 0.81e-4),
    (0.480837, 1.000632442, 0.13e-4),
    (0.480827, 1.000632410, 0.22e-5),
];
const WELL_NU_M01: [Row; 7] = [
    (0.25, 1.0, 0.25e-1),
    (0.226168, 1.000007916, 0.17e-3),
    (0.226032, 1.000008160, 0.30e-5),
    (0.226030, 1.000008108, 0.53e-7),
    (0.226030, 1.000008108, 0.90e-9),
    (0.226030, 1.000008108, 0.15e-10),
    (0.226030, 1.000008108, 0.25e-12),
];
const WELL_NU_M1: [Row; 7] = [
    (0.25, 1.0, 0.25),
    (0.011268, 1.000791259, 0.17e-1),
    (0.001769, 1.000992585, 0.32e-2),
    (-0.000121, 1.001018592, 0.58e-3),
    (-0.000467, 1.001021668, 1.00e-4),
    (-0.000527, 1.001022048, 0.17e-4),
    (-0.000537, 1.001022093, 0.28e-5),
];
/// The N = 6, nu = -1 norm also appears as this value in the comparison text.
const WELL_NU_M1_ALT_NORM: f64 = 1.001022099;

/// Printed row: (E_N, ||r_N||).
const OSC_NU_P01: [(f64, f64); 7] = [
    (1.0, 0.43e-1),
    (1.039894228, 0.24e-3),
    (1.039728699, 0.25e-5),
    (1.039730376, 0.24e-7),
    (1.039730361, 0.22e-9),
    (1.039730361, 0.21e-11),
    (1.039730361, 0.43e-12),
];
const OSC_NU_P1: [(f64, f64); 7] = [
    (1.0, 0.43),
    (1.398942280, 0.23e-1),
    (1.382389419, 0.24e-2),
    (1.384066368, 0.23e-3),
    (1.383909162, 0.21e-4),
    (1.383923548, 0.18e-5),
    (1.383922248, 0.17e-6),
];
const OSC_NU_M01: [(f64, f64); 7] = [
    (1.0, 0.43e-1),
    (0.9601057720, 0.24e-3),
    (0.9599402433, 0.25e-5),
    (0.9599385664, 0.24e-7),
    (0.9599385507, 0.22e-9),
    (0.9599385505, 0.20e-11),
    (0.9599385505, 0.28e-12),
];
const OSC_NU_M1: [(f64, f64); 7] = [
    (1.0, 0.43),
    (0.6010577196, 0.25e-1),
    (0.5845048581, 0.26e-2),
    (0.5828279087, 0.25e-3),
    (0.5826707021, 0.24e-4),
    (0.5826563161, 0.22e-5),
    (0.5826550168, 0.20e-6),
];

struct Verdict {
    failures: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(id: u32, title: &str, v: Verdict, all_ok: &mut bool) {
    if v.failures.is_empty() {
        println!("[PASS] {id}. {title}");
    } else {
        *all_ok = false;
        println!("[FAIL] {id}. {title} ({} mismatches)", v.failures.len());
        for f in &v.failures {
            println!("         {f}");
        }
    }
}

fn run_table(backend: Backend, nu: &[f64]) -> (Vec<TableRow>, Duration) {
    let cfg = RunConfig::resolve(
        ConfigFile { backend: Some(backend), nu: Some(nu.to_vec()), ..Default::default() },
        6,
    )
    .unwrap();
    let start = Instant::now();
    let rows = table(&cfg).unwrap();
    (rows, start.elapsed())
}

fn oscillator() -> LinearSpectrum {
    hermite_spectrum(DEFAULT_OSCILLATOR_N2, DEFAULT_OSCILLATOR_HALF_WIDTH, DEFAULT_OSCILLATOR_NODES)
        .unwrap()
}

fn well_columns(v: &mut Verdict, rows: &[TableRow], printed: &[Row], alt_last_norm: Option<f64>) {
    for (r, &(e, norm, res)) in rows.iter().zip(printed) {
        let tag = format!("nu = {}, N = {}", r.nu, r.order);
        v.check(format!("{:.6}", r.energy) == format!("{e:.6}"), || {
            format!("{tag}: E_N {:.10} vs printed {e:.6}", r.energy)
        });
        let alt_ok = r.order == 6 && alt_last_norm.is_some_and(|a| (r.psi_norm - a).abs() <= 1e-9);
        v.check((r.psi_norm - norm).abs() <= 1e-9 || alt_ok, || {
            format!("{tag}: norm {:.10} vs printed {norm:.9}", r.psi_norm)
        });
        v.check(residual_2sf(r.residual) == residual_2sf(res), || {
            format!("{tag}: residual {} vs printed {}", residual_2sf(r.residual), residual_2sf(res))
        });
    }
}

fn oscillator_columns(v: &mut Verdict, rows: &[TableRow], printed: &[(f64, f64)]) {
    for (r, &(e, res)) in rows.iter().zip(printed) {
        let tag = format!("nu = {}, N = {}", r.nu, r.order);
        v.check((r.energy - e).abs() <= 1e-6, || {
            format!("{tag}: E_N {:.10} vs printed {e}", r.energy)
        });
        let decades = (r.residual / res).log10().abs();
        v.check(decades <= 1.0, || {
            format!("{tag}: residual {:.2e} vs printed {res:.2e} ({decades:.2} decades apart)", r.residual)
        });
    }
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new();
    let (rows, took) = run_table(Backend::Well, &[0.1, 1.0]);
    well_columns(&mut v, &rows[..7], &WELL_NU_P01, None);
    well_columns(&mut v, &rows[7..], &WELL_NU_P1, None);
    v.check(took < Duration::from_secs(1), || format!("runtime {took:?}"));
    v
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new();
    let (rows, took) = run_table(Backend::Well, &[-0.1, -1.0]);
    well_columns(&mut v, &rows[..7], &WELL_NU_M01, None);
    well_columns(&mut v, &rows[7..], &WELL_NU_M1, Some(WELL_NU_M1_ALT_NORM));
    v.check(took < Duration::from_secs(1), || format!("runtime {took:?}"));
    v
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new();
    let (rows, took) = run_table(Backend::Oscillator, &[0.1, 1.0, -0.1, -1.0]);
    oscillator_columns(&mut v, &rows[..7], &OSC_NU_P01);
    oscillator_columns(&mut v, &rows[7..14], &OSC_NU_P1);
    oscillator_columns(&mut v, &rows[14..21], &OSC_NU_M01);
    oscillator_columns(&mut v, &rows[21..], &OSC_NU_M1);
    v.check(took < Duration::from_secs(10), || format!("runtime {took:?}"));
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new();
    let cfg = RunConfig::resolve(ConfigFile::default(), 6).unwrap();
    let rows = compare(&cfg).unwrap();
    let printed_e = [0.273780, 0.480829, 0.226030, -0.000540];
    for (r, &e) in rows.iter().zip(&printed_e) {
        v.check((r.energy_exact - e).abs() <= 1e-5, || {
            format!("nu = {}: E_exact {:.8} vs printed {e}", r.nu, r.energy_exact)
        });
        let limit = if r.nu.abs() < 0.5 { 3e-6 } else { 3e-3 };
        v.check(r.abs_diff <= limit, || format!("nu = {}: |dE| = {:.2e}", r.nu, r.abs_diff));
    }
    v.check((rows[0].modulus - 0.2474031338).abs() <= 1e-8, || {
        format!("k = {:.10}", rows[0].modulus)
    });
    v.check((rows[2].modulus - 0.2574471610).abs() <= 1e-8, || {
        format!("kappa = {:.10}", rows[2].modulus)
    });
    v
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new();
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let s = SeriesState::<f64>::with_order(&spec, 6).unwrap();
    let e = [
        3.0 / (4.0 * PI),
        -3.0 / (32.0 * PI.powi(2)),
        15.0 / (256.0 * PI.powi(3)),
        -69.0 / (2048.0 * PI.powi(4)),
        75.0 / (4096.0 * PI.powi(5)),
        -1257.0 / (131072.0 * PI.powi(6)),
    ];
    for (n, &want) in e.iter().enumerate() {
        let got = s.e()[n + 1];
        v.check((got - want).abs() <= 1e-12 * want.abs(), || format!("e_{}: {got:e} vs {want:e}", n + 1));
    }
    // phi_1 = -cos(3x/2) / (8 pi^{3/2}), phi_2 = (3cos(3x/2) + cos(5x/2)) / (64 pi^{5/2})
    let phi: [(usize, Vec<(usize, f64)>); 2] = [
        (1, vec![(3, -1.0 / (8.0 * PI))]),
        (2, vec![(3, 3.0 / (64.0 * PI * PI)), (5, 1.0 / (64.0 * PI * PI))]),
    ];
    for (n, nonzero) in &phi {
        for (j, &c) in s.phi(*n).coeffs().iter().enumerate() {
            let want = nonzero.iter().find(|(m, _)| *m == j + 1).map_or(0.0, |&(_, w)| w);
            v.check((c - want).abs() <= 1e-12, || format!("phi_{n} mode {}: {c:e} vs {want:e}", j + 1));
        }
    }
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    let j = appendix_j_scan(10_000);
    v.check(j.argmax == 19 && (j.max - 1.517106786).abs() <= 1e-8, || {
        format!("J max {} at n = {}", j.max, j.argmax)
    });
    let i = triple_sum_i_scan(1_000);
    v.check(i.argmax == 10 && (i.max - 10.44589874).abs() <= 1e-7, || {
        format!("I max {} at n = {}", i.max, i.argmax)
    });
    v.check(f_bound_holds(10_000), || "f(n) exceeds 2.70 for some n <= 1e4".into());
    v
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new();
    let well = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let osc = oscillator();
    for (name, spec) in [("well", &well), ("oscillator", &osc)] {
        let s = SeriesState::<f64>::with_order(spec, 10).unwrap();
        let p0 = spec.phi0::<f64>();
        for n in 1..=10 {
            let d = s.phi(n).dot(&p0).unwrap().abs();
            v.check(d <= 1e-10, || format!("{name}: <phi_{n}, phi_0> = {d:e}"));
        }
        let dd = SeriesState::<DoubleDouble>::with_order(spec, 6).unwrap();
        for n in 0..=6 {
            match dd.cancellation_check(n, &[0.1, -0.1, 1.0, -1.0]) {
                Ok(rep) => {
                    for sm in &rep.samples {
                        v.check(sm.mismatch <= 1e-9, || {
                            format!("{name}: tail vs direct at N = {n}, nu = {}: {:e}", sm.nu, sm.mismatch)
                        });
                    }
                }
                Err(e) => v.check(false, || format!("{name}: tail vs direct at N = {n}: {e}")),
            }
        }
        for n in [0, 2, 4] {
            let slope = dd.cancellation_check(n, &[1e-3, 1e-2]).ok().and_then(|r| r.slope);
            v.check(slope.is_some_and(|p| (p - (n as f64 + 1.0)).abs() <= 0.05), || {
                format!("{name}: log-residual slope at N = {n}: {slope:?}")
            });
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..40 {
        let k = 0.999 * i as f64 / 40.0;
        for j in 0..60 {
            let (s, c, d) = jacobi_sncndn(-6.0 + 0.2 * j as f64, k);
            worst = worst.max((s * s + c * c - 1.0).abs()).max((d * d + k * k * s * s - 1.0).abs());
        }
    }
    v.check(worst <= 1e-12, || format!("Jacobi identity defect {worst:e}"));
    for &nu in &[0.05, 0.3, 1.0, 3.0] {
        for &norm2 in &[0.6, 1.0, 1.7] {
            for sign in [1.0, -1.0] {
                let sol = if sign > 0.0 { solve_defocusing(nu, norm2, 1) } else { solve_focusing(-nu, norm2, 1) };
                let rec = sol.and_then(|s| reconstruct_and_check(&s, sign * nu));
                match rec {
                    Ok(chk) => v.check((chk.norm2 - norm2).abs() <= 1e-8 * norm2, || {
                        format!("round trip nu = {}, norm2 = {norm2}: {}", sign * nu, chk.norm2)
                    }),
                    Err(e) => v.check(false, || format!("round trip nu = {}, norm2 = {norm2}: {e}", sign * nu)),
                }
            }
        }
    }
    v
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new();
    let well = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let osc = oscillator();
    for (name, spec) in [("well", &well), ("oscillator", &osc)] {
        let state = SeriesState::<f64>::with_order(spec, 8).unwrap();
        for c1 in [ConstantMode::Lemma, ConstantMode::Sharp] {
            for c2 in [ConstantMode::Lemma, ConstantMode::Sharp] {
                match constant_chain(&state, &ChainOptions::new(c1, c2)) {
                    Ok(rep) => {
                        v.check(rep.nu_star > 0.0, || format!("{name} {c1:?}/{c2:?}: nu* = {}", rep.nu_star));
                        v.check(rep.brackets.iter().all(|&b| b <= 1.0 + FEASIBILITY_SLACK), || {
                            format!("{name} {c1:?}/{c2:?}: brackets {:?}", rep.brackets)
                        });
                    }
                    Err(e) => v.check(false, || format!("{name} {c1:?}/{c2:?}: {e}")),
                }
            }
        }
    }
    v
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new();
    let spec = well_spectrum(DEFAULT_WELL_N2).unwrap();
    let state = SeriesState::<f64>::with_order(&spec, 12).unwrap();
    match empirical_radius(state.e()) {
        Ok(est) => v.check(est.radius >= 0.9 * 2.0 * PI, || format!("radius {}", est.radius)),
        Err(e) => v.check(false, || e.to_string()),
    }
    v
}

fn main() {
    let mut all_ok = true;
    report(1, "infinite well, defocusing table (nu = 0.1, 1)", criterion_1(), &mut all_ok);
    report(2, "infinite well, focusing table (nu = -0.1, -1)", criterion_2(), &mut all_ok);
    report(3, "harmonic oscillator tables (nu = +-0.1, +-1)", criterion_3(), &mut all_ok);
    report(4, "exact elliptic solution vs series", criterion_4(), &mut all_ok);
    report(5, "closed-form coefficients (well)", criterion_5(), &mut all_ok);
    report(6, "appendix sums", criterion_6(), &mut all_ok);
    report(7, "property suites", criterion_7(), &mut all_ok);
    report(8, "rigorous radius chain", criterion_8(), &mut all_ok);
    report(9, "empirical radius (well)", criterion_9(), &mut all_ok);
    if !all_ok {
        std::process::exit(1);
    }
}
