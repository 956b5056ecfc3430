//! Acceptance suite: one pass/fail line per criterion.

#![allow(clippy::excessive_precision)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use spinorlab::hydrogen::{
    analytic_pauli, ground_state_momentum, ground_state_position, special_j0, special_j1,
    spherical_harmonic, spin_statistics, transform_radial, MomentumWavefunction, TransformSign,
};
use spinorlab::kapitza::{run_kapitza, LadderSpec, LaserParams};
use spinorlab::spin::{chakrabarti_gaussian_closed_form, chakrabarti_gaussian_expectation};
use spinorlab::verification::{algebra_suite, form_suite};
use spinorlab::wavepacket::{
    run_step_scenario, GaussianPacketSpec, Grid2D, PropagationConfig, StepPotentialParams,
};
use spinorlab::{
    HydrogenParams, MagneticState, ObservableRow, PhysicalConstants, QuadratureSpec, SpinDirection,
    SpinKind, Spinor4, C64,
};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!(
            "{what} took {:.1} s, limit {limit_s} s",
            elapsed.as_secs_f64()
        )
    })
}

fn operator_algebra() -> Outcome {
    let c = PhysicalConstants::atomic();
    let start = Instant::now();
    let report = algebra_suite(&c, 100, 0).map_err(|e| e.to_string())?;
    within(start.elapsed(), 5.0, "algebra suite")?;
    if let Some(f) = report.failures().next() {
        return Err(format!(
            "{} failed with {:e} ({} checks total)",
            f.name,
            f.value,
            report.checks.len()
        ));
    }
    Ok(format!(
        "{} checks over {} samples, max residual {:.1e}",
        report.checks.len(),
        report.samples,
        report.max_residual()
    ))
}

fn equivalent_forms() -> Outcome {
    let c = PhysicalConstants::atomic();
    let start = Instant::now();
    let report = form_suite(&c, 100, 0).map_err(|e| e.to_string())?;
    within(start.elapsed(), 5.0, "form suite")?;
    if let Some(f) = report.failures().next() {
        return Err(format!("{} failed with {:e}", f.name, f.value));
    }
    Ok(format!(
        "{} pairings, max residual {:.1e}",
        report.checks.len(),
        report.max_residual()
    ))
}

const STEP_INITIAL: [f64; 7] = [0.3556, 0.5, 0.3556, 0.7084, 0.5, 0.5, 0.5];
const STEP_FINAL: [f64; 7] = [0.3556, 0.4966, 0.3556, 0.7001, 0.4966, 0.4966, 0.4966];

fn step_scattering() -> Outcome {
    let c = PhysicalConstants::atomic();
    let start = Instant::now();
    let rows = run_step_scenario(
        &Grid2D::step_scenario(),
        &GaussianPacketSpec::step_scenario(&c),
        &StepPotentialParams::step_scenario(&c),
        &PropagationConfig::step_scenario(),
        &c,
        &SpinDirection::y(),
    )
    .map_err(|e| e.to_string())?;
    within(start.elapsed(), 600.0, "step scattering")?;
    let (first, last) = (rows[0], *rows.last().unwrap());
    ensure((last.t - 0.0035).abs() < 1e-12, || {
        format!("run ended at t = {}", last.t)
    })?;
    for kind in SpinKind::ALL {
        let i = kind.index();
        ensure((first.spin[i] - STEP_INITIAL[i]).abs() <= 1e-3, || {
            format!(
                "initial {kind} = {:.5}, expected {}",
                first.spin[i], STEP_INITIAL[i]
            )
        })?;
        ensure((last.spin[i] - STEP_FINAL[i]).abs() <= 2e-3, || {
            format!(
                "final {kind} = {:.5}, expected {}",
                last.spin[i], STEP_FINAL[i]
            )
        })?;
    }
    let drift = rows
        .iter()
        .map(|r| (r.norm - first.norm).abs())
        .fold(0.0, f64::max);
    ensure(drift < 1e-9, || format!("norm drift {drift:e}"))?;
    let peak = rows.iter().map(|r| r.neg_energy).fold(0.0, f64::max);
    ensure(last.neg_energy < 1e-3, || {
        format!("final negative-energy weight {:e}", last.neg_energy)
    })?;
    Ok(format!(
        "final S_P {:.4} S_FW {:.4} S_F {:.4}, norm drift {drift:.1e}, neg-energy peak {peak:.1e} final {:.1e}, {:.0} s",
        last.spin[0],
        last.spin[1],
        last.spin[3],
        last.neg_energy,
        start.elapsed().as_secs_f64()
    ))
}

fn hydrogen(z: f64, m: MagneticState) -> HydrogenParams {
    HydrogenParams::new(z, PhysicalConstants::atomic(), m).unwrap()
}

fn hydrogen_scan() -> Outcome {
    let quad = QuadratureSpec::default();
    let stats = |kind, z, m| -> Result<(f64, f64, Duration), String> {
        let start = Instant::now();
        let s = spin_statistics(kind, &hydrogen(z, m), &quad).map_err(|e| e.to_string())?;
        Ok((s.mean, s.variance, start.elapsed()))
    };
    let mut slowest = Duration::ZERO;
    let mut symmetry = 0.0f64;
    for z in [1.0, 40.0, 92.0, 120.0] {
        let p = hydrogen(z, MagneticState::Up);
        let (mean, var) = analytic_pauli(&p);
        for kind in SpinKind::ALL {
            let (up, var_up, t) = stats(kind, z, MagneticState::Up)?;
            let (down, _, _) = stats(kind, z, MagneticState::Down)?;
            slowest = slowest.max(t);
            symmetry = symmetry.max((up + down).abs());
            if kind == SpinKind::Pauli {
                ensure(
                    (up - mean).abs() < 1e-6 && (var_up - var).abs() < 1e-6,
                    || format!("Pauli at Z = {z}: ({up}, {var_up}) vs ({mean}, {var})"),
                )?;
            }
        }
    }
    ensure(symmetry < 1e-8, || {
        format!("m = ±1/2 asymmetry {symmetry:e}")
    })?;
    let mut pryce = 0.0f64;
    for z in (0..=13).map(|k| (10 * k).max(1) as f64).chain([137.0]) {
        let (mean, var, t) = stats(SpinKind::Pryce, z, MagneticState::Up)?;
        slowest = slowest.max(t);
        pryce = pryce.max((mean - 0.5).abs()).max(var.abs());
    }
    ensure(pryce < 1e-8, || format!("Pryce deviation {pryce:e}"))?;
    let (pauli, _, _) = stats(SpinKind::Pauli, 92.0, MagneticState::Up)?;
    let (fw, _, _) = stats(SpinKind::FoldyWouthuysen, 92.0, MagneticState::Up)?;
    let (up_pauli, up_fw) = (0.5 + pauli, 0.5 + fw);
    ensure((up_pauli - 0.914).abs() <= 1e-3, || {
        format!("P↑ Pauli at Z = 92: {up_pauli:.4}")
    })?;
    ensure((up_fw - 0.998).abs() <= 1e-3, || {
        format!("P↑ FW at Z = 92: {up_fw:.4}")
    })?;
    within(slowest, 60.0, "one (Z, kind) evaluation")?;
    Ok(format!(
        "Z = 92: P↑ Pauli {:.2}%, FW {:.2}%; Pryce deviation {pryce:.1e}; m-asymmetry {symmetry:.1e}; slowest {:.1} s",
        100.0 * up_pauli,
        100.0 * up_fw,
        slowest.as_secs_f64()
    ))
}

// (z, γ, p, 𝒥₀, 𝒥₁) from arbitrary-precision adaptive quadrature of the defining integrals
#[rustfmt::skip]
const J_ORACLE: [(f64, f64, f64, f64, f64); 27] = [
    (0.5, 0.6, 0.1, 6.5054362653480905, 1.1233266319515517),
    (0.5, 0.6, 1.0, 0.58440385073630576, 0.80394974285421787),
    (0.5, 0.6, 10.0, 0.0011625901423325175, 0.0037165707594218356),
    (0.5, 0.8, 0.1, 8.6901204866015458, 1.6188961483165192),
    (0.5, 0.8, 1.0, 0.55457457042266669, 0.90694206238815063),
    (0.5, 0.8, 10.0, 0.00046204145040060781, 0.0024600147322346285),
    (0.5, 0.95, 0.1, 10.917124181265919, 2.1459108656593659),
    (0.5, 0.95, 1.0, 0.52328069090273314, 0.99169809087710713),
    (0.5, 0.95, 10.0, 0.00015318749144336428, 0.0017765777120209292),
    (1.0, 0.6, 0.1, 0.85115618167617566, 0.073696250340763192),
    (1.0, 0.6, 1.0, 0.29512935567619211, 0.23616668453839562),
    (1.0, 0.6, 10.0, 0.00095431898169945929, 0.0026917673056714669),
    (1.0, 0.8, 0.1, 1.1441221800840984, 0.10673074856526586),
    (1.0, 0.8, 1.0, 0.34241726931111306, 0.30599605963497384),
    (1.0, 0.8, 10.0, 0.00048143520558752226, 0.002073716310668639),
    (1.0, 0.95, 0.1, 1.4444550106673432, 0.14201940450114596),
    (1.0, 0.95, 1.0, 0.38390391733653128, 0.37314825963214771),
    (1.0, 0.95, 10.0, 0.0002261715963714221, 0.0016825671536766242),
    (2.0, 0.6, 0.1, 0.10763870777319696, 0.0046632253437320583),
    (2.0, 0.6, 1.0, 0.07634123612213601, 0.032337654034355095),
    (2.0, 0.6, 10.0, 0.0008073767024375175, 0.0018278762055371312),
    (2.0, 0.8, 0.1, 0.14491799035215038, 0.0067619833839446254),
    (2.0, 0.8, 1.0, 0.098040345443995919, 0.045201237975454598),
    (2.0, 0.8, 10.0, 0.00053471027735796228, 0.0016539041688258028),
    (2.0, 0.95, 0.1, 0.1831894327018742, 0.0090065174199455072),
    (2.0, 0.95, 1.0, 0.1193627978470176, 0.058500743936666901),
    (2.0, 0.95, 10.0, 0.00035217275040293962, 0.001520577609685554),
];

fn appendix_functions() -> Outcome {
    let mut worst_j = 0.0f64;
    for (z, g, p, j0, j1) in J_ORACLE {
        let a = special_j0(z, g, p).map_err(|e| e.to_string())?;
        let b = special_j1(z, g, p).map_err(|e| e.to_string())?;
        worst_j = worst_j.max((a - j0).abs()).max((b - j1).abs());
    }
    ensure(worst_j < 1e-8, || {
        format!("𝒥 closed forms off by {worst_j:e}")
    })?;

    let mut worst_t = 0.0f64;
    for z in [1.0, 92.0] {
        let params = hydrogen(z, MagneticState::Up);
        let position = ground_state_position(&params);
        let momentum = ground_state_momentum(&params);
        let (norm, a, k) = (params.normalization(), params.lower_ratio(), params.decay());
        let radial = |r: f64| norm * position.radial(r);
        for scaled in [0.1, 1.0, 5.0] {
            let p = scaled * k;
            let t0 = transform_radial(0, TransformSign::Minus, radial, 1.0 / k, p, 1e-12)
                .map_err(|e| e.to_string())?;
            let t1 = transform_radial(1, TransformSign::Minus, radial, 1.0 / k, p, 1e-12)
                .map_err(|e| e.to_string())?;
            let (theta, phi) = (0.9, 0.4);
            let y = |l, m| spherical_harmonic(l, m, theta, phi);
            let i = C64::i();
            let expected = Spinor4::new(
                t0 * y(0, 0),
                C64::from(0.0),
                i * a * (1.0f64 / 3.0).sqrt() * t1 * y(1, 0),
                -i * a * (2.0f64 / 3.0).sqrt() * t1 * y(1, 1),
            );
            let got = momentum
                .amplitude(p, theta, phi)
                .map_err(|e| e.to_string())?;
            worst_t = worst_t.max((got - expected).norm() / expected.norm());
        }
    }
    ensure(worst_t < 1e-6, || {
        format!("momentum state differs from transform by {worst_t:e}")
    })?;
    Ok(format!(
        "𝒥 max error {worst_j:.1e} on 27 points; transform max relative error {worst_t:.1e}"
    ))
}

fn kapitza_dirac() -> Outcome {
    let c = PhysicalConstants::atomic();
    let laser = LaserParams::kapitza_scenario(&c);
    let spec = LadderSpec::kapitza_scenario(&c, &laser);
    let z = SpinDirection::z();
    let start = Instant::now();
    let rows = run_kapitza(&laser, &spec, &c, 4096, 10, &z).map_err(|e| e.to_string())?;
    within(start.elapsed(), 60.0, "Kapitza-Dirac run")?;
    let first = rows[0];
    let drift = rows
        .iter()
        .map(|r| (r.norm - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(drift < 1e-8, || format!("norm drift {drift:e}"))?;
    let s = |r: &ObservableRow, k: SpinKind| r.spin_of(k);
    ensure(
        s(&first, SpinKind::Pauli) < s(&first, SpinKind::FoldyWouthuysen)
            && (s(&first, SpinKind::FoldyWouthuysen) - 0.5).abs() < 1e-12
            && (s(&first, SpinKind::Pryce) - 0.5).abs() < 1e-12
            && s(&first, SpinKind::Frenkel) > 0.5,
        || format!("initial ordering violated: {:?}", first.spin),
    )?;
    let dev = |k: SpinKind, reference: f64| {
        rows.iter()
            .map(|r| (s(r, k) - reference).abs())
            .fold(0.0, f64::max)
    };
    let (d_fw, d_pr) = (
        dev(SpinKind::FoldyWouthuysen, 0.5),
        dev(SpinKind::Pryce, 0.5),
    );
    let d_p = dev(SpinKind::Pauli, s(&first, SpinKind::Pauli));
    ensure(10.0 * d_fw <= d_p && 10.0 * d_pr <= d_p, || {
        format!("FW {d_fw:e}, Pryce {d_pr:e} vs Pauli {d_p:e}")
    })?;
    let peak = rows.iter().map(|r| r.neg_energy).fold(0.0, f64::max);
    ensure(peak > first.neg_energy + 1e-6, || {
        format!("negative-energy weight never rises ({peak:e})")
    })?;

    let mut wider = spec;
    wider.n_max = 12;
    let compare = |other: &[ObservableRow]| -> f64 {
        rows.iter()
            .zip(other)
            .map(|(a, b)| {
                a.max_spin_difference(b)
                    .max((a.neg_energy - b.neg_energy).abs())
            })
            .fold(0.0, f64::max)
    };
    let d_nmax =
        compare(&run_kapitza(&laser, &wider, &c, 4096, 10, &z).map_err(|e| e.to_string())?);
    let d_dt = compare(&run_kapitza(&laser, &spec, &c, 8192, 10, &z).map_err(|e| e.to_string())?);
    ensure(d_nmax < 1e-6 && d_dt < 1e-6, || {
        format!("refinement changes: n_max {d_nmax:e}, dt {d_dt:e}")
    })?;
    Ok(format!(
        "norm drift {drift:.1e}; max |FW − 1/2| {d_fw:.1e}, |Pr − 1/2| {d_pr:.1e}, Pauli swing {d_p:.1e}; \
         neg-energy peak {peak:.1e}; refinement {d_nmax:.1e} (n_max), {d_dt:.1e} (dt)"
    ))
}

fn chakrabarti_gaussian() -> Outcome {
    let c = PhysicalConstants::atomic();
    let mut previous = 0.5;
    for k in 1..=60 {
        let x = 0.05 * k as f64 * c.m0c();
        let v = chakrabarti_gaussian_closed_form(&c, x);
        ensure(v > previous, || {
            format!("closed form not increasing at p̄x = {x}")
        })?;
        ensure(
            (chakrabarti_gaussian_closed_form(&c, -x) - v).abs() < 1e-15,
            || "closed form not even".into(),
        )?;
        previous = v;
    }
    let sigma = 1e-3 * c.m0c();
    let mut worst = 0.0f64;
    for x in [-2.0, -0.3, 0.1, 1.0, 2.5] {
        let pbar = x * c.m0c();
        let q = chakrabarti_gaussian_expectation(&c, sigma, pbar).map_err(|e| e.to_string())?;
        worst = worst.max((q - chakrabarti_gaussian_closed_form(&c, pbar)).abs());
    }
    ensure(worst < 1e-6, || format!("quadrature differs by {worst:e}"))?;
    Ok(format!(
        "closed form increasing and > 1/2 on 60 momenta; quadrature at σ = 1e-3 m0c within {worst:.1e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 7] = [
        ("operator algebra suite", operator_algebra),
        ("equivalent operator forms", equivalent_forms),
        ("step-potential scattering", step_scattering),
        ("hydrogenic spin scan", hydrogen_scan),
        ("radial transform special functions", appendix_functions),
        ("Kapitza-Dirac mode dynamics", kapitza_dirac),
        ("Chakrabarti Gaussian expectation", chakrabarti_gaussian),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} {name} ({secs:.1} s): {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
