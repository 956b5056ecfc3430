//! Scenario drivers: each turns a parameter block into a table and a list of
//! invariant checks.

use spinorlab::dirac::chi_pair;
use spinorlab::hydrogen::{analytic_pauli, spin_statistics};
use spinorlab::kapitza::{run_kapitza, LadderSpec, LaserParams};
use spinorlab::spin::{chakrabarti_gaussian_closed_form, chakrabarti_gaussian_expectation};
use spinorlab::verification::{algebra_suite, form_suite, Bound, SuiteReport};
use spinorlab::wavepacket::{
    run_step_scenario, GaussianPacketSpec, Grid2D, PropagationConfig, StepPotentialParams,
};
use spinorlab::{
    HydrogenParams, MagneticState, Momentum3, ObservableRow, PhysicalConstants, QuadratureSpec,
    SpinDirection, SpinKind,
};

use crate::config::{AlgebraParams, GaussianParams, HydrogenScanParams, KapitzaParams, StepParams};
use crate::output::{Cell, Table};
use crate::CliError;

/// Norm drift tolerated by the time-series scenarios.
const NORM_TOLERANCE: f64 = 1e-8;
const PRYCE_TOLERANCE: f64 = 1e-8;
const PAULI_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Outcome {
    pub table: Table,
    pub checks: Vec<Check>,
}

fn config_error(e: spinorlab::Error) -> CliError {
    match e {
        spinorlab::Error::InvalidParameter(_) | spinorlab::Error::Domain { .. } => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Compute(e.to_string()),
    }
}

fn constants() -> PhysicalConstants {
    PhysicalConstants::atomic()
}

pub fn algebra_check(p: &AlgebraParams) -> Result<Outcome, CliError> {
    let c = constants();
    let mut table = Table::new(&["suite", "check", "value", "relation", "bound", "passed"]);
    let mut checks = Vec::new();
    let mut add = |suite: &str, report: SuiteReport| {
        for check in &report.checks {
            let (relation, bound) = match check.bound {
                Bound::Below(b) => ("<", b),
                Bound::Above(b) => (">", b),
            };
            table.push(vec![
                Cell::Text(suite.into()),
                Cell::Text(check.name.clone()),
                Cell::Num(check.value),
                Cell::Text(relation.into()),
                Cell::Num(bound),
                Cell::Bool(check.passed),
            ]);
        }
        let failures: Vec<_> = report.failures().map(|f| f.name.as_str()).collect();
        checks.push(Check::new(
            format!("{suite} suite"),
            failures.is_empty(),
            if failures.is_empty() {
                format!(
                    "{} checks, max residual {:.2e}",
                    report.checks.len(),
                    report.max_residual()
                )
            } else {
                format!("failed: {}", failures.join("; "))
            },
        ));
    };
    add(
        "algebra",
        algebra_suite(&c, p.samples, p.seed).map_err(config_error)?,
    );
    add(
        "forms",
        form_suite(&c, p.samples, p.seed).map_err(config_error)?,
    );
    Ok(Outcome { table, checks })
}

fn parse_axis(axis: &str) -> Result<SpinDirection, CliError> {
    match axis.trim().to_ascii_lowercase().as_str() {
        "x" => Ok(SpinDirection::x()),
        "y" => Ok(SpinDirection::y()),
        "z" => Ok(SpinDirection::z()),
        other => Err(CliError::Config(format!(
            "spin axis must be x, y or z, got `{other}`"
        ))),
    }
}

fn norm_check(rows: &[ObservableRow]) -> Check {
    let first = rows.first().map_or(1.0, |r| r.norm);
    let drift = rows
        .iter()
        .map(|r| (r.norm - first).abs())
        .fold(0.0, f64::max);
    Check::new(
        "norm conservation",
        drift < NORM_TOLERANCE,
        format!("max drift {drift:.2e}, tolerance {NORM_TOLERANCE:e}"),
    )
}

/// Number of whole steps of `dt` in `t_end`.
fn step_count(t_end: f64, dt: f64) -> Result<usize, CliError> {
    if !(dt > 0.0 && t_end >= 0.0 && t_end.is_finite()) {
        return Err(CliError::Config(format!(
            "need dt > 0 and t-end ≥ 0, got dt = {dt}, t-end = {t_end}"
        )));
    }
    let n = (t_end / dt).round();
    if (n * dt - t_end).abs() > 1e-9 * t_end.max(dt) {
        return Err(CliError::Config(format!(
            "t-end = {t_end} is not a whole number of steps dt = {dt}"
        )));
    }
    Ok(n as usize)
}

pub fn step_scatter(p: &StepParams) -> Result<Outcome, CliError> {
    let c = constants();
    let axis = parse_axis(&p.axis)?;
    let base = Grid2D::step_scenario();
    let grid = Grid2D::new(p.nx, p.ny, base.x_bounds(), base.y_bounds()).map_err(config_error)?;
    let (chi, _) = chi_pair(&axis);
    let spec = GaussianPacketSpec::new(p.width, (p.x0, 0.0), (p.px * c.m0c(), 0.0), chi)
        .map_err(config_error)?;
    let potential = StepPotentialParams::new(p.v0 * c.rest_energy(), p.w).map_err(config_error)?;
    let config = PropagationConfig::new(p.dt, step_count(p.t_end, p.dt)?, p.sample_every)
        .map_err(config_error)?;
    let rows =
        run_step_scenario(&grid, &spec, &potential, &config, &c, &axis).map_err(config_error)?;
    Ok(Outcome {
        checks: vec![norm_check(&rows)],
        table: Table::from_series(&rows),
    })
}

pub fn kapitza(p: &KapitzaParams) -> Result<Outcome, CliError> {
    let c = constants();
    let k = Momentum3::new(p.k * c.m0c(), 0.0, 0.0);
    let laser = LaserParams::new(p.v0 * c.rest_energy(), k, p.t_end).map_err(config_error)?;
    let momentum = Momentum3::new(p.px, 0.0, p.pz) * c.m0c();
    let spec = LadderSpec::new(p.n_max, momentum, k, SpinDirection::z()).map_err(config_error)?;
    let rows = run_kapitza(
        &laser,
        &spec,
        &c,
        p.steps_per_period,
        p.samples_per_period,
        &SpinDirection::z(),
    )
    .map_err(config_error)?;
    Ok(Outcome {
        checks: vec![norm_check(&rows)],
        table: Table::from_series(&rows),
    })
}

fn parse_kinds(kinds: &str) -> Result<Vec<SpinKind>, CliError> {
    if kinds.trim().eq_ignore_ascii_case("all") {
        return Ok(SpinKind::ALL.to_vec());
    }
    let mut out: Vec<SpinKind> = kinds
        .split(',')
        .map(|s| s.parse().map_err(config_error))
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn parse_m(m: &str) -> Result<MagneticState, CliError> {
    match m.trim().to_ascii_lowercase().as_str() {
        "up" | "+1/2" | "1/2" => Ok(MagneticState::Up),
        "down" | "-1/2" => Ok(MagneticState::Down),
        other => Err(CliError::Config(format!(
            "magnetic state must be up or down, got `{other}`"
        ))),
    }
}

/// `steps` equally spaced values from `lo` to `hi` inclusive.
fn atomic_numbers(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(CliError::Config(format!(
            "need 0 < z-min ≤ z-max and steps ≥ 1, got z-min = {lo}, z-max = {hi}, steps = {steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + i as f64 * h
            }
        })
        .collect())
}

pub fn hydrogen_scan(p: &HydrogenScanParams) -> Result<Outcome, CliError> {
    let kinds = parse_kinds(&p.kinds)?;
    let m = parse_m(&p.m)?;
    let quad = QuadratureSpec::new(p.radial_nodes, p.angular_nodes, p.angular_nodes)
        .map_err(config_error)?;
    let mut table = Table::new(&["Z", "kind", "mean", "variance"]);
    let (mut pryce, mut pauli) = (0.0f64, 0.0f64);
    for z in atomic_numbers(p.z_min, p.z_max, p.steps)? {
        let params = HydrogenParams::new(z, constants(), m).map_err(config_error)?;
        for &kind in &kinds {
            let s = spin_statistics(kind, &params, &quad).map_err(config_error)?;
            match kind {
                SpinKind::Pryce => {
                    let sign = if m == MagneticState::Up { 0.5 } else { -0.5 };
                    pryce = pryce.max((s.mean - sign).abs()).max(s.variance.abs());
                }
                SpinKind::Pauli => {
                    let (mean, var) = analytic_pauli(&params);
                    pauli = pauli
                        .max((s.mean - mean).abs())
                        .max((s.variance - var).abs());
                }
                _ => {}
            }
            table.push(vec![
                Cell::Num(z),
                Cell::Text(kind.label().into()),
                Cell::Num(s.mean),
                Cell::Num(s.variance),
            ]);
        }
    }
    let mut checks = Vec::new();
    if kinds.contains(&SpinKind::Pryce) {
        checks.push(Check::new(
            "Pryce spin is sharp",
            pryce < PRYCE_TOLERANCE,
            format!("max deviation {pryce:.2e}"),
        ));
    }
    if kinds.contains(&SpinKind::Pauli) {
        checks.push(Check::new(
            "Pauli matches the closed form",
            pauli < PAULI_TOLERANCE,
            format!("max deviation {pauli:.2e}"),
        ));
    }
    Ok(Outcome { table, checks })
}

pub fn chakrabarti_gaussian(p: &GaussianParams) -> Result<Outcome, CliError> {
    let c = constants();
    if p.points == 0 || !(p.px_max >= p.px_min) {
        return Err(CliError::Config(
            "need points ≥ 1 and px-max ≥ px-min".into(),
        ));
    }
    let mut table = Table::new(&["px", "closed_form", "expectation"]);
    let mut lowest = f64::INFINITY;
    for i in 0..p.points {
        let x = if p.points == 1 {
            p.px_min
        } else {
            p.px_min + (p.px_max - p.px_min) * i as f64 / (p.points - 1) as f64
        };
        let pbar = x * c.m0c();
        let closed = chakrabarti_gaussian_closed_form(&c, pbar);
        let value =
            chakrabarti_gaussian_expectation(&c, p.sigma * c.m0c(), pbar).map_err(config_error)?;
        lowest = lowest.min(closed).min(value);
        table.push(vec![Cell::Num(x), Cell::Num(closed), Cell::Num(value)]);
    }
    Ok(Outcome {
        table,
        checks: vec![Check::new(
            "expectation at least 1/2",
            lowest >= 0.5 - 1e-12,
            format!("smallest value {lowest:.12}"),
        )],
    })
}
