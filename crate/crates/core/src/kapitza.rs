//! Kapitza-Dirac dynamics in a ponderomotive standing wave, expanded on the
//! photon-momentum ladder `p + n k`.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;

use crate::dirac::{chi_pair, p0, u_spinor, v_spinor, Momentum3, PhysicalConstants, SpinDirection};
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, Spinor4, C64, ZERO};
use crate::observables::ObservableRow;
use crate::spin::{spin_matrices, SpinKind};

/// Largest norm change tolerated in a single integration step.
pub const MAX_STEP_NORM_CHANGE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Envelope {
    /// `sin²(πt/t_end)` on `[0, t_end]`, zero outside.
    Sin2,
}

impl Envelope {
    pub fn value(self, t: f64, t_end: f64) -> f64 {
        match self {
            Envelope::Sin2 if (0.0..=t_end).contains(&t) => (PI * t / t_end).sin().powi(2),
            Envelope::Sin2 => 0.0,
        }
    }
}

/// Ponderomotive potential `V0 cos²(k·r) w(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaserParams {
    pub v0: f64,
    pub k: Momentum3,
    /// Pulse duration in laser periods.
    pub t_end_periods: f64,
    pub envelope: Envelope,
}

impl LaserParams {
    pub fn new(v0: f64, k: Momentum3, t_end_periods: f64) -> Result<Self> {
        if !(k.norm() > 0.0 && k.is_finite()) {
            return Err(Error::invalid(
                "laser wave vector must be finite and nonzero",
            ));
        }
        if !v0.is_finite() || !(t_end_periods > 0.0 && t_end_periods.is_finite()) {
            return Err(Error::invalid(format!(
                "need finite V0 and positive duration, got V0 = {v0}, t_end = {t_end_periods}"
            )));
        }
        Ok(LaserParams {
            v0,
            k,
            t_end_periods,
            envelope: Envelope::Sin2,
        })
    }

    /// `V0 = 0.88 m0c²`, `k = (0.5, 0, 0) m0c`, 10.7 periods.
    pub fn kapitza_scenario(constants: &PhysicalConstants) -> Self {
        LaserParams {
            v0: 0.88 * constants.rest_energy(),
            k: Momentum3::new(0.5, 0.0, 0.0) * constants.m0c(),
            t_end_periods: 10.7,
            envelope: Envelope::Sin2,
        }
    }

    /// Laser period `2π/(c|k|)`.
    pub fn period(&self, constants: &PhysicalConstants) -> f64 {
        TAU / (constants.c() * self.k.norm())
    }

    pub fn t_end(&self, constants: &PhysicalConstants) -> f64 {
        self.t_end_periods * self.period(constants)
    }

    pub fn envelope_at(&self, t: f64, constants: &PhysicalConstants) -> f64 {
        self.envelope.value(t, self.t_end(constants))
    }
}

/// Geometry of a ladder: sites `n ∈ [−n_max, n_max]` at momenta `p + n k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderSpec {
    pub n_max: usize,
    pub p: Momentum3,
    pub k: Momentum3,
    /// Quantization axis of the two-spinors `χ↑, χ↓`.
    pub direction: SpinDirection,
}

impl LadderSpec {
    pub fn new(n_max: usize, p: Momentum3, k: Momentum3, direction: SpinDirection) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::invalid(format!(
                "ladder truncation n_max = {n_max} must be at least 2"
            )));
        }
        if !p.is_finite() || !k.is_finite() {
            return Err(Error::invalid("ladder momenta must be finite"));
        }
        Ok(LadderSpec {
            n_max,
            p,
            k,
            direction,
        })
    }

    /// `p = (−0.3169, 0, 0.1) m0c`, spin along z, `n_max = 8`.
    pub fn kapitza_scenario(constants: &PhysicalConstants, laser: &LaserParams) -> Self {
        LadderSpec {
            n_max: 8,
            p: Momentum3::new(-0.3169, 0.0, 0.1) * constants.m0c(),
            k: laser.k,
            direction: SpinDirection::z(),
        }
    }

    pub fn sites(&self) -> usize {
        2 * self.n_max + 1
    }

    /// Ladder order of site `i`.
    pub fn order(&self, i: usize) -> i64 {
        i as i64 - self.n_max as i64
    }

    pub fn momentum(&self, i: usize) -> Momentum3 {
        self.p + self.k * self.order(i) as f64
    }

    /// Columns `u(χ↑), u(χ↓), v(χ↑), v(χ↓)` at the momentum of site `i`.
    pub fn basis(&self, constants: &PhysicalConstants, i: usize) -> Matrix4 {
        let q = self.momentum(i);
        let (up, down) = chi_pair(&self.direction);
        Matrix4::from_columns(&[
            u_spinor(constants, &up, &q),
            u_spinor(constants, &down, &q),
            v_spinor(constants, &up, &q),
            v_spinor(constants, &down, &q),
        ])
    }
}

/// Amplitudes `(c⁺↑, c⁺↓, c⁻↑, c⁻↓)` per ladder site.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeLadder {
    pub spec: LadderSpec,
    pub amplitudes: Vec<Spinor4>,
}

impl ModeLadder {
    /// All amplitude in `c₀⁺↑`.
    pub fn initial(spec: LadderSpec) -> Self {
        let mut amplitudes = vec![Spinor4::zeros(); spec.sites()];
        amplitudes[spec.n_max][0] = C64::from(1.0);
        ModeLadder { spec, amplitudes }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_squared()).sum()
    }

    /// `Σ|c⁻|²`.
    pub fn negative_energy_weight(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a[2].norm_sqr() + a[3].norm_sqr())
            .sum()
    }

    pub fn site(&self, n: i64) -> Option<&Spinor4> {
        let i = n + self.spec.n_max as i64;
        usize::try_from(i).ok().and_then(|i| self.amplitudes.get(i))
    }

    /// Largest amplitude difference over sites present in both ladders.
    pub fn max_difference(&self, other: &ModeLadder) -> f64 {
        let n = self.spec.n_max.min(other.spec.n_max) as i64;
        let mut d = 0.0f64;
        for order in -n..=n {
            if let (Some(a), Some(b)) = (self.site(order), other.site(order)) {
                d = d.max((a - b).camax());
            }
        }
        // sites outside the common range count in full
        for l in [self, other] {
            for (i, a) in l.amplitudes.iter().enumerate() {
                if l.spec.order(i).abs() > n {
                    d = d.max(a.camax());
                }
            }
        }
        d
    }
}

/// Time-independent pieces of `i dc/dt = M(t) c` in the free-spinor basis.
#[derive(Clone, Debug)]
pub struct CouplingTensor {
    pub spec: LadderSpec,
    pub v0: f64,
    /// Free energies `(+E, +E, −E, −E)` per site with `E = c p0(p + n k)`.
    pub energies: Vec<[f64; 4]>,
    /// `B_n† B_{n+2}`; the entry for site `i` couples it to site `i + 2`.
    pub overlaps_up: Vec<Matrix4>,
}

pub fn build_coupling(
    params: &LaserParams,
    constants: &PhysicalConstants,
    spec: &LadderSpec,
) -> Result<CouplingTensor> {
    if spec.n_max < 2 {
        return Err(Error::invalid("ladder truncation n_max must be at least 2"));
    }
    let bases: Vec<Matrix4> = (0..spec.sites())
        .map(|i| spec.basis(constants, i))
        .collect();
    let energies = (0..spec.sites())
        .map(|i| {
            let e = constants.c() * p0(constants, &spec.momentum(i));
            [e, e, -e, -e]
        })
        .collect();
    let overlaps_up = (0..spec.sites() - 2)
        .map(|i| bases[i].adjoint() * bases[i + 2])
        .collect();
    Ok(CouplingTensor {
        spec: *spec,
        v0: params.v0,
        energies,
        overlaps_up,
    })
}

impl CouplingTensor {
    /// `M c` at envelope value `w`.
    pub fn apply(&self, w: f64, c: &[Spinor4], out: &mut [Spinor4]) {
        let vw = C64::from(self.v0 * w);
        let quarter = C64::from(0.25);
        let sites = c.len();
        for i in 0..sites {
            let e = &self.energies[i];
            let mut v = Spinor4::from_fn(|s, _| c[i][s] * e[s]);
            if w != 0.0 {
                let mut pot = c[i] * C64::from(0.5);
                if i >= 2 {
                    pot += self.overlaps_up[i - 2].adjoint() * c[i - 2] * quarter;
                }
                if i + 2 < sites {
                    pot += self.overlaps_up[i] * c[i + 2] * quarter;
                }
                v += pot * vw;
            }
            out[i] = v;
        }
    }

    /// Full `M` at envelope value `w`, sites ordered by ladder index.
    pub fn dense_matrix(&self, w: f64) -> DMatrix<C64> {
        let sites = self.energies.len();
        let mut m = DMatrix::from_element(4 * sites, 4 * sites, ZERO);
        let vw = C64::from(self.v0 * w);
        for i in 0..sites {
            for s in 0..4 {
                m[(4 * i + s, 4 * i + s)] = C64::from(self.energies[i][s]) + vw * 0.5;
            }
            if i + 2 < sites {
                let up = self.overlaps_up[i] * (vw * 0.25);
                m.view_mut((4 * i, 4 * (i + 2)), (4, 4)).copy_from(&up);
                m.view_mut((4 * (i + 2), 4 * i), (4, 4))
                    .copy_from(&up.adjoint());
            }
        }
        m
    }
}

/// A sampled point of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderSample {
    pub t: f64,
    pub ladder: ModeLadder,
}

/// Classical RK4 over the pulse `[0, t_end]`, sampled at the `intervals + 1`
/// equally spaced times `j t_end / intervals`.
///
/// Each sampling interval is split into the smallest number of equal steps
/// not exceeding `dt`, so sample times do not depend on `dt`.
pub fn integrate(
    ladder: &ModeLadder,
    params: &LaserParams,
    constants: &PhysicalConstants,
    dt: f64,
    intervals: usize,
) -> Result<Vec<LadderSample>> {
    if !(dt > 0.0 && dt.is_finite()) || intervals == 0 {
        return Err(Error::invalid(format!(
            "need dt > 0 and at least one interval, got dt = {dt}, intervals = {intervals}"
        )));
    }
    let norm0 = ladder.norm();
    if (norm0 - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "initial ladder norm is {norm0}, expected 1"
        )));
    }
    let coupling = build_coupling(params, constants, &ladder.spec)?;
    let t_end = params.t_end(constants);
    let span = t_end / intervals as f64;
    let steps = (span / dt).ceil() as usize;
    let h = span / steps as f64;
    let sites = ladder.amplitudes.len();

    let mut c = ladder.amplitudes.clone();
    let mut k = vec![vec![Spinor4::zeros(); sites]; 4];
    let mut tmp = vec![Spinor4::zeros(); sites];
    let minus_i = C64::new(0.0, -1.0);
    let mut samples = vec![LadderSample {
        t: 0.0,
        ladder: ladder.clone(),
    }];
    let mut norm = norm0;
    for j in 0..intervals {
        let t0 = j as f64 * span;
        for step in 0..steps {
            let t = t0 + step as f64 * h;
            let w = [
                params.envelope_at(t, constants),
                params.envelope_at(t + 0.5 * h, constants),
                params.envelope_at(t + h, constants),
            ];
            coupling.apply(w[0], &c, &mut k[0]);
            for stage in 1..4 {
                let frac = if stage == 3 { 1.0 } else { 0.5 };
                for i in 0..sites {
                    tmp[i] = c[i] + k[stage - 1][i] * (minus_i * h * frac);
                }
                let (_, rest) = k.split_at_mut(stage);
                coupling.apply(w[stage.div_ceil(2)], &tmp, &mut rest[0]);
            }
            for i in 0..sites {
                c[i] += (k[0][i] + (k[1][i] + k[2][i]) * C64::from(2.0) + k[3][i])
                    * (minus_i * h / 6.0);
            }
            let next = c.iter().map(|a| a.norm_squared()).sum::<f64>();
            if (next - norm).abs() > MAX_STEP_NORM_CHANGE || !next.is_finite() {
                return Err(Error::StepTooLarge {
                    change: (next - norm).abs(),
                    t: t + h,
                });
            }
            norm = next;
        }
        samples.push(LadderSample {
            t: (j + 1) as f64 * span,
            ladder: ModeLadder {
                spec: ladder.spec,
                amplitudes: c.clone(),
            },
        });
    }
    Ok(samples)
}

/// Spin expectations summed site by site with each kind's matrix at the
/// site momentum. `x_mean` is NaN because ladder states are delocalized.
pub fn kd_observables(
    ladder: &ModeLadder,
    constants: &PhysicalConstants,
    n: &SpinDirection,
) -> Result<ObservableRow> {
    let norm = ladder.norm();
    let mut spin = [0.0; 7];
    for (i, c) in ladder.amplitudes.iter().enumerate() {
        if c.norm_squared() == 0.0 {
            continue;
        }
        let q = ladder.spec.momentum(i);
        let psi = ladder.spec.basis(constants, i) * c;
        for kind in SpinKind::ALL {
            let s = spin_matrices(kind, constants, &q)?.component(n);
            spin[kind.index()] += psi.dotc(&(s * psi)).re;
        }
    }
    Ok(ObservableRow {
        t: 0.0,
        norm,
        x_mean: f64::NAN,
        neg_energy: ladder.negative_energy_weight() / norm,
        spin: spin.map(|s| s / norm),
    })
}

/// Integrate from the initial ladder and measure; row times are in laser periods.
pub fn run_kapitza(
    params: &LaserParams,
    spec: &LadderSpec,
    constants: &PhysicalConstants,
    steps_per_period: usize,
    samples_per_period: usize,
    n: &SpinDirection,
) -> Result<Vec<ObservableRow>> {
    if steps_per_period == 0 || samples_per_period == 0 {
        return Err(Error::invalid(
            "steps and samples per period must be positive",
        ));
    }
    let period = params.period(constants);
    let intervals = ((params.t_end_periods * samples_per_period as f64).round() as usize).max(1);
    let samples = integrate(
        &ModeLadder::initial(*spec),
        params,
        constants,
        period / steps_per_period as f64,
        intervals,
    )?;
    samples
        .iter()
        .map(|s| {
            let mut row = kd_observables(&s.ladder, constants, n)?;
            row.t = s.t / period;
            Ok(row)
        })
        .collect()
}
