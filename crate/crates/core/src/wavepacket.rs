//! Split-operator propagation of Dirac wave packets on a periodic 2D grid.
//!
//! Position-space arrays are stored row-major with `x` fastest
//! (`index = iy * nx + ix`); momentum-space arrays use the same layout with
//! FFT ordering of the lattice momenta.

use std::f64::consts::TAU;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::dirac::{
    energy_projector, free_hamiltonian, p0, u_spinor, EnergySign, Momentum3, PhysicalConstants,
    SpinDirection,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, Spinor4, TwoSpinor, C64, ZERO};
use crate::observables::ObservableRow;
use crate::spin::{spin_matrices, SpinKind};

/// Points per parallel task in pointwise loops and reductions. Fixed so that
/// reductions are summed in the same order for any thread count.
const CHUNK: usize = 4096;
/// Relative density below which momentum points are skipped when measuring.
const MEASURE_CUTOFF: f64 = 1e-24;
/// Boundary density ratio above which a packet is rejected.
pub const PACKET_TAIL_LIMIT: f64 = 1e-8;
/// Probability allowed in the x boundary shells during a run.
pub const BOUNDARY_LEAK_LIMIT: f64 = 1e-6;
/// Width of each x boundary shell as a fraction of the domain length.
pub const BOUNDARY_SHELL_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Grid2D {
    /// Periodic grid with `nx × ny` points; `x_max` and `y_max` are not sampled.
    pub fn new(nx: usize, ny: usize, x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::invalid(format!(
                    "{name} = {n} must be a power of two and at least 2"
                )));
            }
        }
        for (name, (lo, hi)) in [("x", x_range), ("y", y_range)] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::invalid(format!(
                    "{name} range [{lo}, {hi}] is empty or not finite"
                )));
            }
        }
        Ok(Grid2D {
            nx,
            ny,
            x_min: x_range.0,
            x_max: x_range.1,
            y_min: y_range.0,
            y_max: y_range.1,
        })
    }

    /// 1024 × 128 points on x ∈ [−0.6, 0.2), y ∈ [−0.2, 0.2).
    pub fn step_scenario() -> Self {
        Grid2D::new(1024, 128, (-0.6, 0.2), (-0.2, 0.2)).expect("valid default grid")
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn y_bounds(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.x_min + ix as f64 * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + iy as f64 * self.dy()
    }

    pub fn dpx(&self) -> f64 {
        TAU / (self.x_max - self.x_min)
    }

    pub fn dpy(&self) -> f64 {
        TAU / (self.y_max - self.y_min)
    }

    /// Lattice momentum of FFT bin `kx`; the Nyquist bin is negative.
    pub fn px(&self, kx: usize) -> f64 {
        signed_bin(kx, self.nx) * self.dpx()
    }

    pub fn py(&self, ky: usize) -> f64 {
        signed_bin(ky, self.ny) * self.dpy()
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    fn momentum_at(&self, idx: usize) -> Momentum3 {
        Momentum3::new(self.px(idx % self.nx), self.py(idx / self.nx), 0.0)
    }
}

fn signed_bin(k: usize, n: usize) -> f64 {
    if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Position,
    Momentum,
}

/// Four-component spinor field on a [`Grid2D`].
///
/// In momentum representation the values are the continuum transform
/// `ψ̃(p) = (2π)⁻¹ ∫ ψ(r) e^{−ip·r} d²r` sampled on the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField2D {
    grid: Grid2D,
    repr: Representation,
    data: [Vec<C64>; 4],
}

impl SpinorField2D {
    pub fn zeros(grid: Grid2D, repr: Representation) -> Self {
        let n = grid.len();
        SpinorField2D {
            grid,
            repr,
            data: std::array::from_fn(|_| vec![ZERO; n]),
        }
    }

    /// Field with `f(ix, iy)` (or `f(kx, ky)` in momentum representation) at each point.
    pub fn from_fn(
        grid: Grid2D,
        repr: Representation,
        f: impl Fn(usize, usize) -> Spinor4 + Sync,
    ) -> Self {
        let mut field = SpinorField2D::zeros(grid, repr);
        let values: Vec<Spinor4> = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(idx % grid.nx, idx / grid.nx))
            .collect();
        for (idx, v) in values.iter().enumerate() {
            for c in 0..4 {
                field.data[c][idx] = v[c];
            }
        }
        field
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn component(&self, c: usize) -> &[C64] {
        &self.data[c]
    }

    pub fn get(&self, i: usize, j: usize) -> Spinor4 {
        let idx = self.grid.index(i, j);
        Spinor4::new(
            self.data[0][idx],
            self.data[1][idx],
            self.data[2][idx],
            self.data[3][idx],
        )
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn cell(&self) -> f64 {
        match self.repr {
            Representation::Position => self.grid.dx() * self.grid.dy(),
            Representation::Momentum => self.grid.dpx() * self.grid.dpy(),
        }
    }

    /// L² norm squared, `Σ|ψ|² dx dy` or `Σ|ψ̃|² dpx dpy`.
    pub fn norm(&self) -> f64 {
        sum_sq(&self.data) * self.cell()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid(format!(
                "cannot normalize a field with norm {n}"
            )));
        }
        let s = C64::from(n.sqrt().recip());
        for comp in &mut self.data {
            comp.par_iter_mut().for_each(|z| *z *= s);
        }
        Ok(())
    }

    /// `sqrt(∫|ψ − φ|²)` in the representation of `self`.
    pub fn l2_distance(&self, other: &SpinorField2D) -> Result<f64> {
        let other = other.to_representation(self.repr)?;
        if other.grid != self.grid {
            return Err(Error::invalid("fields live on different grids"));
        }
        let s: f64 = (0..4)
            .map(|c| {
                self.data[c]
                    .par_chunks(CHUNK)
                    .zip(other.data[c].par_chunks(CHUNK))
                    .map(|(a, b)| {
                        a.iter()
                            .zip(b)
                            .map(|(x, y)| (x - y).norm_sqr())
                            .sum::<f64>()
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .sum::<f64>()
            })
            .sum();
        Ok((s * self.cell()).sqrt())
    }

    pub fn to_representation(&self, repr: Representation) -> Result<SpinorField2D> {
        match (self.repr, repr) {
            (a, b) if a == b => Ok(self.clone()),
            (_, Representation::Momentum) => Ok(self.to_momentum()),
            (_, Representation::Position) => Ok(self.to_position()),
        }
    }

    pub fn to_momentum(&self) -> SpinorField2D {
        if self.repr == Representation::Momentum {
            return self.clone();
        }
        let g = self.grid;
        let plans = FftPlans::new(&g);
        let mut out = self.clone();
        let phase = momentum_phases(&g, -1.0, g.dx() * g.dy() / TAU);
        for comp in &mut out.data {
            plans.forward_2d(comp);
            mul_pointwise(comp, &phase);
        }
        out.repr = Representation::Momentum;
        out
    }

    pub fn to_position(&self) -> SpinorField2D {
        if self.repr == Representation::Position {
            return self.clone();
        }
        let g = self.grid;
        let plans = FftPlans::new(&g);
        let mut out = self.clone();
        let phase = momentum_phases(&g, 1.0, TAU / (g.dx() * g.dy()));
        for comp in &mut out.data {
            mul_pointwise(comp, &phase);
            plans.inverse_2d(comp);
        }
        out.repr = Representation::Position;
        out
    }
}

/// `scale · e^{i sign p·r_min}` at every lattice momentum.
fn momentum_phases(g: &Grid2D, sign: f64, scale: f64) -> Vec<C64> {
    (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let p = g.momentum_at(idx);
            C64::from_polar(scale, sign * (p.px * g.x_min + p.py * g.y_min))
        })
        .collect()
}

fn mul_pointwise(data: &mut [C64], factor: &[C64]) {
    data.par_chunks_mut(CHUNK)
        .zip(factor.par_chunks(CHUNK))
        .for_each(|(d, f)| d.iter_mut().zip(f).for_each(|(z, w)| *z *= w));
}

fn sum_sq(data: &[Vec<C64>; 4]) -> f64 {
    data.iter()
        .map(|comp| {
            comp.par_chunks(CHUNK)
                .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
                .collect::<Vec<_>>()
                .into_iter()
                .sum::<f64>()
        })
        .sum()
}

struct FftPlans {
    nx: usize,
    ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl FftPlans {
    fn new(g: &Grid2D) -> Self {
        let mut planner = FftPlanner::new();
        FftPlans {
            nx: g.nx,
            ny: g.ny,
            fwd_x: planner.plan_fft_forward(g.nx),
            inv_x: planner.plan_fft_inverse(g.nx),
            fwd_y: planner.plan_fft_forward(g.ny),
            inv_y: planner.plan_fft_inverse(g.ny),
        }
    }

    /// Unnormalized transform of every contiguous row of length `fft.len()`.
    fn rows(fft: &Arc<dyn Fft<f64>>, data: &mut [C64]) {
        let n = fft.len();
        let rows_per_task = (CHUNK / n).max(1);
        data.par_chunks_mut(n * rows_per_task).for_each(|chunk| {
            let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
            fft.process_with_scratch(chunk, &mut scratch);
        });
    }

    fn columns(&self, fft: &Arc<dyn Fft<f64>>, data: &mut [C64]) {
        let (nx, ny) = (self.nx, self.ny);
        let mut t = vec![ZERO; data.len()];
        t.par_chunks_mut(ny).enumerate().for_each(|(ix, col)| {
            for (iy, v) in col.iter_mut().enumerate() {
                *v = data[iy * nx + ix];
            }
        });
        Self::rows(fft, &mut t);
        data.par_chunks_mut(nx).enumerate().for_each(|(iy, row)| {
            for (ix, v) in row.iter_mut().enumerate() {
                *v = t[ix * ny + iy];
            }
        });
    }

    fn forward_x(&self, data: &mut [C64]) {
        Self::rows(&self.fwd_x, data);
    }

    /// Inverse along x including the `1/nx` factor.
    fn inverse_x(&self, data: &mut [C64]) {
        Self::rows(&self.inv_x, data);
        scale(data, 1.0 / self.nx as f64);
    }

    fn forward_y(&self, data: &mut [C64]) {
        self.columns(&self.fwd_y, data);
    }

    fn inverse_y(&self, data: &mut [C64]) {
        self.columns(&self.inv_y, data);
        scale(data, 1.0 / self.ny as f64);
    }

    fn forward_2d(&self, data: &mut [C64]) {
        self.forward_x(data);
        self.forward_y(data);
    }

    fn inverse_2d(&self, data: &mut [C64]) {
        self.inverse_y(data);
        self.inverse_x(data);
    }
}

fn scale(data: &mut [C64], s: f64) {
    data.par_iter_mut().for_each(|z| *z *= s);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPotentialParams {
    /// Barrier height (energy).
    pub v0: f64,
    /// Smoothing width (length).
    pub w: f64,
}

impl StepPotentialParams {
    pub fn new(v0: f64, w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite() && v0.is_finite()) {
            return Err(Error::invalid(format!(
                "step potential needs finite V0 and w > 0, got V0 = {v0}, w = {w}"
            )));
        }
        Ok(StepPotentialParams { v0, w })
    }

    /// `V0 = 1.95 m0c²`, `w = 1/(4c)`.
    pub fn step_scenario(constants: &PhysicalConstants) -> Self {
        StepPotentialParams {
            v0: 1.95 * constants.rest_energy(),
            w: 1.0 / (4.0 * constants.c()),
        }
    }

    /// Potential energy `(V0/2)(1 + tanh(x/w))`.
    pub fn value(&self, x: f64) -> f64 {
        0.5 * self.v0 * (1.0 + (x / self.w).tanh())
    }
}

/// Potential energy sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField {
    grid: Grid2D,
    values: Vec<f64>,
}

impl PotentialField {
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|idx| f(grid.x(idx % grid.nx), grid.y(idx / grid.nx)))
            .collect();
        PotentialField { grid, values }
    }

    pub fn constant(grid: Grid2D, v: f64) -> Self {
        PotentialField {
            grid,
            values: vec![v; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.index(ix, iy)]
    }

    /// True when every row equals the first one exactly.
    pub fn is_y_independent(&self) -> bool {
        let first = &self.values[..self.grid.nx];
        self.values.chunks(self.grid.nx).all(|row| row == first)
    }
}

pub fn build_step_potential(params: &StepPotentialParams, grid: &Grid2D) -> PotentialField {
    PotentialField::from_fn(*grid, |x, _| params.value(x))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPacketSpec {
    /// Standard deviation of the position density per axis.
    pub spatial_width: f64,
    pub center: (f64, f64),
    pub mean_momentum: (f64, f64),
    /// Normalized upper-component spinor; the packet lies on the positive-energy branch.
    pub chi: TwoSpinor,
}

impl GaussianPacketSpec {
    pub fn new(
        spatial_width: f64,
        center: (f64, f64),
        mean_momentum: (f64, f64),
        chi: TwoSpinor,
    ) -> Result<Self> {
        if !(spatial_width > 0.0 && spatial_width.is_finite()) {
            return Err(Error::invalid(format!(
                "spatial width must be positive, got {spatial_width}"
            )));
        }
        if ((chi.norm_squared()) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("two-spinor must be normalized"));
        }
        Ok(GaussianPacketSpec {
            spatial_width,
            center,
            mean_momentum,
            chi,
        })
    }

    /// Width 0.025 at (−0.175, 0) with momentum (m0c, 0) and spin up along y.
    pub fn step_scenario(constants: &PhysicalConstants) -> Self {
        let (up, _) = crate::dirac::chi_pair(&SpinDirection::y());
        GaussianPacketSpec {
            spatial_width: 0.025,
            center: (-0.175, 0.0),
            mean_momentum: (constants.m0c(), 0.0),
            chi: up,
        }
    }

    /// Standard deviation of the momentum density per axis.
    pub fn momentum_width(&self) -> f64 {
        0.5 / self.spatial_width
    }
}

/// Positive-energy Gaussian packet `g(p) u(χ, p) e^{−ip·r0}`, normalized, in
/// position representation.
pub fn initial_packet(
    spec: &GaussianPacketSpec,
    grid: &Grid2D,
    constants: &PhysicalConstants,
) -> Result<SpinorField2D> {
    let ratio = packet_tail_ratio(spec, grid);
    if !(ratio <= PACKET_TAIL_LIMIT) {
        return Err(Error::PacketTooWide {
            ratio,
            limit: PACKET_TAIL_LIMIT,
        });
    }
    let sp = spec.momentum_width();
    let (x0, y0) = spec.center;
    let (mx, my) = spec.mean_momentum;
    let mut field = SpinorField2D::from_fn(*grid, Representation::Momentum, |kx, ky| {
        let (px, py) = (grid.px(kx), grid.py(ky));
        let g = (-((px - mx).powi(2) + (py - my).powi(2)) / (4.0 * sp * sp)).exp();
        let phase = C64::from_polar(g, -(px * x0 + py * y0));
        u_spinor(constants, &spec.chi, &Momentum3::new(px, py, 0.0)) * phase
    });
    field.normalize()?;
    let mut field = field.to_position();
    field.normalize()?;
    Ok(field)
}

/// Largest Gaussian density ratio (relative to the peak) at the position
/// boundary or the momentum lattice edge.
fn packet_tail_ratio(spec: &GaussianPacketSpec, grid: &Grid2D) -> f64 {
    let w = spec.spatial_width;
    let sp = spec.momentum_width();
    let (x0, y0) = spec.center;
    let (mx, my) = spec.mean_momentum;
    let dist = [
        (x0 - grid.x_min) / w,
        (grid.x_max - x0) / w,
        (y0 - grid.y_min) / w,
        (grid.y_max - y0) / w,
        (0.5 * grid.nx as f64 * grid.dpx() - mx.abs()) / sp,
        (0.5 * grid.ny as f64 * grid.dpy() - my.abs()) / sp,
    ];
    let d = dist.into_iter().fold(f64::INFINITY, f64::min);
    if d <= 0.0 {
        return 1.0;
    }
    (-0.5 * d * d).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub sample_every: usize,
}

impl PropagationConfig {
    pub fn new(dt: f64, n_steps: usize, sample_every: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!(
                "time step must be positive, got {dt}"
            )));
        }
        if sample_every == 0 {
            return Err(Error::invalid("sample_every must be at least 1"));
        }
        Ok(PropagationConfig {
            dt,
            n_steps,
            sample_every,
        })
    }

    /// 3500 steps of 1e-6 to t = 0.0035, sampled every 50 steps.
    pub fn step_scenario() -> Self {
        PropagationConfig {
            dt: 1e-6,
            n_steps: 3500,
            sample_every: 50,
        }
    }
}

enum HalfPhase {
    /// One factor per x column.
    Rows(Vec<C64>),
    Full(Vec<C64>),
}

/// Precomputed Strang splitting step for a fixed potential and time step.
pub struct SplitOperator {
    grid: Grid2D,
    dt: f64,
    half_phase: HalfPhase,
    kinetic: Vec<Matrix4>,
    plans: FftPlans,
}

impl SplitOperator {
    /// `dt` may be negative for backward propagation.
    pub fn new(potential: &PotentialField, constants: &PhysicalConstants, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::invalid(format!(
                "time step must be finite and nonzero, got {dt}"
            )));
        }
        if potential.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("potential has non-finite values"));
        }
        let grid = potential.grid;
        let phase = |v: f64| C64::from_polar(1.0, -0.5 * v * dt);
        let half_phase = if potential.is_y_independent() {
            HalfPhase::Rows(
                potential.values[..grid.nx]
                    .iter()
                    .map(|&v| phase(v))
                    .collect(),
            )
        } else {
            HalfPhase::Full(potential.values.iter().map(|&v| phase(v)).collect())
        };
        let c = constants.c();
        let kinetic = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let p = grid.momentum_at(idx);
                let e = c * p0(constants, &p);
                let (s, co) = (e * dt).sin_cos();
                Matrix4::identity() * C64::from(co)
                    - free_hamiltonian(constants, &p) * C64::new(0.0, s / e)
            })
            .collect();
        Ok(SplitOperator {
            grid,
            dt,
            half_phase,
            kinetic,
            plans: FftPlans::new(&grid),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    /// Whether the potential allows propagation in the mixed `(x, p_y)` representation.
    pub fn is_y_independent(&self) -> bool {
        matches!(self.half_phase, HalfPhase::Rows(_))
    }

    /// Advance a field by one step. The result is in position representation.
    pub fn step(&self, field: &mut SpinorField2D) -> Result<()> {
        self.check_grid(field)?;
        if field.repr == Representation::Momentum {
            *field = field.to_position();
        }
        self.apply_half_phase(&mut field.data, false);
        for comp in &mut field.data {
            self.plans.forward_2d(comp);
        }
        self.apply_kinetic(&mut field.data);
        for comp in &mut field.data {
            self.plans.inverse_2d(comp);
        }
        self.apply_half_phase(&mut field.data, false);
        Ok(())
    }

    /// Advance `n` steps.
    pub fn propagate(&self, field: &mut SpinorField2D, n: usize) -> Result<()> {
        self.check_grid(field)?;
        if field.repr == Representation::Momentum {
            *field = field.to_position();
        }
        if self.is_y_independent() {
            let mut mixed = MixedField::from_position(field, &self.plans);
            for _ in 0..n {
                self.step_mixed(&mut mixed);
            }
            *field = mixed.to_position(&self.plans);
        } else {
            for _ in 0..n {
                self.step(field)?;
            }
        }
        Ok(())
    }

    fn check_grid(&self, field: &SpinorField2D) -> Result<()> {
        if field.grid != self.grid {
            return Err(Error::invalid(
                "field and potential live on different grids",
            ));
        }
        Ok(())
    }

    fn apply_half_phase(&self, data: &mut [Vec<C64>; 4], mixed: bool) {
        let nx = self.grid.nx;
        match &self.half_phase {
            HalfPhase::Rows(ph) => {
                for comp in data.iter_mut() {
                    comp.par_chunks_mut(nx)
                        .for_each(|row| row.iter_mut().zip(ph).for_each(|(z, w)| *z *= w));
                }
            }
            HalfPhase::Full(ph) => {
                debug_assert!(!mixed);
                for comp in data.iter_mut() {
                    mul_pointwise(comp, ph);
                }
            }
        }
    }

    fn apply_kinetic(&self, data: &mut [Vec<C64>; 4]) {
        let [a, b, c, d] = data;
        a.par_chunks_mut(CHUNK)
            .zip(b.par_chunks_mut(CHUNK))
            .zip(c.par_chunks_mut(CHUNK))
            .zip(d.par_chunks_mut(CHUNK))
            .zip(self.kinetic.par_chunks(CHUNK))
            .for_each(|((((a, b), c), d), k)| {
                for i in 0..k.len() {
                    let v = k[i] * Spinor4::new(a[i], b[i], c[i], d[i]);
                    a[i] = v[0];
                    b[i] = v[1];
                    c[i] = v[2];
                    d[i] = v[3];
                }
            });
    }

    /// One step in the mixed representation; only x transforms are needed.
    fn step_mixed(&self, m: &mut MixedField) {
        self.apply_half_phase(&mut m.data, true);
        for comp in &mut m.data {
            self.plans.forward_x(comp);
        }
        self.apply_kinetic(&mut m.data);
        for comp in &mut m.data {
            self.plans.inverse_x(comp);
        }
        self.apply_half_phase(&mut m.data, true);
    }
}

/// Field transformed along y only: rows are indexed by `p_y` bins.
struct MixedField {
    grid: Grid2D,
    data: [Vec<C64>; 4],
}

impl MixedField {
    fn from_position(field: &SpinorField2D, plans: &FftPlans) -> Self {
        let mut data = field.data.clone();
        for comp in &mut data {
            plans.forward_y(comp);
        }
        MixedField {
            grid: field.grid,
            data,
        }
    }

    fn to_position(&self, plans: &FftPlans) -> SpinorField2D {
        let mut data = self.data.clone();
        for comp in &mut data {
            plans.inverse_y(comp);
        }
        SpinorField2D {
            grid: self.grid,
            repr: Representation::Position,
            data,
        }
    }

    /// Norm, `⟨x⟩` and the probability in the x boundary shells.
    fn position_moments(&self) -> PositionMoments {
        let g = self.grid;
        let weights = x_marginal(&self.data, g.nx);
        // Parseval along y: Σ_iy |ψ|² = Σ_ky |ψ̂|² / ny
        PositionMoments::from_marginal(&g, &weights, g.dx() * g.dy() / g.ny as f64)
    }

    fn momentum_raw(&self, plans: &FftPlans) -> [Vec<C64>; 4] {
        let mut data = self.data.clone();
        for comp in &mut data {
            plans.forward_x(comp);
        }
        data
    }
}

/// `Σ_rows |ψ|²` for each column.
fn x_marginal(data: &[Vec<C64>; 4], nx: usize) -> Vec<f64> {
    let mut out = vec![0.0; nx];
    for comp in data {
        for row in comp.chunks(nx) {
            for (o, z) in out.iter_mut().zip(row) {
                *o += z.norm_sqr();
            }
        }
    }
    out
}

struct PositionMoments {
    norm: f64,
    x_mean: f64,
    shell: f64,
}

impl PositionMoments {
    fn from_marginal(g: &Grid2D, weights: &[f64], cell: f64) -> Self {
        let total: f64 = weights.iter().sum();
        let x_sum: f64 = weights.iter().enumerate().map(|(ix, w)| g.x(ix) * w).sum();
        let shell_width = BOUNDARY_SHELL_FRACTION * (g.x_max - g.x_min);
        let shell: f64 = weights
            .iter()
            .enumerate()
            .filter(|(ix, _)| {
                let x = g.x(*ix);
                x < g.x_min + shell_width || x >= g.x_max - shell_width
            })
            .map(|(_, w)| w)
            .sum();
        PositionMoments {
            norm: total * cell,
            x_mean: x_sum / total,
            shell: shell / total,
        }
    }
}

/// Norm-relative `⟨Λ⁻⟩` and spin expectations from momentum amplitudes. Any
/// overall scale and any phase that is common to the four components at each
/// lattice point drop out.
fn momentum_expectations(
    grid: &Grid2D,
    data: &[Vec<C64>; 4],
    constants: &PhysicalConstants,
    n: &SpinDirection,
) -> (f64, [f64; 7]) {
    let density = |i: usize| data.iter().map(|c| c[i].norm_sqr()).sum::<f64>();
    let peak = (0..grid.len())
        .into_par_iter()
        .map(density)
        .reduce(|| 0.0, f64::max);
    let cutoff = MEASURE_CUTOFF * peak;
    let partials: Vec<[f64; 9]> = (0..grid.len())
        .into_par_iter()
        .chunks(CHUNK)
        .map(|idxs| {
            let mut acc = [0.0; 9];
            for i in idxs {
                let w = density(i);
                if w <= cutoff || w == 0.0 {
                    continue;
                }
                let psi = Spinor4::new(data[0][i], data[1][i], data[2][i], data[3][i]);
                let p = grid.momentum_at(i);
                acc[0] += w;
                let lm = energy_projector(constants, &p, EnergySign::Negative);
                acc[1] += psi.dotc(&(lm * psi)).re;
                for kind in SpinKind::ALL {
                    // direction-dependent kinds are undefined at p = 0
                    if let Ok(t) = spin_matrices(kind, constants, &p) {
                        acc[2 + kind.index()] += psi.dotc(&(t.component(n) * psi)).re;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; 9];
    for part in partials {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    let mut spin = [0.0; 7];
    for (k, s) in spin.iter_mut().enumerate() {
        *s = total[2 + k] / total[0];
    }
    (total[1] / total[0], spin)
}

/// Observables of a field; the returned row has `t = 0`.
pub fn measure(
    field: &SpinorField2D,
    constants: &PhysicalConstants,
    n: &SpinDirection,
) -> ObservableRow {
    let g = field.grid;
    let pos = field.to_position();
    let moments = PositionMoments::from_marginal(&g, &x_marginal(&pos.data, g.nx), g.dx() * g.dy());
    let mom = field.to_momentum();
    let (neg_energy, spin) = momentum_expectations(&g, &mom.data, constants, n);
    ObservableRow {
        t: 0.0,
        norm: moments.norm,
        x_mean: moments.x_mean,
        neg_energy,
        spin,
    }
}

/// One Strang step with a freshly built [`SplitOperator`].
pub fn split_step(
    field: &mut SpinorField2D,
    potential: &PotentialField,
    constants: &PhysicalConstants,
    dt: f64,
) -> Result<()> {
    SplitOperator::new(potential, constants, dt)?.step(field)
}

/// Scatter a Gaussian packet off a smooth step and record observables every
/// `sample_every` steps and at the final time.
///
/// The potential depends on x only, so the run propagates in the mixed
/// `(x, p_y)` representation. Probability crossing the periodic y boundary
/// does not change any observable in that case; only the x boundary shells
/// are checked for leakage.
pub fn run_step_scenario(
    grid: &Grid2D,
    spec: &GaussianPacketSpec,
    params: &StepPotentialParams,
    config: &PropagationConfig,
    constants: &PhysicalConstants,
    n: &SpinDirection,
) -> Result<Vec<ObservableRow>> {
    let potential = build_step_potential(params, grid);
    let field = initial_packet(spec, grid, constants)?;
    let op = SplitOperator::new(&potential, constants, config.dt)?;
    let mut mixed = MixedField::from_position(&field, &op.plans);
    let mut rows = Vec::with_capacity(config.n_steps / config.sample_every + 2);
    for step in 0..=config.n_steps {
        if step % config.sample_every == 0 || step == config.n_steps {
            let t = step as f64 * config.dt;
            let moments = mixed.position_moments();
            if moments.shell > BOUNDARY_LEAK_LIMIT {
                return Err(Error::BoundaryLeak {
                    probability: moments.shell,
                    t,
                });
            }
            let (neg_energy, spin) =
                momentum_expectations(grid, &mixed.momentum_raw(&op.plans), constants, n);
            rows.push(ObservableRow {
                t,
                norm: moments.norm,
                x_mean: moments.x_mean,
                neg_energy,
                spin,
            });
        }
        if step < config.n_steps {
            op.step_mixed(&mut mixed);
        }
    }
    Ok(rows)
}
