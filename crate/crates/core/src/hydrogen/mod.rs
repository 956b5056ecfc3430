//! Hydrogenic bound states and their spin statistics.
//!
//! States are described in momentum space as functions of `(p, θ′, φ′)`.
//! The ground state has closed-form radial parts; other bound states enter
//! through [`BoundStateTemplate`] with caller-supplied radial transforms.

mod special;
mod statistics;

use statrs::function::gamma::gamma;

use crate::dirac::PhysicalConstants;
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, Spinor4, C64};

pub use special::{
    special_j, special_j0, special_j1, spherical_bessel_j, spherical_harmonic, transform_radial,
    TransformSign,
};
pub use statistics::{
    matrix_element, momentum_norm, spin_statistics, superposition_spin_trace, QuadratureSpec,
    SpinStatistics,
};

/// Magnetic quantum number of a `j = 1/2` state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MagneticState {
    Up,
    Down,
}

impl MagneticState {
    pub fn twice_m(self) -> i32 {
        match self {
            MagneticState::Up => 1,
            MagneticState::Down => -1,
        }
    }
}

/// Nuclear charge, constants and magnetic quantum number of a ground state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HydrogenParams {
    z: f64,
    constants: PhysicalConstants,
    m: MagneticState,
}

impl HydrogenParams {
    /// `z` may be any real number with `0 < Zα < 1`.
    pub fn new(z: f64, constants: PhysicalConstants, m: MagneticState) -> Result<Self> {
        let za = z * constants.alpha_el();
        if !(za > 0.0 && za < 1.0) {
            return Err(Error::domain(
                "HydrogenParams::new",
                format!("Zα = {za} must lie in (0, 1) for Z = {z}"),
            ));
        }
        Ok(Self { z, constants, m })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn m(&self) -> MagneticState {
        self.m
    }

    pub fn with_m(&self, m: MagneticState) -> Self {
        Self { m, ..*self }
    }

    pub fn z_alpha(&self) -> f64 {
        self.z * self.constants.alpha_el()
    }

    /// `γ = sqrt(1 − Z²α²)`.
    pub fn gamma(&self) -> f64 {
        let za = self.z_alpha();
        ((1.0 - za) * (1.0 + za)).sqrt()
    }

    /// Inverse decay length `m0 c Zα` of the radial function.
    pub fn decay(&self) -> f64 {
        self.constants.m0c() * self.z_alpha()
    }

    /// `𝒩 = (2 m0 Z)^{3/2} sqrt((1 + γ) / (2 Γ(1 + 2γ)))`.
    pub fn normalization(&self) -> f64 {
        let g = self.gamma();
        (2.0 * self.decay()).powf(1.5) * ((1.0 + g) / (2.0 * gamma(1.0 + 2.0 * g))).sqrt()
    }

    /// Ratio `(1 − γ) / (Zα)` of the lower to the upper radial amplitude.
    pub fn lower_ratio(&self) -> f64 {
        let za = self.z_alpha();
        // 1 − γ = Z²α² / (1 + γ) avoids cancellation for small Z
        za / (1.0 + self.gamma())
    }
}

/// A bound state in momentum space.
pub trait MomentumWavefunction: Sync {
    /// Spinor amplitude at momentum magnitude `p > 0` and direction `(θ′, φ′)`.
    fn amplitude(&self, p: f64, theta: f64, phi: f64) -> Result<Spinor4>;

    /// Momentum scale at which the amplitude varies.
    fn momentum_scale(&self) -> f64;

    fn energy(&self) -> f64;
}

/// Position-space ground state.
#[derive(Clone, Copy, Debug)]
pub struct GroundStatePosition {
    params: HydrogenParams,
}

pub fn ground_state_position(params: &HydrogenParams) -> GroundStatePosition {
    GroundStatePosition { params: *params }
}

impl GroundStatePosition {
    /// `e^{−zr} (2zr)^{γ−1}` without normalization.
    pub fn radial(&self, r: f64) -> f64 {
        let z = self.params.decay();
        (-z * r).exp() * (2.0 * z * r).powf(self.params.gamma() - 1.0)
    }

    /// Spinor at `r > 0`.
    pub fn eval(&self, r: f64, theta: f64, phi: f64) -> Spinor4 {
        let amp = self.params.normalization() * self.radial(r);
        let a = self.params.lower_ratio();
        let i = C64::i();
        let y = |l, m| spherical_harmonic(l, m, theta, phi);
        let (s13, s23) = ((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt());
        let v = match self.params.m {
            MagneticState::Up => Spinor4::new(
                y(0, 0),
                C64::from(0.0),
                i * a * s13 * y(1, 0),
                -i * a * s23 * y(1, 1),
            ),
            MagneticState::Down => Spinor4::new(
                C64::from(0.0),
                y(0, 0),
                i * a * s23 * y(1, -1),
                -i * a * s13 * y(1, 0),
            ),
        };
        v * C64::from(amp)
    }
}

/// Momentum-space ground state built from `𝒥₀`, `𝒥₁`.
#[derive(Clone, Copy, Debug)]
pub struct GroundStateMomentum {
    params: HydrogenParams,
}

pub fn ground_state_momentum(params: &HydrogenParams) -> GroundStateMomentum {
    GroundStateMomentum { params: *params }
}

impl GroundStateMomentum {
    pub fn params(&self) -> &HydrogenParams {
        &self.params
    }

    /// `(𝒩 𝒥₀(p), 𝒩 a 𝒥₁(p))`, the upper and lower radial amplitudes.
    pub fn radial(&self, p: f64) -> Result<(f64, f64)> {
        let (z, g) = (self.params.decay(), self.params.gamma());
        let n = self.params.normalization();
        Ok((
            n * special_j0(z, g, p)?,
            n * self.params.lower_ratio() * special_j1(z, g, p)?,
        ))
    }
}

impl MomentumWavefunction for GroundStateMomentum {
    fn amplitude(&self, p: f64, theta: f64, phi: f64) -> Result<Spinor4> {
        let (upper, lower) = self.radial(p)?;
        let y = |l, m| spherical_harmonic(l, m, theta, phi);
        let (s13, s23) = ((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt());
        let zero = C64::from(0.0);
        Ok(match self.params.m {
            MagneticState::Up => Spinor4::new(
                y(0, 0) * upper,
                zero,
                y(1, 0) * (lower * s13),
                y(1, 1) * (-lower * s23),
            ),
            MagneticState::Down => Spinor4::new(
                zero,
                y(0, 0) * upper,
                y(1, -1) * (lower * s23),
                y(1, 0) * (-lower * s13),
            ),
        })
    }

    fn momentum_scale(&self) -> f64 {
        self.params.decay()
    }

    fn energy(&self) -> f64 {
        self.params.constants.rest_energy() * self.params.gamma()
    }
}

/// Bound state of a central potential with quantum numbers `κ`, `m` and
/// caller-supplied momentum-space radial functions `g̃`, `f̃`.
///
/// For `κ > 0` the upper components carry `l = κ − 1` and the lower `l = κ`;
/// for `κ < 0` the roles are swapped. `g̃` and `f̃` include the `(−i)^l`
/// phases of the spherical-Bessel transform.
pub struct BoundStateTemplate<G, F> {
    kappa: i32,
    twice_m: i32,
    energy: f64,
    scale: f64,
    g_tilde: G,
    f_tilde: F,
}

impl<G, F> BoundStateTemplate<G, F>
where
    G: Fn(f64) -> C64 + Sync,
    F: Fn(f64) -> C64 + Sync,
{
    pub fn new(
        kappa: i32,
        twice_m: i32,
        energy: f64,
        scale: f64,
        g_tilde: G,
        f_tilde: F,
    ) -> Result<Self> {
        let twice_j = 2 * kappa.abs() - 1;
        if kappa == 0 || twice_m % 2 == 0 || twice_m.abs() > twice_j {
            return Err(Error::invalid(format!(
                "no bound state with κ = {kappa} and 2m = {twice_m}"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(format!(
                "momentum scale must be positive, got {scale}"
            )));
        }
        Ok(Self {
            kappa,
            twice_m,
            energy,
            scale,
            g_tilde,
            f_tilde,
        })
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn twice_j(&self) -> i32 {
        2 * self.kappa.abs() - 1
    }

    pub fn twice_m(&self) -> i32 {
        self.twice_m
    }
}

impl<G, F> MomentumWavefunction for BoundStateTemplate<G, F>
where
    G: Fn(f64) -> C64 + Sync,
    F: Fn(f64) -> C64 + Sync,
{
    fn amplitude(&self, p: f64, theta: f64, phi: f64) -> Result<Spinor4> {
        let j = 0.5 * self.twice_j() as f64;
        let m = 0.5 * self.twice_m as f64;
        let (m_lo, m_hi) = ((self.twice_m - 1) / 2, (self.twice_m + 1) / 2);
        let low_l = (self.kappa.abs() - 1) as u32;
        let high_l = low_l + 1;
        let y = |l, mm| spherical_harmonic(l, mm, theta, phi);
        let c_minus = ((j + m) / (2.0 * j)).sqrt();
        let c_plus = ((j - m) / (2.0 * j)).sqrt();
        let d_minus = ((j - m + 1.0) / (2.0 * j + 2.0)).sqrt();
        let d_plus = ((j + m + 1.0) / (2.0 * j + 2.0)).sqrt();
        let (g, f) = ((self.g_tilde)(p), (self.f_tilde)(p));
        let i = C64::i();
        Ok(if self.kappa > 0 {
            Spinor4::new(
                g * c_minus * y(low_l, m_lo),
                g * c_plus * y(low_l, m_hi),
                -f * i * d_minus * y(high_l, m_lo),
                f * i * d_plus * y(high_l, m_hi),
            )
        } else {
            Spinor4::new(
                -g * d_minus * y(high_l, m_lo),
                g * d_plus * y(high_l, m_hi),
                f * i * c_minus * y(low_l, m_lo),
                f * i * c_plus * y(low_l, m_hi),
            )
        })
    }

    fn momentum_scale(&self) -> f64 {
        self.scale
    }

    fn energy(&self) -> f64 {
        self.energy
    }
}

/// `(mean, variance)` of the Pauli spin `Σ₃/2` in the ground state.
pub fn analytic_pauli(params: &HydrogenParams) -> (f64, f64) {
    let mean = (1.0 + 2.0 * params.gamma()) / 6.0;
    let signed = match params.m {
        MagneticState::Up => mean,
        MagneticState::Down => -mean,
    };
    (signed, 0.25 - mean * mean)
}

/// `(mean, variance)` of the Pryce spin in the `m = +1/2` ground state.
pub fn analytic_pryce() -> (f64, f64) {
    (0.5, 0.0)
}

/// Pryce `S₃` in momentum space; depends only on the direction of `p`.
#[rustfmt::skip]
pub fn pryce_momentum_matrix(theta: f64, phi: f64) -> Matrix4 {
    let (s, c) = theta.sin_cos();
    let off = C64::from_polar(c * s, -phi);
    let zero = C64::from(0.0);
    let h = C64::from(0.5);
    Matrix4::new(
        h, zero, zero, zero,
        zero, -h, zero, zero,
        zero, zero, C64::from(c * c - 0.5), off,
        zero, zero, off.conj(), C64::from(0.5 - c * c),
    )
}

/// Fine-structure energy `m0c² [1 + (Zα / (n − |κ| + sqrt(κ² − Z²α²)))²]^{−1/2}`.
pub fn sommerfeld_energy(n: u32, kappa: i32, params: &HydrogenParams) -> Result<f64> {
    let ak = kappa.unsigned_abs();
    if kappa == 0 || ak > n || kappa == -(n as i32) {
        return Err(Error::domain(
            "sommerfeld_energy",
            format!("κ = {kappa} is not allowed for n = {n}"),
        ));
    }
    let za = params.z_alpha();
    if za >= ak as f64 {
        return Err(Error::domain(
            "sommerfeld_energy",
            format!("Zα = {za} ≥ |κ| = {ak}"),
        ));
    }
    let root = ((ak as f64 - za) * (ak as f64 + za)).sqrt();
    let ratio = za / ((n - ak) as f64 + root);
    Ok(params.constants.rest_energy() / (1.0 + ratio * ratio).sqrt())
}

/// Energy shift `(Bq/m0) ⟨S_P,3⟩` of the ground state in a weak field `B ẑ`.
pub fn zeeman_shift(params: &HydrogenParams, b: f64) -> f64 {
    b * params.constants.q() / params.constants.m0() * analytic_pauli(params).0
}
