//! Dirac-representation matrix algebra, free-particle spinors and energy projectors.
//!
//! Units are atomic (ħ = 1) with injectable rest mass and speed of light, so the
//! same code runs at `m0 = c = 1` for algebra tests and at the physical
//! `c = 137.035999084` for the simulations.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{blocks, stack, Matrix2c, Matrix4, Spinor4, TwoSpinor, C64, I, ONE, ZERO};

/// Speed of light in atomic units.
pub const SPEED_OF_LIGHT_AU: f64 = 137.035999084;

/// Rest mass, speed of light and charge.
///
/// The fine-structure constant is not stored: it is always `1/c`, which is its
/// value in atomic units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    m0: f64,
    c: f64,
    q: f64,
}

impl PhysicalConstants {
    pub fn new(m0: f64, c: f64, q: f64) -> Result<Self> {
        if !(m0 > 0.0 && m0.is_finite()) {
            return Err(Error::invalid(format!(
                "rest mass must be positive, got {m0}"
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!(
                "speed of light must be positive, got {c}"
            )));
        }
        if !q.is_finite() {
            return Err(Error::invalid("charge must be finite"));
        }
        Ok(Self { m0, c, q })
    }

    /// Electron in atomic units: `m0 = 1`, `c = 137.035999084`, `q = −1`.
    pub const fn atomic() -> Self {
        Self {
            m0: 1.0,
            c: SPEED_OF_LIGHT_AU,
            q: -1.0,
        }
    }

    /// `m0 = c = 1`, `q = −1`.
    pub const fn unit() -> Self {
        Self {
            m0: 1.0,
            c: 1.0,
            q: -1.0,
        }
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha_el(&self) -> f64 {
        1.0 / self.c
    }

    /// `m0 c`, the natural momentum scale.
    pub fn m0c(&self) -> f64 {
        self.m0 * self.c
    }

    /// `m0 c²`.
    pub fn rest_energy(&self) -> f64 {
        self.m0 * self.c * self.c
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::atomic()
    }
}

/// A canonical momentum vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Momentum3 {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl Momentum3 {
    pub const ZERO: Momentum3 = Momentum3 {
        px: 0.0,
        py: 0.0,
        pz: 0.0,
    };

    pub const fn new(px: f64, py: f64, pz: f64) -> Self {
        Self { px, py, pz }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.px, self.py, self.pz]
    }

    pub fn component(&self, i: usize) -> f64 {
        match i {
            0 => self.px,
            1 => self.py,
            2 => self.pz,
            _ => panic!("momentum component index {i} out of range"),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.px * self.px + self.py * self.py + self.pz * self.pz
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, v: &[f64; 3]) -> f64 {
        self.px * v[0] + self.py * v[1] + self.pz * v[2]
    }

    pub fn is_finite(&self) -> bool {
        self.px.is_finite() && self.py.is_finite() && self.pz.is_finite()
    }

    /// Component along the unit vector `n`, as a vector.
    pub fn parallel_to(&self, n: &[f64; 3]) -> Momentum3 {
        let s = self.dot(n);
        Momentum3::new(s * n[0], s * n[1], s * n[2])
    }

    /// Component perpendicular to the unit vector `n`.
    pub fn perpendicular_to(&self, n: &[f64; 3]) -> Momentum3 {
        *self - self.parallel_to(n)
    }
}

impl Add for Momentum3 {
    type Output = Momentum3;
    fn add(self, o: Momentum3) -> Momentum3 {
        Momentum3::new(self.px + o.px, self.py + o.py, self.pz + o.pz)
    }
}

impl Sub for Momentum3 {
    type Output = Momentum3;
    fn sub(self, o: Momentum3) -> Momentum3 {
        Momentum3::new(self.px - o.px, self.py - o.py, self.pz - o.pz)
    }
}

impl Neg for Momentum3 {
    type Output = Momentum3;
    fn neg(self) -> Momentum3 {
        Momentum3::new(-self.px, -self.py, -self.pz)
    }
}

impl Mul<f64> for Momentum3 {
    type Output = Momentum3;
    fn mul(self, s: f64) -> Momentum3 {
        Momentum3::new(s * self.px, s * self.py, s * self.pz)
    }
}

/// Spin quantization axis `n = (sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinDirection {
    theta: f64,
    phi: f64,
}

impl SpinDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::invalid(format!(
                "spin direction needs theta in [0, pi], got theta = {theta}, phi = {phi}"
            )));
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    /// Direction of an arbitrary nonzero vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(
                "spin direction from a zero or non-finite vector",
            ));
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        Self::new(theta, phi)
    }

    pub fn x() -> Self {
        Self {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    pub fn y() -> Self {
        Self {
            theta: PI / 2.0,
            phi: PI / 2.0,
        }
    }

    pub fn z() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

impl fmt::Display for SpinDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.unit_vector();
        write!(f, "({x:.6}, {y:.6}, {z:.6})")
    }
}

/// The Dirac-representation matrices `α_i`, `β`, `Σ_i` and `γ⁵`.
#[derive(Clone, Debug)]
pub struct DiracMatrices {
    pub alpha: [Matrix4; 3],
    pub beta: Matrix4,
    pub sigma: [Matrix4; 3],
    pub gamma5: Matrix4,
}

pub fn pauli_matrices() -> [Matrix2c; 3] {
    [
        Matrix2c::new(ZERO, ONE, ONE, ZERO),
        Matrix2c::new(ZERO, -I, I, ZERO),
        Matrix2c::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// `σ·v` for a real 3-vector.
pub fn sigma_dot(v: &[f64; 3]) -> Matrix2c {
    Matrix2c::new(
        C64::new(v[2], 0.0),
        C64::new(v[0], -v[1]),
        C64::new(v[0], v[1]),
        C64::new(-v[2], 0.0),
    )
}

pub fn build_dirac_matrices() -> DiracMatrices {
    let s = pauli_matrices();
    let z = Matrix2c::zeros();
    let id = Matrix2c::identity();
    let alpha = [0, 1, 2].map(|i| blocks(&z, &s[i], &s[i], &z));
    let beta = blocks(&id, &z, &z, &(-id));
    let sigma = [0, 1, 2].map(|i| blocks(&s[i], &z, &z, &s[i]));
    let gamma5 = blocks(&z, &id, &id, &z);
    DiracMatrices {
        alpha,
        beta,
        sigma,
        gamma5,
    }
}

/// Shared instance of the Dirac matrices.
pub fn dirac() -> &'static DiracMatrices {
    static MATRICES: OnceLock<DiracMatrices> = OnceLock::new();
    MATRICES.get_or_init(build_dirac_matrices)
}

impl DiracMatrices {
    /// `α·v`.
    pub fn alpha_dot(&self, v: &[f64; 3]) -> Matrix4 {
        self.alpha[0] * C64::from(v[0])
            + self.alpha[1] * C64::from(v[1])
            + self.alpha[2] * C64::from(v[2])
    }

    /// `Σ·v`.
    pub fn sigma_dot(&self, v: &[f64; 3]) -> Matrix4 {
        self.sigma[0] * C64::from(v[0])
            + self.sigma[1] * C64::from(v[1])
            + self.sigma[2] * C64::from(v[2])
    }

    /// Components of `p × α`.
    pub fn p_cross_alpha(&self, p: &Momentum3) -> [Matrix4; 3] {
        let [px, py, pz] = p.to_array().map(C64::from);
        let a = &self.alpha;
        [
            a[2] * py - a[1] * pz,
            a[0] * pz - a[2] * px,
            a[1] * px - a[0] * py,
        ]
    }

    /// Components of `p × (Σ × p) = Σ p² − p (p·Σ)`.
    pub fn p_cross_sigma_cross_p(&self, p: &Momentum3) -> [Matrix4; 3] {
        let p2 = C64::from(p.norm_sq());
        let ps = self.sigma_dot(&p.to_array());
        [0, 1, 2].map(|i| self.sigma[i] * p2 - ps * C64::from(p.component(i)))
    }
}

/// `p0(p) = sqrt(m0² c² + p²)`.
pub fn p0(constants: &PhysicalConstants, p: &Momentum3) -> f64 {
    let mc = constants.m0c();
    (mc * mc + p.norm_sq()).sqrt()
}

/// Eigenvectors `(χ↑, χ↓)` of `n·σ` with eigenvalues `+1` and `−1`.
pub fn chi_pair(direction: &SpinDirection) -> (TwoSpinor, TwoSpinor) {
    let (s, c) = (0.5 * direction.theta()).sin_cos();
    let e = C64::from_polar(1.0, direction.phi());
    let up = TwoSpinor::new(C64::from(c), e * s);
    let down = TwoSpinor::new(-e.conj() * s, C64::from(c));
    (up, down)
}

/// Positive-energy free spinor `u_{χ,p}`; `H0(p) u = +c p0 u`.
pub fn u_spinor(constants: &PhysicalConstants, chi: &TwoSpinor, p: &Momentum3) -> Spinor4 {
    let mc = constants.m0c();
    let e = p0(constants, p);
    let scale = ((mc + e) / (2.0 * e)).sqrt();
    let lower = sigma_dot(&p.to_array()) * chi / C64::from(mc + e);
    stack(chi, &lower) * C64::from(scale)
}

/// Negative-energy free spinor `v_{χ,p}`; `H0(p) v = −c p0 v`.
pub fn v_spinor(constants: &PhysicalConstants, chi: &TwoSpinor, p: &Momentum3) -> Spinor4 {
    let mc = constants.m0c();
    let e = p0(constants, p);
    let scale = ((mc + e) / (2.0 * e)).sqrt();
    let upper = -(sigma_dot(&p.to_array()) * chi) / C64::from(mc + e);
    stack(&upper, chi) * C64::from(scale)
}

/// `H0(p) = c α·p + m0 c² β`.
pub fn free_hamiltonian(constants: &PhysicalConstants, p: &Momentum3) -> Matrix4 {
    let d = dirac();
    d.alpha_dot(&p.to_array()) * C64::from(constants.c())
        + d.beta * C64::from(constants.rest_energy())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn as_f64(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }
}

/// `Λ± = (1 ± H0/(c p0)) / 2`.
pub fn energy_projector(constants: &PhysicalConstants, p: &Momentum3, sign: EnergySign) -> Matrix4 {
    let h = free_hamiltonian(constants, p);
    let cp0 = constants.c() * p0(constants, p);
    (Matrix4::identity() + h * C64::from(sign.as_f64() / cp0)) * C64::from(0.5)
}

/// Pauli-Lubanski operators at a fixed momentum.
#[derive(Clone, Debug)]
pub struct PauliLubanski {
    /// `W = (H0 Σ + Σ H0) / (4c)`.
    pub w: [Matrix4; 3],
    /// `W0 = p·Σ / 2`.
    pub w0: Matrix4,
}

pub fn pauli_lubanski(constants: &PhysicalConstants, p: &Momentum3) -> PauliLubanski {
    let d = dirac();
    let h = free_hamiltonian(constants, p);
    let scale = C64::from(1.0 / (4.0 * constants.c()));
    let w = [0, 1, 2].map(|i| (h * d.sigma[i] + d.sigma[i] * h) * scale);
    let w0 = d.sigma_dot(&p.to_array()) * C64::from(0.5);
    PauliLubanski { w, w0 }
}
