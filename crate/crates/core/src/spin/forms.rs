//! Alternative algebraic forms of the spin operators.
//!
//! These are mathematically equal to the forms used by [`spin_matrices`](super::spin_matrices)
//! but are written through different building blocks (inverse Hamiltonians,
//! Pauli-Lubanski operators, energy projectors). They exist to be compared
//! against the primary forms and are not used by any solver.

use crate::dirac::{
    dirac, energy_projector, free_hamiltonian, p0, pauli_lubanski, EnergySign, Momentum3,
    PhysicalConstants,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, C64};

use super::direction_norm;

fn inverse(m: Matrix4, what: &str) -> Result<Matrix4> {
    m.try_inverse()
        .ok_or_else(|| Error::invalid(format!("{what} is singular at this momentum")))
}

fn h0_inverse(constants: &PhysicalConstants, p: &Momentum3) -> Result<Matrix4> {
    inverse(free_hamiltonian(constants, p), "H0")
}

/// `(H0 + m0c²)⁻¹`, singular at `p = 0`.
fn shifted_inverse(constants: &PhysicalConstants, p: &Momentum3) -> Result<Matrix4> {
    direction_norm(constants, p)?;
    let shifted =
        free_hamiltonian(constants, p) + Matrix4::identity() * C64::from(constants.rest_energy());
    inverse(shifted, "H0 + m0c²")
}

fn c(x: f64) -> C64 {
    C64::from(x)
}

/// FW: `(m0c²Σ + icβ(p×α) + c²(p·Σ)p/(cp0 + m0c²)) / (2cp0)`.
pub fn fw_energy_form(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let (mc2, cl) = (constants.rest_energy(), constants.c());
    let e = cl * p0(constants, p);
    let pxa = d.p_cross_alpha(p);
    let ps = d.sigma_dot(&p.to_array());
    [0, 1, 2].map(|i| {
        (d.sigma[i] * c(mc2)
            + d.beta * pxa[i] * C64::new(0.0, cl)
            + ps * c(cl * cl * p.component(i) / (e + mc2)))
            / c(2.0 * e)
    })
}

/// FW through the Pauli-Lubanski operators: `(cp0 H0⁻¹ W − W0 p/(p0 + m0c)) / (m0c)`.
pub fn fw_pauli_lubanski_form(
    constants: &PhysicalConstants,
    p: &Momentum3,
) -> Result<[Matrix4; 3]> {
    let pl = pauli_lubanski(constants, p);
    let hinv = h0_inverse(constants, p)?;
    let (mc, e) = (constants.m0c(), p0(constants, p));
    Ok([0, 1, 2].map(|i| {
        (hinv * pl.w[i] * c(constants.c() * e) - pl.w0 * c(p.component(i) / (e + mc))) / c(mc)
    }))
}

/// FW written with `H0` on the right: `p0Σ/(2m0c) − (p·Σ)p/(2m0c(m0c+p0)) − (p×α) iH0/(2m0c²p0)`.
pub fn fw_hamiltonian_form(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let (mc, e) = (constants.m0c(), p0(constants, p));
    let h = free_hamiltonian(constants, p);
    let pxa = d.p_cross_alpha(p);
    let ps = d.sigma_dot(&p.to_array());
    [0, 1, 2].map(|i| {
        d.sigma[i] * c(e / (2.0 * mc))
            - ps * c(p.component(i) / (2.0 * mc * (mc + e)))
            - pxa[i] * h * C64::new(0.0, 1.0 / (2.0 * mc * constants.c() * e))
    })
}

/// Czachor as the energy-diagonal part of the Pauli operator: `(Λ⁺ΣΛ⁺ + Λ⁻ΣΛ⁻)/2`.
pub fn czachor_projector_form(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let lp = energy_projector(constants, p, EnergySign::Positive);
    let lm = energy_projector(constants, p, EnergySign::Negative);
    [0, 1, 2].map(|i| (lp * d.sigma[i] * lp + lm * d.sigma[i] * lm) * c(0.5))
}

/// Czachor as `W c H0⁻¹`.
pub fn czachor_pauli_lubanski_form(
    constants: &PhysicalConstants,
    p: &Momentum3,
) -> Result<[Matrix4; 3]> {
    let pl = pauli_lubanski(constants, p);
    let hinv = h0_inverse(constants, p)?;
    Ok(pl.w.map(|w| w * hinv * c(constants.c())))
}

/// Chakrabarti with the `p0` term split out: `p0Σ/(2m0c) − (p·Σ)p/(2m0c(m0c+p0)) − i(p×α)/(2m0c)`.
pub fn chakrabarti_split_form(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let (mc, e) = (constants.m0c(), p0(constants, p));
    let pxa = d.p_cross_alpha(p);
    let ps = d.sigma_dot(&p.to_array());
    [0, 1, 2].map(|i| {
        d.sigma[i] * c(e / (2.0 * mc))
            - ps * c(p.component(i) / (2.0 * mc * (mc + e)))
            - pxa[i] * C64::new(0.0, 0.5 / mc)
    })
}

/// Pryce: `βΣ/2 + cγ⁵(β + 1)(H0 + m0c²)⁻¹ p/2`.
pub fn pryce_gamma5_form(constants: &PhysicalConstants, p: &Momentum3) -> Result<[Matrix4; 3]> {
    let d = dirac();
    let inv = shifted_inverse(constants, p)?;
    let tail = d.gamma5 * (d.beta + Matrix4::identity()) * inv * c(constants.c() / 2.0);
    Ok([0, 1, 2].map(|i| d.beta * d.sigma[i] * c(0.5) + tail * c(p.component(i))))
}

/// Pryce: `H0⁻¹ (m0c²Σ + icβ(p×α) + c²(p·Σ)(H0 + m0c²)⁻¹ p) / 2`.
pub fn pryce_energy_form(constants: &PhysicalConstants, p: &Momentum3) -> Result<[Matrix4; 3]> {
    let d = dirac();
    let inv = shifted_inverse(constants, p)?;
    let hinv = h0_inverse(constants, p)?;
    let cl = constants.c();
    let pxa = d.p_cross_alpha(p);
    let ps = d.sigma_dot(&p.to_array());
    Ok([0, 1, 2].map(|i| {
        hinv * (d.sigma[i] * c(constants.rest_energy())
            + d.beta * pxa[i] * C64::new(0.0, cl)
            + ps * inv * c(cl * cl * p.component(i)))
            * c(0.5)
    }))
}

/// Pryce: `βΣ/2 + γ⁵(β + 1)(α·p) p/(2p²)`.
pub fn pryce_alpha_form(constants: &PhysicalConstants, p: &Momentum3) -> Result<[Matrix4; 3]> {
    let norm = direction_norm(constants, p)?;
    let d = dirac();
    let tail = d.gamma5 * (d.beta + Matrix4::identity()) * d.alpha_dot(&p.to_array());
    Ok([0, 1, 2]
        .map(|i| d.beta * d.sigma[i] * c(0.5) + tail * c(p.component(i) / (2.0 * norm * norm))))
}

/// Pryce through the Pauli-Lubanski operators: `(W − W0 (H0/c + m0c)⁻¹ p) / (m0c)`.
pub fn pryce_pauli_lubanski_form(
    constants: &PhysicalConstants,
    p: &Momentum3,
) -> Result<[Matrix4; 3]> {
    let pl = pauli_lubanski(constants, p);
    let inv = shifted_inverse(constants, p)? * c(constants.c());
    let mc = constants.m0c();
    Ok([0, 1, 2].map(|i| (pl.w[i] - pl.w0 * inv * c(p.component(i))) / c(mc)))
}
