use crate::dirac::{dirac, sigma_dot, Momentum3, PhysicalConstants};
use crate::error::Result;
use crate::linalg::{blocks, Matrix2c, Matrix4, C64, I};

use super::direction_norm;

/// Foldy-Wouthuysen transform `T_FW = (p0 + m0c − βα·p) / sqrt(2p0(p0 + m0c))`.
///
/// Unitary; `T_FW⁻¹ H0 T_FW = cβp0` and `T_FW (Σ/2) T_FW⁻¹ = S_FW`.
pub fn transform_fw(constants: &PhysicalConstants, p: &Momentum3) -> Matrix4 {
    let d = dirac();
    let mc = constants.m0c();
    let e = crate::dirac::p0(constants, p);
    let num = Matrix4::identity() * C64::from(e + mc) - d.beta * d.alpha_dot(&p.to_array());
    num / C64::from((2.0 * e * (e + mc)).sqrt())
}

/// Chakrabarti boost `T_Ch = (p0 + m0c + α·p) / sqrt(2m0c(p0 + m0c))` and its inverse.
///
/// `T_Ch` is not unitary but β-pseudo-unitary, `T_Ch† = β T_Ch⁻¹ β`.
pub fn transform_ch(constants: &PhysicalConstants, p: &Momentum3) -> (Matrix4, Matrix4) {
    let d = dirac();
    let mc = constants.m0c();
    let e = crate::dirac::p0(constants, p);
    let diag = Matrix4::identity() * C64::from(e + mc);
    let ap = d.alpha_dot(&p.to_array());
    let norm = C64::from((2.0 * mc * (e + mc)).sqrt());
    ((diag + ap) / norm, (diag - ap) / norm)
}

/// Pryce transform `T_Pr = diag(I, iσ·p/|p|)`.
pub fn transform_pr(constants: &PhysicalConstants, p: &Momentum3) -> Result<Matrix4> {
    let norm = direction_norm(constants, p)?;
    let lower = sigma_dot(&p.to_array()) * (I / C64::from(norm));
    Ok(blocks(
        &Matrix2c::identity(),
        &Matrix2c::zeros(),
        &Matrix2c::zeros(),
        &lower,
    ))
}
