//! Closed-form eigensystems of `n·S` for every kind.

use crate::dirac::{
    chi_pair, p0, sigma_dot, u_spinor, v_spinor, Momentum3, PhysicalConstants, SpinDirection,
};
use crate::error::Result;
use crate::linalg::{max_pairwise_overlap, Matrix2c, Spinor4, TwoSpinor, C64};

use super::{direction_norm, SpinKind};

/// Eigenpairs ordered `[↑1, ↑2, ↓1, ↓2]`; eigenvectors are normalized.
///
/// Chakrabarti vectors are right eigenvectors of a non-Hermitian matrix and are
/// in general not mutually orthogonal; `orthogonal` records which case holds.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [Spinor4; 4],
    pub orthogonal: bool,
}

impl EigenSystem {
    fn new(up: f64, down: f64, vectors: [Spinor4; 4]) -> Self {
        let eigenvectors = vectors.map(|v| v / C64::from(v.norm()));
        let orthogonal = max_pairwise_overlap(&eigenvectors) < 1e-10;
        EigenSystem {
            eigenvalues: [up, up, down, down],
            eigenvectors,
            orthogonal,
        }
    }
}

pub fn closed_form_eigensystem(
    kind: SpinKind,
    constants: &PhysicalConstants,
    p: &Momentum3,
    n: &SpinDirection,
) -> Result<EigenSystem> {
    let (up, down) = chi_pair(n);
    let u = |chi: &TwoSpinor, q: &Momentum3| u_spinor(constants, chi, q);
    let v = |chi: &TwoSpinor, q: &Momentum3| v_spinor(constants, chi, q);
    let lift_upper = |chi: &TwoSpinor| Spinor4::new(chi[0], chi[1], C64::from(0.0), C64::from(0.0));
    let lift_lower = |chi: &TwoSpinor| Spinor4::new(C64::from(0.0), C64::from(0.0), chi[0], chi[1]);
    let system = match kind {
        SpinKind::Pauli => EigenSystem::new(
            0.5,
            -0.5,
            [
                lift_upper(&up),
                lift_lower(&up),
                lift_upper(&down),
                lift_lower(&down),
            ],
        ),
        SpinKind::FoldyWouthuysen => {
            EigenSystem::new(0.5, -0.5, [u(&up, p), v(&up, p), u(&down, p), v(&down, p)])
        }
        SpinKind::FradkinGood => {
            direction_norm(constants, p)?;
            EigenSystem::new(0.5, -0.5, [u(&up, p), v(&down, p), u(&down, p), v(&up, p)])
        }
        SpinKind::Frenkel => {
            let perp = p.perpendicular_to(&n.unit_vector());
            let s = p0(constants, &perp) / (2.0 * constants.m0c());
            EigenSystem::new(
                s,
                -s,
                [
                    u(&up, &perp),
                    v(&up, &perp),
                    u(&down, &perp),
                    v(&down, &perp),
                ],
            )
        }
        SpinKind::Chakrabarti => {
            let minus = -*p;
            EigenSystem::new(
                0.5,
                -0.5,
                [u(&up, p), v(&up, &minus), u(&down, p), v(&down, &minus)],
            )
        }
        SpinKind::Pryce => {
            let norm = direction_norm(constants, p)?;
            let turn = sigma_dot(&p.to_array()) / C64::from(norm);
            EigenSystem::new(
                0.5,
                -0.5,
                [
                    lift_upper(&up),
                    lift_lower(&(turn * up)),
                    lift_upper(&down),
                    lift_lower(&(turn * down)),
                ],
            )
        }
        SpinKind::Czachor => czachor(constants, p, n),
    };
    Ok(system)
}

/// Common eigenvectors of `H0` and `n·S_Pr`, ordered `[↑+, ↑−, ↓+, ↓−]` where
/// `±` is the energy branch: `u(χ, p)` and `v(σ·p χ/|p|, p)`.
pub fn pryce_simultaneous_eigenvectors(
    constants: &PhysicalConstants,
    p: &Momentum3,
    n: &SpinDirection,
) -> Result<[Spinor4; 4]> {
    let norm = direction_norm(constants, p)?;
    let turn = sigma_dot(&p.to_array()) / C64::from(norm);
    let (up, down) = chi_pair(n);
    Ok([
        u_spinor(constants, &up, p),
        v_spinor(constants, &(turn * up), p),
        u_spinor(constants, &down, p),
        v_spinor(constants, &(turn * down), p),
    ])
}

// Vectors for n = z are written in closed form; any other direction is reached
// by the spin rotation diag(D, D) with D mapping χ↑(n) to (1, 0).
fn czachor(constants: &PhysicalConstants, p: &Momentum3, n: &SpinDirection) -> EigenSystem {
    let (up, down) = chi_pair(n);
    let d = Matrix2c::new(up[0].conj(), up[1].conj(), down[0].conj(), down[1].conj());
    let rotated = d * sigma_dot(&p.to_array()) * d.adjoint();
    let (px, py, pz) = (rotated[(1, 0)].re, rotated[(1, 0)].im, rotated[(0, 0)].re);
    let mc = constants.m0c();
    let q = (mc * mc + pz * pz).sqrt();
    let big = p0(constants, p);
    let a = C64::from(q * q + q * big);
    let (plus, minus) = (C64::new(px, py), C64::new(px, -py));
    let (zero, pzc, mcc) = (C64::from(0.0), C64::from(pz), C64::from(mc));
    let frame = [
        Spinor4::new(a, pzc * plus, zero, mcc * plus),
        Spinor4::new(zero, -mcc * plus, a, pzc * plus),
        Spinor4::new(-pzc * minus, a, mcc * minus, zero),
        Spinor4::new(mcc * minus, zero, pzc * minus, -a),
    ];
    let back = d.adjoint();
    let vectors = frame.map(|e| {
        let top = back * TwoSpinor::new(e[0], e[1]);
        let bottom = back * TwoSpinor::new(e[2], e[3]);
        Spinor4::new(top[0], top[1], bottom[0], bottom[1])
    });
    let s = q / (2.0 * big);
    EigenSystem::new(s, -s, vectors)
}
