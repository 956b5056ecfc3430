//! Inter-operator identities and commutation relations.

use crate::dirac::{
    dirac, energy_projector, free_hamiltonian, p0, EnergySign, Momentum3, PhysicalConstants,
    SpinDirection,
};
use crate::error::Result;
use crate::linalg::{commutator, frobenius, relative_residual, Matrix4, C64};

use super::{direction_norm, spin_matrices, SpinKind};

/// Pass threshold for every identity residual.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, residual: f64) -> Self {
        IdentityCheck {
            name,
            residual,
            passed: residual < IDENTITY_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Residuals of the identities that tie the operators together on the
/// energy subspaces, for the spin component along `n`.
pub fn verify_subspace_identities(
    constants: &PhysicalConstants,
    p: &Momentum3,
    n: &SpinDirection,
) -> Result<IdentityReport> {
    direction_norm(constants, p)?;
    let s = |kind| -> Result<Matrix4> { Ok(spin_matrices(kind, constants, p)?.component(n)) };
    let (sp, fw, cz) = (
        s(SpinKind::Pauli)?,
        s(SpinKind::FoldyWouthuysen)?,
        s(SpinKind::Czachor)?,
    );
    let (ch, pr, fg) = (
        s(SpinKind::Chakrabarti)?,
        s(SpinKind::Pryce)?,
        s(SpinKind::FradkinGood)?,
    );
    let lp = energy_projector(constants, p, EnergySign::Positive);
    let lm = energy_projector(constants, p, EnergySign::Negative);
    let r = relative_residual;
    let checks = vec![
        IdentityCheck::new("L+ P L+ = L+ Cz L+", r(&(lp * sp * lp), &(lp * cz * lp))),
        IdentityCheck::new("L- P L- = L- Cz L-", r(&(lm * sp * lm), &(lm * cz * lm))),
        IdentityCheck::new("FW L+ = Ch L+", r(&(fw * lp), &(ch * lp))),
        IdentityCheck::new("FW L+ = Pr L+", r(&(fw * lp), &(pr * lp))),
        IdentityCheck::new("FW L+ = FG L+", r(&(fw * lp), &(fg * lp))),
        IdentityCheck::new("L- FW L- = L- Ch L-", r(&(lm * fw * lm), &(lm * ch * lm))),
        IdentityCheck::new("FW L- = -FG L-", r(&(fw * lm), &(-(fg * lm)))),
        IdentityCheck::new("L+ FW L- = L+ Pr L-", r(&(lp * fw * lm), &(lp * pr * lm))),
        IdentityCheck::new("L+ FW L- = L- FW L+", r(&(lp * fw * lm), &(lm * fw * lp))),
        IdentityCheck::new("L- FW L+ = L- Pr L+", r(&(lm * fw * lp), &(lm * pr * lp))),
    ];
    Ok(IdentityReport { checks })
}

/// Residuals of a kind's component algebra and of its commutator with `H0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorReport {
    pub kind: SpinKind,
    /// `max_k ‖[S_i, S_j] − i ε_ijk R_k‖`, relative, with `R_k` the kind's right-hand side.
    pub algebra_residual: f64,
    /// `max_i ‖[H0, S_i] − C_i‖ / (‖H0‖ ‖S_i‖)` with `C_i` the kind's stated commutator.
    pub hamiltonian_residual: f64,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.algebra_residual < IDENTITY_TOLERANCE && self.hamiltonian_residual < IDENTITY_TOLERANCE
    }
}

pub fn commutator_check(
    kind: SpinKind,
    constants: &PhysicalConstants,
    p: &Momentum3,
) -> Result<CommutatorReport> {
    let s = spin_matrices(kind, constants, p)?.s;
    let d = dirac();
    let h = free_hamiltonian(constants, p);
    let e = p0(constants, p);
    let mc = constants.m0c();
    let ps = d.sigma_dot(&p.to_array());
    let pk = |k: usize| C64::from(p.component(k));

    let algebra_rhs = |k: usize| -> Matrix4 {
        match kind {
            SpinKind::Czachor => s[k] - ps * pk(k) / C64::from(2.0 * e * e),
            SpinKind::Frenkel => s[k] + ps * pk(k) / C64::from(2.0 * mc * mc),
            SpinKind::FradkinGood => s[k] * h / C64::from(constants.c() * e),
            _ => s[k],
        }
    };
    let algebra_residual = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        .into_iter()
        .map(|(i, j, k)| {
            relative_residual(
                &commutator(&s[i], &s[j]),
                &(algebra_rhs(k) * C64::new(0.0, 1.0)),
            )
        })
        .fold(0.0, f64::max);

    // α×p = −(p×α)
    let pxa = d.p_cross_alpha(p);
    let pxsxp = d.p_cross_sigma_cross_p(p);
    let hamiltonian_rhs = |i: usize| -> Matrix4 {
        match kind {
            SpinKind::Pauli => -pxa[i] * C64::new(0.0, constants.c()),
            SpinKind::Chakrabarti => {
                let factor = Matrix4::identity() * C64::from(e / constants.m0())
                    + d.beta * C64::from(constants.c());
                -(factor * pxa[i]) * C64::new(0.0, 1.0) + pxsxp[i] / C64::from(constants.m0())
            }
            _ => Matrix4::zeros(),
        }
    };
    let hamiltonian_residual = (0..3)
        .map(|i| {
            let scale = (frobenius(&h) * frobenius(&s[i])).max(1.0);
            frobenius(&(commutator(&h, &s[i]) - hamiltonian_rhs(i))) / scale
        })
        .fold(0.0, f64::max);

    Ok(CommutatorReport {
        kind,
        algebra_residual,
        hamiltonian_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_identities_at_reference_point() {
        for consts in [PhysicalConstants::unit(), PhysicalConstants::atomic()] {
            let p = Momentum3::new(0.3, -0.7, 1.1) * consts.m0c();
            let report = verify_subspace_identities(&consts, &p, &SpinDirection::z()).unwrap();
            assert_eq!(report.checks.len(), 10);
            assert!(report.all_passed(), "{report:?}");
        }
    }

    #[test]
    fn fw_acts_as_one_half_on_matching_positive_energy_spinor() {
        let consts = PhysicalConstants::atomic();
        let p = Momentum3::new(50.0, -20.0, 90.0);
        let n = SpinDirection::new(0.9, 2.2).unwrap();
        let (up, _) = crate::dirac::chi_pair(&n);
        let u = crate::dirac::u_spinor(&consts, &up, &p);
        let lp = energy_projector(&consts, &p, EnergySign::Positive);
        let fw = spin_matrices(SpinKind::FoldyWouthuysen, &consts, &p)
            .unwrap()
            .component(&n);
        assert!((lp * fw * lp * u - u * C64::from(0.5)).norm() < 1e-13);
    }

    #[test]
    fn pauli_and_fw_differ_on_positive_energy_sector() {
        let consts = PhysicalConstants::unit();
        let p = Momentum3::new(1.0, 0.5, 0.0);
        let n = SpinDirection::z();
        let lp = energy_projector(&consts, &p, EnergySign::Positive);
        let sp = spin_matrices(SpinKind::Pauli, &consts, &p)
            .unwrap()
            .component(&n);
        let fw = spin_matrices(SpinKind::FoldyWouthuysen, &consts, &p)
            .unwrap()
            .component(&n);
        assert!(frobenius(&(lp * (sp - fw) * lp)) > 0.05);
    }

    #[test]
    fn commutators_hold_for_every_kind() {
        for consts in [PhysicalConstants::unit(), PhysicalConstants::atomic()] {
            for p in [
                Momentum3::new(0.3, -0.7, 1.1),
                Momentum3::new(-2.0, 1.5, 0.2),
            ] {
                let p = p * consts.m0c();
                for kind in SpinKind::ALL {
                    let report = commutator_check(kind, &consts, &p).unwrap();
                    assert!(report.passed(), "{report:?}");
                }
            }
        }
    }

    #[test]
    fn pauli_commutator_is_exact_at_rest_and_printed_sign_fails() {
        let consts = PhysicalConstants::unit();
        let r = commutator_check(SpinKind::Pauli, &consts, &Momentum3::ZERO).unwrap();
        assert_eq!(r.algebra_residual, 0.0);
        // with the opposite sign the Hamiltonian commutator no longer matches
        let p = Momentum3::new(0.3, -0.7, 1.1);
        let d = dirac();
        let h = free_hamiltonian(&consts, &p);
        let pxa = d.p_cross_alpha(&p);
        let flipped = pxa[2] * C64::new(0.0, 1.0);
        let c = commutator(&h, &(d.sigma[2] * C64::from(0.5)));
        assert!(frobenius(&(c - flipped)) > 0.1);
    }

    #[test]
    fn su2_kinds_and_modified_kinds() {
        let consts = PhysicalConstants::unit();
        let p = Momentum3::new(0.8, 0.1, -0.4);
        for kind in SpinKind::ALL {
            let s = spin_matrices(kind, &consts, &p).unwrap().s;
            let plain = relative_residual(&commutator(&s[0], &s[1]), &(s[2] * C64::new(0.0, 1.0)));
            assert_eq!(plain < 1e-12, kind.obeys_su2(), "{kind}");
        }
    }
}
