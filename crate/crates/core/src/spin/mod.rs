//! The seven relativistic spin operators in momentum representation.
//!
//! In canonical momentum space every spin operator is a plain 4x4 matrix that
//! depends on the momentum `p`. Each kind is built from its most explicit
//! algebraic form; the alternative forms in [`forms`] are kept as independent
//! cross-checks.

use std::fmt;
use std::str::FromStr;

use crate::dirac::{dirac, free_hamiltonian, p0, Momentum3, PhysicalConstants, SpinDirection};
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, C64};

mod eigen;
pub mod forms;
mod gaussian;
mod identities;
mod transforms;

pub use eigen::{closed_form_eigensystem, pryce_simultaneous_eigenvectors, EigenSystem};
pub use gaussian::{chakrabarti_gaussian_closed_form, chakrabarti_gaussian_expectation};
pub use identities::{
    commutator_check, verify_subspace_identities, CommutatorReport, IdentityCheck, IdentityReport,
    IDENTITY_TOLERANCE,
};
pub use transforms::{transform_ch, transform_fw, transform_pr};

/// Momenta with `|p| < DEGENERATE_MOMENTUM · m0c` have no usable direction `p/|p|`.
pub const DEGENERATE_MOMENTUM: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpinKind {
    Pauli,
    FoldyWouthuysen,
    Czachor,
    Frenkel,
    Chakrabarti,
    Pryce,
    FradkinGood,
}

impl SpinKind {
    pub const ALL: [SpinKind; 7] = [
        SpinKind::Pauli,
        SpinKind::FoldyWouthuysen,
        SpinKind::Czachor,
        SpinKind::Frenkel,
        SpinKind::Chakrabarti,
        SpinKind::Pryce,
        SpinKind::FradkinGood,
    ];

    /// Short label used in output columns, e.g. `FW`.
    pub fn label(self) -> &'static str {
        match self {
            SpinKind::Pauli => "P",
            SpinKind::FoldyWouthuysen => "FW",
            SpinKind::Czachor => "Cz",
            SpinKind::Frenkel => "F",
            SpinKind::Chakrabarti => "Ch",
            SpinKind::Pryce => "Pr",
            SpinKind::FradkinGood => "FG",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinKind::Pauli => "pauli",
            SpinKind::FoldyWouthuysen => "foldy-wouthuysen",
            SpinKind::Czachor => "czachor",
            SpinKind::Frenkel => "frenkel",
            SpinKind::Chakrabarti => "chakrabarti",
            SpinKind::Pryce => "pryce",
            SpinKind::FradkinGood => "fradkin-good",
        }
    }

    /// Position in [`SpinKind::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_hermitian(self) -> bool {
        self != SpinKind::Chakrabarti
    }

    /// Whether the matrix needs the direction `p/|p|`.
    pub fn needs_direction(self) -> bool {
        matches!(self, SpinKind::Pryce | SpinKind::FradkinGood)
    }

    /// Whether the components obey `[S_i, S_j] = i ε_ijk S_k`.
    pub fn obeys_su2(self) -> bool {
        matches!(
            self,
            SpinKind::Pauli | SpinKind::FoldyWouthuysen | SpinKind::Chakrabarti | SpinKind::Pryce
        )
    }

    pub fn commutes_with_h0(self) -> bool {
        !matches!(self, SpinKind::Pauli | SpinKind::Chakrabarti)
    }

    /// Scalar value of `Σ_i S_i²` (always a multiple of the identity).
    pub fn squared_length(self, constants: &PhysicalConstants, p: &Momentum3) -> f64 {
        let mc2 = constants.m0c().powi(2);
        let p2 = p.norm_sq();
        match self {
            SpinKind::Czachor => (3.0 * mc2 + p2) / (4.0 * mc2 + 4.0 * p2),
            SpinKind::Frenkel => (3.0 * mc2 + 2.0 * p2) / (4.0 * mc2),
            _ => 0.75,
        }
    }
}

impl fmt::Display for SpinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SpinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        SpinKind::ALL
            .into_iter()
            .find(|k| k.label().to_ascii_lowercase() == key || k.name() == key)
            .ok_or_else(|| Error::invalid(format!("unknown spin operator kind `{s}`")))
    }
}

/// The three Cartesian components of a spin operator at fixed momentum.
#[derive(Clone, Debug)]
pub struct SpinMatrixTriplet {
    pub s: [Matrix4; 3],
    pub kind: SpinKind,
    pub p: Momentum3,
    pub constants: PhysicalConstants,
}

impl SpinMatrixTriplet {
    /// `n·S`.
    pub fn component(&self, n: &SpinDirection) -> Matrix4 {
        dot_triplet(&self.s, &n.unit_vector())
    }

    /// `Σ_i S_i²`.
    pub fn squared_length(&self) -> Matrix4 {
        self.s.iter().map(|m| m * m).sum()
    }
}

pub(crate) fn dot_triplet(s: &[Matrix4; 3], n: &[f64; 3]) -> Matrix4 {
    s[0] * C64::from(n[0]) + s[1] * C64::from(n[1]) + s[2] * C64::from(n[2])
}

/// Returns `|p|`, or an error when the direction of `p` is undefined.
pub(crate) fn direction_norm(constants: &PhysicalConstants, p: &Momentum3) -> Result<f64> {
    let norm = p.norm();
    let cutoff = DEGENERATE_MOMENTUM * constants.m0c();
    if !(norm >= cutoff) {
        return Err(Error::DegenerateMomentum { norm, cutoff });
    }
    Ok(norm)
}

pub fn spin_matrices(
    kind: SpinKind,
    constants: &PhysicalConstants,
    p: &Momentum3,
) -> Result<SpinMatrixTriplet> {
    if !p.is_finite() {
        return Err(Error::invalid("momentum has non-finite components"));
    }
    let s = match kind {
        SpinKind::Pauli => pauli(),
        SpinKind::FoldyWouthuysen => foldy_wouthuysen(constants, p),
        SpinKind::Czachor => czachor(constants, p),
        SpinKind::Frenkel => frenkel(constants, p),
        SpinKind::Chakrabarti => chakrabarti(constants, p),
        SpinKind::Pryce => pryce(constants, p)?,
        SpinKind::FradkinGood => fradkin_good(constants, p)?,
    };
    Ok(SpinMatrixTriplet {
        s,
        kind,
        p: *p,
        constants: *constants,
    })
}

/// `n·S` for one kind.
pub fn spin_component(
    kind: SpinKind,
    constants: &PhysicalConstants,
    p: &Momentum3,
    n: &SpinDirection,
) -> Result<Matrix4> {
    Ok(spin_matrices(kind, constants, p)?.component(n))
}

fn scaled(m: Matrix4, s: f64) -> Matrix4 {
    m * C64::from(s)
}

fn pauli() -> [Matrix4; 3] {
    dirac().sigma.map(|s| scaled(s, 0.5))
}

// Σ/2 + iβ(p×α)/(2p0) − (Σp² − p(p·Σ))/(2p0(p0+m0c))
fn foldy_wouthuysen(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let e = p0(constants, p);
    let mc = constants.m0c();
    let pxa = d.p_cross_alpha(p);
    let pxsxp = d.p_cross_sigma_cross_p(p);
    [0, 1, 2].map(|i| {
        scaled(d.sigma[i], 0.5) + d.beta * pxa[i] * C64::new(0.0, 0.5 / e)
            - scaled(pxsxp[i], 0.5 / (e * (e + mc)))
    })
}

// (m0²c² Σ + i m0c β(p×α) + (p·Σ)p) / (2p0²)
fn czachor(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let e2 = constants.m0c().powi(2) + p.norm_sq();
    let mc = constants.m0c();
    let pxa = d.p_cross_alpha(p);
    let ps = d.sigma_dot(&p.to_array());
    [0, 1, 2].map(|i| {
        scaled(d.sigma[i], mc * mc / (2.0 * e2))
            + d.beta * pxa[i] * C64::new(0.0, mc / (2.0 * e2))
            + scaled(ps, p.component(i) / (2.0 * e2))
    })
}

// Σ/2 + iβ(p×α)/(2m0c)
fn frenkel(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let mc = constants.m0c();
    let pxa = d.p_cross_alpha(p);
    [0, 1, 2].map(|i| scaled(d.sigma[i], 0.5) + d.beta * pxa[i] * C64::new(0.0, 0.5 / mc))
}

// Σ/2 − i(p×α)/(2m0c) + (Σp² − p(p·Σ))/(2m0c(m0c+p0))
fn chakrabarti(constants: &PhysicalConstants, p: &Momentum3) -> [Matrix4; 3] {
    let d = dirac();
    let e = p0(constants, p);
    let mc = constants.m0c();
    let pxa = d.p_cross_alpha(p);
    let pxsxp = d.p_cross_sigma_cross_p(p);
    [0, 1, 2].map(|i| {
        scaled(d.sigma[i], 0.5) - pxa[i] * C64::new(0.0, 0.5 / mc)
            + scaled(pxsxp[i], 0.5 / (mc * (mc + e)))
    })
}

// βΣ/2 + (Σ·p)(1 − β)p/(2p²)
fn pryce(constants: &PhysicalConstants, p: &Momentum3) -> Result<[Matrix4; 3]> {
    let norm = direction_norm(constants, p)?;
    let d = dirac();
    let tail = d.sigma_dot(&p.to_array()) * (Matrix4::identity() - d.beta);
    Ok([0, 1, 2].map(|i| {
        scaled(d.beta * d.sigma[i], 0.5) + scaled(tail, p.component(i) / (2.0 * norm * norm))
    }))
}

// βΣ/2 + (Σ·p)(H0/(cp0) − β)p/(2p²)
fn fradkin_good(constants: &PhysicalConstants, p: &Momentum3) -> Result<[Matrix4; 3]> {
    let norm = direction_norm(constants, p)?;
    let d = dirac();
    let sign = free_hamiltonian(constants, p) / C64::from(constants.c() * p0(constants, p));
    let tail = d.sigma_dot(&p.to_array()) * (sign - d.beta);
    Ok([0, 1, 2].map(|i| {
        scaled(d.beta * d.sigma[i], 0.5) + scaled(tail, p.component(i) / (2.0 * norm * norm))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, general_eigenvalues, hermiticity_defect, relative_residual};
    use proptest::prelude::*;

    fn sorted_real_eigenvalues(m: &Matrix4) -> Vec<f64> {
        let mut ev: Vec<f64> = general_eigenvalues(m).iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn kind_labels_round_trip() {
        for k in SpinKind::ALL {
            assert_eq!(k.label().parse::<SpinKind>().unwrap(), k);
            assert_eq!(k.name().parse::<SpinKind>().unwrap(), k);
            assert_eq!(SpinKind::ALL[k.index()], k);
        }
        assert!("dirac".parse::<SpinKind>().is_err());
    }

    #[test]
    fn pauli_is_half_sigma() {
        let consts = PhysicalConstants::unit();
        let t = spin_matrices(SpinKind::Pauli, &consts, &Momentum3::new(0.2, 0.1, -3.0)).unwrap();
        assert_eq!(t.s[2], dirac().sigma[2] * C64::from(0.5));
        let n = SpinDirection::new(1.1, 4.0).unwrap();
        let ev = sorted_real_eigenvalues(&t.component(&n));
        for (got, want) in ev.iter().zip([-0.5, -0.5, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn czachor_and_frenkel_eigenvalues_at_px_one() {
        let consts = PhysicalConstants::unit();
        let p = Momentum3::new(1.0, 0.0, 0.0);
        let cz = spin_component(SpinKind::Czachor, &consts, &p, &SpinDirection::z()).unwrap();
        let ev = sorted_real_eigenvalues(&cz);
        let s = 1.0 / (2.0 * 2f64.sqrt());
        for (got, want) in ev.iter().zip([-s, -s, s, s]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let fr = spin_component(SpinKind::Frenkel, &consts, &p, &SpinDirection::z()).unwrap();
        let ev = sorted_real_eigenvalues(&fr);
        let s = 2f64.sqrt() / 2.0;
        for (got, want) in ev.iter().zip([-s, -s, s, s]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_momentum_rejected_only_where_direction_matters() {
        let consts = PhysicalConstants::atomic();
        for kind in SpinKind::ALL {
            let r = spin_matrices(kind, &consts, &Momentum3::ZERO);
            assert_eq!(r.is_err(), kind.needs_direction(), "{kind}");
        }
        let err = spin_matrices(SpinKind::Pryce, &consts, &Momentum3::ZERO).unwrap_err();
        assert!(matches!(err, Error::DegenerateMomentum { .. }));
    }

    #[test]
    fn all_kinds_reduce_to_pauli_block_structure_at_rest() {
        let consts = PhysicalConstants::atomic();
        let d = dirac();
        for kind in [
            SpinKind::FoldyWouthuysen,
            SpinKind::Czachor,
            SpinKind::Frenkel,
            SpinKind::Chakrabarti,
        ] {
            let t = spin_matrices(kind, &consts, &Momentum3::ZERO).unwrap();
            for i in 0..3 {
                assert!(
                    frobenius(&(t.s[i] - d.sigma[i] * C64::from(0.5))) < 1e-15,
                    "{kind}"
                );
            }
        }
    }

    #[test]
    fn czachor_ultrarelativistic_length() {
        let consts = PhysicalConstants::unit();
        let p = Momentum3::new(600.0, -480.0, 640.0);
        assert!((p.norm() - 1000.0).abs() < 1e-9);
        let t = spin_matrices(SpinKind::Czachor, &consts, &p).unwrap();
        let sq = t.squared_length();
        assert!(frobenius(&(sq - Matrix4::identity() * C64::from(0.25))) < 1e-5);
    }

    fn momentum() -> impl Strategy<Value = Momentum3> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_filter("direction defined", |(x, y, z)| {
                x * x + y * y + z * z > 1e-6
            })
            .prop_map(|(x, y, z)| Momentum3::new(x, y, z))
    }

    fn direction() -> impl Strategy<Value = SpinDirection> {
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
            .prop_map(|(t, p)| SpinDirection::new(t, p).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hermiticity_pattern_and_squared_lengths(p in momentum(), scale in 0.1..100.0f64) {
            let consts = PhysicalConstants::new(1.0, scale, -1.0).unwrap();
            let p = p * scale;
            let beta = dirac().beta;
            for kind in SpinKind::ALL {
                let t = spin_matrices(kind, &consts, &p).unwrap();
                for s in &t.s {
                    let defect = hermiticity_defect(s);
                    if kind.is_hermitian() {
                        prop_assert!(defect < 1e-12, "{kind} defect {defect}");
                    } else {
                        prop_assert!(hermiticity_defect(&(beta * s)) < 1e-12);
                    }
                }
                let expected = Matrix4::identity() * C64::from(kind.squared_length(&consts, &p));
                prop_assert!(relative_residual(&t.squared_length(), &expected) < 1e-12, "{kind}");
            }
        }

        #[test]
        fn component_is_linear_in_direction(p in momentum(), n in direction()) {
            let consts = PhysicalConstants::unit();
            for kind in SpinKind::ALL {
                let t = spin_matrices(kind, &consts, &p).unwrap();
                let [x, y, z] = n.unit_vector();
                let manual = t.s[0] * C64::from(x) + t.s[1] * C64::from(y) + t.s[2] * C64::from(z);
                prop_assert!(frobenius(&(manual - t.component(&n))) < 1e-14);
            }
        }

        #[test]
        fn czachor_eigenvalues_are_rotation_invariant(p in momentum(), n in direction(), angle in 0.0..6.0f64) {
            // rotate both p and n about the y axis
            let consts = PhysicalConstants::unit();
            let (s, c) = angle.sin_cos();
            let rot = |v: [f64; 3]| [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]];
            let rp = Momentum3::from_array(rot(p.to_array()));
            let rn = SpinDirection::from_vector(rot(n.unit_vector())).unwrap();
            let a = sorted_real_eigenvalues(&spin_component(SpinKind::Czachor, &consts, &p, &n).unwrap());
            let b = sorted_real_eigenvalues(&spin_component(SpinKind::Czachor, &consts, &rp, &rn).unwrap());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
