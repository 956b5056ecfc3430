//! Randomized verification of the operator algebra.
//!
//! Every check is evaluated at a set of seeded random momenta and spin
//! directions; a check reports the worst residual over all samples.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::{dirac, free_hamiltonian, Momentum3, PhysicalConstants, SpinDirection};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, max_pairwise_overlap, relative_residual, Matrix4, C64};
use crate::spin::{
    closed_form_eigensystem, commutator_check, forms, spin_matrices, transform_ch, transform_fw,
    transform_pr, verify_subspace_identities, SpinKind, DEGENERATE_MOMENTUM, IDENTITY_TOLERANCE,
};

/// Momentum components are drawn uniformly from `[−RANGE, RANGE]·m0c`.
pub const SAMPLE_RANGE: f64 = 3.0;

/// Chakrabarti components must be at least this far from Hermitian.
const NON_HERMITIAN_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    /// The worst residual must stay below the value.
    Below(f64),
    /// The smallest value must exceed the bound.
    Above(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteCheck {
    pub name: String,
    /// Worst value over the samples: the maximum for [`Bound::Below`], the
    /// minimum for [`Bound::Above`].
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Largest residual among the upper-bounded checks.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| matches!(c.bound, Bound::Below(_)))
            .map(|c| c.value)
            .fold(0.0, f64::max)
    }
}

#[derive(Default)]
struct Collector {
    entries: BTreeMap<String, (f64, Bound)>,
}

impl Collector {
    fn below(&mut self, name: impl Into<String>, residual: f64) {
        let e = self
            .entries
            .entry(name.into())
            .or_insert((0.0, Bound::Below(IDENTITY_TOLERANCE)));
        // NaN must not be masked by max
        e.0 = if residual.is_nan() || e.0.is_nan() {
            f64::NAN
        } else {
            e.0.max(residual)
        };
    }

    fn above(&mut self, name: impl Into<String>, value: f64, floor: f64) {
        let e = self
            .entries
            .entry(name.into())
            .or_insert((f64::INFINITY, Bound::Above(floor)));
        e.0 = if value.is_nan() || e.0.is_nan() {
            f64::NAN
        } else {
            e.0.min(value)
        };
    }

    fn finish(self, samples: usize, seed: u64) -> SuiteReport {
        let checks = self
            .entries
            .into_iter()
            .map(|(name, (value, bound))| {
                let passed = match bound {
                    Bound::Below(t) => value < t,
                    Bound::Above(t) => value > t,
                };
                SuiteCheck {
                    name,
                    value,
                    bound,
                    passed,
                }
            })
            .collect();
        SuiteReport {
            samples,
            seed,
            checks,
        }
    }
}

/// Seeded momenta with components uniform in `[−3, 3]·m0c` (redrawn below
/// the degenerate-momentum cutoff) and spin directions uniform on the sphere.
pub fn sample_momenta(
    constants: &PhysicalConstants,
    samples: usize,
    seed: u64,
) -> Vec<(Momentum3, SpinDirection)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = SAMPLE_RANGE * constants.m0c();
    let cutoff = DEGENERATE_MOMENTUM * constants.m0c();
    (0..samples)
        .map(|_| {
            let p = loop {
                let p = Momentum3::new(
                    rng.random_range(-range..=range),
                    rng.random_range(-range..=range),
                    rng.random_range(-range..=range),
                );
                if p.norm() >= cutoff {
                    break p;
                }
            };
            let cos_theta: f64 = rng.random_range(-1.0..=1.0);
            let phi = rng.random_range(0.0..TAU);
            let theta = cos_theta.acos().clamp(0.0, PI);
            (
                p,
                SpinDirection::new(theta, phi).expect("theta lies in [0, pi]"),
            )
        })
        .collect()
}

/// A labelled operator triplet.
type NamedForm = (&'static str, [Matrix4; 3]);

fn triplet_residual(a: &[Matrix4; 3], b: &[Matrix4; 3]) -> f64 {
    (0..3)
        .map(|i| relative_residual(&a[i], &b[i]))
        .fold(0.0, f64::max)
}

/// Commutators, Hermiticity pattern, squared lengths, closed-form eigenpairs,
/// similarity transforms and subspace identities of all seven kinds.
pub fn algebra_suite(
    constants: &PhysicalConstants,
    samples: usize,
    seed: u64,
) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::invalid(
            "the algebra suite needs at least one sample",
        ));
    }
    let d = dirac();
    let mut out = Collector::default();
    for (p, n) in sample_momenta(constants, samples, seed) {
        for kind in SpinKind::ALL {
            let label = kind.label();
            let triplet = spin_matrices(kind, constants, &p)?;
            let report = commutator_check(kind, constants, &p)?;
            out.below(
                format!("{label}: component commutators"),
                report.algebra_residual,
            );
            out.below(
                format!("{label}: commutator with H0"),
                report.hamiltonian_residual,
            );

            let component = triplet.component(&n);
            if kind.is_hermitian() {
                out.below(
                    format!("{label}: hermitian"),
                    hermiticity_defect(&component),
                );
            } else {
                out.above(
                    format!("{label}: non-hermitian"),
                    hermiticity_defect(&component),
                    NON_HERMITIAN_FLOOR,
                );
            }

            let target = Matrix4::identity() * C64::from(kind.squared_length(constants, &p));
            out.below(
                format!("{label}: squared length"),
                relative_residual(&triplet.squared_length(), &target),
            );

            let system = closed_form_eigensystem(kind, constants, &p, &n)?;
            let worst = system
                .eigenvectors
                .iter()
                .zip(system.eigenvalues)
                .map(|(v, l)| {
                    let scale = component.norm().max(1.0);
                    (component * v - v * C64::from(l)).norm() / scale
                })
                .fold(0.0, f64::max);
            out.below(format!("{label}: eigenpairs"), worst);
            if kind != SpinKind::Chakrabarti {
                out.below(
                    format!("{label}: orthogonal eigenvectors"),
                    max_pairwise_overlap(&system.eigenvectors),
                );
            }
        }

        let half: [Matrix4; 3] = d.sigma.map(|s| s * C64::from(0.5));
        let tfw = transform_fw(constants, &p);
        let (tch, tch_inv) = transform_ch(constants, &p);
        let tpr = transform_pr(constants, &p)?;
        let s = |k| spin_matrices(k, constants, &p).map(|t| t.s);
        let conj = |t: &Matrix4, ti: &Matrix4, m: &Matrix4| t * m * ti;
        let fw_from = half.map(|m| conj(&tfw, &tfw.adjoint(), &m));
        let ch_from = half.map(|m| conj(&tch, &tch_inv, &m));
        let pr_from = half.map(|m| conj(&tpr, &tpr.adjoint(), &m));
        let fg_from = half.map(|m| conj(&tfw, &tfw.adjoint(), &(d.beta * m)));
        out.below(
            "FW: T_FW (Σ/2) T_FW†",
            triplet_residual(&fw_from, &s(SpinKind::FoldyWouthuysen)?),
        );
        out.below(
            "Ch: T_Ch (Σ/2) T_Ch⁻¹",
            triplet_residual(&ch_from, &s(SpinKind::Chakrabarti)?),
        );
        out.below(
            "Pr: T_Pr (Σ/2) T_Pr†",
            triplet_residual(&pr_from, &s(SpinKind::Pryce)?),
        );
        out.below(
            "FG: T_FW (βΣ/2) T_FW†",
            triplet_residual(&fg_from, &s(SpinKind::FradkinGood)?),
        );
        let h = free_hamiltonian(constants, &p);
        let fw_target = d.beta * C64::from(constants.c() * crate::dirac::p0(constants, &p));
        out.below(
            "T_FW† H0 T_FW = cβp0",
            relative_residual(&(tfw.adjoint() * h * tfw), &fw_target),
        );

        for check in verify_subspace_identities(constants, &p, &n)?.checks {
            out.below(check.name, check.residual);
        }
    }
    Ok(out.finish(samples, seed))
}

/// Pairwise agreement of the alternative algebraic forms: four for
/// Foldy-Wouthuysen, the Pryce forms, and two each for Chakrabarti and Czachor.
pub fn form_suite(constants: &PhysicalConstants, samples: usize, seed: u64) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::invalid("the form suite needs at least one sample"));
    }
    let mut out = Collector::default();
    for (p, _) in sample_momenta(constants, samples, seed) {
        let groups: [(&str, Vec<NamedForm>); 4] = [
            (
                "FW",
                vec![
                    (
                        "primary",
                        spin_matrices(SpinKind::FoldyWouthuysen, constants, &p)?.s,
                    ),
                    ("energy", forms::fw_energy_form(constants, &p)),
                    (
                        "pauli-lubanski",
                        forms::fw_pauli_lubanski_form(constants, &p)?,
                    ),
                    ("hamiltonian", forms::fw_hamiltonian_form(constants, &p)),
                ],
            ),
            (
                "Pr",
                vec![
                    ("primary", spin_matrices(SpinKind::Pryce, constants, &p)?.s),
                    ("gamma5", forms::pryce_gamma5_form(constants, &p)?),
                    ("energy", forms::pryce_energy_form(constants, &p)?),
                    ("alpha", forms::pryce_alpha_form(constants, &p)?),
                    (
                        "pauli-lubanski",
                        forms::pryce_pauli_lubanski_form(constants, &p)?,
                    ),
                ],
            ),
            (
                "Ch",
                vec![
                    (
                        "primary",
                        spin_matrices(SpinKind::Chakrabarti, constants, &p)?.s,
                    ),
                    ("split", forms::chakrabarti_split_form(constants, &p)),
                ],
            ),
            (
                "Cz",
                vec![
                    (
                        "primary",
                        spin_matrices(SpinKind::Czachor, constants, &p)?.s,
                    ),
                    ("projector", forms::czachor_projector_form(constants, &p)),
                    (
                        "pauli-lubanski",
                        forms::czachor_pauli_lubanski_form(constants, &p)?,
                    ),
                ],
            ),
        ];
        for (label, members) in &groups {
            for (i, (a_name, a)) in members.iter().enumerate() {
                for (b_name, b) in &members[i + 1..] {
                    out.below(
                        format!("{label}: {a_name} = {b_name}"),
                        triplet_residual(a, b),
                    );
                }
            }
        }
    }
    Ok(out.finish(samples, seed))
}
