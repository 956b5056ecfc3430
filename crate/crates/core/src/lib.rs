//! Relativistic spin operators for the Dirac equation.
//!
//! The crate builds the seven competing spin operators as momentum-space 4x4
//! matrices and uses them in three settings: free wave packets scattering off
//! a smooth potential step, Kapitza-Dirac mode dynamics in a standing wave,
//! and hydrogenic ground states.

// comparisons are negated so that NaN falls on the rejecting side
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod error;
pub mod hydrogen;
pub mod kapitza;
pub mod linalg;
pub mod observables;
pub mod quadrature;
pub mod spin;
pub mod verification;
pub mod wavepacket;

pub use dirac::{
    chi_pair, energy_projector, free_hamiltonian, p0, pauli_lubanski, u_spinor, v_spinor,
    DiracMatrices, EnergySign, Momentum3, PauliLubanski, PhysicalConstants, SpinDirection,
};
pub use error::{Error, Result};
pub use hydrogen::{HydrogenParams, MagneticState, QuadratureSpec};
pub use linalg::{Matrix4, Spinor4, TwoSpinor, C64};
pub use observables::ObservableRow;
pub use spin::{spin_component, spin_matrices, SpinKind, SpinMatrixTriplet};
