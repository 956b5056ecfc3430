//! Shared fixtures for the kernel benchmarks.

use spinorlab::wavepacket::{GaussianPacketSpec, Grid2D, PropagationConfig, StepPotentialParams};
use spinorlab::{Momentum3, PhysicalConstants, QuadratureSpec};

/// A generic momentum well away from every axis.
pub fn momentum(constants: &PhysicalConstants) -> Momentum3 {
    Momentum3::new(0.7, -1.3, 0.4) * constants.m0c()
}

/// The step scenario on a quarter-resolution grid, run for `steps` steps.
pub fn small_step_run(
    constants: &PhysicalConstants,
    steps: usize,
) -> (
    Grid2D,
    GaussianPacketSpec,
    StepPotentialParams,
    PropagationConfig,
) {
    let grid = Grid2D::new(256, 32, (-0.6, 0.2), (-0.2, 0.2)).expect("valid grid");
    let config = PropagationConfig::new(1e-6, steps, steps).expect("valid config");
    (
        grid,
        GaussianPacketSpec::step_scenario(constants),
        StepPotentialParams::step_scenario(constants),
        config,
    )
}

/// A coarse product rule for timing the hydrogen quadrature.
pub fn coarse_quadrature() -> QuadratureSpec {
    QuadratureSpec::new(96, 16, 16).expect("valid quadrature")
}
