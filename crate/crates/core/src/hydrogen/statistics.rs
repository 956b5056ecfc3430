//! Momentum-space quadrature of spin expectation values.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::{HydrogenParams, MomentumWavefunction};
use crate::dirac::{Momentum3, PhysicalConstants, SpinDirection};
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, Spinor4, C64};
use crate::quadrature::{periodic_trapezoid, GaussLegendre};
use crate::spin::{spin_component, SpinKind};

use super::ground_state_momentum;

/// Node counts and radial range of the product rule over `(p, cos θ′, φ′)`.
///
/// The radial rule is the trapezoid rule in `t` with
/// `p = s exp((π/2) sinh t)`, `s` the momentum scale of the state, on
/// `s·p_min_ratio ≤ p ≤ s·p_max_ratio`. Integrands decay algebraically in `p`,
/// so the remainder beyond the last node is added from the local power law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub polar_nodes: usize,
    pub azimuthal_nodes: usize,
    pub p_min_ratio: f64,
    pub p_max_ratio: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 256,
            polar_nodes: 64,
            azimuthal_nodes: 64,
            p_min_ratio: 1e-8,
            p_max_ratio: 1e30,
        }
    }
}

/// Power-law exponents `p^{−β}` with `β` below this count as divergent.
const DIVERGENT_EXPONENT: f64 = 1.0 + 1e-3;
/// Last-shell contributions below this fraction of `∫|f|` are ignored.
const NEGLIGIBLE_TAIL: f64 = 1e-14;

impl QuadratureSpec {
    pub fn new(radial_nodes: usize, polar_nodes: usize, azimuthal_nodes: usize) -> Result<Self> {
        let spec = Self {
            radial_nodes,
            polar_nodes,
            azimuthal_nodes,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 || self.polar_nodes < 8 || self.azimuthal_nodes < 8 {
            return Err(Error::invalid(format!(
                "quadrature needs at least 8 nodes per axis, got {}x{}x{}",
                self.radial_nodes, self.polar_nodes, self.azimuthal_nodes
            )));
        }
        if !(self.p_min_ratio > 0.0
            && self.p_min_ratio < 1.0
            && self.p_max_ratio > 1.0
            && self.p_max_ratio <= 1e60)
        {
            return Err(Error::invalid(format!(
                "radial range ratios must satisfy 0 < min < 1 < max ≤ 1e60, got {:e}, {:e}",
                self.p_min_ratio, self.p_max_ratio
            )));
        }
        Ok(())
    }

    /// Every node count doubled, same radial range.
    pub fn doubled(&self) -> Self {
        Self {
            radial_nodes: 2 * self.radial_nodes,
            polar_nodes: 2 * self.polar_nodes,
            azimuthal_nodes: 2 * self.azimuthal_nodes,
            ..*self
        }
    }
}

struct ProductRule {
    /// `(p, weight)`, the weight including `p²` and the Jacobian.
    radial: Vec<(f64, f64)>,
    angular: Vec<(f64, f64, f64)>,
}

impl ProductRule {
    fn new(spec: &QuadratureSpec, scale: f64) -> Result<Self> {
        spec.validate()?;
        let t_of = |ratio: f64| (ratio.ln() / FRAC_PI_2).asinh();
        let (t_lo, t_hi) = (t_of(spec.p_min_ratio), t_of(spec.p_max_ratio));
        let n = spec.radial_nodes;
        let h = (t_hi - t_lo) / (n - 1) as f64;
        let radial = (0..n)
            .map(|k| {
                let t = t_lo + k as f64 * h;
                let p = scale * (FRAC_PI_2 * t.sinh()).exp();
                let end = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                (p, end * h * FRAC_PI_2 * t.cosh() * p * p * p)
            })
            .collect();
        let azimuthal: Vec<(f64, f64)> = periodic_trapezoid(spec.azimuthal_nodes).collect();
        let mut angular = Vec::with_capacity(spec.polar_nodes * spec.azimuthal_nodes);
        for (x, wx) in GaussLegendre::new(spec.polar_nodes)?.on_interval(-1.0, 1.0) {
            for &(phi, wp) in &azimuthal {
                angular.push((x.acos(), phi, wx * wp));
            }
        }
        Ok(Self { radial, angular })
    }

    /// Integrates `f(p, θ′, φ′) p² dp dΩ`, parallel over radial nodes with a
    /// fixed reduction order. Entries whose radial tail does not decay faster
    /// than `1/p` come back as `None`.
    fn sum<const N: usize, F>(&self, f: F) -> Result<[Option<C64>; N]>
    where
        F: Fn(f64, f64, f64) -> Result<[C64; N]> + Sync,
    {
        let shells: Vec<[C64; N]> = self
            .radial
            .par_iter()
            .map(|&(p, _)| {
                let mut acc = [C64::from(0.0); N];
                for &(theta, phi, wa) in &self.angular {
                    let v = f(p, theta, phi)?;
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += x * wa;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut total = [C64::from(0.0); N];
        let mut magnitude = [0.0f64; N];
        for (shell, &(_, w)) in shells.iter().zip(&self.radial) {
            for i in 0..N {
                total[i] += shell[i] * w;
                magnitude[i] += shell[i].norm() * w;
            }
        }
        let n = self.radial.len();
        let (pa, pb) = (self.radial[n - 2].0, self.radial[n - 1].0);
        let mut out = [None; N];
        for i in 0..N {
            let floor = NEGLIGIBLE_TAIL * magnitude[i];
            let re = tail(pa, pb, shells[n - 2][i].re, shells[n - 1][i].re, floor);
            let im = tail(pa, pb, shells[n - 2][i].im, shells[n - 1][i].im, floor);
            if let (Some(re), Some(im)) = (re, im) {
                let v = total[i] + C64::new(re, im);
                if !v.is_finite() {
                    return Err(Error::QuadratureFailure(
                        "momentum-space sum is not finite".into(),
                    ));
                }
                out[i] = Some(v);
            }
        }
        Ok(out)
    }
}

/// `∫_{pb}^∞ F(p) p² dp` for a shell density `F` that follows a power law
/// through `(pa, fa)` and `(pb, fb)`; `None` when that law is not integrable.
/// Shells below `floor` are rounding noise and contribute nothing.
fn tail(pa: f64, pb: f64, fa: f64, fb: f64, floor: f64) -> Option<f64> {
    if (fb * pb * pb * pb).abs() <= floor {
        return Some(0.0);
    }
    if fa == 0.0 || fa.signum() != fb.signum() {
        return None;
    }
    // density p² F(p) ∝ p^{−β}
    let beta = -((fb * pb * pb) / (fa * pa * pa)).ln() / (pb / pa).ln();
    if !(beta > DIVERGENT_EXPONENT) {
        return None;
    }
    Some(fb * pb * pb * pb / (beta - 1.0))
}

fn divergent(what: &str) -> Error {
    Error::QuadratureFailure(format!(
        "{what} diverges: the momentum tail decays no faster than 1/p"
    ))
}

fn momentum_at(p: f64, theta: f64, phi: f64) -> Momentum3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Momentum3::new(p * st * cp, p * st * sp, p * ct)
}

fn s3(
    kind: SpinKind,
    constants: &PhysicalConstants,
    p: f64,
    theta: f64,
    phi: f64,
) -> Result<Matrix4> {
    spin_component(
        kind,
        constants,
        &momentum_at(p, theta, phi),
        &SpinDirection::z(),
    )
}

/// Mean and variance of `S₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinStatistics {
    pub mean: f64,
    pub variance: f64,
}

/// `‖ψ‖²` by quadrature.
pub fn momentum_norm<W: MomentumWavefunction>(state: &W, quad: &QuadratureSpec) -> Result<f64> {
    let rule = ProductRule::new(quad, state.momentum_scale())?;
    let [n] = rule.sum(|p, t, f| Ok([C64::from(state.amplitude(p, t, f)?.norm_squared())]))?;
    Ok(n.ok_or_else(|| divergent("norm"))?.re)
}

/// `⟨a|S₃|b⟩` with the kind's matrix applied pointwise in momentum space.
/// The radial rule follows the momentum scale of `a`.
pub fn matrix_element<A: MomentumWavefunction, B: MomentumWavefunction>(
    kind: SpinKind,
    constants: &PhysicalConstants,
    a: &A,
    b: &B,
    quad: &QuadratureSpec,
) -> Result<C64> {
    let rule = ProductRule::new(quad, a.momentum_scale())?;
    let [v] = rule.sum(|p, t, f| {
        let s = s3(kind, constants, p, t, f)?;
        Ok([a.amplitude(p, t, f)?.dotc(&(s * b.amplitude(p, t, f)?))])
    })?;
    v.ok_or_else(|| divergent("matrix element"))
}

/// Ground-state `⟨S₃⟩` and `⟨S₃²⟩ − ⟨S₃⟩²`, real parts taken for the
/// non-Hermitian kinds.
///
/// The variance is `+∞` when `⟨S₃²⟩` diverges, as it does for kinds growing
/// linearly in `p` once `γ ≤ 1/2`.
pub fn spin_statistics(
    kind: SpinKind,
    params: &HydrogenParams,
    quad: &QuadratureSpec,
) -> Result<SpinStatistics> {
    let state = ground_state_momentum(params);
    let constants = params.constants();
    let rule = ProductRule::new(quad, state.momentum_scale())?;
    let [first, second] = rule.sum(|p, t, f| {
        let psi: Spinor4 = state.amplitude(p, t, f)?;
        let s = s3(kind, constants, p, t, f)?;
        let sp = s * psi;
        Ok([psi.dotc(&sp), psi.dotc(&(s * sp))])
    })?;
    let mean = first.ok_or_else(|| divergent("spin expectation"))?.re;
    let variance = second.map_or(f64::INFINITY, |s| s.re - mean * mean);
    Ok(SpinStatistics { mean, variance })
}

/// `⟨S₃⟩(t)` for `c1 ψ₁ e^{−iℰ₁t} + c2 ψ₂ e^{−iℰ₂t}` with normalized,
/// mutually orthogonal states.
#[allow(clippy::too_many_arguments)]
pub fn superposition_spin_trace<A: MomentumWavefunction, B: MomentumWavefunction>(
    state1: &A,
    state2: &B,
    c1: C64,
    c2: C64,
    kind: SpinKind,
    constants: &PhysicalConstants,
    quad: &QuadratureSpec,
    times: &[f64],
) -> Result<Vec<f64>> {
    let weight = c1.norm_sqr() + c2.norm_sqr();
    if (weight - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "|c1|² + |c2|² = {weight} must equal 1"
        )));
    }
    let s11 = matrix_element(kind, constants, state1, state1, quad)?;
    let s22 = matrix_element(kind, constants, state2, state2, quad)?;
    let s12 = if c2.norm_sqr() == 0.0 || c1.norm_sqr() == 0.0 {
        C64::from(0.0)
    } else {
        matrix_element(kind, constants, state1, state2, quad)?
    };
    let omega = state2.energy() - state1.energy();
    Ok(times
        .iter()
        .map(|&t| {
            let cross = c1.conj() * c2 * s12 * C64::from_polar(1.0, -omega * t);
            c1.norm_sqr() * s11.re + c2.norm_sqr() * s22.re + 2.0 * cross.re
        })
        .collect())
}
