//! Gauss-Legendre and tanh-sinh rules.

use std::f64::consts::FRAC_PI_2;
use std::num::NonZeroUsize;

use crate::error::{Error, Result};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(degree: usize) -> Result<Self> {
        let degree = NonZeroUsize::new(degree)
            .ok_or_else(|| Error::invalid("Gauss-Legendre degree must be positive"))?;
        let rule = gauss_quad::GaussLegendre::new(degree);
        let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Sum over `panels` equal sub-intervals of `[a, b]`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`.
///
/// Tolerates integrable endpoint singularities. The step is halved until two
/// successive estimates agree to `rel_tol` (relative to the integral of `|f|`).
pub fn tanh_sinh<F: FnMut(f64) -> f64>(a: f64, b: f64, rel_tol: f64, mut f: F) -> Result<f64> {
    if !(b > a) {
        return Err(Error::invalid(format!(
            "tanh-sinh interval [{a}, {b}] is empty"
        )));
    }
    let half = 0.5 * (b - a);
    // abscissa offsets from each endpoint are computed directly to keep
    // resolution near a singular endpoint
    let mut sample = |t: f64| -> (f64, f64) {
        let s = FRAC_PI_2 * t.sinh();
        let cosh_s = s.cosh();
        let weight = FRAC_PI_2 * t.cosh() / (cosh_s * cosh_s);
        // distance from the nearer endpoint, 1 − tanh|s| = 2 / (1 + e^{2|s|})
        let gap = half * 2.0 / (1.0 + (2.0 * s.abs()).exp());
        let x = if s >= 0.0 { b - gap } else { a + gap };
        if gap <= 0.0 || x <= a || x >= b {
            return (0.0, 0.0);
        }
        let v = f(x);
        (half * weight * v, half * weight * v.abs())
    };
    let t_max = 6.5;
    let mut h = 0.5;
    let (mut sum, mut abs_sum) = sample(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        let (v1, a1) = sample(t);
        let (v2, a2) = sample(-t);
        sum += v1 + v2;
        abs_sum += a1 + a2;
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        // new points are the odd multiples of the halved step
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            let (v1, a1) = sample(t);
            let (v2, a2) = sample(-t);
            sum += v1 + v2;
            abs_sum += a1 + a2;
            k += 2;
        }
        let next = sum * h;
        let scale = (abs_sum * h).max(f64::MIN_POSITIVE);
        if !next.is_finite() {
            return Err(Error::QuadratureFailure(
                "tanh-sinh produced a non-finite value".into(),
            ));
        }
        if (next - estimate).abs() <= rel_tol * scale {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::QuadratureFailure(format!(
        "tanh-sinh did not reach relative tolerance {rel_tol:e} on [{a}, {b}]"
    )))
}

/// Trapezoid nodes and weights for a periodic integrand on `[0, 2π)`.
pub fn periodic_trapezoid(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let w = std::f64::consts::TAU / n as f64;
    (0..n).map(move |k| (k as f64 * w, w))
}
