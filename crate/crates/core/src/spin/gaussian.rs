use crate::dirac::{Momentum3, PhysicalConstants};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

use super::{spin_matrices, SpinKind};

/// `⟨S_Ch,3⟩` for the spinor `(1, 0, 0, 0)` at sharp momentum `(p̄x, 0, 0)`:
/// `1/2 + x²/(2(1 + sqrt(1 + x²)))` with `x = p̄x/(m0c)`, which equals `p0(p̄)/(2m0c)`.
pub fn chakrabarti_gaussian_closed_form(constants: &PhysicalConstants, pbar_x: f64) -> f64 {
    let x = pbar_x / constants.m0c();
    0.5 + x * x / (2.0 * (1.0 + (1.0 + x * x).sqrt()))
}

/// Chakrabarti spin expectation `⟨S_Ch,3⟩` of a packet with constant spinor
/// `(1, 0, 0, 0)` whose momentum density along x is a Gaussian of standard
/// deviation `sigma` centred at `pbar_x`.
///
/// The result exceeds 1/2 for every `pbar_x ≠ 0` even though the packet is a
/// Pauli spin-up state. For `sigma > 0` the diagonal matrix element of the
/// operator is averaged by Gauss-Legendre quadrature over `±10 sigma`.
pub fn chakrabarti_gaussian_expectation(
    constants: &PhysicalConstants,
    sigma: f64,
    pbar_x: f64,
) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() || !pbar_x.is_finite() {
        return Err(Error::invalid(format!(
            "Gaussian width must be finite and non-negative, got sigma = {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(chakrabarti_gaussian_closed_form(constants, pbar_x));
    }
    let rule = GaussLegendre::new(32)?;
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
    let mut failure = None;
    let value = rule.integrate_composite(pbar_x - 10.0 * sigma, pbar_x + 10.0 * sigma, 16, |px| {
        let weight = norm * (-(px - pbar_x).powi(2) / (2.0 * sigma * sigma)).exp();
        match spin_matrices(
            SpinKind::Chakrabarti,
            constants,
            &Momentum3::new(px, 0.0, 0.0),
        ) {
            Ok(t) => weight * t.s[2][(0, 0)].re,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let consts = PhysicalConstants::atomic();
        assert_eq!(chakrabarti_gaussian_closed_form(&consts, 0.0), 0.5);
        let at_mc = chakrabarti_gaussian_closed_form(&consts, consts.m0c());
        assert!((at_mc - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            chakrabarti_gaussian_expectation(&consts, 0.0, consts.m0c()).unwrap(),
            at_mc
        );
    }

    #[test]
    fn closed_form_is_the_sharp_momentum_matrix_element() {
        let consts = PhysicalConstants::new(1.0, 3.0, -1.0).unwrap();
        for px in [-7.0, -0.2, 0.9, 4.0] {
            let t = spin_matrices(
                SpinKind::Chakrabarti,
                &consts,
                &Momentum3::new(px, 0.0, 0.0),
            )
            .unwrap();
            let direct = t.s[2][(0, 0)];
            assert!(direct.im.abs() < 1e-15);
            assert!((direct.re - chakrabarti_gaussian_closed_form(&consts, px)).abs() < 1e-14);
        }
    }

    #[test]
    fn narrow_packet_matches_sharp_limit() {
        let consts = PhysicalConstants::atomic();
        for x in [-2.0, -0.5, 0.3, 1.0, 3.0] {
            let pbar = x * consts.m0c();
            let q = chakrabarti_gaussian_expectation(&consts, 1e-3 * consts.m0c(), pbar).unwrap();
            assert!((q - chakrabarti_gaussian_closed_form(&consts, pbar)).abs() < 1e-6);
        }
    }

    #[test]
    fn wide_packet_exceeds_half_even_at_zero_mean() {
        let consts = PhysicalConstants::unit();
        let v = chakrabarti_gaussian_expectation(&consts, 0.5, 0.0).unwrap();
        assert!(v > 0.5);
        assert!(chakrabarti_gaussian_expectation(&consts, -1.0, 0.0).is_err());
    }
}
