//! Spherical harmonics, spherical Bessel functions and radial transforms.

use std::f64::consts::{FRAC_2_PI, PI};

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::quadrature::{tanh_sinh, GaussLegendre};

/// Below this `p/z` the bracket of `𝒥₁` is evaluated from its Taylor series.
const J1_SERIES_LIMIT: f64 = 0.01;

/// `𝒥₀(z, γ, p) = sqrt(2/π) ∫ e^{−zr} (2zr)^{γ−1} r² j₀(rp) dr` in closed form.
pub fn special_j0(z: f64, gamma_: f64, p: f64) -> Result<f64> {
    check_j_domain("special_j0", z, gamma_, p)?;
    let t = p / z;
    let k = 1.0 + gamma_;
    let prefactor =
        FRAC_2_PI.sqrt() * 2f64.powf(gamma_ - 1.0) / (z * z * (1.0 + t * t).powf(0.5 * k));
    let ratio = (k * t.atan()).sin() / p;
    Ok(prefactor * gamma(k) * ratio)
}

/// `𝒥₁(z, γ, p) = sqrt(2/π) ∫ e^{−zr} (2zr)^{γ−1} r² j₁(rp) dr` in closed form.
pub fn special_j1(z: f64, gamma_: f64, p: f64) -> Result<f64> {
    check_j_domain("special_j1", z, gamma_, p)?;
    let t = p / z;
    let k = 1.0 + gamma_;
    let prefactor = FRAC_2_PI.sqrt() * 2f64.powf(gamma_ - 1.0) * gamma(gamma_)
        / (z * z * p * (1.0 + t * t).powf(0.5 * k));
    let bracket = if t < J1_SERIES_LIMIT {
        let (t2, k2) = (t * t, k * k);
        let c = k * (k2 - 1.0);
        c * t2 / 3.0 - c * (k2 + 6.0) * t2 * t2 / 30.0
            + c * (k2 * k2 + 36.0 * k2 + 120.0) * t2 * t2 * t2 / 840.0
    } else {
        let a = k * t.atan();
        -k * a.cos() + a.sin() / t
    };
    Ok(prefactor * bracket)
}

/// `𝒥₀` for `order = 0`, `𝒥₁` for `order = 1`.
pub fn special_j(order: u8, z: f64, gamma_: f64, p: f64) -> Result<f64> {
    match order {
        0 => special_j0(z, gamma_, p),
        1 => special_j1(z, gamma_, p),
        _ => Err(Error::domain(
            "special_j",
            format!("order must be 0 or 1, got {order}"),
        )),
    }
}

fn check_j_domain(function: &'static str, z: f64, gamma_: f64, p: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(function, format!("z = {z} must be positive")));
    }
    if !(gamma_ > 0.0 && gamma_ <= 1.0) {
        return Err(Error::domain(
            function,
            format!("gamma = {gamma_} must lie in (0, 1]"),
        ));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::domain(function, format!("p = {p} must be positive")));
    }
    Ok(())
}

/// Spherical Bessel function of the first kind `j_l(x)` for `x ≥ 0`.
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let j0 = if x < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    if l == 0 {
        return j0;
    }
    let j1 = if x < 1e-4 {
        x / 3.0 - x * x * x / 30.0
    } else {
        (x.sin() / x - x.cos()) / x
    };
    if l == 1 {
        return j1;
    }
    if x >= l as f64 {
        let (mut a, mut b) = (j0, j1);
        for n in 1..l {
            let c = (2 * n + 1) as f64 / x * b - a;
            a = b;
            b = c;
        }
        return b;
    }
    if x < 1e-3 * (l as f64).max(1.0) {
        return bessel_series(l, x);
    }
    // Miller's downward recurrence, normalized against the larger of j0, j1
    let start = l + 20 + (x as u32) + ((40 * l) as f64).sqrt() as u32;
    let (mut above, mut current) = (0.0f64, 1e-300f64);
    let (mut at_l, mut at_1, mut at_0) = (0.0, 0.0, 0.0);
    for n in (0..=start).rev() {
        if n == l {
            at_l = current;
        }
        if n == 1 {
            at_1 = current;
        }
        if n == 0 {
            at_0 = current;
            break;
        }
        let below = (2 * n + 1) as f64 / x * current - above;
        above = current;
        current = below;
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            at_l *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    if j0.abs() >= j1.abs() {
        at_l * j0 / at_0
    } else {
        at_l * j1 / at_1
    }
}

fn bessel_series(l: u32, x: f64) -> f64 {
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / (2 * k + 1) as f64;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Orthonormal spherical harmonic with the Condon-Shortley phase; zero for `|m| > l`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> C64 {
    let am = m.unsigned_abs();
    if am > l {
        return C64::from(0.0);
    }
    let x = theta.cos();
    let plm = associated_legendre(l, am, x);
    // (l − |m|)! / (l + |m|)!
    let ratio: f64 = ((l - am + 1)..=(l + am)).map(|k| 1.0 / k as f64).product();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let y = C64::from_polar(norm * plm, am as f64 * phi);
    if m < 0 {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        y.conj() * sign
    } else {
        y
    }
}

/// `P_l^m(x)` including the Condon-Shortley phase `(−1)^m`.
fn associated_legendre(l: u32, m: u32, x: f64) -> f64 {
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = pll;
    }
    pll
}

/// Sign of the exponent in `(2π)^{−3/2} ∫ f(r) e^{±ir·p} d³r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformSign {
    Plus,
    Minus,
}

/// Spherical-Bessel transform of `R(r) Y_lm`: returns the coefficient of
/// `Y_lm(θ′, φ′)`, `(±i)^l sqrt(2/π) ∫ R(r) j_l(rp) r² dr`.
///
/// `scale` is the length over which `R` varies. The integral is summed panel
/// by panel until `rel_tol` is met over several consecutive panels; the first
/// panel uses tanh-sinh to tolerate an integrable singularity at `r = 0`.
pub fn transform_radial<F: Fn(f64) -> f64>(
    l: u32,
    sign: TransformSign,
    radial: F,
    scale: f64,
    p: f64,
    rel_tol: f64,
) -> Result<C64> {
    if !(scale > 0.0 && scale.is_finite()) || !(p >= 0.0 && p.is_finite()) {
        return Err(Error::invalid(format!(
            "radial transform needs scale > 0 and p ≥ 0, got scale = {scale}, p = {p}"
        )));
    }
    let f = |r: f64| radial(r) * spherical_bessel_j(l, r * p) * r * r;
    let width = if p > 0.0 { scale.min(PI / p) } else { scale };
    let mut total = tanh_sinh(0.0, width, 1e-3 * rel_tol, f)?;
    let mut total_abs = total.abs();
    let rule = GaussLegendre::new(24)?;
    let mut quiet = 0;
    let mut k = 1usize;
    const MAX_PANELS: usize = 2_000_000;
    while quiet < 8 {
        if k > MAX_PANELS {
            return Err(Error::QuadratureFailure(format!(
                "radial transform (l = {l}, p = {p:e}) did not converge within {MAX_PANELS} panels"
            )));
        }
        let lo = k as f64 * width;
        let piece = rule.integrate(lo, lo + width, f);
        total += piece;
        total_abs = total_abs.max(total.abs());
        if piece.abs() <= rel_tol * total_abs && lo > 10.0 * scale {
            quiet += 1;
        } else {
            quiet = 0;
        }
        k += 1;
    }
    let phase = match (sign, l % 4) {
        (_, 0) => C64::new(1.0, 0.0),
        (TransformSign::Plus, 1) | (TransformSign::Minus, 3) => C64::new(0.0, 1.0),
        (_, 2) => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    Ok(phase * (FRAC_2_PI.sqrt() * total))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn j_functions_match_quadrature_oracle_values() {
        // reference values from high-precision adaptive quadrature
        let cases = [
            (1.0, 0.9, 0.5, 0.8935377255430165, 0.4291858245745883),
            (0.5, 0.6, 10.0, 0.001162590142332517, 0.003716570759421835),
            (2.0, 0.95, 0.1, 0.1831894327018742, 0.009006517419945722),
            (1.0, 0.8, 1.0, 0.3424172693111131, 0.30599605963497385),
        ];
        for (z, g, p, j0, j1) in cases {
            assert!((special_j0(z, g, p).unwrap() - j0).abs() < 1e-12 * j0);
            assert!((special_j1(z, g, p).unwrap() - j1).abs() < 1e-11 * j1);
        }
    }

    #[test]
    fn j_series_branch_is_continuous() {
        for (z, g) in [(1.0, 0.9), (92.0, 0.7), (0.5, 0.3)] {
            for order in [0u8, 1] {
                let below = special_j(order, z, g, z * J1_SERIES_LIMIT * (1.0 - 1e-13)).unwrap();
                let above = special_j(order, z, g, z * J1_SERIES_LIMIT * (1.0 + 1e-13)).unwrap();
                assert!(
                    (below - above).abs() < 1e-11 * below.abs(),
                    "order {order}: {below} {above}"
                );
            }
        }
    }

    #[test]
    fn j_limits_and_domain() {
        assert!(special_j1(1.0, 0.9, 1e-8).unwrap().abs() < 1e-7);
        assert!(special_j0(1.0, 0.9, 1e6).unwrap().abs() < 1e-10);
        assert!(special_j1(1.0, 0.9, 1e6).unwrap().abs() < 1e-10);
        assert!(special_j0(1.0, 0.0, 1.0).is_err());
        assert!(special_j0(-1.0, 0.5, 1.0).is_err());
        assert!(special_j1(1.0, 0.5, 0.0).is_err());
        assert!(special_j(2, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn bessel_against_reference_values() {
        // (x, j2, j3, j10) from arbitrary-precision evaluation
        let cases = [
            (
                1.0e-6,
                6.6666666666661905e-14,
                9.5238095238089947e-21,
                7.2730919455572649e-71,
            ),
            (
                0.01,
                6.6666190477513226e-6,
                9.5237566138768637e-9,
                7.2730761345037872e-31,
            ),
            (
                0.3,
                0.0059615248686202177,
                0.00025585976969508184,
                4.2862929705600981e-16,
            ),
            (
                1.0,
                0.062035052011373861,
                0.0090065811171125163,
                7.116552640047313e-11,
            ),
            (
                2.5,
                0.26006672948890523,
                0.10392046970240394,
                6.0504362296385398e-7,
            ),
            (
                7.0,
                -0.13426627079380086,
                -0.0016120468591568731,
                0.0067289852643458608,
            ),
            (
                40.0,
                -0.017342392966988259,
                -0.019306946387479672,
                0.013124803182748326,
            ),
        ];
        for (x, j2, j3, j10) in cases {
            for (l, want) in [(2, j2), (3, j3), (10, j10)] {
                let got = spherical_bessel_j(l, x);
                assert!(
                    (got - want).abs() < 1e-12 * want.abs(),
                    "j{l}({x}) = {got:e}, want {want:e}"
                );
            }
        }
        assert!((spherical_bessel_j(10, 5.0) - 0.00040734424424946043).abs() < 1e-16);
        assert!((spherical_bessel_j(25, 3.0) / 2.6112633829308916e-22 - 1.0).abs() < 1e-12);
        assert!((spherical_bessel_j(5, 100.0) + 0.0092901489349075718).abs() < 1e-15);
        assert_eq!(spherical_bessel_j(3, 0.0), 0.0);
        assert_eq!(spherical_bessel_j(0, 0.0), 1.0);
    }

    #[test]
    fn harmonics_low_order() {
        let (t, p) = (0.7, 1.3);
        let y00 = spherical_harmonic(0, 0, t, p);
        assert!((y00.re - 0.5 / PI.sqrt()).abs() < 1e-15);
        let y10 = spherical_harmonic(1, 0, t, p);
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() * t.cos()).abs() < 1e-15);
        let y11 = spherical_harmonic(1, 1, t, p);
        let expected = -C64::from_polar((3.0 / (8.0 * PI)).sqrt() * t.sin(), p);
        assert!((y11 - expected).norm() < 1e-15);
        let y1m1 = spherical_harmonic(1, -1, t, p);
        assert!((y1m1 - C64::from_polar((3.0 / (8.0 * PI)).sqrt() * t.sin(), -p)).norm() < 1e-15);
        assert_eq!(spherical_harmonic(1, 2, t, p), C64::from(0.0));
    }

    #[test]
    fn harmonics_are_orthonormal() {
        let rule = GaussLegendre::new(24).unwrap();
        let pairs = [
            ((2, 1), (2, 1)),
            ((3, -2), (3, -2)),
            ((2, 1), (3, 1)),
            ((2, 0), (2, 0)),
        ];
        for ((l1, m1), (l2, m2)) in pairs {
            let mut s = C64::from(0.0);
            for (x, w) in rule.on_interval(-1.0, 1.0) {
                for (ph, wp) in crate::quadrature::periodic_trapezoid(16) {
                    let t = x.acos();
                    s += spherical_harmonic(l1, m1, t, ph).conj()
                        * spherical_harmonic(l2, m2, t, ph)
                        * (w * wp);
                }
            }
            let expected = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!((s - C64::from(expected)).norm() < 1e-13);
        }
    }

    #[test]
    fn exponential_transform() {
        for p in [0.0, 0.3, 1.0, 4.0] {
            let v =
                transform_radial(0, TransformSign::Plus, |r| (-r).exp(), 1.0, p, 1e-12).unwrap();
            let exact = FRAC_2_PI.sqrt() * 2.0 / (1.0 + p * p).powi(2);
            assert!((v.re - exact).abs() < 1e-10 && v.im == 0.0, "{p}");
        }
        // l = 1 picks up ±i
        let plus =
            transform_radial(1, TransformSign::Plus, |r| (-r).exp(), 1.0, 1.0, 1e-12).unwrap();
        let minus =
            transform_radial(1, TransformSign::Minus, |r| (-r).exp(), 1.0, 1.0, 1e-12).unwrap();
        assert!(plus.re == 0.0 && plus.im > 0.0);
        assert!((plus + minus).norm() < 1e-15);
    }

    #[test]
    fn inverse_transform_round_trip() {
        let forward = |p: f64| FRAC_2_PI.sqrt() * 2.0 / (1.0 + p * p).powi(2);
        for r in [0.5, 1.0, 2.0] {
            let back = transform_radial(0, TransformSign::Minus, forward, 1.0, r, 1e-10).unwrap();
            assert!((back.re - (-r).exp()).abs() < 1e-6, "{r}");
        }
    }
}
