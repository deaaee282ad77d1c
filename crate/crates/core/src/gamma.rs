//! Complex Gamma function and the semiclassical connection factor `N(z)`.
//!
//! Lanczos approximation with `g = 607/128` and 15 coefficients, reflection
//! for `Re z < 1/2`.  `ln_gamma` returns the logarithm up to an irrelevant
//! multiple of `2 pi i`; ratios of Gamma values exponentiate sums of these
//! logarithms without overflow.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// log(sin(pi z)) up to a multiple of 2 pi i, safe for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = PI * z;
    if w.im > 1.0 {
        // sin w = e^{-iw} (1 - e^{2iw}) * i/2
        let iw = Complex64::new(0.0, 1.0) * w;
        (-iw) + (1.0 - (2.0 * iw).exp()).ln() + Complex64::new(0.0, 0.5 * PI) - (2.0f64).ln()
    } else if w.im < -1.0 {
        let iw = Complex64::new(0.0, 1.0) * w;
        iw + (1.0 - (-2.0 * iw).exp()).ln() + Complex64::new(0.0, -0.5 * PI) - (2.0f64).ln()
    } else {
        w.sin().ln()
    }
}

/// Logarithm of Gamma, branch unspecified (exact modulo `2 pi i`).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return PI.ln() - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (zm + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma function on the complex plane.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-12 {
        return Err(Error::Pole(format!("Gamma pole at z = {}", z.re)));
    }
    Ok(ln_gamma(z).exp())
}

/// `N(z) = sqrt(2 pi) / Gamma(1/2 + z) * exp(z log(z/e))`, principal log.
///
/// Analytic off `(-infinity, 0]`; requests on the cut are rejected.
pub fn n_function(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut(format!(
            "N(z) is branched on (-inf, 0]; z = {}",
            z.re
        )));
    }
    let log_n = 0.5 * (2.0 * PI).ln() + z * (z.ln() - 1.0) - ln_gamma(z + 0.5);
    Ok(log_n.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn factorial_values() {
        assert!((gamma(re(1.0)).unwrap() - 1.0).norm() < 1e-13);
        assert!((gamma(re(5.0)).unwrap() - 24.0).norm() < 24.0 * 1e-13);
    }

    #[test]
    fn half_integer() {
        let g = gamma(re(0.5)).unwrap();
        assert!((g - PI.sqrt()).norm() < 1e-13);
    }

    #[test]
    fn modulus_at_one_plus_i() {
        // |Gamma(1+i)|^2 = pi / sinh(pi)
        let g = gamma(Complex64::new(1.0, 1.0)).unwrap();
        let expect = (PI / PI.sinh()).sqrt();
        assert!((g.norm() - expect).abs() < 1e-12, "{} vs {expect}", g.norm());
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(gamma(re(0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma(re(-3.0)), Err(Error::Pole(_))));
        assert!(gamma(re(-2.5)).is_ok());
    }

    #[test]
    fn reflection_consistency_large_imaginary() {
        // ratio-of-gammas survives huge |Im z| through ln_gamma sums
        let z = Complex64::new(0.25, 40.0);
        let lhs = (ln_gamma(z) + ln_gamma(1.0 - z)).exp();
        let rhs = PI / (PI * z).sin();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }

    #[test]
    fn n_function_limits() {
        // z -> 0+ along the reals
        let n = n_function(re(1e-12)).unwrap();
        assert!((n - 2.0f64.sqrt()).norm() < 1e-10, "N(0+) = {n}");
        // N(1) = 2 sqrt(2) / e
        let n1 = n_function(re(1.0)).unwrap();
        let expect = 2.0 * 2.0f64.sqrt() / std::f64::consts::E;
        assert!((n1 - expect).norm() < 1e-12);
        // |N| -> 1 for growing |z| away from the cut
        assert!((n_function(re(50.0)).unwrap() - 1.0).norm() < 1e-3);
        let mut prev = (n_function(Complex64::new(3.0, 3.0)).unwrap() - 1.0).norm();
        for r in [10.0, 30.0, 100.0] {
            let cur = (n_function(Complex64::new(r, r)).unwrap() - 1.0).norm();
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn n_function_cut_is_rejected_and_off_cut_is_finite() {
        assert!(matches!(n_function(re(-2.0)), Err(Error::BranchCut(_))));
        assert!(matches!(n_function(re(0.0)), Err(Error::BranchCut(_))));
        // just off the cut: finite (poles of N sit on the cut only)
        for &x in &[-0.5, -1.5, -4.0] {
            let v = n_function(Complex64::new(x, 1e-3)).unwrap();
            assert!(v.norm().is_finite());
        }
    }

    proptest! {
        #[test]
        fn recurrence_holds(re_z in -0.45f64..6.0, im_z in -6.0f64..6.0) {
            // stay away from the poles on the real axis
            prop_assume!(im_z.abs() > 1e-3 || re_z > 0.05);
            let z = Complex64::new(re_z, im_z);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1e-30));
        }
    }
}
