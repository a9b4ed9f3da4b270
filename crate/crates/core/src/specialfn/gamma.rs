//! Complex Gamma function via a shifted Stirling series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// ln Gamma(z) on the branch continuous in the right half plane (real for real z > 0).
///
/// Requires Re z > 0.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma needs Re z > 0, got {z}");
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 17.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Gamma(z) for any complex z off the poles.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        ln_gamma(z).exp()
    } else {
        let s = (Complex64::new(PI, 0.0) * z).sin();
        Complex64::new(PI, 0.0) / (s * ln_gamma(1.0 - z).exp())
    }
}

/// 1 / Gamma(z), entire; zero at the poles of Gamma.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        (-ln_gamma(z)).exp()
    } else {
        let s = (Complex64::new(PI, 0.0) * z).sin();
        s * ln_gamma(1.0 - z).exp() / PI
    }
}

/// Gamma(1/4 + i t/4) in modulus/argument form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaQuarterLine {
    pub t: f64,
    pub modulus: f64,
    /// ln of the modulus, finite even where the modulus underflows.
    pub ln_modulus: f64,
    /// Continuous argument, Im ln Gamma; equals the principal value for |t| small.
    pub argument: f64,
}

impl GammaQuarterLine {
    /// Argument reduced to (-pi, pi].
    pub fn principal_argument(&self) -> f64 {
        let a = self.argument.rem_euclid(2.0 * PI);
        if a > PI {
            a - 2.0 * PI
        } else {
            a
        }
    }
}

pub fn gamma_quarter_line(t: f64) -> GammaQuarterLine {
    let lg = ln_gamma(Complex64::new(0.25, 0.25 * t));
    GammaQuarterLine {
        t,
        modulus: lg.re.exp(),
        ln_modulus: lg.re,
        argument: lg.im,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_values() {
        let g = gamma_quarter_line(0.0);
        assert!((g.modulus - 3.625_609_908_221_908_3).abs() < 1e-13);
        assert_eq!(g.argument, 0.0);
        assert!((ln_gamma(Complex64::new(10.0, 0.0)).re - 362880f64.ln()).abs() < 1e-13);
        assert!((gamma(Complex64::new(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(Complex64::new(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn modulus_from_reflection_product() {
        // |Gamma(1/4 + i)|^2 = Gamma(z) Gamma(conj z)
        let z = Complex64::new(0.25, 1.0);
        let prod = gamma(z) * gamma(z.conj());
        let g = gamma_quarter_line(4.0);
        assert!(prod.im.abs() < 1e-15 && (prod.re - g.modulus.powi(2)).abs() < 1e-14);
        // recurrence Gamma(z+1) = z Gamma(z)
        let r = gamma(z + 1.0) / (z * gamma(z));
        assert!((r - 1.0).norm() < 1e-14);
    }

    #[test]
    fn symmetry_and_continuity() {
        for t in [0.3, 4.0, 40.0, 400.0] {
            let a = gamma_quarter_line(t);
            let b = gamma_quarter_line(-t);
            assert!((a.modulus - b.modulus).abs() < 1e-14 * a.modulus);
            assert!((a.argument + b.argument).abs() < 1e-12 * (1.0 + a.argument.abs()));
        }
        let mut prev = gamma_quarter_line(0.0).argument;
        for i in 1..2000 {
            let a = gamma_quarter_line(i as f64 * 0.1).argument;
            assert!((a - prev).abs() < 0.2);
            prev = a;
        }
    }

    #[test]
    fn large_t_stirling_limit() {
        // |Gamma(x+iy)| ~ sqrt(2 pi) |y|^{x-1/2} e^{-pi |y| / 2}
        let t = 4.0e5;
        let g = gamma_quarter_line(t);
        let y: f64 = t / 4.0;
        let ln_expected = 0.5 * (2.0 * PI).ln() - 0.25 * y.ln() - PI * y / 2.0;
        assert!((g.ln_modulus - ln_expected).abs() < 1e-6);
        // mpmath loggamma(1/4 + 1e5 i)
        assert!((g.ln_modulus + 157_081.591_972_323).abs() < 1e-6);
        assert!((g.argument - 1_051_292.153_798_05).abs() < 1e-5);
    }
}
