//! Complete and incomplete elliptic integrals, including parameters m > 1.
//!
//! Where `1 - m sin^2` turns negative the integrand is continued with `sqrt(-x) = i sqrt(x)`,
//! so the incomplete second-kind integral becomes complex.

use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_sqrt_ends};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const TOL: f64 = 1e-15;

/// K(m) by the arithmetic-geometric mean.
pub fn ellip_k(m: f64) -> Result<f64> {
    if !m.is_finite() || m >= 1.0 {
        return Err(Error::Domain(format!(
            "K(m) diverges or is undefined for m = {m}"
        )));
    }
    let mut a = 1.0;
    let mut g = (1.0 - m).sqrt();
    for _ in 0..60 {
        if (a - g).abs() <= 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = an;
    }
    Ok(FRAC_PI_2 / a)
}

/// F(phi|m) by direct quadrature; the integrand must stay real on `[0, phi]`.
pub fn ellip_f_inc(phi: f64, m: f64) -> Result<f64> {
    if !phi.is_finite() || !m.is_finite() {
        return Err(Error::Domain("non-finite elliptic argument".into()));
    }
    let s = phi.abs();
    let top = if s >= FRAC_PI_2 { 1.0 } else { s.sin().powi(2) };
    if m * top >= 1.0 {
        return Err(Error::Domain(format!(
            "F(phi|m) not real for phi = {phi}, m = {m}"
        )));
    }
    let v = integrate(
        |t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        s,
        TOL,
        TOL,
    )?;
    Ok(v.copysign(phi))
}

/// Zeros of `1 - m sin^2(theta)` inside `(0, s)`.
fn branch_points(s: f64, m: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    if m <= 1.0 {
        if m == 1.0 {
            let mut k = 0.5;
            while k * PI < s {
                pts.push(k * PI);
                k += 1.0;
            }
        }
        return pts;
    }
    let alpha = (1.0 / m.sqrt()).asin();
    let mut k = 0.0;
    while k * PI < s {
        for p in [k * PI + alpha, (k + 1.0) * PI - alpha] {
            if p > 0.0 && p < s {
                pts.push(p);
            }
        }
        k += 1.0;
    }
    pts
}

/// E(phi|m) = int_0^phi sqrt(1 - m sin^2 theta) d theta on the `sqrt(-x) = i sqrt(x)` branch.
pub fn ellip_e_inc(phi: f64, m: f64) -> Result<Complex64> {
    if !phi.is_finite() || !m.is_finite() {
        return Err(Error::Domain("non-finite elliptic argument".into()));
    }
    let s = phi.abs();
    let mut knots = vec![0.0];
    knots.extend(branch_points(s, m));
    knots.push(s);
    let mut re = 0.0;
    let mut im = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let sign = 1.0 - m * mid.sin().powi(2);
        let v = integrate_sqrt_ends(|t| (1.0 - m * t.sin().powi(2)).abs().sqrt(), a, b, TOL)?;
        if sign >= 0.0 {
            re += v;
        } else {
            im += v;
        }
    }
    let sgn = phi.signum();
    Ok(Complex64::new(sgn * re, sgn * im))
}

/// E(i psi|m) = i int_0^psi sqrt(1 + m sinh^2 s) ds, the imaginary-amplitude continuation.
pub fn ellip_e_imag_amplitude(psi: f64, m: f64) -> Result<Complex64> {
    if !psi.is_finite() || !m.is_finite() {
        return Err(Error::Domain("non-finite elliptic argument".into()));
    }
    let s = psi.abs();
    let mut knots = vec![0.0];
    if m < 0.0 {
        let b = (-1.0 / m).sqrt().asinh();
        if b < s {
            knots.push(b);
        }
    }
    knots.push(s);
    let mut inner = Complex64::new(0.0, 0.0);
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        let sign = 1.0 + m * mid.sinh().powi(2);
        let v = integrate_sqrt_ends(|x| (1.0 + m * x.sinh().powi(2)).abs().sqrt(), a, b, TOL)?;
        if sign >= 0.0 {
            inner.re += v;
        } else {
            inner.im += v;
        }
    }
    Ok(Complex64::new(0.0, psi.signum()) * inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_values() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((ellip_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-13);
        assert!(ellip_k(1.0).is_err());
        assert!(ellip_k(-3.0).unwrap() > 0.0);
    }

    #[test]
    fn k_equals_f_at_quarter_period() {
        for m in [-4.0, -0.5, 0.0, 0.3, 0.9, 0.999] {
            let k = ellip_k(m).unwrap();
            let f = ellip_f_inc(FRAC_PI_2, m).unwrap();
            assert!((k - f).abs() < 1e-10 * k, "m={m}: {k} vs {f}");
        }
    }

    #[test]
    fn e_special_values() {
        let e = ellip_e_inc(0.7, 0.0).unwrap();
        assert!((e.re - 0.7).abs() < 1e-15 && e.im == 0.0);
        let e1 = ellip_e_inc(FRAC_PI_2, 1.0).unwrap();
        assert!((e1.re - 1.0).abs() < 1e-13 && e1.im.abs() < 1e-15);
        // E(pi/2 | 0.5) = 1.3506438810476755
        assert!((ellip_e_inc(FRAC_PI_2, 0.5).unwrap().re - 1.350_643_881_047_675_5).abs() < 1e-13);
    }

    #[test]
    fn e_complex_branch_against_split_quadrature() {
        // (0.6, m = 2): branch point at asin(1/sqrt 2) = pi/4
        let e = ellip_e_inc(0.6, 2.0).unwrap();
        assert_eq!(e.im, 0.0);
        let e2 = ellip_e_inc(1.2, 2.0).unwrap();
        let re = integrate(
            |t| (1.0 - 2.0 * t.sin().powi(2)).max(0.0).sqrt(),
            0.0,
            PI / 4.0,
            1e-13,
            1e-13,
        )
        .unwrap();
        let im = integrate(
            |t| (2.0 * t.sin().powi(2) - 1.0).max(0.0).sqrt(),
            PI / 4.0,
            1.2,
            1e-13,
            1e-13,
        )
        .unwrap();
        assert!((e2.re - re).abs() < 1e-9 && (e2.im - im).abs() < 1e-9);
        assert!(e2.im > 0.0);
    }

    #[test]
    fn e_odd_in_phi() {
        let a = ellip_e_inc(1.1, 1.7).unwrap();
        let b = ellip_e_inc(-1.1, 1.7).unwrap();
        assert!((a + b).norm() < 1e-15);
    }

    #[test]
    fn imaginary_amplitude_derivative() {
        let m = 0.8;
        let h = 1e-5;
        let d = (ellip_e_imag_amplitude(0.9 + h, m).unwrap()
            - ellip_e_imag_amplitude(0.9 - h, m).unwrap())
            / (2.0 * h);
        let expect = (1.0 + m * 0.9f64.sinh().powi(2)).sqrt();
        assert!(d.re.abs() < 1e-9 && (d.im - expect).abs() < 1e-7);
    }
}
