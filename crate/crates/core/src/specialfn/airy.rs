//! Airy function Ai and its derivative.
//!
//! Small |x| uses the Maclaurin series, large |x| the asymptotic expansions, and the two
//! middle bands are reached by Taylor stepping of `w'' = x w`. Stepping runs leftward
//! from x = 8 on the positive side (where Ai is the growing solution) and leftward from
//! x = -2 on the oscillatory side.

use std::f64::consts::{FRAC_PI_4, PI};

const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004_183_2;
const AIP0: f64 = -0.258_819_403_792_806_798_405_183_560_189_203_96;
const ASYM_POS: f64 = 8.0;
const ASYM_NEG: f64 = -8.0;
const SERIES_R: f64 = 2.0;

/// Ai(x).
pub fn airy_ai(x: f64) -> f64 {
    airy_pair(x).0
}

/// Ai'(x).
pub fn airy_ai_prime(x: f64) -> f64 {
    airy_pair(x).1
}

/// (Ai(x), Ai'(x)).
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x >= ASYM_POS {
        asymptotic_positive(x)
    } else if x <= ASYM_NEG {
        asymptotic_negative(-x)
    } else if x.abs() <= SERIES_R {
        taylor_step(0.0, AI0, AIP0, x)
    } else if x > 0.0 {
        let (a, ap) = asymptotic_positive(ASYM_POS);
        march(ASYM_POS, a, ap, x)
    } else {
        let (a, ap) = taylor_step(0.0, AI0, AIP0, -SERIES_R);
        march(-SERIES_R, a, ap, x)
    }
}

fn march(mut x0: f64, mut w: f64, mut wp: f64, x: f64) -> (f64, f64) {
    let n = ((x - x0).abs() / 0.5).ceil().max(1.0) as usize;
    let h = (x - x0) / n as f64;
    for _ in 0..n {
        let (a, b) = taylor_step(x0, w, wp, h);
        w = a;
        wp = b;
        x0 += h;
    }
    (w, wp)
}

/// One Taylor step of `w'' = x w` from `x0` by `h`.
fn taylor_step(x0: f64, w: f64, wp: f64, h: f64) -> (f64, f64) {
    // coefficients of (x - x0)^k: (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}
    let mut cm1 = 0.0;
    let mut c0 = w;
    let mut c1 = wp;
    let mut val = w + wp * h;
    let mut der = wp;
    let mut hp = h;
    let mut k = 0usize;
    let mut quiet = 0;
    loop {
        let c2 = (x0 * c0 + cm1) / (((k + 2) * (k + 1)) as f64);
        let td = (k + 2) as f64 * c2 * hp;
        hp *= h;
        let tv = c2 * hp;
        val += tv;
        der += td;
        if tv.abs() <= 1e-18 * val.abs() && td.abs() <= 1e-18 * der.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 || k > 400 {
            break;
        }
        cm1 = c0;
        c0 = c1;
        c1 = c2;
        k += 1;
    }
    (val, der)
}

fn u_coeffs() -> [f64; 40] {
    let mut u = [0.0; 40];
    u[0] = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

fn v_coeff(u: &[f64; 40], k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]
    }
}

/// Sums an asymptotic series term by term, stopping at the smallest term.
fn asym_sum<F: Fn(usize) -> f64>(kmax: usize, term: F) -> f64 {
    let mut s = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..kmax {
        let t = term(k);
        if t.abs() > last {
            break;
        }
        s += t;
        if t.abs() < 1e-17 * s.abs() {
            break;
        }
        last = t.abs();
    }
    s
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let u = u_coeffs();
    let z = 2.0 / 3.0 * x.powf(1.5);
    let e = (-z).exp() / (2.0 * PI.sqrt());
    let sa = asym_sum(
        40,
        |k| if k % 2 == 0 { 1.0 } else { -1.0 } * u[k] / z.powi(k as i32),
    );
    let sd = asym_sum(
        40,
        |k| if k % 2 == 0 { 1.0 } else { -1.0 } * v_coeff(&u, k) / z.powi(k as i32),
    );
    let q = x.powf(0.25);
    (e / q * sa, -e * q * sd)
}

/// Ai(-x), Ai'(-x) for large positive x; returned as values at the negative argument.
fn asymptotic_negative(x: f64) -> (f64, f64) {
    let u = u_coeffs();
    let z = 2.0 / 3.0 * x.powf(1.5);
    let sgn = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let ue = asym_sum(19, |k| sgn(k) * u[2 * k] / z.powi(2 * k as i32));
    let uo = asym_sum(19, |k| sgn(k) * u[2 * k + 1] / z.powi(2 * k as i32 + 1));
    let ve = asym_sum(19, |k| sgn(k) * v_coeff(&u, 2 * k) / z.powi(2 * k as i32));
    let vo = asym_sum(19, |k| {
        sgn(k) * v_coeff(&u, 2 * k + 1) / z.powi(2 * k as i32 + 1)
    });
    let (s, c) = (z - FRAC_PI_4).sin_cos();
    let q = x.powf(0.25);
    let a = (c * ue + s * uo) / (PI.sqrt() * q);
    let ap = q / PI.sqrt() * (s * ve - c * vo);
    (a, ap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        assert!((airy_ai(0.0) - AI0).abs() < 1e-16);
        assert!((airy_ai_prime(0.0) - AIP0).abs() < 1e-16);
    }

    #[test]
    fn reference_values() {
        // Ai(1), Ai(-1), Ai(5), Ai(-5), Ai(-10), Ai(3)
        let cases = [
            (1.0, 0.135_292_416_312_881_4),
            (-1.0, 0.535_560_883_292_352_1),
            (3.0, 0.006_591_139_357_460_719),
            (5.0, 1.083_444_281_360_744e-4),
            (-5.0, 0.350_761_009_024_114_3),
            (-10.0, 0.040_241_238_486_443_19),
        ];
        for (x, v) in cases {
            let a = airy_ai(x);
            assert!(((a - v) / v).abs() < 1e-10, "Ai({x}) = {a}, want {v}");
        }
    }

    #[test]
    fn continuity_across_method_boundaries() {
        for x in [-8.0, -2.0, 2.0, 8.0] {
            let (a1, d1) = airy_pair(x - 1e-12);
            let (a2, d2) = airy_pair(x + 1e-12);
            assert!((a1 - a2).abs() < 1e-11 * (1.0 + a1.abs()), "x={x}");
            assert!((d1 - d2).abs() < 1e-10 * (1.0 + d1.abs()), "x={x}");
        }
    }

    #[test]
    fn first_zero() {
        let z = crate::numerics::brent(airy_ai, -2.5, -2.0, 1e-15).unwrap();
        assert!((z + 2.338_107_410_459_767).abs() < 1e-11);
    }
}
