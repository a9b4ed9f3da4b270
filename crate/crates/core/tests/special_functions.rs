use mathieu_rn::specialfn::airy::{airy_ai, airy_pair};
use mathieu_rn::specialfn::bessel::bessel_j_all;
use mathieu_rn::specialfn::elliptic::{ellip_e_inc, ellip_f_inc, ellip_k};
use mathieu_rn::specialfn::hermite::weighted_hermite;
use mathieu_rn::specialfn::kummer::kummer_1f1;
use num_complex::Complex64 as C;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn kummer_transformation(
        ar in -4.0f64..4.0, ai in -4.0f64..4.0,
        br in 0.3f64..5.0, bi in -4.0f64..4.0,
        r in 0.0f64..20.0, th in 0.0f64..std::f64::consts::TAU,
    ) {
        let a = C::new(ar, ai);
        let b = C::new(br, bi);
        let z = C::from_polar(r, th);
        let lhs = kummer_1f1(a, b, z).unwrap();
        let rhs = z.exp() * kummer_1f1(b - a, b, -z).unwrap();
        let scale = lhs.norm().max(rhs.norm()).max(1e-300);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * scale, "a={a} b={b} z={z}: {lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn hermite_recurrence(s in -12.0f64..12.0) {
        // w_{k+1} = sqrt2 s w_k - k w_{k-1}
        let w: Vec<f64> = (0..=100).map(|j| weighted_hermite(j, s)).collect();
        for k in 1..100 {
            let lhs = w[k + 1];
            let rhs = std::f64::consts::SQRT_2 * s * w[k] - k as f64 * w[k - 1];
            let scale = w[k + 1].abs().max(std::f64::consts::SQRT_2 * (s * w[k]).abs()).max(k as f64 * w[k - 1].abs());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300), "k={k} s={s}");
        }
    }

    #[test]
    fn elliptic_derivatives(phi in 0.05f64..1.5, m in -3.0f64..0.95) {
        let h = 1e-5;
        let de = (ellip_e_inc(phi + h, m).unwrap().re - ellip_e_inc(phi - h, m).unwrap().re) / (2.0 * h);
        let df = (ellip_f_inc(phi + h, m).unwrap() - ellip_f_inc(phi - h, m).unwrap()) / (2.0 * h);
        let d = (1.0 - m * phi.sin().powi(2)).sqrt();
        prop_assert!((de - d).abs() < 1e-8);
        prop_assert!((df - 1.0 / d).abs() < 1e-8);
    }
}

#[test]
fn hermite_against_exact_recurrence() {
    // j = 40, sigma = 3: H_40(3) evaluated exactly in i128
    let mut prev = vec![1i128];
    let mut cur = vec![0i128, 2];
    for k in 1..40 {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2 * k as i128 * c;
        }
        prev = cur;
        cur = next;
    }
    let h = cur.iter().rev().fold(0i128, |acc, c| {
        acc.checked_mul(3).and_then(|v| v.checked_add(*c)).unwrap()
    });
    let s = 3.0f64;
    let exact = h as f64 * 2f64.powf(-20.0) * (-0.5 * s * s).exp();
    assert!((weighted_hermite(40, s) - exact).abs() <= 1e-9 * exact.abs());
}

#[test]
fn airy_ode_residual() {
    // Richardson-extrapolated second difference, O(h^4)
    let h = 2e-3;
    let d2 = |x: f64, h: f64| (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    let mut x = -12.0;
    while x <= 6.0 {
        let d = (4.0 * d2(x, h) - d2(x, 2.0 * h)) / 3.0;
        let r = (d - x * airy_ai(x)).abs();
        assert!(r <= 1e-8 * (1.0 + (x * airy_ai(x)).abs()), "x={x}: {r}");
        x += 0.0137;
    }
}

#[test]
fn airy_wronskian_with_derivative() {
    // Ai' from the pair matches a central difference of Ai
    for x in [-9.3, -2.2, 0.0, 1.7, 4.4] {
        let h = 1e-5;
        let fd = (airy_ai(x + h) - airy_ai(x - h)) / (2.0 * h);
        assert!((airy_pair(x).1 - fd).abs() < 1e-8 * (1.0 + x.abs()));
    }
}

#[test]
fn bessel_sum_rule() {
    for x in [0.5, 7.0, 60.0, 400.0] {
        let j = bessel_j_all(600, x);
        let s = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        assert!((s - 1.0).abs() < 1e-10, "x={x}: {s}");
    }
}

#[test]
fn complete_elliptic_limits() {
    assert!((ellip_k(0.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let e = ellip_e_inc(std::f64::consts::FRAC_PI_2, 0.5).unwrap().re;
    assert!((e - 1.350_643_881_047_675_5).abs() < 1e-12);
}
