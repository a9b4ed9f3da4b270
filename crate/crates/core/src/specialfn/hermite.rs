//! Gaussian-weighted Hermite functions w_j(s) = 2^{-j/2} H_j(s) e^{-s^2/2} = D_j(s sqrt 2).

/// Log-magnitude form: returns (sign, ln|w_j(s)|); sign 0 means an exact zero.
pub fn weighted_hermite_log(j: usize, sigma: f64) -> (f64, f64) {
    // w_{k+1} = sqrt2 s w_k - k w_{k-1}, carried with a running scale
    let mut scale = -0.5 * sigma * sigma;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let r2 = std::f64::consts::SQRT_2;
    for k in 0..j {
        let next = r2 * sigma * cur - k as f64 * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e150 || (m < 1e-150 && m > 0.0) {
            prev /= m;
            cur /= m;
            scale += m.ln();
        }
    }
    if cur == 0.0 {
        (0.0, f64::NEG_INFINITY)
    } else {
        (cur.signum(), cur.abs().ln() + scale)
    }
}

/// 2^{-j/2} H_j(sigma) e^{-sigma^2/2}.
pub fn weighted_hermite(j: usize, sigma: f64) -> f64 {
    let (s, l) = weighted_hermite_log(j, sigma);
    if s == 0.0 {
        0.0
    } else {
        s * l.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        for s in [-2.0, 0.0, 0.7, 3.0] {
            let g = (-0.5 * s * s as f64).exp();
            assert!((weighted_hermite(0, s) - g).abs() < 1e-15);
            assert!((weighted_hermite(1, s) - std::f64::consts::SQRT_2 * s * g).abs() < 1e-15);
            // H_2 = 4s^2 - 2
            assert!((weighted_hermite(2, s) - 0.5 * (4.0 * s * s - 2.0) * g).abs() < 1e-14);
        }
    }

    #[test]
    fn no_overflow_at_high_order() {
        let v = weighted_hermite_log(250, 5.0);
        assert!(v.1.is_finite());
        let w = weighted_hermite_log(250, 40.0);
        assert!(w.1.is_finite() && w.0 == 1.0);
    }
}
