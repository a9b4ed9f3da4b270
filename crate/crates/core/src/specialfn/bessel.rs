//! Bessel functions J_n of integer order by Miller's downward recurrence.

fn start_order(nmax: usize, x: f64) -> usize {
    let m = (nmax as f64).max(x.abs());
    let s = m + 30.0 + (50.0 * m).sqrt();
    (s as usize + 1) & !1
}

/// J_0(x), ..., J_nmax(x) for x >= 0, normalised by J_0 + 2 sum J_{2k} = 1.
pub fn bessel_j_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = start_order(nmax, x);
    let mut jp = 0.0f64; // J_{k+1}
    let mut jk = 1e-300f64; // J_k
    let mut norm = 0.0f64;
    for k in (1..=top).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let jm = 2.0 * k as f64 / x * jk - jp;
        if k <= nmax {
            out[k] = jk;
        }
        if k % 2 == 0 {
            norm += 2.0 * jk;
        }
        jp = jk;
        jk = jm;
        if jk.abs() > 1e250 {
            let s = 1e-250;
            jk *= s;
            jp *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = jk;
    norm += jk;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// J_n(x) for any integer n and real x.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let na = n.unsigned_abs() as usize;
    let v = bessel_j_all(na, x.abs())[na];
    let odd = na % 2 == 1;
    let flip = (n < 0 && odd) ^ (x < 0.0 && odd);
    if flip {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize, x: f64) -> f64 {
        let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut s = term;
        for k in 1..80 {
            term *= -(0.25 * x * x) / (k as f64 * (k + n) as f64);
            s += term;
        }
        s
    }

    #[test]
    fn values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        let v = bessel_j(3, 2.5);
        assert!((v - series(3, 2.5)).abs() < 1e-12 * v.abs());
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(-3, 2.5) + v).abs() < 1e-15);
        assert!((bessel_j(3, -2.5) + v).abs() < 1e-15);
    }

    #[test]
    fn sum_rule() {
        for x in [7.0, 120.0, 1500.0] {
            let j = bessel_j_all(4000, x);
            let s: f64 = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-10, "x={x}: {s}");
        }
    }

    #[test]
    fn deep_tail_relative_accuracy() {
        let v = bessel_j(40, 5.0);
        assert!((v - series(40, 5.0)).abs() < 1e-10 * v.abs());
    }
}
