//! Adaptive Gauss-Kronrod quadrature and bracketed root finding.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        val: v,
        err: e,
    });
    let mut total = v;
    let mut err = e;
    let mut n = 1usize;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if n > 4000 {
            if err <= 1e3 * abs_tol.max(rel_tol * total.abs()) {
                break;
            }
            return Err(Error::Convergence(format!(
                "quadrature on [{a}, {b}] stalled with error estimate {err:e}"
            )));
        }
        let p = heap.pop().expect("non-empty interval heap");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Piece {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
        n += 1;
        if n % 64 == 0 {
            // refresh running sums against drift
            total = heap.iter().map(|p| p.val).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
    Ok(heap.iter().map(|p| p.val).sum())
}

/// Integral over `[a, b]` of an integrand with square-root behaviour at both ends.
///
/// Each half is mapped by `u = end -/+ h w^2`, which removes the endpoint singularity of the
/// derivative.
pub fn integrate_sqrt_ends<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let h = 0.5 * (b - a);
    let left = integrate(|w| 2.0 * h * w * f(a + h * w * w), 0.0, 1.0, tol, tol)?;
    let right = integrate(|w| 2.0 * h * w * f(b - h * w * w), 0.0, 1.0, tol, tol)?;
    Ok(left + right)
}

/// Integral over `[a, b]` where only the upper end `b` carries a square-root singularity.
pub fn integrate_sqrt_upper<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let h = b - a;
    integrate(|w| 2.0 * h * w * f(b - h * w * w), 0.0, 1.0, tol, tol)
}

/// Integral over `[a, b]` where only the lower end `a` carries a square-root singularity.
pub fn integrate_sqrt_lower<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let h = b - a;
    integrate(|w| 2.0 * h * w * f(a + h * w * w), 0.0, 1.0, tol, tol)
}

/// Brent's method on a sign-changing bracket.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoRoot(format!(
            "bracket [{a}, {b}] does not change sign (f = {fa:e}, {fb:e})"
        )));
    }
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1 * xm.signum()
        };
        fb = f(b);
    }
    Err(Error::Convergence("Brent iteration cap reached".into()))
}

/// Grows `[lo, hi]` upward from `hi` until `f` changes sign, never exceeding `limit`.
pub fn expand_upper<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    mut hi: f64,
    limit: f64,
) -> Result<(f64, f64)> {
    let flo = f(lo);
    let mut step = (hi - lo).max(1e-3);
    let mut a = lo;
    for _ in 0..200 {
        let fh = f(hi);
        if fh.signum() != flo.signum() || fh == 0.0 {
            return Ok((a, hi));
        }
        if hi >= limit {
            break;
        }
        a = hi;
        step *= 2.0;
        hi = (hi + step).min(limit);
    }
    Err(Error::NoRoot(format!(
        "no sign change found above {lo} up to {limit}"
    )))
}

/// Pairwise (cascade) summation, fixed order and therefore bit-reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1..=8 => xs.iter().sum(),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}
