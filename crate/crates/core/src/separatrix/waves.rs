//! Barrier and Airy transitional Bloch waves and their stitching into one eigenvector.

use super::actions::{
    barred_action_overdense_inside, barred_action_overdense_outside, barred_action_underdense,
    inner_turning_point, mu_overdense, mu_underdense, t_overdense, t_underdense, LEAK_TOL,
};
use super::eigen::{join_beam_for, match_underdense, MatchedRoot, DEFAULT_XTOL};
use crate::error::{Error, Result};
use crate::numerics::{brent, expand_upper};
use crate::specialfn::{airy_ai, gamma_quarter_line, kummer_1f1};
use crate::types::BlochWave;
use crate::uniform_bound::{well_phase, well_tail_phase};
use crate::wkb_core::{action_s0, normalization_constant, outer_turning_point};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Half width, in beams, of the window used to fit the Airy piece onto the barrier piece.
pub const STITCH_HALF_WINDOW: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarrierSide {
    Underdense,
    Overdense,
}

/// Parabolic-barrier data for one beta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierContext {
    pub lambda: f64,
    pub beta: f64,
    pub side: BarrierSide,
    pub t: f64,
    pub mu: f64,
    /// sqrt|beta - 1|; imaginary position below the separatrix, real above.
    pub inner_tp: f64,
    pub outer_tp: f64,
}

impl BarrierContext {
    pub fn new(lambda: f64, beta: f64) -> Result<Self> {
        let (side, t, mu) = if beta < 1.0 {
            let t = t_underdense(lambda, beta)?;
            (BarrierSide::Underdense, t, mu_underdense(t)?)
        } else if beta > 1.0 {
            let t = t_overdense(lambda, beta)?;
            (BarrierSide::Overdense, t, mu_overdense(t)?)
        } else {
            return Err(Error::Domain(
                "beta = 1 sits exactly on the separatrix".into(),
            ));
        };
        Ok(BarrierContext {
            lambda,
            beta,
            side,
            t,
            mu,
            inner_tp: inner_turning_point(beta),
            outer_tp: outer_turning_point(beta),
        })
    }

    /// sqrt(Lambda) times the barred action at y.
    pub fn scaled_action(&self, y: f64) -> Result<f64> {
        let sl = self.lambda.sqrt();
        Ok(match self.side {
            BarrierSide::Underdense => sl * barred_action_underdense(y, self.beta)?,
            BarrierSide::Overdense if y <= self.inner_tp => {
                sl * barred_action_overdense_inside(y, self.beta)?
            }
            BarrierSide::Overdense => sl * barred_action_overdense_outside(y, self.beta)?,
        })
    }

    /// Comparison-equation phase at sigma, on the branch selected by y.
    fn phase(&self, y: f64, sigma: f64) -> f64 {
        let t = self.t;
        match self.side {
            BarrierSide::Underdense => {
                if t == 0.0 {
                    return 0.5 * sigma * sigma;
                }
                let r = sigma / t.sqrt();
                0.5 * t * (r.asinh() + r * (1.0 + r * r).sqrt())
            }
            BarrierSide::Overdense if y <= self.inner_tp => -well_phase(t, sigma),
            BarrierSide::Overdense => well_tail_phase(t, sigma),
        }
    }

    /// sigma(y) for the barrier comparison equation.
    pub fn sigma(&self, y: f64) -> Result<f64> {
        if y == 0.0 {
            return Ok(0.0);
        }
        let rt = self.t.sqrt();
        if self.side == BarrierSide::Overdense && y == self.inner_tp {
            return Ok(rt);
        }
        let lhs = self.scaled_action(y)?;
        let f = |s: f64| self.phase(y, s) - lhs;
        match self.side {
            BarrierSide::Underdense => {
                let (a, b) = expand_upper(f, 0.0, 1.0 + rt, 1e8)?;
                brent(f, a, b, 1e-13)
            }
            BarrierSide::Overdense if y < self.inner_tp => brent(f, 0.0, rt, 1e-13),
            BarrierSide::Overdense => {
                let (a, b) = expand_upper(f, rt, 1.5 * rt + 1.0, 1e8)?;
                brent(f, a, b, 1e-13)
            }
        }
    }

    /// Residual of the mapping relation at (y, sigma).
    pub fn mapping_residual(&self, y: f64, sigma: f64) -> Result<f64> {
        Ok(self.scaled_action(y)? - self.phase(y, sigma))
    }

    fn normalization(&self) -> f64 {
        match self.side {
            BarrierSide::Underdense => {
                normalization_constant(self.lambda, self.beta).unwrap_or(1.0)
            }
            BarrierSide::Overdense => 1.0,
        }
    }
}

/// e^{i sigma^2/2} 1F1(1/4 - it/4; 1/2; -i sigma^2) below the separatrix, the conjugate
/// pairing above it. Real in exact arithmetic; the discarded imaginary part is checked.
pub fn barrier_kernel(side: BarrierSide, t: f64, sigma: f64) -> Result<f64> {
    let s2 = sigma * sigma;
    let a = Complex64::new(0.25, -0.25 * t);
    let b = Complex64::new(0.5, 0.0);
    let (z, ph) = match side {
        BarrierSide::Underdense => (
            Complex64::new(0.0, -s2),
            Complex64::from_polar(1.0, 0.5 * s2),
        ),
        BarrierSide::Overdense => (
            Complex64::new(0.0, s2),
            Complex64::from_polar(1.0, -0.5 * s2),
        ),
    };
    let v = ph * kummer_1f1(a, b, z)?;
    if v.im.abs() > LEAK_TOL * v.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Convergence(format!(
            "barrier wave at sigma = {sigma}, t = {t} leaks imaginary part {:e} of {:e}",
            v.im,
            v.norm()
        )));
    }
    Ok(v.re)
}

/// Barrier transitional wave on beams 0..=n_end (with the (-1)^n factor included).
pub fn barrier_wave(ctx: &BarrierContext, n_end: usize) -> Result<Vec<f64>> {
    let sl = ctx.lambda.sqrt();
    let (t, beta) = (ctx.t, ctx.beta);
    let g = gamma_quarter_line(t);
    let tilt = match ctx.side {
        BarrierSide::Underdense => PI * t / 8.0,
        BarrierSide::Overdense => -PI * t / 8.0,
    };
    let pref = ctx.normalization() * (g.ln_modulus + tilt).exp() / (2.0 * PI.sqrt());
    let mut out = Vec::with_capacity(n_end + 1);
    for n in 0..=n_end {
        let y = n as f64 / sl;
        let sigma = ctx.sigma(y)?;
        let p1sq = 1.0 - (y * y - beta).powi(2);
        let ratio = match ctx.side {
            BarrierSide::Underdense => (t + sigma * sigma) / p1sq,
            BarrierSide::Overdense if (y - ctx.inner_tp).abs() < 1e-9 => {
                (ctx.lambda * t / (4.0 * ctx.inner_tp * ctx.inner_tp)).cbrt()
            }
            BarrierSide::Overdense => (sigma * sigma - t) / p1sq,
        };
        if !(ratio > 0.0) {
            return Err(Error::Domain(format!(
                "barrier piece undefined at beam {n} (y = {y})"
            )));
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * pref * ratio.powf(0.25) * barrier_kernel(ctx.side, t, sigma)?);
    }
    Ok(out)
}

/// Airy mapping: sqrt(Lambda) S_0(y_+, y) = -(2/3)|sigma|^{3/2} inside, (2/3) i sigma^{3/2} beyond.
pub fn airy_sigma(lambda: f64, beta: f64, y: f64) -> Result<f64> {
    let s = lambda.sqrt() * action_s0(y, beta)?;
    Ok(if s.im > 0.0 {
        (1.5 * s.im).powf(2.0 / 3.0)
    } else {
        -(1.5 * s.re.abs()).powf(2.0 / 3.0)
    })
}

/// Airy transitional wave on beams n_start..=n_end, amplitude sqrt(pi) N (|sigma|/|p1^2|)^{1/4} Ai(sigma).
pub fn airy_transitional(lambda: f64, beta: f64, n_start: usize, n_end: usize) -> Result<Vec<f64>> {
    let sl = lambda.sqrt();
    let yp = outer_turning_point(beta);
    let norm = if beta < 1.0 {
        normalization_constant(lambda, beta)?
    } else {
        1.0
    };
    let pref = PI.sqrt() * norm;
    let mut out = Vec::with_capacity(n_end + 1 - n_start.min(n_end + 1));
    for n in n_start..=n_end {
        let y = n as f64 / sl;
        let sigma = airy_sigma(lambda, beta, y)?;
        let ratio = if (y - yp).abs() < 1e-9 {
            lambda.cbrt() / (2f64.powf(4.0 / 3.0) * yp.powf(2.0 / 3.0))
        } else {
            (sigma / (1.0 - (y * y - beta).powi(2))).abs()
        };
        out.push(pref * ratio.powf(0.25) * airy_ai(sigma));
    }
    Ok(out)
}

/// Where and how the two pieces were joined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JoinPlan {
    pub join_beam: usize,
    /// Barrier piece used on [barrier_range.0, barrier_range.1).
    pub barrier_range: (usize, usize),
    /// Scaled Airy piece used on [airy_range.0, airy_range.1].
    pub airy_range: (usize, usize),
    /// Least-squares factor applied to the Airy piece over the stitch window.
    pub scale: f64,
    /// rms of (barrier - airy) over the window, relative to the rms of the barrier piece, with
    /// only the branch sign applied to the Airy piece.
    pub mismatch_before: f64,
    /// The same after scaling.
    pub mismatch_after: f64,
}

/// Whether the stitch window around the join beam ends at least one half-window short of the
/// outer turning point. Below that clearance the barrier piece is used where it no longer holds,
/// which happens for the deeper states that the t rule assigns to the separatrix at small Lambda.
pub fn join_is_clear(lambda: f64, beta: f64) -> bool {
    if beta >= 1.0 {
        return true;
    }
    let m = join_beam_for(lambda, beta);
    outer_turning_point(beta) * lambda.sqrt() - (m + STITCH_HALF_WINDOW) as f64
        >= STITCH_HALF_WINDOW as f64
}

/// Barrier piece below the join beam, least-squares-scaled Airy piece from it on, then
/// renormalised by the discrete sum and sign-fixed.
pub fn separatrix_wave(lambda: f64, beta: f64, n_max: usize) -> Result<(BlochWave, JoinPlan)> {
    let ctx = BarrierContext::new(lambda, beta)?;
    let m = join_beam_for(lambda, beta);
    let w = STITCH_HALF_WINDOW;
    let sl = lambda.sqrt();
    if m < w || m + w > n_max || (m + w) as f64 / sl >= ctx.outer_tp {
        return Err(Error::Domain(format!(
            "join beam {m} leaves no stitch window below N = {n_max}"
        )));
    }
    if ctx.side == BarrierSide::Overdense && ((m - w) as f64 / sl) <= ctx.inner_tp {
        return Err(Error::Domain(format!(
            "join window at beam {m} reaches into the barrier"
        )));
    }
    let bar = barrier_wave(&ctx, m + w)?;
    let airy = airy_transitional(lambda, beta, m - w, n_max)?;
    let win = |f: &dyn Fn(usize) -> f64| (0..=2 * w).map(f).sum::<f64>();
    let ba = win(&|k| bar[m - w + k] * airy[k]);
    let aa = win(&|k| airy[k] * airy[k]);
    let bb = win(&|k| bar[m - w + k] * bar[m - w + k]);
    let scale = ba / aa;
    // the Airy piece enters with the sign of the pi/4 or 5pi/4 branch
    let sg = scale.signum();
    let before = (win(&|k| (bar[m - w + k] - sg * airy[k]).powi(2)) / bb).sqrt();
    let after = (win(&|k| (bar[m - w + k] - scale * airy[k]).powi(2)) / bb).sqrt();
    let mut amps = vec![0.0; n_max + 1];
    amps[..m].copy_from_slice(&bar[..m]);
    for n in m..=n_max {
        amps[n] = scale * airy[n - (m - w)];
    }
    let mut wave = BlochWave::new(lambda, beta, amps);
    wave.renormalize();
    wave.fix_sign();
    let plan = JoinPlan {
        join_beam: m,
        barrier_range: (0, m),
        airy_range: (m, n_max),
        scale,
        mismatch_before: before,
        mismatch_after: after,
    };
    Ok((wave, plan))
}

/// Bound state j near the separatrix: modified eigenvalue plus joined eigenvector.
pub fn separatrix_eigenvector(
    lambda: f64,
    j: usize,
    n_max: usize,
) -> Result<(MatchedRoot, BlochWave, JoinPlan)> {
    let root = match_underdense(lambda, j, DEFAULT_XTOL)?;
    let (wave, plan) = separatrix_wave(lambda, root.beta, n_max)?;
    Ok((root, wave, plan))
}

/// Free (overdense) eigenvector at a quantised beta > 1.
pub fn free_eigenvector(lambda: f64, beta: f64, n_max: usize) -> Result<(BlochWave, JoinPlan)> {
    if !(beta > 1.0) {
        return Err(Error::Domain(format!(
            "free state needs beta > 1, got {beta}"
        )));
    }
    separatrix_wave(lambda, beta, n_max)
}

/// Real WKB barrier wave `N p1^{-1/2} cos(sqrt(Lambda) S̄_0(0, y) + mu + pi n)` below the
/// separatrix, on beams short of the outer turning point by at least `guard_beams`.
pub fn barrier_wkb_wave(
    lambda: f64,
    beta: f64,
    n_max: usize,
    guard_beams: f64,
) -> Result<BlochWave> {
    let ctx = BarrierContext::new(lambda, beta)?;
    if ctx.side != BarrierSide::Underdense {
        return Err(Error::Domain(
            "barrier WKB wave is built below the separatrix only".into(),
        ));
    }
    let sl = lambda.sqrt();
    let norm = ctx.normalization();
    let mut amps = vec![0.0; n_max + 1];
    let mut guarded = vec![false; n_max + 1];
    for n in 0..=n_max {
        let y = n as f64 / sl;
        if y > ctx.outer_tp - guard_beams / sl {
            guarded[n] = true;
            continue;
        }
        let p1 = (1.0 - (y * y - beta).powi(2)).sqrt();
        let phase = ctx.scaled_action(y)? + ctx.mu + PI * (n % 2) as f64;
        amps[n] = norm * p1.powf(-0.5) * phase.cos();
    }
    Ok(BlochWave::with_guards(lambda, beta, amps, guarded))
}

/// Both sides of the discrete cos-cos match at every beam strictly between the turning
/// points: (n, barrier-side cosine, outer-side cosine).
pub fn matching_sides(lambda: f64, root: &MatchedRoot) -> Result<Vec<(usize, f64, f64)>> {
    let ctx = BarrierContext::new(lambda, root.beta)?;
    let sl = lambda.sqrt();
    let lo = match ctx.side {
        BarrierSide::Underdense => 0,
        BarrierSide::Overdense => (ctx.inner_tp * sl).floor() as usize + 1,
    };
    let hi = (ctx.outer_tp * sl).ceil() as usize;
    let mut out = Vec::new();
    for n in lo..hi {
        let y = n as f64 / sl;
        if y >= ctx.outer_tp {
            break;
        }
        let left = (ctx.scaled_action(y)? + ctx.mu + PI * (n % 2) as f64).cos();
        let right = (sl * action_s0(y, root.beta)?.re + root.offset).cos();
        out.push((n, left, right));
    }
    Ok(out)
}

/// B_n = (-1)^n C_n, mapping between the Mathieu recursion and its transformed form.
pub fn alternate_signs(b: &[f64]) -> Vec<f64> {
    b.iter()
        .enumerate()
        .map(|(n, &v)| if n % 2 == 0 { v } else { -v })
        .collect()
}

/// Largest residual, relative to Lambda max|c|, of
/// `n^2 c_n + s (Lambda/2)(c_{n+1} + c_{n-1}) = Lambda beta c_n` over interior beams
/// 0 < n < len-1; s = -1 is the Mathieu recursion, s = +1 its transformed form.
pub fn recursion_residual(lambda: f64, beta: f64, c: &[f64], coupling_sign: f64) -> f64 {
    let peak = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut worst: f64 = 0.0;
    for n in 1..c.len().saturating_sub(1) {
        let nf = n as f64;
        let r = nf * nf * c[n] + coupling_sign * 0.5 * lambda * (c[n + 1] + c[n - 1])
            - lambda * beta * c[n];
        worst = worst.max(r.abs());
    }
    worst / (lambda * peak)
}
