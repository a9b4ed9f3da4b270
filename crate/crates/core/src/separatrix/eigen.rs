//! Modified eigenvalue conditions near and above the separatrix.

use super::actions::{
    barred_action_overdense_outside, inner_turning_point, mu_overdense, mu_underdense,
    phase_count_level, t_overdense, t_underdense,
};
use crate::error::{Error, Result};
use crate::numerics::brent;
use crate::types::Regime;
use crate::wkb_core::{
    action_s0, bohr_sommerfeld_eigenvalue, half_well_action, outer_turning_point,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

/// Bound states whose barrier parameter t is at most this are built from the barrier
/// and Airy pieces instead of the single-well uniform approximation.
pub const SEPARATRIX_T_SWITCH: f64 = 40.0;

/// Grid points used to isolate zeros of a matching condition inside its window.
pub const SCAN_POINTS: usize = 400;

/// Default absolute tolerance on beta.
pub const DEFAULT_XTOL: f64 = 1e-12;

const OFFSETS: [f64; 2] = [FRAC_PI_4, 5.0 * FRAC_PI_4];

/// A zero of a matching condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedRoot {
    pub j: usize,
    pub beta: f64,
    /// pi/4 or 5pi/4, whichever condition produced the root.
    pub offset: f64,
    /// Phase-count estimate the root was selected against.
    pub estimate: f64,
    pub window: (f64, f64),
    /// Beam used for the overdense match; None below the separatrix, where y = 0 is used.
    pub match_beam: Option<usize>,
}

/// Offset that the alternation assigns to even index j.
pub fn expected_offset(j: usize) -> f64 {
    if (j / 2) % 2 == 0 {
        FRAC_PI_4
    } else {
        5.0 * FRAC_PI_4
    }
}

fn check_even(j: usize) -> Result<()> {
    if j % 2 != 0 {
        return Err(Error::Usage(format!(
            "only even states are excited; got j = {j}"
        )));
    }
    Ok(())
}

/// cos(mu(beta)) - cos(sqrt(Lambda) S_0(y_+, 0, beta) + offset).
pub fn underdense_condition(lambda: f64, beta: f64, offset: f64) -> Result<f64> {
    let mu = mu_underdense(t_underdense(lambda, beta)?)?;
    let s = -half_well_action(beta)?;
    Ok(mu.cos() - (lambda.sqrt() * s + offset).cos())
}

/// The two phases compared at beam m above the separatrix:
/// `sqrt(Lambda) S̄_0(yi, y_m, beta) + mu(beta) + pi m` and `sqrt(Lambda) S_0(y_+, y_m, beta) + offset`.
pub fn overdense_phases(lambda: f64, beta: f64, m: usize, offset: f64) -> Result<(f64, f64)> {
    let sl = lambda.sqrt();
    let y = m as f64 / sl;
    let mu = mu_overdense(t_overdense(lambda, beta)?)?;
    let sbar = barred_action_overdense_outside(y, beta)?;
    let s = action_s0(y, beta)?.re;
    Ok((sl * sbar + mu + PI * (m % 2) as f64, sl * s + offset))
}

/// cos(A) - cos(B) for the phases of [`overdense_phases`].
pub fn overdense_condition(lambda: f64, beta: f64, m: usize, offset: f64) -> Result<f64> {
    let (a, b) = overdense_phases(lambda, beta, m, offset)?;
    Ok(a.cos() - b.cos())
}

/// Beam nearest the midpoint of [inner turning point, outer turning point]; the inner point
/// is sqrt|beta - 1| on either side of the separatrix.
pub fn join_beam_for(lambda: f64, beta: f64) -> usize {
    let mid = 0.5 * (inner_turning_point(beta) + outer_turning_point(beta));
    (mid * lambda.sqrt()).round() as usize
}

/// Zeros of `g` on a grid over `[lo, hi]`, refined by Brent; with `slope` set, only those
/// crossed with that gradient sign.
fn signed_zeros<F: Fn(f64) -> Result<f64>>(
    g: F,
    lo: f64,
    hi: f64,
    extra: &[f64],
    slope: Option<f64>,
    xtol: f64,
) -> Result<Vec<f64>> {
    let mut grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / SCAN_POINTS as f64)
        .collect();
    grid.extend(extra.iter().copied().filter(|x| *x > lo && *x < hi));
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let vals = grid.iter().map(|&b| g(b)).collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    for k in 0..grid.len() - 1 {
        let (va, vb) = (vals[k], vals[k + 1]);
        if va == 0.0 || va.signum() == vb.signum() {
            continue;
        }
        if slope.is_some_and(|sg| (vb - va).signum() != sg.signum()) {
            continue;
        }
        out.push(brent(
            |b| g(b).unwrap_or(f64::NAN),
            grid[k],
            grid[k + 1],
            xtol,
        )?);
    }
    Ok(out)
}

fn pick_closest(cands: Vec<(f64, f64)>, estimate: f64, j: usize) -> Result<(f64, f64)> {
    cands
        .into_iter()
        .min_by(|a, b| {
            (a.0 - estimate)
                .abs()
                .partial_cmp(&(b.0 - estimate).abs())
                .unwrap()
        })
        .ok_or_else(|| {
            Error::NoRoot(format!(
                "window for j = {j} contains no zero with the required gradient sign"
            ))
        })
}

/// Modified eigenvalue below the separatrix, with the selection details.
///
/// Both offsets are scanned over the window between the phase-count levels j-1 and j+1,
/// zeros with negative gradient are kept, and the one nearest the level-j estimate wins.
pub fn match_underdense(lambda: f64, j: usize, xtol: f64) -> Result<MatchedRoot> {
    check_even(j)?;
    let estimate = phase_count_level(lambda, j as f64)?;
    if estimate >= 1.0 {
        return Err(Error::Domain(format!(
            "j = {j} lies above the separatrix at Lambda = {lambda}"
        )));
    }
    let lo = if j == 0 {
        -1.0 + 1e-12
    } else {
        phase_count_level(lambda, j as f64 - 1.0)?
    };
    let hi = phase_count_level(lambda, j as f64 + 1.0)?.min(1.0 - 1e-12);
    // the single-well root separates the twin zeros deep in the well
    let extra: Vec<f64> = bohr_sommerfeld_eigenvalue(lambda, j).into_iter().collect();
    let mut cands = Vec::new();
    for off in OFFSETS {
        for b in signed_zeros(
            |b| underdense_condition(lambda, b, off),
            lo,
            hi,
            &extra,
            Some(-1.0),
            xtol,
        )? {
            cands.push((b, off));
        }
    }
    let (beta, offset) = pick_closest(cands, estimate, j)?;
    Ok(MatchedRoot {
        j,
        beta,
        offset,
        estimate,
        window: (lo, hi),
        match_beam: None,
    })
}

/// Modified eigenvalue below the separatrix, matched at y = 0.
pub fn eigenvalue_near_separatrix_underdense(lambda: f64, j: usize) -> Result<f64> {
    Ok(match_underdense(lambda, j, DEFAULT_XTOL)?.beta)
}

/// Overdense eigenvalue matched at beam m (default: the join beam at the phase-count estimate).
pub fn match_overdense(lambda: f64, j: usize, m: Option<usize>, xtol: f64) -> Result<MatchedRoot> {
    check_even(j)?;
    let estimate = phase_count_level(lambda, j as f64)?;
    if estimate <= 1.0 {
        return Err(Error::Domain(format!(
            "j = {j} lies below the separatrix at Lambda = {lambda}"
        )));
    }
    let lo = phase_count_level(lambda, j as f64 - 1.0)?.max(1.0 + 1e-12);
    let hi = phase_count_level(lambda, j as f64 + 1.0)?;
    let m = m.unwrap_or_else(|| join_beam_for(lambda, estimate));
    let y = m as f64 / lambda.sqrt();
    if !(y > inner_turning_point(hi) && y < outer_turning_point(lo)) {
        return Err(Error::Domain(format!(
            "match beam {m} is not between the turning points"
        )));
    }
    // The slope of cos A - cos B at the wanted zero is sin(B) (A' + B'), so its sign changes
    // with m; the zero is identified instead by its branch, A = -B mod 2 pi, on which the two
    // expressions coincide at every beam.
    let mut cands = Vec::new();
    for off in OFFSETS {
        for b in signed_zeros(
            |b| overdense_condition(lambda, b, m, off),
            lo,
            hi,
            &[],
            None,
            xtol,
        )? {
            let (pa, pb) = overdense_phases(lambda, b, m, off)?;
            if (pa.sin() + pb.sin()).abs() < (pa.sin() - pb.sin()).abs() {
                cands.push((b, off));
            }
        }
    }
    let (beta, offset) = pick_closest(cands, estimate, j)?;
    Ok(MatchedRoot {
        j,
        beta,
        offset,
        estimate,
        window: (lo, hi),
        match_beam: Some(m),
    })
}

/// Overdense eigenvalue for even j, matched at the join beam.
pub fn eigenvalue_overdense(lambda: f64, j: usize) -> Result<f64> {
    Ok(match_overdense(lambda, j, None, DEFAULT_XTOL)?.beta)
}

/// Overdense eigenvalue matched at an explicit beam m.
pub fn eigenvalue_overdense_at(lambda: f64, j: usize, m: usize) -> Result<f64> {
    Ok(match_overdense(lambda, j, Some(m), DEFAULT_XTOL)?.beta)
}

/// Modified eigenvalue on whichever side of the separatrix j falls.
pub fn modified_eigenvalue(lambda: f64, j: usize, xtol: f64) -> Result<MatchedRoot> {
    check_even(j)?;
    if phase_count_level(lambda, j as f64)? < 1.0 {
        match_underdense(lambda, j, xtol)
    } else {
        match_overdense(lambda, j, None, xtol)
    }
}

/// Regime of even state j together with the estimate used to decide it: the single-well
/// Bohr-Sommerfeld root where one exists, the phase-count level otherwise.
pub fn classify(lambda: f64, j: usize) -> Result<(Regime, f64)> {
    check_even(j)?;
    let est = match bohr_sommerfeld_eigenvalue(lambda, j) {
        Ok(b) => b,
        Err(_) => phase_count_level(lambda, j as f64)?,
    };
    let regime = if est > 1.0 {
        Regime::FreeOverdense
    } else if est == 1.0 || t_underdense(lambda, est)? <= SEPARATRIX_T_SWITCH {
        Regime::NearSeparatrixUnderdense
    } else {
        Regime::BoundWell
    };
    Ok((regime, est))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_alternate() {
        assert_eq!(expected_offset(200), FRAC_PI_4);
        assert_eq!(expected_offset(198), 5.0 * FRAC_PI_4);
        for j in (186..=200).step_by(2) {
            let r = match_underdense(12500.0, j, 1e-12).unwrap();
            assert!((r.offset - expected_offset(j)).abs() < 1e-15, "j={j}");
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(12500.0, 100).unwrap().0, Regime::BoundWell);
        assert_eq!(
            classify(12500.0, 200).unwrap().0,
            Regime::NearSeparatrixUnderdense
        );
        assert_eq!(classify(12500.0, 202).unwrap().0, Regime::FreeOverdense);
        assert!(classify(12500.0, 3).is_err());
    }

    #[test]
    fn wrong_side_is_rejected() {
        assert!(eigenvalue_overdense(12500.0, 200).is_err());
        assert!(eigenvalue_near_separatrix_underdense(12500.0, 202).is_err());
    }
}
