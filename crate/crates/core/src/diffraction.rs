//! Dynamical diffraction of a normally incident plane wave: expansion in even Bloch waves,
//! spectral propagation to depth zeta, direct integration of the Raman-Nath equations, and
//! the phase-grating (Bessel) limit.

use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use crate::rn_oracle::EigenSolution;
use crate::separatrix::{
    classify, join_is_clear, modified_eigenvalue, phase_count_level, separatrix_wave,
};
use crate::specialfn::bessel_j_all;
use crate::types::{BlochWave, Regime};
use crate::uniform_bound::uniform_eigenvector;
use crate::wkb_core::bohr_sommerfeld_eigenvalue;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;

/// Beam amplitudes A_n, n = -N..=N, at depth zeta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarfieldPattern {
    pub lambda: f64,
    pub zeta: f64,
    pub n_max: usize,
    /// A_n stored at index n + N.
    pub amplitudes: Vec<C>,
    pub intensities: Vec<f64>,
}

impl FarfieldPattern {
    pub fn from_amplitudes(lambda: f64, zeta: f64, amplitudes: Vec<C>) -> Self {
        assert!(amplitudes.len() % 2 == 1);
        let n_max = amplitudes.len() / 2;
        let intensities = amplitudes.iter().map(|a| a.norm_sqr()).collect();
        FarfieldPattern {
            lambda,
            zeta,
            n_max,
            amplitudes,
            intensities,
        }
    }

    pub fn amplitude(&self, n: i64) -> C {
        self.amplitudes[(n + self.n_max as i64) as usize]
    }

    pub fn intensity(&self, n: i64) -> f64 {
        self.intensities[(n + self.n_max as i64) as usize]
    }

    /// Scaled momentum of beam n.
    pub fn y(&self, n: i64) -> f64 {
        n as f64 / self.lambda.sqrt()
    }

    /// Sum of |A_n|^2 over all beams.
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.intensities)
    }

    /// max_n |A_n - A_{-n}|.
    pub fn parity_defect(&self) -> f64 {
        let n = self.n_max as i64;
        (1..=n)
            .map(|k| (self.amplitude(k) - self.amplitude(-k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Largest per-beam intensity difference between two patterns on the common beam range.
pub fn max_intensity_difference(a: &FarfieldPattern, b: &FarfieldPattern) -> f64 {
    let n = a.n_max.max(b.n_max) as i64;
    let get = |p: &FarfieldPattern, k: i64| {
        if k.unsigned_abs() as usize <= p.n_max {
            p.intensity(k)
        } else {
            0.0
        }
    };
    (-n..=n)
        .map(|k| (get(a, k) - get(b, k)).abs())
        .fold(0.0, f64::max)
}

/// Expansion coefficients of the incident wave A_n(0) = delta_{n0}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    /// c_j = B^j_0.
    pub coefficients: Vec<f64>,
    /// 1 - sum c_j^2: the weight missing from the basis.
    pub completeness_deficit: f64,
}

/// c_j = B^j(y = 0) for a normalised even basis.
pub fn superposition_coefficients(basis: &[BlochWave]) -> Result<Superposition> {
    let c = basis
        .iter()
        .map(|w| w.amplitude(0))
        .collect::<Result<Vec<f64>>>()?;
    let sq: Vec<f64> = c.iter().map(|v| v * v).collect();
    Ok(Superposition {
        completeness_deficit: 1.0 - pairwise_sum(&sq),
        coefficients: c,
    })
}

/// A_n(zeta) = sum_j c_j B^j_n exp(-i E_j zeta), E_j = Lambda beta_j.
///
/// The sum over j uses fixed-order pairwise summation, so results are bit-reproducible.
pub fn propagate_spectral(
    basis: &[BlochWave],
    coefficients: &[f64],
    zeta: f64,
) -> Result<FarfieldPattern> {
    if basis.is_empty() || basis.len() != coefficients.len() {
        return Err(Error::Usage(
            "basis and coefficient lists must be non-empty and of equal length".into(),
        ));
    }
    let lambda = basis[0].lambda;
    let n_max = basis.iter().map(|w| w.n_max()).max().unwrap_or(0);
    let vals = basis
        .iter()
        .map(|w| w.values())
        .collect::<Result<Vec<&[f64]>>>()?;
    let phases: Vec<C> = basis
        .iter()
        .map(|w| C::from_polar(1.0, -lambda * w.beta * zeta))
        .collect();
    let mut half = vec![C::new(0.0, 0.0); n_max + 1];
    let mut re = vec![0.0; basis.len()];
    let mut im = vec![0.0; basis.len()];
    for (n, slot) in half.iter_mut().enumerate() {
        for j in 0..basis.len() {
            let b = vals[j].get(n).copied().unwrap_or(0.0);
            let term = phases[j] * (coefficients[j] * b);
            re[j] = term.re;
            im[j] = term.im;
        }
        *slot = C::new(pairwise_sum(&re), pairwise_sum(&im));
    }
    let mut amps = Vec::with_capacity(2 * n_max + 1);
    amps.extend(half.iter().skip(1).rev());
    amps.extend(half.iter());
    Ok(FarfieldPattern::from_amplitudes(lambda, zeta, amps))
}

/// Oracle eigenvectors below the separatrix as a basis.
pub fn oracle_bound_basis(sol: &EigenSolution) -> Vec<BlochWave> {
    let count = sol.bound_state_count();
    (0..count)
        .map(|k| sol.wave(2 * k).expect("bound state index in range"))
        .collect()
}

/// Every oracle eigenvector, free states included.
pub fn oracle_full_basis(sol: &EigenSolution) -> Vec<BlochWave> {
    (0..sol.states.len())
        .map(|k| sol.wave(2 * k).expect("state index in range"))
        .collect()
}

/// Semiclassical even basis: the uniform approximation deep in the well, the joined
/// barrier/Airy construction near the separatrix where its join window is clear of the outer
/// turning point, and `free_states` overdense states.
///
/// Every wave is renormalised and carries the modified eigenvalue, which is what sets
/// its phase evolution.
pub fn semiclassical_basis(
    lambda: f64,
    n_max: usize,
    free_states: usize,
) -> Result<Vec<BlochWave>> {
    let mut out = Vec::new();
    let mut j = 0usize;
    let mut free = 0usize;
    loop {
        let level = phase_count_level(lambda, j as f64)?;
        if level > 1.0 {
            if free == free_states {
                break;
            }
            free += 1;
        }
        let (regime, _) = classify(lambda, j)?;
        let mut wave = match regime {
            Regime::BoundWell => {
                let b = bohr_sommerfeld_eigenvalue(lambda, j)?;
                let mut w = uniform_eigenvector(lambda, j, b, n_max)?;
                w.beta = level;
                w
            }
            _ => {
                let beta = modified_eigenvalue(lambda, j, 1e-12)?.beta;
                if join_is_clear(lambda, beta) {
                    separatrix_wave(lambda, beta, n_max)?.0
                } else {
                    let b = bohr_sommerfeld_eigenvalue(lambda, j)?;
                    let mut w = uniform_eigenvector(lambda, j, b, n_max)?;
                    w.beta = beta;
                    w
                }
            }
        };
        wave.renormalize();
        wave.fix_sign();
        out.push(wave);
        j += 2;
    }
    Ok(out)
}

/// Result of integrating the Raman-Nath equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnTrajectory {
    pub samples: Vec<FarfieldPattern>,
    pub steps: usize,
    pub rejected: usize,
    /// max |sum |A_n|^2 - 1| over the sampled depths.
    pub max_norm_drift: f64,
}

/// Tolerances for [`integrate_rn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RnTolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for RnTolerance {
    fn default() -> Self {
        RnTolerance {
            rtol: 1e-12,
            atol: 1e-14,
        }
    }
}

/// dA_n/dzeta = -i (n^2 A_n - (Lambda/2)(A_{n+1} + A_{n-1})), A_{+-(N+1)} = 0.
fn rn_rhs(lambda: f64, a: &[C], out: &mut [C]) {
    let len = a.len();
    let n_max = (len / 2) as f64;
    let h = 0.5 * lambda;
    for k in 0..len {
        let n = k as f64 - n_max;
        let mut s = a[k] * (n * n);
        if k > 0 {
            s -= a[k - 1] * h;
        }
        if k + 1 < len {
            s -= a[k + 1] * h;
        }
        out[k] = C::new(s.im, -s.re);
    }
}

// Dormand-Prince 5(4) tableau
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates from A_n(0) = delta_{n0} on beams -N..=N with an adaptive Dormand-Prince 5(4)
/// scheme, recording the pattern at each requested depth (sorted ascending, >= 0).
/// Unitarity is monitored, not enforced.
pub fn integrate_rn(
    lambda: f64,
    zetas: &[f64],
    n_max: usize,
    tol: RnTolerance,
) -> Result<RnTrajectory> {
    if !(lambda >= 0.0)
        || zetas.iter().any(|z| !(*z >= 0.0))
        || zetas.windows(2).any(|w| w[1] < w[0])
    {
        return Err(Error::Usage(
            "integrate_rn needs Lambda >= 0 and ascending depths >= 0".into(),
        ));
    }
    let len = 2 * n_max + 1;
    let mut a = vec![C::new(0.0, 0.0); len];
    a[n_max] = C::new(1.0, 0.0);
    let mut k: Vec<Vec<C>> = vec![vec![C::new(0.0, 0.0); len]; 7];
    let mut tmp = vec![C::new(0.0, 0.0); len];
    let mut z = 0.0;
    let rate = (n_max * n_max) as f64 + lambda;
    let mut h = if rate > 0.0 { 0.01 / rate } else { 0.1 };
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut samples = Vec::with_capacity(zetas.len());
    let mut drift: f64 = 0.0;
    rn_rhs(lambda, &a, &mut k[0]);
    let mut err_prev: f64 = 1e-4;
    for &target in zetas {
        while z < target {
            let last = target - z <= h;
            let hs = if last { target - z } else { h };
            let stage = |coef: &[(usize, f64)], tmp: &mut [C], k: &[Vec<C>], a: &[C]| {
                for i in 0..len {
                    let mut s = a[i];
                    for &(s_idx, c) in coef {
                        s += k[s_idx][i] * (hs * c);
                    }
                    tmp[i] = s;
                }
            };
            stage(&[(0, A21)], &mut tmp, &k, &a);
            rn_rhs(lambda, &tmp, &mut k[1]);
            stage(&[(0, A31), (1, A32)], &mut tmp, &k, &a);
            rn_rhs(lambda, &tmp, &mut k[2]);
            stage(&[(0, A41), (1, A42), (2, A43)], &mut tmp, &k, &a);
            rn_rhs(lambda, &tmp, &mut k[3]);
            stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &mut tmp, &k, &a);
            rn_rhs(lambda, &tmp, &mut k[4]);
            stage(
                &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)],
                &mut tmp,
                &k,
                &a,
            );
            rn_rhs(lambda, &tmp, &mut k[5]);
            stage(
                &[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)],
                &mut tmp,
                &k,
                &a,
            );
            rn_rhs(lambda, &tmp, &mut k[6]);
            let mut err = 0.0;
            for i in 0..len {
                let e = (k[0][i] * E1
                    + k[2][i] * E3
                    + k[3][i] * E4
                    + k[4][i] * E5
                    + k[5][i] * E6
                    + k[6][i] * E7)
                    * hs;
                let sc = tol.atol + tol.rtol * a[i].norm().max(tmp[i].norm());
                err += (e.norm() / sc).powi(2);
            }
            let err = (err / len as f64).sqrt();
            if err <= 1.0 {
                std::mem::swap(&mut a, &mut tmp);
                k.swap(0, 6);
                z = if last { target } else { z + hs };
                steps += 1;
                // PI step-size controller
                let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
                err_prev = err.max(1e-4);
                if !last {
                    h = hs * fac.clamp(0.2, 5.0);
                }
            } else {
                rejected += 1;
                h = hs * (0.9 * err.powf(-0.2)).max(0.2);
            }
            if h < 1e-14 * target.max(1.0) {
                return Err(Error::Convergence(format!(
                    "step size underflow at zeta = {z}"
                )));
            }
        }
        let pat = FarfieldPattern::from_amplitudes(lambda, target, a.clone());
        drift = drift.max((pat.total() - 1.0).abs());
        samples.push(pat);
    }
    Ok(RnTrajectory {
        samples,
        steps,
        rejected,
        max_norm_drift: drift,
    })
}

/// Phase-grating limit A_n = i^n J_n(Lambda zeta), exact when the n^2 term is dropped.
pub fn phase_grating(lambda: f64, zeta: f64, n_max: usize) -> Result<FarfieldPattern> {
    if !(zeta >= 0.0) || !(lambda >= 0.0) {
        return Err(Error::Usage(
            "phase grating needs Lambda >= 0 and zeta >= 0".into(),
        ));
    }
    let j = bessel_j_all(n_max, lambda * zeta);
    let ipow = |n: usize| match n % 4 {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, 1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, -1.0),
    };
    let half: Vec<C> = (0..=n_max).map(|n| ipow(n) * j[n]).collect();
    let mut amps = Vec::with_capacity(2 * n_max + 1);
    amps.extend(half.iter().skip(1).rev());
    amps.extend(half.iter());
    Ok(FarfieldPattern::from_amplitudes(lambda, zeta, amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rn_oracle::eigensolve_even;
    use crate::types::ModelParams;

    #[test]
    fn single_state_toy_basis() {
        let w = BlochWave::new(1.0, 0.0, vec![1.0, 0.0]);
        let s = superposition_coefficients(&[w]).unwrap();
        assert_eq!(s.coefficients, vec![1.0]);
        assert_eq!(s.completeness_deficit, 0.0);
    }

    #[test]
    fn spectral_start_and_unitarity() {
        let p = ModelParams::with_default_margin(300.0).unwrap();
        let sol = eigensolve_even(&p).unwrap();
        let basis = oracle_full_basis(&sol);
        let c = superposition_coefficients(&basis).unwrap();
        assert!(c.completeness_deficit.abs() < 1e-12);
        let p0 = propagate_spectral(&basis, &c.coefficients, 0.0).unwrap();
        assert!((p0.intensity(0) - 1.0).abs() < 1e-12);
        for z in [0.3, 2.0, 40.0] {
            let pz = propagate_spectral(&basis, &c.coefficients, z).unwrap();
            assert!((pz.total() - 1.0).abs() < 1e-9);
            assert_eq!(pz.parity_defect(), 0.0);
        }
    }

    #[test]
    fn decoupled_beams() {
        let tr = integrate_rn(0.0, &[1.0, 5.0], 4, RnTolerance::default()).unwrap();
        for s in &tr.samples {
            assert!((s.intensity(0) - 1.0).abs() < 1e-12);
            assert!(s.intensity(1) == 0.0);
        }
    }

    #[test]
    fn ode_matches_spectral_and_keeps_norm() {
        let lambda = 50.0;
        let p = ModelParams::with_default_margin(lambda).unwrap();
        let sol = eigensolve_even(&p).unwrap();
        let basis = oracle_full_basis(&sol);
        let c = superposition_coefficients(&basis).unwrap();
        let zs = [0.5, 3.0, 130.0];
        let tr = integrate_rn(lambda, &zs, p.truncation_n, RnTolerance::default()).unwrap();
        assert!(tr.max_norm_drift < 1e-9, "drift {}", tr.max_norm_drift);
        for (z, s) in zs.iter().zip(&tr.samples) {
            let sp = propagate_spectral(&basis, &c.coefficients, *z).unwrap();
            assert!(max_intensity_difference(&sp, s) < 1e-8);
            assert!(s.parity_defect() < 1e-10);
        }
    }

    #[test]
    fn phase_grating_short_times() {
        let lambda = 50.0;
        let g0 = phase_grating(lambda, 0.0, 20).unwrap();
        assert_eq!(g0.intensity(0), 1.0);
        let zeta = 0.002;
        let g = phase_grating(lambda, zeta, 20).unwrap();
        assert!((g.total() - 1.0).abs() < 1e-14);
        let tr = integrate_rn(lambda, &[zeta], 20, RnTolerance::default()).unwrap();
        assert!(max_intensity_difference(&g, &tr.samples[0]) < 1e-4);
    }
}
