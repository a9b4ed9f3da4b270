//! Shared data types.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Problem scale: Lambda and the matrix half-width N (beams -N..N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub truncation_n: usize,
    pub margin: f64,
}

pub const DEFAULT_MARGIN: f64 = 1.3;

/// N = ceil(margin sqrt(2 Lambda)) + 10.
pub fn choose_truncation(lambda: f64, margin: f64) -> Result<usize> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "Lambda must be positive, got {lambda}"
        )));
    }
    if !(margin >= 1.0) {
        return Err(Error::Domain(format!("margin must be >= 1, got {margin}")));
    }
    Ok((margin * (2.0 * lambda).sqrt()).ceil() as usize + 10)
}

impl ModelParams {
    pub fn new(lambda: f64, margin: f64) -> Result<Self> {
        let n = choose_truncation(lambda, margin)?;
        Ok(ModelParams {
            lambda,
            truncation_n: n,
            margin,
        })
    }

    pub fn with_default_margin(lambda: f64) -> Result<Self> {
        Self::new(lambda, DEFAULT_MARGIN)
    }

    /// Explicit truncation; must still satisfy N >= ceil(margin sqrt(2 Lambda)).
    pub fn with_truncation(lambda: f64, margin: f64, n: usize) -> Result<Self> {
        let base = choose_truncation(lambda, margin)? - 10;
        if n < base {
            return Err(Error::Domain(format!(
                "N = {n} below the truncation floor {base}"
            )));
        }
        Ok(ModelParams {
            lambda,
            truncation_n: n,
            margin,
        })
    }

    /// Beam spacing in y.
    pub fn dy(&self) -> f64 {
        1.0 / self.lambda.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    BoundWell,
    NearSeparatrixUnderdense,
    FreeOverdense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Numerical,
    Wkb,
    Uniform,
    Separatrix,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenstate {
    /// Even index counted as 0, 2, 4, ...
    pub j: usize,
    pub beta: f64,
    pub energy: f64,
    pub regime: Regime,
    pub method: Method,
}

impl Eigenstate {
    pub fn regime_of(beta: f64) -> Regime {
        if beta > 1.0 {
            Regime::FreeOverdense
        } else {
            Regime::BoundWell
        }
    }
}

/// Even Bloch wave on the beam grid n = 0..N (B_{-n} = B_n).
///
/// Amplitudes inside a guard band are unavailable; `amplitude` reports them as
/// [`Error::Guarded`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochWave {
    pub lambda: f64,
    pub beta: f64,
    amplitudes: Vec<f64>,
    guarded: Vec<bool>,
    pub renormalized: bool,
}

impl BlochWave {
    pub fn new(lambda: f64, beta: f64, amplitudes: Vec<f64>) -> Self {
        let guarded = vec![false; amplitudes.len()];
        BlochWave {
            lambda,
            beta,
            amplitudes,
            guarded,
            renormalized: false,
        }
    }

    pub fn with_guards(lambda: f64, beta: f64, amplitudes: Vec<f64>, guarded: Vec<bool>) -> Self {
        assert_eq!(amplitudes.len(), guarded.len());
        let amplitudes = amplitudes
            .iter()
            .zip(&guarded)
            .map(|(&a, &g)| if g { 0.0 } else { a })
            .collect();
        BlochWave {
            lambda,
            beta,
            amplitudes,
            guarded,
            renormalized: false,
        }
    }

    /// Highest beam index N.
    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn y(&self, n: usize) -> f64 {
        n as f64 / self.lambda.sqrt()
    }

    pub fn is_guarded(&self, n: usize) -> bool {
        self.guarded[n]
    }

    pub fn has_guards(&self) -> bool {
        self.guarded.iter().any(|&g| g)
    }

    pub fn amplitude(&self, n: usize) -> Result<f64> {
        if self.guarded[n] {
            Err(Error::Guarded(n))
        } else {
            Ok(self.amplitudes[n])
        }
    }

    /// All amplitudes; fails if any beam is guarded.
    pub fn values(&self) -> Result<&[f64]> {
        match self.guarded.iter().position(|&g| g) {
            Some(n) => Err(Error::Guarded(n)),
            None => Ok(&self.amplitudes),
        }
    }

    /// Discrete norm over -N..N, guarded beams skipped.
    pub fn norm_sq(&self) -> f64 {
        even_norm_sq(&self.amplitudes)
    }

    pub fn renormalize(&mut self) {
        let s = self.norm_sq().sqrt();
        if s > 0.0 {
            for a in &mut self.amplitudes {
                *a /= s;
            }
        }
        self.renormalized = true;
    }

    /// Flips the overall sign so that B_0 >= 0, or the largest component when B_0 is ~0.
    pub fn fix_sign(&mut self) {
        let s = sign_convention(&self.amplitudes);
        if s < 0.0 {
            for a in &mut self.amplitudes {
                *a = -*a;
            }
        }
    }

    /// Overlap over -N..N with another even vector on the same grid (guarded beams skipped).
    pub fn overlap(&self, other: &[f64]) -> f64 {
        let mut s = 0.0;
        for (n, (&a, &b)) in self.amplitudes.iter().zip(other).enumerate() {
            if self.guarded[n] {
                continue;
            }
            s += if n == 0 { a * b } else { 2.0 * a * b };
        }
        s
    }
}

pub fn even_norm_sq(b: &[f64]) -> f64 {
    match b.split_first() {
        None => 0.0,
        Some((b0, rest)) => b0 * b0 + 2.0 * rest.iter().map(|v| v * v).sum::<f64>(),
    }
}

/// +1 or -1: the factor that makes B_0 >= 0 (largest component if |B_0| < 1e-12).
pub fn sign_convention(b: &[f64]) -> f64 {
    if b.is_empty() {
        return 1.0;
    }
    if b[0].abs() >= 1e-12 {
        return b[0].signum();
    }
    let big = b
        .iter()
        .copied()
        .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if big < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Depth conversion: the harmonic small-oscillation period of the wells is 2 pi in the
/// classical time tau = sqrt(2 Lambda) zeta.
pub fn zeta_from_harmonic(lambda: f64, tau: f64) -> f64 {
    tau / (2.0 * lambda).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_examples() {
        assert_eq!(choose_truncation(12500.0, 1.0).unwrap(), 169);
        assert_eq!(choose_truncation(0.5, 1.0).unwrap(), 11);
        assert_eq!(choose_truncation(12500.0, 1.3).unwrap(), 216);
        assert!(choose_truncation(-1.0, 1.3).is_err());
        assert!(choose_truncation(1.0, 0.5).is_err());
    }

    #[test]
    fn guarded_amplitude_is_not_a_number() {
        let w = BlochWave::with_guards(1.0, 0.0, vec![1.0, 2.0], vec![false, true]);
        assert_eq!(w.amplitude(1), Err(Error::Guarded(1)));
        assert!(w.values().is_err());
    }
}
