//! Exact reference: the truncated stationary Raman-Nath matrix in the even sector,
//! diagonalised by implicit-shift QL.
//!
//! The even sector is folded onto n = 0..N with b_0 = B_0 and b_n = sqrt2 B_n, which makes
//! the reduced matrix symmetric; the (0,1) coupling then carries the extra sqrt2.

use crate::error::{Error, Result};
use crate::types::{sign_convention, BlochWave, Eigenstate, Method, ModelParams};
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

/// Symmetric tridiagonal matrix; `off[i]` couples rows i and i+1.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// y = T x
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }
}

/// Reduced even-sector matrix of size N+1 (energies, not yet divided by Lambda).
pub fn build_even_matrix(params: &ModelParams) -> Tridiagonal {
    let n = params.truncation_n;
    let diag = (0..=n).map(|k| (k * k) as f64).collect();
    let mut off = vec![-0.5 * params.lambda; n];
    if n > 0 {
        off[0] *= SQRT_2;
    }
    Tridiagonal { diag, off }
}

/// Odd sector (n = 1..N), used only for consistency checks.
pub fn build_odd_matrix(params: &ModelParams) -> Tridiagonal {
    let n = params.truncation_n;
    let diag = (1..=n).map(|k| (k * k) as f64).collect();
    let off = vec![-0.5 * params.lambda; n.saturating_sub(1)];
    Tridiagonal { diag, off }
}

/// Full -N..N matrix.
pub fn build_full_matrix(params: &ModelParams) -> Tridiagonal {
    let n = params.truncation_n as i64;
    let diag = (-n..=n).map(|k| (k * k) as f64).collect();
    let off = vec![-0.5 * params.lambda; 2 * n as usize];
    Tridiagonal { diag, off }
}

/// Implicit QL; returns eigenvalues ascending and, if requested, eigenvectors as rows.
pub fn tridiagonal_eigen(t: &Tridiagonal, vectors: bool) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = t.len();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = if vectors {
        (0..n)
            .map(|i| (0..n).map(|k| if i == k { 1.0 } else { 0.0 }).collect())
            .collect()
    } else {
        Vec::new()
    };
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence(format!(
                    "QL failed to converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if vectors {
                    let (lo, hi) = z.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for k in 0..n {
                        let f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vals = idx.iter().map(|&i| d[i]).collect();
    let vecs = if vectors {
        idx.iter().map(|&i| z[i].clone()).collect()
    } else {
        Vec::new()
    };
    Ok((vals, vecs))
}

/// Oracle eigenpairs in the even sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSolution {
    pub params: ModelParams,
    pub states: Vec<Eigenstate>,
    /// Physical amplitudes B_n, n = 0..N, one row per state, unit norm over -N..N.
    pub basis: Vec<Vec<f64>>,
}

impl EigenSolution {
    /// Position in `states` of even index j.
    pub fn index_of(&self, j: usize) -> Result<usize> {
        if j % 2 != 0 || j / 2 >= self.states.len() {
            return Err(Error::Usage(format!(
                "j = {j} must be even and at most {}",
                2 * (self.states.len() - 1)
            )));
        }
        Ok(j / 2)
    }

    pub fn beta(&self, j: usize) -> Result<f64> {
        Ok(self.states[self.index_of(j)?].beta)
    }

    pub fn wave(&self, j: usize) -> Result<BlochWave> {
        let i = self.index_of(j)?;
        let mut w = BlochWave::new(
            self.params.lambda,
            self.states[i].beta,
            self.basis[i].clone(),
        );
        w.renormalized = true;
        Ok(w)
    }

    /// Number of even states with beta < 1.
    pub fn bound_state_count(&self) -> usize {
        bound_state_count(self)
    }
}

pub fn bound_state_count(sol: &EigenSolution) -> usize {
    sol.states.iter().filter(|s| s.beta < 1.0).count()
}

/// Even-sector eigenvalues beta = E / Lambda only.
pub fn eigenvalues_even(params: &ModelParams) -> Result<Vec<f64>> {
    let (vals, _) = tridiagonal_eigen(&build_even_matrix(params), false)?;
    Ok(vals.into_iter().map(|e| e / params.lambda).collect())
}

/// Tolerance of the truncation-doubling check on bound eigenvalues.
pub const DOUBLING_TOL: f64 = 1e-10;

/// Largest |beta(N) - beta(2N)| over bound states.
pub fn truncation_shift(params: &ModelParams) -> Result<f64> {
    let a = eigenvalues_even(params)?;
    let doubled = ModelParams {
        truncation_n: 2 * params.truncation_n,
        ..*params
    };
    let b = eigenvalues_even(&doubled)?;
    Ok(a.iter()
        .zip(&b)
        .filter(|(x, _)| **x < 1.0)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Full even-sector solve with eigenvectors, after the truncation-doubling check.
pub fn eigensolve_even(params: &ModelParams) -> Result<EigenSolution> {
    let shift = truncation_shift(params)?;
    if shift > DOUBLING_TOL {
        return Err(Error::Convergence(format!(
            "bound eigenvalues move by {shift:e} when N is doubled from {}",
            params.truncation_n
        )));
    }
    eigensolve_even_unchecked(params)
}

pub fn eigensolve_even_unchecked(params: &ModelParams) -> Result<EigenSolution> {
    let (vals, vecs) = tridiagonal_eigen(&build_even_matrix(params), true)?;
    let mut states = Vec::with_capacity(vals.len());
    let mut basis = Vec::with_capacity(vals.len());
    for (i, (e, v)) in vals.iter().zip(vecs).enumerate() {
        let mut b: Vec<f64> = v
            .iter()
            .enumerate()
            .map(|(n, &x)| if n == 0 { x } else { x / SQRT_2 })
            .collect();
        let s = sign_convention(&b);
        if s < 0.0 {
            b.iter_mut().for_each(|x| *x = -*x);
        }
        let beta = e / params.lambda;
        states.push(Eigenstate {
            j: 2 * i,
            beta,
            energy: *e,
            regime: Eigenstate::regime_of(beta),
            method: Method::Numerical,
        });
        basis.push(b);
    }
    Ok(EigenSolution {
        params: *params,
        states,
        basis,
    })
}
