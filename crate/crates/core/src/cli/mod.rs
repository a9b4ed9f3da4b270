//! Command-line front end: eigenvalue tables, Bloch-wave dumps, farfield patterns, a
//! validation run and the physical-parameter helper.

pub mod output;

use crate::compare::compare_waves;
use crate::diffraction::{
    integrate_rn, max_intensity_difference, oracle_full_basis, propagate_spectral,
    semiclassical_basis, superposition_coefficients, FarfieldPattern, RnTolerance,
};
use crate::error::{Error, Result};
use crate::rn_oracle::{
    eigensolve_even, eigenvalues_even, truncation_shift, EigenSolution, DOUBLING_TOL,
};
use crate::separatrix::{
    classify, join_is_clear, matching_sides, modified_eigenvalue, separatrix_wave,
};
use crate::types::{zeta_from_harmonic, BlochWave, Method, ModelParams, Regime, DEFAULT_MARGIN};
use crate::uniform_bound::{t_of_beta, uniform_eigenvector};
use crate::wkb_core::{bohr_sommerfeld_eigenvalue, wkb_eigenvector, DEFAULT_GUARD_BEAMS};
use clap::{Parser, Subcommand, ValueEnum};
use output::{to_csv, to_json, CsvRow, Field};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::PathBuf;

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaUnit {
    /// zeta as it appears in the Raman-Nath equations.
    Rn,
    /// Classical time sqrt(2 Lambda) zeta; the harmonic period of the wells is 2 pi.
    Harmonic,
}

#[derive(Debug, Parser)]
#[command(
    name = "mathieu-rn",
    version,
    about = "Semiclassical Mathieu eigenvalues, Bloch waves and Raman-Nath diffraction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Truncation margin: N = ceil(margin sqrt(2 Lambda)) + 10.
    #[arg(long, global = true, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
    /// Absolute tolerance on modified eigenvalues.
    #[arg(long = "tol-eig", global = true, default_value_t = 1e-9)]
    pub tol_eig: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical, Bohr-Sommerfeld and modified eigenvalues for even states.
    Eigenvalues {
        #[arg(long)]
        lambda: f64,
        /// Even state indices; all bound states when absent.
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
    },
    /// Approximate Bloch waves beside the matrix eigenvectors.
    Blochwave {
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        j: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Turning-point guard half width for method wkb, in beams.
        #[arg(long, default_value_t = DEFAULT_GUARD_BEAMS)]
        guard: f64,
    },
    /// Farfield beam intensities after depth zeta.
    Farfield {
        #[arg(long)]
        lambda: f64,
        /// Depths; accepts forms such as 0.5pi, pi/2, 3pi/2 or 1.25.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_zeta)]
        zeta: Vec<f64>,
        #[arg(long, value_enum, default_value_t = ZetaUnit::Rn)]
        zeta_unit: ZetaUnit,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Free states added to the semiclassical basis.
        #[arg(long, default_value_t = 2)]
        free_states: usize,
        /// Integrate the Raman-Nath equations directly instead of summing over Bloch waves.
        #[arg(long)]
        ode: bool,
        /// Add the matrix-basis intensity beside each beam.
        #[arg(long)]
        compare: bool,
    },
    /// Runs the built-in consistency checks; exits with 3 if any fails.
    Validate {
        #[arg(long, default_value_t = 12500.0)]
        lambda: f64,
        /// States to check; the near-separatrix states and two free states when absent.
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
    },
    /// Lambda = m V0 / (4 hbar^2 K^2).
    Lambda {
        #[arg(long)]
        v0: f64,
        #[arg(long)]
        kwave: f64,
        #[arg(long)]
        mass: f64,
        #[arg(long, default_value_t = HBAR_SI)]
        hbar: f64,
    },
}

/// Rendered output and the number of failed checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub failures: usize,
}

/// Parses a depth such as `pi`, `0.5pi`, `3pi/2`, `-pi/4` or `1.25`.
pub fn parse_zeta(s: &str) -> std::result::Result<f64, String> {
    let t: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace('π', "pi");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (
            a,
            b.parse::<f64>()
                .map_err(|_| format!("bad denominator in '{s}'"))?,
        ),
        None => (t.as_str(), 1.0),
    };
    let v = match num.strip_suffix("pi") {
        Some("") | Some("+") => PI,
        Some("-") => -PI,
        Some(c) => {
            c.trim_end_matches('*')
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient in '{s}'"))?
                * PI
        }
        None => num
            .parse::<f64>()
            .map_err(|_| format!("cannot read '{s}' as a depth"))?,
    };
    let z = v / den;
    if !z.is_finite() {
        return Err(format!("depth '{s}' is not finite"));
    }
    Ok(z)
}

/// Lambda = m V0 / (4 hbar^2 K^2); every input must be positive.
pub fn lambda_from_physical(v0: f64, kwave: f64, mass: f64, hbar: f64) -> Result<f64> {
    for (name, v) in [("v0", v0), ("kwave", kwave), ("mass", mass), ("hbar", hbar)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Usage(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(mass * v0 / (4.0 * hbar * hbar * kwave * kwave))
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::BoundWell => "bound-well",
        Regime::NearSeparatrixUnderdense => "near-separatrix-underdense",
        Regime::FreeOverdense => "free-overdense",
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Numerical => "numerical",
        Method::Wkb => "wkb",
        Method::Uniform => "uniform",
        Method::Separatrix => "separatrix",
        Method::Auto => "auto",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub j: usize,
    pub regime: Regime,
    pub beta_numerical: f64,
    /// None when the single well has no root for this j.
    pub beta_bohr_sommerfeld: Option<f64>,
    /// None deep in the well, where the modified condition reduces to Bohr-Sommerfeld.
    pub beta_modified: Option<f64>,
}

impl CsvRow for EigenRow {
    const HEADER: &'static [&'static str] = &[
        "j",
        "regime",
        "beta_numerical",
        "beta_bohr_sommerfeld",
        "beta_modified",
    ];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.j as i64),
            Field::Text(regime_name(self.regime).into()),
            Field::Float(self.beta_numerical),
            Field::Opt(self.beta_bohr_sommerfeld),
            Field::Opt(self.beta_modified),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamRow {
    pub j: usize,
    pub n: usize,
    pub y: f64,
    /// None inside a guard band.
    pub b_method: Option<f64>,
    pub b_oracle: f64,
    pub abs_diff: Option<f64>,
    pub guarded: bool,
}

impl CsvRow for BeamRow {
    const HEADER: &'static [&'static str] =
        &["j", "n", "y", "b_method", "b_oracle", "abs_diff", "guarded"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.j as i64),
            Field::Int(self.n as i64),
            Field::Float(self.y),
            Field::Opt(self.b_method),
            Field::Float(self.b_oracle),
            Field::Opt(self.abs_diff),
            Field::Bool(self.guarded),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamSummary {
    pub j: usize,
    pub method: Method,
    pub beta_method: f64,
    pub beta_oracle: f64,
    pub max_dev_over_peak: f64,
    pub rms_dev: f64,
    pub crossings_method: usize,
    pub crossings_oracle: usize,
}

impl BeamSummary {
    fn comment(&self) -> String {
        format!(
            "j={} method={} beta_method={} beta_oracle={} max_dev_over_peak={} rms_dev={} crossings_method={} crossings_oracle={}",
            self.j,
            method_name(self.method),
            output::fmt_g12(self.beta_method),
            output::fmt_g12(self.beta_oracle),
            output::fmt_g12(self.max_dev_over_peak),
            output::fmt_g12(self.rms_dev),
            self.crossings_method,
            self.crossings_oracle
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochwaveOutput {
    pub summary: Vec<BeamSummary>,
    pub rows: Vec<BeamRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarfieldRow {
    /// Depth in Raman-Nath units.
    pub zeta: f64,
    pub n: i64,
    pub y: f64,
    pub intensity: f64,
    pub intensity_oracle: Option<f64>,
}

impl CsvRow for FarfieldRow {
    const HEADER: &'static [&'static str] = &["zeta", "n", "y", "intensity", "intensity_oracle"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Float(self.zeta),
            Field::Int(self.n),
            Field::Float(self.y),
            Field::Float(self.intensity),
            Field::Opt(self.intensity_oracle),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarfieldSummary {
    pub zeta: f64,
    pub total: f64,
    pub parity_defect: f64,
    /// Weight of the incident wave missing from the basis; None for direct integration.
    pub completeness_deficit: Option<f64>,
    pub max_diff_oracle: Option<f64>,
}

impl FarfieldSummary {
    fn comment(&self) -> String {
        let opt = |v: Option<f64>| v.map(output::fmt_g12).unwrap_or_default();
        format!(
            "zeta={} total={} parity_defect={} completeness_deficit={} max_diff_oracle={}",
            output::fmt_g12(self.zeta),
            output::fmt_g12(self.total),
            output::fmt_g12(self.parity_defect),
            opt(self.completeness_deficit),
            opt(self.max_diff_oracle)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarfieldOutput {
    pub summary: Vec<FarfieldSummary>,
    pub rows: Vec<FarfieldRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateRow {
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CsvRow for ValidateRow {
    const HEADER: &'static [&'static str] = &["check", "value", "tolerance", "pass"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Text(self.check.clone()),
            Field::Float(self.value),
            Field::Float(self.tolerance),
            Field::Bool(self.pass),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub v0: f64,
    pub kwave: f64,
    pub mass: f64,
    pub hbar: f64,
    pub lambda: f64,
}

impl CsvRow for LambdaRow {
    const HEADER: &'static [&'static str] = &["v0", "kwave", "mass", "hbar", "lambda"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Float(self.v0),
            Field::Float(self.kwave),
            Field::Float(self.mass),
            Field::Float(self.hbar),
            Field::Float(self.lambda),
        ]
    }
}

fn check_j(j: usize, states: usize) -> Result<()> {
    if j % 2 != 0 || j / 2 >= states {
        return Err(Error::Usage(format!(
            "j = {j} must be even and at most {}",
            2 * (states - 1)
        )));
    }
    Ok(())
}

fn check_config(cli: &Cli) -> Result<()> {
    if !(cli.tol_eig > 0.0) {
        return Err(Error::Usage(format!(
            "--tol-eig must be positive, got {}",
            cli.tol_eig
        )));
    }
    if !(cli.margin >= 1.0) {
        return Err(Error::Usage(format!(
            "--margin must be at least 1, got {}",
            cli.margin
        )));
    }
    Ok(())
}

fn model(lambda: f64, margin: f64) -> Result<ModelParams> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Usage(format!(
            "--lambda must be positive, got {lambda}"
        )));
    }
    ModelParams::new(lambda, margin)
}

/// Rows of the eigenvalue comparison table.
pub fn eigenvalue_rows(
    lambda: f64,
    js: &[usize],
    margin: f64,
    tol_eig: f64,
) -> Result<Vec<EigenRow>> {
    let params = model(lambda, margin)?;
    let shift = truncation_shift(&params)?;
    if shift > DOUBLING_TOL {
        return Err(Error::Convergence(format!(
            "bound eigenvalues move by {shift:e} when N is doubled"
        )));
    }
    let vals = eigenvalues_even(&params)?;
    let js: Vec<usize> = if js.is_empty() {
        (0..vals.iter().filter(|b| **b < 1.0).count())
            .map(|k| 2 * k)
            .collect()
    } else {
        js.to_vec()
    };
    let xtol = (1e-3 * tol_eig).max(1e-15);
    js.iter()
        .map(|&j| {
            check_j(j, vals.len())?;
            let (regime, _) = classify(lambda, j)?;
            let beta_modified = match regime {
                Regime::BoundWell => None,
                _ => Some(modified_eigenvalue(lambda, j, xtol)?.beta),
            };
            Ok(EigenRow {
                j,
                regime,
                beta_numerical: vals[j / 2],
                beta_bohr_sommerfeld: bohr_sommerfeld_eigenvalue(lambda, j).ok(),
                beta_modified,
            })
        })
        .collect()
}

/// Approximate Bloch wave for even state j by the requested method; `auto` takes the uniform
/// approximation in the bound well and the joined construction otherwise, keeping the uniform one
/// where the join window is not clear of the outer turning point.
pub fn approximate_wave(
    lambda: f64,
    j: usize,
    method: Method,
    sol: &EigenSolution,
    guard: f64,
    tol_eig: f64,
) -> Result<(Method, BlochWave)> {
    let n_max = sol.params.truncation_n;
    if method == Method::Auto {
        return match classify(lambda, j)?.0 {
            Regime::BoundWell => approximate_wave(lambda, j, Method::Uniform, sol, guard, tol_eig),
            Regime::FreeOverdense => {
                approximate_wave(lambda, j, Method::Separatrix, sol, guard, tol_eig)
            }
            Regime::NearSeparatrixUnderdense => {
                let beta = modified_eigenvalue(lambda, j, (1e-3 * tol_eig).max(1e-15))?.beta;
                let m = if join_is_clear(lambda, beta) {
                    Method::Separatrix
                } else {
                    Method::Uniform
                };
                approximate_wave(lambda, j, m, sol, guard, tol_eig)
            }
        };
    }
    let single_well = || {
        bohr_sommerfeld_eigenvalue(lambda, j).map_err(|_| {
            Error::Domain(format!(
                "j = {j} has no single-well root; use method separatrix"
            ))
        })
    };
    let wave = match method {
        Method::Numerical => sol.wave(j)?,
        Method::Wkb => wkb_eigenvector(lambda, single_well()?, n_max, guard)?,
        Method::Uniform => {
            let mut w = uniform_eigenvector(lambda, j, single_well()?, n_max)?;
            w.renormalize();
            w
        }
        Method::Separatrix => {
            let root = modified_eigenvalue(lambda, j, (1e-3 * tol_eig).max(1e-15))?;
            separatrix_wave(lambda, root.beta, n_max)?.0
        }
        Method::Auto => unreachable!("auto resolved above"),
    };
    Ok((method, wave))
}

/// Values of `wave` on its available beams, with the overall sign of `reference`.
fn aligned(wave: &BlochWave, reference: &[f64]) -> Vec<Option<f64>> {
    let a: Vec<Option<f64>> = (0..reference.len())
        .map(|n| wave.amplitude(n).ok())
        .collect();
    let dot: f64 = a
        .iter()
        .zip(reference)
        .enumerate()
        .filter_map(|(n, (v, r))| v.map(|v| if n == 0 { v * r } else { 2.0 * v * r }))
        .sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    a.into_iter().map(|v| v.map(|v| s * v)).collect()
}

pub fn blochwave_output(
    cli: &Cli,
    lambda: f64,
    js: &[usize],
    method: Method,
    guard: f64,
) -> Result<BlochwaveOutput> {
    let params = model(lambda, cli.margin)?;
    let sol = eigensolve_even(&params)?;
    let mut out = BlochwaveOutput {
        summary: Vec::new(),
        rows: Vec::new(),
    };
    for &j in js {
        let idx = sol.index_of(j)?;
        let reference = &sol.basis[idx];
        let (used, wave) = approximate_wave(lambda, j, method, &sol, guard, cli.tol_eig)?;
        let cmp = compare_waves(&wave, reference, !wave.has_guards());
        out.summary.push(BeamSummary {
            j,
            method: used,
            beta_method: wave.beta,
            beta_oracle: sol.states[idx].beta,
            max_dev_over_peak: cmp.max_dev_over_peak,
            rms_dev: cmp.rms_dev,
            crossings_method: cmp.crossings_approx,
            crossings_oracle: cmp.crossings_reference,
        });
        for (n, (b, r)) in aligned(&wave, reference)
            .into_iter()
            .zip(reference)
            .enumerate()
        {
            out.rows.push(BeamRow {
                j,
                n,
                y: wave.y(n),
                b_method: b,
                b_oracle: *r,
                abs_diff: b.map(|b| (b - r).abs()),
                guarded: b.is_none(),
            });
        }
    }
    Ok(out)
}

fn spectral(basis: &[BlochWave], zetas: &[f64]) -> Result<(Vec<FarfieldPattern>, f64)> {
    let sup = superposition_coefficients(basis)?;
    let pats = zetas
        .iter()
        .map(|&z| propagate_spectral(basis, &sup.coefficients, z))
        .collect::<Result<Vec<_>>>()?;
    Ok((pats, sup.completeness_deficit))
}

#[allow(clippy::too_many_arguments)]
pub fn farfield_output(
    cli: &Cli,
    lambda: f64,
    zetas: &[f64],
    unit: ZetaUnit,
    method: Method,
    free_states: usize,
    ode: bool,
    compare: bool,
) -> Result<FarfieldOutput> {
    let params = model(lambda, cli.margin)?;
    let n_max = params.truncation_n;
    let zetas: Vec<f64> = zetas
        .iter()
        .map(|&z| match unit {
            ZetaUnit::Rn => z,
            ZetaUnit::Harmonic => zeta_from_harmonic(lambda, z),
        })
        .collect();
    if let Some(z) = zetas.iter().find(|z| !(**z >= 0.0)) {
        return Err(Error::Usage(format!(
            "depths must be non-negative, got {z}"
        )));
    }
    let oracle = if compare || (!ode && method == Method::Numerical) {
        Some(oracle_full_basis(&eigensolve_even(&params)?))
    } else {
        None
    };
    let (patterns, deficit) = if ode {
        let mut order: Vec<usize> = (0..zetas.len()).collect();
        order.sort_by(|a, b| zetas[*a].partial_cmp(&zetas[*b]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&k| zetas[k]).collect();
        let traj = integrate_rn(lambda, &sorted, n_max, RnTolerance::default())?;
        let mut pats = vec![None; zetas.len()];
        for (k, p) in order.into_iter().zip(traj.samples) {
            pats[k] = Some(p);
        }
        (
            pats.into_iter()
                .map(|p| p.expect("every depth sampled"))
                .collect(),
            None,
        )
    } else {
        let (p, d) = match method {
            Method::Numerical => spectral(oracle.as_ref().expect("oracle basis built"), &zetas)?,
            Method::Wkb => {
                return Err(Error::Usage(
                    "method wkb has guarded beams; use uniform, separatrix or auto".into(),
                ))
            }
            _ => spectral(&semiclassical_basis(lambda, n_max, free_states)?, &zetas)?,
        };
        (p, Some(d))
    };
    let reference = match &oracle {
        Some(b) if compare => Some(spectral(b, &zetas)?.0),
        _ => None,
    };
    let mut out = FarfieldOutput {
        summary: Vec::new(),
        rows: Vec::new(),
    };
    for (k, p) in patterns.iter().enumerate() {
        let r = reference.as_ref().map(|r| &r[k]);
        out.summary.push(FarfieldSummary {
            zeta: p.zeta,
            total: p.total(),
            parity_defect: p.parity_defect(),
            completeness_deficit: deficit,
            max_diff_oracle: r.map(|r| max_intensity_difference(p, r)),
        });
        let n = p.n_max as i64;
        for b in -n..=n {
            out.rows.push(FarfieldRow {
                zeta: p.zeta,
                n: b,
                y: p.y(b),
                intensity: p.intensity(b),
                intensity_oracle: r.map(|r| r.intensity(b)),
            });
        }
    }
    Ok(out)
}

fn row(check: String, value: f64, tolerance: f64) -> ValidateRow {
    ValidateRow {
        pass: value <= tolerance,
        check,
        value,
        tolerance,
    }
}

/// Consistency checks at one Lambda: truncation stability, quantisation exactness, the
/// matching identity, eigenvector fidelity and unitarity.
pub fn validate_rows(
    lambda: f64,
    js: &[usize],
    margin: f64,
    tol_eig: f64,
) -> Result<Vec<ValidateRow>> {
    let params = model(lambda, margin)?;
    let mut rows = vec![row(
        "truncation_doubling_shift".into(),
        truncation_shift(&params)?,
        DOUBLING_TOL,
    )];
    let sol = eigensolve_even(&params)?;
    let bound = sol.bound_state_count();

    let mut worst_t: f64 = 0.0;
    let mut j = 0;
    while let Ok(b) = bohr_sommerfeld_eigenvalue(lambda, j) {
        worst_t = worst_t.max((t_of_beta(lambda, b)? - (2 * j + 1) as f64).abs());
        j += 2;
    }
    rows.push(row("bohr_sommerfeld_t_exactness".into(), worst_t, 1e-8));

    let js: Vec<usize> = if js.is_empty() {
        let first = (0..bound).map(|k| 2 * k).find(|&j| {
            classify(lambda, j)
                .map(|c| c.0 != Regime::BoundWell)
                .unwrap_or(true)
        });
        let first = first.unwrap_or(2 * bound);
        (first..2 * bound + 4)
            .step_by(2)
            .filter(|&j| j / 2 < sol.states.len())
            .collect()
    } else {
        js.to_vec()
    };
    let xtol = (1e-3 * tol_eig).max(1e-15);
    for &j in &js {
        let idx = sol.index_of(j)?;
        let (regime, _) = classify(lambda, j)?;
        if regime != Regime::BoundWell {
            let root = modified_eigenvalue(lambda, j, xtol)?;
            let miracle = matching_sides(lambda, &root)?
                .iter()
                .map(|(_, l, r)| (l - r).abs())
                .fold(0.0, f64::max);
            rows.push(row(format!("matching_identity_j{j}"), miracle, 1e-6));
        }
        let (_, wave) =
            approximate_wave(lambda, j, Method::Auto, &sol, DEFAULT_GUARD_BEAMS, tol_eig)?;
        let cmp = compare_waves(&wave, &sol.basis[idx], true);
        let tol = if regime == Regime::FreeOverdense {
            0.03
        } else {
            0.02
        };
        rows.push(row(
            format!("eigenvector_max_dev_j{j}"),
            cmp.max_dev_over_peak,
            tol,
        ));
        rows.push(row(
            format!("zero_crossing_difference_j{j}"),
            (cmp.crossings_approx as f64 - cmp.crossings_reference as f64).abs(),
            0.0,
        ));
    }

    let basis = oracle_full_basis(&sol);
    let z = zeta_from_harmonic(lambda, PI);
    let (p, _) = spectral(&basis, &[z])?;
    rows.push(row(
        "spectral_unitarity_drift".into(),
        (p[0].total() - 1.0).abs(),
        1e-10,
    ));
    Ok(rows)
}

fn render<R: CsvRow + Serialize>(
    format: Format,
    rows: &[R],
    comments: &[String],
) -> Result<String> {
    match format {
        Format::Csv => Ok(to_csv(rows, comments)),
        Format::Json => to_json(&rows),
    }
}

/// Executes one command and renders its output.
pub fn run(cli: &Cli) -> Result<Report> {
    check_config(cli)?;
    let mut failures = 0;
    let text = match &cli.command {
        Command::Eigenvalues { lambda, j } => {
            let rows = eigenvalue_rows(*lambda, j, cli.margin, cli.tol_eig)?;
            let n = model(*lambda, cli.margin)?.truncation_n;
            render(
                cli.format,
                &rows,
                &[format!("lambda={} N={n}", output::fmt_g12(*lambda))],
            )?
        }
        Command::Blochwave {
            lambda,
            j,
            method,
            guard,
        } => {
            let out = blochwave_output(cli, *lambda, j, *method, *guard)?;
            match cli.format {
                Format::Csv => to_csv(
                    &out.rows,
                    &out.summary
                        .iter()
                        .map(BeamSummary::comment)
                        .collect::<Vec<_>>(),
                ),
                Format::Json => to_json(&out)?,
            }
        }
        Command::Farfield {
            lambda,
            zeta,
            zeta_unit,
            method,
            free_states,
            ode,
            compare,
        } => {
            let out = farfield_output(
                cli,
                *lambda,
                zeta,
                *zeta_unit,
                *method,
                *free_states,
                *ode,
                *compare,
            )?;
            match cli.format {
                Format::Csv => to_csv(
                    &out.rows,
                    &out.summary
                        .iter()
                        .map(FarfieldSummary::comment)
                        .collect::<Vec<_>>(),
                ),
                Format::Json => to_json(&out)?,
            }
        }
        Command::Validate { lambda, j } => {
            let rows = validate_rows(*lambda, j, cli.margin, cli.tol_eig)?;
            failures = rows.iter().filter(|r| !r.pass).count();
            render(cli.format, &rows, &[])?
        }
        Command::Lambda {
            v0,
            kwave,
            mass,
            hbar,
        } => {
            let lambda = lambda_from_physical(*v0, *kwave, *mass, *hbar)?;
            let rows = [LambdaRow {
                v0: *v0,
                kwave: *kwave,
                mass: *mass,
                hbar: *hbar,
                lambda,
            }];
            render(cli.format, &rows, &[])?
        }
    };
    Ok(Report { text, failures })
}
