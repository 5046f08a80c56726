//! Particle-production spectra over a grid of Laplacian eigenvalues.

use super::background::FLRWBackground;
use super::flow::{evolve_mode_heisenberg, FlowPath, ModeRun};
use super::mode::{mode_parameters, WEIGHT_CONVENTION};
use super::schrodinger::{evolve_mode_schrodinger, mode_state_from, SchrodingerOptions};
use super::solver::SolverOptions;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectrumMethod {
    Heisenberg,
    /// Heisenberg plus a vacuum Schrödinger run for the norm-drift column.
    WithSchrodinger { cutoff: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub method: SpectrumMethod,
    pub path: FlowPath,
    pub solver: SolverOptions,
    /// Worker threads; `0` uses the rayon default.
    pub workers: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            method: SpectrumMethod::Heisenberg,
            path: FlowPath::Chain,
            solver: SolverOptions::default(),
            workers: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub lambda: f64,
    pub absv2: f64,
    pub n_expect: f64,
    /// NaN when no Schrödinger run was requested.
    pub norm_drift: f64,
    pub ccr_residual: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub rows: Vec<SpectrumRow>,
    #[serde(skip)]
    pub runs: Vec<Option<ModeRun>>,
}

impl Spectrum {
    pub fn complete(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }

    /// CSV with `#`-prefixed metadata lines and columns
    /// `lambda,absv2,n_expect,norm_drift,ccr_residual`.
    pub fn write_csv(&self, path: &Path, meta: &[(String, String)]) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        for (k, v) in meta {
            writeln!(file, "# {k}: {v}")?;
        }
        writeln!(file, "# {WEIGHT_CONVENTION}")?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["lambda", "absv2", "n_expect", "norm_drift", "ccr_residual"]).map_err(csv_err)?;
        for r in &self.rows {
            let cells = [r.lambda, r.absv2, r.n_expect, r.norm_drift, r.ccr_residual].map(|v| format!("{v:e}"));
            w.write_record(&cells).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

fn one_mode(bg: &FLRWBackground, lambda: f64, tspan: (f64, f64), opts: &SpectrumOptions) -> Result<(SpectrumRow, ModeRun)> {
    let run = evolve_mode_heisenberg(bg, lambda, tspan, opts.path, &opts.solver)?;
    let norm_drift = match opts.method {
        SpectrumMethod::Heisenberg => f64::NAN,
        SpectrumMethod::WithSchrodinger { cutoff } => {
            let delta = mode_parameters(bg, lambda, tspan.0)?.delta;
            let vac = mode_state_from(&[Complex64::new(1.0, 0.0)], delta, cutoff)?;
            let so = SchrodingerOptions { cutoff, solver: opts.solver, ..SchrodingerOptions::default() };
            evolve_mode_schrodinger(bg, lambda, &vac, tspan, &so)?.max_norm_drift()
        }
    };
    let row = SpectrumRow {
        lambda,
        absv2: run.final_v2(),
        n_expect: run.final_occupation(),
        norm_drift,
        ccr_residual: run.max_ccr_residual(),
        error: None,
    };
    Ok((row, run))
}

/// Independent per-mode runs, aggregated in increasing `λ`.
pub fn particle_spectrum(
    bg: &FLRWBackground,
    lambdas: &[f64],
    tspan: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<Spectrum> {
    if lambdas.is_empty() {
        return Err(Error::Config("λ grid is empty".into()));
    }
    let mut grid = lambdas.to_vec();
    grid.sort_by(|a, b| a.total_cmp(b));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| grid.par_iter().map(|&l| (l, one_mode(bg, l, tspan, opts))).collect());
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for (lambda, r) in results {
        match r {
            Ok((row, run)) => {
                rows.push(row);
                runs.push(Some(run));
            }
            Err(e) => {
                rows.push(SpectrumRow {
                    lambda,
                    absv2: f64::NAN,
                    n_expect: f64::NAN,
                    norm_drift: f64::NAN,
                    ccr_residual: f64::NAN,
                    error: Some(e.to_string()),
                });
                runs.push(None);
            }
        }
    }
    Ok(Spectrum { rows, runs })
}
