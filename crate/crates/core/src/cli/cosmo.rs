use super::{Meta, OutDir, Outcome, Overrides};
use crate::cosmo::{
    compare_paths, particle_spectrum, FLRWBackground, FlowPath, Profile, SolverOptions, SpectrumMethod, SpectrumOptions,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Named backgrounds with fixed parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `a = 1`.
    Constant,
    /// `a` from 1 to 2 around `t = 5` with width 1.
    Tanh,
    /// `a = e^{0.5 t}`.
    DeSitter,
}

impl Preset {
    pub fn profile(self) -> Profile {
        match self {
            Preset::Constant => Profile::Constant { a0: 1.0 },
            Preset::Tanh => Profile::Tanh { a_initial: 1.0, a_final: 2.0, t_mid: 5.0, width: 1.0 },
            Preset::DeSitter => Profile::DeSitter { a0: 1.0, hubble: 0.5 },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CosmoConfig {
    pub mass: f64,
    pub curvature: i8,
    pub volume: f64,
    /// Exactly one of `preset`, `profile` and `tabulated` selects `a(t)`.
    pub preset: Option<Preset>,
    pub profile: Option<Profile>,
    /// CSV with columns `t,a`, relative to the config file.
    pub tabulated: Option<PathBuf>,
    pub t_span: [f64; 2],
    pub lambdas: Option<Vec<f64>>,
    pub lambda_grid: Option<LambdaGrid>,
    pub path: FlowPath,
    /// Adds a vacuum Schrödinger run per mode at this cutoff.
    pub schrodinger_cutoff: Option<usize>,
    pub solver: SolverOptions,
    pub workers: usize,
    /// Time nodes per mode in the consistency report.
    pub consistency_nodes: usize,
    pub write_modes: bool,
    /// Largest accepted Schrödinger norm drift.
    pub norm_tolerance: f64,
    /// Largest accepted CCR residual on the chain path; the matrix path only reports it.
    pub ccr_tolerance: f64,
}

impl Default for CosmoConfig {
    fn default() -> Self {
        CosmoConfig {
            mass: 1.0,
            curvature: 0,
            volume: 1.0,
            preset: None,
            profile: None,
            tabulated: None,
            t_span: [0.0, 10.0],
            lambdas: None,
            lambda_grid: None,
            path: FlowPath::Chain,
            schrodinger_cutoff: None,
            solver: SolverOptions::default(),
            workers: 0,
            consistency_nodes: 10,
            write_modes: true,
            norm_tolerance: 1e-6,
            ccr_tolerance: 1e-6,
        }
    }
}

impl CosmoConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.cutoff {
            self.schrodinger_cutoff = Some(n);
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
    }

    /// Resolves relative paths against the directory of the config file.
    pub fn rebase(&mut self, config_dir: &Path) {
        if let Some(p) = &self.tabulated {
            if p.is_relative() {
                self.tabulated = Some(config_dir.join(p));
            }
        }
    }

    pub fn background(&self) -> Result<FLRWBackground> {
        let chosen = [self.preset.is_some(), self.profile.is_some(), self.tabulated.is_some()];
        let profile = match chosen.iter().filter(|&&b| b).count() {
            0 => Preset::Tanh.profile(),
            1 => {
                if let Some(p) = self.preset {
                    p.profile()
                } else if let Some(p) = &self.profile {
                    p.clone()
                } else {
                    read_profile(self.tabulated.as_deref().unwrap())?
                }
            }
            _ => return Err(Error::Config("set only one of `preset`, `profile`, `tabulated`".into())),
        };
        let bg = FLRWBackground { curvature: self.curvature, mass: self.mass, profile, volume: self.volume };
        bg.validate()?;
        Ok(bg)
    }

    pub fn lambdas(&self) -> Result<Vec<f64>> {
        match (&self.lambdas, &self.lambda_grid) {
            (Some(_), Some(_)) => Err(Error::Config("set `lambdas` or `lambda_grid`, not both".into())),
            (Some(l), None) => Ok(l.clone()),
            (None, Some(g)) => {
                if g.count == 0 || !(g.min < g.max) && g.count > 1 {
                    return Err(Error::Config("`lambda_grid` needs min < max and count ≥ 1".into()));
                }
                let step = if g.count > 1 { (g.max - g.min) / (g.count - 1) as f64 } else { 0.0 };
                Ok((0..g.count).map(|i| g.min + step * i as f64).collect())
            }
            (None, None) => Ok((1..=20).map(|i| 0.25 * i as f64).collect()),
        }
    }
}

/// Two-column `t,a` CSV; `#` lines are comments.
pub fn read_profile(path: &Path) -> Result<Profile> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let (mut t, mut a) = (Vec::new(), Vec::new());
    for (i, rec) in reader.deserialize::<(f64, f64)>().enumerate() {
        let (x, y) = rec.map_err(|e| Error::Config(format!("{} row {}: {e}", path.display(), i + 1)))?;
        t.push(x);
        a.push(y);
    }
    Profile::tabulated(t, a).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct Diagnostics {
    modes: usize,
    failed_modes: Vec<(f64, String)>,
    max_absv2: f64,
    max_norm_drift: Option<f64>,
    max_ccr_residual: f64,
    pass: bool,
}

pub fn cmd_cosmo(cfg: &CosmoConfig, seed: Option<u64>, out: &Path) -> Result<Outcome> {
    let bg = cfg.background()?;
    let lambdas = cfg.lambdas()?;
    let span = (cfg.t_span[0], cfg.t_span[1]);
    let opts = SpectrumOptions {
        method: match cfg.schrodinger_cutoff {
            Some(cutoff) => SpectrumMethod::WithSchrodinger { cutoff },
            None => SpectrumMethod::Heisenberg,
        },
        path: cfg.path,
        solver: cfg.solver,
        workers: cfg.workers,
    };
    let spectrum = particle_spectrum(&bg, &lambdas, span, &opts)?;
    let consistency = compare_paths(&bg, &lambdas, span, cfg.consistency_nodes, &cfg.solver);

    let meta = Meta::new("cosmo run", seed, cfg)?;
    let dir = OutDir::create(out)?;
    let mut files = Vec::new();
    let csv = dir.path("spectrum.csv");
    let mut header = meta.header_lines();
    header.push(("solver".into(), serde_json::to_string(&cfg.solver)?));
    spectrum.write_csv(&csv, &header)?;
    files.push(csv);
    if cfg.write_modes {
        for (i, run) in spectrum.runs.iter().enumerate() {
            if let Some(run) = run {
                files.push(dir.write_json(&format!("modes/mode-{i:04}.json"), &meta, &run.to_json())?);
            }
        }
    }
    let consistency = match consistency {
        Ok(r) => serde_json::to_value(r)?,
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    files.push(dir.write_json("consistency.json", &meta, &consistency)?);

    let failed_modes: Vec<(f64, String)> =
        spectrum.rows.iter().filter_map(|r| r.error.clone().map(|e| (r.lambda, e))).collect();
    let ok_rows = || spectrum.rows.iter().filter(|r| r.error.is_none());
    let max_absv2 = ok_rows().map(|r| r.absv2).fold(0.0, f64::max);
    let max_norm_drift = cfg.schrodinger_cutoff.map(|_| ok_rows().map(|r| r.norm_drift).fold(0.0, f64::max));
    let max_ccr_residual = ok_rows().map(|r| r.ccr_residual).fold(0.0, f64::max);
    let norm_ok = max_norm_drift.is_none_or(|d| d < cfg.norm_tolerance);
    let ccr_ok = cfg.path == FlowPath::Matrix || max_ccr_residual < cfg.ccr_tolerance;
    let pass = failed_modes.is_empty() && norm_ok && ccr_ok;
    let diagnostics =
        Diagnostics { modes: spectrum.rows.len(), failed_modes: failed_modes.clone(), max_absv2, max_norm_drift, max_ccr_residual, pass };
    files.push(dir.write_json("diagnostics.json", &meta, &diagnostics)?);

    let mut summary = vec![format!("{} modes, max |v|² = {max_absv2:.6e}", spectrum.rows.len())];
    for (l, e) in &failed_modes {
        summary.push(format!("FAIL mode λ = {l}: {e}"));
    }
    if let Some(d) = max_norm_drift {
        summary.push(format!("{} Schrödinger norm drift {d:.3e} (tol {:.0e})", if norm_ok { "pass" } else { "FAIL" }, cfg.norm_tolerance));
    }
    let status = match (cfg.path, ccr_ok) {
        (FlowPath::Matrix, _) => "info",
        (_, true) => "pass",
        (_, false) => "FAIL",
    };
    summary.push(format!("{status} CCR residual {max_ccr_residual:.3e} (tol {:.0e})", cfg.ccr_tolerance));
    Ok(Outcome { files, pass, summary })
}
