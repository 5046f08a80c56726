use super::{matrix_from_rows, Meta, OutDir, Outcome, Overrides};
use crate::error::{Error, Result};
use crate::kahler::{null_shift_structure, ComplexStructureBlocks};
use crate::transforms::{verify_web, TransformReport};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullShift {
    pub theta: Vec<Vec<f64>>,
    pub lapse: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    /// `Δ`; defaults to the 1×1 identity.
    #[serde(default)]
    pub delta: Option<Vec<Vec<f64>>>,
    /// `A`; defaults to zero.
    #[serde(default)]
    pub a: Option<Vec<Vec<f64>>>,
    /// Builds the blocks from `(Θ, N)` instead of `(A, Δ)`.
    #[serde(default)]
    pub null_shift: Option<NullShift>,
    /// Replaces `D` after completion; a negative control.
    #[serde(default)]
    pub d_override: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    /// Extra cutoffs for a residual-vs-cutoff table.
    #[serde(default)]
    pub cutoff_sweep: Vec<usize>,
}

fn default_cutoff() -> usize {
    6
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig { delta: None, a: None, null_shift: None, d_override: None, cutoff: default_cutoff(), cutoff_sweep: Vec::new() }
    }
}

impl TransformConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.cutoff {
            self.cutoff = n;
        }
    }

    pub fn blocks(&self) -> Result<ComplexStructureBlocks> {
        let constraint = |e: Error| match e {
            Error::Constraint(_) => e,
            other => Error::Constraint(other.to_string()),
        };
        let mut blocks = if let Some(ns) = &self.null_shift {
            if self.delta.is_some() || self.a.is_some() {
                return Err(Error::Config("give either `null_shift` or `delta`/`a`, not both".into()));
            }
            null_shift_structure(&matrix_from_rows("null_shift.theta", &ns.theta)?, &matrix_from_rows("null_shift.lapse", &ns.lapse)?)
                .map_err(constraint)?
        } else {
            let delta = match &self.delta {
                Some(rows) => matrix_from_rows("delta", rows)?,
                None => DMatrix::identity(1, 1),
            };
            let a = match &self.a {
                Some(rows) => matrix_from_rows("a", rows)?,
                None => DMatrix::zeros(delta.nrows(), delta.nrows()),
            };
            ComplexStructureBlocks::complete(a, delta).map_err(constraint)?
        };
        if let Some(rows) = &self.d_override {
            let d = matrix_from_rows("d_override", rows)?;
            if d.shape() != blocks.d.shape() {
                return Err(Error::Config("`d_override` has the wrong shape".into()));
            }
            blocks.d = d;
        }
        Ok(blocks)
    }
}

#[derive(Clone, Debug, Serialize)]
struct SweepRow {
    cutoff: usize,
    max_residual: f64,
    failing: usize,
}

#[derive(Clone, Debug, Serialize)]
struct TransformResult {
    pass: bool,
    reports: Vec<TransformReport>,
    sweep: Vec<SweepRow>,
}

fn max_holding(reports: &[TransformReport]) -> f64 {
    reports
        .iter()
        .filter(|r| r.expect == crate::transforms::Expectation::Holds)
        .map(|r| r.residual)
        .fold(0.0, f64::max)
}

pub fn cmd_transform_check(cfg: &TransformConfig, seed: Option<u64>, out: &Path) -> Result<Outcome> {
    let blocks = cfg.blocks()?;
    let reports = verify_web(&blocks, cfg.cutoff);
    let pass = reports.iter().all(|r| r.pass);
    let sweep = cfg
        .cutoff_sweep
        .iter()
        .map(|&n| {
            let r = verify_web(&blocks, n);
            SweepRow { cutoff: n, max_residual: max_holding(&r), failing: r.iter().filter(|x| !x.pass).count() }
        })
        .collect();
    let mut summary: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {}: {:.3e}", if r.pass { "pass" } else { "FAIL" }, r.label, r.residual))
        .collect();
    summary.push(format!("{} of {} transform checks pass", reports.iter().filter(|r| r.pass).count(), reports.len()));
    let result = TransformResult { pass, reports, sweep };
    let meta = Meta::new("transform-check", seed, cfg)?;
    let dir = OutDir::create(out)?;
    let file = dir.write_json("transform.json", &meta, &result)?;
    Ok(Outcome { files: vec![file], pass, summary })
}
