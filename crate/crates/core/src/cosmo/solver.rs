//! Thin wrapper over `ode_solvers` for real state vectors.

use crate::error::{Error, Result};
use ode_solvers::{DVector, Dopri5, Rk4, System};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Solver {
    /// Adaptive embedded Runge–Kutta 5(4).
    Dopri5,
    /// Classical fixed-step RK4.
    Rk4 { step: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub solver: Solver,
    pub rtol: f64,
    pub atol: f64,
    /// Number of output intervals on `[t0, t1]`.
    pub outputs: usize,
    pub max_steps: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { solver: Solver::Dopri5, rtol: 1e-8, atol: 1e-10, outputs: 100, max_steps: 200_000 }
    }
}

impl SolverOptions {
    pub fn tightened(&self, factor: f64) -> Self {
        SolverOptions { rtol: self.rtol / factor, atol: self.atol / factor, ..*self }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub evaluations: u32,
    pub accepted: u32,
    pub rejected: u32,
}

pub(crate) struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<DVector<f64>>,
    pub stats: SolverStats,
}

struct Wrap<F>(F);

impl<F: Fn(f64, &DVector<f64>, &mut DVector<f64>)> System<f64, DVector<f64>> for Wrap<F> {
    fn system(&self, t: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
        (self.0)(t, y, dy)
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction) and samples
/// the solution on `outputs + 1` equispaced nodes.
pub(crate) fn integrate<F>(f: F, t0: f64, t1: f64, y0: DVector<f64>, opts: &SolverOptions) -> Result<Trajectory>
where
    F: Fn(f64, &DVector<f64>, &mut DVector<f64>),
{
    let n = opts.outputs.max(1);
    let nodes: Vec<f64> = (0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect();
    let mut y = y0;
    let mut ys = vec![y.clone()];
    let mut stats = SolverStats::default();
    let f = &f;
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            ys.push(y.clone());
            continue;
        }
        let (end, s) = match opts.solver {
            Solver::Dopri5 => {
                let mut st = Dopri5::from_param(
                    Wrap(f),
                    a,
                    b,
                    b - a,
                    y.clone(),
                    opts.rtol,
                    opts.atol,
                    0.9,
                    0.04,
                    0.2,
                    10.0,
                    (b - a).abs(),
                    0.0,
                    opts.max_steps,
                    1000,
                    ode_solvers::OutputType::Sparse,
                );
                let s = st.integrate().map_err(|e| Error::Solver(format!("{e} (t in [{a}, {b}])")))?;
                (st.y_out().last().cloned(), s)
            }
            Solver::Rk4 { step } => {
                if !(step > 0.0) {
                    return Err(Error::Config(format!("RK4 step must be positive, got {step}")));
                }
                let steps = ((b - a).abs() / step).ceil().max(1.0);
                let mut st = Rk4::new(Wrap(f), a, y.clone(), b, (b - a) / steps);
                let s = st.integrate().map_err(|e| Error::Solver(e.to_string()))?;
                (st.y_out().last().cloned(), s)
            }
        };
        y = end.ok_or_else(|| Error::Solver("integrator produced no output".into()))?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver(format!("non-finite state near t = {b}")));
        }
        stats.evaluations += s.num_eval;
        stats.accepted += s.accepted_steps;
        stats.rejected += s.rejected_steps;
        ys.push(y.clone());
    }
    Ok(Trajectory { t: nodes, y: ys, stats })
}
