//! Heisenberg flow of the per-mode ladder operators, `a(t) = u a₀ + v a₀†`.

use super::background::FLRWBackground;
use super::mode::{mode_parameters, mode_state, ModeParameters, ModeRates};
use super::solver::{integrate, SolverOptions, SolverStats};
use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which evaluator of `∂_t a` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowPath {
    /// `∂_t a = ½(a† − a)K̇Δ − ½(δ°δ∘)(a + a†)` with the mode rates.
    Chain,
    /// The closed-form matrix `(ȧ/a)[½((−1,1),(1,−1))/(1+ω²) + ((−1,−2),(−2,−1))]`.
    Matrix,
}

/// `∂_t a = p·a + q·a†`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowCoefficients {
    pub p: f64,
    pub q: f64,
}

pub(crate) fn coefficients(path: FlowPath, m: &ModeParameters, r: &ModeRates) -> FlowCoefficients {
    match path {
        FlowPath::Chain => {
            // K̇Δ = −d log(δΔ)/dt on the weighted pair.
            let kd = -r.log_rate;
            let s = r.volume_rate;
            FlowCoefficients { p: -0.5 * kd - 0.5 * s, q: 0.5 * kd - 0.5 * s }
        }
        FlowPath::Matrix => {
            let x = if m.omega2.is_finite() { 1.0 / (1.0 + m.omega2) } else { 0.0 };
            FlowCoefficients { p: r.hubble * (-0.5 * x - 1.0), q: r.hubble * (0.5 * x - 2.0) }
        }
    }
}

pub fn flow_coefficients(bg: &FLRWBackground, lambda: f64, t: f64, path: FlowPath) -> Result<FlowCoefficients> {
    bg.a(t)?;
    let (m, r) = mode_state(bg, lambda, t)?;
    Ok(coefficients(path, &m, &r))
}

fn apply(c: FlowCoefficients, u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    (u * c.p + v.conj() * c.q, v * c.p + u.conj() * c.q)
}

/// `(u̇, v̇)` from `∂_t a = p a + q a†` and `a = u a₀ + v a₀†`.
pub fn heisenberg_flow_rhs(
    bg: &FLRWBackground,
    lambda: f64,
    t: f64,
    (u, v): (Complex64, Complex64),
    path: FlowPath,
) -> Result<(Complex64, Complex64)> {
    Ok(apply(flow_coefficients(bg, lambda, t, path)?, u, v))
}

/// A per-mode run: Heisenberg runs fill `u`, `v`; Schrödinger runs fill `psi`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeRun {
    pub lambda: f64,
    pub t: Vec<f64>,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    /// `|u|² − |v|²` for Heisenberg runs, the time-dependent norm for Schrödinger runs.
    pub norm: Vec<f64>,
    /// `([a_t, a_t†] − Δ(t))/Δ(t)` with `[a₀, a₀†] = Δ(t₀)`; empty for Schrödinger runs.
    pub ccr_residual: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub psi: Vec<Vec<Complex64>>,
    /// Weight in the top two degrees relative to the norm.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leak: Vec<f64>,
    pub stats: SolverStats,
}

#[derive(Serialize)]
struct RunJson<'a> {
    lambda: f64,
    t: &'a [f64],
    u: Vec<[f64; 2]>,
    v: Vec<[f64; 2]>,
    norm: &'a [f64],
    ccr_residual: &'a [f64],
}

impl ModeRun {
    /// `{lambda, t, u, v, norm, ccr_residual}` with complex entries as `[re, im]`.
    pub fn to_json(&self) -> serde_json::Value {
        let pairs = |z: &[Complex64]| z.iter().map(|c| [c.re, c.im]).collect();
        serde_json::to_value(RunJson {
            lambda: self.lambda,
            t: &self.t,
            u: pairs(&self.u),
            v: pairs(&self.v),
            norm: &self.norm,
            ccr_residual: &self.ccr_residual,
        })
        .expect("plain data")
    }

    pub fn final_v2(&self) -> f64 {
        self.v.last().map(|v| v.norm_sqr()).unwrap_or(0.0)
    }

    /// `|v|²/(|u|² − |v|²)` at the last node: occupation relative to the transported CCR.
    pub fn final_occupation(&self) -> f64 {
        match (self.u.last(), self.v.last()) {
            (Some(u), Some(v)) => v.norm_sqr() / (u.norm_sqr() - v.norm_sqr()),
            _ => 0.0,
        }
    }

    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.norm.first().copied().unwrap_or(0.0);
        self.norm.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max)
    }

    pub fn max_ccr_residual(&self) -> f64 {
        self.ccr_residual.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_mode(bg: &FLRWBackground, lambda: f64, t0: f64, t1: f64) -> Result<()> {
    bg.validate()?;
    bg.check_span(t0, t1)?;
    mode_parameters(bg, lambda, t0)?;
    mode_parameters(bg, lambda, t1)?;
    Ok(())
}

/// Integrates the Heisenberg flow on `[t0, t1]` from `(u₀, v₀)`.
pub fn evolve_heisenberg_from(
    bg: &FLRWBackground,
    lambda: f64,
    (t0, t1): (f64, f64),
    (u0, v0): (Complex64, Complex64),
    path: FlowPath,
    opts: &SolverOptions,
) -> Result<ModeRun> {
    check_mode(bg, lambda, t0, t1)?;
    let rhs = |t: f64, y: &DVector<f64>, dy: &mut DVector<f64>| {
        let (m, r) = mode_state(bg, lambda, t).expect("mode checked on the span");
        let (du, dv) = apply(coefficients(path, &m, &r), Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]));
        dy[0] = du.re;
        dy[1] = du.im;
        dy[2] = dv.re;
        dy[3] = dv.im;
    };
    let y0 = DVector::from_vec(vec![u0.re, u0.im, v0.re, v0.im]);
    let traj = integrate(rhs, t0, t1, y0, opts)?;
    let d0 = mode_parameters(bg, lambda, t0)?.delta;
    let mut run = ModeRun {
        lambda,
        t: traj.t.clone(),
        u: Vec::new(),
        v: Vec::new(),
        norm: Vec::new(),
        ccr_residual: Vec::new(),
        psi: Vec::new(),
        leak: Vec::new(),
        stats: traj.stats,
    };
    for (t, y) in traj.t.iter().zip(&traj.y) {
        let (u, v) = (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]));
        let b = u.norm_sqr() - v.norm_sqr();
        let dt = mode_parameters(bg, lambda, *t)?.delta;
        run.u.push(u);
        run.v.push(v);
        run.norm.push(b);
        run.ccr_residual.push((b * d0 - dt) / dt);
    }
    Ok(run)
}

/// Heisenberg run from `(1, 0)`.
pub fn evolve_mode_heisenberg(
    bg: &FLRWBackground,
    lambda: f64,
    tspan: (f64, f64),
    path: FlowPath,
    opts: &SolverOptions,
) -> Result<ModeRun> {
    evolve_heisenberg_from(bg, lambda, tspan, (Complex64::new(1.0, 0.0), Complex64::default()), path, opts)
}

/// Integrates forward, then back from the final state; returns the distance to `(1, 0)`.
pub fn time_reversal_residual(
    bg: &FLRWBackground,
    lambda: f64,
    (t0, t1): (f64, f64),
    path: FlowPath,
    opts: &SolverOptions,
) -> Result<f64> {
    let fwd = evolve_mode_heisenberg(bg, lambda, (t0, t1), path, opts)?;
    let end = (*fwd.u.last().unwrap(), *fwd.v.last().unwrap());
    let back = evolve_heisenberg_from(bg, lambda, (t1, t0), end, path, opts)?;
    let (u, v) = (back.u.last().unwrap(), back.v.last().unwrap());
    Ok((u - Complex64::new(1.0, 0.0)).norm().max(v.norm()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathComparison {
    pub lambda: f64,
    pub t: f64,
    pub chain: FlowCoefficients,
    pub matrix: FlowCoefficients,
    pub difference: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinalComparison {
    pub lambda: f64,
    pub chain_v2: f64,
    pub matrix_v2: f64,
}

/// Both evaluators of the flow on a `(λ, t)` grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub tolerance: f64,
    pub agree: bool,
    pub max_difference: f64,
    /// Rows where the evaluators differ by more than the tolerance.
    pub discrepancies: Vec<PathComparison>,
    pub points: usize,
    /// `|v(t₁)|²` under each path.
    pub finals: Vec<FinalComparison>,
    pub note: String,
}

pub const CONSISTENCY_TOL: f64 = 1e-8;

pub fn compare_paths(
    bg: &FLRWBackground,
    lambdas: &[f64],
    (t0, t1): (f64, f64),
    nodes: usize,
    opts: &SolverOptions,
) -> Result<ConsistencyReport> {
    if lambdas.is_empty() {
        return Err(Error::Config("λ grid is empty".into()));
    }
    let mut rows = Vec::new();
    let mut finals = Vec::new();
    for &lambda in lambdas {
        check_mode(bg, lambda, t0, t1)?;
        for i in 0..=nodes {
            let t = t0 + (t1 - t0) * i as f64 / nodes.max(1) as f64;
            let chain = flow_coefficients(bg, lambda, t, FlowPath::Chain)?;
            let matrix = flow_coefficients(bg, lambda, t, FlowPath::Matrix)?;
            let difference = (chain.p - matrix.p).abs().max((chain.q - matrix.q).abs());
            rows.push(PathComparison { lambda, t, chain, matrix, difference });
        }
        let c = evolve_mode_heisenberg(bg, lambda, (t0, t1), FlowPath::Chain, opts)?;
        let p = evolve_mode_heisenberg(bg, lambda, (t0, t1), FlowPath::Matrix, opts)?;
        finals.push(FinalComparison { lambda, chain_v2: c.final_v2(), matrix_v2: p.final_v2() });
    }
    let max_difference = rows.iter().map(|r| r.difference).fold(0.0, f64::max);
    let points = rows.len();
    let discrepancies: Vec<_> = rows.into_iter().filter(|r| r.difference > CONSISTENCY_TOL).collect();
    let agree = discrepancies.is_empty();
    let note = if agree {
        "the two evaluators agree on the grid".to_string()
    } else {
        "chain: p = -(KdotDelta + s)/2, q = (KdotDelta - s)/2 with KdotDelta = -H(4 - r), s = 3H; \
         matrix: p = H(-r/2 - 1), q = H(r/2 - 2), r = M^2/(M^2+lambda). The chain path is primary."
            .to_string()
    };
    Ok(ConsistencyReport { tolerance: CONSISTENCY_TOL, agree, max_difference, discrepancies, points, finals, note })
}
