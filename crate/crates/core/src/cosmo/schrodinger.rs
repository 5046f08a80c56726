//! Modified Schrödinger flow `i(∂_t + Γ)Ψ = ĤΨ` on a truncated per-mode Fock space.
//!
//! States are holomorphic chaos coefficients `ψ_n` of `φⁿ`. The time-dependent
//! norm is `Σ n!|ψ_n|² C(t)ⁿ` with `C(t) = δ(t)Δ(t)/δ(t₀)`, which equals `Δ(t₀)`
//! at the initial time.

use super::background::FLRWBackground;
use super::connection::{connection_word, ConnectionKind};
use super::flow::{check_mode, ModeRun};
use super::mode::{mode_parameters, mode_state};
use super::solver::{integrate, SolverOptions};
use crate::chaos::{ChaosFlavor, ChaosState};
use crate::error::{Error, Result};
use crate::gaussian::Covariance;
use crate::kahler::ComplexStructureBlocks;
use crate::poly::Poly;
use crate::quantize::{CMatrix, Rep, RepSpace, TruncatedOperator};
use crate::scalar::factorial;
use crate::symtensor::{MultiIndex, SymTensor};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchrodingerOptions {
    pub cutoff: usize,
    /// `None` drops `Γ` entirely (the naive evolution).
    pub connection: Option<ConnectionKind>,
    /// Largest tolerated weight in the top two degrees.
    pub max_leak: f64,
    pub solver: SolverOptions,
}

impl Default for SchrodingerOptions {
    fn default() -> Self {
        SchrodingerOptions {
            cutoff: 10,
            connection: Some(ConnectionKind::Compatible),
            max_leak: 1e-3,
            solver: SolverOptions::default(),
        }
    }
}

/// Monomial-basis matrices of `φ∂`, `∂²`, `φ²` from the ladder words.
struct Words {
    number: CMatrix,
    dd: CMatrix,
    xx: CMatrix,
}

fn words(cutoff: usize) -> Result<Words> {
    let blocks = ComplexStructureBlocks::diagonal(DMatrix::identity(1, 1))?;
    let space = RepSpace::new(Rep::Holomorphic, &blocks, cutoff)?;
    let x = TruncatedOperator::raise(&space, 0);
    let d = TruncatedOperator::deriv(&space, 0);
    Ok(Words { number: x.compose(&d).matrix, dd: d.compose(&d).matrix, xx: x.compose(&x).matrix })
}

fn coefficients_of(state: &ChaosState, cutoff: usize) -> Result<Vec<Complex64>> {
    if state.flavor != ChaosFlavor::Holomorphic || state.dim() != 1 {
        return Err(Error::Shape("per-mode states are one-dimensional holomorphic chaos states".into()));
    }
    let graded = state.graded()?;
    if graded.len() > cutoff + 1 {
        return Err(Error::Truncation { rank: graded.len() - 1, cutoff });
    }
    let mut psi = vec![Complex64::default(); cutoff + 1];
    for (n, t) in graded.iter().enumerate() {
        psi[n] = t.get(&MultiIndex::new(vec![0; n]));
    }
    Ok(psi)
}

/// Per-mode holomorphic chaos state from monomial coefficients.
pub fn mode_state_from(psi: &[Complex64], delta: f64, cutoff: usize) -> Result<ChaosState> {
    let tensors = psi
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            let mut t = SymTensor::zeros(n, 1);
            t.set(MultiIndex::new(vec![0; n]), c);
            t
        })
        .collect();
    ChaosState::from_tensors(ChaosFlavor::Holomorphic, Covariance::scalar(delta)?, cutoff, tensors)
}

/// `Σ n!|ψ_n|² cⁿ`.
pub fn fock_norm(psi: &[Complex64], c: f64) -> f64 {
    psi.iter().enumerate().map(|(n, z)| factorial(n) * z.norm_sqr() * c.powi(n as i32)).sum()
}

fn top_weight(psi: &[Complex64], c: f64) -> f64 {
    let n = psi.len();
    let top: f64 = (n.saturating_sub(2)..n).map(|k| factorial(k) * psi[k].norm_sqr() * c.powi(k as i32)).sum();
    top / fock_norm(psi, c).max(f64::MIN_POSITIVE)
}

pub fn evolve_mode_schrodinger(
    bg: &FLRWBackground,
    lambda: f64,
    psi0: &ChaosState,
    (t0, t1): (f64, f64),
    opts: &SchrodingerOptions,
) -> Result<ModeRun> {
    check_mode(bg, lambda, t0, t1)?;
    let n = opts.cutoff;
    let p0 = mode_parameters(bg, lambda, t0)?;
    let c0 = psi0.covariance.matrix()[(0, 0)];
    if (c0 - p0.delta).abs() > 1e-12 * p0.delta {
        return Err(Error::Shape(format!("initial state covariance {c0} differs from Δ(t₀) = {}", p0.delta)));
    }
    let psi = coefficients_of(psi0, n)?;
    let norm0 = fock_norm(&psi, p0.delta);
    if (norm0 - 1.0).abs() > 1e-8 {
        return Err(Error::Domain(format!("initial state has norm² {norm0}, expected 1")));
    }
    let w = words(n)?;
    let dim = n + 1;
    let rhs = |t: f64, y: &DVector<f64>, dy: &mut DVector<f64>| {
        let (mut m, r) = mode_state(bg, lambda, t).expect("mode checked on the span");
        // Coefficients are normalized against δ(t₀), so Γ sees the relative weight.
        m.weight /= p0.weight;
        let z = DVector::from_fn(dim, |i, _| Complex64::new(y[i], y[dim + i]));
        // ∂_t ψ = −Γψ − iĤψ, Ĥ = K·φ∂.
        let mut gen = w.number.map(|v| v * Complex64::new(0.0, m.frequency()));
        if let Some(kind) = opts.connection {
            let g = connection_word(kind, &m, &r);
            let c = |v: f64| Complex64::new(v, 0.0);
            gen += &w.number * c(g.phi_d) + &w.dd * c(g.dd) + &w.xx * c(g.phiphi);
        }
        let dz = -(gen * z);
        for i in 0..dim {
            dy[i] = dz[i].re;
            dy[dim + i] = dz[i].im;
        }
    };
    let y0 = DVector::from_fn(2 * dim, |i, _| if i < dim { psi[i].re } else { psi[i - dim].im });
    let traj = integrate(rhs, t0, t1, y0, &opts.solver)?;
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
        let m = mode_parameters(bg, lambda, *t)?;
        let c = m.weighted_delta() / p0.weight;
        let z: Vec<Complex64> = (0..dim).map(|i| Complex64::new(y[i], y[dim + i])).collect();
        run.norm.push(fock_norm(&z, c));
        run.leak.push(top_weight(&z, c));
        run.psi.push(z);
    }
    let worst = run.leak.iter().copied().fold(0.0, f64::max);
    if worst > opts.max_leak {
        return Err(Error::SeriesTail { tail: worst, cutoff: n });
    }
    Ok(run)
}

/// `Ψ(t)(φ) = ∫Dβ(σ) exp[φ e^{−itK} σ̄] Ψ(σ, 0) = Ψ(e^{−itK}φ, 0)` for a static background.
pub fn static_propagator(psi0: &[Complex64], k: f64, t: f64) -> Vec<Complex64> {
    kernel(psi0, Complex64::new(0.0, -k * t).exp())
}

/// The kernel `exp[φ(1 − itK)σ̄]` truncated at first order in `t`.
pub fn linear_propagator(psi0: &[Complex64], k: f64, t: f64) -> Vec<Complex64> {
    kernel(psi0, Complex64::new(1.0, -k * t))
}

fn kernel(psi0: &[Complex64], m: Complex64) -> Vec<Complex64> {
    let mut p = Poly::zero(1);
    for (n, &c) in psi0.iter().enumerate() {
        p.add_term(MultiIndex::new(vec![0; n]), c);
    }
    let q = p.substitute_linear(&DMatrix::from_element(1, 1, m));
    (0..psi0.len()).map(|n| q.coeff(&MultiIndex::new(vec![0; n]))).collect()
}
