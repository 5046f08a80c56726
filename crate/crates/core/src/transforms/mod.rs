//! Segal–Bargmann and Fourier transforms between the four representations,
//! realized on chaos coefficients.

mod phase;
mod web;

pub use phase::{momentum_phase, momentum_vacuum, schrodinger_phase, schrodinger_vacuum, vacuum_tail};
pub use web::{verify_web, Expectation, TransformReport};

use crate::chaos::{ChaosFlavor, ChaosState};
use crate::error::{Error, Result};
use crate::gaussian::{Covariance, Flavor};
use crate::kahler::ComplexStructureBlocks;
use crate::poly::Poly;
use crate::quantize::{CMatrix, Rep, RepSpace, Space, TruncatedOperator};
use crate::scalar::c64;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A linear map between two truncated representation spaces.
#[derive(Clone, Debug)]
pub struct Transform {
    pub label: String,
    pub from: Space,
    pub to: Space,
    pub matrix: CMatrix,
}

impl Transform {
    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * v
    }

    pub fn apply_state(&self, s: &ChaosState) -> Result<ChaosState> {
        let v = self.from.from_state(s)?;
        self.to.to_state(&self.apply(&v))
    }

    pub fn inverse(&self) -> Result<Transform> {
        let m = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate(format!("{} is not invertible on the block", self.label)))?;
        Ok(Transform { label: format!("{}⁻¹", self.label), from: self.to.clone(), to: self.from.clone(), matrix: m })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Transform) -> Result<Transform> {
        if other.from.rep != self.to.rep || other.from.cutoff != self.to.cutoff {
            return Err(Error::Shape(format!("cannot follow {} by {}", self.label, other.label)));
        }
        Ok(Transform {
            label: format!("{}∘{}", other.label, self.label),
            from: self.from.clone(),
            to: other.to.clone(),
            matrix: &other.matrix * &self.matrix,
        })
    }

    /// `T A T⁻¹` for an operator on the source space.
    pub fn push(&self, op: &TruncatedOperator) -> Result<TruncatedOperator> {
        let inv = self.inverse()?;
        TruncatedOperator::new(self.to.clone(), &self.matrix * &op.matrix * &inv.matrix)
    }

    /// `T⁻¹ B T` for an operator on the target space.
    pub fn pull(&self, op: &TruncatedOperator) -> Result<TruncatedOperator> {
        let inv = self.inverse()?;
        TruncatedOperator::new(self.from.clone(), &inv.matrix * &op.matrix * &self.matrix)
    }

    /// Largest entry of `Tᴴ G_to T − G_from` in orthonormal coordinates of the source.
    pub fn unitarity_residual(&self) -> f64 {
        let g_to = self.to.gram().map(|v| c64(v, 0.0));
        let g_from = self.from.gram().map(|v| c64(v, 0.0));
        let r = self.matrix.adjoint() * g_to * &self.matrix - g_from;
        let l = self.from.cholesky().map(|v| c64(v, 0.0));
        let y = l.solve_lower_triangular(&r).expect("invertible factor");
        let z = l.solve_lower_triangular(&y.adjoint()).expect("invertible factor");
        z.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn spaces(from: Rep, to: Rep, blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<(Space, Space)> {
    Ok((RepSpace::new(from, blocks, cutoff)?, RepSpace::new(to, blocks, cutoff)?))
}

fn degree_scaling(from: &Space, to: &Space, label: &str) -> Transform {
    let n = from.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, k) in from.basis.keys().iter().enumerate() {
        m[(i, i)] = c64(0.5f64.powf(k.rank() as f64 / 2.0), 0.0);
    }
    Transform { label: label.into(), from: from.clone(), to: to.clone(), matrix: m }
}

/// Plain Segal–Bargmann transform `B̃`: Schrödinger → holomorphic,
/// `:φ^α:_{Δ/2} ↦ 2^{−|α|/2} φ^α`.
pub fn bargmann(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let (s, h) = spaces(Rep::Schrodinger, Rep::Holomorphic, blocks, cutoff)?;
    Ok(degree_scaling(&s, &h, "B"))
}

/// Plain momentum Segal–Bargmann transform: field-momentum → antiholomorphic,
/// `:π^α:_{−D/2} ↦ 2^{−|α|/2} φ̄^α`.
pub fn bargmann_momentum(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let (m, a) = spaces(Rep::FieldMomentum, Rep::Antiholomorphic, blocks, cutoff)?;
    Ok(degree_scaling(&m, &a, "Bm"))
}

fn substitution(from: &Space, to: &Space, m: &DMatrix<Complex64>, label: &str) -> Transform {
    let n = from.len();
    let d = from.dim();
    let mut out = CMatrix::zeros(n, n);
    for (j, k) in from.basis.keys().iter().enumerate() {
        let p = Poly::monomial(d, k.clone(), c64(1.0, 0.0)).substitute_linear(m);
        for (key, c) in p.terms() {
            let i = to.basis.position(key).expect("degree preserved");
            out[(i, j)] = *c;
        }
    }
    Transform { label: label.into(), from: from.clone(), to: to.clone(), matrix: out }
}

fn d_inverse(blocks: &ComplexStructureBlocks) -> Result<DMatrix<f64>> {
    blocks.d.clone().try_inverse().ok_or_else(|| Error::Degenerate("D is singular".into()))
}

/// `Ψ ↦ Ψ(i(D⁻¹ − iAD⁻¹)φ̄)`: holomorphic → antiholomorphic.
pub fn fourier_tilde(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let (h, a) = spaces(Rep::Holomorphic, Rep::Antiholomorphic, blocks, cutoff)?;
    let dinv = d_inverse(blocks)?;
    let i = Complex64::i();
    let m = dinv.map(|v| c64(v, 0.0)) * i + (&blocks.a * &dinv).map(|v| c64(v, 0.0));
    Ok(substitution(&h, &a, &m, "F~"))
}

/// `Ψ̂ ↦ Ψ̂(i(K + iKA)φ)`: antiholomorphic → holomorphic.
pub fn fourier_tilde_inverse(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let (a, h) = spaces(Rep::Antiholomorphic, Rep::Holomorphic, blocks, cutoff)?;
    let i = Complex64::i();
    let m = blocks.k.map(|v| c64(v, 0.0)) * i - (&blocks.k * &blocks.a).map(|v| c64(v, 0.0));
    Ok(substitution(&a, &h, &m, "F~⁻¹"))
}

/// `F = B̃̌⁻¹ F̃ B̃`: Schrödinger → field-momentum.
pub fn fourier(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let f = bargmann(blocks, cutoff)?
        .then(&fourier_tilde(blocks, cutoff)?)?
        .then(&bargmann_momentum(blocks, cutoff)?.inverse()?)?;
    Ok(Transform { label: "F".into(), ..f })
}

/// Algebra-preserving `B̃_Sch = B̃ e^{−if}` on the block.
pub fn bargmann_schrodinger(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let b = bargmann(blocks, cutoff)?;
    let p = schrodinger_phase(&b.from, -1.0)?;
    Ok(Transform { label: "B_Sch".into(), matrix: &b.matrix * &p.matrix, ..b })
}

/// Algebra-preserving `B̃̌_Mom = B̃̌ e^{−ig}` on the block.
pub fn bargmann_momentum_phase(blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Transform> {
    let b = bargmann_momentum(blocks, cutoff)?;
    let p = momentum_phase(&b.from, -1.0)?;
    Ok(Transform { label: "Bm_Mom".into(), matrix: &b.matrix * &p.matrix, ..b })
}

/// Coefficient-identity Segal–Bargmann map: `:φ^α:_Δ ↦ φ^α`, real → holomorphic.
pub fn segal_bargmann(state: &ChaosState) -> Result<ChaosState> {
    if state.flavor != ChaosFlavor::Real {
        return Err(Error::Unsupported("Segal–Bargmann acts on real-flavor states".into()));
    }
    let cov = Covariance::new(state.covariance.matrix().clone(), Flavor::Complex)?;
    ChaosState::from_tensors(ChaosFlavor::Holomorphic, cov, state.cutoff, state.graded()?.to_vec())
}

/// Inverse of [`segal_bargmann`].
pub fn segal_bargmann_inverse(state: &ChaosState) -> Result<ChaosState> {
    if state.flavor != ChaosFlavor::Holomorphic {
        return Err(Error::Unsupported("inverse Segal–Bargmann acts on holomorphic states".into()));
    }
    let cov = Covariance::new(state.covariance.matrix().clone(), Flavor::Real)?;
    ChaosState::from_tensors(ChaosFlavor::Real, cov, state.cutoff, state.graded()?.to_vec())
}

/// `Ψ(φ) ↦ Ψ(φ/√2)` on real states: Wick coefficients for `Δ/2` become Wick
/// coefficients for `Δ` scaled by `2^{−n/2}`.
pub fn dilation(state: &ChaosState) -> Result<ChaosState> {
    if state.flavor != ChaosFlavor::Real {
        return Err(Error::Unsupported("dilation acts on real-flavor states".into()));
    }
    let cov = state.covariance.scaled(2.0)?;
    let tensors = state
        .graded()?
        .iter()
        .enumerate()
        .map(|(n, t)| t.scale(&c64(0.5f64.powf(n as f64 / 2.0), 0.0)))
        .collect();
    ChaosState::from_tensors(ChaosFlavor::Real, cov, state.cutoff, tensors)
}
