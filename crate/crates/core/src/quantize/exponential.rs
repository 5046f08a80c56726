//! Trigonometric exponentials `E_χ = exp(iχ̄·φ + iχ·φ̄)`, their star products
//! and their quantization in the holomorphic representation.

use super::operator::{CMatrix, TruncatedOperator};
use super::space::{Rep, RepSpace, Space};
use crate::error::{Error, Result};
use crate::gaussian::{ConventionScale, Covariance, Flavor, GaussianMeasure};
use crate::kahler::ComplexStructureBlocks;
use crate::scalar::{binomial, c64, factorial};
use crate::symtensor::MultiIndex;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coherent-series tolerance for the tail `rⁿ/√(n!)`.
pub const SERIES_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigExponential {
    pub chi: Vec<Complex64>,
    /// `:E_χ: = e^{−χ̄Δχ/2} E_χ` when set.
    pub wick_ordered: bool,
}

impl TrigExponential {
    pub fn new(chi: Vec<Complex64>) -> Self {
        TrigExponential { chi, wick_ordered: false }
    }

    pub fn wick(chi: Vec<Complex64>) -> Self {
        TrigExponential { chi, wick_ordered: true }
    }

    pub fn dim(&self) -> usize {
        self.chi.len()
    }

    /// Value at a point `φ ∈ ℂ^d`.
    pub fn eval(&self, phi: &[Complex64], delta: &DMatrix<f64>) -> Complex64 {
        let i = Complex64::i();
        let mut e = Complex64::default();
        for (c, p) in self.chi.iter().zip(phi) {
            e += i * (c.conj() * p + c * p.conj());
        }
        let f = if self.wick_ordered { (-0.5 * quad(&self.chi, delta)).exp() } else { 1.0 };
        e.exp() * f
    }
}

/// `χ̄Δχ`.
pub fn quad(chi: &[Complex64], delta: &DMatrix<f64>) -> f64 {
    pairing(chi, chi, delta).re
}

/// `ρ̄Δα`.
fn pairing(rho: &[Complex64], alpha: &[Complex64], delta: &DMatrix<f64>) -> Complex64 {
    let mut s = Complex64::default();
    for x in 0..rho.len() {
        for y in 0..alpha.len() {
            s += rho[x].conj() * delta[(x, y)] * alpha[y];
        }
    }
    s
}

/// Weyl-relation exponent `(ρ̄Δα − ᾱΔρ)/2`, purely imaginary.
pub fn cocycle(rho: &[Complex64], alpha: &[Complex64], delta: &DMatrix<f64>) -> Complex64 {
    (pairing(rho, alpha, delta) - pairing(alpha, rho, delta)) * 0.5
}

fn sum(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Finite combination `Σ w_k E_{χ_k}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WeylWord {
    pub terms: Vec<(Complex64, TrigExponential)>,
}

impl WeylWord {
    pub fn single(e: TrigExponential) -> Self {
        WeylWord { terms: vec![(c64(1.0, 0.0), e)] }
    }

    pub fn one(dim: usize) -> Self {
        Self::single(TrigExponential::new(vec![Complex64::default(); dim]))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        WeylWord { terms }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        WeylWord { terms: self.terms.iter().map(|(w, e)| (w * c, e.clone())).collect() }
    }

    /// Complex conjugate: `E_χ* = E_{−χ}`, weights conjugated.
    pub fn star(&self) -> Self {
        WeylWord {
            terms: self
                .terms
                .iter()
                .map(|(w, e)| {
                    (w.conj(), TrigExponential { chi: e.chi.iter().map(|c| -c).collect(), wick_ordered: e.wick_ordered })
                })
                .collect(),
        }
    }

    /// Same function written with plain exponentials only.
    pub fn to_plain(&self, delta: &DMatrix<f64>) -> Self {
        WeylWord {
            terms: self
                .terms
                .iter()
                .map(|(w, e)| {
                    let f = if e.wick_ordered { (-0.5 * quad(&e.chi, delta)).exp() } else { 1.0 };
                    (w * f, TrigExponential::new(e.chi.clone()))
                })
                .collect(),
        }
    }

    /// Same function written with Wick-ordered exponentials only.
    pub fn to_wick(&self, delta: &DMatrix<f64>) -> Self {
        WeylWord {
            terms: self
                .terms
                .iter()
                .map(|(w, e)| {
                    let f = if e.wick_ordered { 1.0 } else { (0.5 * quad(&e.chi, delta)).exp() };
                    (w * f, TrigExponential::wick(e.chi.clone()))
                })
                .collect(),
        }
    }

    /// Merges terms with equal exponent and flavor and drops zero weights.
    pub fn simplify(&self, tol: f64) -> Self {
        let mut out: Vec<(Complex64, TrigExponential)> = Vec::new();
        for (w, e) in &self.terms {
            match out.iter_mut().find(|(_, f)| {
                f.wick_ordered == e.wick_ordered && f.chi.iter().zip(&e.chi).all(|(a, b)| (a - b).norm() <= tol)
            }) {
                Some(slot) => slot.0 += w,
                None => out.push((*w, e.clone())),
            }
        }
        out.retain(|(w, _)| w.norm() > tol);
        WeylWord { terms: out }
    }

    pub fn eval(&self, phi: &[Complex64], delta: &DMatrix<f64>) -> Complex64 {
        self.terms.iter().map(|(w, e)| w * e.eval(phi, delta)).sum()
    }
}

/// Moyal product, `E_ρ ⋆ E_α = exp((ρ̄Δα − ᾱΔρ)/2) E_{ρ+α}`, extended bilinearly.
pub fn moyal_product(f: &WeylWord, g: &WeylWord, blocks: &ComplexStructureBlocks) -> WeylWord {
    let delta = &blocks.delta;
    let (f, g) = (f.to_plain(delta), g.to_plain(delta));
    let mut terms = Vec::new();
    for (wf, ef) in &f.terms {
        for (wg, eg) in &g.terms {
            let c = cocycle(&ef.chi, &eg.chi, delta).exp();
            terms.push((wf * wg * c, TrigExponential::new(sum(&ef.chi, &eg.chi))));
        }
    }
    WeylWord { terms }
}

/// Wick star product on Wick-ordered generators, with the Moyal cocycle:
/// `:E_ρ: ⋆_w :E_α: = exp((ρ̄Δα − ᾱΔρ)/2) :E_{ρ+α}:`.
pub fn wick_star(f: &WeylWord, g: &WeylWord, blocks: &ComplexStructureBlocks) -> WeylWord {
    let delta = &blocks.delta;
    let (f, g) = (f.to_wick(delta), g.to_wick(delta));
    let mut terms = Vec::new();
    for (wf, ef) in &f.terms {
        for (wg, eg) in &g.terms {
            let c = cocycle(&ef.chi, &eg.chi, delta).exp();
            terms.push((wf * wg * c, TrigExponential::wick(sum(&ef.chi, &eg.chi))));
        }
    }
    WeylWord { terms }
}

/// `r = ‖χ‖·√‖Δ‖`, the growth rate of the coherent series.
pub fn series_rate(chi: &[Complex64], delta: &DMatrix<f64>) -> f64 {
    let n: f64 = chi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let s = delta.clone().symmetric_eigenvalues().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    n * s.sqrt()
}

/// `rⁿ/√(n!)`.
pub fn series_tail(r: f64, n: usize) -> f64 {
    (n as f64 * r.ln() - 0.5 * factorial(n).ln()).exp()
}

/// Smallest padding `k` such that paths through degree `cutoff + k` contribute
/// below [`SERIES_TOL`] to products of two exponentials of rate `r`,
/// `C(N+k, k) r^{2k}/k! < tol`, and such that the tail at the padded cutoff is small.
pub fn exponential_padding(r: f64, cutoff: usize) -> usize {
    let mut k = 1usize;
    loop {
        let n = cutoff + k;
        let ln_binom = factorial(n).ln() - factorial(k).ln() - factorial(cutoff).ln();
        let path = ln_binom + 2.0 * k as f64 * r.max(1e-300).ln() - factorial(k).ln();
        if (path < SERIES_TOL.ln() && series_tail(r, n) < SERIES_TOL) || k > 400 {
            return k;
        }
        k += 1;
    }
}

/// `Q_Weyl(E_χ) = e^{iχ̄·a†} e^{iχ·a} e^{−χ̄Δχ/2}` on a holomorphic space:
/// multiplication by `e^{iχ̄·z}` after the translation `z ↦ z + iΔχ`.
///
/// The matrix block is exact; the tail `rⁿ/√(n!)` at the space's cutoff must
/// be below [`SERIES_TOL`] so that compositions are meaningful.
pub fn quantize_exponential(e: &TrigExponential, space: &Space) -> Result<TruncatedOperator> {
    if space.rep != Rep::Holomorphic {
        return Err(Error::Unsupported(format!("exponentials are quantized in the holomorphic representation, not {}", space.rep.name())));
    }
    if e.dim() != space.dim() {
        return Err(Error::Shape(format!("χ has {} entries for {} modes", e.dim(), space.dim())));
    }
    let delta = &space.blocks.delta;
    let r = series_rate(&e.chi, delta);
    let tail = series_tail(r, space.cutoff);
    if r > 0.0 && tail >= SERIES_TOL {
        return Err(Error::SeriesTail { tail, cutoff: space.cutoff });
    }
    let i = Complex64::i();
    let d = space.dim();
    let lift: Vec<Complex64> = e.chi.iter().map(|c| i * c.conj()).collect();
    let h: Vec<Complex64> = (0..d).map(|x| (0..d).map(|y| i * delta[(x, y)] * e.chi[y]).sum()).collect();
    let c = (-0.5 * quad(&e.chi, delta)).exp() * if e.wick_ordered { (-0.5 * quad(&e.chi, delta)).exp() } else { 1.0 };
    let m = multiplication_exp(space, &lift);
    let t = translation(space, &h);
    TruncatedOperator::new(space.clone(), m * t * c64(c, 0.0))
}

fn counts(k: &MultiIndex, d: usize) -> Vec<usize> {
    (0..d).map(|x| k.count_of(x)).collect()
}

/// Multiplication by `exp(λ·z)`: `z^α ↦ Σ_β λ^β/β! z^{α+β}`.
fn multiplication_exp(space: &Space, lambda: &[Complex64]) -> CMatrix {
    let n = space.len();
    let d = space.dim();
    let mut m = CMatrix::zeros(n, n);
    for (j, a) in space.basis.keys().iter().enumerate() {
        for b in &space.basis.keys()[..space.basis.size_through(space.cutoff - a.rank())] {
            let mut v = c64(1.0, 0.0);
            for (x, &bx) in counts(b, d).iter().enumerate() {
                v *= lambda[x].powu(bx as u32) / factorial(bx);
            }
            let i = space.basis.position(&a.merge(b)).expect("inside truncation");
            m[(i, j)] += v;
        }
    }
    m
}

/// Translation `p(z) ↦ p(z + h)`: `z^α ↦ Σ_{β≤α} C(α,β) h^{α−β} z^β`.
fn translation(space: &Space, h: &[Complex64]) -> CMatrix {
    let n = space.len();
    let d = space.dim();
    let mut m = CMatrix::zeros(n, n);
    for (j, a) in space.basis.keys().iter().enumerate() {
        let ca = counts(a, d);
        for (i, b) in space.basis.keys()[..space.basis.size_through(a.rank())].iter().enumerate() {
            let cb = counts(b, d);
            if cb.iter().zip(&ca).any(|(p, q)| p > q) {
                continue;
            }
            let mut v = c64(1.0, 0.0);
            for x in 0..d {
                v *= h[x].powu((ca[x] - cb[x]) as u32) * binomial(ca[x], cb[x]) as f64;
            }
            m[(i, j)] = v;
        }
    }
    m
}

/// [`quantize_exponential`] built on a space padded by [`exponential_padding`]
/// and returned on that padded space.
pub fn quantize_exponential_padded(e: &TrigExponential, space: &Space) -> Result<TruncatedOperator> {
    let big = padded_for(&[e], space)?;
    quantize_exponential(e, &big)
}

/// A holomorphic space large enough for products of the given exponentials
/// and for the exponential of the sum of their arguments.
pub fn padded_for(es: &[&TrigExponential], space: &Space) -> Result<Space> {
    let r: f64 = es.iter().map(|e| series_rate(&e.chi, &space.blocks.delta)).sum();
    RepSpace::new(space.rep, &space.blocks, space.cutoff + exponential_padding(r, space.cutoff))
}

/// Weyl quantization of a word, `Σ w Q_Weyl(E)`.
pub fn quantize_word(word: &WeylWord, space: &Space) -> Result<TruncatedOperator> {
    let mut out = TruncatedOperator::zero(space);
    for (w, e) in &word.terms {
        out = out.add(&quantize_exponential(e, space)?.scale(*w));
    }
    Ok(out)
}

/// Wick quantization of a word; `Q_Wick(:E_χ:) = Q_Weyl(E_χ)`.
pub fn wick_quantize_word(word: &WeylWord, space: &Space) -> Result<TruncatedOperator> {
    let w = word.to_wick(&space.blocks.delta);
    let plain = WeylWord { terms: w.terms.into_iter().map(|(c, e)| (c, TrigExponential::new(e.chi))).collect() };
    quantize_word(&plain, space)
}

/// Vacuum expectation of `Q(E_χ)`: `e^{−χ̄Δχ/2}`.
pub fn gns_state(chi: &[Complex64], blocks: &ComplexStructureBlocks) -> Complex64 {
    c64((-0.5 * quad(chi, &blocks.delta)).exp(), 0.0)
}

/// The same expectation as the characteristic functional of the measure of
/// covariance `Δ/2` that underlies Weyl ordering.
pub fn gns_state_measure(chi: &[Complex64], blocks: &ComplexStructureBlocks) -> Result<Complex64> {
    let cov = Covariance::new(blocks.delta.clone(), Flavor::Complex)?;
    let m = GaussianMeasure::new(cov, ConventionScale::Half);
    let rho: Vec<Complex64> = chi.iter().map(|c| c.conj()).collect();
    Ok(c64(m.complex_characteristic_functional(&rho), 0.0))
}
