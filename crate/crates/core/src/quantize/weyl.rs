//! Weyl and Wick quantization of polynomials in `(u, ū)`.
//!
//! Polynomials live in `2d` variables: `0..d` are `u = φ` (mapped to creation
//! operators) and `d..2d` are `ū` (mapped to annihilation operators).

use super::ladder::{ladder_operators, Ladders};
use super::operator::TruncatedOperator;
use super::space::Space;
use crate::chaos::{complex_wick_order, complex_wick_order_inverse};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::c64;
use crate::symtensor::MultiIndex;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn regulator(space: &Space, hbar: f64) -> DMatrix<Complex64> {
    space.commutator_matrix().map(|v| c64(0.5 * hbar * v, 0.0))
}

fn check(poly: &Poly<Complex64>, space: &Space) -> Result<usize> {
    if poly.nvars() != 2 * space.dim() {
        return Err(Error::Shape(format!("polynomial in {} variables for {} modes", poly.nvars(), space.dim())));
    }
    let deg = poly.degree().unwrap_or(0);
    if deg > space.cutoff {
        return Err(Error::Truncation { rank: deg, cutoff: space.cutoff });
    }
    Ok(deg)
}

/// `Π cre_x · Π ann_y` for a monomial key.
fn normal_word(l: &Ladders, key: &MultiIndex, d: usize) -> TruncatedOperator {
    let space = &l.cre[0].space;
    let mut cre = TruncatedOperator::identity(space);
    let mut ann = TruncatedOperator::identity(space);
    for &e in key.entries() {
        if e < d {
            cre = cre.compose(&l.cre[e]);
        } else {
            ann = ann.compose(&l.ann[e - d]);
        }
    }
    cre.compose(&ann)
}

/// Sends each monomial `u^β ū^γ` to the normal-ordered word `(a†)^β a^γ`.
pub fn normal_ordered(poly: &Poly<Complex64>, space: &Space) -> Result<TruncatedOperator> {
    let deg = check(poly, space)?;
    let big = space.padded(deg.max(1))?;
    let l = ladder_operators(&big)?;
    let d = space.dim();
    let mut out = TruncatedOperator::zero(&big);
    for (k, c) in poly.terms() {
        out = out.add(&normal_word(&l, k, d).scale(*c));
    }
    out.compress(space)
}

/// Weyl (totally symmetric) quantization: expand in complex Wick monomials
/// for half the commutator, then normal order.
pub fn weyl_quantize(poly: &Poly<Complex64>, space: &Space) -> Result<TruncatedOperator> {
    weyl_quantize_scaled(poly, space, 1.0)
}

/// [`weyl_quantize`] with the regulator covariance scaled by `hbar`.
pub fn weyl_quantize_scaled(poly: &Poly<Complex64>, space: &Space, hbar: f64) -> Result<TruncatedOperator> {
    check(poly, space)?;
    let coeffs = complex_wick_order_inverse(poly, &regulator(space, hbar));
    normal_ordered(&coeffs, space)
}

/// Weyl quantization through `Q(u_x G) = a†_x Q(G) + ½ C_{xz} Q(∂_{ū_z} G)`.
pub fn weyl_quantize_recursive(poly: &Poly<Complex64>, space: &Space) -> Result<TruncatedOperator> {
    let deg = check(poly, space)?;
    let big = space.padded(deg.max(1))?;
    let l = ladder_operators(&big)?;
    let half = regulator(space, 1.0);
    let d = space.dim();
    let mut out = TruncatedOperator::zero(&big);
    for (k, c) in poly.terms() {
        let mono = Poly::monomial(2 * d, k.clone(), c64(1.0, 0.0));
        out = out.add(&recurse(&mono, &l, &half, d).scale(*c));
    }
    out.compress(space)
}

fn recurse(p: &Poly<Complex64>, l: &Ladders, half: &DMatrix<Complex64>, d: usize) -> TruncatedOperator {
    let space = &l.cre[0].space;
    let mut out = TruncatedOperator::zero(space);
    for (k, c) in p.terms() {
        let first_u = k.entries().iter().copied().find(|&e| e < d);
        let term = match first_u {
            None => normal_word(l, k, d),
            Some(x) => {
                let g = Poly::monomial(2 * d, k.without(x).expect("x ∈ key"), c64(1.0, 0.0));
                let mut t = l.cre[x].compose(&recurse(&g, l, half, d));
                for z in 0..d {
                    let cz = half[(x, z)];
                    let dg = g.derivative(d + z);
                    if cz != Complex64::default() && !dg.is_zero() {
                        t = t.add(&recurse(&dg, l, half, d).scale(cz));
                    }
                }
                t
            }
        };
        out = out.add(&term.scale(*c));
    }
    out
}

/// Normal-ordered quantization `Q_Weyl ∘ W_{C/2}`.
pub fn wick_quantize(poly: &Poly<Complex64>, space: &Space) -> Result<TruncatedOperator> {
    check(poly, space)?;
    weyl_quantize(&complex_wick_order(poly, &regulator(space, 1.0)), space)
}

/// Classical involution: conjugate coefficients and swap `u ↔ ū`.
pub fn involution(poly: &Poly<Complex64>) -> Poly<Complex64> {
    let d = poly.nvars() / 2;
    let mut out = Poly::zero(poly.nvars());
    for (k, c) in poly.terms() {
        let swapped = MultiIndex::new(k.entries().iter().map(|&e| if e < d { e + d } else { e - d }).collect());
        out.add_term(swapped, c.conj());
    }
    out
}
