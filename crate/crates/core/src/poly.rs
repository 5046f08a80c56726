//! Polynomials in `n` commuting variables, stored by sorted monomial keys.
//!
//! Unlike [`SymTensor`], the stored value is the plain monomial coefficient.

use crate::scalar::Scalar;
use crate::symtensor::{MultiIndex, SymTensor};
use nalgebra::DMatrix;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(MultiIndex::empty(), c);
        p
    }

    pub fn monomial(nvars: usize, key: MultiIndex, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(key, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, MultiIndex::new(vec![i]), S::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &MultiIndex) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, key: MultiIndex, c: S) {
        let v = self.coeff(&key) + c;
        if v == S::zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.rank()).max()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.add_term(ka.merge(kb), va.clone() * vb.clone());
            }
        }
        out
    }

    /// Drops every term of degree above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            if k.rank() <= n {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }

    pub fn homogeneous(&self, n: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            if k.rank() == n {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            let c = k.count_of(i);
            if c > 0 {
                out.add_term(k.without(i).unwrap(), v.clone() * S::from_i64(c as i64));
            }
        }
        out
    }

    pub fn times_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.with(i), v.clone());
        }
        out
    }

    /// `Σ_{ij} C_{ij} ∂_i ∂_j p`.
    pub fn laplacian(&self, c: &DMatrix<S>) -> Self {
        let mut out = Self::zero(self.nvars);
        for i in 0..self.nvars {
            let di = self.derivative(i);
            if di.is_zero() {
                continue;
            }
            for j in 0..self.nvars {
                let cij = c[(i, j)].clone();
                if cij == S::zero() {
                    continue;
                }
                out = out.add(&di.derivative(j).scale(&cij));
            }
        }
        out
    }

    /// `exp(s·L) p` for the nilpotent operator `L = Σ C_{ij}∂_i∂_j` (finite sum).
    pub fn exp_laplacian(&self, c: &DMatrix<S>, s: &S) -> Self {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 1i64;
        loop {
            term = term.laplacian(c).scale(&(s.clone() / S::from_i64(k)));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
            k += 1;
        }
        out
    }

    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (k, v) in &self.terms {
            let mut t = v.clone();
            for &e in k.entries() {
                t = t * x[e].clone();
            }
            acc += t;
        }
        acc
    }

    /// `p(M x)`: each variable `x_j` is replaced by `Σ_i M_{ji} x_i`.
    pub fn substitute_linear(&self, m: &DMatrix<S>) -> Self {
        let nv = m.ncols();
        let forms: Vec<Poly<S>> = (0..self.nvars)
            .map(|j| {
                let mut f = Poly::zero(nv);
                for i in 0..nv {
                    f.add_term(MultiIndex::new(vec![i]), m[(j, i)].clone());
                }
                f
            })
            .collect();
        let mut out = Poly::zero(nv);
        for (k, v) in &self.terms {
            let mut t = Poly::constant(nv, v.clone());
            for &e in k.entries() {
                t = t.mul(&forms[e]);
            }
            out = out.add(&t);
        }
        out
    }

    /// `p(x + h)`.
    pub fn translate(&self, h: &[S]) -> Self {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 1i64;
        loop {
            let mut next = Poly::zero(self.nvars);
            for (i, hi) in h.iter().enumerate() {
                if *hi != S::zero() {
                    next = next.add(&term.derivative(i).scale(hi));
                }
            }
            term = next.scale(&(S::one() / S::from_i64(k)));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
            k += 1;
        }
        out
    }

    /// Polynomial whose homogeneous parts are the given symmetric tensors.
    pub fn from_tensors(nvars: usize, tensors: &[SymTensor<S>]) -> Self {
        let mut out = Self::zero(nvars);
        for t in tensors {
            for (k, v) in t.iter() {
                out.add_term(k.clone(), v.clone() * S::from_i64(k.multiplicity()));
            }
        }
        out
    }

    /// Symmetric tensor of the degree-`n` part.
    pub fn tensor(&self, n: usize) -> SymTensor<S> {
        let mut t = SymTensor::zeros(n, self.nvars);
        for (k, v) in &self.terms {
            if k.rank() == n {
                t.set(k.clone(), v.clone() / S::from_i64(k.multiplicity()));
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }
}
