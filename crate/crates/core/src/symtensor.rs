//! Sorted multi-indices and sparse symmetric tensors over `d` modes.
//!
//! A symmetric tensor is stored by its sorted index keys only. The polynomial it
//! represents is `eval(t, φ) = Σ_{i⃗} t_{i⃗} φ^{i_1}…φ^{i_n}` over *all* index tuples,
//! so the coefficient of the monomial with sorted key `α` is `mult(α)·t_α`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use ndarray::{ArrayD, IxDyn};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(mut entries: Vec<usize>) -> Self {
        entries.sort_unstable();
        MultiIndex(entries)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self, dim: usize) -> Vec<usize> {
        let mut c = vec![0; dim];
        for &e in &self.0 {
            c[e] += 1;
        }
        c
    }

    pub fn count_of(&self, mode: usize) -> usize {
        self.0.iter().filter(|&&e| e == mode).count()
    }

    /// Number of distinct orderings, `n!/∏ cᵢ!`.
    pub fn multiplicity(&self) -> i64 {
        let mut acc: i128 = 1;
        let mut seen = 0usize;
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            for k in 0..(j - i) {
                seen += 1;
                acc = acc * seen as i128 / (k + 1) as i128;
            }
            i = j;
        }
        acc as i64
    }

    /// `∏ cᵢ!`.
    pub fn factorial_weight(&self) -> i64 {
        let mut acc: i64 = 1;
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
                acc *= (j - i) as i64;
            }
            i = j;
        }
        acc
    }

    pub fn merge(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        MultiIndex::new(v)
    }

    pub fn with(&self, mode: usize) -> MultiIndex {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&e| e <= mode);
        v.insert(pos, mode);
        MultiIndex(v)
    }

    /// Removes one occurrence of `mode`, if present.
    pub fn without(&self, mode: usize) -> Option<MultiIndex> {
        let pos = self.0.iter().position(|&e| e == mode)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    /// All distinct orderings of the entries.
    pub fn permutations(&self) -> Vec<Vec<usize>> {
        fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(cur.clone());
                return;
            }
            let mut last = None;
            for i in 0..rest.len() {
                if Some(rest[i]) == last {
                    continue;
                }
                last = Some(rest[i]);
                let x = rest.remove(i);
                cur.push(x);
                rec(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut out = Vec::new();
        rec(&mut self.0.clone(), &mut Vec::new(), &mut out);
        out
    }
}

/// All sorted keys of a given rank over `dim` modes, in lexicographic order.
pub fn sorted_keys(dim: usize, rank: usize) -> Vec<MultiIndex> {
    fn rec(dim: usize, start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if left == 0 {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for m in start..dim {
            cur.push(m);
            rec(dim, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        if rank == 0 {
            out.push(MultiIndex::empty());
        }
        return out;
    }
    rec(dim, 0, rank, &mut Vec::new(), &mut out);
    out
}

/// Enumerated basis of sorted keys of degree `0..=cutoff`, ordered by degree.
#[derive(Clone, Debug)]
pub struct Basis {
    pub dim: usize,
    pub cutoff: usize,
    keys: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    degree_start: Vec<usize>,
}

impl Basis {
    pub fn new(dim: usize, cutoff: usize) -> Self {
        let mut keys = Vec::new();
        let mut degree_start = Vec::new();
        for n in 0..=cutoff {
            degree_start.push(keys.len());
            keys.extend(sorted_keys(dim, n));
        }
        degree_start.push(keys.len());
        let lookup = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Basis { dim, cutoff, keys, lookup, degree_start }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[MultiIndex] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &MultiIndex {
        &self.keys[i]
    }

    pub fn position(&self, key: &MultiIndex) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    /// Number of basis elements of degree at most `n`.
    pub fn size_through(&self, n: usize) -> usize {
        self.degree_start[(n + 1).min(self.cutoff + 1)]
    }

    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        self.degree_start[n]..self.degree_start[n + 1]
    }
}

/// What to do when a product would exceed the degree cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TruncationPolicy {
    Error,
    DropWithFlag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub cutoff: usize,
    pub policy: TruncationPolicy,
}

impl Truncation {
    pub fn new(cutoff: usize, policy: TruncationPolicy) -> Self {
        Truncation { cutoff, policy }
    }

    /// Default algebra context: cutoff 8, hard error.
    pub fn strict() -> Self {
        Truncation { cutoff: 8, policy: TruncationPolicy::Error }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<S> {
    rank: usize,
    dim: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> SymTensor<S> {
    pub fn zeros(rank: usize, dim: usize) -> Self {
        SymTensor { rank, dim, coeffs: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: S) -> Self {
        let mut t = Self::zeros(0, dim);
        t.set(MultiIndex::empty(), c);
        t
    }

    pub fn basis_vector(dim: usize, mode: usize) -> Self {
        let mut t = Self::zeros(1, dim);
        t.set(MultiIndex::new(vec![mode]), S::one());
        t
    }

    pub fn from_vector(v: &[S]) -> Self {
        let mut t = Self::zeros(1, v.len());
        for (i, x) in v.iter().enumerate() {
            t.set(MultiIndex::new(vec![i]), x.clone());
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, key: &MultiIndex) -> S {
        self.coeffs.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, key: MultiIndex, value: S) {
        assert_eq!(key.rank(), self.rank, "key rank mismatch");
        if value == S::zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    pub fn add_at(&mut self, key: MultiIndex, value: S) {
        let v = self.get(&key) + value;
        self.set(key, v);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zeros(self.rank, self.dim);
        for (k, v) in &self.coeffs {
            out.set(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_at(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymTensor<T> {
        let mut out = SymTensor::zeros(self.rank, self.dim);
        for (k, v) in &self.coeffs {
            out.set(k.clone(), f(v));
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// Averages a dense array over all axis permutations.
    pub fn symmetrize(raw: &ArrayD<S>) -> Result<Self> {
        let shape = raw.shape();
        let rank = shape.len();
        let dim = if rank == 0 { 0 } else { shape[0] };
        if shape.iter().any(|&s| s != dim) {
            return Err(Error::Shape(format!("ragged axes {shape:?}")));
        }
        let mut out = Self::zeros(rank, dim);
        if rank == 0 {
            out.set(MultiIndex::empty(), raw[IxDyn(&[])].clone());
            return Ok(out);
        }
        for key in sorted_keys(dim, rank) {
            let perms = key.permutations();
            let mut acc = S::zero();
            for p in &perms {
                acc += raw[IxDyn(p)].clone();
            }
            out.set(key, acc / S::from_i64(perms.len() as i64));
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> ArrayD<S> {
        let shape = vec![self.dim; self.rank];
        let mut a = ArrayD::from_elem(IxDyn(&shape), S::zero());
        for (k, v) in &self.coeffs {
            for p in k.permutations() {
                a[IxDyn(&p)] = v.clone();
            }
        }
        a
    }

    /// Polynomial value `Σ_{i⃗} t_{i⃗} ∏ φ^{i_k}`.
    pub fn eval(&self, phi: &[S]) -> S {
        let mut acc = S::zero();
        for (k, v) in &self.coeffs {
            let mut term = v.clone() * S::from_i64(k.multiplicity());
            for &e in k.entries() {
                term = term * phi[e].clone();
            }
            acc += term;
        }
        acc
    }

    /// Symmetric tensor product, with the multiplicities chosen so that
    /// `eval(a ⊗̂ b) = eval(a)·eval(b)`.
    pub fn sym_product(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let rank = self.rank + other.rank;
        let mut poly: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (ka, va) in &self.coeffs {
            let wa = va.clone() * S::from_i64(ka.multiplicity());
            for (kb, vb) in &other.coeffs {
                let wb = vb.clone() * S::from_i64(kb.multiplicity());
                let e = poly.entry(ka.merge(kb)).or_insert_with(S::zero);
                *e += wa.clone() * wb;
            }
        }
        let mut out = Self::zeros(rank, self.dim);
        for (k, v) in poly {
            let m = S::from_i64(k.multiplicity());
            out.set(k, v / m);
        }
        out
    }

    /// `sym_product` under an explicit truncation policy; `Ok(None)` means dropped.
    pub fn sym_product_truncated(&self, other: &Self, trunc: &Truncation) -> Result<Option<Self>> {
        let rank = self.rank + other.rank;
        if rank > trunc.cutoff {
            return match trunc.policy {
                TruncationPolicy::Error => Err(Error::Truncation { rank, cutoff: trunc.cutoff }),
                TruncationPolicy::DropWithFlag => Ok(None),
            };
        }
        Ok(Some(self.sym_product(other)))
    }

    /// Contracts the given slot pairs with `metric`: `Σ g^{xy} t^{…x…y…}`.
    /// Because `t` is symmetric only the number of pairs matters once the slots
    /// are validated; the result is symmetric by construction.
    pub fn contract(&self, pairs: &[(usize, usize)], metric: &DMatrix<S>) -> Result<Self> {
        let mut used = vec![false; self.rank];
        for &(a, b) in pairs {
            for s in [a, b] {
                if s >= self.rank {
                    return Err(Error::Slot { slot: s, rank: self.rank });
                }
                if used[s] {
                    return Err(Error::Shape(format!("slot {s} used twice")));
                }
                used[s] = true;
            }
        }
        if metric.nrows() != self.dim || metric.ncols() != self.dim {
            return Err(Error::Shape("metric must be d×d".into()));
        }
        let p = pairs.len();
        let mut cur = self.clone();
        for _ in 0..p {
            cur = cur.contract_once(metric);
        }
        Ok(cur)
    }

    fn contract_once(&self, metric: &DMatrix<S>) -> Self {
        let r = self.rank - 2;
        let mut out = Self::zeros(r, self.dim);
        for key in sorted_keys(self.dim, r) {
            let mut acc = S::zero();
            for x in 0..self.dim {
                for y in 0..self.dim {
                    let g = metric[(x, y)].clone();
                    if g == S::zero() {
                        continue;
                    }
                    acc += g * self.get(&key.with(x).with(y));
                }
            }
            out.set(key, acc);
        }
        out
    }

    /// Partial derivative of the represented polynomial: `(∂_x t)_k = n·t_{k∪x}`.
    pub fn derivative(&self, mode: usize) -> Self {
        if self.rank == 0 {
            return Self::zeros(0, self.dim);
        }
        let mut out = Self::zeros(self.rank - 1, self.dim);
        let n = S::from_i64(self.rank as i64);
        for key in sorted_keys(self.dim, self.rank - 1) {
            out.set(key.clone(), n.clone() * self.get(&key.with(mode)));
        }
        out
    }

    /// Applies a linear map to every slot: `c_{i⃗} = Σ_{j⃗} ∏ M_{i_k j_k} t_{j⃗}`.
    pub fn map_slots(&self, m: &DMatrix<S>) -> Self {
        let mut out = Self::zeros(self.rank, self.dim);
        for key in sorted_keys(self.dim, self.rank) {
            let mut acc = S::zero();
            for (kb, vb) in &self.coeffs {
                // Σ over orderings of kb paired against the fixed ordering of key.
                for p in kb.permutations() {
                    let mut w = vb.clone();
                    for (a, b) in key.entries().iter().zip(p.iter()) {
                        w = w * m[(*a, *b)].clone();
                    }
                    acc += w;
                }
            }
            out.set(key, acc);
        }
        out
    }

    /// Full-index pairing `Σ_{i⃗,j⃗} conj(a_{i⃗}) ∏ g_{i_k j_k} b_{j⃗}`.
    pub fn pairing(&self, other: &Self, metric: &DMatrix<S>) -> S {
        assert_eq!(self.rank, other.rank);
        let mapped = other.map_slots(metric);
        let mut acc = S::zero();
        for (k, v) in &self.coeffs {
            acc += v.conj() * mapped.get(k) * S::from_i64(k.multiplicity());
        }
        acc
    }
}

impl SymTensor<f64> {
    pub fn to_complex(&self) -> SymTensor<num_complex::Complex64> {
        self.map(|v| num_complex::Complex64::new(*v, 0.0))
    }
}
