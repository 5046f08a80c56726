//! Truncated chaos expansions and the operators acting on them.

use super::wick::{wick_product, wick_series_to_poly};
use crate::error::{Error, Result};
use crate::gaussian::Covariance;
use crate::poly::Poly;
use crate::scalar::{c64, factorial};
use crate::symtensor::{sorted_keys, MultiIndex, SymTensor, TruncationPolicy};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChaosFlavor {
    /// Coefficients multiply Wick monomials `:φⁿ:_Δ` of a real Gaussian.
    Real,
    /// Coefficients multiply ordinary monomials `zⁿ` of a complex Gaussian.
    Holomorphic,
    /// Coefficients `ψ^{(n,m̄)}` with separate holomorphic and antiholomorphic groups.
    Bidegree,
}

/// Coefficient `ψ^{(n,m̄)}`: symmetric inside each group, groups never mixed.
#[derive(Clone, Debug, PartialEq)]
pub struct BiTensor {
    pub hol: usize,
    pub anti: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
}

impl BiTensor {
    pub fn zeros(hol: usize, anti: usize, dim: usize) -> Self {
        BiTensor { hol, anti, dim, coeffs: BTreeMap::new() }
    }

    pub fn get(&self, h: &MultiIndex, a: &MultiIndex) -> Complex64 {
        self.coeffs.get(&(h.clone(), a.clone())).copied().unwrap_or_default()
    }

    pub fn set(&mut self, h: MultiIndex, a: MultiIndex, v: Complex64) {
        assert_eq!((h.rank(), a.rank()), (self.hol, self.anti));
        if v == Complex64::default() {
            self.coeffs.remove(&(h, a));
        } else {
            self.coeffs.insert((h, a), v);
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|v| *v *= c);
        out.coeffs.retain(|_, v| *v != Complex64::default());
        out
    }

    /// `Σ conj(a_{i⃗,k⃗}) ∏Δ_{ij} ∏Δ̄_{kl} b_{j⃗,l⃗}` over full index tuples.
    pub fn pairing(&self, other: &Self, cov: &DMatrix<f64>) -> Complex64 {
        let mut acc = Complex64::default();
        for ((ha, aa), va) in &self.coeffs {
            let wa = (ha.multiplicity() * aa.multiplicity()) as f64;
            for ((hb, ab), vb) in &other.coeffs {
                let s = orbit_pairing(ha, hb, cov) * orbit_pairing(aa, ab, cov);
                acc += va.conj() * vb * (wa * s);
            }
        }
        acc
    }
}

/// `Σ_{distinct orderings p of β} ∏ g_{α_k p_k}`.
fn orbit_pairing(alpha: &MultiIndex, beta: &MultiIndex, g: &DMatrix<f64>) -> f64 {
    beta.permutations()
        .iter()
        .map(|p| alpha.entries().iter().zip(p).map(|(&a, &b)| g[(a, b)]).product::<f64>())
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    /// Degree-indexed symmetric tensors, `coeffs[n]` of rank `n`.
    Graded(Vec<SymTensor<Complex64>>),
    Bigraded(BTreeMap<(usize, usize), BiTensor>),
}

/// Truncated chaos expansion of a state relative to a covariance.
#[derive(Clone, Debug)]
pub struct ChaosState {
    pub flavor: ChaosFlavor,
    pub covariance: Covariance,
    pub cutoff: usize,
    pub coeffs: Coefficients,
}

/// Result of a product that may exceed the cutoff.
#[derive(Clone, Debug)]
pub struct Product {
    pub state: ChaosState,
    /// Largest coefficient magnitude dropped by truncation (0 if nothing was dropped).
    pub dropped: f64,
}

/// `u_x` for `x = 0..d`: the Malliavin derivative of a state, or a Skorokhod integrand.
pub type VectorField = Vec<ChaosState>;

pub(crate) fn complex_matrix(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| c64(v, 0.0))
}

impl ChaosState {
    pub fn zero(flavor: ChaosFlavor, covariance: Covariance, cutoff: usize) -> Self {
        let d = covariance.dim();
        let coeffs = match flavor {
            ChaosFlavor::Bidegree => Coefficients::Bigraded(BTreeMap::new()),
            _ => Coefficients::Graded((0..=cutoff).map(|n| SymTensor::zeros(n, d)).collect()),
        };
        ChaosState { flavor, covariance, cutoff, coeffs }
    }

    /// The constant function 1.
    pub fn vacuum(flavor: ChaosFlavor, covariance: Covariance, cutoff: usize) -> Self {
        let mut s = Self::zero(flavor, covariance, cutoff);
        match &mut s.coeffs {
            Coefficients::Graded(c) => c[0].set(MultiIndex::empty(), c64(1.0, 0.0)),
            Coefficients::Bigraded(c) => {
                let mut t = BiTensor::zeros(0, 0, s.covariance.dim());
                t.set(MultiIndex::empty(), MultiIndex::empty(), c64(1.0, 0.0));
                c.insert((0, 0), t);
            }
        }
        s
    }

    /// Graded state from degree-indexed tensors; degrees above the cutoff are an error.
    pub fn from_tensors(
        flavor: ChaosFlavor,
        covariance: Covariance,
        cutoff: usize,
        tensors: Vec<SymTensor<Complex64>>,
    ) -> Result<Self> {
        if flavor == ChaosFlavor::Bidegree {
            return Err(Error::Unsupported("use from_bitensors for bidegree states".into()));
        }
        let mut s = Self::zero(flavor, covariance, cutoff);
        let d = s.dim();
        if let Coefficients::Graded(c) = &mut s.coeffs {
            for t in tensors {
                if t.dim() != d {
                    return Err(Error::Shape(format!("tensor over {} modes, covariance over {d}", t.dim())));
                }
                if t.rank() > cutoff {
                    if t.is_zero() {
                        continue;
                    }
                    return Err(Error::Truncation { rank: t.rank(), cutoff });
                }
                let n = t.rank();
                c[n] = c[n].add(&t);
            }
        }
        Ok(s)
    }

    pub fn from_bitensors(covariance: Covariance, cutoff: usize, tensors: Vec<BiTensor>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for t in tensors {
            if t.hol + t.anti > cutoff {
                return Err(Error::Truncation { rank: t.hol + t.anti, cutoff });
            }
            if t.dim != covariance.dim() {
                return Err(Error::Shape("bitensor dimension mismatch".into()));
            }
            map.insert((t.hol, t.anti), t);
        }
        Ok(ChaosState { flavor: ChaosFlavor::Bidegree, covariance, cutoff, coeffs: Coefficients::Bigraded(map) })
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    pub fn graded(&self) -> Result<&[SymTensor<Complex64>]> {
        match &self.coeffs {
            Coefficients::Graded(c) => Ok(c),
            Coefficients::Bigraded(_) => Err(Error::Unsupported("graded coefficients requested from a bidegree state".into())),
        }
    }

    pub fn degree(&self, n: usize) -> SymTensor<Complex64> {
        match &self.coeffs {
            Coefficients::Graded(c) => c.get(n).cloned().unwrap_or_else(|| SymTensor::zeros(n, self.dim())),
            Coefficients::Bigraded(_) => SymTensor::zeros(n, self.dim()),
        }
    }

    fn with_graded(&self, coeffs: Vec<SymTensor<Complex64>>) -> Self {
        ChaosState { coeffs: Coefficients::Graded(coeffs), ..self.clone() }
    }

    fn map_graded(&self, f: impl Fn(usize, &SymTensor<Complex64>) -> SymTensor<Complex64>) -> Self {
        match &self.coeffs {
            Coefficients::Graded(c) => self.with_graded(c.iter().enumerate().map(|(n, t)| f(n, t)).collect()),
            Coefficients::Bigraded(_) => self.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match &self.coeffs {
            Coefficients::Graded(_) => self.map_graded(|_, t| t.scale(&c)),
            Coefficients::Bigraded(m) => ChaosState {
                coeffs: Coefficients::Bigraded(m.iter().map(|(k, t)| (*k, t.scale(c))).collect()),
                ..self.clone()
            },
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        match (&self.coeffs, &other.coeffs) {
            (Coefficients::Graded(a), Coefficients::Graded(b)) => {
                let n = a.len().max(b.len());
                let d = self.dim();
                let get = |v: &[SymTensor<Complex64>], k: usize| v.get(k).cloned().unwrap_or_else(|| SymTensor::zeros(k, d));
                Ok(self.with_graded((0..n).map(|k| get(a, k).add(&get(b, k))).collect()))
            }
            (Coefficients::Bigraded(a), Coefficients::Bigraded(b)) => {
                let mut out = a.clone();
                for (k, t) in b {
                    let e = out.entry(*k).or_insert_with(|| BiTensor::zeros(k.0, k.1, t.dim));
                    for ((h, an), v) in &t.coeffs {
                        let cur = e.get(h, an);
                        e.set(h.clone(), an.clone(), cur + v);
                    }
                }
                Ok(ChaosState { coeffs: Coefficients::Bigraded(out), ..self.clone() })
            }
            _ => unreachable!("flavors checked"),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(Error::Shape(format!("flavor mismatch {:?} vs {:?}", self.flavor, other.flavor)));
        }
        if self.dim() != other.dim() || (self.covariance.matrix() - other.covariance.matrix()).amax() > 1e-12 {
            return Err(Error::Shape("states refer to different covariances".into()));
        }
        Ok(())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        match &self.coeffs {
            Coefficients::Graded(c) => c.iter().map(|t| t.max_abs()).fold(0.0, f64::max),
            Coefficients::Bigraded(m) => m.values().flat_map(|t| t.coeffs.values()).map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Ordinary polynomial represented by a graded state.
    pub fn to_poly(&self) -> Result<Poly<Complex64>> {
        let c = self.graded()?;
        Ok(match self.flavor {
            ChaosFlavor::Real => wick_series_to_poly(c, &complex_matrix(self.covariance.matrix())),
            _ => Poly::from_tensors(self.dim(), c),
        })
    }

    /// Value of the represented function at `φ` (or `z` in the holomorphic flavor).
    pub fn evaluate(&self, phi: &[Complex64]) -> Result<Complex64> {
        Ok(self.to_poly()?.eval(phi))
    }

    /// Chaos scalar product: `Σ n!⟨a⁽ⁿ⁾, b⁽ⁿ⁾⟩_{Δⁿ}`, or `Σ n!m!` for bidegree states.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.compatible(other)?;
        let cov = self.covariance.matrix();
        match (&self.coeffs, &other.coeffs) {
            (Coefficients::Graded(a), Coefficients::Graded(b)) => {
                let g = complex_matrix(cov);
                Ok(a.iter().zip(b).enumerate().map(|(n, (x, y))| x.pairing(y, &g) * factorial(n)).sum())
            }
            (Coefficients::Bigraded(a), Coefficients::Bigraded(b)) => Ok(a
                .iter()
                .filter_map(|(k, x)| b.get(k).map(|y| x.pairing(y, cov) * (factorial(k.0) * factorial(k.1))))
                .sum()),
            _ => unreachable!("flavors checked"),
        }
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.inner_product(self)?.re.max(0.0).sqrt())
    }

    /// Pointwise product of the represented functions.
    pub fn pointwise_product(&self, other: &Self, policy: TruncationPolicy) -> Result<Product> {
        self.compatible(other)?;
        let (a, b) = (self.graded()?, other.graded()?);
        let g = complex_matrix(self.covariance.matrix());
        let d = self.dim();
        let mut out: Vec<SymTensor<Complex64>> = (0..=self.cutoff).map(|n| SymTensor::zeros(n, d)).collect();
        let mut dropped = 0.0f64;
        for x in a.iter().filter(|t| !t.is_zero()) {
            for y in b.iter().filter(|t| !t.is_zero()) {
                let parts = match self.flavor {
                    ChaosFlavor::Real => wick_product(x, y, &g),
                    _ => vec![(x.rank() + y.rank(), x.sym_product(y))],
                };
                for (deg, t) in parts {
                    if deg > self.cutoff {
                        if t.is_zero() {
                            continue;
                        }
                        if policy == TruncationPolicy::Error {
                            return Err(Error::Truncation { rank: deg, cutoff: self.cutoff });
                        }
                        dropped = dropped.max(t.max_abs());
                        continue;
                    }
                    out[deg] = out[deg].add(&t);
                }
            }
        }
        Ok(Product { state: self.with_graded(out), dropped })
    }

    /// `S[Ψ](ξ) = Σ ψ⁽ⁿ⁾·(Δξ)^{⊗n}`.
    pub fn s_transform(&self, xi: &[Complex64]) -> Result<Complex64> {
        let c = self.graded()?;
        if xi.len() != self.dim() {
            return Err(Error::Shape(format!("ξ has {} entries, expected {}", xi.len(), self.dim())));
        }
        let g = complex_matrix(self.covariance.matrix());
        let dx: Vec<Complex64> = (0..self.dim()).map(|i| (0..self.dim()).map(|j| g[(i, j)] * xi[j]).sum()).collect();
        Ok(c.iter().map(|t| t.eval(&dx)).sum())
    }

    /// `(∂Ψ)⁽ⁿ⁻¹⁾_x = n ψ⁽ⁿ⁾_{x,·}`, one state per direction `x`.
    pub fn malliavin_derivative(&self) -> Result<VectorField> {
        let c = self.graded()?;
        let d = self.dim();
        Ok((0..d)
            .map(|x| {
                let mut lowered: Vec<SymTensor<Complex64>> = c.iter().skip(1).map(|t| t.derivative(x)).collect();
                lowered.push(SymTensor::zeros(self.cutoff, d));
                self.with_graded(lowered)
            })
            .collect())
    }

    /// `∂* = φ − Δ∂` on `u = (u_x)`: `(∂*u)⁽ⁿ⁺¹⁾ = Σ_x e_x ⊗̂ u_x⁽ⁿ⁾`.
    ///
    /// The integrand is always symmetrized, so any non-symmetrizable part is discarded.
    pub fn skorokhod_integral(field: &[ChaosState], policy: TruncationPolicy) -> Result<Product> {
        let first = field.first().ok_or_else(|| Error::Shape("empty vector field".into()))?;
        let d = first.dim();
        if field.len() != d {
            return Err(Error::Shape(format!("vector field has {} components over {d} modes", field.len())));
        }
        let mut out: Vec<SymTensor<Complex64>> = (0..=first.cutoff).map(|n| SymTensor::zeros(n, d)).collect();
        let mut dropped = 0.0f64;
        for (x, u) in field.iter().enumerate() {
            first.compatible(u)?;
            let e = SymTensor::<Complex64>::basis_vector(d, x);
            for t in u.graded()?.iter().filter(|t| !t.is_zero()) {
                let raised = e.sym_product(t);
                let n = raised.rank();
                if n > first.cutoff {
                    if policy == TruncationPolicy::Error {
                        return Err(Error::Truncation { rank: n, cutoff: first.cutoff });
                    }
                    dropped = dropped.max(raised.max_abs());
                    continue;
                }
                out[n] = out[n].add(&raised);
            }
        }
        Ok(Product { state: first.with_graded(out), dropped })
    }

    /// `N`: multiplies degree `n` (bidegree `(n,m)`) by `n` (`n+m`).
    pub fn number_operator(&self) -> Self {
        match &self.coeffs {
            Coefficients::Graded(_) => self.map_graded(|n, t| t.scale(&c64(n as f64, 0.0))),
            Coefficients::Bigraded(m) => ChaosState {
                coeffs: Coefficients::Bigraded(
                    m.iter().map(|(k, t)| (*k, t.scale(c64((k.0 + k.1) as f64, 0.0)))).collect(),
                ),
                ..self.clone()
            },
        }
    }

    /// `Q`: multiplies bidegree `(n,m)` by `n − m`.
    pub fn charge_operator(&self) -> Result<Self> {
        match &self.coeffs {
            Coefficients::Bigraded(m) => Ok(ChaosState {
                coeffs: Coefficients::Bigraded(
                    m.iter().map(|(k, t)| (*k, t.scale(c64(k.0 as f64 - k.1 as f64, 0.0)))).collect(),
                ),
                ..self.clone()
            }),
            Coefficients::Graded(_) => Err(Error::Unsupported("the charge operator needs a bidegree state".into())),
        }
    }

    /// Segal isomorphism: weights coefficients by `√(n!)` (`√(n!m!)`).
    pub fn segal_isomorphism(&self) -> FockVector {
        let weighted = match &self.coeffs {
            Coefficients::Graded(_) => self.map_graded(|n, t| t.scale(&c64(factorial(n).sqrt(), 0.0))),
            Coefficients::Bigraded(m) => ChaosState {
                coeffs: Coefficients::Bigraded(
                    m.iter().map(|(k, t)| (*k, t.scale(c64((factorial(k.0) * factorial(k.1)).sqrt(), 0.0)))).collect(),
                ),
                ..self.clone()
            },
        };
        FockVector { inner: weighted }
    }
}

/// Image of the Segal isomorphism: coefficients weighted by `√(n!)` or `√(n!m!)`.
#[derive(Clone, Debug)]
pub struct FockVector {
    inner: ChaosState,
}

impl FockVector {
    pub fn coefficients(&self) -> &Coefficients {
        &self.inner.coeffs
    }

    /// Fock scalar product `Σ ⟨w⁽ⁿ⁾, w'⁽ⁿ⁾⟩_{Δⁿ}` (no factorials).
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let cov = self.inner.covariance.matrix();
        match (&self.inner.coeffs, &other.inner.coeffs) {
            (Coefficients::Graded(a), Coefficients::Graded(b)) => {
                let g = complex_matrix(cov);
                Ok(a.iter().zip(b).map(|(x, y)| x.pairing(y, &g)).sum())
            }
            (Coefficients::Bigraded(a), Coefficients::Bigraded(b)) => {
                Ok(a.iter().filter_map(|(k, x)| b.get(k).map(|y| x.pairing(y, cov))).sum())
            }
            _ => Err(Error::Shape("Fock vectors of different flavors".into())),
        }
    }

    /// Inverse Segal map.
    pub fn to_chaos(&self) -> ChaosState {
        let s = &self.inner;
        match &s.coeffs {
            Coefficients::Graded(_) => s.map_graded(|n, t| t.scale(&c64(1.0 / factorial(n).sqrt(), 0.0))),
            Coefficients::Bigraded(m) => ChaosState {
                coeffs: Coefficients::Bigraded(
                    m.iter()
                        .map(|(k, t)| (*k, t.scale(c64(1.0 / (factorial(k.0) * factorial(k.1)).sqrt(), 0.0))))
                        .collect(),
                ),
                ..s.clone()
            },
        }
    }
}

/// Options for recovering chaos coefficients from an S-transform.
#[derive(Clone, Copy, Debug)]
pub struct Extraction {
    /// Radius of the complex torus on which the generating function is sampled.
    pub radius: f64,
}

impl Default for Extraction {
    fn default() -> Self {
        Extraction { radius: 1.0 }
    }
}

/// Recovers `ψ⁽ⁿ⁾ = K^{⊗n}·(1/n!)∂ⁿS|₀` from a callable S-transform.
///
/// Derivatives at the origin are taken by a discrete Cauchy integral on the
/// torus `|ξ_j| = radius` with `cutoff+1` nodes per axis, which is exact for
/// generating functions of degree ≤ cutoff.
pub fn coefficients_from_s<F>(
    s: F,
    flavor: ChaosFlavor,
    covariance: Covariance,
    cutoff: usize,
    opts: Extraction,
) -> Result<ChaosState>
where
    F: Fn(&[Complex64]) -> Complex64,
{
    if flavor == ChaosFlavor::Bidegree {
        return Err(Error::Unsupported("S-transform extraction for bidegree states".into()));
    }
    let r = opts.radius;
    if !(r.is_finite() && r > 1e-6 && r < 1e6) {
        return Err(Error::Conditioning(format!("sampling radius {r} is degenerate")));
    }
    let d = covariance.dim();
    let m = cutoff + 1;
    let nodes = m.checked_pow(d as u32).filter(|&n| n <= 4_000_000).ok_or_else(|| {
        Error::Conditioning(format!("{m}^{d} sample points exceed the extraction budget"))
    })?;
    let roots: Vec<Complex64> = (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect();
    let mut samples = Vec::with_capacity(nodes);
    let mut idx = vec![0usize; d];
    for _ in 0..nodes {
        let xi: Vec<Complex64> = idx.iter().map(|&k| roots[k] * r).collect();
        samples.push((idx.clone(), s(&xi)));
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    let k = complex_matrix(covariance.inverse());
    let mut tensors = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        let mut chi = SymTensor::zeros(n, d);
        for key in sorted_keys(d, n) {
            let e = key.counts(d);
            let mut acc = Complex64::default();
            for (idx, v) in &samples {
                let phase: usize = idx.iter().zip(&e).map(|(a, b)| a * b).sum::<usize>() % m;
                acc += v * roots[phase].conj();
            }
            let coeff = acc / (nodes as f64 * r.powi(n as i32));
            chi.set(key.clone(), coeff / key.multiplicity() as f64);
        }
        tensors.push(chi.map_slots(&k));
    }
    ChaosState::from_tensors(flavor, covariance, cutoff, tensors)
}
