//! Finite-dimensional Gaussian measures and the quadrature / Monte-Carlo oracles.

use crate::error::{Error, Result};
use crate::symtensor::MultiIndex;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Real,
    Complex,
}

/// A symmetric positive-definite covariance `Δ` together with `K = Δ⁻¹`.
#[derive(Clone, Debug)]
pub struct Covariance {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    sqrt: DMatrix<f64>,
    pub flavor: Flavor,
}

const SYM_TOL: f64 = 1e-12;
const PD_TOL: f64 = 1e-12;

impl Covariance {
    pub fn new(matrix: DMatrix<f64>, flavor: Flavor) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d || d == 0 {
            return Err(Error::Shape(format!("covariance must be square, got {}×{}", d, matrix.ncols())));
        }
        let scale = matrix.amax().max(1.0);
        if (&matrix - matrix.transpose()).amax() > SYM_TOL * scale {
            return Err(Error::Shape("covariance is not symmetric".into()));
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        let norm = sym.norm();
        let (sqrt, inverse) = match sym.clone().cholesky() {
            Some(ch) if ch.l().diagonal().iter().all(|&v| v * v > PD_TOL * norm) => {
                (ch.l(), ch.inverse())
            }
            _ => {
                let eig = SymmetricEigen::new(sym.clone());
                let min = eig.eigenvalues.min();
                if min <= PD_TOL * norm {
                    return Err(Error::NotPositiveDefinite(format!("smallest eigenvalue {min:e}")));
                }
                let q = &eig.eigenvectors;
                let s = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
                let inv = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v));
                (q * s * q.transpose(), q * inv * q.transpose())
            }
        };
        let check = (&sym * &inverse - DMatrix::identity(d, d)).amax();
        if check > 1e-10 * scale.max(inverse.amax()) {
            return Err(Error::NotPositiveDefinite(format!("Δ·K residual {check:e}")));
        }
        Ok(Covariance { matrix: sym, inverse, sqrt, flavor })
    }

    pub fn real(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(matrix, Flavor::Real)
    }

    pub fn identity(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d), Flavor::Real).expect("identity is PD")
    }

    pub fn scalar(v: f64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, v), Flavor::Real)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `K = Δ⁻¹`.
    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    /// A factor `L` with `L Lᵗ = Δ`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.sqrt
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(&self.matrix * s, self.flavor)
    }

    pub fn with_flavor(&self, flavor: Flavor) -> Self {
        let mut c = self.clone();
        c.flavor = flavor;
        c
    }
}

/// Whether the characteristic functional uses `Δ` or `Δ/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConventionScale {
    One,
    Half,
}

impl ConventionScale {
    pub fn factor(self) -> f64 {
        match self {
            ConventionScale::One => 1.0,
            ConventionScale::Half => 0.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GaussianMeasure {
    pub covariance: Covariance,
    pub mean: DVector<f64>,
    pub scale: ConventionScale,
    effective: Covariance,
}

impl GaussianMeasure {
    pub fn new(covariance: Covariance, scale: ConventionScale) -> Self {
        let d = covariance.dim();
        Self::with_mean(covariance, DVector::zeros(d), scale).expect("zero mean fits")
    }

    pub fn with_mean(covariance: Covariance, mean: DVector<f64>, scale: ConventionScale) -> Result<Self> {
        if mean.len() != covariance.dim() {
            return Err(Error::Shape("mean length differs from covariance dimension".into()));
        }
        let effective = covariance.scaled(scale.factor())?;
        Ok(GaussianMeasure { covariance, mean, scale, effective })
    }

    pub fn standard(d: usize) -> Self {
        Self::new(Covariance::identity(d), ConventionScale::One)
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    /// The covariance actually seen by moments: `Δ` or `Δ/2`.
    pub fn effective(&self) -> &Covariance {
        &self.effective
    }

    /// Real flavor: `exp(iξ·m − ½ ξ·Δ_eff·ξ)`.
    pub fn characteristic_functional(&self, xi: &[f64]) -> Complex64 {
        let x = DVector::from_column_slice(xi);
        let q = (x.transpose() * self.effective.matrix() * &x)[(0, 0)];
        let phase = x.dot(&self.mean);
        Complex64::new(-0.5 * q, phase).exp()
    }

    /// Complex flavor: `∫ e^{i(ρφ + conj(ρφ))} dμ_c = exp(−ρ̄ Δ_eff ρ)`.
    pub fn complex_characteristic_functional(&self, rho: &[Complex64]) -> f64 {
        let d = self.dim();
        let mut q = 0.0;
        for x in 0..d {
            for y in 0..d {
                q += (rho[x].conj() * self.effective.matrix()[(x, y)] * rho[y]).re;
            }
        }
        (-q).exp()
    }

    /// Isserlis: sum over complete pairings of products of `Δ_eff`.
    pub fn isserlis_moment(&self, index: &MultiIndex) -> Result<f64> {
        if self.mean.amax() != 0.0 {
            return Err(Error::Unsupported("nonzero mean; translate the measure first".into()));
        }
        fn rec(slots: &[usize], c: &DMatrix<f64>) -> f64 {
            if slots.is_empty() {
                return 1.0;
            }
            if slots.len() % 2 == 1 {
                return 0.0;
            }
            let first = slots[0];
            let mut acc = 0.0;
            for k in 1..slots.len() {
                let g = c[(first, slots[k])];
                if g == 0.0 {
                    continue;
                }
                let rest: Vec<usize> = slots[1..]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i + 1 != k)
                    .map(|(_, &s)| s)
                    .collect();
                acc += g * rec(&rest, c);
            }
            acc
        }
        Ok(rec(index.entries(), self.effective.matrix()))
    }

    /// Cameron–Martin factor `exp(−½‖h‖²_Δ + ⟨h, φ⟩_Δ)`.
    pub fn translate_density(&self, h: &[f64], phi: &[f64]) -> f64 {
        let k = self.effective.inverse();
        let h = DVector::from_column_slice(h);
        let p = DVector::from_column_slice(phi) - &self.mean;
        let hh = (h.transpose() * k * &h)[(0, 0)];
        let hp = (h.transpose() * k * &p)[(0, 0)];
        (-0.5 * hh + hp).exp()
    }

    /// Tensorized Gauss–Hermite estimate of `∫ f dμ` after whitening.
    pub fn quadrature_expectation<F>(&self, f: F, order: usize) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64,
    {
        let c = self.quadrature_expectation_c(|x| Complex64::new(f(x), 0.0), order)?;
        Ok(c.re)
    }

    pub fn quadrature_expectation_c<F>(&self, f: F, order: usize) -> Result<Complex64>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let d = self.dim();
        if d > 3 {
            return Err(Error::OracleScope(format!("quadrature supports d ≤ 3, got {d}")));
        }
        if order == 0 || order > 64 {
            return Err(Error::OracleScope(format!("quadrature order must be 1..=64, got {order}")));
        }
        let rule = gauss_hermite(order);
        let l = self.effective.factor();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; d];
        let mut z = DVector::zeros(d);
        loop {
            let mut w = 1.0;
            for k in 0..d {
                z[k] = rule.nodes[idx[k]];
                w *= rule.weights[idx[k]];
            }
            let x = l * &z + &self.mean;
            acc += f(x.as_slice()) * w;
            let mut k = 0;
            loop {
                if k == d {
                    return Ok(acc);
                }
                idx[k] += 1;
                if idx[k] < order {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Deterministic samples for a given seed.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let d = self.dim();
        let l = self.effective.factor();
        (0..count)
            .map(|_| {
                let z = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
                let x: DVector<f64> = l * z + &self.mean;
                x.as_slice().to_vec()
            })
            .collect()
    }
}

/// Probabilists' Gauss–Hermite rule normalized to a probability measure.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Golub–Welsch on the Jacobi matrix of the probabilists' Hermite recursion.
pub fn gauss_hermite(order: usize) -> QuadratureRule {
    let mut j = DMatrix::zeros(order, order);
    for k in 1..order {
        let b = (k as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    }
}
