//! Truncated polynomial spaces carrying the four representations.

use crate::chaos::{ChaosFlavor, ChaosState};
use crate::error::{Error, Result};
use crate::gaussian::{Covariance, Flavor};
use crate::kahler::ComplexStructureBlocks;
use crate::scalar::c64;
use crate::symtensor::{Basis, MultiIndex, SymTensor};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rep {
    /// Holomorphic functions of `φ`, monomial basis, measure covariance `Δ`.
    Holomorphic,
    /// Real functions of the field, Wick basis for covariance `Δ/2`.
    Schrodinger,
    /// Holomorphic functions in the antiholomorphic coordinates, covariance `−D`.
    Antiholomorphic,
    /// Real functions of the momentum, Wick basis for covariance `−D/2`.
    FieldMomentum,
}

impl Rep {
    pub const ALL: [Rep; 4] = [Rep::Holomorphic, Rep::Schrodinger, Rep::Antiholomorphic, Rep::FieldMomentum];

    pub fn wick_basis(self) -> bool {
        matches!(self, Rep::Schrodinger | Rep::FieldMomentum)
    }

    pub fn name(self) -> &'static str {
        match self {
            Rep::Holomorphic => "holomorphic",
            Rep::Schrodinger => "schrodinger",
            Rep::Antiholomorphic => "antiholomorphic",
            Rep::FieldMomentum => "field-momentum",
        }
    }
}

/// A representation space truncated at a total degree.
///
/// Coefficient vectors are indexed by sorted multi-indices `α`; the basis
/// function is the monomial `z^α` or the Wick monomial `:φ^α:` of the basis
/// covariance.
#[derive(Clone, Debug)]
pub struct RepSpace {
    pub rep: Rep,
    pub blocks: ComplexStructureBlocks,
    pub cutoff: usize,
    pub basis: Basis,
    /// Covariance of the measure (and of the Wick basis when there is one).
    pub cov: DMatrix<f64>,
    gram: DMatrix<f64>,
    /// Per-degree lower Cholesky factors of the Gram matrix, assembled block-diagonally.
    chol: DMatrix<f64>,
}

pub type Space = Arc<RepSpace>;

impl RepSpace {
    pub fn new(rep: Rep, blocks: &ComplexStructureBlocks, cutoff: usize) -> Result<Space> {
        let cov = match rep {
            Rep::Holomorphic => blocks.delta.clone(),
            Rep::Schrodinger => &blocks.delta * 0.5,
            Rep::Antiholomorphic => -&blocks.d,
            Rep::FieldMomentum => &blocks.d * -0.5,
        };
        Covariance::real(cov.clone())?;
        let basis = Basis::new(blocks.dim(), cutoff);
        let gram = gram_matrix(&basis, &cov);
        let mut chol = DMatrix::zeros(basis.len(), basis.len());
        for n in 0..=cutoff {
            let r = basis.degree_range(n);
            let blk = gram.view((r.start, r.start), (r.len(), r.len())).clone_owned();
            let l = blk
                .cholesky()
                .ok_or_else(|| Error::NotPositiveDefinite(format!("Gram block of degree {n}")))?
                .l();
            chol.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(&l);
        }
        Ok(Arc::new(RepSpace { rep, blocks: blocks.clone(), cutoff, basis, cov, gram, chol }))
    }

    /// Same representation with a larger cutoff.
    pub fn padded(&self, pad: usize) -> Result<Space> {
        RepSpace::new(self.rep, &self.blocks, self.cutoff + pad)
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Result<Space> {
        RepSpace::new(self.rep, &self.blocks, cutoff)
    }

    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn cholesky(&self) -> &DMatrix<f64> {
        &self.chol
    }

    /// Commutator `[ann_x, cre_y]` of this representation's ladder operators.
    pub fn commutator_matrix(&self) -> DMatrix<f64> {
        match self.rep {
            Rep::Holomorphic | Rep::Schrodinger => self.blocks.delta.clone(),
            Rep::Antiholomorphic | Rep::FieldMomentum => -&self.blocks.d,
        }
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.len());
        v[0] = c64(1.0, 0.0);
        v
    }

    pub fn inner(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
        let g = self.gram.map(|v| c64(v, 0.0));
        (a.adjoint() * g * b)[(0, 0)]
    }

    pub fn norm(&self, a: &DVector<Complex64>) -> f64 {
        self.inner(a, a).re.max(0.0).sqrt()
    }

    /// Coefficient vector of a chaos state whose covariance matches the basis.
    pub fn from_state(&self, s: &ChaosState) -> Result<DVector<Complex64>> {
        if (s.covariance.matrix() - &self.cov).amax() > 1e-12 {
            return Err(Error::Shape("state covariance does not match the representation".into()));
        }
        let mut v = DVector::zeros(self.len());
        for (n, t) in s.graded()?.iter().enumerate() {
            for (k, c) in t.iter() {
                let i = self.basis.position(k).ok_or(Error::Truncation { rank: n, cutoff: self.cutoff })?;
                v[i] = c * k.multiplicity() as f64;
            }
        }
        Ok(v)
    }

    pub fn to_state(&self, v: &DVector<Complex64>) -> Result<ChaosState> {
        let d = self.dim();
        let mut tensors: Vec<SymTensor<Complex64>> = (0..=self.cutoff).map(|n| SymTensor::zeros(n, d)).collect();
        for (i, k) in self.basis.keys().iter().enumerate() {
            tensors[k.rank()].set(k.clone(), v[i] / k.multiplicity() as f64);
        }
        let (flavor, cflavor) = if self.rep.wick_basis() {
            (ChaosFlavor::Real, Flavor::Real)
        } else {
            (ChaosFlavor::Holomorphic, Flavor::Complex)
        };
        ChaosState::from_tensors(flavor, Covariance::new(self.cov.clone(), cflavor)?, self.cutoff, tensors)
    }

    /// Index of `α + e_x`, if still inside the truncation.
    pub(crate) fn raised(&self, key: &MultiIndex, x: usize) -> Option<usize> {
        if key.rank() >= self.cutoff {
            return None;
        }
        self.basis.position(&key.with(x))
    }
}

/// `⟨b_α, b_β⟩` by the recursion `⟨z_x p, q⟩ = ⟨p, C_{xy}∂_y q⟩`.
fn gram_matrix(basis: &Basis, cov: &DMatrix<f64>) -> DMatrix<f64> {
    let n = basis.len();
    let d = cov.nrows();
    let mut g = DMatrix::zeros(n, n);
    g[(0, 0)] = 1.0;
    for deg in 1..=basis.cutoff {
        for i in basis.degree_range(deg) {
            let a = basis.key(i);
            let x = a.entries()[0];
            let ia = basis.position(&a.without(x).expect("x ∈ α")).expect("sub-key");
            for j in basis.degree_range(deg) {
                let b = basis.key(j);
                let mut acc = 0.0;
                for y in 0..d {
                    let c = cov[(x, y)];
                    let m = b.count_of(y);
                    if c == 0.0 || m == 0 {
                        continue;
                    }
                    let jb = basis.position(&b.without(y).expect("y ∈ β")).expect("sub-key");
                    acc += c * m as f64 * g[(ia, jb)];
                }
                g[(i, j)] = acc;
            }
        }
    }
    g
}
