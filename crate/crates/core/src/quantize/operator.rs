//! Dense operators on truncated representation spaces.

use super::space::{Rep, Space};
use crate::error::{Error, Result};
use crate::scalar::c64;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub space: Space,
    pub matrix: CMatrix,
}

/// `{rep, cutoff, dim, rows:[[[re,im],…],…]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub rep: Rep,
    pub cutoff: usize,
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl TruncatedOperator {
    pub fn new(space: Space, matrix: CMatrix) -> Result<Self> {
        if matrix.shape() != (space.len(), space.len()) {
            return Err(Error::Shape(format!("matrix {:?} on a basis of size {}", matrix.shape(), space.len())));
        }
        Ok(TruncatedOperator { space, matrix })
    }

    pub fn zero(space: &Space) -> Self {
        let n = space.len();
        TruncatedOperator { space: space.clone(), matrix: CMatrix::zeros(n, n) }
    }

    pub fn identity(space: &Space) -> Self {
        let n = space.len();
        TruncatedOperator { space: space.clone(), matrix: CMatrix::identity(n, n) }
    }

    /// Multiplication by `z_x` (`α ↦ α + e_x`), dropping what leaves the truncation.
    pub fn raise(space: &Space, x: usize) -> Self {
        let mut op = Self::zero(space);
        for (j, k) in space.basis.keys().iter().enumerate() {
            if let Some(i) = space.raised(k, x) {
                op.matrix[(i, j)] = c64(1.0, 0.0);
            }
        }
        op
    }

    /// Coordinate derivative `∂_x` on the coefficient polynomial.
    pub fn deriv(space: &Space, x: usize) -> Self {
        let mut op = Self::zero(space);
        for (j, k) in space.basis.keys().iter().enumerate() {
            let m = k.count_of(x);
            if m > 0 {
                let i = space.basis.position(&k.without(x).expect("x ∈ α")).expect("sub-key");
                op.matrix[(i, j)] = c64(m as f64, 0.0);
            }
        }
        op
    }

    /// Multiplication by the coordinate function. In a Wick basis for
    /// covariance `C` this is `raise_x + C_{xy}∂_y`; the derivative commutes
    /// with Wick ordering, so `∂` is [`TruncatedOperator::deriv`] in both kinds of basis.
    pub fn mult(space: &Space, x: usize) -> Self {
        let mut op = Self::raise(space, x);
        if space.rep.wick_basis() {
            for y in 0..space.dim() {
                let c = space.cov[(x, y)];
                if c != 0.0 {
                    op = op.add(&Self::deriv(space, y).scale(c64(c, 0.0)));
                }
            }
        }
        op
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn same_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space)
                || (self.space.rep == other.space.rep && self.space.cutoff == other.space.cutoff),
            "operators live on different spaces"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_space(other);
        TruncatedOperator { space: self.space.clone(), matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_space(other);
        TruncatedOperator { space: self.space.clone(), matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TruncatedOperator { space: self.space.clone(), matrix: &self.matrix * c }
    }

    pub fn compose(&self, other: &Self) -> Self {
        self.same_space(other);
        TruncatedOperator { space: self.space.clone(), matrix: &self.matrix * &other.matrix }
    }

    /// Block of `self · other` on the smaller space `target`, without forming the full product.
    pub fn compose_into(&self, other: &Self, target: &Space) -> Result<Self> {
        self.same_space(other);
        if target.rep != self.space.rep || target.cutoff > self.space.cutoff {
            return Err(Error::Shape("compression target must be a smaller space of the same representation".into()));
        }
        let n = target.len();
        let m = self.matrix.rows(0, n) * other.matrix.columns(0, n);
        Ok(TruncatedOperator { space: target.clone(), matrix: m })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// `G⁻¹ Mᴴ G`, the adjoint for the space's inner product.
    pub fn adjoint(&self) -> Self {
        let g = self.space.gram().map(|v| c64(v, 0.0));
        let l = self.space.cholesky().map(|v| c64(v, 0.0));
        let rhs = self.matrix.adjoint() * &g;
        let y = l.solve_lower_triangular(&rhs).expect("Cholesky factor is invertible");
        let x = l.adjoint().solve_upper_triangular(&y).expect("Cholesky factor is invertible");
        TruncatedOperator { space: self.space.clone(), matrix: x }
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * v
    }

    /// Block on degrees `≤ cutoff`, as an operator on the smaller space.
    pub fn compress(&self, target: &Space) -> Result<Self> {
        if target.rep != self.space.rep || target.cutoff > self.space.cutoff {
            return Err(Error::Shape("compression target must be a smaller space of the same representation".into()));
        }
        let n = target.len();
        Ok(TruncatedOperator { space: target.clone(), matrix: self.matrix.view((0, 0), (n, n)).clone_owned() })
    }

    /// Matrix in a basis orthonormal for the space's inner product: `Lᴴ M L⁻ᴴ`.
    pub fn orthonormal(&self) -> CMatrix {
        let l = self.space.cholesky().map(|v| c64(v, 0.0));
        // (M L⁻ᴴ)ᴴ = L⁻¹ Mᴴ
        let right = l
            .solve_lower_triangular(&self.matrix.adjoint())
            .expect("Cholesky factor is invertible")
            .adjoint();
        l.adjoint() * right
    }

    /// Largest matrix element of `self − other` in an orthonormal basis.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).orthonormal().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// [`TruncatedOperator::distance`] restricted to degrees `≤ cutoff − margin`.
    pub fn interior_distance(&self, other: &Self, margin: usize) -> f64 {
        let n = self.space.basis.size_through(self.space.cutoff.saturating_sub(margin));
        let m = self.sub(other).orthonormal();
        m.view((0, 0), (n, n)).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value in an orthonormal basis.
    pub fn operator_norm(&self) -> f64 {
        self.orthonormal().singular_values().max()
    }

    pub fn max_abs(&self) -> f64 {
        self.orthonormal().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            rep: self.space.rep,
            cutoff: self.space.cutoff,
            dim: self.space.dim(),
            rows: (0..self.len()).map(|i| self.matrix.row(i).iter().map(|v| [v.re, v.im]).collect()).collect(),
        }
    }
}

/// `Σ_y m_{xy} ops[y]`.
pub fn contract(m: &DMatrix<Complex64>, ops: &[TruncatedOperator], x: usize) -> TruncatedOperator {
    let mut out = TruncatedOperator::zero(&ops[0].space);
    for (y, op) in ops.iter().enumerate() {
        let c = m[(x, y)];
        if c != Complex64::default() {
            out = out.add(&op.scale(c));
        }
    }
    out
}
