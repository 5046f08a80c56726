//! Pairing (Feynman) diagrams: enumeration and evaluation.

use crate::error::{Error, Result};
use crate::gaussian::Covariance;
use crate::symtensor::SymTensor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingDiagram {
    pub vertices: usize,
    pub pairs: Vec<(usize, usize)>,
    pub unpaired: Vec<usize>,
}

impl PairingDiagram {
    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_complete(&self) -> bool {
        self.unpaired.is_empty()
    }
}

/// Streams every diagram with `rank` pairs on `n` vertices to `visit`.
///
/// The smallest vertex not yet placed is either left unpaired or paired with a
/// larger one, so the order is deterministic and each diagram appears once.
pub fn visit_diagrams<F: FnMut(&PairingDiagram)>(n: usize, rank: usize, mut visit: F) -> Result<()> {
    if 2 * rank > n {
        return Err(Error::Shape(format!("rank {rank} too large for {n} vertices")));
    }
    let mut placed = vec![false; n];
    let mut cur = PairingDiagram { vertices: n, pairs: Vec::new(), unpaired: Vec::new() };
    rec(&mut placed, 0, rank, n - 2 * rank, &mut cur, &mut visit);
    Ok(())
}

fn rec<F: FnMut(&PairingDiagram)>(
    placed: &mut [bool],
    start: usize,
    pairs_left: usize,
    free_left: usize,
    cur: &mut PairingDiagram,
    visit: &mut F,
) {
    let Some(v) = (start..placed.len()).find(|&i| !placed[i]) else {
        visit(cur);
        return;
    };
    placed[v] = true;
    if free_left > 0 {
        cur.unpaired.push(v);
        rec(placed, v + 1, pairs_left, free_left - 1, cur, visit);
        cur.unpaired.pop();
    }
    if pairs_left > 0 {
        for w in v + 1..placed.len() {
            if placed[w] {
                continue;
            }
            placed[w] = true;
            cur.pairs.push((v, w));
            rec(placed, v + 1, pairs_left - 1, free_left, cur, visit);
            cur.pairs.pop();
            placed[w] = false;
        }
    }
    placed[v] = false;
}

pub fn enumerate_diagrams(n: usize, rank: usize) -> Result<Vec<PairingDiagram>> {
    let mut out = Vec::new();
    visit_diagrams(n, rank, |d| out.push(d.clone()))?;
    Ok(out)
}

/// `C(n,2r)·(2r−1)!!`.
pub fn diagram_count(n: usize, rank: usize) -> i64 {
    crate::scalar::binomial(n, 2 * rank) * crate::scalar::double_factorial_odd(rank)
}

/// Product of `ψⁱΔψʲ` over the pairs, times the symmetrized unpaired vectors.
pub fn evaluate_diagram(diag: &PairingDiagram, vectors: &[Vec<f64>], cov: &Covariance) -> Result<SymTensor<f64>> {
    if vectors.len() != diag.vertices {
        return Err(Error::Shape(format!("{} vectors for {} vertices", vectors.len(), diag.vertices)));
    }
    let d = cov.dim();
    if vectors.iter().any(|v| v.len() != d) {
        return Err(Error::Shape("vector length differs from covariance dimension".into()));
    }
    let c = cov.matrix();
    let mut weight = 1.0;
    for &(i, j) in &diag.pairs {
        let mut s = 0.0;
        for x in 0..d {
            for y in 0..d {
                s += vectors[i][x] * c[(x, y)] * vectors[j][y];
            }
        }
        weight *= s;
    }
    let mut t = SymTensor::scalar(d, weight);
    for &u in &diag.unpaired {
        t = t.sym_product(&SymTensor::from_vector(&vectors[u]));
    }
    Ok(t)
}

/// Gaussian moment `E[∏ ⟨ψⁱ, φ⟩]` as a sum over complete diagrams.
pub fn wick_moment(vectors: &[Vec<f64>], cov: &Covariance) -> Result<f64> {
    let n = vectors.len();
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    let mut err = None;
    visit_diagrams(n, n / 2, |dg| match evaluate_diagram(dg, vectors, cov) {
        Ok(t) => acc += t.get(&crate::symtensor::MultiIndex::empty()),
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}
