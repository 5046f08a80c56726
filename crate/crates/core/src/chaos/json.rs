//! JSON form `{flavor, dim, cutoff, covariance, coeffs:[{degree, entries:[{index, re, im}]}]}`.
//!
//! Bidegree entries carry an extra `anti` field: the last `anti` entries of
//! `index` belong to the antiholomorphic group.

use super::state::{BiTensor, ChaosFlavor, ChaosState, Coefficients};
use crate::error::{Error, Result};
use crate::gaussian::{Covariance, Flavor};
use crate::scalar::c64;
use crate::symtensor::{MultiIndex, SymTensor};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeJson {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anti: Option<usize>,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChaosJson {
    pub flavor: ChaosFlavor,
    pub dim: usize,
    pub cutoff: usize,
    pub covariance: Vec<Vec<f64>>,
    pub coeffs: Vec<DegreeJson>,
}

impl ChaosState {
    pub fn to_json(&self) -> ChaosJson {
        let cov = self.covariance.matrix();
        let covariance = (0..cov.nrows()).map(|i| cov.row(i).iter().copied().collect()).collect();
        let coeffs = match &self.coeffs {
            Coefficients::Graded(c) => c
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.is_zero())
                .map(|(n, t)| DegreeJson {
                    degree: n,
                    anti: None,
                    entries: t.iter().map(|(k, v)| EntryJson { index: k.entries().to_vec(), re: v.re, im: v.im }).collect(),
                })
                .collect(),
            Coefficients::Bigraded(m) => m
                .iter()
                .map(|((n, a), t)| DegreeJson {
                    degree: n + a,
                    anti: Some(*a),
                    entries: t
                        .coeffs
                        .iter()
                        .map(|((h, an), v)| {
                            let mut index = h.entries().to_vec();
                            index.extend_from_slice(an.entries());
                            EntryJson { index, re: v.re, im: v.im }
                        })
                        .collect(),
                })
                .collect(),
        };
        ChaosJson { flavor: self.flavor, dim: self.dim(), cutoff: self.cutoff, covariance, coeffs }
    }

    pub fn from_json(j: &ChaosJson) -> Result<Self> {
        let d = j.dim;
        if j.covariance.len() != d || j.covariance.iter().any(|r| r.len() != d) {
            return Err(Error::Shape(format!("covariance must be {d}×{d}")));
        }
        let flavor = if j.flavor == ChaosFlavor::Real { Flavor::Real } else { Flavor::Complex };
        let cov = Covariance::new(DMatrix::from_fn(d, d, |r, c| j.covariance[r][c]), flavor)?;
        let check = |index: &[usize], len: usize| -> Result<()> {
            if index.len() != len || index.iter().any(|&i| i >= d) {
                return Err(Error::Shape(format!("bad index {index:?}")));
            }
            Ok(())
        };
        if j.flavor == ChaosFlavor::Bidegree {
            let mut tensors = BTreeMap::new();
            for block in &j.coeffs {
                let anti = block.anti.ok_or_else(|| Error::Shape("bidegree block without `anti`".into()))?;
                let hol = block.degree.checked_sub(anti).ok_or_else(|| Error::Shape("anti exceeds degree".into()))?;
                let t = tensors.entry((hol, anti)).or_insert_with(|| BiTensor::zeros(hol, anti, d));
                for e in &block.entries {
                    check(&e.index, block.degree)?;
                    let (h, a) = e.index.split_at(hol);
                    t.set(MultiIndex::new(h.to_vec()), MultiIndex::new(a.to_vec()), c64(e.re, e.im));
                }
            }
            return ChaosState::from_bitensors(cov, j.cutoff, tensors.into_values().collect());
        }
        let mut tensors = Vec::new();
        for block in &j.coeffs {
            let mut t = SymTensor::<Complex64>::zeros(block.degree, d);
            for e in &block.entries {
                check(&e.index, block.degree)?;
                t.set(MultiIndex::new(e.index.clone()), c64(e.re, e.im));
            }
            tensors.push(t);
        }
        ChaosState::from_tensors(j.flavor, cov, j.cutoff, tensors)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}
