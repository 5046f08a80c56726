use super::format::{format_monomial, format_poly, Coefficient};
use super::{check_line, matrix_from_rows, Meta, OutDir, Outcome, Overrides};
use crate::chaos::{monomial_to_wick, product_weights, wick_order, wick_series_to_poly, ChaosFlavor, ChaosState};
use crate::error::{Error, Result};
use crate::gaussian::{ConventionScale, Covariance, GaussianMeasure};
use crate::poly::Poly;
use crate::scalar::{factorial, Rational, Scalar};
use crate::symtensor::{sorted_keys, MultiIndex, SymTensor, TruncationPolicy};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};
use std::path::Path;

const TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChaosConfig {
    /// Covariance `C` with `E[φ_a φ_b] = C_ab`; rows of a square matrix.
    pub covariance: Vec<Vec<f64>>,
    #[serde(default = "default_degree")]
    pub max_degree: usize,
    /// Rational arithmetic for the conversion tables.
    #[serde(default)]
    pub exact: bool,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    /// Largest `n + m` in the quadrature check of `:φ^α::φ^β:`.
    #[serde(default = "default_product")]
    pub product_degree: usize,
}

fn default_degree() -> usize {
    6
}
fn default_order() -> usize {
    24
}
fn default_product() -> usize {
    6
}

impl Default for ChaosConfig {
    fn default() -> Self {
        ChaosConfig {
            covariance: vec![vec![1.0]],
            max_degree: default_degree(),
            exact: false,
            quadrature_order: default_order(),
            product_degree: default_product(),
        }
    }
}

impl ChaosConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.cutoff {
            self.max_degree = n;
        }
        self.exact |= o.exact;
    }
}

#[derive(Clone, Debug, Serialize)]
struct ConversionRow {
    degree: usize,
    wick: String,
    monomials: String,
}

#[derive(Clone, Debug, Serialize)]
struct ProductCheck {
    /// `k!C(n,k)C(m,k)` against a bipartite-matching recursion, `n, m ≤ max_degree`.
    weights_match: bool,
    cases: usize,
    max_residual: Option<f64>,
    note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
struct OrthogonalityRow {
    left: String,
    right: String,
    quadrature: f64,
    expected: f64,
}

#[derive(Clone, Debug, Serialize)]
struct ChaosResult {
    arithmetic: &'static str,
    conversion_table: Vec<ConversionRow>,
    closure_residual: f64,
    product_formula: ProductCheck,
    orthogonality: Vec<OrthogonalityRow>,
    orthogonality_max_residual: Option<f64>,
}

fn to_rational(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::Config(format!("covariance entry {x} has no rational form")))
}

fn conversion<S: Scalar + Coefficient>(cov: &DMatrix<S>, top: usize) -> (Vec<ConversionRow>, f64) {
    let d = cov.nrows();
    let mut rows = Vec::new();
    let mut closure: f64 = 0.0;
    for n in 0..=top {
        for key in sorted_keys(d, n) {
            let mono = Poly::monomial(d, key.clone(), S::one());
            let wick = wick_order(&mono, cov);
            rows.push(ConversionRow {
                degree: n,
                wick: format!(":{}:", if n == 0 { "1".into() } else { format_monomial(&key, d) }),
                monomials: format_poly(&wick),
            });
            let mut t = SymTensor::zeros(n, d);
            t.set(key, S::one());
            let back = wick_series_to_poly(&monomial_to_wick(&t, cov), cov);
            closure = closure.max(back.sub(&Poly::from_tensors(d, std::slice::from_ref(&t))).max_abs());
        }
    }
    (rows, closure)
}

/// Partial matchings of size `k` between `n` and `m` legs.
fn matchings(n: usize, m: usize, k: usize) -> i64 {
    if k == 0 {
        return 1;
    }
    if n < k || m < k {
        return 0;
    }
    matchings(n - 1, m, k) + m as i64 * matchings(n - 1, m - 1, k - 1)
}

fn unit_state(cov: &Covariance, key: &MultiIndex, cutoff: usize) -> Result<ChaosState> {
    let mut t = SymTensor::zeros(key.rank(), cov.dim());
    t.set(key.clone(), Complex64::new(1.0, 0.0));
    ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), cutoff, vec![t])
}

fn product_quadrature(cov: &Covariance, top: usize, order: usize) -> Result<(usize, f64)> {
    let d = cov.dim();
    let mu = GaussianMeasure::new(cov.clone(), ConventionScale::One);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 0..=top {
        for m in n..=top - n {
            for ka in sorted_keys(d, n) {
                for kb in sorted_keys(d, m) {
                    let a = unit_state(cov, &ka, n + m)?;
                    let b = unit_state(cov, &kb, n + m)?;
                    let ab = a.pointwise_product(&b, TruncationPolicy::Error)?.state;
                    let pa = a.to_poly()?;
                    let pb = b.to_poly()?;
                    for r in 0..=n + m {
                        for kg in sorted_keys(d, r) {
                            let g = unit_state(cov, &kg, n + m)?;
                            let pg = g.to_poly()?;
                            let oracle = mu.quadrature_expectation_c(
                                |x| {
                                    let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                                    pa.eval(&z) * pb.eval(&z) * pg.eval(&z)
                                },
                                order,
                            )?;
                            let formula = g.inner_product(&ab)?;
                            worst = worst.max((oracle - formula).norm() / (1.0 + formula.norm()));
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok((cases, worst))
}

fn orthogonality(cov: &Covariance, top: usize, order: usize) -> Result<Vec<OrthogonalityRow>> {
    let d = cov.dim();
    let mu = GaussianMeasure::new(cov.clone(), ConventionScale::One);
    let keys: Vec<MultiIndex> = (0..=top).flat_map(|n| sorted_keys(d, n)).collect();
    let polys: Vec<(ChaosState, Poly<Complex64>)> = keys
        .iter()
        .map(|k| {
            let s = unit_state(cov, k, top)?;
            let p = s.to_poly()?;
            Ok((s, p))
        })
        .collect::<Result<_>>()?;
    let label = |k: &MultiIndex| format!(":{}:", if k.rank() == 0 { "1".into() } else { format_monomial(k, d) });
    let mut rows = Vec::new();
    for (i, (si, pi)) in polys.iter().enumerate() {
        for (j, (sj, pj)) in polys.iter().enumerate().skip(i) {
            let q = mu.quadrature_expectation_c(
                |x| {
                    let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                    pi.eval(&z) * pj.eval(&z)
                },
                order,
            )?;
            let expected = if d == 1 {
                let (n, m) = (keys[i].rank(), keys[j].rank());
                if n == m {
                    factorial(n) * cov.matrix()[(0, 0)].powi(n as i32)
                } else {
                    0.0
                }
            } else {
                si.inner_product(sj)?.re
            };
            rows.push(OrthogonalityRow { left: label(&keys[i]), right: label(&keys[j]), quadrature: q.re, expected });
        }
    }
    Ok(rows)
}

pub fn cmd_chaos(cfg: &ChaosConfig, seed: Option<u64>, out: &Path) -> Result<Outcome> {
    let m = matrix_from_rows("covariance", &cfg.covariance)?;
    let cov = Covariance::real(m.clone()).map_err(|e| Error::Config(format!("covariance: {e}")))?;
    let d = cov.dim();
    let top = cfg.max_degree;

    let (conversion_table, closure_residual) = if cfg.exact {
        let mut q = DMatrix::from_element(d, d, Rational::from_integer(0));
        for i in 0..d {
            for j in 0..d {
                q[(i, j)] = to_rational(m[(i, j)])?;
            }
        }
        conversion(&q, top)
    } else {
        conversion(&m, top)
    };

    let weights_match = (0..=top).all(|n| {
        (0..=top).all(|mm| product_weights(n, mm).iter().enumerate().all(|(k, &w)| w == matchings(n, mm, k)))
    });
    let product_top = cfg.product_degree.min(top);
    let product_formula = if d <= 2 {
        let (cases, worst) = product_quadrature(&cov, product_top, cfg.quadrature_order)?;
        ProductCheck { weights_match, cases, max_residual: Some(worst), note: None }
    } else {
        ProductCheck {
            weights_match,
            cases: 0,
            max_residual: None,
            note: Some(format!("quadrature products run for d ≤ 2, got d = {d}")),
        }
    };
    let (orth, orth_max) = if d <= 3 {
        let rows = orthogonality(&cov, if d == 1 { top } else { top.min(4) }, cfg.quadrature_order)?;
        let worst = rows.iter().map(|r| (r.quadrature - r.expected).abs() / (1.0 + r.expected.abs())).fold(0.0, f64::max);
        (rows, Some(worst))
    } else {
        (Vec::new(), None)
    };

    let mut summary = Vec::new();
    let mut pass = true;
    let mut push = |(ok, line): (bool, String)| {
        pass &= ok;
        summary.push(line);
    };
    if cfg.exact {
        push((closure_residual == 0.0, format!("{} conversion closure exact", if closure_residual == 0.0 { "pass" } else { "FAIL" })));
    } else {
        push(check_line("conversion closure", closure_residual, 1e-10));
    }
    push((weights_match, format!("{} product weights vs matchings", if weights_match { "pass" } else { "FAIL" })));
    if let Some(r) = product_formula.max_residual {
        push(check_line("product formula vs quadrature", r, TOL));
    }
    if let Some(r) = orth_max {
        push(check_line("Wick orthogonality", r, TOL));
    }

    let result = ChaosResult {
        arithmetic: if cfg.exact { "rational" } else { "f64" },
        conversion_table,
        closure_residual,
        product_formula,
        orthogonality: orth,
        orthogonality_max_residual: orth_max,
    };
    let meta = Meta::new("chaos", seed, cfg)?;
    let dir = OutDir::create(out)?;
    let file = dir.write_json("chaos.json", &meta, &result)?;
    Ok(Outcome { files: vec![file], pass, summary })
}
