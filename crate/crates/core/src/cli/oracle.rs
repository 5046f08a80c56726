use super::quantize::{star_row, StarRow};
use super::{check_line, Meta, OutDir, Outcome, Overrides};
use crate::diagrams::wick_moment;
use crate::error::{Error, Result};
use crate::gaussian::{ConventionScale, Covariance, GaussianMeasure};
use crate::kahler::ComplexStructureBlocks;
use crate::chaos::hermite;
use crate::scalar::factorial;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub dim: usize,
    pub instances: usize,
    pub max_rank: usize,
    pub quadrature_order: usize,
    /// Adds Monte-Carlo columns to the moment table.
    pub mc: bool,
    pub mc_samples: usize,
    /// Degree bound of the one-dimensional orthogonality table.
    pub orthogonality_degree: usize,
    pub covariance_1d: f64,
    pub star_cases: usize,
    pub star_cutoff: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            dim: 2,
            instances: 20,
            max_rank: 8,
            quadrature_order: 16,
            mc: false,
            mc_samples: 20_000,
            orthogonality_degree: 8,
            covariance_1d: 0.7,
            star_cases: 3,
            star_cutoff: 5,
            seed: 11,
        }
    }
}

impl OracleConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(n) = o.cutoff {
            self.star_cutoff = n;
        }
        self.mc |= o.mc;
    }
}

#[derive(Clone, Debug, Serialize)]
struct MomentRow {
    rank: usize,
    pairing: f64,
    quadrature: f64,
    mc_mean: Option<f64>,
    mc_stderr: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
struct InnerRow {
    n: usize,
    m: usize,
    quadrature: f64,
    expected: f64,
}

#[derive(Clone, Debug, Serialize)]
struct OracleResult {
    covariance: Vec<Vec<f64>>,
    moments: Vec<MomentRow>,
    inner_products: Vec<InnerRow>,
    star_products: Vec<StarRow>,
}

fn random_spd(d: usize, r: &mut impl Rng) -> DMatrix<f64> {
    let b = DMatrix::from_fn(d, d, |_, _| r.gen_range(-1.0..1.0));
    &b * b.transpose() + DMatrix::identity(d, d) * 0.5
}

fn product_at(vectors: &[Vec<f64>], x: &[f64]) -> f64 {
    vectors.iter().map(|v| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()).product()
}

pub fn cmd_oracle(cfg: &OracleConfig, out: &Path) -> Result<Outcome> {
    if cfg.dim == 0 || cfg.dim > 3 {
        return Err(Error::OracleScope(format!("quadrature oracles run for 1 ≤ d ≤ 3, got d = {}", cfg.dim)));
    }
    let d = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m = random_spd(d, &mut rng);
    let cov = Covariance::real(m.clone())?;
    let mu = GaussianMeasure::new(cov.clone(), ConventionScale::One);
    let samples = if cfg.mc { mu.sample(cfg.seed, cfg.mc_samples) } else { Vec::new() };

    let mut ranks: Vec<usize> = (0..cfg.instances).map(|_| 2 * rng.gen_range(1..=cfg.max_rank.max(2) / 2)).collect();
    ranks.push(9);
    let mut moments = Vec::new();
    for rank in ranks {
        let vectors: Vec<Vec<f64>> = (0..rank).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let pairing = wick_moment(&vectors, &cov)?;
        let quadrature = mu.quadrature_expectation(|x| product_at(&vectors, x), cfg.quadrature_order)?;
        let (mc_mean, mc_stderr) = if cfg.mc {
            let vals: Vec<f64> = samples.iter().map(|x| product_at(&vectors, x)).collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (Some(mean), Some((var / n).sqrt()))
        } else {
            (None, None)
        };
        moments.push(MomentRow { rank, pairing, quadrature, mc_mean, mc_stderr });
    }

    let delta = cfg.covariance_1d;
    let mu1 = GaussianMeasure::new(Covariance::scalar(delta)?, ConventionScale::One);
    let top = cfg.orthogonality_degree;
    // :φⁿ:_Δ = Δ^{n/2} Heₙ(φ/√Δ).
    let wick1 = |n: usize, x: f64| delta.powf(n as f64 / 2.0) * hermite(n, x / delta.sqrt());
    let mut inner = Vec::new();
    for n in 0..=top {
        for k in n..=top {
            let quadrature = mu1.quadrature_expectation(|x| wick1(n, x[0]) * wick1(k, x[0]), cfg.quadrature_order.max(top + 2))?;
            let expected = if n == k { factorial(n) * delta.powi(n as i32) } else { 0.0 };
            inner.push(InnerRow { n, m: k, quadrature, expected });
        }
    }

    let mut stars = Vec::new();
    for case in 0..cfg.star_cases {
        let b = ComplexStructureBlocks::random(d, &mut rng, 0.4);
        stars.push(star_row(case, &b, cfg.star_cutoff, 1.0, &mut rng)?);
    }

    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + b.abs());
    let mut checks = vec![
        check_line("moments: pairing vs quadrature", moments.iter().map(|r| rel(r.quadrature, r.pairing)).fold(0.0, f64::max), 1e-8),
        check_line("Wick orthogonality vs quadrature", inner.iter().map(|r| rel(r.quadrature, r.expected)).fold(0.0, f64::max), 1e-8),
        check_line("star products vs operator products", stars.iter().map(|r| r.moyal.max(r.wick)).fold(0.0, f64::max), 1e-8),
    ];
    let odd_zero = moments.iter().filter(|r| r.rank % 2 == 1).all(|r| r.pairing == 0.0);
    checks.push((odd_zero, format!("{} odd moments vanish exactly", if odd_zero { "pass" } else { "FAIL" })));
    if cfg.mc {
        let worst = moments
            .iter()
            .filter_map(|r| Some((r.mc_mean? - r.pairing).abs() / r.mc_stderr?.max(f64::MIN_POSITIVE)))
            .filter(|z| z.is_finite())
            .fold(0.0, f64::max);
        checks.push(check_line("Monte-Carlo within standard errors", worst, 5.0));
    }
    let pass = checks.iter().all(|c| c.0);
    let summary = checks.into_iter().map(|c| c.1).collect();
    let covariance = (0..d).map(|i| m.row(i).iter().copied().collect()).collect();
    let result = OracleResult { covariance, moments, inner_products: inner, star_products: stars };
    let meta = Meta::new("oracle", Some(cfg.seed), cfg)?;
    let dir = OutDir::create(out)?;
    let file = dir.write_json("oracle.json", &meta, &result)?;
    Ok(Outcome { files: vec![file], pass, summary })
}
