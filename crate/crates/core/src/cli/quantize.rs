use super::{check_line, Meta, OutDir, Outcome, Overrides};
use crate::error::{Error, Result};
use crate::kahler::ComplexStructureBlocks;
use crate::poly::Poly;
use crate::quantize::{
    involution, ladder_operators, moyal_product, padded_for, quantize_exponential, quantize_word, weyl_quantize,
    wick_quantize_word, wick_star, Rep, RepSpace, TrigExponential, TruncatedOperator, WeylWord,
};
use crate::symtensor::sorted_keys;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantizeConfig {
    pub dim: usize,
    /// Random compatible block sets for the ladder and involution checks.
    pub instances: usize,
    pub a_scale: f64,
    pub cutoff: usize,
    /// Random `(ρ, α)` pairs for each star product.
    pub star_cases: usize,
    pub star_cutoff: usize,
    /// Upper bound on `‖χ‖`.
    pub chi_radius: f64,
    pub seed: u64,
}

impl Default for QuantizeConfig {
    fn default() -> Self {
        QuantizeConfig { dim: 2, instances: 10, a_scale: 0.5, cutoff: 5, star_cases: 5, star_cutoff: 6, chi_radius: 0.7, seed: 7 }
    }
}

impl QuantizeConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.cutoff {
            self.cutoff = n;
            self.star_cutoff = n;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct RepRow {
    instance: usize,
    rep: &'static str,
    /// `[a_x, a†_y] − C_xy` on the interior.
    ccr: f64,
    /// `[a_x, a_y]` on the interior.
    ann: f64,
    /// `a_x† − a†_x`.
    adjoint: f64,
    /// `Q(F*) − Q(F)†` for a random cubic `F`, relative to `max|Q(F)|`.
    involution: f64,
}

#[derive(Clone, Debug, Serialize)]
pub(crate) struct StarRow {
    case: usize,
    chi_rho: f64,
    chi_alpha: f64,
    pub(crate) moyal: f64,
    pub(crate) wick: f64,
}

#[derive(Clone, Debug, Serialize)]
struct QuantizeResult {
    representations: Vec<RepRow>,
    star_products: Vec<StarRow>,
}

pub fn random_chi(d: usize, r: &mut impl Rng, radius: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let s = radius * r.gen_range(0.1..1.0) / n;
    v.into_iter().map(|c| c * s).collect()
}

fn random_poly(d: usize, deg: usize, r: &mut impl Rng) -> Poly<Complex64> {
    let mut p = Poly::zero(2 * d);
    for n in 0..=deg {
        for k in sorted_keys(2 * d, n) {
            p.add_term(k, Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        }
    }
    p
}

fn rep_row(instance: usize, rep: Rep, blocks: &ComplexStructureBlocks, cutoff: usize, r: &mut impl Rng) -> Result<RepRow> {
    let s = RepSpace::new(rep, blocks, cutoff)?;
    let l = ladder_operators(&s)?;
    let c = s.commutator_matrix();
    let d = blocks.dim();
    let zero = TruncatedOperator::zero(&s);
    let (mut ccr, mut ann, mut adjoint) = (0.0f64, 0.0f64, 0.0f64);
    for x in 0..d {
        for y in 0..d {
            let expect = TruncatedOperator::identity(&s).scale(Complex64::new(c[(x, y)], 0.0));
            ccr = ccr.max(l.ann[x].commutator(&l.cre[y]).interior_distance(&expect, 2));
            ann = ann.max(l.ann[x].commutator(&l.ann[y]).interior_distance(&zero, 2));
        }
        adjoint = adjoint.max(l.ann[x].adjoint().distance(&l.cre[x]));
    }
    let p = random_poly(d, 3.min(cutoff), r);
    let q = weyl_quantize(&p, &s)?;
    let involution = weyl_quantize(&involution(&p), &s)?.distance(&q.adjoint()) / (1.0 + q.max_abs());
    Ok(RepRow { instance, rep: rep.name(), ccr, ann, adjoint, involution })
}

pub(crate) fn star_row(case: usize, blocks: &ComplexStructureBlocks, cutoff: usize, radius: f64, r: &mut impl Rng) -> Result<StarRow> {
    let d = blocks.dim();
    let s = RepSpace::new(Rep::Holomorphic, blocks, cutoff)?;
    let (cr, ca) = (random_chi(d, r, radius), random_chi(d, r, radius));
    let norm = |c: &[Complex64]| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let (er, ea) = (TrigExponential::new(cr.clone()), TrigExponential::new(ca.clone()));
    let big = padded_for(&[&er, &ea], &s)?;
    let prod = quantize_exponential(&er, &big)?.compose_into(&quantize_exponential(&ea, &big)?, &s)?;
    let star = moyal_product(&WeylWord::single(er), &WeylWord::single(ea), blocks);
    let moyal = prod.distance(&quantize_word(&star, &big)?.compress(&s)?);

    let (wr, wa) = (WeylWord::single(TrigExponential::wick(cr.clone())), WeylWord::single(TrigExponential::wick(ca.clone())));
    let prod = wick_quantize_word(&wr, &big)?.compose_into(&wick_quantize_word(&wa, &big)?, &s)?;
    let wick = prod.distance(&wick_quantize_word(&wick_star(&wr, &wa, blocks), &big)?.compress(&s)?);
    Ok(StarRow { case, chi_rho: norm(&cr), chi_alpha: norm(&ca), moyal, wick })
}

pub fn cmd_quantize_check(cfg: &QuantizeConfig, out: &Path) -> Result<Outcome> {
    if cfg.dim == 0 || cfg.dim > 3 {
        return Err(Error::Config(format!("dim must be 1..=3, got {}", cfg.dim)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut reps = Vec::new();
    for i in 0..cfg.instances {
        let b = ComplexStructureBlocks::random(cfg.dim, &mut rng, cfg.a_scale);
        for rep in Rep::ALL {
            reps.push(rep_row(i, rep, &b, cfg.cutoff, &mut rng)?);
        }
    }
    let mut stars = Vec::new();
    for case in 0..cfg.star_cases {
        let b = ComplexStructureBlocks::random(cfg.dim, &mut rng, cfg.a_scale);
        stars.push(star_row(case, &b, cfg.star_cutoff, cfg.chi_radius, &mut rng)?);
    }

    let worst = |f: &dyn Fn(&RepRow) -> f64| reps.iter().map(f).fold(0.0, f64::max);
    let worst_star = |f: &dyn Fn(&StarRow) -> f64| stars.iter().map(f).fold(0.0, f64::max);
    let checks = [
        check_line("[a, a†] = C on interior", worst(&|r| r.ccr.max(r.ann)), 1e-10),
        check_line("a† is the adjoint of a", worst(&|r| r.adjoint), 1e-10),
        check_line("Q(F*) = Q(F)†", worst(&|r| r.involution), 1e-10),
        check_line("Moyal star vs operator product", worst_star(&|r| r.moyal), 1e-8),
        check_line("Wick star vs operator product", worst_star(&|r| r.wick), 1e-8),
    ];
    let pass = checks.iter().all(|c| c.0);
    let summary = checks.into_iter().map(|c| c.1).collect();
    let result = QuantizeResult { representations: reps, star_products: stars };
    let meta = Meta::new("quantize-check", Some(cfg.seed), cfg)?;
    let dir = OutDir::create(out)?;
    let file = dir.write_json("quantize.json", &meta, &result)?;
    Ok(Outcome { files: vec![file], pass, summary })
}
