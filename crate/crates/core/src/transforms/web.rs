//! Residual report over the transform web.

use super::{bargmann, bargmann_momentum, fourier, fourier_tilde, fourier_tilde_inverse, momentum_phase, schrodinger_phase, Transform};
use crate::error::Result;
use crate::kahler::ComplexStructureBlocks;
use crate::quantize::{contract, field_operators, ladder_operators, RepSpace, Space, TruncatedOperator};
use crate::scalar::c64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

pub const WEB_TOL: f64 = 1e-8;
pub const UNITARY_TOL: f64 = 1e-10;
/// Residual a negative control must exceed to count as a detected failure.
pub const CONTROL_GAP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Holds,
    Fails,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformReport {
    pub label: String,
    pub residual: f64,
    pub cutoff: usize,
    pub expect: Expectation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TransformReport {
    fn new(label: &str, residual: f64, cutoff: usize, tol: f64, expect: Expectation) -> Self {
        let pass = match expect {
            Expectation::Holds => residual < tol,
            Expectation::Fails => residual > CONTROL_GAP,
        };
        TransformReport { label: label.into(), residual, cutoff, expect, pass, note: None }
    }

    fn error(label: &str, cutoff: usize, e: crate::Error) -> Self {
        TransformReport {
            label: label.into(),
            residual: f64::INFINITY,
            cutoff,
            expect: Expectation::Holds,
            pass: false,
            note: Some(e.to_string()),
        }
    }
}

fn s(v: f64) -> Complex64 {
    c64(v, 0.0)
}

struct Web {
    blocks: ComplexStructureBlocks,
    n: usize,
}

impl Web {
    fn space(&self, rep: crate::quantize::Rep, cutoff: usize) -> Result<Space> {
        RepSpace::new(rep, &self.blocks, cutoff)
    }

    /// Degree-preserving pull-back `T⁻¹ B T` compared with `expected`, both on the source.
    fn pulled(&self, t: &Transform, op: &TruncatedOperator, expected: &TruncatedOperator) -> Result<f64> {
        Ok(t.pull(op)?.interior_distance(expected, 1))
    }

    fn linear_checks(&self, out: &mut Vec<TransformReport>) -> Result<()> {
        let n = self.n;
        let b = bargmann(&self.blocks, n)?;
        let bm = bargmann_momentum(&self.blocks, n)?;
        let ft = fourier_tilde(&self.blocks, n)?;
        let f = fourier(&self.blocks, n)?;
        let (sch, hol, ah, mom) = (&b.from, &b.to, &bm.to, &bm.from);
        let d = sch.dim();

        let mut r1 = 0.0f64;
        let mut r2 = 0.0f64;
        for x in 0..d {
            let expected = TruncatedOperator::mult(sch, x)
                .scale(s(SQRT_2))
                .sub(&contract(&self.blocks.delta.map(s), &derivs(sch), x).scale(s(1.0 / SQRT_2)));
            r1 = r1.max(self.pulled(&b, &TruncatedOperator::raise(hol, x), &expected)?);
            r2 = r2.max(self.pulled(&b, &TruncatedOperator::deriv(hol, x), &TruncatedOperator::deriv(sch, x).scale(s(1.0 / SQRT_2)))?);
        }
        out.push(TransformReport::new("B^-1 φ B = √2φ − Δ∂/√2", r1, n, WEB_TOL, Expectation::Holds));
        out.push(TransformReport::new("B^-1 ∂ B = ∂/√2", r2, n, WEB_TOL, Expectation::Holds));

        let mut r1 = 0.0f64;
        let mut r2 = 0.0f64;
        for x in 0..d {
            let expected = TruncatedOperator::mult(mom, x)
                .scale(s(SQRT_2))
                .add(&contract(&self.blocks.d.map(s), &derivs(mom), x).scale(s(1.0 / SQRT_2)));
            r1 = r1.max(self.pulled(&bm, &TruncatedOperator::raise(ah, x), &expected)?);
            r2 = r2.max(self.pulled(&bm, &TruncatedOperator::deriv(ah, x), &TruncatedOperator::deriv(mom, x).scale(s(1.0 / SQRT_2)))?);
        }
        out.push(TransformReport::new("Bm^-1 φ̄ Bm = √2π + D∂/√2", r1, n, WEB_TOL, Expectation::Holds));
        out.push(TransformReport::new("Bm^-1 ∂ Bm = ∂/√2", r2, n, WEB_TOL, Expectation::Holds));

        let fh = field_operators(hol)?;
        let fs = field_operators(sch)?;
        let fa = field_operators(ah)?;
        let fm = field_operators(mom)?;
        let mut res = [0.0f64; 8];
        for x in 0..d {
            res[0] = res[0].max(self.pulled(&b, &fh.phi[x], &fs.phi[x])?);
            res[1] = res[1].max(self.pulled(&b, &fh.pi[x], &fs.pi[x])?);
            res[2] = res[2].max(self.pulled(&bm, &fa.phi[x], &fm.phi[x])?);
            res[3] = res[3].max(self.pulled(&bm, &fa.pi[x], &fm.pi[x])?);
            res[4] = res[4].max(ft.push(&fh.phi[x])?.interior_distance(&fa.phi[x], 1));
            res[5] = res[5].max(ft.push(&fh.pi[x])?.interior_distance(&fa.pi[x], 1));
            res[6] = res[6].max(f.push(&fs.phi[x])?.interior_distance(&fm.phi[x], 1));
            res[7] = res[7].max(f.pull(&fm.pi[x])?.interior_distance(&fs.pi[x], 1));
        }
        let labels = [
            "B^-1 Q(φ) B = Q_s(φ)",
            "B^-1 Q(π) B = Q_s(π)",
            "Bm^-1 Q̄(φ) Bm = Q̄_m(φ)",
            "Bm^-1 Q̄(π) Bm = Q̄_m(π)",
            "F~ Q(φ) F~^-1 = Q̄(φ)",
            "F~ Q(π) F~^-1 = Q̄(π)",
            "F Q_s(φ) F^-1 = i∂ + iD⁻¹π + AD⁻¹π",
            "F^-1 π F = −i∂ + iKφ − KAφ",
        ];
        for (l, r) in labels.iter().zip(res) {
            out.push(TransformReport::new(l, r, n, WEB_TOL, Expectation::Holds));
        }

        // A quadratic observable, built one degree higher and compressed.
        let f2 = fourier(&self.blocks, n + 2)?;
        let fs2 = field_operators(&f2.from)?;
        let fm2 = field_operators(&f2.to)?;
        let mut r = 0.0f64;
        for x in 0..d {
            for y in 0..d {
                let lhs = f2.push(&sym(&fs2.phi[x], &fs2.pi[y]))?.compress(mom)?;
                let rhs = sym(&fm2.phi[x], &fm2.pi[y]).compress(mom)?;
                r = r.max(lhs.distance(&rhs));
            }
        }
        out.push(TransformReport::new("F Q_s(φπ) F^-1 = Q̄_m(φπ), symmetric order", r, n, WEB_TOL, Expectation::Holds));

        for (t, l) in [(&b, "B unitary"), (&bm, "Bm unitary"), (&ft, "F~ unitary"), (&f, "F unitary")] {
            out.push(TransformReport::new(l, t.unitarity_residual(), n, UNITARY_TOL, Expectation::Holds));
        }
        let fti = fourier_tilde_inverse(&self.blocks, n)?;
        let r = (&fti.matrix * &ft.matrix - crate::quantize::CMatrix::identity(hol.len(), hol.len())).amax_norm();
        out.push(TransformReport::new("F~^-1 F~ = 1", r, n, WEB_TOL, Expectation::Holds));
        let adj = {
            let g_from = hol.gram().map(s);
            let g_to = ah.gram().map(s);
            let m = ft.matrix.adjoint() * g_to;
            g_from.lu().solve(&m).expect("Gram is invertible")
        };
        out.push(TransformReport::new("F~† = F~^-1", (adj - &fti.matrix).amax_norm(), n, UNITARY_TOL, Expectation::Holds));

        // Ladder mixing under F.
        let ls = ladder_operators(sch)?;
        let lm = ladder_operators(mom)?;
        let dinv = self.blocks.d.clone().try_inverse().expect("D invertible");
        let minus = (&self.blocks.delta - &dinv).map(|v| c64(0.0, 0.5 * v));
        let plus = (&self.blocks.delta + &dinv).map(|v| c64(0.0, 0.5 * v));
        let mut r1 = 0.0f64;
        let mut r2 = 0.0f64;
        for x in 0..d {
            let e1 = contract(&minus, &lm.ann, x).add(&contract(&plus, &lm.cre, x));
            let e2 = contract(&plus, &lm.ann, x).add(&contract(&minus, &lm.cre, x)).scale(s(-1.0));
            r1 = r1.max(f.push(&ls.ann[x])?.interior_distance(&e1, 1));
            r2 = r2.max(f.push(&ls.cre[x])?.interior_distance(&e2, 1));
        }
        out.push(TransformReport::new("F a F^-1 = i(Δ−D⁻¹)b/2 + i(Δ+D⁻¹)b†/2", r1, n, WEB_TOL, Expectation::Holds));
        out.push(TransformReport::new("F a† F^-1 = −i(Δ+D⁻¹)b/2 − i(Δ−D⁻¹)b†/2", r2, n, WEB_TOL, Expectation::Holds));
        let mix = (0..d).map(|x| contract(&plus, &lm.cre, x).max_abs()).fold(0.0, f64::max);
        let expect = if self.blocks.a.amax() == 0.0 { Expectation::Holds } else { Expectation::Fails };
        let mut rep = TransformReport::new("F a F^-1 free of b† (A = 0)", mix, n, WEB_TOL, expect);
        rep.note = Some("the b† admixture is (Δ+D⁻¹)/2, nonzero exactly when A ≠ 0".into());
        out.push(rep);

        // Plain B does not carry the A-dependent ladders to the holomorphic ones.
        let lh = ladder_operators(hol)?;
        let mut r = 0.0f64;
        for x in 0..d {
            r = r.max(b.push(&ls.ann[x])?.interior_distance(&lh.ann[x], 1));
        }
        let mut rep = TransformReport::new("B a(Sch) B^-1 = a(Hol) without phase", r, n, WEB_TOL, expect);
        rep.note = Some("algebra preservation needs the phase e^{-if} when A ≠ 0".into());
        out.push(rep);

        let back = f.then(&bm)?.then(&fti)?.then(&b.inverse()?)?;
        let r = (&back.matrix - crate::quantize::CMatrix::identity(sch.len(), sch.len())).amax_norm();
        out.push(TransformReport::new("B^-1 F~^-1 Bm F = 1", r, n, WEB_TOL, Expectation::Holds));
        Ok(())
    }

    /// Ladder intertwining through the phases, on one extra degree.
    fn phase_checks(&self, out: &mut Vec<TransformReport>) -> Result<()> {
        use crate::quantize::Rep::*;
        let n = self.n;
        let sch = self.space(Schrodinger, n)?;
        let mom = self.space(FieldMomentum, n)?;

        let b1 = bargmann(&self.blocks, n + 1)?;
        let e = schrodinger_phase(&b1.from, 1.0)?;
        let ls = ladder_operators(&b1.from)?;
        let lh = ladder_operators(&b1.to)?;
        let mut r1 = 0.0f64;
        let mut r2 = 0.0f64;
        for x in 0..sch.dim() {
            let ta = b1.pull(&lh.ann[x])?;
            let tc = b1.pull(&lh.cre[x])?;
            r1 = r1.max(ls.ann[x].compose(&e).sub(&e.compose(&ta)).compress(&sch)?.max_abs());
            r2 = r2.max(ls.cre[x].compose(&e).sub(&e.compose(&tc)).compress(&sch)?.max_abs());
        }
        out.push(TransformReport::new("B_Sch^-1 a(Hol) B_Sch = a(Sch)", r1, n, WEB_TOL, Expectation::Holds));
        out.push(TransformReport::new("B_Sch^-1 a†(Hol) B_Sch = a†(Sch)", r2, n, WEB_TOL, Expectation::Holds));
        let vac = e.apply(&b1.from.vacuum());
        let r = (0..sch.dim())
            .map(|x| {
                let v = ls.ann[x].apply(&vac);
                let head = v.rows(0, sch.len()).clone_owned();
                sch.norm(&head)
            })
            .fold(0.0, f64::max);
        out.push(TransformReport::new("a(Sch) e^{if} = 0", r, n, WEB_TOL, Expectation::Holds));

        let bm1 = bargmann_momentum(&self.blocks, n + 1)?;
        let e = momentum_phase(&bm1.from, 1.0)?;
        let lm = ladder_operators(&bm1.from)?;
        let la = ladder_operators(&bm1.to)?;
        let mut r1 = 0.0f64;
        let mut r2 = 0.0f64;
        for x in 0..mom.dim() {
            let ta = bm1.pull(&la.ann[x])?;
            let tc = bm1.pull(&la.cre[x])?;
            r1 = r1.max(lm.ann[x].compose(&e).sub(&e.compose(&ta)).compress(&mom)?.max_abs());
            r2 = r2.max(lm.cre[x].compose(&e).sub(&e.compose(&tc)).compress(&mom)?.max_abs());
        }
        out.push(TransformReport::new("Bm_Mom^-1 b(AntiHol) Bm_Mom = b(Mom)", r1, n, WEB_TOL, Expectation::Holds));
        out.push(TransformReport::new("Bm_Mom^-1 b†(AntiHol) Bm_Mom = b†(Mom)", r2, n, WEB_TOL, Expectation::Holds));
        let vac = e.apply(&bm1.from.vacuum());
        let r = (0..mom.dim())
            .map(|x| {
                let v = lm.ann[x].apply(&vac);
                mom.norm(&v.rows(0, mom.len()).clone_owned())
            })
            .fold(0.0, f64::max);
        out.push(TransformReport::new("b(Mom) e^{ig} = 0", r, n, WEB_TOL, Expectation::Holds));
        Ok(())
    }
}

fn derivs(space: &Space) -> Vec<TruncatedOperator> {
    (0..space.dim()).map(|x| TruncatedOperator::deriv(space, x)).collect()
}

fn sym(a: &TruncatedOperator, b: &TruncatedOperator) -> TruncatedOperator {
    a.compose(b).add(&b.compose(a)).scale(c64(0.5, 0.0))
}

trait AmaxNorm {
    fn amax_norm(&self) -> f64;
}

impl AmaxNorm for crate::quantize::CMatrix {
    fn amax_norm(&self) -> f64 {
        self.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Runs every identity of the transform web and returns one report per check.
/// Construction failures become failing reports rather than errors.
pub fn verify_web(blocks: &ComplexStructureBlocks, cutoff: usize) -> Vec<TransformReport> {
    let web = Web { blocks: blocks.clone(), n: cutoff.max(1) };
    let mut out = Vec::new();
    if let Err(e) = web.linear_checks(&mut out) {
        out.push(TransformReport::error("linear identities", cutoff, e));
    }
    if let Err(e) = web.phase_checks(&mut out) {
        out.push(TransformReport::error("phase identities", cutoff, e));
    }
    out
}
