//! Multiplication by the vacuum phases `e^{±if}`, `f = ½(KA):φ²:_{Δ/2}`, and
//! `e^{±ig}`, `g = ½(AD⁻¹):π²:_{−D/2}`.
//!
//! With `B = ±iQ` and basis covariance `C`,
//! `e^{±i½Q:φ²:} = e^{∓i tr(QC)/2} det(1−CB)^{−1/2} :exp(½φB'φ):`, `B' = B(1−CB)⁻¹`,
//! so the Wick coefficients are the truncated Wick-exponential series in `B'`.
//! The block of the multiplication operator on degrees `≤ N` only sees
//! coefficients of degree `≤ 2N`, which makes it exact.

use crate::chaos::{wick_order, wick_order_inverse};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quantize::{CMatrix, Rep, RepSpace, Space, TruncatedOperator};
use crate::scalar::c64;
use crate::symtensor::MultiIndex;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Wick coefficients of `exp(i·sign·½Q:φ²:_C)` on the basis of `space`.
fn phase_coefficients(space: &Space, q: &DMatrix<f64>, sign: f64) -> Result<DVector<Complex64>> {
    let d = space.dim();
    let i = Complex64::i();
    let b = q.map(|v| i * sign * v);
    let c = space.cov.map(|v| c64(v, 0.0));
    let m = DMatrix::<Complex64>::identity(d, d) - &c * &b;
    let minv = m.clone().try_inverse().ok_or_else(|| Error::Degenerate("1 − CB is singular".into()))?;
    let bp = &b * minv;
    let trace = (q * &space.cov).trace();
    let pref = m.determinant().powf(-0.5) * (-0.5 * i * sign * trace).exp();
    let mut quad = Poly::zero(d);
    for x in 0..d {
        for y in 0..d {
            quad.add_term(MultiIndex::new(vec![x, y]), bp[(x, y)] * 0.5);
        }
    }
    let mut series = Poly::constant(d, c64(1.0, 0.0));
    let mut term = series.clone();
    for k in 1..=space.cutoff / 2 {
        term = term.mul(&quad).scale(&c64(1.0 / k as f64, 0.0));
        series = series.add(&term);
    }
    let mut v = DVector::zeros(space.len());
    for (k, coeff) in series.terms() {
        if let Some(pos) = space.basis.position(k) {
            v[pos] = coeff * pref;
        }
    }
    Ok(v)
}

/// Block of multiplication by `exp(i·sign·½Q:φ²:)` on `target`.
fn phase(target: &Space, q: &DMatrix<f64>, sign: f64) -> Result<TruncatedOperator> {
    if !target.rep.wick_basis() {
        return Err(Error::Unsupported("phase factors act on Schrödinger or field-momentum spaces".into()));
    }
    if q.amax() == 0.0 {
        return Ok(TruncatedOperator::identity(target));
    }
    let n = target.len();
    let wide = RepSpace::new(target.rep, &target.blocks, 2 * target.cutoff)?;
    let g = phase_coefficients(&wide, q, sign)?;
    let w = wide.gram().map(|v| c64(v, 0.0)) * g;
    let d = target.dim();
    let wick: Vec<Poly<f64>> =
        target.basis.keys().iter().map(|k| wick_order(&Poly::monomial(d, k.clone(), 1.0), &target.cov)).collect();
    // H_{αβ} = E[:φ^α: :φ^β: g], expanded in Wick monomials of degree ≤ 2N.
    let mut h = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let prod = wick_order_inverse(&wick[a].mul(&wick[b]), &target.cov);
            let mut acc = Complex64::default();
            for (k, p) in prod.terms() {
                acc += w[wide.basis.position(k).expect("degree ≤ 2N")] * *p;
            }
            h[(a, b)] = acc;
            h[(b, a)] = acc;
        }
    }
    let l = target.cholesky().map(|v| c64(v, 0.0));
    let y = l.solve_lower_triangular(&h).expect("invertible factor");
    let m = l.adjoint().solve_upper_triangular(&y).expect("invertible factor");
    TruncatedOperator::new(target.clone(), m)
}

fn ka(space: &Space) -> DMatrix<f64> {
    let m = &space.blocks.k * &space.blocks.a;
    (&m + m.transpose()) * 0.5
}

fn ad_inv(space: &Space) -> Result<DMatrix<f64>> {
    let dinv = space.blocks.d.clone().try_inverse().ok_or_else(|| Error::Degenerate("D is singular".into()))?;
    let m = &space.blocks.a * dinv;
    Ok((&m + m.transpose()) * 0.5)
}

fn check(space: &Space, rep: Rep) -> Result<()> {
    if space.rep != rep {
        return Err(Error::Shape(format!("{} phase on a {} space", rep.name(), space.rep.name())));
    }
    Ok(())
}

/// `e^{i·sign·f}` on a Schrödinger space.
pub fn schrodinger_phase(space: &Space, sign: f64) -> Result<TruncatedOperator> {
    check(space, Rep::Schrodinger)?;
    phase(space, &ka(space), sign)
}

/// `e^{i·sign·g}` on a field-momentum space.
pub fn momentum_phase(space: &Space, sign: f64) -> Result<TruncatedOperator> {
    check(space, Rep::FieldMomentum)?;
    phase(space, &ad_inv(space)?, sign)
}

/// `Ψ₀ = e^{if}`, the Schrödinger vacuum, truncated to the space.
pub fn schrodinger_vacuum(space: &Space) -> Result<DVector<Complex64>> {
    check(space, Rep::Schrodinger)?;
    phase_coefficients(space, &ka(space), 1.0)
}

/// `Ψ₀ = e^{ig}`, the field-momentum vacuum, truncated to the space.
pub fn momentum_vacuum(space: &Space) -> Result<DVector<Complex64>> {
    check(space, Rep::FieldMomentum)?;
    phase_coefficients(space, &ad_inv(space)?, 1.0)
}

/// `1 − ‖Ψ₀‖²` on the truncated space: the vacuum weight above the cutoff.
pub fn vacuum_tail(space: &Space) -> Result<f64> {
    let v = match space.rep {
        Rep::Schrodinger => schrodinger_vacuum(space)?,
        Rep::FieldMomentum => momentum_vacuum(space)?,
        _ => return Ok(0.0),
    };
    Ok(1.0 - space.inner(&v, &v).re)
}
