//! Creation/annihilation operators and quantized field/momentum per representation.

use super::operator::{contract, TruncatedOperator};
use super::space::{Rep, Space};
use crate::error::{Error, Result};
use crate::scalar::c64;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

fn cm(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| c64(v, 0.0))
}

#[derive(Clone, Debug)]
pub struct Ladders {
    pub ann: Vec<TruncatedOperator>,
    pub cre: Vec<TruncatedOperator>,
}

/// Quantized canonical coordinates `Q(φ^x)`, `Q(π_x)`.
#[derive(Clone, Debug)]
pub struct FieldOperators {
    pub phi: Vec<TruncatedOperator>,
    pub pi: Vec<TruncatedOperator>,
}

fn mults(space: &Space) -> Vec<TruncatedOperator> {
    (0..space.dim()).map(|x| TruncatedOperator::mult(space, x)).collect()
}

fn derivs(space: &Space) -> Vec<TruncatedOperator> {
    (0..space.dim()).map(|x| TruncatedOperator::deriv(space, x)).collect()
}

/// Ladder operators of the representation:
///
/// | rep | annihilation | creation |
/// |---|---|---|
/// | holomorphic | `Δ∂` | `φ` |
/// | Schrödinger | `(Δ∂ − iAφ)/√2` | `√2φ − a` |
/// | antiholomorphic | `−D∂` | `φ̌` |
/// | field-momentum | `−(D∂ − iAᵗπ)/√2` | `√2π − b` |
pub fn ladder_operators(space: &Space) -> Result<Ladders> {
    if space.cutoff < 1 {
        return Err(Error::Shape("ladder operators need a cutoff of at least 1".into()));
    }
    let b = &space.blocks;
    let d = space.dim();
    let x = mults(space);
    let dd = derivs(space);
    let i = Complex64::i();
    let s2 = c64(SQRT_2, 0.0);
    let (ann, cre): (Vec<_>, Vec<_>) = match space.rep {
        Rep::Holomorphic => ((0..d).map(|k| contract(&cm(&b.delta), &dd, k)).collect(), x.clone()),
        Rep::Antiholomorphic => ((0..d).map(|k| contract(&cm(&-&b.d), &dd, k)).collect(), x.clone()),
        Rep::Schrodinger => {
            let ann: Vec<_> = (0..d)
                .map(|k| contract(&cm(&b.delta), &dd, k).sub(&contract(&cm(&b.a), &x, k).scale(i)).scale(1.0 / s2))
                .collect();
            let cre = (0..d).map(|k| x[k].scale(s2).sub(&ann[k])).collect();
            (ann, cre)
        }
        Rep::FieldMomentum => {
            let at = b.a.transpose();
            let ann: Vec<_> = (0..d)
                .map(|k| contract(&cm(&b.d), &dd, k).sub(&contract(&cm(&at), &x, k).scale(i)).scale(-1.0 / s2))
                .collect();
            let cre = (0..d).map(|k| x[k].scale(s2).sub(&ann[k])).collect();
            (ann, cre)
        }
    };
    Ok(Ladders { ann, cre })
}

/// Quantized field and momentum.
///
/// Schrödinger: `φ` and `−i∂ + iKφ − KAφ`. Field-momentum: `i∂ + iD⁻¹π + AD⁻¹π`
/// and `π`. Holomorphic: `(a+a†)/√2` and `iK(a†−a)/√2 − KA(a†+a)/√2`.
/// Antiholomorphic: `−iD⁻¹(b−b†)/√2 + AD⁻¹(b+b†)/√2` and `(b+b†)/√2`.
pub fn field_operators(space: &Space) -> Result<FieldOperators> {
    let b = &space.blocks;
    let d = space.dim();
    let i = Complex64::i();
    let s2 = c64(SQRT_2, 0.0);
    let k = cm(&b.k);
    let ka = cm(&(&b.k * &b.a));
    let dinv = b.d.clone().try_inverse().ok_or_else(|| Error::Degenerate("D is singular".into()))?;
    let adinv = cm(&(&b.a * &dinv));
    let dinv = cm(&dinv);
    match space.rep {
        Rep::Schrodinger => {
            let x = mults(space);
            let dd = derivs(space);
            let pi = (0..d)
                .map(|y| dd[y].scale(-i).add(&contract(&k, &x, y).scale(i)).sub(&contract(&ka, &x, y)))
                .collect();
            Ok(FieldOperators { phi: x, pi })
        }
        Rep::FieldMomentum => {
            let x = mults(space);
            let dd = derivs(space);
            let phi = (0..d)
                .map(|y| dd[y].scale(i).add(&contract(&dinv, &x, y).scale(i)).add(&contract(&adinv, &x, y)))
                .collect();
            Ok(FieldOperators { phi, pi: x })
        }
        Rep::Holomorphic => {
            let l = ladder_operators(space)?;
            let plus: Vec<_> = (0..d).map(|x| l.cre[x].add(&l.ann[x])).collect();
            let minus: Vec<_> = (0..d).map(|x| l.cre[x].sub(&l.ann[x])).collect();
            let phi = plus.iter().map(|p| p.scale(1.0 / s2)).collect();
            let pi = (0..d)
                .map(|y| contract(&k, &minus, y).scale(i / s2).sub(&contract(&ka, &plus, y).scale(1.0 / s2)))
                .collect();
            Ok(FieldOperators { phi, pi })
        }
        Rep::Antiholomorphic => {
            let l = ladder_operators(space)?;
            let plus: Vec<_> = (0..d).map(|x| l.ann[x].add(&l.cre[x])).collect();
            let minus: Vec<_> = (0..d).map(|x| l.ann[x].sub(&l.cre[x])).collect();
            let phi = (0..d)
                .map(|y| contract(&dinv, &minus, y).scale(-i / s2).add(&contract(&adinv, &plus, y).scale(1.0 / s2)))
                .collect();
            let pi = plus.iter().map(|p| p.scale(1.0 / s2)).collect();
            Ok(FieldOperators { phi, pi })
        }
    }
}
