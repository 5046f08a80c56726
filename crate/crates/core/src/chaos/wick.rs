//! Wick monomials, Wick-order operators and the product formula.

use crate::poly::Poly;
use crate::scalar::{binomial, double_factorial_odd, factorial_i, Scalar};
use crate::symtensor::{MultiIndex, SymTensor};
use nalgebra::DMatrix;

/// Probabilists' Hermite polynomial, `Hₙ = t·Hₙ₋₁ − (n−1)Hₙ₋₂`.
pub fn hermite(n: usize, t: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, t);
    if n == 0 {
        return h0;
    }
    for k in 2..=n {
        let h2 = t * h1 - (k as f64 - 1.0) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `ψ·:φⁿ:_Δ` expanded in ordinary monomials (closed form):
/// `Σ_k (−1)^k C(n,2k)(2k−1)!! (ψ contracted k times with Δ)·φ^{n−2k}`.
pub fn wick_expand<S: Scalar>(psi: &SymTensor<S>, cov: &DMatrix<S>) -> Poly<S> {
    let n = psi.rank();
    let mut parts = Vec::new();
    let mut cur = psi.clone();
    for k in 0..=n / 2 {
        if k > 0 {
            cur = cur.contract(&[(0, 1)], cov).expect("rank at least two");
        }
        let mut c = binomial(n, 2 * k) * double_factorial_odd(k);
        if k % 2 == 1 {
            c = -c;
        }
        parts.push(cur.scale(&S::from_i64(c)));
    }
    Poly::from_tensors(psi.dim(), &parts)
}

/// Same expansion through the recursion `:φⁿ: = :φⁿ⁻¹:φ − (n−1)Δ:φⁿ⁻²:`.
pub fn wick_expand_recursive<S: Scalar>(psi: &SymTensor<S>, cov: &DMatrix<S>) -> Poly<S> {
    let n = psi.rank();
    let d = psi.dim();
    if n == 0 {
        return Poly::constant(d, psi.get(&MultiIndex::empty()));
    }
    let inv_n = S::one() / S::from_i64(n as i64);
    let mut out = Poly::zero(d);
    for x in 0..d {
        let slice = psi.derivative(x).scale(&inv_n);
        if slice.is_zero() {
            continue;
        }
        out = out.add(&wick_expand_recursive(&slice, cov).times_var(x));
    }
    if n >= 2 {
        let contracted = psi.contract(&[(0, 1)], cov).expect("rank at least two");
        let tail = wick_expand_recursive(&contracted, cov).scale(&S::from_i64(n as i64 - 1));
        out = out.sub(&tail);
    }
    out
}

/// Inverse conversion: `ψ·φⁿ = Σ_k C(n,2k)(2k−1)!! (contracted ψ)·:φ^{n−2k}:_Δ`,
/// returned as Wick coefficient tensors indexed by degree.
pub fn monomial_to_wick<S: Scalar>(psi: &SymTensor<S>, cov: &DMatrix<S>) -> Vec<SymTensor<S>> {
    let n = psi.rank();
    let d = psi.dim();
    let mut out: Vec<SymTensor<S>> = (0..=n).map(|j| SymTensor::zeros(j, d)).collect();
    let mut cur = psi.clone();
    for k in 0..=n / 2 {
        if k > 0 {
            cur = cur.contract(&[(0, 1)], cov).expect("rank at least two");
        }
        let c = S::from_i64(binomial(n, 2 * k) * double_factorial_odd(k));
        out[n - 2 * k] = out[n - 2 * k].add(&cur.scale(&c));
    }
    out
}

/// Polynomial of a Wick series given by degree-indexed coefficient tensors.
pub fn wick_series_to_poly<S: Scalar>(coeffs: &[SymTensor<S>], cov: &DMatrix<S>) -> Poly<S> {
    coeffs.iter().fold(Poly::zero(cov.nrows()), |acc, t| acc.add(&wick_expand(t, cov)))
}

/// Wick coefficient tensors of an ordinary polynomial.
pub fn poly_to_wick_series<S: Scalar>(p: &Poly<S>, cov: &DMatrix<S>) -> Vec<SymTensor<S>> {
    let d = cov.nrows();
    let top = p.degree().unwrap_or(0);
    let mut out: Vec<SymTensor<S>> = (0..=top).map(|j| SymTensor::zeros(j, d)).collect();
    for n in 0..=top {
        let t = p.tensor(n);
        if t.is_zero() {
            continue;
        }
        for (j, part) in monomial_to_wick(&t, cov).into_iter().enumerate() {
            out[j] = out[j].add(&part);
        }
    }
    out
}

/// `exp(−½ Δ∂∂) p`.
pub fn wick_order<S: Scalar>(p: &Poly<S>, cov: &DMatrix<S>) -> Poly<S> {
    p.exp_laplacian(cov, &S::from_frac(-1, 2))
}

/// `exp(+½ Δ∂∂) p`.
pub fn wick_order_inverse<S: Scalar>(p: &Poly<S>, cov: &DMatrix<S>) -> Poly<S> {
    p.exp_laplacian(cov, &S::from_frac(1, 2))
}

/// Metric on `2d` variables pairing variable `x` with variable `d+y` through `Δ^{xy}`.
fn cross_metric<S: Scalar>(cov: &DMatrix<S>) -> DMatrix<S> {
    let d = cov.nrows();
    let mut c = DMatrix::from_element(2 * d, 2 * d, S::zero());
    for x in 0..d {
        for y in 0..d {
            c[(x, d + y)] = cov[(x, y)].clone();
        }
    }
    c
}

/// `exp(−Δ ∂_φ ∂_φ̄)` on a polynomial in `(φ, φ̄)`; variables `0..d` are `φ`,
/// `d..2d` are `φ̄`.
pub fn complex_wick_order<S: Scalar>(p: &Poly<S>, cov: &DMatrix<S>) -> Poly<S> {
    p.exp_laplacian(&cross_metric(cov), &-S::one())
}

/// Inverse of [`complex_wick_order`].
pub fn complex_wick_order_inverse<S: Scalar>(p: &Poly<S>, cov: &DMatrix<S>) -> Poly<S> {
    p.exp_laplacian(&cross_metric(cov), &S::one())
}

/// Symmetrized contraction of `k` slots of `a` against `k` slots of `b` through `cov`.
pub fn cross_contract<S: Scalar>(a: &SymTensor<S>, b: &SymTensor<S>, k: usize, cov: &DMatrix<S>) -> SymTensor<S> {
    let (n, m, d) = (a.rank(), b.rank(), a.dim());
    assert!(k <= n && k <= m, "cannot contract {k} slots of ranks {n}, {m}");
    let embed = DMatrix::from_fn(d, 2 * d, |r, c| if r == c { S::one() } else { S::zero() });
    let shift = DMatrix::from_fn(d, 2 * d, |r, c| if c == d + r { S::one() } else { S::zero() });
    let pa = Poly::from_tensors(d, std::slice::from_ref(a)).substitute_linear(&embed);
    let pb = Poly::from_tensors(d, std::slice::from_ref(b)).substitute_linear(&shift);
    let metric = cross_metric(cov);
    let mut lifted = pa.mul(&pb);
    for _ in 0..k {
        lifted = lifted.laplacian(&metric);
    }
    let merge = DMatrix::from_fn(2 * d, d, |r, c| if r % d == c { S::one() } else { S::zero() });
    let merged = lifted.substitute_linear(&merge);
    let norm = S::from_i64(factorial_i(n - k) * factorial_i(m - k)) / S::from_i64(factorial_i(n) * factorial_i(m));
    merged.tensor(n + m - 2 * k).scale(&norm)
}

/// `(a·:φⁿ:)(b·:φᵐ:) = Σ_k k!C(n,k)C(m,k) (a ⊗_k b)·:φ^{n+m−2k}:` as
/// `(degree, coefficient)` pairs.
pub fn wick_product<S: Scalar>(a: &SymTensor<S>, b: &SymTensor<S>, cov: &DMatrix<S>) -> Vec<(usize, SymTensor<S>)> {
    let (n, m) = (a.rank(), b.rank());
    product_weights(n, m)
        .into_iter()
        .enumerate()
        .map(|(k, w)| (n + m - 2 * k, cross_contract(a, b, k, cov).scale(&S::from_i64(w))))
        .collect()
}

/// Weights `k!C(n,k)C(m,k)` of the product formula.
pub fn product_weights(n: usize, m: usize) -> Vec<i64> {
    (0..=n.min(m)).map(|k| factorial_i(k) * binomial(n, k) * binomial(m, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite(4, 2.0), 16.0 - 24.0 + 3.0);
        assert_eq!(hermite(3, 1.5), 1.5f64.powi(3) - 4.5);
    }

    #[test]
    fn one_dim_fourth_power() {
        let cov = DMatrix::from_element(1, 1, r(1));
        let mut psi = SymTensor::zeros(4, 1);
        psi.set(MultiIndex::new(vec![0; 4]), r(1));
        let p = wick_expand(&psi, &cov);
        assert_eq!(p.coeff(&MultiIndex::new(vec![0; 4])), r(1));
        assert_eq!(p.coeff(&MultiIndex::new(vec![0; 2])), r(-6));
        assert_eq!(p.coeff(&MultiIndex::empty()), r(3));
        assert_eq!(p, wick_expand_recursive(&psi, &cov));
    }

    #[test]
    fn product_weights_small() {
        assert_eq!(product_weights(2, 2), vec![1, 4, 2]);
        assert_eq!(product_weights(3, 1), vec![1, 3]);
    }
}
