//! Pointwise product of two chaos expansions and the contraction weights
//! `k! C(n,k) C(m,k)` behind it.
use nalgebra::DMatrix;
use num_complex::Complex64;
use wicklab::chaos::{product_weights, ChaosFlavor, ChaosState};
use wicklab::gaussian::Covariance;
use wicklab::symtensor::{sorted_keys, SymTensor, TruncationPolicy};

fn state(cov: &Covariance, coeffs: &[f64]) -> ChaosState {
    let tensors = coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            let mut t = SymTensor::zeros(n, 2);
            for key in sorted_keys(2, n) {
                t.set(key, Complex64::new(c, 0.0));
            }
            t
        })
        .collect();
    ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), 8, tensors).unwrap()
}

fn main() -> wicklab::Result<()> {
    for (n, m) in [(2, 2), (3, 2), (4, 4)] {
        println!("weights for ({n}, {m}): {:?}", product_weights(n, m));
    }
    let cov = Covariance::real(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.8]))?;
    let a = state(&cov, &[1.0, 0.5, 0.25]);
    let b = state(&cov, &[0.0, 1.0, 0.0, 0.1]);
    let prod = a.pointwise_product(&b, TruncationPolicy::Error)?;
    let ab = prod.state;
    let x = [Complex64::new(0.4, 0.0), Complex64::new(-1.1, 0.0)];
    let direct = a.evaluate(&x)? * b.evaluate(&x)?;
    println!("(ab)(x) = {:.12}", ab.evaluate(&x)?);
    println!("a(x)b(x) = {direct:.12}");
    println!("‖ab‖ = {:.6}", ab.norm()?);
    Ok(())
}
