//! Gram matrix of Wick powers under a 1D Gaussian, by Gauss–Hermite quadrature.
use nalgebra::DMatrix;
use wicklab::chaos::wick_order;
use wicklab::gaussian::{ConventionScale, Covariance, GaussianMeasure};
use wicklab::poly::Poly;
use wicklab::symtensor::MultiIndex;

fn main() -> wicklab::Result<()> {
    let delta = 0.7;
    let mu = GaussianMeasure::new(Covariance::scalar(delta)?, ConventionScale::One);
    let cov = DMatrix::from_element(1, 1, delta);
    let powers: Vec<Poly<f64>> =
        (0..=6).map(|n| wick_order(&Poly::monomial(1, MultiIndex::new(vec![0; n]), 1.0), &cov)).collect();
    for p in &powers {
        let row: Vec<String> = powers
            .iter()
            .map(|q| mu.quadrature_expectation(|x| p.eval(x) * q.eval(x), 16).map(|v| format!("{v:9.4}")))
            .collect::<wicklab::Result<_>>()?;
        println!("{}", row.join(" "));
    }
    println!("diagonal should be n! Δⁿ");
    Ok(())
}
