//! Gaussian moments `E[∏ ⟨vᵢ, φ⟩]` from pairings, checked against sampling.
use nalgebra::DMatrix;
use wicklab::diagrams::{diagram_count, wick_moment};
use wicklab::gaussian::{ConventionScale, Covariance, GaussianMeasure};

fn main() -> wicklab::Result<()> {
    let cov = Covariance::real(DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 1.5]))?;
    let vectors = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.5, 0.0, 0.5], vec![0.0, 1.0, 1.0]];
    let exact = wick_moment(&vectors, &cov)?;
    println!("{} pairings of {} legs", diagram_count(vectors.len(), vectors.len() / 2), vectors.len());
    println!("pairing sum  {exact:.6}");

    let mu = GaussianMeasure::new(cov, ConventionScale::One);
    let samples = mu.sample(42, 400_000);
    let vals: Vec<f64> = samples
        .iter()
        .map(|x| vectors.iter().map(|v| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()).product())
        .collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let se = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
    println!("Monte Carlo  {mean:.6} ± {se:.6} ({:.2} SE)", (mean - exact) / se);
    Ok(())
}
