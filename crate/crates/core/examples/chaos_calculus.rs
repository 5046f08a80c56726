//! Malliavin derivative, Skorokhod integral and the number operator on a
//! two-mode chaos expansion: `∂*∂ = N`, and the S-transform of a Wick power.
use nalgebra::DMatrix;
use num_complex::Complex64;
use wicklab::chaos::{ChaosFlavor, ChaosState};
use wicklab::gaussian::Covariance;
use wicklab::symtensor::{sorted_keys, SymTensor, TruncationPolicy};

fn main() -> wicklab::Result<()> {
    let cov = Covariance::real(DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 2.0]))?;
    let tensors = (0..=4)
        .map(|n| {
            let mut t = SymTensor::zeros(n, 2);
            for (i, key) in sorted_keys(2, n).into_iter().enumerate() {
                t.set(key, Complex64::new(1.0 / (1 + n + i) as f64, 0.1 * i as f64));
            }
            t
        })
        .collect();
    let psi = ChaosState::from_tensors(ChaosFlavor::Real, cov, 4, tensors)?;

    let grad = psi.malliavin_derivative()?;
    let back = ChaosState::skorokhod_integral(&grad, TruncationPolicy::Error)?.state;
    let n = psi.number_operator();
    println!("‖∂*∂Ψ − NΨ‖∞ = {:.1e}", back.sub(&n)?.max_abs());
    println!("⟨Ψ, NΨ⟩ = {:.6}", psi.inner_product(&n)?);

    let xi = [Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.0)];
    println!("S[Ψ](ξ) = {:.6}", psi.s_transform(&xi)?);
    Ok(())
}
