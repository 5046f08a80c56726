//! A real-field chaos state carried to the holomorphic side and back, with
//! the Fock norm preserved by the Segal isomorphism.
use num_complex::Complex64;
use wicklab::chaos::{ChaosFlavor, ChaosState};
use wicklab::gaussian::Covariance;
use wicklab::symtensor::{MultiIndex, SymTensor};
use wicklab::transforms::{dilation, segal_bargmann, segal_bargmann_inverse};

fn main() -> wicklab::Result<()> {
    let mut tensors: Vec<SymTensor<Complex64>> = (0..=3).map(|n| SymTensor::zeros(n, 1)).collect();
    tensors[0].set(MultiIndex::new(vec![]), Complex64::new(0.5, 0.0));
    tensors[2].set(MultiIndex::new(vec![0, 0]), Complex64::new(0.0, 0.25));
    tensors[3].set(MultiIndex::new(vec![0, 0, 0]), Complex64::new(0.1, 0.0));
    let psi = ChaosState::from_tensors(ChaosFlavor::Real, Covariance::scalar(0.8)?, 3, tensors)?;

    let hol = segal_bargmann(&psi)?;
    let back = segal_bargmann_inverse(&hol)?;
    println!("round trip {:.1e}", back.sub(&psi)?.max_abs());
    println!("‖Ψ‖ = {:.6}, ‖SΨ‖ = {:.6}", psi.norm()?, hol.norm()?);
    let f = psi.segal_isomorphism();
    println!("Fock norm² = {:.6}", f.inner_product(&f)?.re);

    let x = [Complex64::new(0.7, 0.0)];
    let d = dilation(&psi)?;
    println!("Ψ(x/√2) = {:.6}, dilated at x = {:.6}", psi.evaluate(&[x[0] / 2f64.sqrt()])?, d.evaluate(&x)?);
    Ok(())
}
