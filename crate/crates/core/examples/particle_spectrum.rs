//! Created-particle spectrum over a grid of Laplacian eigenvalues, run in
//! parallel and written as CSV.
use wicklab::cosmo::*;

fn main() -> wicklab::Result<()> {
    let bg = FLRWBackground::new(0.5, Profile::Tanh { a_initial: 1.0, a_final: 2.0, t_mid: 5.0, width: 1.0 })?;
    let lambdas: Vec<f64> = (1..=12).map(|i| 0.25 * i as f64).collect();
    let spectrum = particle_spectrum(&bg, &lambdas, (0.0, 10.0), &SpectrumOptions::default())?;
    println!("{:>6} {:>12} {:>12}", "λ", "|v|²", "⟨n⟩");
    for r in &spectrum.rows {
        println!("{:6.2} {:12.6} {:12.6}", r.lambda, r.absv2, r.n_expect);
    }
    let path = std::env::temp_dir().join("wicklab-spectrum.csv");
    spectrum.write_csv(&path, &[("background".into(), "tanh 1 → 2".into())])?;
    println!("wrote {}", path.display());
    Ok(())
}
