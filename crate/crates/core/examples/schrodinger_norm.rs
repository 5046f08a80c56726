//! A truncated mode wavefunction evolved with and without the compatible
//! connection. Only the connected evolution keeps its norm.
use num_complex::Complex64;
use wicklab::cosmo::*;

fn main() -> wicklab::Result<()> {
    let bg = FLRWBackground::new(1.0, Profile::Tanh { a_initial: 1.0, a_final: 2.0, t_mid: 5.0, width: 1.0 })?;
    let lambda = 1.0;
    let p = mode_parameters(&bg, lambda, 0.0)?;
    let raw = [Complex64::new(0.6, 0.0), Complex64::new(0.2, -0.3), Complex64::new(0.1, 0.0)];
    let n = fock_norm(&raw, p.delta).sqrt();
    let psi: Vec<Complex64> = raw.iter().map(|z| z / n).collect();
    let state = mode_state_from(&psi, p.delta, 10)?;

    let with = SchrodingerOptions::default();
    let without = SchrodingerOptions { connection: None, ..with };
    let a = evolve_mode_schrodinger(&bg, lambda, &state, (0.0, 10.0), &with)?;
    let b = evolve_mode_schrodinger(&bg, lambda, &state, (0.0, 10.0), &without)?;
    println!("compatible connection: max norm drift {:.2e}", a.max_norm_drift());
    println!("no connection:         max norm drift {:.2e}", b.max_norm_drift());
    println!("largest truncation leak {:.2e}", a.leak.iter().fold(0.0f64, |m, &x| m.max(x)));
    Ok(())
}
