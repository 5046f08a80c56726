//! The two evaluators of the mode flow side by side. They disagree, and the
//! report says where and by how much.
use wicklab::cosmo::*;

fn main() -> wicklab::Result<()> {
    let bg = FLRWBackground::new(1.0, Profile::Tanh { a_initial: 1.0, a_final: 2.0, t_mid: 5.0, width: 1.0 })?;
    let report = compare_paths(&bg, &[0.5, 1.0, 2.0], (0.0, 10.0), 6, &SolverOptions::default())?;
    println!("agree: {}  max difference {:.3e} over {} points", report.agree, report.max_difference, report.points);
    for f in &report.finals {
        println!("λ = {:.2}: |v|² chain {:.6}, closed-form matrix {:.6}", f.lambda, f.chain_v2, f.matrix_v2);
    }
    println!("{}", report.note);
    Ok(())
}
