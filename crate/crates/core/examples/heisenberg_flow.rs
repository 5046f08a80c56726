//! Bogoliubov coefficients `(u, v)` of one mode through a smooth expansion.
use wicklab::cosmo::*;

fn main() -> wicklab::Result<()> {
    let bg = FLRWBackground::new(1.0, Profile::Tanh { a_initial: 1.0, a_final: 2.0, t_mid: 5.0, width: 1.0 })?;
    let run = evolve_mode_heisenberg(&bg, 1.0, (0.0, 10.0), FlowPath::Chain, &SolverOptions::default())?;
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "|u|²", "|v|²", "ccr");
    let step = (run.t.len() / 10).max(1);
    for i in (0..run.t.len()).step_by(step) {
        println!("{:6.2} {:12.6} {:12.6} {:12.2e}", run.t[i], run.u[i].norm_sqr(), run.v[i].norm_sqr(), run.ccr_residual[i]);
    }
    println!("final |v|² = {:.6}, occupation {:.6}", run.final_v2(), run.final_occupation());
    println!("{} RHS evaluations", run.stats.evaluations);
    println!("time reversal {:.1e}", time_reversal_residual(&bg, 1.0, (0.0, 10.0), FlowPath::Chain, &SolverOptions::default())?);
    Ok(())
}
