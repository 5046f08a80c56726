//! Each mode connection applied to `φ̂` and `π̂`, and parallel transport of
//! the density-weighted pair under the compatible connection.
use wicklab::cosmo::*;

fn main() -> wicklab::Result<()> {
    let bg = FLRWBackground::new(1.0, Profile::Tanh { a_initial: 1.0, a_final: 2.0, t_mid: 5.0, width: 1.0 })?;
    let (lambda, t) = (1.5, 4.7);
    let p = mode_parameters(&bg, lambda, t)?;
    let r = mode_rates(&bg, lambda, t)?;
    println!("Δ = {:.6}  K = {:.6}  δ = {:.6}  ρ = {:.6}  s = {:.6}", p.delta, p.k, p.weight, r.log_rate, r.volume_rate);
    for f in table_fixtures(&bg, lambda, t, 8)? {
        println!("{:<16} φ̂ {:.1e}  π̂ {:.1e}", format!("{:?}", f.connection), f.field_residual, f.momentum_residual);
    }
    let tr = transport_check(&bg, lambda, t, 8)?;
    println!("transport of (δ⁻¹φ̂, δπ̂): {:.1e}, {:.1e}", tr.field, tr.momentum);

    let still = FLRWBackground::new(1.0, Profile::Constant { a0: 1.4 })?;
    let (p, r) = (mode_parameters(&still, lambda, 0.0)?, mode_rates(&still, lambda, 0.0)?);
    for kind in ConnectionKind::ALL {
        assert!(connection_word(kind, &p, &r).is_zero());
    }
    println!("static background: every Γ vanishes");
    Ok(())
}
