//! Complex-structure blocks: constraints, the null-shift structure, and the
//! interpolated versus direct `J` of a single-mode generator.
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wicklab::kahler::*;

fn main() -> wicklab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = ComplexStructureBlocks::random(3, &mut rng, 0.8);
    println!("‖J² + 1‖ = {:.1e}", b.constraints().j_squared);
    println!("transform identities {:.1e}", b.transform_identities().max_residual());
    println!("metric min eigenvalue {:.4}", b.metric_min_eigenvalue());

    // Θ and N must commute.
    let theta = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
    let lapse = &theta * &theta * 0.5 + DMatrix::identity(2, 2);
    let ns = null_shift_structure(&theta, &lapse)?;
    println!("null shift Δ = {:.4}", ns.delta);
    println!("null shift D = {:.4}", ns.d);

    for shift in [0.0, 0.5, 2.0] {
        let g = ModeGenerator { lapse: 1.0, theta: 0.8, shift };
        let j = interpolate_j(&g)?;
        let direct = dynamical_j(&g.f())?;
        let (sq, comm) = j_residuals(&g.f(), &j);
        println!("shift {shift}: |J_interp − J_dyn| {:.1e}, J²+1 {sq:.1e}, [J, F] {comm:.1e}", (j - direct).norm());
    }
    Ok(())
}
