//! Moyal and Wick star products of trigonometric exponentials, compared with
//! operator composition in a truncated holomorphic space.
use num_complex::Complex64;
use wicklab::kahler::ComplexStructureBlocks;
use wicklab::quantize::*;

fn main() -> wicklab::Result<()> {
    let blocks = ComplexStructureBlocks::diagonal(nalgebra::DMatrix::from_element(1, 1, 1.3))?;
    let space = RepSpace::new(Rep::Holomorphic, &blocks, 12)?;
    for (x, y) in [(0.3, 0.0), (0.5, -0.4), (0.2, 0.8)] {
        let (cr, ca) = (vec![Complex64::new(x, y)], vec![Complex64::new(-y, 0.5 * x)]);
        let (er, ea) = (TrigExponential::new(cr.clone()), TrigExponential::new(ca.clone()));
        let big = padded_for(&[&er, &ea], &space)?;

        let composed = quantize_exponential(&er, &big)?.compose_into(&quantize_exponential(&ea, &big)?, &space)?;
        let star = moyal_product(&WeylWord::single(er), &WeylWord::single(ea), &blocks);
        let moyal = composed.interior_distance(&quantize_word(&star, &big)?.compress(&space)?, 0);

        let (wr, wa) = (WeylWord::single(TrigExponential::wick(cr)), WeylWord::single(TrigExponential::wick(ca)));
        let composed = wick_quantize_word(&wr, &big)?.compose_into(&wick_quantize_word(&wa, &big)?, &space)?;
        let wick = composed.interior_distance(&wick_quantize_word(&wick_star(&wr, &wa, &blocks), &big)?.compress(&space)?, 0);
        println!("χ = {x:+.1}{y:+.1}i   Moyal {moyal:.1e}   Wick {wick:.1e}");
    }
    Ok(())
}
