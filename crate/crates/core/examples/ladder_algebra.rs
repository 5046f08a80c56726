//! Ladder operators in the four representations: `[aᵢ, a†ⱼ]` against the
//! commutator matrix, and Weyl quantization of a conjugated polynomial.
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wicklab::kahler::ComplexStructureBlocks;
use wicklab::poly::Poly;
use wicklab::quantize::*;
use wicklab::symtensor::MultiIndex;

fn main() -> wicklab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let blocks = ComplexStructureBlocks::random(2, &mut rng, 0.5);
    let mut p = Poly::zero(4);
    p.add_term(MultiIndex::new(vec![0, 2]), Complex64::new(1.0, 0.5));
    p.add_term(MultiIndex::new(vec![1, 1, 3]), Complex64::new(-0.3, 0.0));

    for rep in Rep::ALL {
        let space = RepSpace::new(rep, &blocks, 6)?;
        let l = ladder_operators(&space)?;
        let cm = space.commutator_matrix();
        let mut ccr: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let want = TruncatedOperator::identity(&space).scale(Complex64::new(cm[(i, j)], 0.0));
                ccr = ccr.max(l.ann[i].commutator(&l.cre[j]).interior_distance(&want, 2));
            }
        }
        let q = weyl_quantize(&p, &space)?;
        let qs = weyl_quantize(&involution(&p), &space)?;
        println!(
            "{:<16} dim {:>3}  [a, a†] residual {ccr:.1e}  Q(p*) − Q(p)† {:.1e}",
            rep.name(),
            space.len(),
            qs.distance(&q.adjoint())
        );
    }
    Ok(())
}
