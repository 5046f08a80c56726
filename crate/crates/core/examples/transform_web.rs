//! Residuals of every edge in the transform web for blocks with `A ≠ 0`.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wicklab::kahler::ComplexStructureBlocks;
use wicklab::transforms::verify_web;

fn main() {
    let blocks = ComplexStructureBlocks::random(2, &mut ChaCha8Rng::seed_from_u64(9), 0.7);
    println!("A = {:.4}", blocks.a);
    let reports = verify_web(&blocks, 4);
    for r in &reports {
        println!("{} {:<60} {:.2e}", if r.pass { "ok  " } else { "FAIL" }, r.label, r.residual);
    }
    println!("{}/{} pass", reports.iter().filter(|r| r.pass).count(), reports.len());
}
