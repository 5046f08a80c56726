//! Wick powers of a single Gaussian variable as ordinary polynomials, in
//! floating point and in exact rationals.
use nalgebra::DMatrix;
use wicklab::chaos::wick_order;
use wicklab::cli::format_poly;
use wicklab::poly::Poly;
use wicklab::scalar::Rational;
use wicklab::symtensor::MultiIndex;

fn main() {
    let cov = DMatrix::from_element(1, 1, 1.0);
    println!("covariance 1");
    for n in 0..=6 {
        let p = wick_order(&Poly::monomial(1, MultiIndex::new(vec![0; n]), 1.0), &cov);
        println!("  :φ^{n}: = {}", format_poly(&p));
    }

    let half = DMatrix::from_element(1, 1, Rational::new(1, 2));
    println!("covariance 1/2, exact");
    for n in 0..=6 {
        let p = wick_order(&Poly::monomial(1, MultiIndex::new(vec![0; n]), Rational::from_integer(1)), &half);
        println!("  :φ^{n}: = {}", format_poly(&p));
    }
}
