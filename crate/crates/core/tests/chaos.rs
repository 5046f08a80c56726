mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use wicklab::chaos::*;
use wicklab::gaussian::{ConventionScale, Covariance, GaussianMeasure};
use wicklab::poly::Poly;
use wicklab::scalar::{c64, factorial, Rational};
use wicklab::symtensor::{sorted_keys, MultiIndex, SymTensor, TruncationPolicy};

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

#[test]
fn hermite_orthogonality_by_quadrature() {
    let mu = GaussianMeasure::standard(1);
    for n in 0..=8 {
        for m in 0..=8 {
            let v = mu.quadrature_expectation(|x| hermite(n, x[0]) * hermite(m, x[0]), 24).unwrap();
            let want = if n == m { factorial(n) } else { 0.0 };
            assert!((v - want).abs() < 1e-8 * (1.0 + want), "n={n} m={m} got {v}");
        }
    }
}

#[test]
fn wick_monomials_against_hermite_with_scaled_covariance() {
    // :φⁿ:_Δ = Δ^{n/2} Hₙ(φ/√Δ) in one dimension.
    let delta = 0.7;
    let cov = DMatrix::from_element(1, 1, c64(delta, 0.0));
    for n in 0..=8 {
        let mut psi = SymTensor::zeros(n, 1);
        psi.set(MultiIndex::new(vec![0; n]), c64(1.0, 0.0));
        let p = wick_expand(&psi, &cov);
        for &x in &[-1.3, 0.2, 2.1] {
            let want = delta.powf(n as f64 / 2.0) * hermite(n, x / delta.sqrt());
            assert!((p.eval(&[c64(x, 0.0)]).re - want).abs() < 1e-10 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn second_wick_monomial_components() {
    let cov = DMatrix::from_row_slice(2, 2, &[q(2, 1), q(1, 3), q(1, 3), q(1, 1)]);
    let mut psi = SymTensor::zeros(2, 2);
    psi.set(MultiIndex::new(vec![0, 1]), q(1, 1));
    let p = wick_expand(&psi, &cov);
    // ψ has full-index entries ψ^{01} = ψ^{10} = 1, so ψ·:φ²: = 2(φ⁰φ¹ − Δ⁰¹).
    assert_eq!(p.coeff(&MultiIndex::new(vec![0, 1])), q(2, 1));
    assert_eq!(p.coeff(&MultiIndex::empty()), q(-2, 3));
    assert_eq!(p.degree(), Some(2));
}

fn exact_cov() -> DMatrix<Rational> {
    DMatrix::from_row_slice(3, 3, &[q(2, 1), q(1, 2), q(0, 1), q(1, 2), q(3, 2), q(-1, 3), q(0, 1), q(-1, 3), q(1, 1)])
}

fn exact_tensor(rank: usize, d: usize, seed: i128) -> SymTensor<Rational> {
    let mut t = SymTensor::zeros(rank, d);
    for (i, k) in sorted_keys(d, rank).into_iter().enumerate() {
        t.set(k, q((seed * 7 + i as i128 * 13) % 11 - 5, 1 + (i as i128 % 3)));
    }
    t
}

#[test]
fn closed_form_and_recursion_agree_exactly() {
    let cov = exact_cov();
    for n in 0..=6 {
        let psi = exact_tensor(n, 3, n as i128);
        assert_eq!(wick_expand(&psi, &cov), wick_expand_recursive(&psi, &cov), "degree {n}");
    }
}

#[test]
fn conversions_compose_to_identity_exactly() {
    let cov = DMatrix::from_row_slice(2, 2, &[q(3, 2), q(1, 4), q(1, 4), q(1, 1)]);
    for n in 0..=8 {
        let psi = exact_tensor(n, 2, 3 + n as i128);
        let series = monomial_to_wick(&psi, &cov);
        let back = wick_series_to_poly(&series, &cov);
        assert_eq!(back, Poly::from_tensors(2, std::slice::from_ref(&psi)), "degree {n}");
        let p = wick_expand(&psi, &cov);
        let series = poly_to_wick_series(&p, &cov);
        for (k, t) in series.iter().enumerate() {
            if k == n {
                assert_eq!(t, &psi);
            } else {
                assert!(t.is_zero(), "degree {n} leaked into {k}");
            }
        }
    }
}

#[test]
fn wick_order_operator_generates_monomials() {
    let cov = exact_cov();
    for n in 0..=5 {
        let psi = exact_tensor(n, 3, 11 + n as i128);
        let plain = Poly::from_tensors(3, std::slice::from_ref(&psi));
        assert_eq!(wick_order(&plain, &cov), wick_expand(&psi, &cov));
        assert_eq!(wick_order_inverse(&wick_order(&plain, &cov), &cov), plain);
    }
    let c = Poly::constant(3, q(5, 2));
    assert_eq!(wick_order(&c, &cov), c);
}

#[test]
fn complex_wick_order_examples() {
    let cov = DMatrix::from_row_slice(2, 2, &[q(2, 1), q(1, 3), q(1, 3), q(1, 1)]);
    let one = Poly::constant(4, q(1, 1));
    assert_eq!(complex_wick_order(&one, &cov), one);
    for x in 0..2 {
        for y in 0..2 {
            let p = Poly::var(4, x).mul(&Poly::var(4, 2 + y));
            let w = complex_wick_order(&p, &cov);
            assert_eq!(w, p.sub(&Poly::constant(4, cov[(x, y)])));
            assert_eq!(complex_wick_order_inverse(&w, &cov), p);
        }
    }
    // Holomorphic-only polynomials are untouched.
    let h = Poly::var(4, 0).mul(&Poly::var(4, 1));
    assert_eq!(complex_wick_order(&h, &cov), h);
}

#[test]
fn product_formula_examples() {
    let cov = DMatrix::from_element(1, 1, q(1, 1));
    let mut two = SymTensor::zeros(2, 1);
    two.set(MultiIndex::new(vec![0, 0]), q(1, 1));
    let parts = wick_product(&two, &two, &cov);
    let got: Vec<(usize, Rational)> = parts.iter().map(|(n, t)| (*n, t.get(&MultiIndex::new(vec![0; *n])))).collect();
    assert_eq!(got, vec![(4, q(1, 1)), (2, q(4, 1)), (0, q(2, 1))]);

    let d = q(3, 5);
    let cov = DMatrix::from_element(1, 1, d);
    let one = SymTensor::basis_vector(1, 0);
    let parts = wick_product(&one, &one, &cov);
    assert_eq!(parts[1].1.get(&MultiIndex::empty()), d);

    let unit = SymTensor::scalar(1, q(1, 1));
    assert_eq!(wick_product(&two, &unit, &cov), vec![(2, two.clone())]);
}

#[test]
fn product_formula_matches_polynomial_multiplication_exactly() {
    let cov = exact_cov();
    for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)] {
        let a = exact_tensor(n, 3, 1);
        let b = exact_tensor(m, 3, 2);
        let lhs = wick_expand(&a, &cov).mul(&wick_expand(&b, &cov));
        let rhs = wick_product(&a, &b, &cov)
            .into_iter()
            .fold(Poly::zero(3), |acc, (_, t)| acc.add(&wick_expand(&t, &cov)));
        assert_eq!(lhs, rhs, "({n},{m})");
    }
}

fn cov1(delta: f64) -> Covariance {
    Covariance::scalar(delta).unwrap()
}

#[test]
fn square_of_shifted_field() {
    let delta = 0.8;
    let cov = cov1(delta);
    let s = ChaosState::from_tensors(
        ChaosFlavor::Real,
        cov.clone(),
        4,
        vec![SymTensor::scalar(1, c64(1.0, 0.0)), SymTensor::basis_vector(1, 0)],
    )
    .unwrap();
    let p = s.pointwise_product(&s, TruncationPolicy::Error).unwrap().state;
    let g = |n: usize| p.degree(n).get(&MultiIndex::new(vec![0; n]));
    assert!(close(g(2), c64(1.0, 0.0), 1e-14));
    assert!(close(g(1), c64(2.0, 0.0), 1e-14));
    assert!(close(g(0), c64(1.0 + delta, 0.0), 1e-14));
}

#[test]
fn product_matches_quadrature() {
    let cov = Covariance::real(random_spd(2, 4)).unwrap();
    let a = random_state(ChaosFlavor::Real, &cov, 3, 6, 1);
    let b = random_state(ChaosFlavor::Real, &cov, 3, 6, 2);
    let ab = a.pointwise_product(&b, TruncationPolicy::Error).unwrap().state;
    let mu = GaussianMeasure::new(cov.clone(), ConventionScale::One);
    let nodes = mu.sample(9, 20);
    for x in nodes {
        let z: Vec<Complex64> = x.iter().map(|v| c64(*v, 0.0)).collect();
        let lhs = a.evaluate(&z).unwrap() * b.evaluate(&z).unwrap();
        assert!(close(lhs, ab.evaluate(&z).unwrap(), 1e-10));
    }
    // ⟨ab, 1⟩ = E[ab] = ⟨ā, b⟩ for real-coefficient states.
    let mean = mu.quadrature_expectation_c(
        |x| {
            let z: Vec<Complex64> = x.iter().map(|v| c64(*v, 0.0)).collect();
            a.evaluate(&z).unwrap() * b.evaluate(&z).unwrap()
        },
        12,
    );
    assert!(close(mean.unwrap(), ab.degree(0).get(&MultiIndex::empty()), 1e-8));
}

#[test]
fn truncation_policy() {
    let cov = cov1(1.0);
    let a = random_state(ChaosFlavor::Real, &cov, 3, 4, 5);
    assert!(matches!(
        a.pointwise_product(&a, TruncationPolicy::Error),
        Err(wicklab::Error::Truncation { .. })
    ));
    let p = a.pointwise_product(&a, TruncationPolicy::DropWithFlag).unwrap();
    assert!(p.dropped > 0.0);
}

#[test]
fn inner_product_examples_and_quadrature() {
    let delta = 1.0;
    let cov = cov1(delta);
    let vac = ChaosState::vacuum(ChaosFlavor::Real, cov.clone(), 8);
    assert!(close(vac.inner_product(&vac).unwrap(), c64(1.0, 0.0), 1e-15));
    let mono = |n: usize| {
        let mut t = SymTensor::zeros(n, 1);
        t.set(MultiIndex::new(vec![0; n]), c64(1.0, 0.0));
        ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), 8, vec![t]).unwrap()
    };
    assert!(close(mono(2).inner_product(&mono(2)).unwrap(), c64(2.0, 0.0), 1e-15));
    assert!(close(mono(3).inner_product(&mono(1)).unwrap(), c64(0.0, 0.0), 1e-15));

    let cov = Covariance::real(random_spd(2, 8)).unwrap();
    let a = random_state(ChaosFlavor::Real, &cov, 4, 4, 3);
    let b = random_state(ChaosFlavor::Real, &cov, 4, 4, 4);
    let mu = GaussianMeasure::new(cov, ConventionScale::One);
    let quad = mu
        .quadrature_expectation_c(
            |x| {
                let z: Vec<Complex64> = x.iter().map(|v| c64(*v, 0.0)).collect();
                a.evaluate(&z).unwrap().conj() * b.evaluate(&z).unwrap()
            },
            16,
        )
        .unwrap();
    assert!(close(a.inner_product(&b).unwrap(), quad, 1e-9));
}

#[test]
fn bidegree_number_and_charge() {
    let cov = Covariance::real(random_spd(2, 1)).unwrap();
    let mut t = BiTensor::zeros(2, 1, 2);
    t.set(MultiIndex::new(vec![0, 1]), MultiIndex::new(vec![1]), c64(0.5, -0.2));
    let s = ChaosState::from_bitensors(cov.clone(), 4, vec![t]).unwrap();
    let n = s.number_operator();
    let q = s.charge_operator().unwrap();
    assert!(close(s.inner_product(&n).unwrap(), s.inner_product(&s).unwrap() * 3.0, 1e-14));
    assert!(close(s.inner_product(&q).unwrap(), s.inner_product(&s).unwrap(), 1e-14));
    let vac = ChaosState::vacuum(ChaosFlavor::Bidegree, cov, 4);
    assert_eq!(vac.number_operator().max_abs(), 0.0);
    let back = ChaosState::from_json_str(&s.to_json_string().unwrap()).unwrap();
    assert!(close(back.inner_product(&s).unwrap(), s.inner_product(&s).unwrap(), 1e-14));
}

#[test]
fn segal_examples() {
    let cov = cov1(1.3);
    let vac = ChaosState::vacuum(ChaosFlavor::Real, cov.clone(), 3);
    let f = vac.segal_isomorphism();
    assert!(close(f.inner_product(&f).unwrap(), c64(1.0, 0.0), 1e-15));
    let mut t = SymTensor::zeros(2, 1);
    t.set(MultiIndex::new(vec![0, 0]), c64(0.4, 0.0));
    let s = ChaosState::from_tensors(ChaosFlavor::Real, cov, 3, vec![t]).unwrap();
    match s.segal_isomorphism().coefficients() {
        Coefficients::Graded(c) => {
            let v = c[2].get(&MultiIndex::new(vec![0, 0]));
            assert!(close(v, c64(0.4 * 2f64.sqrt(), 0.0), 1e-15));
        }
        _ => unreachable!(),
    }
}

#[test]
fn s_transform_examples() {
    let cov = Covariance::real(random_spd(2, 2)).unwrap();
    let vac = ChaosState::vacuum(ChaosFlavor::Real, cov.clone(), 3);
    let xi = [c64(0.3, 0.1), c64(-0.7, 0.2)];
    assert!(close(vac.s_transform(&xi).unwrap(), c64(1.0, 0.0), 1e-15));
    let lin = ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), 3, vec![SymTensor::basis_vector(2, 1)]).unwrap();
    let m = cov.matrix();
    let want = xi[0] * m[(1, 0)] + xi[1] * m[(1, 1)];
    assert!(close(lin.s_transform(&xi).unwrap(), want, 1e-15));
}

#[test]
fn s_transform_roundtrip() {
    for (d, flavor) in [(1, ChaosFlavor::Real), (2, ChaosFlavor::Real), (3, ChaosFlavor::Holomorphic)] {
        let cov = Covariance::real(random_spd(d, 10 + d as u64)).unwrap();
        let s = random_state(flavor, &cov, 5, 5, 77);
        let back = coefficients_from_s(|xi| s.s_transform(xi).unwrap(), flavor, cov, 5, Extraction::default()).unwrap();
        assert!(back.sub(&s).unwrap().max_abs() < 1e-8, "d={d}");
    }
    let cov = cov1(1.0);
    let bad = coefficients_from_s(|_| c64(1.0, 0.0), ChaosFlavor::Real, cov, 2, Extraction { radius: 0.0 });
    assert!(matches!(bad, Err(wicklab::Error::Conditioning(_))));
}

#[test]
fn malliavin_examples_and_finite_differences() {
    let cov = Covariance::real(random_spd(2, 3)).unwrap();
    let vac = ChaosState::vacuum(ChaosFlavor::Real, cov.clone(), 3);
    assert!(vac.malliavin_derivative().unwrap().iter().all(|u| u.max_abs() == 0.0));

    let mut t = SymTensor::zeros(2, 2);
    t.set(MultiIndex::new(vec![0, 1]), c64(1.0, 0.0));
    let s = ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), 3, vec![t]).unwrap();
    let grad = s.malliavin_derivative().unwrap();
    assert!(close(grad[0].degree(1).get(&MultiIndex::new(vec![1])), c64(2.0, 0.0), 1e-15));
    assert!(close(grad[1].degree(1).get(&MultiIndex::new(vec![0])), c64(2.0, 0.0), 1e-15));

    let s = random_state(ChaosFlavor::Real, &cov, 4, 4, 6);
    let grad = s.malliavin_derivative().unwrap();
    let phi = [0.4, -0.9];
    let h = 1e-5;
    for (x, gx) in grad.iter().enumerate() {
        let mut p = phi;
        let mut m = phi;
        p[x] += h;
        m[x] -= h;
        let z = |v: [f64; 2]| [c64(v[0], 0.0), c64(v[1], 0.0)];
        let fd = (s.evaluate(&z(p)).unwrap() - s.evaluate(&z(m)).unwrap()) / (2.0 * h);
        assert!(close(fd, gx.evaluate(&z(phi)).unwrap(), 1e-6));
    }
}

fn contracted_gradient(s: &ChaosState) -> Vec<ChaosState> {
    let g = s.malliavin_derivative().unwrap();
    let m = s.covariance.matrix();
    (0..g.len())
        .map(|z| {
            g.iter().enumerate().fold(g[0].scale(c64(0.0, 0.0)), |acc, (w, gw)| acc.add(&gw.scale(c64(m[(z, w)], 0.0))).unwrap())
        })
        .collect()
}

#[test]
fn skorokhod_examples() {
    let cov = Covariance::real(random_spd(2, 5)).unwrap();
    let vac = ChaosState::vacuum(ChaosFlavor::Real, cov.clone(), 3);
    let zero = vac.scale(c64(0.0, 0.0));
    let u = vec![vac.clone(), zero];
    let out = ChaosState::skorokhod_integral(&u, TruncationPolicy::Error).unwrap().state;
    let want = ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), 3, vec![SymTensor::basis_vector(2, 0)]).unwrap();
    assert!(out.sub(&want).unwrap().max_abs() < 1e-15);

    for n in 0..=3 {
        let s = ChaosState::from_tensors(ChaosFlavor::Real, cov.clone(), 3, vec![random_tensor(n, 2, &mut rng(n as u64), false)]).unwrap();
        let ns = ChaosState::skorokhod_integral(&s.malliavin_derivative().unwrap(), TruncationPolicy::Error).unwrap().state;
        assert!(ns.sub(&s.scale(c64(n as f64, 0.0))).unwrap().max_abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn skorokhod_is_adjoint_to_contracted_gradient(seed in 0u64..1000, hol in any::<bool>()) {
        let flavor = if hol { ChaosFlavor::Holomorphic } else { ChaosFlavor::Real };
        let cov = Covariance::real(random_spd(2, seed)).unwrap();
        let u: Vec<ChaosState> = (0..2).map(|x| random_state(flavor, &cov, 3, 4, seed * 3 + x)).collect();
        let psi = random_state(flavor, &cov, 4, 4, seed + 500);
        let lhs = ChaosState::skorokhod_integral(&u, TruncationPolicy::Error).unwrap().state.inner_product(&psi).unwrap();
        let grad = contracted_gradient(&psi);
        let rhs: Complex64 = u.iter().zip(&grad).map(|(a, b)| a.inner_product(b).unwrap()).sum();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn number_operator_is_skorokhod_of_gradient(seed in 0u64..1000) {
        let cov = Covariance::real(random_spd(2, seed)).unwrap();
        let s = random_state(ChaosFlavor::Real, &cov, 4, 4, seed);
        let ns = ChaosState::skorokhod_integral(&s.malliavin_derivative().unwrap(), TruncationPolicy::Error).unwrap().state;
        prop_assert!(ns.sub(&s.number_operator()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn segal_map_is_unitary(seed in 0u64..1000, hol in any::<bool>()) {
        let flavor = if hol { ChaosFlavor::Holomorphic } else { ChaosFlavor::Real };
        let cov = Covariance::real(random_spd(3, seed)).unwrap();
        let a = random_state(flavor, &cov, 3, 3, seed);
        let b = random_state(flavor, &cov, 3, 3, seed + 1);
        let (ia, ib) = (a.segal_isomorphism(), b.segal_isomorphism());
        prop_assert!(close(a.inner_product(&b).unwrap(), ia.inner_product(&ib).unwrap(), 1e-12));
        prop_assert!(ia.to_chaos().sub(&a).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn product_is_commutative_and_associative(seed in 0u64..1000) {
        let cov = Covariance::real(random_spd(2, seed)).unwrap();
        let [a, b, c] = [0, 1, 2].map(|k| random_state(ChaosFlavor::Real, &cov, 2, 6, seed * 5 + k));
        let p = |x: &ChaosState, y: &ChaosState| x.pointwise_product(y, TruncationPolicy::Error).unwrap().state;
        prop_assert!(p(&a, &b).sub(&p(&b, &a)).unwrap().max_abs() < 1e-10);
        prop_assert!(p(&p(&a, &b), &c).sub(&p(&a, &p(&b, &c))).unwrap().max_abs() < 1e-10);
        let one = ChaosState::vacuum(ChaosFlavor::Real, cov, 6);
        prop_assert!(p(&a, &one).sub(&a).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip(seed in 0u64..1000) {
        let cov = Covariance::real(random_spd(2, seed)).unwrap();
        let a = random_state(ChaosFlavor::Holomorphic, &cov, 3, 4, seed);
        let b = ChaosState::from_json_str(&a.to_json_string().unwrap()).unwrap();
        prop_assert!(b.sub(&a).unwrap().max_abs() < 1e-15);
    }
}
