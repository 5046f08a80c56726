use num_complex::Complex64;
use proptest::prelude::*;
use wicklab::cosmo::*;

fn tanh_bg() -> FLRWBackground {
    FLRWBackground::new(1.0, Profile::Tanh { a_initial: 1.0, a_final: 1.3, t_mid: 5.0, width: 1.5 }).unwrap()
}

fn static_bg() -> FLRWBackground {
    FLRWBackground::new(0.7, Profile::Constant { a0: 1.4 }).unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn mode_parameter_examples() {
    let bg = FLRWBackground::new(1.0, Profile::Constant { a0: 1.0 }).unwrap();
    let p = mode_parameters(&bg, 0.0, 0.0).unwrap();
    assert_eq!((p.theta, p.delta, p.k), (1.0, 1.0, 1.0));
    let bg = FLRWBackground::new(0.0, Profile::Constant { a0: 2.0 }).unwrap();
    let p = mode_parameters(&bg, 4.0, 0.0).unwrap();
    assert_eq!((p.theta, p.delta, p.k), (1.0, 1.0, 1.0));
}

#[test]
fn invalid_backgrounds_are_rejected() {
    assert!(FLRWBackground::new(1.0, Profile::Constant { a0: -1.0 }).is_err());
    let mut bg = static_bg();
    bg.curvature = 1;
    assert!(matches!(bg.validate(), Err(wicklab::Error::Unsupported(_))));
    let pl = FLRWBackground::new(1.0, Profile::PowerLaw { a0: 1.0, t0: 1.0, p: 0.5 }).unwrap();
    assert!(mode_parameters(&pl, 1.0, 0.0).is_err());
    let massless = FLRWBackground::new(0.0, Profile::Constant { a0: 1.0 }).unwrap();
    assert!(mode_parameters(&massless, 0.0, 0.0).is_err());
}

#[test]
fn rates_match_finite_differences_of_the_weighted_covariance() {
    let bg = tanh_bg();
    let h = 1e-5;
    for &t in &[3.0, 5.0, 6.5] {
        for &lambda in &[0.3, 2.0, 9.0] {
            let r = mode_rates(&bg, lambda, t).unwrap();
            let p = mode_parameters(&bg, lambda, t).unwrap();
            let w = |s: f64| mode_parameters(&bg, lambda, s).unwrap().weighted_delta();
            let fd = (w(t + h) - w(t - h)) / (2.0 * h) / p.weight;
            assert!((fd - r.delta_dot).abs() < 1e-8 * (1.0 + fd.abs()), "{fd} {}", r.delta_dot);
            assert!((r.delta_dot * p.k + p.delta * r.k_dot).abs() < 1e-14);
        }
    }
}

#[test]
fn rates_vanish_when_static_and_approach_four_hubble() {
    let r = mode_rates(&static_bg(), 3.0, 0.0).unwrap();
    assert_eq!((r.delta_dot, r.k_dot, r.hubble, r.volume_rate), (0.0, 0.0, 0.0, 0.0));
    let bg = FLRWBackground::new(1.0, Profile::DeSitter { a0: 1.0, hubble: 0.3 }).unwrap();
    let p = mode_parameters(&bg, 1e12, 0.0).unwrap();
    let r = mode_rates(&bg, 1e12, 0.0).unwrap();
    assert!((r.delta_dot / p.delta - 4.0 * 0.3).abs() < 1e-9);
}

#[test]
fn spline_reproduces_smooth_profiles() {
    let t: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let a: Vec<f64> = t.iter().map(|x| 2.0 + x.sin()).collect();
    let s = Spline::new(t, a).unwrap();
    for &x in &[0.5, 3.21, 7.7] {
        assert!((s.eval(x) - (2.0 + f64::sin(x))).abs() < 1e-6);
        assert!((s.derivative(x) - x.cos()).abs() < 1e-4);
    }
    assert!(Spline::new(vec![0.0, 1.0, 1.0], vec![1.0; 3]).is_err());
}

#[test]
fn connection_vanishes_exactly_when_static() {
    let bg = static_bg();
    for kind in ConnectionKind::ALL {
        let p = mode_parameters(&bg, 2.0, 0.0).unwrap();
        let r = mode_rates(&bg, 2.0, 0.0).unwrap();
        assert!(connection_word(kind, &p, &r).is_zero());
    }
    let b = connection_blocks(&bg, 2.0, 0.0).unwrap();
    assert_eq!(b, LadderWord::default());
}

#[test]
fn connection_is_linear_in_the_expansion_rate() {
    let at = |h: f64| {
        let bg = FLRWBackground::new(1.0, Profile::DeSitter { a0: 1.0, hubble: h }).unwrap();
        connection_blocks(&bg, 2.0, 0.0).unwrap()
    };
    let (one, half) = (at(1e-3), at(5e-4));
    for (x, y) in [(one.c_ad_a, half.c_ad_a), (one.c_aa, half.c_aa), (one.c_adad, half.c_adad)] {
        assert!((x - 2.0 * y).abs() < 1e-15 * (1.0 + x.abs()));
    }
}

#[test]
fn compatible_connection_in_ladder_form() {
    // Γ = K[½ρ a†a + c a†² − c a²] with c = ρ/4 − s/2 on the weighted pair.
    let bg = tanh_bg();
    let (lambda, t) = (1.5, 4.2);
    let p = mode_parameters(&bg, lambda, t).unwrap();
    let r = mode_rates(&bg, lambda, t).unwrap();
    let k = p.weighted_k();
    let cc = 0.25 * r.log_rate - 0.5 * r.volume_rate;
    let b = connection_blocks(&bg, lambda, t).unwrap();
    assert!((b.c_ad_a - 0.5 * r.log_rate * k).abs() < 1e-12 * k);
    assert!((b.c_aa + cc * k).abs() < 1e-12 * k);
    assert!((b.c_adad - cc * k).abs() < 1e-12 * k);
    let g = connection_word(ConnectionKind::Compatible, &p, &r).sub(&symmetric_part(&r));
    assert!(g.phi_d.abs() < 1e-15);
}

#[test]
fn table_fixtures_hold_at_matrix_level() {
    let bg = tanh_bg();
    for &(lambda, t) in &[(0.5, 3.0), (2.0, 5.0), (7.0, 6.1)] {
        for f in table_fixtures(&bg, lambda, t, 8).unwrap() {
            assert!(f.field_residual < 1e-10 && f.momentum_residual < 1e-10, "{f:?}");
        }
    }
}

#[test]
fn transport_conditions_and_anti_adjointness() {
    let bg = tanh_bg();
    let r = transport_check(&bg, 1.0, 4.5, 8).unwrap();
    assert!(r.field < 1e-10 && r.momentum < 1e-10, "{r:?}");
    assert!(r.ccr < 1e-10);
    assert!(r.anti_adjoint < 1e-12);
    assert!(r.field_unweighted > 1e-3);
}

#[test]
fn heisenberg_static_is_trivial() {
    let run = evolve_mode_heisenberg(&static_bg(), 2.0, (0.0, 10.0), FlowPath::Chain, &SolverOptions::default()).unwrap();
    assert!(run.v.iter().all(|v| v.norm() < 1e-12));
    assert!(run.u.iter().all(|u| (u - c(1.0)).norm() < 1e-12));
    let rhs = heisenberg_flow_rhs(&static_bg(), 2.0, 1.0, (c(0.3), c(0.7)), FlowPath::Chain).unwrap();
    assert_eq!(rhs, (Complex64::default(), Complex64::default()));
}

#[test]
fn heisenberg_matches_closed_form() {
    // From (1, 0) with real p, q: u + v = (a₀/a)³ on both paths, and u − v is
    // δΔ(t)/δΔ(0) on the chain path, Δ(t)/Δ(0) on the matrix path.
    let bg = tanh_bg();
    let lambda = 1.3;
    let span = (0.0, 10.0);
    let p0 = mode_parameters(&bg, lambda, 0.0).unwrap();
    for path in [FlowPath::Chain, FlowPath::Matrix] {
        let run = evolve_mode_heisenberg(&bg, lambda, span, path, &SolverOptions::default()).unwrap();
        for (i, &t) in run.t.iter().enumerate() {
            let p = mode_parameters(&bg, lambda, t).unwrap();
            let sum = (p0.a / p.a).powi(3);
            let diff = match path {
                FlowPath::Chain => p.weighted_delta() / p0.weighted_delta(),
                FlowPath::Matrix => p.delta / p0.delta,
            };
            let (u, v) = (run.u[i], run.v[i]);
            assert!((u + v - c(sum)).norm() < 1e-7, "{path:?} t={t}");
            assert!((u - v - c(diff)).norm() < 1e-7, "{path:?} t={t}");
        }
        assert!(run.final_v2() > 0.0);
    }
}

#[test]
fn heisenberg_rhs_is_linear() {
    let bg = tanh_bg();
    let f = |u: f64, v: f64| heisenberg_flow_rhs(&bg, 2.0, 4.0, (c(u), Complex64::new(0.0, v)), FlowPath::Chain).unwrap();
    let (a, b, s) = (f(1.0, 0.0), f(0.0, 1.0), f(2.0, 3.0));
    assert!((s.0 - a.0 * 2.0 - b.0 * 3.0).norm() < 1e-14);
    assert!((s.1 - a.1 * 2.0 - b.1 * 3.0).norm() < 1e-14);
}

#[test]
fn heisenberg_time_reversal() {
    let bg = tanh_bg();
    for path in [FlowPath::Chain, FlowPath::Matrix] {
        let r = time_reversal_residual(&bg, 0.8, (0.0, 10.0), path, &SolverOptions::default()).unwrap();
        assert!(r < 1e-6, "{r:e}");
    }
}

#[test]
fn de_sitter_burst_then_constant_produces_particles() {
    let burst = FLRWBackground::new(1.0, Profile::DeSitter { a0: 1.0, hubble: 0.5 }).unwrap();
    let t: Vec<f64> = (0..=400).map(|i| i as f64 * 0.02).collect();
    let a: Vec<f64> = t.iter().map(|&x| burst.a(x.min(2.0)).unwrap()).collect();
    let bg = FLRWBackground::new(1.0, Profile::tabulated(t, a).unwrap()).unwrap();
    let run = evolve_mode_heisenberg(&bg, 1.0, (0.0, 8.0), FlowPath::Chain, &SolverOptions::default()).unwrap();
    assert!(run.final_v2() > 1e-3);
    let late = run.v.len() - 1;
    assert!((run.v[late] - run.v[late - 5]).norm() < 1e-3);
}

#[test]
fn tolerance_refinement_is_stable() {
    let bg = tanh_bg();
    let opts = SolverOptions::default();
    let a = evolve_mode_heisenberg(&bg, 0.6, (0.0, 10.0), FlowPath::Chain, &opts).unwrap().final_v2();
    let b = evolve_mode_heisenberg(&bg, 0.6, (0.0, 10.0), FlowPath::Chain, &opts.tightened(10.0)).unwrap().final_v2();
    assert!(((a - b) / b).abs() < 1e-5);
    let rk = SolverOptions { solver: Solver::Rk4 { step: 0.01 }, ..opts };
    let c = evolve_mode_heisenberg(&bg, 0.6, (0.0, 10.0), FlowPath::Chain, &rk).unwrap().final_v2();
    assert!(((a - c) / b).abs() < 1e-6);
}

fn excited(delta: f64, cutoff: usize) -> wicklab::chaos::ChaosState {
    let psi = [c(0.6), Complex64::new(0.3, 0.2), c(-0.15), Complex64::new(0.0, 0.05)];
    let n = fock_norm(&psi, delta).sqrt();
    let psi: Vec<_> = psi.iter().map(|z| z / n).collect();
    mode_state_from(&psi, delta, cutoff).unwrap()
}

#[test]
fn static_schrodinger_matches_propagator() {
    let bg = static_bg();
    let lambda = 2.5;
    let p = mode_parameters(&bg, lambda, 0.0).unwrap();
    let psi0 = excited(p.delta, 8);
    let opts = SchrodingerOptions { cutoff: 8, solver: SolverOptions { rtol: 1e-11, atol: 1e-13, ..Default::default() }, ..Default::default() };
    let run = evolve_mode_schrodinger(&bg, lambda, &psi0, (0.0, 3.0), &opts).unwrap();
    let init = &run.psi[0];
    for (t, psi) in run.t.iter().zip(&run.psi) {
        let want = static_propagator(init, p.k, *t);
        let err = psi.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "t={t} err={err:e}");
    }
    // The first-order kernel agrees only to O(t²).
    let lin = linear_propagator(init, p.k, 1e-3);
    let exact = static_propagator(init, p.k, 1e-3);
    let gap = lin.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(gap < 1e-4 && gap > 1e-9);
}

#[test]
fn static_vacuum_only_rotates_phase() {
    let bg = static_bg();
    let p = mode_parameters(&bg, 1.0, 0.0).unwrap();
    let vac = mode_state_from(&[c(1.0)], p.delta, 6).unwrap();
    let run = evolve_mode_schrodinger(&bg, 1.0, &vac, (0.0, 5.0), &SchrodingerOptions { cutoff: 6, ..Default::default() }).unwrap();
    for psi in &run.psi {
        assert!((psi[0].norm() - 1.0).abs() < 1e-12);
        assert!(psi[1..].iter().all(|z| z.norm() < 1e-14));
    }
}

#[test]
fn modified_schrodinger_conserves_the_time_dependent_norm() {
    let bg = tanh_bg();
    let lambda = 1.0;
    let p = mode_parameters(&bg, lambda, 0.0).unwrap();
    let psi0 = excited(p.delta, 10);
    let opts = SchrodingerOptions { cutoff: 10, ..Default::default() };
    let run = evolve_mode_schrodinger(&bg, lambda, &psi0, (0.0, 10.0), &opts).unwrap();
    assert!(run.max_norm_drift() < 1e-6, "{:e}", run.max_norm_drift());
    let naive = SchrodingerOptions { connection: None, ..opts };
    let control = evolve_mode_schrodinger(&bg, lambda, &psi0, (0.0, 10.0), &naive).unwrap();
    assert!(control.max_norm_drift() > 1e-5, "{:e}", control.max_norm_drift());
}

#[test]
fn schrodinger_rejects_bad_input() {
    let bg = tanh_bg();
    let p = mode_parameters(&bg, 1.0, 0.0).unwrap();
    let unnormalized = mode_state_from(&[c(2.0)], p.delta, 4).unwrap();
    assert!(evolve_mode_schrodinger(&bg, 1.0, &unnormalized, (0.0, 1.0), &SchrodingerOptions::default()).is_err());
    let wrong = mode_state_from(&[c(1.0)], p.delta * 2.0, 4).unwrap();
    assert!(evolve_mode_schrodinger(&bg, 1.0, &wrong, (0.0, 1.0), &SchrodingerOptions::default()).is_err());
}

#[test]
fn truncation_leak_is_flagged() {
    let bg = FLRWBackground::new(1.0, Profile::Tanh { a_initial: 1.0, a_final: 6.0, t_mid: 2.0, width: 0.3 }).unwrap();
    let p = mode_parameters(&bg, 0.2, 0.0).unwrap();
    let vac = mode_state_from(&[c(1.0)], p.delta, 2).unwrap();
    let opts = SchrodingerOptions { cutoff: 2, ..Default::default() };
    let r = evolve_mode_schrodinger(&bg, 0.2, &vac, (0.0, 4.0), &opts);
    assert!(matches!(r, Err(wicklab::Error::SeriesTail { .. })), "{r:?}");
}

#[test]
fn constant_background_spectrum_is_zero() {
    let s = particle_spectrum(&static_bg(), &[0.1, 1.0, 4.0], (0.0, 5.0), &SpectrumOptions::default()).unwrap();
    assert!(s.complete());
    assert!(s.rows.iter().all(|r| r.absv2 == 0.0 && r.n_expect == 0.0));
}

#[test]
fn spectrum_is_deterministic_across_worker_counts() {
    let bg = tanh_bg();
    let grid: Vec<f64> = (1..=8).map(|i| i as f64 * 0.5).rev().collect();
    let one = particle_spectrum(&bg, &grid, (0.0, 10.0), &SpectrumOptions { workers: 1, ..Default::default() }).unwrap();
    let four = particle_spectrum(&bg, &grid, (0.0, 10.0), &SpectrumOptions { workers: 4, ..Default::default() }).unwrap();
    assert!(one.rows.windows(2).all(|w| w[0].lambda < w[1].lambda));
    for (a, b) in one.rows.iter().zip(&four.rows) {
        assert_eq!(a.absv2.to_bits(), b.absv2.to_bits());
    }
}

#[test]
fn tabulated_profile_matches_the_analytic_preset() {
    let bg = tanh_bg();
    let tab = bg.tabulate(0.0, 10.0, 4000).unwrap();
    let grid = [0.5, 2.0];
    let a = particle_spectrum(&bg, &grid, (0.0, 10.0), &SpectrumOptions::default()).unwrap();
    let b = particle_spectrum(&tab, &grid, (0.0, 10.0), &SpectrumOptions::default()).unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert!((x.absv2 - y.absv2).abs() < 1e-6 * (1.0 + x.absv2));
    }
}

#[test]
fn spectrum_flags_failing_modes() {
    let bg = FLRWBackground::new(0.0, Profile::Constant { a0: 1.0 }).unwrap();
    let s = particle_spectrum(&bg, &[0.0, 1.0], (0.0, 1.0), &SpectrumOptions::default()).unwrap();
    assert!(!s.complete());
    assert!(s.rows[0].error.is_some() && s.rows[1].error.is_none());
}

#[test]
fn outputs_round_trip() {
    let bg = tanh_bg();
    let dir = std::env::temp_dir().join(format!("wicklab-cosmo-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let opts = SpectrumOptions { method: SpectrumMethod::WithSchrodinger { cutoff: 6 }, ..Default::default() };
    let s = particle_spectrum(&bg, &[1.0, 2.0], (0.0, 10.0), &opts).unwrap();
    let path = dir.join("spectrum.csv");
    s.write_csv(&path, &[("solver".into(), "dopri5".into())]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# solver: dopri5"));
    assert!(text.contains("lambda,absv2,n_expect,norm_drift,ccr_residual"));
    assert!(s.rows.iter().all(|r| r.norm_drift < 1e-6));
    let json = s.runs[0].as_ref().unwrap().to_json();
    for key in ["lambda", "t", "u", "v", "norm", "ccr_residual"] {
        assert!(json.get(key).is_some());
    }
    let text = serde_json::to_string(&bg).unwrap();
    let back: FLRWBackground = serde_json::from_str(&text).unwrap();
    assert_eq!(back.a(3.0).unwrap(), bg.a(3.0).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dual_path_report() {
    let bg = tanh_bg();
    let r = compare_paths(&bg, &[0.5, 2.0], (0.0, 10.0), 10, &SolverOptions::default()).unwrap();
    assert!(!r.agree);
    assert_eq!(r.points, 22);
    assert!(!r.discrepancies.is_empty());
    let flat = compare_paths(&static_bg(), &[1.0], (0.0, 1.0), 4, &SolverOptions::default()).unwrap();
    assert!(flat.agree);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn k_and_delta_are_inverse(a in 0.1f64..5.0, m in 0.0f64..3.0, lambda in 0.01f64..20.0) {
        let bg = FLRWBackground::new(m, Profile::Constant { a0: a }).unwrap();
        let p = mode_parameters(&bg, lambda, 0.0).unwrap();
        prop_assert!((p.k * p.delta - 1.0).abs() < 1e-14);
        prop_assert!((p.weighted_k() * p.weighted_delta() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_is_anti_self_adjoint(t in 0.0f64..10.0, lambda in 0.1f64..5.0) {
        let r = transport_check(&tanh_bg(), lambda, t, 6).unwrap();
        prop_assert!(r.anti_adjoint < 1e-12);
    }
}
