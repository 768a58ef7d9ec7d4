//! Invariants of the transforms and norms under random inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use weylgrid::verify::samplers::{random_smooth_vector, random_test_function, random_trace_class, sample_rng};
use weylgrid::{
    beta_check, format_exponent, fourier_wigner, gamma, parse_distribution, parse_exponent, rho_matrix, schatten_norm,
    sft_of_distribution, singular_values, symplectic_ft, weyl, weyl_definitional_pairing, weyl_samples, Bump,
    CompactDistribution, DerivativeOrder, DistributionDoc, OperatorMatrix, PhaseGrid,
};

fn grid64() -> PhaseGrid {
    PhaseGrid::new(64).unwrap()
}

fn grid128() -> PhaseGrid {
    PhaseGrid::new(128).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(f64::INFINITY), 1.0f64..8.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sft_is_an_involution(seed in any::<u64>()) {
        let f = random_test_function(grid64(), &mut sample_rng(seed));
        prop_assert!(symplectic_ft(&symplectic_ft(&f)).max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn sft_preserves_l2(seed in any::<u64>()) {
        let f = random_test_function(grid64(), &mut sample_rng(seed));
        let (a, b) = (f.lp_norm(2.0).unwrap(), symplectic_ft(&f).lp_norm(2.0).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }

    #[test]
    fn fourier_wigner_inverts_weyl(seed in any::<u64>()) {
        let f = random_test_function(grid64(), &mut sample_rng(seed));
        let back = fourier_wigner(&weyl_samples(&f));
        prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-10 * f.max_abs().max(1.0));
    }

    #[test]
    fn plancherel(seed in any::<u64>()) {
        let x = random_trace_class(grid128(), &mut sample_rng(seed), 8);
        let (a, s) = (fourier_wigner(&x).lp_norm(2.0).unwrap(), schatten_norm(&x, 2.0).unwrap());
        prop_assert!((a - s).abs() <= 1e-8 * s);
    }

    #[test]
    fn gamma_is_adjoint_to_beta_check(seed in any::<u64>()) {
        let mut rng = sample_rng(seed);
        let f = random_test_function(grid128(), &mut rng);
        let x = random_trace_class(grid128(), &mut rng, 3);
        let lhs = gamma(&f).trace_product(&x).unwrap();
        let rhs = weylgrid::pair_bilinear(&f, &beta_check(&x)).unwrap();
        // Both sides are bounded by ‖f‖₁‖x‖_{S¹}, which sets the rounding floor.
        let floor = 1e-12 * f.lp_norm(1.0).unwrap() * schatten_norm(&x, 1.0).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm().max(rhs.norm()) + floor, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn beta_check_contracts(seed in any::<u64>(), p in exponent()) {
        let x = random_trace_class(grid128(), &mut sample_rng(seed), 8);
        prop_assert!(beta_check(&x).lp_norm(p).unwrap() <= 1.05 * schatten_norm(&x, p).unwrap());
    }

    #[test]
    fn gamma_contracts(seed in any::<u64>(), p in exponent()) {
        let f = random_test_function(grid128(), &mut sample_rng(seed));
        prop_assert!(schatten_norm(&gamma(&f), p).unwrap() <= 1.05 * f.lp_norm(p).unwrap());
    }

    #[test]
    fn schatten_norms_decrease_in_p(seed in any::<u64>(), p in 1.0f64..6.0, dp in 0.0f64..6.0) {
        let x = random_trace_class(grid64(), &mut sample_rng(seed), 8);
        let (a, b) = (schatten_norm(&x, p).unwrap(), schatten_norm(&x, p + dp).unwrap());
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(schatten_norm(&x, f64::INFINITY).unwrap() <= b * (1.0 + 1e-12));
    }

    #[test]
    fn rho_on_grid_multiples_is_a_permutation_times_phases(s in -20i32..20, t in -20i32..20) {
        let g = grid64();
        let h = g.spacing();
        let r = rho_matrix(s as f64 * h, t as f64 * h, g, DerivativeOrder::ZERO).unwrap();
        prop_assert!(singular_values(&r).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-10));
        let e = r.entries();
        for i in 0..g.n() {
            let nonzero = (0..g.n()).filter(|&j| e[(i, j)].norm() > 1e-9).count();
            prop_assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn weyl_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, cx in -0.8f64..0.8, cy in -0.8f64..0.8) {
        let g = grid64();
        let t1 = CompactDistribution::bump(g, &Bump::centered(1.0)).unwrap();
        let t2 = CompactDistribution::bump(g, &Bump { center: (cx, cy), radius: 0.7, modulation: (0.5, -0.5), amplitude: 1.0 }).unwrap();
        let (a, b) = (Complex64::new(a, 0.3), Complex64::new(b, -0.1));
        let lhs = weyl(&t1.combine_densities(a, &t2, b).unwrap(), g).unwrap();
        let rhs = weyl(&t1, g).unwrap().scaled(a).add(&weyl(&t2, g).unwrap().scaled(b)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn kernel_route_matches_definition_for_atoms(seed in any::<u64>(), x in -1.5f64..1.5, y in -1.5f64..1.5, dx in 0u32..3, dy in 0u32..2) {
        let g = PhaseGrid::new(256).unwrap();
        let mut rng = sample_rng(seed);
        let t = CompactDistribution::atoms(g, vec![weylgrid::Atom::derivative(x, y, DerivativeOrder::new(dx, dy), Complex64::new(1.0, 0.5))]).unwrap();
        let (phi, psi) = (random_smooth_vector(g, &mut rng), random_smooth_vector(g, &mut rng));
        let kernel = weylgrid::pair_bilinear(&weyl(&t, g).unwrap().apply(&phi).unwrap(), &psi).unwrap();
        let definition = weyl_definitional_pairing(&t, &phi, &psi).unwrap();
        // Pairings that cancel to rounding level are compared against ‖φ‖‖ψ‖,
        // with each derivative costing at most the band limit π/h.
        let floor = 1e-12 * phi.norm() * psi.norm() * (std::f64::consts::PI / g.spacing()).powi((dx + dy) as i32);
        prop_assert!((kernel - definition).norm() <= 1e-4 * kernel.norm().max(definition.norm()) + floor, "{} vs {}", kernel, definition);
    }

    #[test]
    fn single_atom_transform_is_unimodular(x in -1.9f64..1.9, y in -1.9f64..1.9) {
        let g = grid64();
        let t = sft_of_distribution(&CompactDistribution::dirac(g, x, y).unwrap(), g).unwrap();
        prop_assert!(t.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-13));
    }

    #[test]
    fn exponents_round_trip(p in exponent()) {
        prop_assert_eq!(parse_exponent(&format_exponent(p)).unwrap(), p);
    }

    #[test]
    fn atom_documents_round_trip(x in -1.5f64..1.5, y in -1.5f64..1.5, dy in 0u32..3, re in -2.0f64..2.0) {
        let g = grid64();
        let text = format!(r#"{{"kind": "atoms", "atoms": [{{"x": {x}, "y": {y}, "dy": {dy}, "re": {re}}}]}}"#);
        let doc = DistributionDoc::from_json(&text).unwrap();
        let again = DistributionDoc::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&doc, &again);
        let (a, b) = (parse_distribution(&text, g).unwrap(), again.build(g).unwrap());
        prop_assert_eq!(sft_of_distribution(&a, g).unwrap().max_abs_diff(&sft_of_distribution(&b, g).unwrap()).unwrap(), 0.0);
    }
}

#[test]
fn rank_one_weyl_pairs_like_the_definition() {
    let g = grid128();
    let mut rng = sample_rng(5);
    let f = random_test_function(g, &mut rng);
    let w = weyl_samples(&f);
    let (phi, psi) = (random_smooth_vector(g, &mut rng), random_smooth_vector(g, &mut rng));
    // W(T) paired with φ ⊗ ψ equals T paired with α(φ ⊗ ψ)∼.
    let lhs = w.trace_product(&OperatorMatrix::rank_one(&phi, &psi).unwrap()).unwrap();
    let rhs = weylgrid::pair_bilinear(&f, &fourier_wigner(&OperatorMatrix::rank_one(&phi, &psi).unwrap()).reflect()).unwrap();
    assert!(rel(lhs, rhs) < 1e-10, "{lhs} vs {rhs}");
}
