use std::f64::consts::{PI, TAU};

use indist_core::onephoton::{
    coherence_functions, degree_of_indistinguishability, fringe_scan, make_pure_state,
    mandel_decompose, validate_density, visibility_vs_pid, DensityOperator2, OnePhotonState,
};
use indist_core::sampling::{random_density, random_pure_state};
use indist_core::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn density(seed: u64) -> DensityOperator2 {
    random_density(&mut ChaCha8Rng::seed_from_u64(seed))
}

// smallest eigenvalue of the Hermitian 2×2 matrix, by the closed form
fn min_eigenvalue(rho: &DensityOperator2) -> f64 {
    let mean = 0.5 * (rho.rho11 + rho.rho22);
    let half_gap = 0.5 * (rho.rho11 - rho.rho22);
    mean - (half_gap * half_gap + rho.rho12.norm_sqr()).sqrt()
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn generated_operators_are_positive(seed in any::<u64>()) {
        let rho = density(seed);
        prop_assert!(validate_density(&rho).is_valid());
        prop_assert!(min_eigenvalue(&rho) >= -1e-15);
    }

    #[test]
    fn mandel_identity(seed in any::<u64>(), k_re in -5.0..5.0f64, k_im in -5.0..5.0f64) {
        prop_assume!(k_re.abs() + k_im.abs() > 1e-3);
        let rho = density(seed);
        let c = coherence_functions(&rho, Complex64::new(k_re, k_im)).unwrap();
        let p = degree_of_indistinguishability(&rho).unwrap();
        prop_assert!((c.gamma12_normalized.norm() - p).abs() <= 1e-12);
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>()) {
        let rho = density(seed);
        let m = mandel_decompose(&rho).unwrap();
        prop_assert!(m.reconstruct().max_abs_diff(&rho) <= 1e-12);
        prop_assert!((m.p_id + m.p_d - 1.0).abs() <= 1e-15);
        prop_assert!((0.0..=1.0).contains(&m.p_id) && (0.0..=1.0).contains(&m.p_d));
        // ρ_ID is a pure state, ρ_D is diagonal
        prop_assert!(min_eigenvalue(&m.rho_id).abs() <= 1e-12);
        prop_assert_eq!(m.rho_d.rho12, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pure_states_saturate(seed in any::<u64>()) {
        let psi = random_pure_state(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(psi.alpha.norm() > 1e-6 && psi.beta.norm() > 1e-6);
        let rho = make_pure_state(&psi).unwrap();
        prop_assert!((degree_of_indistinguishability(&rho).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sampled_visibility_converges(seed in any::<u64>(), n in 64usize..2048) {
        let rho = density(seed);
        let scan = fringe_scan(&rho, Complex64::new(1.0, 0.0), n).unwrap();
        let analytic = visibility_vs_pid(&rho).unwrap().visibility;
        let bound = 10.0 / (n * n) as f64;
        prop_assert!((scan.visibility - analytic).abs() <= bound,
            "n = {}, sampled {}, analytic {}", n, scan.visibility, analytic);
    }

    #[test]
    fn field_scale_invariance(seed in any::<u64>(), mag in 0.01..10.0f64, arg in -PI..PI) {
        let rho = density(seed);
        let k = Complex64::new(0.7, -0.2);
        let c = Complex64::from_polar(mag, arg);
        let base = coherence_functions(&rho, k).unwrap();
        let scaled = coherence_functions(&rho, k * c).unwrap();
        prop_assert!((base.gamma12_normalized - scaled.gamma12_normalized).norm() <= 1e-12);
        let s0 = fringe_scan(&rho, k, 128).unwrap();
        let s1 = fringe_scan(&rho, k * c, 128).unwrap();
        prop_assert!((s0.visibility - s1.visibility).abs() <= 1e-12);
        for (a, b) in s0.samples.iter().zip(&s1.samples) {
            prop_assert!((b.rate - a.rate * mag * mag).abs() <= 1e-12 * (1.0 + b.rate));
        }
    }

    #[test]
    fn phase_covariance(seed in any::<u64>(), theta in -PI..PI) {
        let rho = density(seed);
        let turned = rho.rotate_phase(theta);
        let m0 = mandel_decompose(&rho).unwrap();
        let m1 = mandel_decompose(&turned).unwrap();
        prop_assert!((m0.p_id - m1.p_id).abs() <= 1e-12);
        prop_assert!((m0.p_d - m1.p_d).abs() <= 1e-12);
        let n = 4096;
        let k = Complex64::new(1.0, 0.0);
        let s0 = fringe_scan(&rho, k, n).unwrap();
        let s1 = fringe_scan(&turned, k, n).unwrap();
        prop_assert!((s0.visibility - s1.visibility).abs() <= 10.0 / (n * n) as f64);
        prop_assume!(s0.visibility > 0.05);
        // R(φ) peaks at φ = arg ρ₁₂, so the peak follows the coherence phase
        let step = TAU / n as f64;
        prop_assert!(circular_distance(s0.argmax_phase(), rho.rho12.arg()) <= step);
        prop_assert!(circular_distance(s1.argmax_phase(), s0.argmax_phase() + theta) <= 2.0 * step);
    }
}

#[test]
fn visibility_identity_at_balance() {
    for p in [0.0, 0.1, 0.35, 0.5, 0.9, 1.0] {
        let rho = DensityOperator2::new(0.5, 0.5, Complex64::from_polar(0.5 * p, 1.1));
        let a = visibility_vs_pid(&rho).unwrap();
        assert!((a.visibility - a.p_id).abs() <= 1e-12);
    }
}

#[test]
fn fully_coherent_pure_state_fringes() {
    let s = 0.5f64.sqrt();
    let rho = make_pure_state(&OnePhotonState::new(
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
    ))
    .unwrap();
    let scan = fringe_scan(&rho, Complex64::new(1.0, 0.0), 360).unwrap();
    assert!((scan.max_rate() - 2.0).abs() < 1e-12);
    assert!(scan.min_rate().abs() < 1e-12);
    assert!((scan.visibility - 1.0).abs() < 1e-12);
}
