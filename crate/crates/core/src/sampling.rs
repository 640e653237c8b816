//! Random generators for property checks and sweeps.

use num_complex::Complex64;
use rand::Rng;

use crate::onephoton::{make_pure_state, DensityOperator2, OnePhotonState};

/// Smallest source population [`random_density`] will return.
pub const MIN_POPULATION: f64 = 1e-6;

/// A normalized pure state with independent uniform real and imaginary parts.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> OnePhotonState {
    loop {
        let alpha = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let beta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm > 1e-3 {
            return OnePhotonState::new(alpha / norm, beta / norm);
        }
    }
}

/// A valid, non-degenerate density operator: a random pure state mixed with a
/// random diagonal operator at a random weight, renormalized to unit trace.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R) -> DensityOperator2 {
    loop {
        let pure = make_pure_state(&random_pure_state(rng)).expect("normalized by construction");
        let q: f64 = rng.gen_range(0.0..=1.0);
        let mixed = DensityOperator2::diagonal(q, 1.0 - q);
        let w: f64 = rng.gen_range(0.0..=1.0);
        let rho = pure.weighted_sum(w, &mixed, 1.0 - w);
        let trace = rho.trace();
        let rho = DensityOperator2::new(rho.rho11 / trace, rho.rho22 / trace, rho.rho12 / trace);
        if rho.rho11.min(rho.rho22) >= MIN_POPULATION {
            return rho;
        }
    }
}
