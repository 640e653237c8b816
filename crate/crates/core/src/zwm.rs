//! Parametric model of the two-crystal induced-coherence experiment.
//!
//! A pump photon is split toward crystal 1 (amplitude `α`) or crystal 2
//! (amplitude `β`). The idler from crystal 1 is sent through crystal 2 with
//! amplitude transmission `τ`; `|τ| = 1` aligns the two idler modes perfectly,
//! `|τ| = 0` is an opaque obstacle. The reduced signal state has coherence
//! `ρ₁₂ = α β̄ τ̄`, so the degree of indistinguishability of the two signal
//! sources is exactly `|τ|` whatever the pump split.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::onephoton::{
    degree_of_indistinguishability, visibility_vs_pid, ComplexAmplitude, DensityOperator2,
    OnePhotonError,
};
use crate::ANALYTIC_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZwmError {
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("sweep needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error(transparent)]
    OnePhoton(#[from] OnePhotonError),
}

pub type Result<T> = std::result::Result<T, ZwmError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZwmSetup {
    pub pump_alpha: ComplexAmplitude,
    pub pump_beta: ComplexAmplitude,
    pub idler_transmission: ComplexAmplitude,
}

impl ZwmSetup {
    pub fn new(
        pump_alpha: ComplexAmplitude,
        pump_beta: ComplexAmplitude,
        tau: ComplexAmplitude,
    ) -> Self {
        ZwmSetup {
            pump_alpha,
            pump_beta,
            idler_transmission: tau,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.pump_alpha.is_finite()
            && self.pump_beta.is_finite()
            && self.idler_transmission.is_finite();
        if !finite {
            return Err(ZwmError::InvalidSetup("non-finite amplitude".into()));
        }
        let norm_sq = self.pump_alpha.norm_sqr() + self.pump_beta.norm_sqr();
        if (norm_sq - 1.0).abs() > ANALYTIC_TOL {
            return Err(ZwmError::InvalidSetup(format!(
                "pump split not normalized: |alpha|^2 + |beta|^2 = {norm_sq}"
            )));
        }
        let t = self.idler_transmission.norm();
        if t > 1.0 + ANALYTIC_TOL {
            return Err(ZwmError::InvalidSetup(format!("|tau| = {t} exceeds 1")));
        }
        Ok(())
    }

    pub fn with_transmission_magnitude(&self, t_mag: f64) -> ZwmSetup {
        let phase = if self.idler_transmission == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            self.idler_transmission.arg()
        };
        ZwmSetup {
            idler_transmission: Complex64::from_polar(t_mag, phase),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t_mag: f64,
    pub p_id: f64,
    pub visibility: f64,
    pub coincidence_id_prob: f64,
}

/// Reduced density operator of the signal photon.
pub fn zwm_signal_state(setup: &ZwmSetup) -> Result<DensityOperator2> {
    setup.validate()?;
    let (a, b, t) = (setup.pump_alpha, setup.pump_beta, setup.idler_transmission);
    Ok(DensityOperator2::new(
        a.norm_sqr(),
        b.norm_sqr(),
        a * b.conj() * t.conj(),
    ))
}

/// Probability `1 - |τ|²` that the idler survives to identify the source in
/// a signal–idler coincidence measurement.
pub fn whichway_coincidence_prob(setup: &ZwmSetup) -> Result<f64> {
    setup.validate()?;
    Ok(1.0 - setup.idler_transmission.norm_sqr())
}

/// Tabulate `|τ|` on a uniform grid over `[0, 1]`, keeping `arg τ` and the
/// pump split fixed. Rows come back in grid order.
pub fn sweep_transmission(setup: &ZwmSetup, steps: usize) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(ZwmError::TooFewSteps(steps));
    }
    setup.validate()?;
    (0..steps)
        .map(|k| {
            let t_mag = k as f64 / (steps - 1) as f64;
            let point = setup.with_transmission_magnitude(t_mag);
            let rho = zwm_signal_state(&point)?;
            let p_id = degree_of_indistinguishability(&rho)?;
            let audit = visibility_vs_pid(&rho)?;
            Ok(SweepRow {
                t_mag,
                p_id,
                visibility: audit.visibility,
                coincidence_id_prob: whichway_coincidence_prob(&point)?,
            })
        })
        .collect()
}
