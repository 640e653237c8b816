//! One-photon, two-source density operators.
//!
//! A single photon that may come from secondary source 1 or 2 lives in the
//! span of `|1⟩₁|0⟩₂` and `|0⟩₁|1⟩₂`, so its state is a 2×2 Hermitian,
//! trace-one, positive operator. Mandel's decomposition splits any such
//! operator uniquely into a maximally coherent part (weight `P_ID`, the
//! degree of intrinsic indistinguishability of the sources) and a diagonal,
//! incoherent part (weight `P_D = 1 - P_ID`).

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ANALYTIC_TOL;

/// Complex scalar used for amplitudes, matrix elements and field constants.
pub type ComplexAmplitude = Complex64;

/// Normalization slack accepted by [`make_pure_state`].
pub const PURE_STATE_TOL: f64 = 1e-9;

/// Below this population a source is considered absent.
pub const DEGENERATE_THRESHOLD: f64 = 1e-12;

/// Fewest phase samples a fringe scan accepts.
pub const MIN_FRINGE_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OnePhotonError {
    #[error("state is not normalized: |alpha|^2 + |beta|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("invalid density operator: {0}")]
    InvalidDensity(ValidationReport),
    #[error("degenerate source: rho11 = {rho11}, rho22 = {rho22} (one source has no support)")]
    DegenerateSource { rho11: f64, rho22: f64 },
    #[error("field constant K is zero")]
    ZeroField,
    #[error("fringe scan needs at least {MIN_FRINGE_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
}

pub type Result<T> = std::result::Result<T, OnePhotonError>;

/// `|ψ⟩ = α|1⟩₁|0⟩₂ + β|0⟩₁|1⟩₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnePhotonState {
    pub alpha: ComplexAmplitude,
    pub beta: ComplexAmplitude,
}

impl OnePhotonState {
    pub fn new(alpha: ComplexAmplitude, beta: ComplexAmplitude) -> Self {
        OnePhotonState { alpha, beta }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

/// Density operator on the one-photon two-source subspace.
///
/// Only `rho12` is stored; `rho21` is its conjugate, so hermiticity holds by
/// construction. Trace and positivity are checked by [`validate_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator2 {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: ComplexAmplitude,
}

impl DensityOperator2 {
    pub fn new(rho11: f64, rho22: f64, rho12: ComplexAmplitude) -> Self {
        DensityOperator2 {
            rho11,
            rho22,
            rho12,
        }
    }

    pub fn diagonal(rho11: f64, rho22: f64) -> Self {
        Self::new(rho11, rho22, Complex64::new(0.0, 0.0))
    }

    pub fn rho21(&self) -> ComplexAmplitude {
        self.rho12.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22
    }

    /// Entrywise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &DensityOperator2) -> f64 {
        (self.rho11 - other.rho11)
            .abs()
            .max((self.rho22 - other.rho22).abs())
            .max((self.rho12 - other.rho12).norm())
    }

    /// Entrywise `a·self + b·other`.
    pub fn weighted_sum(&self, a: f64, other: &DensityOperator2, b: f64) -> DensityOperator2 {
        DensityOperator2 {
            rho11: a * self.rho11 + b * other.rho11,
            rho22: a * self.rho22 + b * other.rho22,
            rho12: self.rho12 * a + other.rho12 * b,
        }
    }

    /// Multiply the coherence by `e^{iθ}`.
    pub fn rotate_phase(&self, theta: f64) -> DensityOperator2 {
        DensityOperator2 {
            rho12: self.rho12 * Complex64::from_polar(1.0, theta),
            ..*self
        }
    }

    fn is_finite(&self) -> bool {
        self.rho11.is_finite() && self.rho22.is_finite() && self.rho12.is_finite()
    }
}

/// One violated well-formedness condition with its residual magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonFinite,
    NegativeDiagonal { entry: u8, value: f64 },
    Trace { residual: f64 },
    Positivity { residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite => write!(f, "non-finite entry"),
            Violation::NegativeDiagonal { entry, value } => {
                write!(f, "rho{entry}{entry} = {value} is negative")
            }
            Violation::Trace { residual } => write!(f, "trace off by {residual}"),
            Violation::Positivity { residual } => {
                write!(f, "|rho12|^2 exceeds rho11*rho22 by {residual}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Mandel's unique split `ρ = P_ID ρ_ID + P_D ρ_D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MandelDecomposition {
    pub p_id: f64,
    pub p_d: f64,
    pub rho_id: DensityOperator2,
    pub rho_d: DensityOperator2,
}

impl MandelDecomposition {
    pub fn reconstruct(&self) -> DensityOperator2 {
        self.rho_id.weighted_sum(self.p_id, &self.rho_d, self.p_d)
    }
}

/// First-order coherence functions of the two secondary sources, with the
/// positive-frequency field at each source written as `K â`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub gamma11: f64,
    pub gamma22: f64,
    pub gamma12: ComplexAmplitude,
    pub gamma12_normalized: ComplexAmplitude,
    pub k_const: ComplexAmplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeSample {
    pub phase: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeScan {
    pub samples: Vec<FringeSample>,
    /// Contrast of the sinusoid fitted to the samples.
    pub visibility: f64,
}

impl FringeScan {
    /// `(max - min) / (max + min)` over the samples; biased low when the
    /// extremes fall between sample phases.
    pub fn extremal_visibility(&self) -> f64 {
        let (hi, lo) = (self.max_rate(), self.min_rate());
        if hi + lo > 0.0 {
            (hi - lo) / (hi + lo)
        } else {
            0.0
        }
    }

    pub fn max_rate(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.rate)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_rate(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.rate)
            .fold(f64::INFINITY, f64::min)
    }

    /// Phase of the first sample attaining the maximum rate.
    pub fn argmax_phase(&self) -> f64 {
        let mut best = &self.samples[0];
        for s in &self.samples[1..] {
            if s.rate > best.rate {
                best = s;
            }
        }
        best.phase
    }
}

/// Analytic visibility next to `P_ID`, for auditing how the two relate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityAudit {
    pub visibility: f64,
    pub p_id: f64,
    /// `visibility / p_id`; `None` when `p_id` is zero.
    pub ratio: Option<f64>,
}

/// `|ψ⟩⟨ψ|`.
pub fn make_pure_state(psi: &OnePhotonState) -> Result<DensityOperator2> {
    let norm_sq = psi.norm_sqr();
    if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > PURE_STATE_TOL {
        return Err(OnePhotonError::NotNormalized { norm_sq });
    }
    Ok(DensityOperator2 {
        rho11: psi.alpha.norm_sqr(),
        rho22: psi.beta.norm_sqr(),
        rho12: psi.alpha * psi.beta.conj(),
    })
}

/// Checks trace and positivity at [`ANALYTIC_TOL`].
pub fn validate_density(rho: &DensityOperator2) -> ValidationReport {
    validate_density_with(rho, ANALYTIC_TOL)
}

pub fn validate_density_with(rho: &DensityOperator2, tol: f64) -> ValidationReport {
    let mut violations = Vec::new();
    if !rho.is_finite() {
        violations.push(Violation::NonFinite);
        return ValidationReport { violations };
    }
    if rho.rho11 < -tol {
        violations.push(Violation::NegativeDiagonal {
            entry: 1,
            value: rho.rho11,
        });
    }
    if rho.rho22 < -tol {
        violations.push(Violation::NegativeDiagonal {
            entry: 2,
            value: rho.rho22,
        });
    }
    let trace_residual = (rho.trace() - 1.0).abs();
    if trace_residual > tol {
        violations.push(Violation::Trace {
            residual: trace_residual,
        });
    }
    let excess = rho.rho12.norm_sqr() - rho.rho11 * rho.rho22;
    if excess > tol {
        violations.push(Violation::Positivity { residual: excess });
    }
    ValidationReport { violations }
}

fn require_valid(rho: &DensityOperator2) -> Result<()> {
    let report = validate_density(rho);
    if report.is_valid() {
        Ok(())
    } else {
        Err(OnePhotonError::InvalidDensity(report))
    }
}

fn require_nondegenerate(rho: &DensityOperator2) -> Result<()> {
    if rho.rho11.min(rho.rho22) < DEGENERATE_THRESHOLD {
        Err(OnePhotonError::DegenerateSource {
            rho11: rho.rho11,
            rho22: rho.rho22,
        })
    } else {
        Ok(())
    }
}

/// `|ρ₁₂| / √(ρ₁₁ρ₂₂)` clamped into `[0, 1]` (positivity is only checked to
/// tolerance).
fn p_id_unchecked(rho: &DensityOperator2) -> f64 {
    (rho.rho12.norm() / (rho.rho11 * rho.rho22).sqrt()).clamp(0.0, 1.0)
}

pub fn mandel_decompose(rho: &DensityOperator2) -> Result<MandelDecomposition> {
    require_valid(rho)?;
    require_nondegenerate(rho)?;
    let p_id = p_id_unchecked(rho);
    // The coherent part keeps the phase of ρ₁₂; with ρ₁₂ = 0 the phase is 0.
    let phase = if rho.rho12 == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        rho.rho12.arg()
    };
    let rho_id = DensityOperator2 {
        rho11: rho.rho11,
        rho22: rho.rho22,
        rho12: Complex64::from_polar((rho.rho11 * rho.rho22).sqrt(), phase),
    };
    Ok(MandelDecomposition {
        p_id,
        p_d: 1.0 - p_id,
        rho_id,
        rho_d: DensityOperator2::diagonal(rho.rho11, rho.rho22),
    })
}

pub fn degree_of_indistinguishability(rho: &DensityOperator2) -> Result<f64> {
    mandel_decompose(rho).map(|d| d.p_id)
}

pub fn coherence_functions(
    rho: &DensityOperator2,
    k_const: ComplexAmplitude,
) -> Result<CoherenceReport> {
    require_valid(rho)?;
    let k2 = k_const.norm_sqr();
    if k2 == 0.0 {
        return Err(OnePhotonError::ZeroField);
    }
    require_nondegenerate(rho)?;
    let rho21 = rho.rho21();
    Ok(CoherenceReport {
        gamma11: k2 * rho.rho11,
        gamma22: k2 * rho.rho22,
        gamma12: rho21 * k2,
        gamma12_normalized: rho21 / (rho.rho11 * rho.rho22).sqrt(),
        k_const,
    })
}

/// Detection rate `R(φ) = Γ₁₁ + Γ₂₂ + 2 Re(Γ₁₂ e^{iφ})` sampled at `n`
/// equally spaced phases `2πk/n`, with equal detector coupling to both sources.
///
/// A single source is allowed here (it simply produces no fringes).
pub fn fringe_scan(
    rho: &DensityOperator2,
    k_const: ComplexAmplitude,
    n_samples: usize,
) -> Result<FringeScan> {
    require_valid(rho)?;
    let k2 = k_const.norm_sqr();
    if k2 == 0.0 {
        return Err(OnePhotonError::ZeroField);
    }
    if n_samples < MIN_FRINGE_SAMPLES {
        return Err(OnePhotonError::TooFewSamples(n_samples));
    }
    let g11 = k2 * rho.rho11;
    let g22 = k2 * rho.rho22;
    let g12 = rho.rho21() * k2;
    let samples: Vec<FringeSample> = (0..n_samples)
        .map(|k| {
            let phase = TAU * k as f64 / n_samples as f64;
            let rate = g11 + g22 + 2.0 * (g12 * Complex64::from_polar(1.0, phase)).re;
            // rounding can push a dark fringe a few ulps below zero
            FringeSample {
                phase,
                rate: rate.max(0.0),
            }
        })
        .collect();
    let visibility = fitted_visibility(&samples);
    Ok(FringeScan {
        samples,
        visibility,
    })
}

/// Contrast `B / A` of the best fit `A + B cos(φ - φ₀)` to the samples, read
/// off the mean and the first Fourier harmonic. Exact for a sinusoid sampled
/// at `n ≥ 3` equally spaced phases wherever its extremes fall.
fn fitted_visibility(samples: &[FringeSample]) -> f64 {
    let n = samples.len() as f64;
    let flat = samples.iter().all(|s| s.rate == samples[0].rate);
    let mean = samples.iter().map(|s| s.rate).sum::<f64>() / n;
    if flat || mean <= 0.0 {
        return 0.0;
    }
    let (c, s) = samples.iter().fold((0.0, 0.0), |(c, s), x| {
        (c + x.rate * x.phase.cos(), s + x.rate * x.phase.sin())
    });
    (2.0 * c.hypot(s) / n / mean).min(1.0)
}

/// `𝒱 = 2√(ρ₁₁ρ₂₂)·P_ID` next to `P_ID` itself.
pub fn visibility_vs_pid(rho: &DensityOperator2) -> Result<VisibilityAudit> {
    let p_id = degree_of_indistinguishability(rho)?;
    let visibility = 2.0 * (rho.rho11 * rho.rho22).sqrt() * p_id;
    let ratio = if p_id > 0.0 {
        Some(visibility / p_id)
    } else {
        None
    };
    Ok(VisibilityAudit {
        visibility,
        p_id,
        ratio,
    })
}
