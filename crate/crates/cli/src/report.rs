//! The structured document every successful run emits.

use indist_core::onephoton::{DensityOperator2, FringeSample};
use indist_core::quasiset::TheoremInstance;
use indist_core::report::AxiomReport;
use indist_core::zwm::SweepRow;
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "indist";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub inputs: Inputs,
    pub outputs: Outputs,
    pub exit_status: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityInput {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12_re: f64,
    pub rho12_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inputs {
    Density(DensityInput),
    Zwm {
        alpha: [f64; 2],
        beta: [f64; 2],
        tau_phase: f64,
        steps: usize,
    },
    Fringes {
        density: DensityInput,
        samples: usize,
    },
    Universe {
        path: String,
        species: Vec<String>,
        atoms: Vec<String>,
        qsets: Vec<String>,
    },
    PidTable {
        path: String,
        sources: Vec<String>,
        pid: Vec<Vec<f64>>,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub p_id: f64,
    pub p_d: f64,
    pub rho_id: DensityOperator2,
    pub rho_d: DensityOperator2,
    pub gamma12_abs: f64,
    /// `|γ₁₂| - P_ID`.
    pub identity_residual: f64,
    pub reconstruction_residual: f64,
    pub visibility: f64,
    pub visibility_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QsetCheck {
    pub equivalence: Vec<AxiomReport>,
    pub theorem_within_x: Vec<TheoremInstance>,
    pub theorem_whole_class: Vec<TheoremInstance>,
    /// Distinct pairs with `x ≡ y` but not `x =_E y`.
    pub indistinguishable_not_identical: Vec<[String; 2]>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub a: String,
    pub b: String,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub sources: Vec<String>,
    /// Species label per source; empty when zero distances do not form an equivalence.
    pub species: Vec<String>,
    pub distances: Vec<Vec<f64>>,
    pub axioms: Vec<AxiomReport>,
    /// A triple with `d(a,b) = d(b,c) = 0` but `d(a,c) > 0`.
    pub non_transitive_zeroes: Option<[String; 3]>,
    pub degrees: Vec<DegreeRow>,
    pub sound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outputs {
    Decomposition(Decomposition),
    Sweep {
        rows: Vec<SweepRow>,
    },
    Fringes {
        samples: Vec<FringeSample>,
        visibility: f64,
        analytic_visibility: Option<f64>,
    },
    QsetCheck(QsetCheck),
    Bridge(Bridge),
}
