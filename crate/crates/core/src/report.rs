//! Pass/fail records shared by the axiom checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Every axiom, theorem or property the model checkers know how to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomId {
    /// Reflexivity of indistinguishability.
    Q1,
    /// Symmetry of indistinguishability.
    Q2,
    /// Transitivity of indistinguishability.
    Q3,
    /// Finite observation-agreement surrogate for the substitutivity schema.
    Q4Surrogate,
    /// Unobservability of permutations.
    PermutationTheorem,
    /// Totality and congruence of a quasi-function.
    QuasiFunction,
    QM1,
    QM2,
    QM3,
    QM4,
    QM5,
    QM6,
    /// `a ≡ a'` implies `d(a, b) = d(a', b)`.
    Congruence,
}

impl AxiomId {
    pub fn label(self) -> &'static str {
        match self {
            AxiomId::Q1 => "Q1 reflexivity",
            AxiomId::Q2 => "Q2 symmetry",
            AxiomId::Q3 => "Q3 transitivity",
            AxiomId::Q4Surrogate => "Q4 substitutivity (observation surrogate)",
            AxiomId::PermutationTheorem => "permutation theorem",
            AxiomId::QuasiFunction => "quasi-function",
            AxiomId::QM1 => "QM1 non-empty carrier",
            AxiomId::QM2 => "QM2 real-valued distance",
            AxiomId::QM3 => "QM3 non-negativity",
            AxiomId::QM4 => "QM4 zero distance iff indistinguishable",
            AxiomId::QM5 => "QM5 symmetry",
            AxiomId::QM6 => "QM6 triangle inequality",
            AxiomId::Congruence => "congruence of d under indistinguishability",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The violating tuple, named by term labels, plus a short human note.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub terms: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl AxiomReport {
    pub fn pass(axiom: AxiomId) -> Self {
        AxiomReport {
            axiom,
            holds: true,
            counterexample: None,
        }
    }

    pub fn fail(axiom: AxiomId, terms: Vec<String>, detail: impl Into<String>) -> Self {
        AxiomReport {
            axiom,
            holds: false,
            counterexample: Some(Counterexample {
                terms,
                detail: detail.into(),
            }),
        }
    }
}

/// True when every report in the slice holds.
pub fn all_hold(reports: &[AxiomReport]) -> bool {
    reports.iter().all(|r| r.holds)
}
