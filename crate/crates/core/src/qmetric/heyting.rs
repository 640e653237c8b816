use serde::{Deserialize, Serialize};

use super::{degree, DifferentiationSpace, QmetricError, Result};
use crate::quasiset::Term;

/// A semantic value in the linearly ordered Heyting algebra `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct HeytingValue(f64);

impl HeytingValue {
    pub const TOP: HeytingValue = HeytingValue(1.0);
    pub const BOTTOM: HeytingValue = HeytingValue(0.0);

    pub fn new(v: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&v) {
            Ok(HeytingValue(v))
        } else {
            Err(QmetricError::ValueOutOfRange(v))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn meet(self, other: Self) -> Self {
        HeytingValue(self.0.min(other.0))
    }

    pub fn join(self, other: Self) -> Self {
        HeytingValue(self.0.max(other.0))
    }

    /// Relative pseudo-complement: the largest `c` with `c ∧ self ≤ other`.
    pub fn implies(self, other: Self) -> Self {
        if self.0 <= other.0 {
            Self::TOP
        } else {
            other
        }
    }
}

impl std::ops::Not for HeytingValue {
    type Output = HeytingValue;

    fn not(self) -> HeytingValue {
        self.implies(HeytingValue::BOTTOM)
    }
}

/// Quantifier-free formulas over identities between carrier elements.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Identity(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn evaluate(&self, space: &DifferentiationSpace) -> Result<HeytingValue> {
        Ok(match self {
            Formula::Identity(a, b) => identity_semantic_value(space, *a, *b)?,
            Formula::And(p, q) => p.evaluate(space)?.meet(q.evaluate(space)?),
            Formula::Or(p, q) => p.evaluate(space)?.join(q.evaluate(space)?),
            Formula::Implies(p, q) => p.evaluate(space)?.implies(q.evaluate(space)?),
            Formula::Not(p) => !p.evaluate(space)?,
        })
    }
}

/// The semantic value of `a = b`, namely the degree `1 - d(a, b)`.
pub fn identity_semantic_value(
    space: &DifferentiationSpace,
    a: Term,
    b: Term,
) -> Result<HeytingValue> {
    let r = degree(space, a, b)?;
    HeytingValue::new(r.clamp(0.0, 1.0))
}
