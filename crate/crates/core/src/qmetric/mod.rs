//! Quasi-metric spaces over a carrier qset, differentiation spaces with
//! distances in `[0, 1]`, graded indistinguishability `a ≡_r b` with
//! `r = 1 - d(a, b)`, and the bridge from interferometric `P_ID` tables.
//!
//! A quasi-distance must vanish exactly on indistinguishable pairs (QM4), so a
//! degree `r ≠ 1` only ever says "not indistinguishable". The checkers here
//! make that collapse testable on concrete finite spaces.

mod bridge;
pub mod generate;
mod heyting;

use thiserror::Error;

use crate::quasiset::{indist, Qset, QuasisetError, Term, Universe};
use crate::report::{AxiomId, AxiomReport};
use crate::ANALYTIC_TOL;

pub use bridge::{from_pid_table, PidBridge};
pub use heyting::{identity_semantic_value, Formula, HeytingValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmetricError {
    #[error("distance table has no entry for ({0}, {1})")]
    IncompleteTable(String, String),
    #[error("distance table is {rows}×{cols}, carrier has {carrier} elements")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        carrier: usize,
    },
    #[error("`{0}` is not in the carrier")]
    NotInCarrier(String),
    #[error("space violates {0:?}")]
    AxiomsViolated(Vec<AxiomId>),
    #[error("distance d({a}, {b}) = {value} lies outside [0, 1]")]
    OutOfRange { a: String, b: String, value: f64 },
    #[error("semantic value {0} lies outside [0, 1]")]
    ValueOutOfRange(f64),
    #[error("malformed P_ID table: {0}")]
    MalformedTable(String),
    #[error(
        "zero-distance pairs are not transitive: d({a},{b}) = 0, d({b},{c}) = 0, d({a},{c}) > 0"
    )]
    NonTransitiveZeroes { a: String, b: String, c: String },
    #[error(transparent)]
    Quasiset(#[from] QuasisetError),
}

pub type Result<T> = std::result::Result<T, QmetricError>;

/// A carrier qset with a distance table indexed by carrier positions.
///
/// The table may be incomplete, asymmetric or even non-finite; those defects
/// are what [`verify_qm_axioms`] reports on.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiMetricSpace {
    carrier: Vec<Term>,
    names: Vec<String>,
    table: Vec<Vec<Option<f64>>>,
}

impl QuasiMetricSpace {
    /// Full table, rows and columns in carrier order (the qset's internal order).
    pub fn from_matrix(u: &Universe, carrier: &Qset, d: Vec<Vec<f64>>) -> Result<Self> {
        let mut space = Self::empty(u, carrier)?;
        let n = space.carrier.len();
        let cols = d.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n);
        if d.len() != n || cols != n {
            return Err(QmetricError::DimensionMismatch {
                rows: d.len(),
                cols,
                carrier: n,
            });
        }
        space.table = d
            .into_iter()
            .map(|row| row.into_iter().map(Some).collect())
            .collect();
        Ok(space)
    }

    pub fn from_fn(u: &Universe, carrier: &Qset, d: impl Fn(Term, Term) -> f64) -> Result<Self> {
        let terms: Vec<Term> = carrier.elements().collect();
        let m = terms
            .iter()
            .map(|&a| terms.iter().map(|&b| d(a, b)).collect())
            .collect();
        Self::from_matrix(u, carrier, m)
    }

    /// Sparse construction; unset pairs stay missing.
    pub fn from_entries(
        u: &Universe,
        carrier: &Qset,
        entries: impl IntoIterator<Item = (Term, Term, f64)>,
    ) -> Result<Self> {
        let mut space = Self::empty(u, carrier)?;
        for (a, b, d) in entries {
            let i = space.index(a)?;
            let j = space.index(b)?;
            space.table[i][j] = Some(d);
        }
        Ok(space)
    }

    fn empty(u: &Universe, carrier: &Qset) -> Result<Self> {
        u.require_all(carrier)?;
        let carrier: Vec<Term> = carrier.elements().collect();
        let names = carrier.iter().map(|&t| u.name_of(t)).collect();
        let n = carrier.len();
        Ok(QuasiMetricSpace {
            carrier,
            names,
            table: vec![vec![None; n]; n],
        })
    }

    pub fn carrier(&self) -> &[Term] {
        &self.carrier
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    fn index(&self, t: Term) -> Result<usize> {
        self.carrier
            .iter()
            .position(|&c| c == t)
            .ok_or_else(|| QmetricError::NotInCarrier(format!("{t:?}")))
    }

    fn entry(&self, i: usize, j: usize) -> Result<f64> {
        self.table[i][j].ok_or_else(|| {
            QmetricError::IncompleteTable(self.names[i].clone(), self.names[j].clone())
        })
    }

    pub fn distance(&self, a: Term, b: Term) -> Result<f64> {
        self.entry(self.index(a)?, self.index(b)?)
    }

    /// Full table; fails on the first missing entry.
    pub fn matrix(&self) -> Result<Vec<Vec<f64>>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// QM1–QM6 and congruence, with `≡` taken from the universe.
pub fn verify_qm_axioms(
    space: &QuasiMetricSpace,
    u: &Universe,
    tol: f64,
) -> Result<Vec<AxiomReport>> {
    for &t in space.carrier() {
        u.require(t)?;
    }
    verify_qm_axioms_with(space, tol, |a, b| {
        indist(u, a, b).expect("carrier terms are in u")
    })
}

/// QM1–QM6 and congruence against an arbitrary equivalence `equiv`.
///
/// Passing uid equality here turns QM4 into "d = 0 iff same element", i.e.
/// the ordinary metric-space axioms.
pub fn verify_qm_axioms_with(
    space: &QuasiMetricSpace,
    tol: f64,
    equiv: impl Fn(Term, Term) -> bool,
) -> Result<Vec<AxiomReport>> {
    let d = space.matrix()?;
    let n = space.len();
    let name = |i: usize| space.names[i].clone();
    let eq: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| equiv(space.carrier[i], space.carrier[j]))
                .collect()
        })
        .collect();
    let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));

    let qm1 = if n > 0 {
        AxiomReport::pass(AxiomId::QM1)
    } else {
        AxiomReport::fail(AxiomId::QM1, vec![], "carrier is empty")
    };

    let qm2 = pairs()
        .find(|&(i, j)| !d[i][j].is_finite())
        .map(|(i, j)| {
            AxiomReport::fail(
                AxiomId::QM2,
                vec![name(i), name(j)],
                format!("d = {} is not a real number", d[i][j]),
            )
        })
        .unwrap_or_else(|| AxiomReport::pass(AxiomId::QM2));

    let qm3 = pairs()
        .find(|&(i, j)| d[i][j] < -tol)
        .map(|(i, j)| {
            AxiomReport::fail(
                AxiomId::QM3,
                vec![name(i), name(j)],
                format!("d = {} < 0", d[i][j]),
            )
        })
        .unwrap_or_else(|| AxiomReport::pass(AxiomId::QM3));

    let qm4 = pairs()
        .find(|&(i, j)| (d[i][j].abs() <= tol) != eq[i][j])
        .map(|(i, j)| {
            let detail = if eq[i][j] {
                format!("indistinguishable but d = {}", d[i][j])
            } else {
                "d = 0 but not indistinguishable".to_string()
            };
            AxiomReport::fail(AxiomId::QM4, vec![name(i), name(j)], detail)
        })
        .unwrap_or_else(|| AxiomReport::pass(AxiomId::QM4));

    let qm5 = pairs()
        .find(|&(i, j)| (d[i][j] - d[j][i]).abs() > tol)
        .map(|(i, j)| {
            AxiomReport::fail(
                AxiomId::QM5,
                vec![name(i), name(j)],
                format!("d(a,b) = {} but d(b,a) = {}", d[i][j], d[j][i]),
            )
        })
        .unwrap_or_else(|| AxiomReport::pass(AxiomId::QM5));

    let mut qm6 = AxiomReport::pass(AxiomId::QM6);
    'tri: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if d[a][c] > d[a][b] + d[b][c] + tol {
                    qm6 = AxiomReport::fail(
                        AxiomId::QM6,
                        vec![name(a), name(b), name(c)],
                        format!(
                            "d(a,c) = {} > d(a,b) + d(b,c) = {}",
                            d[a][c],
                            d[a][b] + d[b][c]
                        ),
                    );
                    break 'tri;
                }
            }
        }
    }

    let mut congruence = AxiomReport::pass(AxiomId::Congruence);
    'cong: for a in 0..n {
        for a2 in 0..n {
            if !eq[a][a2] {
                continue;
            }
            for (b, col) in d.iter().enumerate() {
                let row_gap = (d[a][b] - d[a2][b]).abs();
                let col_gap = (col[a] - col[a2]).abs();
                if row_gap > tol || col_gap > tol {
                    congruence = AxiomReport::fail(
                        AxiomId::Congruence,
                        vec![name(a), name(a2), name(b)],
                        format!("a ≡ a' but d(a,b) = {}, d(a',b) = {}", d[a][b], d[a2][b]),
                    );
                    break 'cong;
                }
            }
        }
    }

    Ok(vec![qm1, qm2, qm3, qm4, qm5, qm6, congruence])
}

/// A quasi-metric space whose distances lie in `[0, 1]`, together with the
/// outcome of its axiom check.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentiationSpace {
    base: QuasiMetricSpace,
    report: Vec<AxiomReport>,
}

impl DifferentiationSpace {
    pub fn new(base: QuasiMetricSpace, u: &Universe, tol: f64) -> Result<Self> {
        let d = base.matrix()?;
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v.is_finite() && !(-tol..=1.0 + tol).contains(&v) {
                    return Err(QmetricError::OutOfRange {
                        a: base.names[i].clone(),
                        b: base.names[j].clone(),
                        value: v,
                    });
                }
            }
        }
        let report = verify_qm_axioms(&base, u, tol)?;
        Ok(DifferentiationSpace { base, report })
    }

    pub fn base(&self) -> &QuasiMetricSpace {
        &self.base
    }

    pub fn report(&self) -> &[AxiomReport] {
        &self.report
    }

    pub fn is_sound(&self) -> bool {
        self.report.iter().all(|r| r.holds)
    }

    fn failed_axioms(&self) -> Vec<AxiomId> {
        self.report
            .iter()
            .filter(|r| !r.holds)
            .map(|r| r.axiom)
            .collect()
    }
}

/// The `r` with `a ≡_r b`, namely `1 - d(a, b)`.
pub fn degree(space: &DifferentiationSpace, a: Term, b: Term) -> Result<f64> {
    let d = space.base.distance(a, b)?;
    if !space.is_sound() {
        return Err(QmetricError::AxiomsViolated(space.failed_axioms()));
    }
    Ok(1.0 - d)
}

/// Whether `a ≡_r b` holds, comparing reals at [`ANALYTIC_TOL`].
pub fn degree_relation_holds(
    space: &DifferentiationSpace,
    a: Term,
    b: Term,
    r: f64,
) -> Result<bool> {
    Ok((r - degree(space, a, b)?).abs() <= ANALYTIC_TOL)
}

/// `(a, b, r)` for every unordered carrier pair `a` before `b` (including `a = b`).
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeAssignment {
    pub pairs: Vec<(String, String, f64)>,
}

pub fn degree_assignment(space: &DifferentiationSpace) -> Result<DegreeAssignment> {
    let carrier = space.base.carrier();
    let names = space.base.names();
    let mut pairs = Vec::new();
    for i in 0..carrier.len() {
        for j in i..carrier.len() {
            pairs.push((
                names[i].clone(),
                names[j].clone(),
                degree(space, carrier[i], carrier[j])?,
            ));
        }
    }
    Ok(DegreeAssignment { pairs })
}
