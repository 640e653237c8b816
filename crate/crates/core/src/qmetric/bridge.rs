use std::collections::BTreeSet;

use super::{DifferentiationSpace, QmetricError, QuasiMetricSpace, Result};
use crate::quasiset::{Qset, QuasisetError, Term, Universe};
use crate::report::AxiomReport;

/// A `P_ID` table turned into a differentiation space over micro-atoms, one
/// per source, with `d = 1 - P_ID`.
#[derive(Debug, Clone, PartialEq)]
pub struct PidBridge {
    universe: Universe,
    carrier: Qset,
    space: DifferentiationSpace,
}

impl PidBridge {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn carrier(&self) -> &Qset {
        &self.carrier
    }

    pub fn space(&self) -> &DifferentiationSpace {
        &self.space
    }

    pub fn reports(&self) -> &[AxiomReport] {
        self.space.report()
    }

    pub fn term(&self, source: &str) -> Option<Term> {
        self.universe.lookup(source)
    }

    /// Species label of `source`, shared by every source it is at distance 0 from.
    pub fn species_of(&self, source: &str) -> Option<&str> {
        let Term::Atom(uid) = self.term(source)? else {
            return None;
        };
        match self.universe.atom(uid)?.kind {
            crate::quasiset::AtomKind::Micro(s) => Some(self.universe.species_label(s)),
            crate::quasiset::AtomKind::Macro => None,
        }
    }
}

/// Builds the space and its axiom report. Malformed tables and zero-distance
/// pairs that cannot form an equivalence are errors; any other axiom failure
/// is carried in [`PidBridge::reports`].
pub fn from_pid_table(sources: &[String], pid: &[Vec<f64>], tol: f64) -> Result<PidBridge> {
    let n = sources.len();
    let malformed = |msg: String| Err(QmetricError::MalformedTable(msg));
    let unique: BTreeSet<&String> = sources.iter().collect();
    if unique.len() != n {
        return malformed("duplicate source label".into());
    }
    if pid.len() != n {
        return malformed(format!("{} rows for {n} sources", pid.len()));
    }
    for (i, row) in pid.iter().enumerate() {
        if row.len() != n {
            return malformed(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            ));
        }
        for (j, &p) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return malformed(format!(
                    "P_ID({}, {}) = {p} is outside [0, 1]",
                    sources[i], sources[j]
                ));
            }
            if (p - pid[j][i]).abs() > tol {
                return malformed(format!(
                    "table is not symmetric at ({}, {}): {p} vs {}",
                    sources[i], sources[j], pid[j][i]
                ));
            }
        }
        if (row[i] - 1.0).abs() > tol {
            return malformed(format!(
                "diagonal entry for {} is {}, expected 1",
                sources[i], row[i]
            ));
        }
    }

    let d: Vec<Vec<f64>> = pid
        .iter()
        .map(|row| row.iter().map(|p| 1.0 - p).collect())
        .collect();
    let zero = |i: usize, j: usize| d[i][j].abs() <= tol;

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if zero(a, b) && zero(b, c) && !zero(a, c) {
                    return Err(QmetricError::NonTransitiveZeroes {
                        a: sources[a].clone(),
                        b: sources[b].clone(),
                        c: sources[c].clone(),
                    });
                }
            }
        }
    }
    // zeroes are now an equivalence; species are its classes
    let root: Vec<usize> = (0..n)
        .map(|i| (0..n).find(|&j| zero(i, j)).unwrap_or(i))
        .collect();

    let mut builder = Universe::builder();
    let label = |i: usize| format!("[{}]", sources[root[i]]);
    for (i, _) in root.iter().enumerate().filter(|&(i, &r)| r == i) {
        builder = builder.species(label(i));
    }
    for (i, s) in sources.iter().enumerate() {
        builder = builder.micro(s.clone(), label(i));
    }
    let universe = builder.build().map_err(|e| match e {
        QuasisetError::DuplicateName(name) => {
            QmetricError::MalformedTable(format!("duplicate name {name}"))
        }
        other => other.into(),
    })?;

    let carrier: Qset = sources
        .iter()
        .map(|s| universe.lookup(s).expect("declared above"))
        .collect();
    let index = |t: Term| {
        sources
            .iter()
            .position(|s| universe.lookup(s) == Some(t))
            .expect("carrier term")
    };
    let base = QuasiMetricSpace::from_fn(&universe, &carrier, |a, b| d[index(a)][index(b)])?;
    let space = DifferentiationSpace::new(base, &universe, tol)?;
    Ok(PidBridge {
        universe,
        carrier,
        space,
    })
}
