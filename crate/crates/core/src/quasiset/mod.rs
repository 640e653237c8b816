//! Finite models of a quasi-set theory fragment.
//!
//! A [`Universe`] holds micro-atoms (tagged with a species), macro-atoms and
//! quasi-sets (qsets) built from them. Every atom carries a [`Uid`] so the
//! data structure can refer to it, but no observational operation on
//! micro-atoms looks at that uid: two micro-atoms of the same species are
//! indistinguishable and nothing in [`ops`] can tell them apart. Relabeling
//! uids with [`Universe::relabeled`] must leave every observation unchanged.
//!
//! Indistinguishability between qsets is weak extensionality: two qsets are
//! indistinguishable when they hold the same number of elements of each
//! indistinguishability class, compared hereditarily.

mod checks;
pub mod enumerate;
mod ops;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checks::{
    admissible_theorem_instances, check_equivalence_axioms, check_equivalence_with,
    check_substitutivity_surrogate, permutation_theorem_check, quasi_function_check,
    RemovalReading, TheoremInstance,
};
pub use ops::{
    class_key, ext_identity, indist, indist_class, indist_qsets, is_classical, qset_difference,
    qset_union, quasi_cardinality, singleton_sub, singleton_subs, ClassKey,
};

/// Opaque bookkeeping identifier of an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Uid(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpeciesId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QsetId(pub usize);

/// Anything that can be a member of a qset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(Uid),
    Qset(QsetId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Micro(SpeciesId),
    Macro,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub uid: Uid,
    pub name: String,
    pub kind: AtomKind,
}

impl Atom {
    pub fn is_micro(&self) -> bool {
        matches!(self.kind, AtomKind::Micro(_))
    }
}

/// A finite collection of terms, held at uid level.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qset {
    elements: BTreeSet<Term>,
}

impl Qset {
    pub fn empty() -> Self {
        Qset::default()
    }

    pub fn singleton(t: Term) -> Self {
        Qset {
            elements: BTreeSet::from([t]),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Term> + '_ {
        self.elements.iter().copied()
    }

    pub fn contains(&self, t: Term) -> bool {
        self.elements.contains(&t)
    }

    /// Quasi-cardinality: the number of top-level elements.
    pub fn qc(&self) -> usize {
        self.elements.len()
    }

    pub(crate) fn with(&self, t: Term) -> Qset {
        let mut elements = self.elements.clone();
        elements.insert(t);
        Qset { elements }
    }

    pub(crate) fn without(&self, t: Term) -> Qset {
        let mut elements = self.elements.clone();
        elements.remove(&t);
        Qset { elements }
    }
}

impl FromIterator<Term> for Qset {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        Qset {
            elements: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct NamedQset {
    name: String,
    set: Qset,
}

/// Which theorem hypothesis a call failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precondition {
    ZNotMicro,
    ZNotInX,
    XIsClassOfZ,
    WNotIndistinguishable,
    WInX,
    NotExtensionallyIdentical,
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precondition::ZNotMicro => "z is not a micro-atom",
            Precondition::ZNotInX => "z is not a member of x",
            Precondition::XIsClassOfZ => "x =_E [z]",
            Precondition::WNotIndistinguishable => "w is not indistinguishable from z",
            Precondition::WInX => "w is a member of x",
            Precondition::NotExtensionallyIdentical => "terms are not extensionally identical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasisetError {
    #[error("duplicate species label `{0}`")]
    DuplicateSpecies(String),
    #[error("duplicate term name `{0}`")]
    DuplicateName(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("unknown term `{0}`")]
    UnknownTerm(String),
    #[error("qset `{qset}` lists `{member}` more than once")]
    DuplicateMember { qset: String, member: String },
    #[error("qset `{0}` contains itself (directly or transitively)")]
    Cycle(String),
    #[error("term `{0}` is not a qset")]
    NotAQset(String),
    #[error("expected a one-element qset, got quasi-cardinality {0}")]
    NotSingleton(usize),
    #[error("`{0}` is not a member of the qset")]
    NotAMember(String),
    #[error("no indistinguishable term available")]
    EmptyClass,
    #[error("precondition violated: {0}")]
    PreconditionViolated(Precondition),
    #[error("uid relabeling is not a permutation of the atoms")]
    BadPermutation,
}

pub type Result<T> = std::result::Result<T, QuasisetError>;

/// A finite model: species labels, atoms and named qsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    species: Vec<String>,
    atoms: BTreeMap<Uid, Atom>,
    qsets: Vec<NamedQset>,
}

impl Universe {
    pub fn builder() -> UniverseBuilder {
        UniverseBuilder::default()
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn species_label(&self, s: SpeciesId) -> &str {
        &self.species[s.0]
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    pub fn atom(&self, uid: Uid) -> Option<&Atom> {
        self.atoms.get(&uid)
    }

    pub fn qset_ids(&self) -> impl Iterator<Item = QsetId> {
        (0..self.qsets.len()).map(QsetId)
    }

    pub fn qset(&self, id: QsetId) -> Option<&Qset> {
        self.qsets.get(id.0).map(|q| &q.set)
    }

    /// Every atom (uid order) followed by every qset (declaration order).
    pub fn terms(&self) -> Vec<Term> {
        self.atoms
            .keys()
            .map(|&u| Term::Atom(u))
            .chain(self.qset_ids().map(Term::Qset))
            .collect()
    }

    pub fn contains(&self, t: Term) -> bool {
        match t {
            Term::Atom(u) => self.atoms.contains_key(&u),
            Term::Qset(q) => q.0 < self.qsets.len(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Term> {
        self.atoms
            .values()
            .find(|a| a.name == name)
            .map(|a| Term::Atom(a.uid))
            .or_else(|| {
                self.qsets
                    .iter()
                    .position(|q| q.name == name)
                    .map(|i| Term::Qset(QsetId(i)))
            })
    }

    pub fn name_of(&self, t: Term) -> String {
        match t {
            Term::Atom(u) => self
                .atoms
                .get(&u)
                .map_or_else(|| format!("#{}", u.0), |a| a.name.clone()),
            Term::Qset(q) => self
                .qsets
                .get(q.0)
                .map_or_else(|| format!("qset#{}", q.0), |n| n.name.clone()),
        }
    }

    /// Render a qset value by member names, e.g. `{a, b}`.
    pub fn describe(&self, q: &Qset) -> String {
        let names: Vec<String> = q.elements().map(|t| self.name_of(t)).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub(crate) fn require(&self, t: Term) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(QuasisetError::UnknownTerm(self.name_of(t)))
        }
    }

    pub(crate) fn require_all(&self, q: &Qset) -> Result<()> {
        q.elements().try_for_each(|t| self.require(t))
    }

    /// Registered qsets that have `t` as a member.
    pub fn memberships(&self, t: Term) -> BTreeSet<QsetId> {
        self.qset_ids()
            .filter(|&id| self.qsets[id.0].set.contains(t))
            .collect()
    }

    /// A copy in which atom uid `u` becomes `mapping[&u]`. The mapping must be
    /// a bijection onto a set of fresh uids (any permutation of the current
    /// ones qualifies).
    pub fn relabeled(&self, mapping: &HashMap<Uid, Uid>) -> Result<Universe> {
        let targets: HashSet<Uid> = mapping.values().copied().collect();
        if mapping.len() != self.atoms.len()
            || targets.len() != mapping.len()
            || !self.atoms.keys().all(|u| mapping.contains_key(u))
        {
            return Err(QuasisetError::BadPermutation);
        }
        let remap = |t: Term| match t {
            Term::Atom(u) => Term::Atom(mapping[&u]),
            q => q,
        };
        let atoms = self
            .atoms
            .values()
            .map(|a| {
                let uid = mapping[&a.uid];
                (
                    uid,
                    Atom {
                        uid,
                        name: a.name.clone(),
                        kind: a.kind,
                    },
                )
            })
            .collect();
        let qsets = self
            .qsets
            .iter()
            .map(|q| NamedQset {
                name: q.name.clone(),
                set: q.set.elements().map(remap).collect(),
            })
            .collect();
        Ok(Universe {
            species: self.species.clone(),
            atoms,
            qsets,
        })
    }
}

#[derive(Debug, Clone)]
enum AtomSpec {
    Micro(String),
    Macro,
}

/// Collects declarations by name and resolves them in [`UniverseBuilder::build`].
///
/// Qsets may reference atoms or other qsets declared in any order.
#[derive(Debug, Clone, Default)]
pub struct UniverseBuilder {
    species: Vec<String>,
    atoms: Vec<(String, AtomSpec)>,
    qsets: Vec<(String, Vec<String>)>,
    uids: Option<Vec<u32>>,
}

impl UniverseBuilder {
    pub fn species(mut self, label: impl Into<String>) -> Self {
        self.species.push(label.into());
        self
    }

    pub fn micro(mut self, name: impl Into<String>, species: impl Into<String>) -> Self {
        self.atoms
            .push((name.into(), AtomSpec::Micro(species.into())));
        self
    }

    pub fn macro_atom(mut self, name: impl Into<String>) -> Self {
        self.atoms.push((name.into(), AtomSpec::Macro));
        self
    }

    pub fn qset<S: Into<String>>(
        mut self,
        name: impl Into<String>,
        members: impl IntoIterator<Item = S>,
    ) -> Self {
        self.qsets
            .push((name.into(), members.into_iter().map(Into::into).collect()));
        self
    }

    /// Explicit uids for the atoms, in declaration order. Defaults to `0..n`.
    pub fn uids(mut self, uids: Vec<u32>) -> Self {
        self.uids = Some(uids);
        self
    }

    pub fn build(self) -> Result<Universe> {
        let mut species_index = HashMap::new();
        for (i, s) in self.species.iter().enumerate() {
            if species_index.insert(s.clone(), SpeciesId(i)).is_some() {
                return Err(QuasisetError::DuplicateSpecies(s.clone()));
            }
        }

        let uids: Vec<Uid> = match self.uids {
            Some(u) => {
                let distinct: HashSet<_> = u.iter().collect();
                if u.len() != self.atoms.len() || distinct.len() != u.len() {
                    return Err(QuasisetError::BadPermutation);
                }
                u.into_iter().map(Uid).collect()
            }
            None => (0..self.atoms.len() as u32).map(Uid).collect(),
        };

        let mut names: HashMap<String, Term> = HashMap::new();
        let mut atoms = BTreeMap::new();
        for ((name, spec), uid) in self.atoms.into_iter().zip(uids) {
            let kind = match spec {
                AtomSpec::Macro => AtomKind::Macro,
                AtomSpec::Micro(s) => AtomKind::Micro(
                    *species_index
                        .get(&s)
                        .ok_or_else(|| QuasisetError::UnknownSpecies(s.clone()))?,
                ),
            };
            if names.insert(name.clone(), Term::Atom(uid)).is_some() {
                return Err(QuasisetError::DuplicateName(name));
            }
            atoms.insert(uid, Atom { uid, name, kind });
        }
        for (i, (name, _)) in self.qsets.iter().enumerate() {
            if names.insert(name.clone(), Term::Qset(QsetId(i))).is_some() {
                return Err(QuasisetError::DuplicateName(name.clone()));
            }
        }

        let mut qsets = Vec::with_capacity(self.qsets.len());
        for (name, members) in &self.qsets {
            let mut set = BTreeSet::new();
            for m in members {
                let t = *names
                    .get(m)
                    .ok_or_else(|| QuasisetError::UnknownTerm(m.clone()))?;
                if !set.insert(t) {
                    return Err(QuasisetError::DuplicateMember {
                        qset: name.clone(),
                        member: m.clone(),
                    });
                }
            }
            qsets.push(NamedQset {
                name: name.clone(),
                set: Qset { elements: set },
            });
        }

        let universe = Universe {
            species: self.species,
            atoms,
            qsets,
        };
        check_acyclic(&universe)?;
        Ok(universe)
    }
}

fn check_acyclic(u: &Universe) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit(u: &Universe, id: usize, marks: &mut [Mark]) -> Result<()> {
        match marks[id] {
            Mark::Done => return Ok(()),
            Mark::Active => return Err(QuasisetError::Cycle(u.qsets[id].name.clone())),
            Mark::Fresh => {}
        }
        marks[id] = Mark::Active;
        for t in u.qsets[id].set.elements() {
            if let Term::Qset(q) = t {
                visit(u, q.0, marks)?;
            }
        }
        marks[id] = Mark::Done;
        Ok(())
    }
    let mut marks = vec![Mark::Fresh; u.qsets.len()];
    (0..u.qsets.len()).try_for_each(|i| visit(u, i, &mut marks))
}
