use std::collections::{BTreeMap, BTreeSet};

use super::{AtomKind, Qset, QsetId, QuasisetError, Result, SpeciesId, Term, Universe};

/// Canonical name of an indistinguishability class. Two terms are
/// indistinguishable exactly when their keys are equal, so the relation is an
/// equivalence by construction.
///
/// Macro-atoms are keyed by the registered qsets they belong to, which makes
/// extensionally identical macro-atoms indistinguishable. Qsets are keyed by
/// the multiset of their members' keys.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    Micro(SpeciesId),
    Macro(BTreeSet<QsetId>),
    Qset(Vec<(ClassKey, usize)>),
}

pub fn class_key(u: &Universe, t: Term) -> Result<ClassKey> {
    match t {
        Term::Atom(uid) => {
            let atom = u
                .atom(uid)
                .ok_or_else(|| QuasisetError::UnknownTerm(u.name_of(t)))?;
            Ok(match atom.kind {
                AtomKind::Micro(s) => ClassKey::Micro(s),
                AtomKind::Macro => ClassKey::Macro(u.memberships(t)),
            })
        }
        Term::Qset(id) => {
            let q = u
                .qset(id)
                .ok_or_else(|| QuasisetError::UnknownTerm(u.name_of(t)))?;
            signature(u, q)
        }
    }
}

fn signature(u: &Universe, q: &Qset) -> Result<ClassKey> {
    let mut counts: BTreeMap<ClassKey, usize> = BTreeMap::new();
    for t in q.elements() {
        *counts.entry(class_key(u, t)?).or_default() += 1;
    }
    Ok(ClassKey::Qset(counts.into_iter().collect()))
}

/// `x ≡ y`.
pub fn indist(u: &Universe, x: Term, y: Term) -> Result<bool> {
    Ok(class_key(u, x)? == class_key(u, y)?)
}

/// `≡` between qset values that need not be registered in `u`.
pub fn indist_qsets(u: &Universe, x: &Qset, y: &Qset) -> Result<bool> {
    Ok(signature(u, x)? == signature(u, y)?)
}

/// `x =_E y`: qsets with the same members, or macro-atoms belonging to the
/// same qsets. Micro-atoms are never extensionally identical to anything.
pub fn ext_identity(u: &Universe, x: Term, y: Term) -> Result<bool> {
    u.require(x)?;
    u.require(y)?;
    Ok(match (x, y) {
        (Term::Qset(a), Term::Qset(b)) => u.qset(a) == u.qset(b),
        (Term::Atom(a), Term::Atom(b)) => {
            let (a_atom, b_atom) = (u.atom(a).unwrap(), u.atom(b).unwrap());
            a_atom.kind == AtomKind::Macro
                && b_atom.kind == AtomKind::Macro
                && u.memberships(x) == u.memberships(y)
        }
        _ => false,
    })
}

pub fn quasi_cardinality(u: &Universe, x: Term) -> Result<usize> {
    match x {
        Term::Qset(id) => u
            .qset(id)
            .map(Qset::qc)
            .ok_or_else(|| QuasisetError::UnknownTerm(u.name_of(x))),
        Term::Atom(_) => {
            u.require(x)?;
            Err(QuasisetError::NotAQset(u.name_of(x)))
        }
    }
}

/// `[z]`: every term of `u` indistinguishable from `z`.
pub fn indist_class(u: &Universe, z: Term) -> Result<Qset> {
    let key = class_key(u, z)?;
    let mut class = Vec::new();
    for t in u.terms() {
        if class_key(u, t)? == key {
            class.push(t);
        }
    }
    Ok(class.into_iter().collect())
}

/// Every one-element qset `{t}` with `t ≡ z`, drawn from `within` when given.
pub fn singleton_subs(u: &Universe, z: Term, within: Option<&Qset>) -> Result<Vec<Qset>> {
    let class = indist_class(u, z)?;
    Ok(class
        .elements()
        .filter(|&t| within.is_none_or(|x| x.contains(t)))
        .map(Qset::singleton)
        .collect())
}

/// One `z' ⊆ [z]` with `qc(z') = 1`. The choice is the first candidate in
/// internal order; callers that need a guarantee for every choice should use
/// [`singleton_subs`].
pub fn singleton_sub(u: &Universe, z: Term, within: Option<&Qset>) -> Result<Qset> {
    singleton_subs(u, z, within)?
        .into_iter()
        .next()
        .ok_or(QuasisetError::EmptyClass)
}

pub fn qset_union(u: &Universe, x: &Qset, y: &Qset) -> Result<Qset> {
    u.require_all(x)?;
    u.require_all(y)?;
    Ok(x.elements().chain(y.elements()).collect())
}

/// `x - z1`, where `z1` is a one-element qset whose element belongs to `x`.
pub fn qset_difference(u: &Universe, x: &Qset, z1: &Qset) -> Result<Qset> {
    u.require_all(x)?;
    u.require_all(z1)?;
    if z1.qc() != 1 {
        return Err(QuasisetError::NotSingleton(z1.qc()));
    }
    let t = z1.elements().next().unwrap();
    if !x.contains(t) {
        return Err(QuasisetError::NotAMember(u.name_of(t)));
    }
    Ok(x.without(t))
}

/// A qset is a classical copy when no micro-atom occurs in it hereditarily.
pub fn is_classical(u: &Universe, x: &Qset) -> Result<bool> {
    for t in x.elements() {
        match t {
            Term::Atom(uid) => {
                let atom = u
                    .atom(uid)
                    .ok_or_else(|| QuasisetError::UnknownTerm(u.name_of(t)))?;
                if atom.is_micro() {
                    return Ok(false);
                }
            }
            Term::Qset(id) => {
                let inner = u
                    .qset(id)
                    .ok_or_else(|| QuasisetError::UnknownTerm(u.name_of(t)))?;
                if !is_classical(u, inner)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn photons() -> Universe {
        Universe::builder()
            .species("photon")
            .species("electron")
            .micro("a", "photon")
            .micro("b", "photon")
            .micro("c", "photon")
            .micro("e", "electron")
            .macro_atom("m")
            .macro_atom("n")
            .qset("x", ["a", "b"])
            .qset("y", ["b", "c"])
            .qset("s", ["m", "n"])
            .qset("nest", ["a", "y"])
            .qset("empty", Vec::<String>::new())
            .build()
            .unwrap()
    }

    fn t(u: &Universe, name: &str) -> Term {
        u.lookup(name).unwrap()
    }

    fn value(u: &Universe, names: &[&str]) -> Qset {
        names.iter().map(|n| t(u, n)).collect()
    }

    #[test]
    fn micro_atoms_of_one_species_are_indistinguishable() {
        let u = photons();
        assert!(indist(&u, t(&u, "a"), t(&u, "b")).unwrap());
        assert!(!indist(&u, t(&u, "a"), t(&u, "e")).unwrap());
    }

    #[test]
    fn kinds_never_mix() {
        let u = photons();
        assert!(!indist(&u, t(&u, "a"), t(&u, "m")).unwrap());
        assert!(!indist(&u, t(&u, "a"), t(&u, "x")).unwrap());
    }

    #[test]
    fn qsets_compare_by_signature() {
        let u = photons();
        // both hold photon×2
        assert!(indist(&u, t(&u, "x"), t(&u, "y")).unwrap());
        assert!(!indist(&u, t(&u, "x"), t(&u, "nest")).unwrap());
        assert!(!ext_identity(&u, t(&u, "x"), t(&u, "y")).unwrap());
    }

    #[test]
    fn ext_identity_cases() {
        let u = photons();
        assert!(ext_identity(&u, t(&u, "x"), t(&u, "x")).unwrap());
        // m and n both belong to exactly {s}
        assert!(ext_identity(&u, t(&u, "m"), t(&u, "n")).unwrap());
        assert!(indist(&u, t(&u, "m"), t(&u, "n")).unwrap());
        assert!(!ext_identity(&u, t(&u, "a"), t(&u, "a")).unwrap());
    }

    #[test]
    fn singletons_of_same_species_are_indist_not_ext_identical() {
        let u = Universe::builder()
            .species("photon")
            .micro("a", "photon")
            .micro("b", "photon")
            .qset("x", ["a"])
            .qset("y", ["b"])
            .build()
            .unwrap();
        assert!(indist(&u, t(&u, "x"), t(&u, "y")).unwrap());
        assert!(!ext_identity(&u, t(&u, "x"), t(&u, "y")).unwrap());
    }

    #[test]
    fn macro_identity_distinguishes_memberships() {
        let u = Universe::builder()
            .macro_atom("m")
            .macro_atom("n")
            .qset("s", ["m"])
            .build()
            .unwrap();
        assert!(!indist(&u, t(&u, "m"), t(&u, "n")).unwrap());
        assert_eq!(indist_class(&u, t(&u, "m")).unwrap(), value(&u, &["m"]));
    }

    #[test]
    fn cardinalities() {
        let u = photons();
        assert_eq!(quasi_cardinality(&u, t(&u, "empty")).unwrap(), 0);
        assert_eq!(quasi_cardinality(&u, t(&u, "nest")).unwrap(), 2);
        assert_eq!(value(&u, &["a", "b", "c"]).qc(), 3);
        assert!(matches!(
            quasi_cardinality(&u, t(&u, "a")),
            Err(QuasisetError::NotAQset(_))
        ));
    }

    #[test]
    fn classes() {
        let u = photons();
        assert_eq!(indist_class(&u, t(&u, "a")).unwrap().qc(), 3);
        assert_eq!(indist_class(&u, t(&u, "e")).unwrap().qc(), 1);
        assert_eq!(
            indist_class(&u, t(&u, "x")).unwrap(),
            value(&u, &["x", "y"])
        );
    }

    #[test]
    fn singleton_choices() {
        let u = photons();
        let x = value(&u, &["a", "b"]);
        let all = singleton_subs(&u, t(&u, "a"), Some(&x)).unwrap();
        assert_eq!(all, vec![value(&u, &["a"]), value(&u, &["b"])]);
        for z1 in &all {
            assert_eq!(z1.qc(), 1);
            assert!(indist(&u, z1.elements().next().unwrap(), t(&u, "a")).unwrap());
        }
        assert_eq!(
            singleton_sub(&u, t(&u, "a"), Some(&x)).unwrap(),
            value(&u, &["a"])
        );

        let only = Universe::builder()
            .species("p")
            .micro("a", "p")
            .build()
            .unwrap();
        assert_eq!(
            singleton_sub(&only, t(&only, "a"), None).unwrap(),
            value(&only, &["a"])
        );

        let electrons_only = value(&u, &["e"]);
        assert_eq!(
            singleton_sub(&u, t(&u, "a"), Some(&electrons_only)).unwrap_err(),
            QuasisetError::EmptyClass
        );
    }

    #[test]
    fn union_and_difference() {
        let u = photons();
        let ab = qset_union(&u, &value(&u, &["a"]), &value(&u, &["b"])).unwrap();
        assert_eq!(ab, value(&u, &["a", "b"]));
        assert_eq!(
            qset_difference(&u, &ab, &value(&u, &["a"])).unwrap(),
            value(&u, &["b"])
        );
        assert_eq!(
            qset_difference(&u, &ab, &ab).unwrap_err(),
            QuasisetError::NotSingleton(2)
        );
        assert!(matches!(
            qset_difference(&u, &ab, &value(&u, &["c"])),
            Err(QuasisetError::NotAMember(_))
        ));
    }

    #[test]
    fn classical_flag() {
        let u = photons();
        assert!(is_classical(&u, &value(&u, &["m", "n"])).unwrap());
        assert!(!is_classical(&u, &value(&u, &["nest"])).unwrap());
        assert!(is_classical(&u, &Qset::empty()).unwrap());
    }

    #[test]
    fn unknown_terms() {
        let u = photons();
        let ghost = Term::Atom(super::super::Uid(99));
        assert!(matches!(
            indist(&u, ghost, t(&u, "a")),
            Err(QuasisetError::UnknownTerm(_))
        ));
        assert!(matches!(
            ext_identity(&u, ghost, ghost),
            Err(QuasisetError::UnknownTerm(_))
        ));
        assert!(matches!(
            qset_union(&u, &Qset::singleton(ghost), &Qset::empty()),
            Err(QuasisetError::UnknownTerm(_))
        ));
    }
}
