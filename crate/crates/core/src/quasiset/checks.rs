use serde::{Deserialize, Serialize};

use super::ops::{class_key, ext_identity, indist, indist_class, indist_qsets};
use super::{Precondition, Qset, QuasisetError, Result, Term, Universe};
use crate::report::{AxiomId, AxiomReport};

/// Reflexivity, symmetry and transitivity of an arbitrary relation over
/// `items`. Used for `≡` itself and for deliberately broken relations in tests.
pub fn check_equivalence_with<T: Copy>(
    items: &[T],
    name: impl Fn(T) -> String,
    rel: impl Fn(T, T) -> bool,
) -> Vec<AxiomReport> {
    let n = items.len();
    let holds: Vec<Vec<bool>> = items
        .iter()
        .map(|&a| items.iter().map(|&b| rel(a, b)).collect())
        .collect();

    let q1 = (0..n)
        .find(|&i| !holds[i][i])
        .map(|i| AxiomReport::fail(AxiomId::Q1, vec![name(items[i])], "x ≡ x fails"))
        .unwrap_or_else(|| AxiomReport::pass(AxiomId::Q1));

    let q2 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| holds[i][j] && !holds[j][i])
        .map(|(i, j)| {
            AxiomReport::fail(
                AxiomId::Q2,
                vec![name(items[i]), name(items[j])],
                "x ≡ y but not y ≡ x",
            )
        })
        .unwrap_or_else(|| AxiomReport::pass(AxiomId::Q2));

    let mut q3 = AxiomReport::pass(AxiomId::Q3);
    'outer: for i in 0..n {
        for j in 0..n {
            if !holds[i][j] {
                continue;
            }
            for k in 0..n {
                if holds[j][k] && !holds[i][k] {
                    q3 = AxiomReport::fail(
                        AxiomId::Q3,
                        vec![name(items[i]), name(items[j]), name(items[k])],
                        "x ≡ y and y ≡ z but not x ≡ z",
                    );
                    break 'outer;
                }
            }
        }
    }
    vec![q1, q2, q3]
}

/// Q1–Q3 for `≡` over every term of `u`.
pub fn check_equivalence_axioms(u: &Universe) -> Vec<AxiomReport> {
    let terms = u.terms();
    let keys: Vec<_> = terms
        .iter()
        .map(|&t| class_key(u, t).expect("terms of u"))
        .collect();
    let index: Vec<usize> = (0..terms.len()).collect();
    check_equivalence_with(&index, |i| u.name_of(terms[i]), |i, j| keys[i] == keys[j])
}

/// Finite stand-in for the substitutivity schema: two extensionally identical
/// terms must agree on membership in every registered qset, on quasi-cardinality
/// (for qsets) and on their indistinguishability class.
pub fn check_substitutivity_surrogate(u: &Universe, x: Term, y: Term) -> Result<AxiomReport> {
    if !ext_identity(u, x, y)? {
        return Err(QuasisetError::PreconditionViolated(
            Precondition::NotExtensionallyIdentical,
        ));
    }
    let (xn, yn) = (u.name_of(x), u.name_of(y));
    for s in u.qset_ids() {
        let set = u.qset(s).unwrap();
        if set.contains(x) != set.contains(y) {
            let sn = u.name_of(Term::Qset(s));
            return Ok(AxiomReport::fail(
                AxiomId::Q4Surrogate,
                vec![xn, yn, sn.clone()],
                format!("membership in {sn} differs"),
            ));
        }
    }
    if let (Term::Qset(a), Term::Qset(b)) = (x, y) {
        if u.qset(a).unwrap().qc() != u.qset(b).unwrap().qc() {
            return Ok(AxiomReport::fail(
                AxiomId::Q4Surrogate,
                vec![xn, yn],
                "quasi-cardinalities differ",
            ));
        }
    }
    if indist_class(u, x)? != indist_class(u, y)? {
        return Ok(AxiomReport::fail(
            AxiomId::Q4Surrogate,
            vec![xn, yn],
            "indistinguishability classes differ",
        ));
    }
    Ok(AxiomReport::pass(AxiomId::Q4Surrogate))
}

/// A relation given as pairs is a quasi-function from `domain` to `codomain`
/// when every domain element has an image and indistinguishable arguments have
/// indistinguishable images.
pub fn quasi_function_check(
    u: &Universe,
    pairs: &[(Term, Term)],
    domain: &Qset,
    codomain: &Qset,
) -> Result<AxiomReport> {
    u.require_all(domain)?;
    u.require_all(codomain)?;
    for &(a, b) in pairs {
        u.require(a)?;
        u.require(b)?;
        if !domain.contains(a) || !codomain.contains(b) {
            return Ok(AxiomReport::fail(
                AxiomId::QuasiFunction,
                vec![u.name_of(a), u.name_of(b)],
                "pair lies outside domain × codomain",
            ));
        }
    }
    for a in domain.elements() {
        if !pairs.iter().any(|&(p, _)| p == a) {
            return Ok(AxiomReport::fail(
                AxiomId::QuasiFunction,
                vec![u.name_of(a)],
                "domain element has no image",
            ));
        }
    }
    for &(a, b) in pairs {
        for &(a2, b2) in pairs {
            if indist(u, a, a2)? && !indist(u, b, b2)? {
                return Ok(AxiomReport::fail(
                    AxiomId::QuasiFunction,
                    vec![u.name_of(a), u.name_of(b), u.name_of(a2), u.name_of(b2)],
                    "indistinguishable arguments with distinguishable images",
                ));
            }
        }
    }
    Ok(AxiomReport::pass(AxiomId::QuasiFunction))
}

/// Where the removed one-element qset `z'` is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemovalReading {
    /// `z' ⊆ [z]` and `z' ⊆ x`: an element of `x` is actually removed.
    WithinX,
    /// `z' ⊆ [z]` anywhere in the universe; when its element lies outside `x`
    /// the difference leaves `x` unchanged.
    WholeClass,
}

/// Permutations are unobservable: for finite `x` with `x ≠_E [z]`, a micro-atom
/// `z ∈ x` and `w ≡ z` with `w ∉ x`, every admissible `z'` admits some `w'`
/// (a one-element qset of a term `≡ w`) with `(x - z') ∪ w' ≡ x`.
///
/// Every choice of `z'` is tried; the report fails on the first `z'` for which
/// no `w'` works.
pub fn permutation_theorem_check(
    u: &Universe,
    x: &Qset,
    z: Term,
    w: Term,
    reading: RemovalReading,
) -> Result<AxiomReport> {
    u.require_all(x)?;
    u.require(z)?;
    u.require(w)?;
    let z_is_micro = match z {
        Term::Atom(uid) => u.atom(uid).is_some_and(|a| a.is_micro()),
        Term::Qset(_) => false,
    };
    let violated = |p| Err(QuasisetError::PreconditionViolated(p));
    if !z_is_micro {
        return violated(Precondition::ZNotMicro);
    }
    if !x.contains(z) {
        return violated(Precondition::ZNotInX);
    }
    let class = indist_class(u, z)?;
    if *x == class {
        return violated(Precondition::XIsClassOfZ);
    }
    if !indist(u, w, z)? {
        return violated(Precondition::WNotIndistinguishable);
    }
    if x.contains(w) {
        return violated(Precondition::WInX);
    }

    let w_class = indist_class(u, w)?;
    let removals = class
        .elements()
        .filter(|&t| reading == RemovalReading::WholeClass || x.contains(t));
    for t in removals {
        let reduced = x.without(t);
        let mut restored = false;
        for s in w_class.elements() {
            if indist_qsets(u, &reduced.with(s), x)? {
                restored = true;
                break;
            }
        }
        if !restored {
            return Ok(AxiomReport::fail(
                AxiomId::PermutationTheorem,
                vec![u.describe(x), u.name_of(z), u.name_of(w), u.name_of(t)],
                format!("no w' restores x after removing z' = {{{}}}", u.name_of(t)),
            ));
        }
    }
    Ok(AxiomReport::pass(AxiomId::PermutationTheorem))
}

/// One admissible `(x, z, w)` triple over the registered qsets of a universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremInstance {
    pub x: String,
    pub z: String,
    pub w: String,
    pub report: AxiomReport,
}

/// Run the permutation theorem on every registered qset `x` and atoms `z, w`
/// that satisfy its hypotheses.
pub fn admissible_theorem_instances(u: &Universe, reading: RemovalReading) -> Vec<TheoremInstance> {
    let atoms: Vec<Term> = u.atoms().map(|a| Term::Atom(a.uid)).collect();
    let mut out = Vec::new();
    for id in u.qset_ids() {
        let x = u.qset(id).unwrap();
        for &z in &atoms {
            for &w in &atoms {
                match permutation_theorem_check(u, x, z, w, reading) {
                    Ok(report) => out.push(TheoremInstance {
                        x: u.name_of(Term::Qset(id)),
                        z: u.name_of(z),
                        w: u.name_of(w),
                        report,
                    }),
                    Err(QuasisetError::PreconditionViolated(_)) => {}
                    Err(e) => unreachable!("terms come from the universe: {e}"),
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(u: &Universe, name: &str) -> Term {
        u.lookup(name).unwrap()
    }

    fn value(u: &Universe, names: &[&str]) -> Qset {
        names.iter().map(|n| t(u, n)).collect()
    }

    fn three_photons() -> Universe {
        Universe::builder()
            .species("photon")
            .micro("a", "photon")
            .micro("b", "photon")
            .micro("c", "photon")
            .qset("x", ["a", "b"])
            .build()
            .unwrap()
    }

    #[test]
    fn equivalence_axioms_hold_on_models() {
        let u = three_photons();
        assert!(check_equivalence_axioms(&u).iter().all(|r| r.holds));
        let empty = Universe::builder().build().unwrap();
        assert!(check_equivalence_axioms(&empty).iter().all(|r| r.holds));
    }

    #[test]
    fn planted_distance_relation_breaks_transitivity() {
        // "close" means within 0.5 on a line: 0 ~ 0.4 ~ 0.8 but 0 !~ 0.8
        let points = [0.0_f64, 0.4, 0.8];
        let reports =
            check_equivalence_with(&points, |p| p.to_string(), |a, b| (a - b).abs() <= 0.5);
        assert!(reports[0].holds && reports[1].holds);
        let q3 = &reports[2];
        assert!(!q3.holds);
        let cx = q3.counterexample.as_ref().unwrap();
        let p: Vec<f64> = cx.terms.iter().map(|s| s.parse().unwrap()).collect();
        assert!(
            (p[0] - p[1]).abs() <= 0.5 && (p[1] - p[2]).abs() <= 0.5 && (p[0] - p[2]).abs() > 0.5
        );
    }

    #[test]
    fn planted_asymmetric_relation_breaks_symmetry() {
        let items = [1, 2];
        let reports = check_equivalence_with(&items, |i| i.to_string(), |a, b| a <= b);
        assert!(reports[0].holds);
        assert!(!reports[1].holds);
        assert_eq!(
            reports[1].counterexample.as_ref().unwrap().terms,
            vec!["1", "2"]
        );
    }

    #[test]
    fn theorem_holds_with_fresh_photon() {
        let u = three_photons();
        let x = value(&u, &["a", "b"]);
        for reading in [RemovalReading::WithinX, RemovalReading::WholeClass] {
            let r = permutation_theorem_check(&u, &x, t(&u, "a"), t(&u, "c"), reading).unwrap();
            assert!(r.holds, "{r:?}");
        }
        // the w' = {c} witness from the example: {b, c} ≡ {a, b}
        let swapped = x.without(t(&u, "a")).with(t(&u, "c"));
        assert!(indist_qsets(&u, &swapped, &x).unwrap());
    }

    #[test]
    fn theorem_refuses_when_x_is_the_whole_class() {
        let u = Universe::builder()
            .species("photon")
            .micro("a", "photon")
            .micro("b", "photon")
            .build()
            .unwrap();
        let x = value(&u, &["a", "b"]);
        let err =
            permutation_theorem_check(&u, &x, t(&u, "a"), t(&u, "b"), RemovalReading::WithinX)
                .unwrap_err();
        assert_eq!(
            err,
            QuasisetError::PreconditionViolated(Precondition::XIsClassOfZ)
        );
    }

    #[test]
    fn theorem_preconditions() {
        let u = Universe::builder()
            .species("p")
            .species("q")
            .micro("a", "p")
            .micro("b", "p")
            .micro("c", "p")
            .micro("e", "q")
            .macro_atom("m")
            .build()
            .unwrap();
        let x = value(&u, &["a", "b", "m"]);
        let check =
            |z, w| permutation_theorem_check(&u, &x, t(&u, z), t(&u, w), RemovalReading::WithinX);
        let pv = QuasisetError::PreconditionViolated;
        assert_eq!(check("m", "c").unwrap_err(), pv(Precondition::ZNotMicro));
        assert_eq!(check("c", "a").unwrap_err(), pv(Precondition::ZNotInX));
        assert_eq!(
            check("a", "e").unwrap_err(),
            pv(Precondition::WNotIndistinguishable)
        );
        assert_eq!(check("a", "b").unwrap_err(), pv(Precondition::WInX));
        assert!(check("a", "c").unwrap().holds);
    }

    #[test]
    fn substitutivity_for_macro_atoms() {
        let u = Universe::builder()
            .macro_atom("m")
            .macro_atom("n")
            .qset("s", ["m", "n"])
            .build()
            .unwrap();
        let r = check_substitutivity_surrogate(&u, t(&u, "m"), t(&u, "n")).unwrap();
        assert!(r.holds);
        assert!(
            check_substitutivity_surrogate(&u, t(&u, "s"), t(&u, "s"))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn substitutivity_refuses_indistinguishable_micro_atoms() {
        let u = three_photons();
        assert!(indist(&u, t(&u, "a"), t(&u, "b")).unwrap());
        assert_eq!(
            check_substitutivity_surrogate(&u, t(&u, "a"), t(&u, "b")).unwrap_err(),
            QuasisetError::PreconditionViolated(Precondition::NotExtensionallyIdentical)
        );
    }

    #[test]
    fn substitutivity_flags_qsets_that_share_members_but_not_memberships() {
        let u = Universe::builder()
            .species("p")
            .micro("a", "p")
            .qset("x", ["a"])
            .qset("y", ["a"])
            .qset("s", ["x"])
            .build()
            .unwrap();
        let r = check_substitutivity_surrogate(&u, t(&u, "x"), t(&u, "y")).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample.unwrap().terms, vec!["x", "y", "s"]);
    }

    #[test]
    fn quasi_functions() {
        let u = Universe::builder()
            .species("photon")
            .species("electron")
            .micro("a", "photon")
            .micro("b", "photon")
            .micro("e", "electron")
            .build()
            .unwrap();
        let photons = value(&u, &["a", "b"]);
        let all = value(&u, &["a", "b", "e"]);
        let identity = [(t(&u, "a"), t(&u, "a")), (t(&u, "b"), t(&u, "b"))];
        assert!(
            quasi_function_check(&u, &identity, &photons, &photons)
                .unwrap()
                .holds
        );

        let split = [(t(&u, "a"), t(&u, "a")), (t(&u, "b"), t(&u, "e"))];
        let r = quasi_function_check(&u, &split, &photons, &all).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample.unwrap().terms, vec!["a", "a", "b", "e"]);

        let partial = [(t(&u, "a"), t(&u, "a"))];
        let r = quasi_function_check(&u, &partial, &photons, &photons).unwrap();
        assert_eq!(r.counterexample.unwrap().terms, vec!["b"]);
    }

    #[test]
    fn instances_over_registered_qsets() {
        let u = three_photons();
        let inst = admissible_theorem_instances(&u, RemovalReading::WithinX);
        // x = {a, b}; z ∈ {a, b}; w = c
        assert_eq!(inst.len(), 2);
        assert!(inst.iter().all(|i| i.report.holds && i.w == "c"));
    }
}
