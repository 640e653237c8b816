//! Small-universe enumeration and random generation for exhaustive and
//! metamorphic checks.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{permutation_theorem_check, Qset, QuasisetError, RemovalReading, Term, Uid, Universe};

/// Species population vectors `[n₀, n₁, …]` with at most `max_species`
/// entries, every entry ≥ 1, summing to at most `max_atoms`. Includes the
/// empty vector.
pub fn species_profiles(max_species: usize, max_atoms: usize) -> Vec<Vec<usize>> {
    fn extend(
        prefix: &mut Vec<usize>,
        left_species: usize,
        left_atoms: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(prefix.clone());
        if left_species == 0 {
            return;
        }
        for n in 1..=left_atoms {
            prefix.push(n);
            extend(prefix, left_species - 1, left_atoms - n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_species, max_atoms, &mut out);
    out
}

/// Universe with `profile[i]` micro-atoms of species `s{i}` (named `p0, p1, …`)
/// followed by `macros` macro-atoms (`m0, …`), and no registered qsets.
pub fn atoms_universe(profile: &[usize], macros: usize) -> Universe {
    let mut b = Universe::builder();
    for i in 0..profile.len() {
        b = b.species(format!("s{i}"));
    }
    let mut k = 0;
    for (i, &n) in profile.iter().enumerate() {
        for _ in 0..n {
            b = b.micro(format!("p{k}"), format!("s{i}"));
            k += 1;
        }
    }
    for j in 0..macros {
        b = b.macro_atom(format!("m{j}"));
    }
    b.build().expect("generated declarations are consistent")
}

/// All sub-qsets of `terms`.
pub fn subsets(terms: &[Term]) -> Vec<Qset> {
    (0u32..1 << terms.len())
        .map(|mask| {
            terms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &t)| t)
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub universes: usize,
    pub instances: usize,
    pub failures: Vec<String>,
}

/// Brute-force the permutation theorem over every universe with at most
/// `max_species` species and `max_micro` micro-atoms (with zero or one extra
/// macro-atom), every qset `x` over its atoms, and every `z, w` meeting the
/// hypotheses, under both removal readings.
pub fn exhaustive_permutation_sweep(max_species: usize, max_micro: usize) -> SweepSummary {
    let mut summary = SweepSummary::default();
    for profile in species_profiles(max_species, max_micro) {
        for macros in 0..=1 {
            let u = atoms_universe(&profile, macros);
            summary.universes += 1;
            let atoms: Vec<Term> = u.atoms().map(|a| Term::Atom(a.uid)).collect();
            for x in subsets(&atoms) {
                for &z in &atoms {
                    for &w in &atoms {
                        for reading in [RemovalReading::WithinX, RemovalReading::WholeClass] {
                            match permutation_theorem_check(&u, &x, z, w, reading) {
                                Ok(r) => {
                                    summary.instances += 1;
                                    if !r.holds {
                                        summary.failures.push(format!(
                                            "profile {profile:?}, x = {}, z = {}, w = {}: {:?}",
                                            u.describe(&x),
                                            u.name_of(z),
                                            u.name_of(w),
                                            r.counterexample
                                        ));
                                    }
                                }
                                Err(QuasisetError::PreconditionViolated(_)) => {}
                                Err(e) => summary.failures.push(e.to_string()),
                            }
                        }
                    }
                }
            }
        }
    }
    summary
}

/// A random universe: 1–3 species, up to 6 micro-atoms, up to 2 macro-atoms
/// and up to 4 qsets whose members are atoms or earlier qsets.
pub fn random_universe<R: Rng + ?Sized>(rng: &mut R) -> Universe {
    let n_species = rng.gen_range(1..=3);
    let n_micro = rng.gen_range(0..=6);
    let n_macro = rng.gen_range(0..=2);
    let n_qsets = rng.gen_range(0..=4);

    let mut b = Universe::builder();
    for i in 0..n_species {
        b = b.species(format!("s{i}"));
    }
    let mut names = Vec::new();
    for k in 0..n_micro {
        b = b.micro(format!("p{k}"), format!("s{}", rng.gen_range(0..n_species)));
        names.push(format!("p{k}"));
    }
    for j in 0..n_macro {
        b = b.macro_atom(format!("m{j}"));
        names.push(format!("m{j}"));
    }
    for q in 0..n_qsets {
        let members: Vec<String> = names
            .iter()
            .filter(|_| rng.gen_bool(0.45))
            .cloned()
            .collect();
        b = b.qset(format!("q{q}"), members);
        names.push(format!("q{q}"));
    }
    b.build().expect("generated declarations are consistent")
}

/// A uniformly random permutation of the universe's atom uids.
pub fn random_uid_permutation<R: Rng + ?Sized>(u: &Universe, rng: &mut R) -> HashMap<Uid, Uid> {
    let from: Vec<Uid> = u.atoms().map(|a| a.uid).collect();
    let mut to = from.clone();
    to.shuffle(rng);
    from.into_iter().zip(to).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_are_bounded() {
        let ps = species_profiles(3, 6);
        // 1 empty + 6 + 15 + 20
        assert_eq!(ps.len(), 42);
        assert!(ps
            .iter()
            .all(|p| p.len() <= 3 && p.iter().sum::<usize>() <= 6 && p.iter().all(|&n| n >= 1)));
    }

    #[test]
    fn subsets_count() {
        let u = atoms_universe(&[2, 1], 0);
        let atoms: Vec<Term> = u.atoms().map(|a| Term::Atom(a.uid)).collect();
        assert_eq!(subsets(&atoms).len(), 8);
    }

    #[test]
    fn small_sweep_has_no_failures() {
        let s = exhaustive_permutation_sweep(2, 3);
        assert!(s.instances > 0);
        assert!(s.failures.is_empty(), "{:?}", s.failures);
    }
}
