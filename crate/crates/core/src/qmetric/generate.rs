//! Differentiation spaces built to satisfy the axioms, for sweeps and
//! property checks.

use rand::Rng;

use super::{DifferentiationSpace, QuasiMetricSpace};
use crate::quasiset::enumerate::atoms_universe;
use crate::quasiset::{class_key, Qset, Term, Universe};
use crate::ANALYTIC_TOL;

/// Every atom of `u` placed at the position of its `≡`-class on the unit
/// interval, `d(a, b) = |x_a - x_b|`. `position` receives the index of the
/// class in order of first appearance. Sound whenever distinct classes get
/// distinct positions.
pub fn line_space(u: &Universe, position: impl Fn(usize) -> f64) -> DifferentiationSpace {
    let atoms: Vec<Term> = u.atoms().map(|a| Term::Atom(a.uid)).collect();
    let mut keys = Vec::new();
    let class: Vec<usize> = atoms
        .iter()
        .map(|&t| {
            let k = class_key(u, t).expect("atom of u");
            keys.iter().position(|x| *x == k).unwrap_or_else(|| {
                keys.push(k);
                keys.len() - 1
            })
        })
        .collect();
    let carrier: Qset = atoms.iter().copied().collect();
    let index = |t: Term| atoms.iter().position(|&a| a == t).expect("carrier atom");
    let base = QuasiMetricSpace::from_fn(u, &carrier, |a, b| {
        (position(class[index(a)]) - position(class[index(b)])).abs()
    })
    .expect("carrier drawn from u");
    DifferentiationSpace::new(base, u, ANALYTIC_TOL).expect("distances within [0, 1]")
}

/// A random sound space on at most `max_carrier` atoms: species populations,
/// macro-atoms and class positions are all random.
pub fn random_sound_space<R: Rng + ?Sized>(
    rng: &mut R,
    max_carrier: usize,
) -> (Universe, DifferentiationSpace) {
    let total = rng.gen_range(1..=max_carrier);
    let macros = rng.gen_range(0..=total.min(2));
    let mut left = total - macros;
    let mut profile = Vec::new();
    while left > 0 {
        let n = rng.gen_range(1..=left);
        profile.push(n);
        left -= n;
    }
    let u = atoms_universe(&profile, macros);
    let classes = profile.len() + macros;
    // distinct positions: a shuffled grid with jitter smaller than the spacing
    let mut slots: Vec<f64> = (0..classes)
        .map(|i| (i as f64 + rng.gen_range(0.0..0.9)) / classes as f64)
        .collect();
    rand::seq::SliceRandom::shuffle(slots.as_mut_slice(), rng);
    let space = line_space(&u, |i| slots[i]);
    (u, space)
}
