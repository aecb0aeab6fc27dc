//! Helpers shared by the integration tests: random codes and a naive,
//! unpruned reference enumerator for the search.

#![allow(dead_code)]

use std::collections::HashSet;

use magicdistill::code::{GroupEchelon, StabilizerCode};
use magicdistill::search::subspace::{span, standard_form_row_space};
use magicdistill::PauliOperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_pauli(rng: &mut impl Rng, n: usize) -> PauliOperator {
    let mask = (1u64 << n) - 1;
    PauliOperator::new(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask, rng.random_range(0..4)).unwrap()
}

/// Rejection-sampled valid `[[n,1]]` code with random generator signs.
pub fn random_code(seed: u64, n: usize) -> StabilizerCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<PauliOperator> = Vec::new();
    let mut echelon = GroupEchelon::new(n);
    while gens.len() + 1 < n {
        let p = random_pauli(&mut rng, n).with_phase(if rng.random() { 0 } else { 2 });
        if p.is_identity_pattern() || gens.iter().any(|g| !g.commutes_with(&p)) {
            continue;
        }
        if echelon.contains_pattern(&p) {
            continue;
        }
        echelon.insert(p);
        gens.push(p);
    }
    StabilizerCode::new_valid(n, gens).unwrap()
}

/// Smallest weight of a non-identity element of `G`.
pub fn min_group_weight(code: &StabilizerCode) -> u32 {
    code.group_elements()
        .iter()
        .filter(|p| !p.is_identity_pattern())
        .map(|p| p.weight())
        .min()
        .unwrap_or(u32::MAX)
}

/// Every signed code whose generator `i` lies in the unpruned
/// `span(R_i)` with weight ≥ 2, as canonical forms; the second set keeps
/// only groups without elements of weight ≤ 1.
pub fn reference_codes(n: usize) -> (HashSet<Vec<PauliOperator>>, HashSet<Vec<PauliOperator>>) {
    let spans: Vec<Vec<PauliOperator>> = (0..n - 1)
        .map(|i| {
            span(n, &standard_form_row_space(n, i))
                .filter(|p| p.weight() >= 2)
                .map(|p| p.with_phase(0))
                .collect()
        })
        .collect();
    let mut all = HashSet::new();
    let mut heavy = HashSet::new();
    let mut chosen = Vec::new();
    fn walk(
        n: usize,
        spans: &[Vec<PauliOperator>],
        chosen: &mut Vec<PauliOperator>,
        all: &mut HashSet<Vec<PauliOperator>>,
        heavy: &mut HashSet<Vec<PauliOperator>>,
    ) {
        let depth = chosen.len();
        if depth == n - 1 {
            let unsigned = StabilizerCode::new(n, chosen.clone()).unwrap();
            if !unsigned.is_valid() {
                return;
            }
            let keep = min_group_weight(&unsigned) >= 2;
            for signs in 0..1u64 << (n - 1) {
                let form = unsigned.with_signs(signs).canonical_form();
                if keep {
                    heavy.insert(form.clone());
                }
                all.insert(form);
            }
            return;
        }
        for p in &spans[depth] {
            if chosen.iter().any(|g| !g.commutes_with(p)) {
                continue;
            }
            chosen.push(*p);
            walk(n, spans, chosen, all, heavy);
            chosen.pop();
        }
    }
    walk(n, &spans, &mut chosen, &mut all, &mut heavy);
    (all, heavy)
}
