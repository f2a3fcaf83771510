//! Property tests over randomly generated bimolecular networks: conservation
//! laws, semantics equivalences, generator structure, and integrator
//! cross-checks.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use crnsynth::crn::{Crn, SysState};
use crnsynth::ctmc::{
    build_generator, build_state_space_from, expected_hitting_time, integrate, CmeOptions,
    CtmcError, Generator, StateSpace,
};
use crnsynth::oracle::ReactionSpace;
use crnsynth::predicate::states_with_total;

/// Random bimolecular network: a reaction subset of the canonical space over
/// 2 or 3 species, with rates in a range that absorbs well before t = 100.
fn arb_crn() -> impl Strategy<Value = Crn> {
    (2usize..=3)
        .prop_flat_map(|n| {
            let space = ReactionSpace::new(n);
            let count = space.count();
            (
                Just(n),
                proptest::collection::btree_set(0..count, 1..=3),
            )
        })
        .prop_flat_map(|(n, picks)| {
            let space = ReactionSpace::new(n);
            let reactions: Vec<_> = picks
                .iter()
                .map(|&i| space.reactions[i].clone())
                .collect();
            let len = reactions.len();
            (
                Just(n),
                Just(reactions),
                proptest::collection::vec(0.5f64..5.0, len),
            )
        })
        .prop_map(|(n, reactions, rates)| {
            let reactions = reactions
                .into_iter()
                .zip(&rates)
                .map(|(r, &k)| {
                    crnsynth::crn::Reaction::new(r.reactants().to_vec(), r.products().to_vec(), k)
                        .unwrap()
                })
                .collect();
            Crn::with_canonical_species(n, reactions, vec![], vec![]).unwrap()
        })
}

fn all_states_up_to(num_species: usize, bound: u64) -> Vec<SysState> {
    (0..=bound)
        .flat_map(|t| states_with_total(num_species, t))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn firing_conserves_total_count(crn in arb_crn()) {
        for state in all_states_up_to(crn.num_species(), 6) {
            for r in 0..crn.num_reactions() {
                if crn.enabled(r, &state).unwrap() {
                    let next = crn.fire(r, &state).unwrap();
                    prop_assert_eq!(next.total(), state.total());
                }
            }
        }
    }

    #[test]
    fn no_successors_iff_terminal(crn in arb_crn()) {
        for state in all_states_up_to(crn.num_species(), 6) {
            let successors = crn.successors(&state).unwrap();
            prop_assert_eq!(successors.is_empty(), crn.is_terminal(&state).unwrap());
        }
    }

    #[test]
    fn unit_multiplicity_slice_equals_successors(crn in arb_crn()) {
        for state in all_states_up_to(crn.num_species(), 6) {
            let mut slice: Vec<SysState> = crn
                .stutter_successors(&state)
                .unwrap()
                .into_iter()
                .filter(|s| s.multiplicity == 1)
                .map(|s| s.state)
                .collect();
            slice.sort();
            slice.dedup();
            prop_assert_eq!(slice, crn.successors(&state).unwrap());
        }
    }

    #[test]
    fn positive_propensity_iff_enabled(crn in arb_crn()) {
        for state in all_states_up_to(crn.num_species(), 6) {
            for r in 0..crn.num_reactions() {
                let propensity = crn.propensity(r, &state).unwrap();
                prop_assert_eq!(propensity > 0.0, crn.enabled(r, &state).unwrap());
                prop_assert!(propensity >= 0.0);
            }
        }
    }

    #[test]
    fn generator_rows_sum_to_zero(
        crn in arb_crn(),
        seed_index in 0usize..1000,
    ) {
        let (space, generator) = space_and_generator(&crn, seed_index, 8);
        for i in 0..space.len() {
            let row_sum: f64 = generator.matrix().row(i).map(|(_, v)| v).sum();
            prop_assert!(row_sum.abs() <= 1e-12, "row {i} sums to {row_sum}");
            for (j, v) in generator.matrix().row(i) {
                if j != i {
                    prop_assert!(v >= 0.0);
                }
            }
            if space.is_terminal(i) {
                prop_assert_eq!(generator.matrix().row(i).count(), 0);
            }
        }
    }

    #[test]
    fn integration_conserves_mass(
        crn in arb_crn(),
        seed_index in 0usize..1000,
        t in 0.0f64..5.0,
    ) {
        let (space, generator) = space_and_generator(&crn, seed_index, 6);
        let pi0 = space.uniform_initial();
        let pi = integrate(&generator, &pi0, t, &CmeOptions::default()).unwrap();
        let sum: f64 = pi.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-9);
        prop_assert!(pi.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn integration_has_semigroup_property(
        crn in arb_crn(),
        seed_index in 0usize..1000,
        s in 0.05f64..2.0,
        t in 0.05f64..2.0,
    ) {
        let tol = 1e-8;
        let (space, generator) = space_and_generator(&crn, seed_index, 6);
        let pi0 = space.uniform_initial();
        let options = CmeOptions { tol, ..CmeOptions::default() };
        let direct = integrate(&generator, &pi0, s + t, &options).unwrap();
        let mid = integrate(&generator, &pi0, s, &options).unwrap();
        let composed = integrate(&generator, &mid, t, &options).unwrap();
        for (a, b) in direct.iter().zip(&composed) {
            prop_assert!((a - b).abs() <= 10.0 * tol, "{a} vs {b}");
        }
    }

    #[test]
    fn terminal_mass_matches_direct_absorption_solve(
        crn in arb_crn(),
        seed_index in 0usize..1000,
    ) {
        let (space, generator) = space_and_generator(&crn, seed_index, 6);
        // Only absorbing chains have absorption probabilities, and the limit
        // comparison at t = 100 is meaningful only when absorption happens
        // well before then (a mean hitting time of 2 leaves a tail below
        // exp(1 - 100/(2e)) at t = 100, far under the tolerance).
        let times = match expected_hitting_time(&generator, &space, false) {
            Ok(times) => times,
            Err(_) => return Ok(()),
        };
        if times.times().iter().any(|&t| t > 2.0) {
            return Ok(());
        }
        let pi0 = space.uniform_initial();
        let pi = integrate(&generator, &pi0, 100.0, &CmeOptions::default()).unwrap();
        let limit = dense_absorption_mass(&space, &generator, &pi0);
        let mut terminal_mass = 0.0;
        for i in 0..space.len() {
            if space.is_terminal(i) {
                terminal_mass += pi[i];
            }
        }
        prop_assert!(
            (terminal_mass - limit).abs() <= 1e-6,
            "integrated {terminal_mass} vs solved {limit}"
        );
    }

    #[test]
    fn doubling_volume_doubles_hitting_times(
        crn in arb_crn(),
        seed_index in 0usize..1000,
    ) {
        let (space, g1) = space_and_generator(&crn, seed_index, 6);
        let g2 = build_generator(&crn, &space, &crn.rates(), 2.0).unwrap();
        let t1 = match expected_hitting_time(&g1, &space, false) {
            Ok(t) => t,
            Err(CtmcError::NonAbsorbing { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let t2 = expected_hitting_time(&g2, &space, false).unwrap();
        for (i, (a, b)) in t1.times().iter().zip(t2.times()).enumerate() {
            prop_assert!((2.0 * a - b).abs() <= 1e-9 * (1.0 + b.abs()), "state {i}: {a} vs {b}");
        }
    }
}

/// Deterministically picks one nonterminal-ish initial state and builds the
/// reachable space and generator at unit volume.
fn space_and_generator(crn: &Crn, seed_index: usize, bound: u64) -> (StateSpace, Generator) {
    let candidates = all_states_up_to(crn.num_species(), bound);
    let nonzero: Vec<SysState> = candidates
        .into_iter()
        .filter(|s| s.total() >= 2)
        .collect();
    let state = nonzero[seed_index % nonzero.len()].clone();
    let space = build_state_space_from(crn, vec![state], 1_000_000).unwrap();
    let generator = build_generator(crn, &space, &crn.rates(), 1.0).unwrap();
    (space, generator)
}

/// Limit terminal mass by a dense linear solve, independent of the sparse
/// banded solver and of the integrator: absorption probabilities satisfy
/// `(-Q_TT) h = Q_TA 1` columnwise; here we only need the total.
fn dense_absorption_mass(space: &StateSpace, generator: &Generator, pi0: &[f64]) -> f64 {
    let n = space.len();
    let transient: Vec<usize> = (0..n).filter(|&i| !space.is_terminal(i)).collect();
    let m = transient.len();
    if m == 0 {
        return pi0.iter().sum();
    }
    let pos: std::collections::HashMap<usize, usize> = transient
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p))
        .collect();
    // Dense -Q over transient states; right-hand side is the rate into the
    // terminal set.
    let mut a = vec![vec![0.0f64; m]; m];
    let mut rhs = vec![0.0f64; m];
    for (p, &i) in transient.iter().enumerate() {
        for (j, q) in generator.matrix().row(i) {
            match pos.get(&j) {
                Some(&pj) => a[p][pj] -= q,
                None => rhs[p] += q,
            }
        }
    }
    // Gaussian elimination with partial pivoting.
    for k in 0..m {
        let pivot_row = (k..m)
            .max_by(|&x, &y| a[x][k].abs().partial_cmp(&a[y][k].abs()).unwrap())
            .unwrap();
        a.swap(k, pivot_row);
        rhs.swap(k, pivot_row);
        let pivot = a[k][k];
        for i in k + 1..m {
            let factor = a[i][k] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..m {
                a[i][j] -= factor * a[k][j];
            }
            rhs[i] -= factor * rhs[k];
        }
    }
    let mut h = vec![0.0f64; m];
    for k in (0..m).rev() {
        let mut acc = rhs[k];
        for j in k + 1..m {
            acc -= a[k][j] * h[j];
        }
        h[k] = acc / a[k][k];
    }
    // Total absorbed mass in the limit: terminal starts plus transient starts
    // weighted by their absorption probability (1 for absorbing chains, but
    // computed, not assumed).
    let mut total = 0.0;
    for i in 0..n {
        if space.is_terminal(i) {
            total += pi0[i];
        }
    }
    for (p, &i) in transient.iter().enumerate() {
        total += pi0[i] * h[p];
    }
    total
}

/// Closed-form expected absorption time for the symmetric two-species
/// competition chain at unit rates: the embedded chain is a simple random
/// walk, so expected visits to each interior level are known exactly.
#[test]
fn dc_hitting_times_match_birth_death_formula() {
    let crn = crnsynth::catalog::direct_competition_unit();
    for total in 2u64..=5 {
        let states: Vec<SysState> = states_with_total(2, total);
        let space = build_state_space_from(&crn, states, 1_000_000).unwrap();
        let generator = build_generator(&crn, &space, &[1.0, 1.0], 1.0).unwrap();
        let times = expected_hitting_time(&generator, &space, false).unwrap();
        for (i, state) in space.states().iter().enumerate() {
            let a = state.count(0);
            let n = total;
            let expected: f64 = (1..n)
                .map(|j| {
                    let visits =
                        2.0 * (a.min(j) as f64) * ((n - a.max(j)) as f64) / n as f64;
                    let holding = 1.0 / (2.0 * j as f64 * (n - j) as f64);
                    visits * holding
                })
                .sum();
            assert!(
                (times.time(i) - expected).abs() < 1e-9,
                "total {n}, A={a}: {} vs {expected}",
                times.time(i)
            );
        }
    }
}
