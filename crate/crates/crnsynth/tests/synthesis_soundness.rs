//! Cross-validation of the constraint pipeline against independent path
//! search, on the majority benchmark.

use std::collections::HashSet;

use crnsynth::crn::{Crn, SysState};
use crnsynth::predicate::PathPredicate;
use crnsynth::specs;
use crnsynth::synthesis::{enumerate_with, EnumerateOptions, SolverBackend, SynthesisProblem};

/// Direct breadth-first search over stutter transitions, independent of both
/// the constraint encoding and the oracle module (no total-bound cap).
fn reaches_terminal_goal(crn: &Crn, predicate: &PathPredicate, max_steps: usize) -> bool {
    let initial = predicate.initial.resolve_for(crn).unwrap();
    let goal = predicate.goal.resolve_for(crn).unwrap();
    let mut frontier: Vec<SysState> = Vec::new();
    // Benchmark initial predicates pin every species count, so scanning
    // totals up to a generous cap finds them all.
    for total in 0..=32 {
        for state in crnsynth::predicate::states_with_total(crn.num_species(), total) {
            if initial.eval(&state) {
                frontier.push(state);
            }
        }
    }
    let mut visited: HashSet<SysState> = frontier.iter().cloned().collect();
    for _ in 0..=max_steps {
        for state in &frontier {
            if goal.eval(state) && crn.is_terminal(state).unwrap() {
                return true;
            }
        }
        let mut next = Vec::new();
        for state in &frontier {
            for step in crn.stutter_successors(state).unwrap() {
                if step.reaction.is_some() && visited.insert(step.state.clone()) {
                    next.push(step.state);
                }
            }
        }
        frontier = next;
    }
    false
}

#[test]
fn majority_solutions_satisfy_every_input() {
    let grid = specs::paper_grids("am").unwrap();
    let predicates = specs::am_predicates(&grid, 3).unwrap();
    let problem =
        SynthesisProblem::new(3, 3, 5, predicates.clone(), vec![0, 1], vec![0, 1], true).unwrap();
    let outcome = enumerate_with(
        &problem,
        &SolverBackend::default(),
        &EnumerateOptions::default(),
    )
    .unwrap();
    assert!(!outcome.solutions.is_empty());
    for (i, crn) in outcome.solutions.iter().enumerate() {
        for predicate in &predicates {
            assert!(
                reaches_terminal_goal(crn, predicate, 5),
                "solution {i} fails a grid input:\n{crn}"
            );
        }
    }
    // No two solutions share a reaction multiset.
    for (i, a) in outcome.solutions.iter().enumerate() {
        for b in outcome.solutions.iter().skip(i + 1) {
            assert!(!a.same_structure(b));
        }
    }
}

#[test]
fn classic_three_species_majority_is_rediscovered_without_the_tie_input() {
    // With ties removed from the grid, the solution set must contain the
    // classic network {A+B -> 2X, A+X -> 2A, B+X -> 2B}.
    let pairs: Vec<(u64, u64)> = specs::paper_grids("am")
        .unwrap()
        .pairs()
        .iter()
        .copied()
        .filter(|&(a, b)| a != b)
        .collect();
    let grid = specs::InputGrid::new(pairs).unwrap();
    let predicates = specs::am_predicates(&grid, 3).unwrap();
    let problem = SynthesisProblem::new(3, 3, 5, predicates, vec![0, 1], vec![0, 1], true).unwrap();
    let outcome = enumerate_with(
        &problem,
        &SolverBackend::default(),
        &EnumerateOptions::default(),
    )
    .unwrap();
    let classic = crnsynth::catalog::tri_majority_unit();
    assert!(
        outcome
            .solutions
            .iter()
            .any(|crn| crn.same_structure(&classic)),
        "classic network missing among {} solutions",
        outcome.solutions.len()
    );
}

#[test]
fn classic_three_species_majority_fails_the_tie_input() {
    let grid = specs::InputGrid::new(vec![(1, 1)]).unwrap();
    let predicates = specs::am_predicates(&grid, 3).unwrap();
    let classic = crnsynth::catalog::tri_majority_unit();
    assert!(!reaches_terminal_goal(&classic, &predicates[0], 5));
}
