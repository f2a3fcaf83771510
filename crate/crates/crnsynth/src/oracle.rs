//! Brute-force ground truth for the synthesis pipeline: exhaustive network
//! enumeration at tiny bounds and explicit breadth-first path search, kept
//! deliberately independent of the constraint encoding.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::crn::{Crn, CrnError, Reaction};
use crate::predicate::{states_with_total, PathPredicate, PredicateError};
use crate::synthesis::SynthesisProblem;

/// Hard caps; the enumeration grows too fast beyond them to be a useful oracle.
pub const MAX_SPECIES: usize = 3;
pub const MAX_REACTIONS: usize = 3;
pub const MAX_TOTAL_BOUND: u64 = 12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle bounds exceeded: {0}")]
    BoundsExceeded(String),
    #[error(transparent)]
    Crn(#[from] CrnError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

/// The canonical space of distinct bimolecular reactions over `num_species`
/// species: every (reactant multiset, product multiset) pair with a net change.
#[derive(Debug, Clone)]
pub struct ReactionSpace {
    pub num_species: usize,
    pub reactions: Vec<Reaction>,
}

impl ReactionSpace {
    pub fn new(num_species: usize) -> Self {
        let sides: Vec<Vec<u32>> = states_with_total(num_species, 2)
            .into_iter()
            .map(|x| x.counts().iter().map(|&c| c as u32).collect())
            .collect();
        let mut reactions = Vec::new();
        for r in &sides {
            for p in &sides {
                if r != p {
                    reactions.push(Reaction::new(r.clone(), p.clone(), 1.0).unwrap());
                }
            }
        }
        Self {
            num_species,
            reactions,
        }
    }

    pub fn count(&self) -> usize {
        self.reactions.len()
    }

    /// The ordered-reactant-pair count `N^2 (N^2 - 1)`, reported for
    /// cross-reference; the canonical multiset space here is smaller.
    pub fn ordered_pair_count(&self) -> u64 {
        let n2 = (self.num_species * self.num_species) as u64;
        n2 * (n2 - 1)
    }

    /// Number of size-`m` subsets of a size-`n` set.
    pub fn choose(n: u64, m: u64) -> u64 {
        if m > n {
            return 0;
        }
        let mut result = 1u64;
        for i in 0..m {
            result = result * (n - i) / (i + 1);
        }
        result
    }
}

/// Every network with `num_reactions` distinct reactions over `num_species`
/// species, unit rates, no input/output labels.
pub fn all_crns(num_species: usize, num_reactions: usize) -> Result<Vec<Crn>, OracleError> {
    if num_species > MAX_SPECIES || num_reactions > MAX_REACTIONS {
        return Err(OracleError::BoundsExceeded(format!(
            "all_crns supports at most {MAX_SPECIES} species and {MAX_REACTIONS} reactions"
        )));
    }
    let space = ReactionSpace::new(num_species);
    let mut out = Vec::new();
    let mut indices: Vec<usize> = (0..num_reactions).collect();
    if num_reactions > space.count() {
        return Ok(out);
    }
    loop {
        let reactions: Vec<Reaction> = indices.iter().map(|&i| space.reactions[i].clone()).collect();
        out.push(Crn::with_canonical_species(
            num_species,
            reactions,
            Vec::new(),
            Vec::new(),
        )?);
        // Next strictly increasing index combination.
        let mut pos = num_reactions;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if indices[pos] < space.count() - (num_reactions - pos) {
                indices[pos] += 1;
                for i in pos + 1..num_reactions {
                    indices[i] = indices[i - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Breadth-first search over the stutter transition graph: true iff some state
/// satisfying the initial predicate reaches, within `max_steps` stutter steps,
/// a terminal state satisfying the final predicate. Shorter paths count.
pub fn brute_force_check(
    crn: &Crn,
    predicate: &PathPredicate,
    max_steps: usize,
    total_bound: u64,
) -> Result<bool, OracleError> {
    if total_bound > MAX_TOTAL_BOUND {
        return Err(OracleError::BoundsExceeded(format!(
            "total_bound {total_bound} exceeds {MAX_TOTAL_BOUND}"
        )));
    }
    let initial = predicate.initial.resolve_for(crn)?;
    let goal = predicate.goal.resolve_for(crn)?;

    let mut queue = VecDeque::new();
    let mut visited = HashSet::new();
    for total in 0..=total_bound {
        for state in states_with_total(crn.num_species(), total) {
            if initial.eval(&state) && visited.insert(state.clone()) {
                queue.push_back((state, 0usize));
            }
        }
    }
    while let Some((state, depth)) = queue.pop_front() {
        if crn.is_terminal(&state)? && goal.eval(&state) {
            return Ok(true);
        }
        if depth == max_steps {
            continue;
        }
        for step in crn.stutter_successors(&state)? {
            if step.reaction.is_some() && visited.insert(step.state.clone()) {
                queue.push_back((step.state, depth + 1));
            }
        }
    }
    Ok(false)
}

/// The exact satisfying set at the problem's bounds: all networks whose inputs
/// are consumed and outputs produced, and which pass `brute_force_check` for
/// every predicate.
pub fn exhaustive_synthesis(problem: &SynthesisProblem) -> Result<Vec<Crn>, OracleError> {
    let mut bounds = Vec::with_capacity(problem.predicates.len());
    for p in &problem.predicates {
        bounds.push(pinned_total_for(problem.num_species, p)?);
    }
    let mut out = Vec::new();
    for candidate in all_crns(problem.num_species, problem.num_reactions)? {
        let consumed = |s: usize| candidate.reactions().iter().any(|r| r.reactants()[s] > 0);
        let produced = |s: usize| candidate.reactions().iter().any(|r| r.products()[s] > 0);
        if !problem.inputs.iter().all(|&s| consumed(s))
            || !problem.outputs.iter().all(|&s| produced(s))
        {
            continue;
        }
        let mut ok = true;
        for (p, &bound) in problem.predicates.iter().zip(&bounds) {
            if !brute_force_check(&candidate, p, problem.max_steps, bound)? {
                ok = false;
                break;
            }
        }
        if ok {
            // Relabel with the problem's input/output species.
            out.push(Crn::with_canonical_species(
                problem.num_species,
                candidate.reactions().to_vec(),
                problem.inputs.clone(),
                problem.outputs.clone(),
            )?);
        }
    }
    Ok(out)
}

fn pinned_total_for(num_species: usize, predicate: &PathPredicate) -> Result<u64, OracleError> {
    let names: Vec<&str> = crate::crn::CANONICAL_NAMES
        .iter()
        .take(num_species)
        .copied()
        .collect();
    let resolved = predicate.initial.resolve(&names)?;
    let pinned = crate::predicate::pinned_initial(&resolved, num_species, MAX_TOTAL_BOUND)?;
    Ok(pinned.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::specs;

    #[test]
    fn reaction_space_sizes() {
        assert_eq!(ReactionSpace::new(2).count(), 6);
        assert_eq!(ReactionSpace::new(3).count(), 30);
        // Ordered-pair reference counts.
        assert_eq!(ReactionSpace::new(3).ordered_pair_count(), 72);
        assert_eq!(ReactionSpace::choose(72, 3), 59_640);
    }

    #[test]
    fn all_crn_counts() {
        assert_eq!(all_crns(2, 1).unwrap().len(), 6);
        assert_eq!(all_crns(2, 2).unwrap().len(), 15);
        assert!(all_crns(4, 2).is_err());
    }

    #[test]
    fn dc_satisfies_majority_path() {
        let crn = catalog::direct_competition_unit();
        let preds = specs::am_predicates(&specs::InputGrid::new(vec![(2, 1)]).unwrap(), 2).unwrap();
        assert!(brute_force_check(&crn, &preds[0], 5, 3).unwrap());
    }

    #[test]
    fn tri_majority_fails_tie_input() {
        let crn = catalog::tri_majority_unit();
        let preds = specs::am_predicates(&specs::InputGrid::new(vec![(1, 1)]).unwrap(), 3).unwrap();
        assert!(!brute_force_check(&crn, &preds[0], 5, 2).unwrap());
    }

    #[test]
    fn unsatisfiable_initial_is_false() {
        let crn = catalog::direct_competition_unit();
        let predicate = PathPredicate::new(
            crate::predicate::StatePredicate::Bool(false),
            crate::predicate::StatePredicate::Bool(true),
        );
        assert!(!brute_force_check(&crn, &predicate, 5, 6).unwrap());
    }

    #[test]
    fn check_is_monotone_in_steps() {
        let crn = catalog::direct_competition_unit();
        let preds = specs::am_predicates(&specs::InputGrid::new(vec![(3, 2)]).unwrap(), 2).unwrap();
        let mut seen_true = false;
        for k in 1..=6 {
            let now = brute_force_check(&crn, &preds[0], k, 5).unwrap();
            if seen_true {
                assert!(now, "satisfaction lost when steps grew to {k}");
            }
            seen_true |= now;
        }
        assert!(seen_true);
    }

    #[test]
    fn bound_cap_enforced() {
        let crn = catalog::direct_competition_unit();
        let preds = specs::am_predicates(&specs::InputGrid::new(vec![(2, 1)]).unwrap(), 2).unwrap();
        assert!(matches!(
            brute_force_check(&crn, &preds[0], 5, 13),
            Err(OracleError::BoundsExceeded(_))
        ));
    }

    #[test]
    fn unreachable_goal_yields_empty_set() {
        let predicates = vec![PathPredicate::new(
            crate::predicate::StatePredicate::parse("A = 2 && B = 1").unwrap(),
            crate::predicate::StatePredicate::parse("A = 1000").unwrap(),
        )];
        let problem =
            SynthesisProblem::new(2, 2, 5, predicates, vec![0, 1], vec![0, 1], true).unwrap();
        assert!(exhaustive_synthesis(&problem).unwrap().is_empty());
    }

    #[test]
    fn exhaustive_synthesis_order_invariant() {
        let grid = specs::InputGrid::new(vec![(2, 1), (1, 2), (1, 1)]).unwrap();
        let mut predicates = specs::am_predicates(&grid, 2).unwrap();
        let problem = SynthesisProblem::new(2, 2, 5, predicates.clone(), vec![0, 1], vec![0, 1], true)
            .unwrap();
        let forward = exhaustive_synthesis(&problem).unwrap();
        predicates.reverse();
        let problem_rev =
            SynthesisProblem::new(2, 2, 5, predicates, vec![0, 1], vec![0, 1], true).unwrap();
        let backward = exhaustive_synthesis(&problem_rev).unwrap();
        assert_eq!(forward.len(), backward.len());
        for crn in &forward {
            assert!(backward.iter().any(|other| crn.same_structure(other)));
        }
    }
}
