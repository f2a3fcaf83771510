//! Exact stochastic semantics of a network over its reachable states: state
//! space construction, sparse generator assembly, transient probabilities,
//! path-predicate scoring, and expected hitting times.

pub mod hitting;
pub mod sparse;
pub mod transient;

use std::collections::HashMap;
use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::crn::{Crn, CrnError, SysState};
use crate::predicate::{states_with_total, PathPredicate, PredicateError, StatePredicate};

pub use hitting::{expected_hitting_time, HittingTimes};
pub use sparse::CsrMatrix;
pub use transient::{integrate, CmeMethod, CmeOptions};

/// Scoring time used throughout the benchmark protocols.
pub const DEFAULT_T_FINAL: f64 = 100.0;

/// Default ceiling on reachable-state counts.
pub const DEFAULT_MAX_STATES: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum CtmcError {
    #[error("no state satisfies the initial predicate within the total bound")]
    EmptyInitialSet,
    #[error("state space exceeds the configured cap ({states} states, cap {cap})")]
    CapacityExceeded { states: usize, cap: usize },
    #[error("rate {0} must be strictly positive")]
    NonpositiveRate(f64),
    #[error("volume {0} must be strictly positive")]
    NonpositiveVolume(f64),
    #[error("state {state} cannot reach any terminal state")]
    NonAbsorbing { state: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Crn(#[from] CrnError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

/// The reachable states of a network from an initial set, closed under the
/// successor relation, with terminal states marked.
#[derive(Debug, Clone)]
pub struct StateSpace {
    states: Vec<SysState>,
    index: HashMap<SysState, usize>,
    initial: Vec<usize>,
    terminal: Vec<bool>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[SysState] {
        &self.states
    }

    pub fn index_of(&self, state: &SysState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_terminal(&self, index: usize) -> bool {
        self.terminal[index]
    }

    pub fn terminal_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.terminal[i]).collect()
    }

    /// The molecule total shared by every state, when they all agree.
    pub fn conserved_total(&self) -> Option<u64> {
        let mut totals = self.states.iter().map(|s| s.total());
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }

    /// Uniform distribution over the initial states.
    pub fn uniform_initial(&self) -> Vec<f64> {
        let mut probs = vec![0.0; self.len()];
        let weight = 1.0 / self.initial.len() as f64;
        for &i in &self.initial {
            probs[i] = weight;
        }
        probs
    }
}

/// Breadth-first closure of the states satisfying `initial` (with molecule
/// total at most `total_bound`) under single reaction firings.
pub fn build_state_space(
    crn: &Crn,
    initial: &StatePredicate,
    total_bound: u64,
) -> Result<StateSpace, CtmcError> {
    build_state_space_with(crn, initial, total_bound, DEFAULT_MAX_STATES)
}

pub fn build_state_space_with(
    crn: &Crn,
    initial: &StatePredicate,
    total_bound: u64,
    max_states: usize,
) -> Result<StateSpace, CtmcError> {
    let resolved = initial.resolve_for(crn)?;
    let mut initial_states: Vec<SysState> = Vec::new();
    for total in 0..=total_bound {
        for state in states_with_total(crn.num_species(), total) {
            if resolved.eval(&state) {
                initial_states.push(state);
            }
        }
    }
    if initial_states.is_empty() {
        return Err(CtmcError::EmptyInitialSet);
    }
    build_space_from(crn, initial_states, max_states)
}

/// State space from an explicit initial state list.
pub fn build_state_space_from(
    crn: &Crn,
    initial_states: Vec<SysState>,
    max_states: usize,
) -> Result<StateSpace, CtmcError> {
    if initial_states.is_empty() {
        return Err(CtmcError::EmptyInitialSet);
    }
    build_space_from(crn, initial_states, max_states)
}

fn build_space_from(
    crn: &Crn,
    initial_states: Vec<SysState>,
    max_states: usize,
) -> Result<StateSpace, CtmcError> {
    let mut states: Vec<SysState> = Vec::new();
    let mut index: HashMap<SysState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::with_capacity(initial_states.len());
    for state in initial_states {
        if !index.contains_key(&state) {
            let id = states.len();
            index.insert(state.clone(), id);
            states.push(state.clone());
            initial.push(id);
            queue.push_back(state);
        }
    }
    while let Some(state) = queue.pop_front() {
        for next in crn.successors(&state)? {
            if !index.contains_key(&next) {
                if states.len() >= max_states {
                    return Err(CtmcError::CapacityExceeded {
                        states: states.len() + 1,
                        cap: max_states,
                    });
                }
                index.insert(next.clone(), states.len());
                states.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    let terminal = states
        .iter()
        .map(|s| crn.is_terminal(s))
        .collect::<Result<Vec<bool>, CrnError>>()?;
    Ok(StateSpace {
        states,
        index,
        initial,
        terminal,
    })
}

/// Sparse infinitesimal generator over a state space: off-diagonal entries sum
/// the propensities of the reactions realizing each transition; diagonals make
/// rows sum to zero. Terminal states have all-zero rows.
#[derive(Debug, Clone)]
pub struct Generator {
    matrix: CsrMatrix,
    uniformization_rate: f64,
}

impl Generator {
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Largest exit rate over all states.
    pub fn uniformization_rate(&self) -> f64 {
        self.uniformization_rate
    }
}

/// Assembles the generator for the given rate vector and reaction volume
/// (every propensity is divided by the volume).
pub fn build_generator(
    crn: &Crn,
    space: &StateSpace,
    rates: &[f64],
    volume: f64,
) -> Result<Generator, CtmcError> {
    if rates.len() != crn.num_reactions() {
        return Err(CtmcError::DimensionMismatch {
            expected: crn.num_reactions(),
            got: rates.len(),
        });
    }
    for &k in rates {
        if k.is_nan() || k <= 0.0 {
            return Err(CtmcError::NonpositiveRate(k));
        }
    }
    if volume.is_nan() || volume <= 0.0 {
        return Err(CtmcError::NonpositiveVolume(volume));
    }
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(space.len());
    let mut max_exit = 0.0f64;
    for (i, state) in space.states().iter().enumerate() {
        let mut row: Vec<(usize, f64)> = Vec::new();
        let mut exit = 0.0;
        for (r, reaction) in crn.reactions().iter().enumerate() {
            let combinations = reaction.combinations(state);
            if combinations == 0.0 {
                continue;
            }
            let rate = rates[r] * combinations / volume;
            let next = crn.fire(r, state)?;
            let j = space.index_of(&next).ok_or_else(|| {
                CtmcError::Numerical(format!(
                    "state {next} reached from {state} is outside the space"
                ))
            })?;
            row.push((j, rate));
            exit += rate;
        }
        if exit > 0.0 {
            row.push((i, -exit));
        }
        debug_assert!(space.is_terminal(i) == (exit == 0.0));
        max_exit = max_exit.max(exit);
        rows.push(row);
    }
    Ok(Generator {
        matrix: CsrMatrix::from_rows(rows),
        uniformization_rate: max_exit,
    })
}

/// A transient probability vector tagged with its time.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub probs: Vec<f64>,
    pub time: f64,
}

/// Integrates the distribution to time `t`.
pub fn integrate_cme(
    generator: &Generator,
    initial: &Distribution,
    t: f64,
    options: &CmeOptions,
) -> Result<Distribution, CtmcError> {
    let probs = integrate(generator, &initial.probs, t, options)?;
    Ok(Distribution {
        probs,
        time: initial.time + t,
    })
}

/// Renders transient snapshots as CSV with columns `time,stateIndex,probability`,
/// optionally keeping only states that satisfy a goal predicate.
pub fn transient_csv(
    space: &StateSpace,
    snapshots: &[Distribution],
    goal_filter: Option<&crate::predicate::ResolvedPredicate>,
) -> String {
    let mut out = String::from("time,stateIndex,probability\n");
    for snapshot in snapshots {
        for (i, &p) in snapshot.probs.iter().enumerate() {
            if let Some(goal) = goal_filter {
                if !goal.eval(&space.states()[i]) {
                    continue;
                }
            }
            out.push_str(&format!("{},{i},{p}\n", snapshot.time));
        }
    }
    out
}

/// Options for path-predicate scoring.
#[derive(Debug, Clone, Copy)]
pub struct ScoreOptions {
    pub tol: f64,
    /// Count only terminal states among the goal states.
    pub terminal_only: bool,
    pub max_states: usize,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            terminal_only: false,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

/// Probability that the system satisfies the path predicate's goal at time
/// `t`, starting uniformly from the states satisfying its initial predicate.
pub fn probability_of(
    crn: &Crn,
    rates: &[f64],
    predicate: &PathPredicate,
    t: f64,
    total_bound: u64,
    options: &ScoreOptions,
) -> Result<f64, CtmcError> {
    let space = build_state_space_with(crn, &predicate.initial, total_bound, options.max_states)?;
    let generator = build_generator(crn, &space, rates, 1.0)?;
    let pi0 = space.uniform_initial();
    let pi_t = integrate(
        &generator,
        &pi0,
        t,
        &CmeOptions {
            tol: options.tol,
            method: CmeMethod::Auto,
        },
    )?;
    let goal = predicate.goal.resolve_for(crn)?;
    let mut mass = 0.0;
    for (i, state) in space.states().iter().enumerate() {
        if goal.eval(state) && (!options.terminal_only || space.is_terminal(i)) {
            mass += pi_t[i];
        }
    }
    Ok(mass)
}

/// Arithmetic mean of `probability_of` across the predicate list, with each
/// predicate's total bound derived from its initial predicate. Per-predicate
/// integrations run on the worker pool; the mean is combined in index order.
pub fn average_probability(
    crn: &Crn,
    rates: &[f64],
    predicates: &[PathPredicate],
    t: f64,
    options: &ScoreOptions,
) -> Result<f64, CtmcError> {
    if predicates.is_empty() {
        return Err(CtmcError::EmptyInitialSet);
    }
    let names: Vec<&str> = crn.species().iter().map(|s| s.name.as_str()).collect();
    let bounds: Vec<u64> = predicates
        .iter()
        .map(|p| {
            let resolved = p.initial.resolve(&names)?;
            Ok(crate::predicate::pinned_initial(&resolved, crn.num_species(), 64)?.total)
        })
        .collect::<Result<_, CtmcError>>()?;
    let per_predicate: Vec<Result<f64, CtmcError>> = predicates
        .par_iter()
        .zip(bounds.par_iter())
        .map(|(p, &bound)| probability_of(crn, rates, p, t, bound, options))
        .collect();
    let mut sum = 0.0;
    for value in per_predicate {
        sum += value?;
    }
    Ok(sum / predicates.len() as f64)
}
