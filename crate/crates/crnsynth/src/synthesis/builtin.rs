//! Builtin constraint solver: exhaustive search over the bounded integer
//! variables of an [`Encoding`].
//!
//! Structural candidates are enumerated as strictly increasing sequences of
//! stoichiometry rows (every constraint in the encoding is invariant under
//! reaction permutation, so one canonical representative per reaction set
//! suffices). A candidate is accepted only if every encoded constraint
//! evaluates to true under the assignment; path blocks are searched
//! depth-first over the step variables, binding candidate states and
//! multiplicities and letting the encoded transition constraint decide
//! admissibility.

use std::collections::HashSet;
use std::time::Instant;

use crate::predicate::states_with_total;
use crate::synthesis::encoding::{Encoding, PathBlock};
use crate::synthesis::SynthesisError;

/// One stoichiometry row candidate: `(reactants, products)`, both summing to 2.
#[derive(Debug, Clone)]
pub struct RowCandidate {
    pub reactants: Vec<u32>,
    pub products: Vec<u32>,
}

/// Result of one solver call.
#[derive(Debug)]
pub enum BuiltinStep {
    /// A satisfying assignment, given as stoichiometry rows in canonical order.
    Model(Vec<RowCandidate>),
    Unsat,
    TimedOut,
}

pub struct BuiltinSession {
    encoding: Encoding,
    rows: Vec<RowCandidate>,
    /// Strictly increasing row indices of the next candidate; `None` once the
    /// space is exhausted.
    cursor: Option<Vec<usize>>,
    /// Path block indices ordered by ascending molecule total, so cheap blocks
    /// reject bad candidates first.
    block_order: Vec<usize>,
    candidates_excluded: u64,
}

impl BuiltinSession {
    pub fn new(encoding: Encoding) -> Self {
        let n = encoding.num_species;
        let m = encoding.num_reactions;
        let mut rows = Vec::new();
        for reactants in states_with_total(n, 2) {
            for products in states_with_total(n, 2) {
                rows.push(RowCandidate {
                    reactants: reactants.counts().iter().map(|&c| c as u32).collect(),
                    products: products.counts().iter().map(|&c| c as u32).collect(),
                });
            }
        }
        let cursor = if m <= rows.len() {
            Some((0..m).collect())
        } else {
            None
        };
        let mut block_order: Vec<usize> = (0..encoding.paths.len()).collect();
        block_order.sort_by_key(|&i| encoding.paths[i].total);
        Self {
            encoding,
            rows,
            cursor,
            block_order,
            candidates_excluded: 0,
        }
    }

    pub fn encoding_mut(&mut self) -> &mut Encoding {
        &mut self.encoding
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn candidates_excluded(&self) -> u64 {
        self.candidates_excluded
    }

    /// Searches for the next satisfying assignment, starting from the cursor.
    pub fn next_model(&mut self, deadline: Option<Instant>) -> Result<BuiltinStep, SynthesisError> {
        let mut assignment = vec![0i64; self.encoding.vars.len()];
        while let Some(indices) = self.cursor.clone() {
            if let Some(deadline) = deadline {
                if Instant::now() >= deadline {
                    return Ok(BuiltinStep::TimedOut);
                }
            }
            let accepted = self.check_candidate(&indices, &mut assignment);
            let model = if accepted {
                Some(indices.iter().map(|&i| self.rows[i].clone()).collect())
            } else {
                self.candidates_excluded += 1;
                None
            };
            self.advance();
            if let Some(rows) = model {
                return Ok(BuiltinStep::Model(rows));
            }
        }
        Ok(BuiltinStep::Unsat)
    }

    fn advance(&mut self) {
        let Some(indices) = &mut self.cursor else {
            return;
        };
        let m = indices.len();
        let total = self.rows.len();
        let mut pos = m;
        loop {
            if pos == 0 {
                self.cursor = None;
                return;
            }
            pos -= 1;
            if indices[pos] < total - (m - pos) {
                indices[pos] += 1;
                for i in pos + 1..m {
                    indices[i] = indices[i - 1] + 1;
                }
                return;
            }
        }
    }

    fn check_candidate(&self, indices: &[usize], assignment: &mut [i64]) -> bool {
        for (r, &row_index) in indices.iter().enumerate() {
            let row = &self.rows[row_index];
            for s in 0..self.encoding.num_species {
                assignment[self.encoding.reactant_vars[r][s]] = row.reactants[s] as i64;
                assignment[self.encoding.product_vars[r][s]] = row.products[s] as i64;
            }
        }
        if !self
            .encoding
            .structural
            .iter()
            .all(|c| c.eval(assignment))
        {
            return false;
        }
        if !self
            .encoding
            .uniqueness
            .iter()
            .all(|c| c.eval(assignment))
        {
            return false;
        }
        let rows: Vec<&RowCandidate> = indices.iter().map(|&i| &self.rows[i]).collect();
        self.block_order
            .iter()
            .all(|&b| self.block_satisfiable(&self.encoding.paths[b], &rows, assignment))
    }

    fn block_satisfiable(
        &self,
        block: &PathBlock,
        rows: &[&RowCandidate],
        assignment: &mut [i64],
    ) -> bool {
        let n = self.encoding.num_species;
        let initial_states: Vec<Vec<i64>> = states_with_total(n, block.total)
            .into_iter()
            .map(|x| x.counts().iter().map(|&c| c as i64).collect::<Vec<i64>>())
            .filter(|x| {
                bind_state(assignment, &block.state_vars[0], x);
                block.initial.iter().all(|c| c.eval(assignment))
            })
            .collect();
        let mut failed: HashSet<(usize, Vec<i64>)> = HashSet::new();
        initial_states
            .into_iter()
            .any(|x| self.path_search(block, rows, assignment, &mut failed, 0, &x))
    }

    /// Depth-first search over steps `j..K`; candidate transitions are
    /// generated from the concrete rows and accepted only if the encoded step
    /// constraint evaluates to true under the binding.
    fn path_search(
        &self,
        block: &PathBlock,
        rows: &[&RowCandidate],
        assignment: &mut [i64],
        failed: &mut HashSet<(usize, Vec<i64>)>,
        step: usize,
        state: &[i64],
    ) -> bool {
        let k = self.encoding.max_steps;
        if step == k {
            bind_state(assignment, &block.state_vars[k], state);
            return block.goal.iter().all(|c| c.eval(assignment));
        }
        if failed.contains(&(step, state.to_vec())) {
            return false;
        }
        let max_mult = if self.encoding.stutter { block.total.max(1) } else { 1 };
        for (next, mult) in transition_candidates(rows, state, max_mult as i64) {
            bind_state(assignment, &block.state_vars[step], state);
            bind_state(assignment, &block.state_vars[step + 1], &next);
            if let Some(nv) = block.mult_vars[step] {
                assignment[nv] = mult;
            }
            if block.steps[step].eval(assignment)
                && self.path_search(block, rows, assignment, failed, step + 1, &next)
            {
                return true;
            }
        }
        failed.insert((step, state.to_vec()));
        false
    }
}

fn bind_state(assignment: &mut [i64], vars: &[crate::synthesis::constraint::VarId], state: &[i64]) {
    for (&v, &value) in vars.iter().zip(state) {
        assignment[v] = value;
    }
}

/// All candidate one-step transitions from `state`: the self-loop and every
/// `(reaction, multiplicity)` whose update stays nonnegative. The encoded
/// constraint is the final arbiter; this only has to cover every state the
/// step relation could accept.
fn transition_candidates(
    rows: &[&RowCandidate],
    state: &[i64],
    max_mult: i64,
) -> Vec<(Vec<i64>, i64)> {
    let mut out = Vec::new();
    // Terminal self-loop; the multiplicity binding is arbitrary.
    out.push((state.to_vec(), 1));
    for row in rows {
        for mult in 1..=max_mult {
            let mut next = Vec::with_capacity(state.len());
            let mut ok = true;
            for (s, &x) in state.iter().enumerate() {
                let v = x + mult * (row.products[s] as i64 - row.reactants[s] as i64);
                if v < 0 {
                    ok = false;
                    break;
                }
                next.push(v);
            }
            if !ok {
                // Larger multiplicities only consume more.
                break;
            }
            out.push((next, mult));
        }
    }
    out
}
