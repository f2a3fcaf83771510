//! Constraint-based synthesis of bimolecular networks from path predicates.
//!
//! The search space (given species count N, reaction count M, and path length
//! K) is encoded symbolically; a solver backend enumerates satisfying
//! stoichiometry assignments, and a uniqueness constraint excludes each found
//! network (and its reaction permutations) before the next round.

pub mod builtin;
pub mod constraint;
pub mod encoding;
pub mod process;
pub mod smtlib;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::crn::{Crn, CrnError, Reaction, CANONICAL_NAMES};
use crate::predicate::PathPredicate;

use self::builtin::{BuiltinSession, BuiltinStep};
use self::encoding::Encoding;
use self::process::{ExternalSession, ExternalStep};
use self::smtlib::{assert_sexpr, emit_declarations, emit_get_value, emit_smtlib};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("backend error: {message}")]
    Backend { message: String, transcript: String },
    #[error("network construction failed: {0}")]
    Crn(#[from] CrnError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A synthesis instance: search-space bounds plus the path predicates every
/// solution must admit.
#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub num_species: usize,
    pub num_reactions: usize,
    pub max_steps: usize,
    pub predicates: Vec<PathPredicate>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub stutter: bool,
}

impl SynthesisProblem {
    pub fn new(
        num_species: usize,
        num_reactions: usize,
        max_steps: usize,
        predicates: Vec<PathPredicate>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        stutter: bool,
    ) -> Result<Self, SynthesisError> {
        if num_species < 1 || num_species > CANONICAL_NAMES.len() {
            return Err(SynthesisError::InvalidProblem(format!(
                "species count must be between 1 and {}",
                CANONICAL_NAMES.len()
            )));
        }
        if num_reactions < 1 {
            return Err(SynthesisError::InvalidProblem(
                "reaction count must be at least 1".to_string(),
            ));
        }
        if max_steps < 1 {
            return Err(SynthesisError::InvalidProblem(
                "step count must be at least 1".to_string(),
            ));
        }
        if inputs.iter().chain(&outputs).any(|&s| s >= num_species) {
            return Err(SynthesisError::InvalidProblem(
                "input/output species index out of range".to_string(),
            ));
        }
        Ok(Self {
            num_species,
            num_reactions,
            max_steps,
            predicates,
            inputs,
            outputs,
            stutter,
        })
    }

    pub fn with_max_steps(&self, max_steps: usize) -> Self {
        let mut p = self.clone();
        p.max_steps = max_steps;
        p
    }
}

/// Default per-enumeration timeout.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(2 * 60 * 60);

/// Solver backend selection: an external SMT process speaking SMT-LIB 2 over
/// its standard streams, or the builtin exhaustive solver.
#[derive(Debug, Clone)]
pub enum SolverBackend {
    External {
        command: String,
        args: Vec<String>,
        timeout: Duration,
    },
    Builtin {
        timeout: Duration,
    },
}

impl Default for SolverBackend {
    fn default() -> Self {
        SolverBackend::Builtin {
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

impl SolverBackend {
    pub fn external(command: impl Into<String>, args: Vec<String>) -> Self {
        SolverBackend::External {
            command: command.into(),
            args,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(self, timeout: Duration) -> Self {
        match self {
            SolverBackend::External { command, args, .. } => SolverBackend::External {
                command,
                args,
                timeout,
            },
            SolverBackend::Builtin { .. } => SolverBackend::Builtin { timeout },
        }
    }

    fn timeout(&self) -> Duration {
        match self {
            SolverBackend::External { timeout, .. } | SolverBackend::Builtin { timeout } => {
                *timeout
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisStatus {
    /// The final solver call proved the constraints unsatisfiable.
    Exhausted,
    SolutionLimitReached,
    Timeout,
}

#[derive(Debug, Clone, Default)]
pub struct SynthesisStats {
    /// Wall seconds of the solver call that produced each solution.
    pub solve_seconds: Vec<f64>,
    /// Candidates rejected by the builtin solver (absent for external solvers).
    pub candidates_excluded: Option<u64>,
    pub wall_seconds: f64,
}

#[derive(Debug)]
pub struct SynthesisOutcome {
    /// Solutions in discovery order, pairwise distinct as reaction multisets,
    /// with all rates 1.0.
    pub solutions: Vec<Crn>,
    pub status: SynthesisStatus,
    pub stats: SynthesisStats,
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    pub max_solutions: Option<usize>,
    /// Dump the SMT-LIB script of every round into this directory.
    pub dump_dir: Option<PathBuf>,
}

/// Enumerates satisfying networks until the constraints become unsatisfiable,
/// `max_solutions` is reached, or the backend times out.
pub fn enumerate(
    problem: &SynthesisProblem,
    backend: &SolverBackend,
    max_solutions: usize,
) -> Result<SynthesisOutcome, SynthesisError> {
    if max_solutions < 1 {
        return Err(SynthesisError::InvalidProblem(
            "max_solutions must be at least 1".to_string(),
        ));
    }
    enumerate_with(
        problem,
        backend,
        &EnumerateOptions {
            max_solutions: Some(max_solutions),
            dump_dir: None,
        },
    )
}

pub fn enumerate_with(
    problem: &SynthesisProblem,
    backend: &SolverBackend,
    options: &EnumerateOptions,
) -> Result<SynthesisOutcome, SynthesisError> {
    let start = Instant::now();
    let deadline = Some(start + backend.timeout());
    let max_solutions = options.max_solutions.unwrap_or(usize::MAX);

    let mut encoding = Encoding::build(problem)?;
    let mut session = match backend {
        SolverBackend::Builtin { .. } => Session::Builtin(BuiltinSession::new(encoding.clone())),
        SolverBackend::External { command, args, .. } => {
            let script = format!(
                "(set-option :produce-models true)\n(set-logic QF_LIA)\n{}{}",
                emit_declarations(&encoding.vars),
                encoding
                    .all_constraints()
                    .iter()
                    .map(|c| format!("{}\n", assert_sexpr(c, &encoding.vars)))
                    .collect::<String>()
            );
            Session::External(ExternalSession::spawn(
                command,
                args,
                &script,
                &emit_get_value(&encoding),
            )?)
        }
    };

    let mut solutions: Vec<Crn> = Vec::new();
    let mut stats = SynthesisStats::default();
    let status = loop {
        if let Some(dir) = &options.dump_dir {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("round_{:03}.smt2", solutions.len()));
            std::fs::write(path, emit_smtlib(&encoding))?;
        }
        let round_start = Instant::now();
        let step = session.next_model(deadline)?;
        match step {
            Step::Unsat => break SynthesisStatus::Exhausted,
            Step::TimedOut => break SynthesisStatus::Timeout,
            Step::Model(rows) => {
                let crn = crn_from_rows(problem, rows, session.transcript())?;
                stats.solve_seconds.push(round_start.elapsed().as_secs_f64());
                solutions.push(crn);
                let just_found = &solutions[solutions.len() - 1..];
                encoding.add_uniqueness(just_found);
                session.add_uniqueness(&mut encoding, just_found)?;
                if solutions.len() >= max_solutions {
                    break SynthesisStatus::SolutionLimitReached;
                }
            }
        }
    };

    stats.wall_seconds = start.elapsed().as_secs_f64();
    stats.candidates_excluded = match &session {
        Session::Builtin(s) => Some(s.candidates_excluded()),
        Session::External(_) => None,
    };
    Ok(SynthesisOutcome {
        solutions,
        status,
        stats,
    })
}

/// Solution counts for `max_steps = problem.max_steps ..= max_k`, one full
/// enumeration per bound.
pub struct KSweepPoint {
    pub max_steps: usize,
    pub outcome: SynthesisOutcome,
}

pub fn increment_k(
    problem: &SynthesisProblem,
    backend: &SolverBackend,
    max_k: usize,
) -> Result<Vec<KSweepPoint>, SynthesisError> {
    if max_k < problem.max_steps {
        return Err(SynthesisError::InvalidProblem(
            "max_k must be at least the problem's step bound".to_string(),
        ));
    }
    // The cells are independent (each enumeration owns its backend session),
    // so they run on the worker pool; results are collected in K order.
    use rayon::prelude::*;
    (problem.max_steps..=max_k)
        .into_par_iter()
        .map(|k| {
            let outcome = enumerate_with(
                &problem.with_max_steps(k),
                backend,
                &EnumerateOptions::default(),
            )?;
            Ok(KSweepPoint {
                max_steps: k,
                outcome,
            })
        })
        .collect()
}

enum Session {
    Builtin(BuiltinSession),
    External(ExternalSession),
}

enum Step {
    Model(Vec<(Vec<u32>, Vec<u32>)>),
    Unsat,
    TimedOut,
}

impl Session {
    fn next_model(&mut self, deadline: Option<Instant>) -> Result<Step, SynthesisError> {
        match self {
            Session::Builtin(s) => Ok(match s.next_model(deadline)? {
                BuiltinStep::Model(rows) => Step::Model(
                    rows.into_iter()
                        .map(|row| (row.reactants, row.products))
                        .collect(),
                ),
                BuiltinStep::Unsat => Step::Unsat,
                BuiltinStep::TimedOut => Step::TimedOut,
            }),
            Session::External(s) => match s.next_model(deadline)? {
                ExternalStep::Model(values) => Ok(Step::Model(rows_from_values(values)?)),
                ExternalStep::Unsat => Ok(Step::Unsat),
                ExternalStep::TimedOut => Ok(Step::TimedOut),
            },
        }
    }

    fn add_uniqueness(
        &mut self,
        encoding: &mut Encoding,
        just_found: &[Crn],
    ) -> Result<(), SynthesisError> {
        match self {
            Session::Builtin(s) => {
                s.encoding_mut().add_uniqueness(just_found);
                Ok(())
            }
            Session::External(s) => {
                let constraint = &encoding.uniqueness[encoding.uniqueness.len() - 1];
                let text = assert_sexpr(constraint, &encoding.vars);
                s.add_assert(&text)
            }
        }
    }

    fn transcript(&self) -> String {
        match self {
            Session::Builtin(_) => String::new(),
            Session::External(s) => s.transcript().to_string(),
        }
    }
}

type StoichRows = Vec<(Vec<u32>, Vec<u32>)>;

/// Parses `r_i_s` / `p_i_s` bindings into stoichiometry rows.
fn rows_from_values(values: Vec<(String, i64)>) -> Result<StoichRows, SynthesisError> {
    let mut reactants: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut products: Vec<Vec<(usize, u32)>> = Vec::new();
    for (name, value) in &values {
        let mut parts = name.split('_');
        let kind = parts.next().unwrap_or("");
        let (Some(Ok(r)), Some(Ok(s))) = (
            parts.next().map(str::parse::<usize>),
            parts.next().map(str::parse::<usize>),
        ) else {
            return Err(SynthesisError::Backend {
                message: format!("unexpected variable `{name}` in model"),
                transcript: String::new(),
            });
        };
        if *value < 0 || *value > 2 {
            return Err(SynthesisError::Backend {
                message: format!("stoichiometry value {value} for `{name}` out of range"),
                transcript: String::new(),
            });
        }
        let target = match kind {
            "r" => &mut reactants,
            "p" => &mut products,
            _ => {
                return Err(SynthesisError::Backend {
                    message: format!("unexpected variable `{name}` in model"),
                    transcript: String::new(),
                })
            }
        };
        if target.len() <= r {
            target.resize(r + 1, Vec::new());
        }
        target[r].push((s, *value as u32));
    }
    let collect = |mut rows: Vec<Vec<(usize, u32)>>| -> Vec<Vec<u32>> {
        rows.iter_mut()
            .map(|row| {
                row.sort_by_key(|&(s, _)| s);
                row.iter().map(|&(_, v)| v).collect()
            })
            .collect()
    };
    Ok(collect(reactants)
        .into_iter()
        .zip(collect(products))
        .collect())
}

/// Builds the solution network from stoichiometry rows, in canonical
/// lexicographic reaction order, with all rates 1.0.
fn crn_from_rows(
    problem: &SynthesisProblem,
    mut rows: Vec<(Vec<u32>, Vec<u32>)>,
    transcript: String,
) -> Result<Crn, SynthesisError> {
    rows.sort();
    let reactions: Result<Vec<Reaction>, CrnError> = rows
        .into_iter()
        .map(|(r, p)| Reaction::new(r, p, 1.0))
        .collect();
    let build = reactions.and_then(|reactions| {
        Crn::with_canonical_species(
            problem.num_species,
            reactions,
            problem.inputs.clone(),
            problem.outputs.clone(),
        )
    });
    build.map_err(|e| SynthesisError::Backend {
        message: format!("model extraction failed: {e}"),
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::specs;
    use crate::synthesis::smtlib::emit_smtlib;

    fn am_problem(pairs: Vec<(u64, u64)>, m: usize, k: usize) -> SynthesisProblem {
        let grid = specs::InputGrid::new(pairs).unwrap();
        let predicates = specs::am_predicates(&grid, 2).unwrap();
        SynthesisProblem::new(2, m, k, predicates, vec![0, 1], vec![0, 1], true).unwrap()
    }

    #[test]
    fn zero_max_solutions_rejected() {
        let problem = am_problem(vec![(2, 1)], 2, 2);
        assert!(matches!(
            enumerate(&problem, &SolverBackend::default(), 0),
            Err(SynthesisError::InvalidProblem(_))
        ));
    }

    #[test]
    fn zero_steps_rejected() {
        let grid = specs::InputGrid::new(vec![(2, 1)]).unwrap();
        let predicates = specs::am_predicates(&grid, 2).unwrap();
        assert!(matches!(
            SynthesisProblem::new(2, 2, 0, predicates, vec![0, 1], vec![0, 1], true),
            Err(SynthesisError::InvalidProblem(_))
        ));
    }

    #[test]
    fn structural_row_sum_count() {
        let problem = am_problem(vec![(2, 1)], 2, 2);
        let encoding = Encoding::build(&problem).unwrap();
        // Row sums (4) + inputs (2) + outputs (2) + distinctness (1) + net change (2).
        assert_eq!(encoding.structural.len(), 11);
        let row_sums = encoding
            .structural
            .iter()
            .take(4)
            .filter(|c| {
                matches!(
                    c,
                    crate::synthesis::constraint::Constraint::Cmp(
                        crate::predicate::CmpOp::Eq,
                        _,
                        _
                    )
                )
            })
            .count();
        assert_eq!(row_sums, 4);
    }

    #[test]
    fn dc_assignment_satisfies_structure() {
        let problem = am_problem(vec![(2, 1)], 2, 2);
        let encoding = Encoding::build(&problem).unwrap();
        let mut assignment = vec![0i64; encoding.vars.len()];
        // DC: A+B -> 2B, A+B -> 2A.
        let dc = [([1, 1], [0, 2]), ([1, 1], [2, 0])];
        for (r, (reactants, products)) in dc.iter().enumerate() {
            for s in 0..2 {
                assignment[encoding.reactant_vars[r][s]] = reactants[s];
                assignment[encoding.product_vars[r][s]] = products[s];
            }
        }
        assert!(encoding.structural.iter().all(|c| c.eval(&assignment)));
        // Two identical reactions violate distinctness.
        for s in 0..2 {
            assignment[encoding.reactant_vars[1][s]] = assignment[encoding.reactant_vars[0][s]];
            assignment[encoding.product_vars[1][s]] = assignment[encoding.product_vars[0][s]];
        }
        assert!(!encoding.structural.iter().all(|c| c.eval(&assignment)));
    }

    #[test]
    fn uniqueness_excludes_permutations() {
        let problem = am_problem(vec![(2, 1)], 2, 2);
        let mut encoding = Encoding::build(&problem).unwrap();
        assert!(encoding.uniqueness.is_empty());
        encoding.add_uniqueness(&[catalog::direct_competition_unit()]);
        assert_eq!(encoding.uniqueness.len(), 1);
        let mut assignment = vec![0i64; encoding.vars.len()];
        // DC with its reactions swapped.
        let swapped = [([1, 1], [2, 0]), ([1, 1], [0, 2])];
        for (r, (reactants, products)) in swapped.iter().enumerate() {
            for s in 0..2 {
                assignment[encoding.reactant_vars[r][s]] = reactants[s];
                assignment[encoding.product_vars[r][s]] = products[s];
            }
        }
        assert!(!encoding.uniqueness[0].eval(&assignment));
        // A network differing in one reaction is not excluded.
        assignment[encoding.product_vars[1][0]] = 1;
        assignment[encoding.product_vars[1][1]] = 1;
        assert!(encoding.uniqueness[0].eval(&assignment));
    }

    #[test]
    fn smtlib_emission_is_deterministic() {
        let problem = am_problem(vec![(2, 1), (1, 2), (2, 2)], 2, 3);
        let mut a = Encoding::build(&problem).unwrap();
        let mut b = Encoding::build(&problem).unwrap();
        assert_eq!(emit_smtlib(&a), emit_smtlib(&b));
        a.add_uniqueness(&[catalog::direct_competition_unit()]);
        b.add_uniqueness(&[catalog::direct_competition_unit()]);
        assert_eq!(emit_smtlib(&a), emit_smtlib(&b));
    }

    #[test]
    fn smtlib_script_declares_stoichiometry_matrix() {
        let problem = am_problem(vec![(2, 1)], 2, 2);
        let script = emit_smtlib(&Encoding::build(&problem).unwrap());
        let declared = script
            .lines()
            .filter(|l| l.starts_with("(declare-fun r_") || l.starts_with("(declare-fun p_"))
            .count();
        assert_eq!(declared, 8);
        assert!(script.contains("(check-sat)"));
        assert!(script.contains("(get-value"));
    }

    #[test]
    fn single_reaction_majority_instance() {
        // With one reaction consuming both inputs and producing A, only
        // A+B -> 2A reaches an all-A terminal from (2,1).
        let grid = specs::InputGrid::new(vec![(2, 1)]).unwrap();
        let predicates = specs::am_predicates(&grid, 2).unwrap();
        let problem =
            SynthesisProblem::new(2, 1, 5, predicates, vec![0, 1], vec![0], true).unwrap();
        let outcome = enumerate(&problem, &SolverBackend::default(), 10).unwrap();
        assert_eq!(outcome.status, SynthesisStatus::Exhausted);
        assert_eq!(outcome.solutions.len(), 1);
        let reaction = &outcome.solutions[0].reactions()[0];
        assert_eq!(reaction.reactants(), &[1, 1]);
        assert_eq!(reaction.products(), &[2, 0]);
    }

    #[test]
    fn solution_limit_status() {
        // Unconstrained goal: plenty of solutions; stop after one.
        let grid = specs::InputGrid::new(vec![(1, 1)]).unwrap();
        let mut predicates = specs::am_predicates(&grid, 2).unwrap();
        predicates[0].goal = crate::predicate::StatePredicate::Bool(true);
        let problem =
            SynthesisProblem::new(2, 2, 3, predicates, vec![0, 1], vec![0, 1], true).unwrap();
        let outcome = enumerate(&problem, &SolverBackend::default(), 1).unwrap();
        assert_eq!(outcome.status, SynthesisStatus::SolutionLimitReached);
        assert_eq!(outcome.solutions.len(), 1);
    }

    #[test]
    fn expired_timeout_reports_timeout() {
        let problem = am_problem(vec![(2, 1)], 2, 3);
        let backend = SolverBackend::default().with_timeout(Duration::ZERO);
        let outcome = enumerate(&problem, &backend, 10).unwrap();
        assert_eq!(outcome.status, SynthesisStatus::Timeout);
        assert!(outcome.solutions.is_empty());
    }

    #[test]
    fn sweep_counts_are_monotone() {
        let problem = am_problem(vec![(3, 1), (1, 3), (2, 2)], 2, 1);
        let points = increment_k(&problem, &SolverBackend::default(), 4).unwrap();
        let counts: Vec<usize> = points.iter().map(|p| p.outcome.solutions.len()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(points.first().unwrap().max_steps, 1);
        assert_eq!(points.last().unwrap().max_steps, 4);
    }

    #[test]
    fn no_stutter_still_finds_short_paths() {
        // (3,1) needs one firing to reach (4,0); with K=3 and single firings
        // the terminal self-loop pads the remaining steps.
        let grid = specs::InputGrid::new(vec![(3, 1)]).unwrap();
        let predicates = specs::am_predicates(&grid, 2).unwrap();
        let problem =
            SynthesisProblem::new(2, 1, 3, predicates, vec![0, 1], vec![0], false).unwrap();
        let outcome = enumerate(&problem, &SolverBackend::default(), 10).unwrap();
        assert_eq!(outcome.solutions.len(), 1);
    }

    #[test]
    fn unpinned_initial_total_is_an_encoding_error() {
        let predicates = vec![crate::predicate::PathPredicate::new(
            crate::predicate::StatePredicate::parse("A >= 1").unwrap(),
            crate::predicate::StatePredicate::Bool(true),
        )];
        let problem =
            SynthesisProblem::new(2, 2, 2, predicates, vec![0, 1], vec![0, 1], true).unwrap();
        assert!(matches!(
            Encoding::build(&problem),
            Err(SynthesisError::Encoding(_))
        ));
    }

    #[test]
    fn too_few_steps_yield_no_solutions() {
        // One firing moves at most two molecules into X, so X = 4 is out of
        // reach from X = 0 in a single plain step for every reaction set.
        let predicates = vec![crate::predicate::PathPredicate::new(
            crate::predicate::StatePredicate::parse("A = 2 && B = 2 && X = 0").unwrap(),
            crate::predicate::StatePredicate::parse("X = 4").unwrap(),
        )];
        let problem =
            SynthesisProblem::new(3, 2, 1, predicates.clone(), vec![0, 1], vec![2], false)
                .unwrap();
        let outcome = enumerate(&problem, &SolverBackend::default(), 100).unwrap();
        assert_eq!(outcome.status, SynthesisStatus::Exhausted);
        assert!(outcome.solutions.is_empty());
        // Two steps make it reachable.
        let problem =
            SynthesisProblem::new(3, 2, 2, predicates, vec![0, 1], vec![2], false).unwrap();
        let outcome = enumerate(&problem, &SolverBackend::default(), 100).unwrap();
        assert!(!outcome.solutions.is_empty());
    }

    #[test]
    fn stutter_weakly_extends_no_stutter() {
        // Every plain path is a stutter path, so the stutter solution set
        // contains the plain one at the same bound.
        let problem_plain = {
            let mut p = am_problem(vec![(3, 2), (2, 3)], 2, 3);
            p.stutter = false;
            p
        };
        let problem_stutter = am_problem(vec![(3, 2), (2, 3)], 2, 3);
        let plain = enumerate(&problem_plain, &SolverBackend::default(), 100).unwrap();
        let stutter = enumerate(&problem_stutter, &SolverBackend::default(), 100).unwrap();
        for crn in &plain.solutions {
            assert!(stutter.solutions.iter().any(|s| s.same_structure(crn)));
        }
    }
}
