//! Constraint encoding of the synthesis problem: symbolic stoichiometry
//! matrices, structural constraints, unrolled path constraints per predicate,
//! and uniqueness constraints over previously found networks.

use crate::crn::{Crn, CANONICAL_NAMES};
use crate::predicate::{pinned_initial, ArithExpr, StatePredicate};
use crate::synthesis::constraint::{Constraint, Term, VarId, VarTable};
use crate::synthesis::{SynthesisError, SynthesisProblem};

/// Totals are scanned up to this cap when deriving the molecule total pinned
/// down by an initial predicate.
pub const INITIAL_TOTAL_CAP: u64 = 64;

/// Symbolic encoding of one synthesis problem instance.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub num_species: usize,
    pub num_reactions: usize,
    pub max_steps: usize,
    pub stutter: bool,
    pub vars: VarTable,
    /// `reactant_vars[r][s]` and `product_vars[r][s]` are the symbolic
    /// stoichiometry entries.
    pub reactant_vars: Vec<Vec<VarId>>,
    pub product_vars: Vec<Vec<VarId>>,
    /// Structural constraints: bimolecular row sums, input consumption,
    /// output production, pairwise distinctness, per-reaction net change.
    pub structural: Vec<Constraint>,
    /// One block of path constraints per path predicate.
    pub paths: Vec<PathBlock>,
    /// One constraint per previously found network.
    pub uniqueness: Vec<Constraint>,
}

/// Unrolled path constraints for one path predicate.
#[derive(Debug, Clone)]
pub struct PathBlock {
    /// Molecule total pinned by the initial predicate; bounds every state
    /// variable and every stutter multiplicity in this block.
    pub total: u64,
    /// `state_vars[j][s]` for steps `j = 0..=K`.
    pub state_vars: Vec<Vec<VarId>>,
    /// Stutter multiplicity variable per step (absent without stutter mode).
    pub mult_vars: Vec<Option<VarId>>,
    /// Initial predicate over step-0 state variables.
    pub initial: Vec<Constraint>,
    /// One transition constraint per step.
    pub steps: Vec<Constraint>,
    /// Final predicate plus terminality over step-K state variables.
    pub goal: Vec<Constraint>,
}

impl Encoding {
    /// Encodes the structure and every path predicate of `problem`.
    pub fn build(problem: &SynthesisProblem) -> Result<Self, SynthesisError> {
        let n = problem.num_species;
        let m = problem.num_reactions;
        let k = problem.max_steps;
        let mut vars = VarTable::default();

        let mut reactant_vars = Vec::with_capacity(m);
        let mut product_vars = Vec::with_capacity(m);
        for r in 0..m {
            reactant_vars.push(
                (0..n)
                    .map(|s| vars.declare(format!("r_{r}_{s}"), 0, 2))
                    .collect::<Vec<_>>(),
            );
        }
        for r in 0..m {
            product_vars.push(
                (0..n)
                    .map(|s| vars.declare(format!("p_{r}_{s}"), 0, 2))
                    .collect::<Vec<_>>(),
            );
        }

        let structural = encode_structure(problem, &reactant_vars, &product_vars);

        let mut encoding = Self {
            num_species: n,
            num_reactions: m,
            max_steps: k,
            stutter: problem.stutter,
            vars,
            reactant_vars,
            product_vars,
            structural,
            paths: Vec::new(),
            uniqueness: Vec::new(),
        };
        for index in 0..problem.predicates.len() {
            let block = encode_trajectory(problem, index, &mut encoding)?;
            encoding.paths.push(block);
        }
        Ok(encoding)
    }

    /// Appends one `DifferentFrom` constraint per previously found network.
    pub fn add_uniqueness(&mut self, previous: &[Crn]) {
        let mut constraints = encode_uniqueness(self, previous);
        self.uniqueness.append(&mut constraints);
    }

    /// All constraints in emission order: structural, per-path blocks
    /// (initial, steps, goal), then uniqueness.
    pub fn all_constraints(&self) -> Vec<&Constraint> {
        let mut out: Vec<&Constraint> = self.structural.iter().collect();
        for block in &self.paths {
            out.extend(block.initial.iter());
            out.extend(block.steps.iter());
            out.extend(block.goal.iter());
        }
        out.extend(self.uniqueness.iter());
        out
    }

    /// `Terminal(x)`: every reaction lacks some reactant in the state bound to
    /// `state_vars`.
    pub fn terminal_constraint(&self, state_vars: &[VarId]) -> Constraint {
        terminal_constraint(&self.reactant_vars, state_vars)
    }
}

/// Structural constraints over the symbolic stoichiometry matrices.
pub fn encode_structure(
    problem: &SynthesisProblem,
    reactant_vars: &[Vec<VarId>],
    product_vars: &[Vec<VarId>],
) -> Vec<Constraint> {
    let m = problem.num_reactions;
    let n = problem.num_species;
    let mut out = Vec::new();

    // Bimolecular: every row of r and p sums to 2.
    for matrix in [reactant_vars, product_vars] {
        for row in matrix.iter() {
            let sum = Term::sum(row.iter().map(|&v| Term::var(v)).collect());
            out.push(sum.eq(Term::Const(2)));
        }
    }
    // Each input species is consumed by at least one reaction.
    for &s in &problem.inputs {
        out.push(Constraint::or(
            (0..m)
                .map(|r| Term::var(reactant_vars[r][s]).gt(Term::Const(0)))
                .collect(),
        ));
    }
    // Each output species is produced by at least one reaction.
    for &s in &problem.outputs {
        out.push(Constraint::or(
            (0..m)
                .map(|r| Term::var(product_vars[r][s]).gt(Term::Const(0)))
                .collect(),
        ));
    }
    // No two reactions share both reactant and product vectors.
    for r1 in 0..m {
        for r2 in r1 + 1..m {
            out.push(Constraint::or(
                (0..n)
                    .flat_map(|s| {
                        [
                            Term::var(reactant_vars[r1][s]).ne(Term::var(reactant_vars[r2][s])),
                            Term::var(product_vars[r1][s]).ne(Term::var(product_vars[r2][s])),
                        ]
                    })
                    .collect(),
            ));
        }
    }
    // Every reaction changes the state.
    for r in 0..m {
        out.push(Constraint::or(
            (0..n)
                .map(|s| Term::var(product_vars[r][s]).ne(Term::var(reactant_vars[r][s])))
                .collect(),
        ));
    }
    out
}

/// Unrolls the transition relation for predicate `index` and asserts the
/// initial predicate, the final predicate, and terminality of the last state.
pub fn encode_trajectory(
    problem: &SynthesisProblem,
    index: usize,
    encoding: &mut Encoding,
) -> Result<PathBlock, SynthesisError> {
    let n = problem.num_species;
    let k = problem.max_steps;
    let predicate = &problem.predicates[index];
    let names: Vec<&str> = CANONICAL_NAMES.iter().take(n).copied().collect();

    let resolved_initial = predicate
        .initial
        .resolve(&names)
        .map_err(|e| SynthesisError::Encoding(e.to_string()))?;
    let pinned = pinned_initial(&resolved_initial, n, INITIAL_TOTAL_CAP)
        .map_err(|e| SynthesisError::Encoding(format!("predicate {index}: {e}")))?;
    let total = pinned.total;

    let mut state_vars = Vec::with_capacity(k + 1);
    for j in 0..=k {
        state_vars.push(
            (0..n)
                .map(|s| {
                    encoding
                        .vars
                        .declare(format!("x_{index}_{j}_{s}"), 0, total as i64)
                })
                .collect::<Vec<_>>(),
        );
    }
    let mut mult_vars = Vec::with_capacity(k);
    for j in 1..=k {
        mult_vars.push(if problem.stutter {
            Some(
                encoding
                    .vars
                    .declare(format!("n_{index}_{j}"), 1, total.max(1) as i64),
            )
        } else {
            None
        });
    }

    let initial = vec![predicate_constraint(&predicate.initial, &names, &state_vars[0])?];

    let mut steps = Vec::with_capacity(k);
    for j in 0..k {
        steps.push(step_constraint(
            encoding,
            &state_vars[j],
            &state_vars[j + 1],
            mult_vars[j],
        ));
    }

    let goal = vec![
        predicate_constraint(&predicate.goal, &names, &state_vars[k])?,
        terminal_constraint(&encoding.reactant_vars, &state_vars[k]),
    ];

    Ok(PathBlock {
        total,
        state_vars,
        mult_vars,
        initial,
        steps,
        goal,
    })
}

/// One `DifferentFrom` constraint per previous network: the symbolic reaction
/// set may not be a subset (and hence a permutation) of the previous one.
pub fn encode_uniqueness(encoding: &Encoding, previous: &[Crn]) -> Vec<Constraint> {
    previous
        .iter()
        .map(|prev| {
            Constraint::and(
                (0..encoding.num_reactions)
                    .map(|r| {
                        Constraint::or(
                            prev.reactions()
                                .iter()
                                .map(|pr| {
                                    Constraint::and(
                                        (0..encoding.num_species)
                                            .flat_map(|s| {
                                                [
                                                    Term::var(encoding.reactant_vars[r][s])
                                                        .eq(Term::Const(pr.reactants()[s] as i64)),
                                                    Term::var(encoding.product_vars[r][s])
                                                        .eq(Term::Const(pr.products()[s] as i64)),
                                                ]
                                            })
                                            .collect(),
                                    )
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
            .not()
        })
        .collect()
}

fn terminal_constraint(reactant_vars: &[Vec<VarId>], state_vars: &[VarId]) -> Constraint {
    Constraint::and(
        reactant_vars
            .iter()
            .map(|row| {
                Constraint::or(
                    row.iter()
                        .zip(state_vars)
                        .map(|(&r, &x)| Term::var(x).lt(Term::var(r)))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// One transition step: either a terminal self-loop, or some reaction fires
/// `n` times (`n` fixed to 1 without stutter mode).
fn step_constraint(
    encoding: &Encoding,
    from: &[VarId],
    to: &[VarId],
    mult: Option<VarId>,
) -> Constraint {
    let self_loop = Constraint::and(
        std::iter::once(terminal_constraint(&encoding.reactant_vars, from))
            .chain(
                from.iter()
                    .zip(to)
                    .map(|(&a, &b)| Term::var(b).eq(Term::var(a))),
            )
            .collect(),
    );
    let mut disjuncts = vec![self_loop];
    for r in 0..encoding.num_reactions {
        let mut conjuncts = Vec::new();
        for s in 0..encoding.num_species {
            let rv = Term::var(encoding.reactant_vars[r][s]);
            let pv = Term::var(encoding.product_vars[r][s]);
            let x = Term::var(from[s]);
            let x_next = Term::var(to[s]);
            // Enabled: x_s >= r_s.
            conjuncts.push(x.clone().ge(rv.clone()));
            match mult {
                Some(n) => {
                    let n = Term::var(n);
                    // Consumption bound: x_s >= n * (r_s - p_s).
                    conjuncts.push(
                        x.clone()
                            .ge(scaled_delta(n.clone(), rv.clone(), pv.clone())),
                    );
                    // Update: x'_s = x_s + n * (p_s - r_s).
                    conjuncts.push(x_next.eq(x.add(scaled_delta(n, pv, rv))));
                }
                None => {
                    conjuncts.push(x_next.eq(x.add(pv.sub(rv))));
                }
            }
        }
        disjuncts.push(Constraint::and(conjuncts));
    }
    Constraint::or(disjuncts)
}

/// `n * (a - b)` for stoichiometry entries `a`, `b`, expressed with branches
/// on the five possible differences so the emitted script stays linear.
fn scaled_delta(n: Term, a: Term, b: Term) -> Term {
    let d = a.sub(b);
    let neg = |t: Term| Term::Const(0).sub(t);
    let double = |t: Term| t.clone().add(t);
    Term::Ite(
        Box::new(d.clone().eq(Term::Const(-2))),
        Box::new(neg(double(n.clone()))),
        Box::new(Term::Ite(
            Box::new(d.clone().eq(Term::Const(-1))),
            Box::new(neg(n.clone())),
            Box::new(Term::Ite(
                Box::new(d.clone().eq(Term::Const(0))),
                Box::new(Term::Const(0)),
                Box::new(Term::Ite(
                    Box::new(d.eq(Term::Const(1))),
                    Box::new(n.clone()),
                    Box::new(double(n)),
                )),
            )),
        )),
    )
}

/// Translates a state predicate into a constraint over the given state
/// variables, resolving species by canonical name.
fn predicate_constraint(
    predicate: &StatePredicate,
    names: &[&str],
    state_vars: &[VarId],
) -> Result<Constraint, SynthesisError> {
    Ok(match predicate {
        StatePredicate::Bool(b) => Constraint::Bool(*b),
        StatePredicate::Not(a) => predicate_constraint(a, names, state_vars)?.not(),
        StatePredicate::And(a, b) => Constraint::and(vec![
            predicate_constraint(a, names, state_vars)?,
            predicate_constraint(b, names, state_vars)?,
        ]),
        StatePredicate::Or(a, b) => Constraint::or(vec![
            predicate_constraint(a, names, state_vars)?,
            predicate_constraint(b, names, state_vars)?,
        ]),
        StatePredicate::Implies(a, b) => Constraint::Implies(
            Box::new(predicate_constraint(a, names, state_vars)?),
            Box::new(predicate_constraint(b, names, state_vars)?),
        ),
        StatePredicate::Iff(a, b) => Constraint::Iff(
            Box::new(predicate_constraint(a, names, state_vars)?),
            Box::new(predicate_constraint(b, names, state_vars)?),
        ),
        StatePredicate::Cmp(op, l, r) => Constraint::Cmp(
            *op,
            arith_term(l, names, state_vars)?,
            arith_term(r, names, state_vars)?,
        ),
    })
}

fn arith_term(
    expr: &ArithExpr,
    names: &[&str],
    state_vars: &[VarId],
) -> Result<Term, SynthesisError> {
    Ok(match expr {
        ArithExpr::Const(c) => Term::Const(*c),
        ArithExpr::Species(name) => {
            let idx = names.iter().position(|n| n == name).ok_or_else(|| {
                SynthesisError::Encoding(format!("species `{name}` is not among the declared species"))
            })?;
            Term::var(state_vars[idx])
        }
        ArithExpr::Add(a, b) => arith_term(a, names, state_vars)?.add(arith_term(b, names, state_vars)?),
        ArithExpr::Sub(a, b) => arith_term(a, names, state_vars)?.sub(arith_term(b, names, state_vars)?),
        ArithExpr::Mul(a, b) => Term::Mul(
            Box::new(arith_term(a, names, state_vars)?),
            Box::new(arith_term(b, names, state_vars)?),
        ),
    })
}

