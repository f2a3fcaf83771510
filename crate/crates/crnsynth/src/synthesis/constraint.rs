//! Integer constraint language shared by the SMT-LIB emitter and the builtin
//! solver. All variables carry inclusive bounds, so every constraint set here
//! is decidable by finite search.

use crate::predicate::CmpOp;

pub type VarId = usize;

#[derive(Debug, Clone)]
pub struct VarInfo {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// Declaration-ordered variable table; the order fixes SMT-LIB output.
#[derive(Debug, Default, Clone)]
pub struct VarTable {
    vars: Vec<VarInfo>,
}

impl VarTable {
    pub fn declare(&mut self, name: String, lo: i64, hi: i64) -> VarId {
        self.vars.push(VarInfo { name, lo, hi });
        self.vars.len() - 1
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn info(&self, id: VarId) -> &VarInfo {
        &self.vars[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &VarInfo)> {
        self.vars.iter().enumerate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Const(i64),
    Var(VarId),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Ite(Box<Constraint>, Box<Term>, Box<Term>),
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn var(id: VarId) -> Self {
        Term::Var(id)
    }

    pub fn add(self, rhs: Term) -> Term {
        Term::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Term) -> Term {
        Term::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn cmp(self, op: CmpOp, rhs: Term) -> Constraint {
        Constraint::Cmp(op, self, rhs)
    }

    pub fn eq(self, rhs: Term) -> Constraint {
        self.cmp(CmpOp::Eq, rhs)
    }

    pub fn ge(self, rhs: Term) -> Constraint {
        self.cmp(CmpOp::Ge, rhs)
    }

    pub fn le(self, rhs: Term) -> Constraint {
        self.cmp(CmpOp::Le, rhs)
    }

    pub fn lt(self, rhs: Term) -> Constraint {
        self.cmp(CmpOp::Lt, rhs)
    }

    pub fn gt(self, rhs: Term) -> Constraint {
        self.cmp(CmpOp::Gt, rhs)
    }

    pub fn ne(self, rhs: Term) -> Constraint {
        Constraint::Not(Box::new(self.eq(rhs)))
    }

    /// Sum of terms; empty sums are the constant 0.
    pub fn sum(terms: Vec<Term>) -> Term {
        let mut iter = terms.into_iter();
        match iter.next() {
            None => Term::Const(0),
            Some(first) => iter.fold(first, |acc, t| acc.add(t)),
        }
    }

    pub fn eval(&self, assignment: &[i64]) -> i64 {
        match self {
            Term::Const(c) => *c,
            Term::Var(v) => assignment[*v],
            Term::Add(a, b) => a.eval(assignment).wrapping_add(b.eval(assignment)),
            Term::Sub(a, b) => a.eval(assignment).wrapping_sub(b.eval(assignment)),
            Term::Mul(a, b) => a.eval(assignment).wrapping_mul(b.eval(assignment)),
            Term::Ite(c, t, e) => {
                if c.eval(assignment) {
                    t.eval(assignment)
                } else {
                    e.eval(assignment)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Bool(bool),
    Not(Box<Constraint>),
    And(Vec<Constraint>),
    Or(Vec<Constraint>),
    Implies(Box<Constraint>, Box<Constraint>),
    Iff(Box<Constraint>, Box<Constraint>),
    Cmp(CmpOp, Term, Term),
}

#[allow(clippy::should_implement_trait)]
impl Constraint {
    pub fn and(items: Vec<Constraint>) -> Constraint {
        Constraint::And(items)
    }

    pub fn or(items: Vec<Constraint>) -> Constraint {
        Constraint::Or(items)
    }

    pub fn not(self) -> Constraint {
        Constraint::Not(Box::new(self))
    }

    pub fn eval(&self, assignment: &[i64]) -> bool {
        match self {
            Constraint::Bool(b) => *b,
            Constraint::Not(a) => !a.eval(assignment),
            Constraint::And(items) => items.iter().all(|c| c.eval(assignment)),
            Constraint::Or(items) => items.iter().any(|c| c.eval(assignment)),
            Constraint::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
            Constraint::Iff(a, b) => a.eval(assignment) == b.eval(assignment),
            Constraint::Cmp(op, l, r) => op.apply(l.eval(assignment), r.eval(assignment)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_and_constraint_evaluation() {
        let mut vars = VarTable::default();
        let a = vars.declare("a".into(), 0, 10);
        let b = vars.declare("b".into(), 0, 10);
        let assignment = vec![3, 4];
        let t = Term::var(a).add(Term::var(b)); // a + b
        assert_eq!(t.eval(&assignment), 7);
        let c = Term::var(a)
            .sub(Term::var(b))
            .lt(Term::Const(0)); // a - b < 0
        assert!(c.eval(&assignment));
        let ite = Term::Ite(
            Box::new(Term::var(a).gt(Term::var(b))),
            Box::new(Term::Const(1)),
            Box::new(Term::Const(-1)),
        );
        assert_eq!(ite.eval(&assignment), -1);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(Term::sum(vec![]).eval(&[]), 0);
    }
}
