//! State predicates over molecule counts and their text format.
//!
//! Predicates are boolean combinations (`! && || => <=>`) of integer
//! comparisons (`< <= = > >=`) over arithmetic (`+ - *`) on species counts and
//! integer constants. Arithmetic uses 64-bit signed wrapping semantics, which
//! keeps evaluation total; desk-scale molecule counts never get near the edge.

use std::fmt;

use thiserror::Error;

use crate::crn::{Crn, SysState};

#[derive(Debug, Error, PartialEq)]
pub enum PredicateError {
    #[error("unresolved species `{0}`")]
    UnresolvedSpecies(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("initial predicate is unsatisfiable for totals up to {cap}")]
    NoPinnedTotal { cap: u64 },
    #[error("initial predicate admits states with different totals ({0} and {1})")]
    AmbiguousTotal(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn apply(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

/// Integer expression over species counts and constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArithExpr {
    Const(i64),
    Species(String),
    Add(Box<ArithExpr>, Box<ArithExpr>),
    Sub(Box<ArithExpr>, Box<ArithExpr>),
    Mul(Box<ArithExpr>, Box<ArithExpr>),
}

/// Boolean predicate over a single system state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StatePredicate {
    Bool(bool),
    Not(Box<StatePredicate>),
    And(Box<StatePredicate>, Box<StatePredicate>),
    Or(Box<StatePredicate>, Box<StatePredicate>),
    Implies(Box<StatePredicate>, Box<StatePredicate>),
    Iff(Box<StatePredicate>, Box<StatePredicate>),
    Cmp(CmpOp, ArithExpr, ArithExpr),
}

impl StatePredicate {
    pub fn species_eq(name: &str, value: i64) -> Self {
        StatePredicate::Cmp(
            CmpOp::Eq,
            ArithExpr::Species(name.to_string()),
            ArithExpr::Const(value),
        )
    }

    pub fn and(self, other: Self) -> Self {
        StatePredicate::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        StatePredicate::Or(Box::new(self), Box::new(other))
    }

    /// Resolves every species reference against a species-name list; the
    /// result evaluates without further lookups or failure.
    pub fn resolve(&self, species_names: &[&str]) -> Result<ResolvedPredicate, PredicateError> {
        Ok(ResolvedPredicate(resolve_bool(self, species_names)?))
    }

    pub fn resolve_for(&self, crn: &Crn) -> Result<ResolvedPredicate, PredicateError> {
        let names: Vec<&str> = crn.species().iter().map(|s| s.name.as_str()).collect();
        self.resolve(&names)
    }

    /// Evaluates the predicate in `state`, resolving species by name against
    /// `crn`'s species list.
    pub fn eval(&self, crn: &Crn, state: &SysState) -> Result<bool, PredicateError> {
        Ok(self.resolve_for(crn)?.eval(state))
    }

    /// Parses the predicate text format.
    pub fn parse(text: &str) -> Result<Self, PredicateError> {
        Parser::new(text).parse_predicate()
    }
}

/// Path specification: the first state of a path must satisfy `initial` and
/// its last state must satisfy `goal` (and be terminal, at the point of use).
#[derive(Debug, Clone, PartialEq)]
pub struct PathPredicate {
    pub initial: StatePredicate,
    pub goal: StatePredicate,
}

impl PathPredicate {
    pub fn new(initial: StatePredicate, goal: StatePredicate) -> Self {
        Self { initial, goal }
    }
}

enum ResolvedArith {
    Const(i64),
    Species(usize),
    Add(Box<ResolvedArith>, Box<ResolvedArith>),
    Sub(Box<ResolvedArith>, Box<ResolvedArith>),
    Mul(Box<ResolvedArith>, Box<ResolvedArith>),
}

enum ResolvedBool {
    Bool(bool),
    Not(Box<ResolvedBool>),
    And(Box<ResolvedBool>, Box<ResolvedBool>),
    Or(Box<ResolvedBool>, Box<ResolvedBool>),
    Implies(Box<ResolvedBool>, Box<ResolvedBool>),
    Iff(Box<ResolvedBool>, Box<ResolvedBool>),
    Cmp(CmpOp, ResolvedArith, ResolvedArith),
}

/// A predicate with species references resolved to indices; evaluation is
/// total and deterministic.
pub struct ResolvedPredicate(ResolvedBool);

impl ResolvedPredicate {
    pub fn eval(&self, state: &SysState) -> bool {
        eval_bool(&self.0, state)
    }
}

fn resolve_bool(p: &StatePredicate, names: &[&str]) -> Result<ResolvedBool, PredicateError> {
    Ok(match p {
        StatePredicate::Bool(b) => ResolvedBool::Bool(*b),
        StatePredicate::Not(a) => ResolvedBool::Not(Box::new(resolve_bool(a, names)?)),
        StatePredicate::And(a, b) => ResolvedBool::And(
            Box::new(resolve_bool(a, names)?),
            Box::new(resolve_bool(b, names)?),
        ),
        StatePredicate::Or(a, b) => ResolvedBool::Or(
            Box::new(resolve_bool(a, names)?),
            Box::new(resolve_bool(b, names)?),
        ),
        StatePredicate::Implies(a, b) => ResolvedBool::Implies(
            Box::new(resolve_bool(a, names)?),
            Box::new(resolve_bool(b, names)?),
        ),
        StatePredicate::Iff(a, b) => ResolvedBool::Iff(
            Box::new(resolve_bool(a, names)?),
            Box::new(resolve_bool(b, names)?),
        ),
        StatePredicate::Cmp(op, l, r) => ResolvedBool::Cmp(
            *op,
            resolve_arith(l, names)?,
            resolve_arith(r, names)?,
        ),
    })
}

fn resolve_arith(e: &ArithExpr, names: &[&str]) -> Result<ResolvedArith, PredicateError> {
    Ok(match e {
        ArithExpr::Const(c) => ResolvedArith::Const(*c),
        ArithExpr::Species(name) => ResolvedArith::Species(
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| PredicateError::UnresolvedSpecies(name.clone()))?,
        ),
        ArithExpr::Add(a, b) => ResolvedArith::Add(
            Box::new(resolve_arith(a, names)?),
            Box::new(resolve_arith(b, names)?),
        ),
        ArithExpr::Sub(a, b) => ResolvedArith::Sub(
            Box::new(resolve_arith(a, names)?),
            Box::new(resolve_arith(b, names)?),
        ),
        ArithExpr::Mul(a, b) => ResolvedArith::Mul(
            Box::new(resolve_arith(a, names)?),
            Box::new(resolve_arith(b, names)?),
        ),
    })
}

fn eval_bool(p: &ResolvedBool, state: &SysState) -> bool {
    match p {
        ResolvedBool::Bool(b) => *b,
        ResolvedBool::Not(a) => !eval_bool(a, state),
        ResolvedBool::And(a, b) => eval_bool(a, state) && eval_bool(b, state),
        ResolvedBool::Or(a, b) => eval_bool(a, state) || eval_bool(b, state),
        ResolvedBool::Implies(a, b) => !eval_bool(a, state) || eval_bool(b, state),
        ResolvedBool::Iff(a, b) => eval_bool(a, state) == eval_bool(b, state),
        ResolvedBool::Cmp(op, l, r) => op.apply(eval_arith(l, state), eval_arith(r, state)),
    }
}

fn eval_arith(e: &ResolvedArith, state: &SysState) -> i64 {
    match e {
        ResolvedArith::Const(c) => *c,
        ResolvedArith::Species(s) => state.count(*s) as i64,
        ResolvedArith::Add(a, b) => eval_arith(a, state).wrapping_add(eval_arith(b, state)),
        ResolvedArith::Sub(a, b) => eval_arith(a, state).wrapping_sub(eval_arith(b, state)),
        ResolvedArith::Mul(a, b) => eval_arith(a, state).wrapping_mul(eval_arith(b, state)),
    }
}

impl fmt::Display for StatePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatePredicate::Bool(b) => write!(f, "{b}"),
            StatePredicate::Not(a) => write!(f, "!{a}"),
            StatePredicate::And(a, b) => write!(f, "({a} && {b})"),
            StatePredicate::Or(a, b) => write!(f, "({a} || {b})"),
            StatePredicate::Implies(a, b) => write!(f, "({a} => {b})"),
            StatePredicate::Iff(a, b) => write!(f, "({a} <=> {b})"),
            StatePredicate::Cmp(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

impl fmt::Display for ArithExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithExpr::Const(c) => write!(f, "{c}"),
            ArithExpr::Species(s) => write!(f, "{s}"),
            ArithExpr::Add(a, b) => write!(f, "({a} + {b})"),
            ArithExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            ArithExpr::Mul(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

// Parser: precedence climbing over an untyped expression tree, then a typing
// pass that splits boolean structure from integer arithmetic.

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Bang,
    AndAnd,
    OrOr,
    Arrow,    // =>
    DArrow,   // <=>
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
}

#[derive(Debug)]
enum Expr {
    Bool(bool),
    Int(i64),
    Species(String),
    Not(Box<Expr>),
    Bin(Token, Box<Expr>, Box<Expr>),
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let mut tokens = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i;
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                    continue;
                }
                '(' => {
                    tokens.push((start, Token::LParen));
                    i += 1;
                }
                ')' => {
                    tokens.push((start, Token::RParen));
                    i += 1;
                }
                '!' => {
                    tokens.push((start, Token::Bang));
                    i += 1;
                }
                '&' if bytes.get(i + 1) == Some(&b'&') => {
                    tokens.push((start, Token::AndAnd));
                    i += 2;
                }
                '|' if bytes.get(i + 1) == Some(&b'|') => {
                    tokens.push((start, Token::OrOr));
                    i += 2;
                }
                '<' if text[i..].starts_with("<=>") => {
                    tokens.push((start, Token::DArrow));
                    i += 3;
                }
                '<' if bytes.get(i + 1) == Some(&b'=') => {
                    tokens.push((start, Token::Le));
                    i += 2;
                }
                '<' => {
                    tokens.push((start, Token::Lt));
                    i += 1;
                }
                '>' if bytes.get(i + 1) == Some(&b'=') => {
                    tokens.push((start, Token::Ge));
                    i += 2;
                }
                '>' => {
                    tokens.push((start, Token::Gt));
                    i += 1;
                }
                '=' if bytes.get(i + 1) == Some(&b'>') => {
                    tokens.push((start, Token::Arrow));
                    i += 2;
                }
                '=' => {
                    tokens.push((start, Token::Eq));
                    i += 1;
                }
                '+' => {
                    tokens.push((start, Token::Plus));
                    i += 1;
                }
                '-' => {
                    tokens.push((start, Token::Minus));
                    i += 1;
                }
                '*' => {
                    tokens.push((start, Token::Star));
                    i += 1;
                }
                '0'..='9' => {
                    let mut j = i;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if let Ok(v) = text[i..j].parse::<i64>() {
                        tokens.push((start, Token::Int(v)));
                    } else {
                        tokens.push((start, Token::Int(i64::MAX)));
                    }
                    i = j;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < bytes.len()
                        && ((bytes[j] as char).is_ascii_alphanumeric()
                            || bytes[j] == b'_'
                            || bytes[j] == b'\'')
                    {
                        j += 1;
                    }
                    tokens.push((start, Token::Ident(text[i..j].to_string())));
                    i = j;
                }
                _ => {
                    // Leave the unknown byte as an unconsumable marker.
                    tokens.push((start, Token::Ident(format!("\u{0}{c}"))));
                    i += 1;
                }
            }
        }
        Self {
            tokens,
            pos: 0,
            len: text.len(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PredicateError> {
        Err(PredicateError::Parse {
            position: self.position(),
            message: message.into(),
        })
    }

    fn parse_predicate(&mut self) -> Result<StatePredicate, PredicateError> {
        let expr = self.parse_iff()?;
        if self.pos != self.tokens.len() {
            return self.err("trailing input");
        }
        self.to_predicate(expr)
    }

    fn parse_iff(&mut self) -> Result<Expr, PredicateError> {
        let mut lhs = self.parse_implies()?;
        while self.peek() == Some(&Token::DArrow) {
            self.next();
            let rhs = self.parse_implies()?;
            lhs = Expr::Bin(Token::DArrow, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_implies(&mut self) -> Result<Expr, PredicateError> {
        let lhs = self.parse_or()?;
        if self.peek() == Some(&Token::Arrow) {
            self.next();
            // Right associative.
            let rhs = self.parse_implies()?;
            return Ok(Expr::Bin(Token::Arrow, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Expr, PredicateError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&Token::OrOr) {
            self.next();
            let rhs = self.parse_and()?;
            lhs = Expr::Bin(Token::OrOr, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Expr, PredicateError> {
        let mut lhs = self.parse_cmp()?;
        while self.peek() == Some(&Token::AndAnd) {
            self.next();
            let rhs = self.parse_cmp()?;
            lhs = Expr::Bin(Token::AndAnd, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_cmp(&mut self) -> Result<Expr, PredicateError> {
        let lhs = self.parse_add()?;
        if let Some(op @ (Token::Lt | Token::Le | Token::Eq | Token::Gt | Token::Ge)) = self.peek()
        {
            let op = op.clone();
            self.next();
            let rhs = self.parse_add()?;
            return Ok(Expr::Bin(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn parse_add(&mut self) -> Result<Expr, PredicateError> {
        let mut lhs = self.parse_mul()?;
        while let Some(op @ (Token::Plus | Token::Minus)) = self.peek() {
            let op = op.clone();
            self.next();
            let rhs = self.parse_mul()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_mul(&mut self) -> Result<Expr, PredicateError> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == Some(&Token::Star) {
            self.next();
            let rhs = self.parse_unary()?;
            lhs = Expr::Bin(Token::Star, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, PredicateError> {
        match self.peek() {
            Some(Token::Bang) => {
                self.next();
                let inner = self.parse_unary()?;
                Ok(Expr::Not(Box::new(inner)))
            }
            Some(Token::Minus) => {
                self.next();
                match self.parse_unary()? {
                    Expr::Int(v) => Ok(Expr::Int(v.wrapping_neg())),
                    other => Ok(Expr::Bin(
                        Token::Minus,
                        Box::new(Expr::Int(0)),
                        Box::new(other),
                    )),
                }
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Expr, PredicateError> {
        match self.next() {
            Some(Token::Int(v)) => Ok(Expr::Int(v)),
            Some(Token::Ident(name)) => match name.as_str() {
                "true" => Ok(Expr::Bool(true)),
                "false" => Ok(Expr::Bool(false)),
                _ if name.starts_with('\u{0}') => self.err(format!(
                    "unexpected character `{}`",
                    &name[1..]
                )),
                _ => Ok(Expr::Species(name)),
            },
            Some(Token::LParen) => {
                let inner = self.parse_iff()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => self.err("expected `)`"),
                }
            }
            Some(tok) => self.err(format!("unexpected token {tok:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn to_predicate(&self, e: Expr) -> Result<StatePredicate, PredicateError> {
        Ok(match e {
            Expr::Bool(b) => StatePredicate::Bool(b),
            Expr::Not(a) => StatePredicate::Not(Box::new(self.to_predicate(*a)?)),
            Expr::Bin(op, a, b) => match op {
                Token::AndAnd => StatePredicate::And(
                    Box::new(self.to_predicate(*a)?),
                    Box::new(self.to_predicate(*b)?),
                ),
                Token::OrOr => StatePredicate::Or(
                    Box::new(self.to_predicate(*a)?),
                    Box::new(self.to_predicate(*b)?),
                ),
                Token::Arrow => StatePredicate::Implies(
                    Box::new(self.to_predicate(*a)?),
                    Box::new(self.to_predicate(*b)?),
                ),
                Token::DArrow => StatePredicate::Iff(
                    Box::new(self.to_predicate(*a)?),
                    Box::new(self.to_predicate(*b)?),
                ),
                Token::Lt | Token::Le | Token::Eq | Token::Gt | Token::Ge => {
                    let cmp = match op {
                        Token::Lt => CmpOp::Lt,
                        Token::Le => CmpOp::Le,
                        Token::Eq => CmpOp::Eq,
                        Token::Gt => CmpOp::Gt,
                        _ => CmpOp::Ge,
                    };
                    StatePredicate::Cmp(cmp, self.to_arith(*a)?, self.to_arith(*b)?)
                }
                _ => return self.err("arithmetic expression where a predicate was expected"),
            },
            Expr::Int(_) | Expr::Species(_) => {
                return self.err("arithmetic expression where a predicate was expected")
            }
        })
    }

    fn to_arith(&self, e: Expr) -> Result<ArithExpr, PredicateError> {
        Ok(match e {
            Expr::Int(v) => ArithExpr::Const(v),
            Expr::Species(name) => ArithExpr::Species(name),
            Expr::Bin(Token::Plus, a, b) => {
                ArithExpr::Add(Box::new(self.to_arith(*a)?), Box::new(self.to_arith(*b)?))
            }
            Expr::Bin(Token::Minus, a, b) => {
                ArithExpr::Sub(Box::new(self.to_arith(*a)?), Box::new(self.to_arith(*b)?))
            }
            Expr::Bin(Token::Star, a, b) => {
                ArithExpr::Mul(Box::new(self.to_arith(*a)?), Box::new(self.to_arith(*b)?))
            }
            _ => return self.err("boolean expression where arithmetic was expected"),
        })
    }
}

/// Enumerates every state with exactly `total` molecules over `num_species`
/// species, in lexicographic order.
pub fn states_with_total(num_species: usize, total: u64) -> Vec<SysState> {
    let mut out = Vec::new();
    let mut current = vec![0u64; num_species];
    fill(&mut out, &mut current, 0, total);
    out
}

fn fill(out: &mut Vec<SysState>, current: &mut Vec<u64>, pos: usize, remaining: u64) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(SysState::new(current.clone()));
        return;
    }
    for c in 0..=remaining {
        current[pos] = c;
        fill(out, current, pos + 1, remaining - c);
    }
    current[pos] = 0;
}

/// The satisfying states of an initial predicate together with the single
/// molecule total they share.
#[derive(Debug, Clone)]
pub struct PinnedInitial {
    pub total: u64,
    pub states: Vec<SysState>,
}

/// Finds the unique molecule total pinned down by an initial predicate.
///
/// A conjunction of per-species equalities covering every species pins a
/// single state directly; anything else is resolved by scanning totals up to
/// `cap`. Errors when no total up to `cap` has a satisfying state or when two
/// different totals do.
pub fn pinned_initial(
    predicate: &ResolvedPredicate,
    num_species: usize,
    cap: u64,
) -> Result<PinnedInitial, PredicateError> {
    if let Some(state) = conjunctive_assignment(&predicate.0, num_species) {
        if predicate.eval(&state) {
            return Ok(PinnedInitial {
                total: state.total(),
                states: vec![state],
            });
        }
        // The equalities contradict each other; no state satisfies them.
        return Err(PredicateError::NoPinnedTotal { cap });
    }
    let mut found: Option<PinnedInitial> = None;
    for total in 0..=cap {
        let states: Vec<SysState> = states_with_total(num_species, total)
            .into_iter()
            .filter(|x| predicate.eval(x))
            .collect();
        if states.is_empty() {
            continue;
        }
        if let Some(prev) = &found {
            return Err(PredicateError::AmbiguousTotal(prev.total, total));
        }
        found = Some(PinnedInitial { total, states });
    }
    found.ok_or(PredicateError::NoPinnedTotal { cap })
}

/// When the predicate is a pure conjunction of `species = constant` atoms
/// covering all species with consistent nonnegative values, returns that
/// single state.
fn conjunctive_assignment(p: &ResolvedBool, num_species: usize) -> Option<SysState> {
    fn collect(p: &ResolvedBool, values: &mut [Option<u64>]) -> bool {
        match p {
            ResolvedBool::And(a, b) => collect(a, values) && collect(b, values),
            ResolvedBool::Cmp(CmpOp::Eq, ResolvedArith::Species(s), ResolvedArith::Const(c))
            | ResolvedBool::Cmp(CmpOp::Eq, ResolvedArith::Const(c), ResolvedArith::Species(s)) => {
                if *c < 0 {
                    // Recorded as an impossible constraint; handled by caller.
                    values[*s] = Some(u64::MAX);
                    return true;
                }
                match values[*s] {
                    None => values[*s] = Some(*c as u64),
                    Some(prev) if prev == *c as u64 => {}
                    Some(_) => values[*s] = Some(u64::MAX),
                }
                true
            }
            _ => false,
        }
    }
    let mut values = vec![None; num_species];
    if !collect(p, &mut values) {
        return None;
    }
    let counts: Option<Vec<u64>> = values.into_iter().collect();
    counts.map(SysState::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s(counts: &[u64]) -> SysState {
        SysState::new(counts.to_vec())
    }

    #[test]
    fn eval_conjunction_of_equalities() {
        let p = StatePredicate::species_eq("A", 5).and(StatePredicate::species_eq("B", 0));
        let crn = catalog::direct_competition_unit();
        assert!(p.eval(&crn, &s(&[5, 0])).unwrap());
        assert!(!p.eval(&crn, &s(&[4, 1])).unwrap());
    }

    #[test]
    fn eval_true_everywhere() {
        let crn = catalog::direct_competition_unit();
        for state in [s(&[0, 0]), s(&[7, 3])] {
            assert!(StatePredicate::Bool(true).eval(&crn, &state).unwrap());
        }
    }

    #[test]
    fn eval_arithmetic_comparison() {
        // A - B >= 2 at (3, 2) is 1 >= 2, false.
        let p = StatePredicate::parse("A - B >= 2").unwrap();
        let crn = catalog::direct_competition_unit();
        assert!(!p.eval(&crn, &s(&[3, 2])).unwrap());
        assert!(p.eval(&crn, &s(&[4, 2])).unwrap());
    }

    #[test]
    fn unresolved_species_is_error() {
        let p = StatePredicate::species_eq("Z", 1);
        let crn = catalog::direct_competition_unit();
        assert_eq!(
            p.eval(&crn, &s(&[1, 1])),
            Err(PredicateError::UnresolvedSpecies("Z".into()))
        );
    }

    #[test]
    fn parse_full_operator_set() {
        let text = "((A = 3) && !(B < 1)) || (A + 2 * B - 1 >= 4) => (true <=> false)";
        let p = StatePredicate::parse(text).unwrap();
        let printed = p.to_string();
        assert_eq!(StatePredicate::parse(&printed).unwrap(), p);
    }

    #[test]
    fn parse_rejects_bare_arithmetic() {
        assert!(StatePredicate::parse("A + 1").is_err());
        assert!(StatePredicate::parse("3").is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(StatePredicate::parse("A = 1 &&").is_err());
        assert!(StatePredicate::parse("A ? 1").is_err());
        assert!(StatePredicate::parse("").is_err());
    }

    #[test]
    fn negative_constants_round_trip() {
        let p = StatePredicate::parse("A - B >= -2").unwrap();
        assert_eq!(StatePredicate::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let p = StatePredicate::parse("(A = 1 => B > 0) <=> !(A * B = 0)").unwrap();
        let crn = catalog::direct_competition_unit();
        let first = p.eval(&crn, &s(&[1, 2])).unwrap();
        for _ in 0..10 {
            assert_eq!(p.eval(&crn, &s(&[1, 2])).unwrap(), first);
        }
    }

    #[test]
    fn states_with_total_counts() {
        assert_eq!(states_with_total(2, 3).len(), 4);
        assert_eq!(states_with_total(3, 4).len(), 15);
        // All have the requested total.
        for x in states_with_total(3, 4) {
            assert_eq!(x.total(), 4);
        }
    }

    #[test]
    fn pinned_initial_unique_total() {
        let p = StatePredicate::species_eq("A", 2)
            .and(StatePredicate::species_eq("B", 1))
            .resolve(&["A", "B"])
            .unwrap();
        let pinned = pinned_initial(&p, 2, 64).unwrap();
        assert_eq!(pinned.total, 3);
        assert_eq!(pinned.states, vec![s(&[2, 1])]);
    }

    #[test]
    fn pinned_initial_rejects_unbounded() {
        let p = StatePredicate::parse("A >= 1")
            .unwrap()
            .resolve(&["A", "B"])
            .unwrap();
        assert!(matches!(
            pinned_initial(&p, 2, 16),
            Err(PredicateError::AmbiguousTotal(1, 2))
        ));
    }
}
