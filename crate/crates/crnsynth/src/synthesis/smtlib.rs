//! SMT-LIB 2 serialization of encodings and parsing of solver responses.
//!
//! Emission is a pure function of the encoding: variables appear in
//! declaration order and constraints in a fixed order, so identical encodings
//! produce byte-identical scripts.

use crate::predicate::CmpOp;
use crate::synthesis::constraint::{Constraint, Term, VarTable};
use crate::synthesis::encoding::Encoding;
use crate::synthesis::SynthesisError;

/// Emits a standalone script: declarations, bound assertions, constraint
/// assertions, `check-sat`, and a `get-value` for every stoichiometry entry.
pub fn emit_smtlib(encoding: &Encoding) -> String {
    let mut out = String::new();
    out.push_str("(set-option :produce-models true)\n");
    out.push_str("(set-logic QF_LIA)\n");
    out.push_str(&emit_declarations(&encoding.vars));
    for c in encoding.all_constraints() {
        out.push_str("(assert ");
        out.push_str(&constraint_sexpr(c, &encoding.vars));
        out.push_str(")\n");
    }
    out.push_str("(check-sat)\n");
    out.push_str(&emit_get_value(encoding));
    out
}

/// Declarations plus variable bound assertions, in declaration order.
pub fn emit_declarations(vars: &VarTable) -> String {
    let mut out = String::new();
    for (_, info) in vars.iter() {
        out.push_str(&format!("(declare-fun {} () Int)\n", info.name));
    }
    for (_, info) in vars.iter() {
        out.push_str(&format!(
            "(assert (and (<= {} {}) (<= {} {})))\n",
            int_sexpr(info.lo),
            info.name,
            info.name,
            int_sexpr(info.hi)
        ));
    }
    out
}

pub fn emit_get_value(encoding: &Encoding) -> String {
    let mut names = Vec::new();
    for row in &encoding.reactant_vars {
        for &v in row {
            names.push(encoding.vars.info(v).name.clone());
        }
    }
    for row in &encoding.product_vars {
        for &v in row {
            names.push(encoding.vars.info(v).name.clone());
        }
    }
    format!("(get-value ({}))\n", names.join(" "))
}

pub fn assert_sexpr(constraint: &Constraint, vars: &VarTable) -> String {
    format!("(assert {})", constraint_sexpr(constraint, vars))
}

fn int_sexpr(v: i64) -> String {
    if v < 0 {
        format!("(- {})", v.unsigned_abs())
    } else {
        v.to_string()
    }
}

fn term_sexpr(term: &Term, vars: &VarTable) -> String {
    match term {
        Term::Const(c) => int_sexpr(*c),
        Term::Var(v) => vars.info(*v).name.clone(),
        Term::Add(a, b) => format!("(+ {} {})", term_sexpr(a, vars), term_sexpr(b, vars)),
        Term::Sub(a, b) => format!("(- {} {})", term_sexpr(a, vars), term_sexpr(b, vars)),
        Term::Mul(a, b) => format!("(* {} {})", term_sexpr(a, vars), term_sexpr(b, vars)),
        Term::Ite(c, t, e) => format!(
            "(ite {} {} {})",
            constraint_sexpr(c, vars),
            term_sexpr(t, vars),
            term_sexpr(e, vars)
        ),
    }
}

fn constraint_sexpr(c: &Constraint, vars: &VarTable) -> String {
    match c {
        Constraint::Bool(true) => "true".to_string(),
        Constraint::Bool(false) => "false".to_string(),
        Constraint::Not(a) => format!("(not {})", constraint_sexpr(a, vars)),
        Constraint::And(items) => nary("and", "true", items, vars),
        Constraint::Or(items) => nary("or", "false", items, vars),
        Constraint::Implies(a, b) => format!(
            "(=> {} {})",
            constraint_sexpr(a, vars),
            constraint_sexpr(b, vars)
        ),
        Constraint::Iff(a, b) => format!(
            "(= {} {})",
            constraint_sexpr(a, vars),
            constraint_sexpr(b, vars)
        ),
        Constraint::Cmp(op, l, r) => {
            let sym = match op {
                CmpOp::Lt => "<",
                CmpOp::Le => "<=",
                CmpOp::Eq => "=",
                CmpOp::Gt => ">",
                CmpOp::Ge => ">=",
            };
            format!("({sym} {} {})", term_sexpr(l, vars), term_sexpr(r, vars))
        }
    }
}

fn nary(op: &str, empty: &str, items: &[Constraint], vars: &VarTable) -> String {
    match items.len() {
        0 => empty.to_string(),
        1 => constraint_sexpr(&items[0], vars),
        _ => {
            let parts: Vec<String> = items.iter().map(|c| constraint_sexpr(c, vars)).collect();
            format!("({op} {})", parts.join(" "))
        }
    }
}

/// Outcome of one `(check-sat)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSat {
    Sat,
    Unsat,
    Unknown,
}

pub fn parse_check_sat(line: &str) -> Result<CheckSat, SynthesisError> {
    match line.trim() {
        "sat" => Ok(CheckSat::Sat),
        "unsat" => Ok(CheckSat::Unsat),
        "unknown" => Ok(CheckSat::Unknown),
        other => Err(SynthesisError::Backend {
            message: format!("unexpected check-sat response `{other}`"),
            transcript: String::new(),
        }),
    }
}

/// Parses a `get-value` response of the form `((name value) ...)` where each
/// value is an integer literal or `(- n)`.
pub fn parse_get_value(text: &str) -> Result<Vec<(String, i64)>, SynthesisError> {
    let sexpr = parse_sexpr(text)?;
    let SExpr::List(pairs) = sexpr else {
        return Err(malformed(text, "expected a list of bindings"));
    };
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let SExpr::List(items) = pair else {
            return Err(malformed(text, "expected (name value) pairs"));
        };
        if items.len() != 2 {
            return Err(malformed(text, "expected (name value) pairs"));
        }
        let SExpr::Atom(name) = &items[0] else {
            return Err(malformed(text, "binding name is not an atom"));
        };
        let value = match &items[1] {
            SExpr::Atom(v) => v
                .parse::<i64>()
                .map_err(|_| malformed(text, "binding value is not an integer"))?,
            SExpr::List(neg) => {
                if neg.len() == 2 {
                    match (&neg[0], &neg[1]) {
                        (SExpr::Atom(minus), SExpr::Atom(v)) if minus == "-" => -v
                            .parse::<i64>()
                            .map_err(|_| malformed(text, "binding value is not an integer"))?,
                        _ => return Err(malformed(text, "unsupported value expression")),
                    }
                } else {
                    return Err(malformed(text, "unsupported value expression"));
                }
            }
        };
        out.push((name.clone(), value));
    }
    Ok(out)
}

fn malformed(text: &str, why: &str) -> SynthesisError {
    SynthesisError::Backend {
        message: format!("malformed get-value response ({why})"),
        transcript: text.to_string(),
    }
}

enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

fn parse_sexpr(text: &str) -> Result<SExpr, SynthesisError> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    let mut pos = 0;
    let expr = parse_sexpr_at(&tokens, &mut pos, text)?;
    if pos != tokens.len() {
        return Err(malformed(text, "trailing tokens"));
    }
    Ok(expr)
}

fn parse_sexpr_at(tokens: &[String], pos: &mut usize, text: &str) -> Result<SExpr, SynthesisError> {
    match tokens.get(*pos) {
        None => Err(malformed(text, "unexpected end")),
        Some(t) if t == "(" => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(SExpr::List(items));
                    }
                    Some(_) => items.push(parse_sexpr_at(tokens, pos, text)?),
                    None => return Err(malformed(text, "unbalanced parentheses")),
                }
            }
        }
        Some(t) if t == ")" => Err(malformed(text, "unexpected `)`")),
        Some(atom) => {
            *pos += 1;
            Ok(SExpr::Atom(atom.clone()))
        }
    }
}
