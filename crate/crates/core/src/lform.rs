//! The divisibility language L_div = {=, 0, 1, +, |}: terms, positive-
//! existential formulas, an S-expression parser/printer, certificate
//! evaluation over an SRing, and bounded witness search.
//!
//! The language is positive by construction: the [`Formula`] type has no
//! negation or universal-quantifier node, and the parser rejects `not`
//! and `forall` tokens outright.
//!
//! Grammar (one formula per UTF-8 file):
//!
//! ```text
//! F ::= (eq T T) | (div T T) | (and F ...) | (or F ...) | (exists (v ...) F)
//! T ::= <integer> | <var> | (* <integer> <var>) | (+ T T ...)
//! v ::= [a-z][a-z0-9_]*
//! ```

use crate::qfield::KElem;
use crate::sring::SRing;
use crate::{Error, Result};
use rug::ops::Pow;
use rug::Integer;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A Z-linear term Σ c_i·x_i + c_0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Term {
    /// Variable → coefficient; zero coefficients are never stored.
    pub coeffs: BTreeMap<String, Integer>,
    pub constant: Integer,
}

impl Term {
    pub fn int(c: impl Into<Integer>) -> Term {
        Term {
            coeffs: BTreeMap::new(),
            constant: c.into(),
        }
    }

    pub fn var(name: &str) -> Term {
        Term::scaled(1, name)
    }

    /// c·x.
    pub fn scaled(c: impl Into<Integer>, name: &str) -> Term {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(name.to_string(), c);
        }
        Term {
            coeffs,
            constant: Integer::new(),
        }
    }

    pub fn add(&self, other: &Term) -> Term {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert_with(Integer::new);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(v);
            }
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &Term) -> Term {
        self.add(&other.scale(&Integer::from(-1)))
    }

    pub fn scale(&self, c: &Integer) -> Term {
        if c.is_zero() {
            return Term::default();
        }
        Term {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, k)| (v.clone(), (k * c).into()))
                .collect(),
            constant: (&self.constant * c).into(),
        }
    }

    pub fn add_const(&self, c: impl Into<Integer>) -> Term {
        let mut out = self.clone();
        out.constant += c.into();
        out
    }

    fn vars(&self, out: &mut BTreeSet<String>) {
        out.extend(self.coeffs.keys().cloned());
    }

    /// Evaluates the term; every variable must be assigned.
    pub fn eval(&self, ring: &SRing, env: &Assignment) -> Result<KElem> {
        let f = &ring.field;
        let mut acc = KElem::new(self.constant.clone(), Integer::new(), Integer::from(1))?;
        for (v, c) in &self.coeffs {
            let val = env
                .get(v)
                .ok_or_else(|| Error::MissingVariable(v.clone()))?;
            let c = KElem::new(c.clone(), Integer::new(), Integer::from(1))?;
            acc = f.add(&acc, &f.mul(&c, val));
        }
        Ok(acc)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                if *c == 1 {
                    v.clone()
                } else {
                    format!("(* {c} {v})")
                }
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "(+ {})", parts.join(" "))
        }
    }
}

/// A positive-existential L_div formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Div(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

/// Variable → value map; values must lie in O_{K,S}.
pub type Assignment = BTreeMap<String, KElem>;

impl Formula {
    pub fn and(fs: Vec<Formula>) -> Formula {
        Formula::And(fs)
    }

    pub fn or(fs: Vec<Formula>) -> Formula {
        Formula::Or(fs)
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        Formula::Exists(vars, Box::new(body))
    }

    /// Variables not bound by any enclosing `exists`.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) | Formula::Div(a, b) => {
                let mut vs = BTreeSet::new();
                a.vars(&mut vs);
                b.vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(vs, body) => {
                let added: Vec<String> = vs.iter().filter(|v| bound.insert((*v).clone())).cloned().collect();
                body.collect_free(bound, out);
                for v in added {
                    bound.remove(&v);
                }
            }
        }
    }

    /// All existentially bound variables, in declaration order.
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<String>) {
        match self {
            Formula::Eq(..) | Formula::Div(..) => {}
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_bound(out);
                }
            }
            Formula::Exists(vs, body) => {
                out.extend(vs.iter().cloned());
                body.collect_bound(out);
            }
        }
    }

    /// Counts atomic (eq/div) subformulas.
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Div(..) => 1,
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::atom_count).sum(),
            Formula::Exists(_, body) => body.atom_count(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(eq {a} {b})"),
            Formula::Div(a, b) => write!(f, "(div {a} {b})"),
            Formula::And(fs) | Formula::Or(fs) => {
                let tag = if matches!(self, Formula::And(_)) {
                    "and"
                } else {
                    "or"
                };
                write!(f, "({tag}")?;
                for g in fs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            Formula::Exists(vs, body) => write!(f, "(exists ({}) {body})", vs.join(" ")),
        }
    }
}

/// Serializes a formula in the canonical S-expression form.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

// --- parser -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    LParen,
    RParen,
    Int(Integer),
    Sym(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push((i, Token::LParen));
            i += 1;
        } else if c == ')' {
            out.push((i, Token::RParen));
            i += 1;
        } else if c.is_ascii_digit() || (c == '-' && i + 1 < bytes.len() && (bytes[i + 1] as char).is_ascii_digit()) {
            let start = i;
            i += 1;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let lit: Integer = text[start..i]
                .parse()
                .map_err(|_| Error::Parse {
                    pos: start,
                    msg: "bad integer literal".into(),
                })?;
            out.push((start, Token::Int(lit)));
        } else if c.is_ascii_lowercase() || c == '+' || c == '*' {
            let start = i;
            i += 1;
            while i < bytes.len() {
                let c = bytes[i] as char;
                if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((start, Token::Sym(text[start..i].to_string())));
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn err<T>(&self, msg: &str) -> Result<T> {
        let pos = self
            .tokens
            .get(self.idx)
            .map(|(p, _)| *p)
            .unwrap_or(self.end);
        Err(Error::Parse {
            pos,
            msg: msg.to_string(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect_lparen(&mut self) -> Result<()> {
        match self.next() {
            Some(Token::LParen) => Ok(()),
            _ => {
                self.idx -= 1;
                self.err("expected '('")
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.next() {
            Some(Token::RParen) => Ok(()),
            _ => {
                self.idx = self.idx.saturating_sub(1);
                self.err("expected ')'")
            }
        }
    }

    fn head_symbol(&mut self) -> Result<String> {
        match self.next() {
            Some(Token::Sym(s)) => Ok(s),
            _ => {
                self.idx = self.idx.saturating_sub(1);
                self.err("expected an operator symbol")
            }
        }
    }

    fn parse_term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Token::Int(_)) => {
                let Some(Token::Int(c)) = self.next() else {
                    unreachable!()
                };
                Ok(Term::int(c))
            }
            Some(Token::Sym(s)) if s != "+" && s != "*" => {
                let name = s.clone();
                if !check_var_name(&name) {
                    return self.err("invalid variable name");
                }
                self.next();
                Ok(Term::var(&name))
            }
            Some(Token::LParen) => {
                self.next();
                let head = self.head_symbol()?;
                let term = match head.as_str() {
                    "+" => {
                        let mut acc = self.parse_term()?;
                        loop {
                            match self.peek() {
                                Some(Token::RParen) | None => break,
                                _ => acc = acc.add(&self.parse_term()?),
                            }
                        }
                        acc
                    }
                    "*" => {
                        let Some(Token::Int(c)) = self.next() else {
                            self.idx = self.idx.saturating_sub(1);
                            return self.err("(* c x) needs an integer literal coefficient");
                        };
                        match self.next() {
                            Some(Token::Sym(v)) if check_var_name(&v) => Term::scaled(c, &v),
                            _ => {
                                self.idx = self.idx.saturating_sub(1);
                                return self.err("(* c x) needs a variable");
                            }
                        }
                    }
                    _ => return self.err("expected '+' or '*' in a term"),
                };
                self.expect_rparen()?;
                Ok(term)
            }
            _ => self.err("expected a term"),
        }
    }

    fn parse_formula(&mut self) -> Result<Formula> {
        self.expect_lparen()?;
        let head = self.head_symbol()?;
        let formula = match head.as_str() {
            "eq" => Formula::Eq(self.parse_term()?, self.parse_term()?),
            "div" => Formula::Div(self.parse_term()?, self.parse_term()?),
            "and" | "or" => {
                let mut fs = Vec::new();
                while !matches!(self.peek(), Some(Token::RParen) | None) {
                    fs.push(self.parse_formula()?);
                }
                if fs.is_empty() {
                    return self.err("empty connective");
                }
                if head == "and" {
                    Formula::And(fs)
                } else {
                    Formula::Or(fs)
                }
            }
            "exists" => {
                self.expect_lparen()?;
                let mut vars = Vec::new();
                while let Some(Token::Sym(s)) = self.peek() {
                    if !check_var_name(s) {
                        return self.err("invalid bound variable name");
                    }
                    vars.push(s.clone());
                    self.next();
                }
                self.expect_rparen()?;
                if vars.is_empty() {
                    return self.err("exists needs at least one variable");
                }
                Formula::Exists(vars, Box::new(self.parse_formula()?))
            }
            "not" | "forall" => {
                return self.err("the language is positive-existential: 'not'/'forall' are rejected")
            }
            _ => return self.err("unknown formula head"),
        };
        self.expect_rparen()?;
        Ok(formula)
    }
}

fn check_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && !matches!(s, "eq" | "div" | "and" | "or" | "exists" | "not" | "forall")
}

/// Parses one formula; trailing garbage is an error.
pub fn parse(text: &str) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        idx: 0,
        end: text.len(),
    };
    let f = p.parse_formula()?;
    if p.idx != p.tokens.len() {
        return p.err("trailing input after formula");
    }
    Ok(f)
}

// --- evaluation -------------------------------------------------------

/// Evaluates a formula whose free variables are covered by `a` and whose
/// existential variables are covered by `w` (certificate-checking mode).
pub fn eval_closed(ring: &SRing, f: &Formula, a: &Assignment, w: &Assignment) -> Result<bool> {
    for (name, v) in a.iter().chain(w.iter()) {
        if !ring.is_s_integer(v) {
            return Err(Error::NotAnSInteger(format!("{name} = {}", v.render())));
        }
    }
    let mut env = a.clone();
    eval_with(ring, f, &mut env, w)
}

fn eval_with(ring: &SRing, f: &Formula, env: &mut Assignment, w: &Assignment) -> Result<bool> {
    match f {
        Formula::Eq(s, t) => Ok(s.eval(ring, env)? == t.eval(ring, env)?),
        Formula::Div(s, t) => ring.divides(&s.eval(ring, env)?, &t.eval(ring, env)?),
        Formula::And(fs) => {
            for g in fs {
                if !eval_with(ring, g, env, w)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_with(ring, g, env, w)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(vars, body) => {
            let mut saved = Vec::new();
            for v in vars {
                let val = w
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))?
                    .clone();
                saved.push((v.clone(), env.insert(v.clone(), val)));
            }
            let out = eval_with(ring, body, env, w);
            for (v, old) in saved {
                match old {
                    Some(x) => env.insert(v, x),
                    None => env.remove(&v),
                };
            }
            out
        }
    }
}

/// Three-valued evaluation under a partial assignment: `None` when some
/// atom touches an unassigned variable (or an unexpanded existential).
fn partial_eval(ring: &SRing, f: &Formula, env: &Assignment) -> Option<bool> {
    match f {
        Formula::Eq(..) | Formula::Div(..) => {
            let decided = f
                .free_vars()
                .iter()
                .all(|v| env.contains_key(v));
            if decided {
                // closed atom over ring members never errors
                eval_with(ring, f, &mut env.clone(), &Assignment::new()).ok()
            } else {
                None
            }
        }
        Formula::And(fs) => {
            let mut all_true = true;
            for g in fs {
                match partial_eval(ring, g, env) {
                    Some(false) => return Some(false),
                    Some(true) => {}
                    None => all_true = false,
                }
            }
            if all_true {
                Some(true)
            } else {
                None
            }
        }
        Formula::Or(fs) => {
            let mut all_false = true;
            for g in fs {
                match partial_eval(ring, g, env) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => all_false = false,
                }
            }
            if all_false {
                Some(false)
            } else {
                None
            }
        }
        Formula::Exists(..) => None,
    }
}

/// Candidate-shape hint for one existential variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hint {
    /// ζ^j·∏π_i^{a_i} with |a_i| ≤ B.
    Unit,
    /// (m + nω)/∏p_i^{α_i}, |m|,|n| ≤ B, 0 ≤ α_i ≤ B over primes below S.
    General,
}

/// The deterministic candidate list for a variable at the given bound:
/// unit hint — torsion × exponent vectors in lexicographic order; general
/// hint — lexicographic over (α, m, n) with m, n ascending from −B.
/// Duplicate canonical values keep their first occurrence only.
pub fn candidates(ring: &SRing, hint: Hint, bound: i64) -> Vec<KElem> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |x: KElem| {
        if seen.insert(x.clone()) {
            out.push(x);
        }
    };
    match hint {
        Hint::Unit => {
            for u in ring.s_unit_box(bound) {
                push(u);
            }
        }
        Hint::General => {
            let b = bound as u32;
            for alpha in crate::util::multi_indices(ring.rational_primes_below.len(), b) {
                let mut den = Integer::from(1);
                for (p, a) in ring.rational_primes_below.iter().zip(&alpha) {
                    den *= Integer::from(*p).pow(*a);
                }
                for m in -bound..=bound {
                    for n in -bound..=bound {
                        let x = KElem::new(Integer::from(m), Integer::from(n), den.clone())
                            .expect("den > 0");
                        if ring.is_s_integer(&x) {
                            push(x);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Bounded witness search: enumerates candidates for every existential
/// variable (declaration order, deterministic-first) and returns the first
/// witness making the formula true under `a`, re-checked via
/// [`eval_closed`] before being returned.
pub fn search_exists(
    ring: &SRing,
    f: &Formula,
    a: &Assignment,
    bound: i64,
    hints: &BTreeMap<String, Hint>,
) -> Option<Assignment> {
    let mut env = a.clone();
    let mut witness = Assignment::new();
    if solve(ring, f, &mut env, bound, hints, &mut witness) {
        debug_assert_eq!(eval_closed(ring, f, a, &witness), Ok(true));
        Some(witness)
    } else {
        None
    }
}

fn solve(
    ring: &SRing,
    f: &Formula,
    env: &mut Assignment,
    bound: i64,
    hints: &BTreeMap<String, Hint>,
    witness: &mut Assignment,
) -> bool {
    match partial_eval(ring, f, env) {
        Some(v) => return v,
        None => {}
    }
    match f {
        Formula::Eq(..) | Formula::Div(..) => unreachable!("atoms are always decided here"),
        Formula::And(fs) => {
            // existential variables are distinct across conjuncts, so each
            // undecided conjunct can be solved independently
            let mut partial_witness = Assignment::new();
            for g in fs {
                match partial_eval(ring, g, env) {
                    Some(true) => continue,
                    Some(false) => return false,
                    None => {
                        if !solve(ring, g, env, bound, hints, &mut partial_witness) {
                            return false;
                        }
                    }
                }
            }
            witness.append(&mut partial_witness);
            true
        }
        Formula::Or(fs) => {
            for g in fs {
                let mut branch_witness = Assignment::new();
                if solve(ring, g, env, bound, hints, &mut branch_witness) {
                    witness.append(&mut branch_witness);
                    return true;
                }
            }
            false
        }
        Formula::Exists(vars, body) => assign_and_solve(ring, vars, body, env, bound, hints, witness),
    }
}

fn assign_and_solve(
    ring: &SRing,
    vars: &[String],
    body: &Formula,
    env: &mut Assignment,
    bound: i64,
    hints: &BTreeMap<String, Hint>,
    witness: &mut Assignment,
) -> bool {
    let Some((v, rest)) = vars.split_first() else {
        return solve(ring, body, env, bound, hints, witness);
    };
    let hint = hints.get(v).copied().unwrap_or(Hint::General);
    for cand in candidates(ring, hint, bound) {
        env.insert(v.clone(), cand.clone());
        // prune the whole subtree when the body is already refuted
        if partial_eval(ring, body, env) != Some(false)
            && assign_and_solve(ring, rest, body, env, bound, hints, witness)
        {
            witness.insert(v.clone(), cand);
            env.remove(v);
            return true;
        }
    }
    env.remove(v);
    false
}
