//! Terms, equations and equation schemas.
//!
//! Schemas are written one per line in an s-expression syntax:
//!
//! ```text
//! # comment
//! Name: LHS = RHS [where COND, COND, ...]
//! ```
//!
//! `<=` and `>=` may replace `=`. Terms are `0`, `1`, element variables
//! (lower-case identifiers), `(+ t ...)`, `(* t ...)`, `(- t)`, `(c IDX t)`,
//! `(d IDX IDX)` and `(s MAP t)`. An index `IDX` is a number, an index
//! variable, or `(MAP IDX)`. A map `MAP` is a literal `[0 0 1]`, `id`, a map
//! variable (upper-case identifier) or a composition `(o MAP MAP)`, where
//! `(o S T)` applies T first. Conditions are `IDX != IDX`, `IDX == IDX`,
//! `inj MAP`, `notin IDX MAP` (IDX is not in the image) and `misses MAP IDX IDX`
//! (`misses S i j` states that S maps n \ {i} onto n \ {j}).

use crate::atoms::Transform;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// A concrete term over element variables `0..arity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Cyl(usize, Box<Term>),
    Diag(usize, usize),
    Subst(Transform, Box<Term>),
}

impl Term {
    pub fn var(k: usize) -> Term {
        Term::Var(k)
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn complement(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn cyl(i: usize, a: Term) -> Term {
        Term::Cyl(i, Box::new(a))
    }

    pub fn subst(s: Transform, a: Term) -> Term {
        Term::Subst(s, Box::new(a))
    }

    /// One more than the largest variable index.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(k) => k + 1,
            Term::Zero | Term::One | Term::Diag(..) => 0,
            Term::Join(a, b) | Term::Meet(a, b) => a.arity().max(b.arity()),
            Term::Neg(a) | Term::Cyl(_, a) | Term::Subst(_, a) => a.arity(),
        }
    }

    pub fn uses_diagonals(&self) -> bool {
        match self {
            Term::Diag(..) => true,
            Term::Var(_) | Term::Zero | Term::One => false,
            Term::Join(a, b) | Term::Meet(a, b) => a.uses_diagonals() || b.uses_diagonals(),
            Term::Neg(a) | Term::Cyl(_, a) | Term::Subst(_, a) => a.uses_diagonals(),
        }
    }

    pub fn uses_substitutions(&self) -> bool {
        match self {
            Term::Subst(..) => true,
            Term::Var(_) | Term::Zero | Term::One | Term::Diag(..) => false,
            Term::Join(a, b) | Term::Meet(a, b) => a.uses_substitutions() || b.uses_substitutions(),
            Term::Neg(a) | Term::Cyl(_, a) => a.uses_substitutions(),
        }
    }

    /// Largest dimension index mentioned, plus one.
    pub fn max_index(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::One => 0,
            Term::Diag(i, j) => i.max(j) + 1,
            Term::Join(a, b) | Term::Meet(a, b) => a.max_index().max(b.max_index()),
            Term::Neg(a) => a.max_index(),
            Term::Cyl(i, a) => (i + 1).max(a.max_index()),
            Term::Subst(s, a) => s.n().max(a.max_index()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(k) => write!(f, "x{k}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Join(a, b) => write!(f, "(+ {a} {b})"),
            Term::Meet(a, b) => write!(f, "(* {a} {b})"),
            Term::Neg(a) => write!(f, "(- {a})"),
            Term::Cyl(i, a) => write!(f, "(c {i} {a})"),
            Term::Diag(i, j) => write!(f, "(d {i} {j})"),
            Term::Subst(s, a) => {
                let m: Vec<String> = s.as_slice().iter().map(u8::to_string).collect();
                write!(f, "(s [{}] {a})", m.join(" "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    /// Left side below right side.
    Le,
}

/// A concrete equation (or inequation) between two terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub lhs: Term,
    pub relation: Relation,
    pub rhs: Term,
    /// Names of the element variables, indexed by variable number.
    pub variables: Vec<String>,
}

impl Equation {
    pub fn new(name: impl Into<String>, lhs: Term, relation: Relation, rhs: Term) -> Self {
        let arity = lhs.arity().max(rhs.arity());
        Equation {
            name: name.into(),
            lhs,
            relation,
            rhs,
            variables: (0..arity).map(|k| format!("x{k}")).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.variables.len()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Eq => "=",
            Relation::Le => "<=",
        };
        write!(f, "{}: {} {rel} {}", self.name, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("schema {schema}: index {index} out of range for dimension {n}")]
    IndexRange {
        schema: String,
        index: usize,
        n: usize,
    },
    #[error("schema {schema}: map literal of length {len} in dimension {n}")]
    MapLength {
        schema: String,
        len: usize,
        n: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum MapExpr {
    Lit(Vec<u8>),
    Id,
    Var(String),
    Compose(Box<MapExpr>, Box<MapExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum IndexExpr {
    Lit(usize),
    Var(String),
    Apply(MapExpr, Box<IndexExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SchemaTerm {
    Var(String),
    Zero,
    One,
    Join(Vec<SchemaTerm>),
    Meet(Vec<SchemaTerm>),
    Neg(Box<SchemaTerm>),
    Cyl(IndexExpr, Box<SchemaTerm>),
    Diag(IndexExpr, IndexExpr),
    Subst(MapExpr, Box<SchemaTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Condition {
    Ne(IndexExpr, IndexExpr),
    Eq(IndexExpr, IndexExpr),
    Injective(MapExpr),
    NotInImage(IndexExpr, MapExpr),
    Misses(MapExpr, IndexExpr, IndexExpr),
}

/// An equation with index and map parameters, instantiated per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    /// The source line, for reports.
    pub text: String,
    lhs: SchemaTerm,
    relation: Relation,
    rhs: SchemaTerm,
    conditions: Vec<Condition>,
    index_vars: Vec<String>,
    map_vars: Vec<String>,
    element_vars: Vec<String>,
}

#[derive(Default)]
struct Binding {
    index: BTreeMap<String, usize>,
    map: BTreeMap<String, Transform>,
}

impl MapExpr {
    fn eval(&self, n: usize, b: &Binding) -> Result<Transform, usize> {
        match self {
            MapExpr::Lit(v) => {
                if v.len() != n {
                    return Err(v.len());
                }
                Ok(Transform::new(v.clone()).map_err(|_| v.len())?)
            }
            MapExpr::Id => Ok(Transform::identity(n)),
            MapExpr::Var(s) => Ok(b.map[s].clone()),
            MapExpr::Compose(s, t) => Ok(s.eval(n, b)?.compose(&t.eval(n, b)?)),
        }
    }

    fn vars(&self, out: &mut Vec<String>) {
        match self {
            MapExpr::Var(s) => push_unique(out, s),
            MapExpr::Compose(s, t) => {
                s.vars(out);
                t.vars(out);
            }
            MapExpr::Lit(_) | MapExpr::Id => {}
        }
    }
}

impl IndexExpr {
    /// `Err(None)` for a bad index, `Err(Some(len))` for a bad map literal.
    fn eval(&self, n: usize, b: &Binding) -> Result<usize, Option<usize>> {
        match self {
            IndexExpr::Lit(k) => Ok(*k),
            IndexExpr::Var(s) => Ok(b.index[s]),
            IndexExpr::Apply(m, i) => {
                let t = m.eval(n, b).map_err(Some)?;
                let i = i.eval(n, b)?;
                if i >= n {
                    return Err(None);
                }
                Ok(t.apply(i))
            }
        }
    }

    fn vars(&self, idx: &mut Vec<String>, maps: &mut Vec<String>) {
        match self {
            IndexExpr::Var(s) => push_unique(idx, s),
            IndexExpr::Apply(m, i) => {
                m.vars(maps);
                i.vars(idx, maps);
            }
            IndexExpr::Lit(_) => {}
        }
    }
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

impl SchemaTerm {
    fn vars(&self, idx: &mut Vec<String>, maps: &mut Vec<String>, elems: &mut Vec<String>) {
        match self {
            SchemaTerm::Var(s) => push_unique(elems, s),
            SchemaTerm::Zero | SchemaTerm::One => {}
            SchemaTerm::Join(ts) | SchemaTerm::Meet(ts) => {
                ts.iter().for_each(|t| t.vars(idx, maps, elems))
            }
            SchemaTerm::Neg(t) => t.vars(idx, maps, elems),
            SchemaTerm::Cyl(i, t) => {
                i.vars(idx, maps);
                t.vars(idx, maps, elems);
            }
            SchemaTerm::Diag(i, j) => {
                i.vars(idx, maps);
                j.vars(idx, maps);
            }
            SchemaTerm::Subst(m, t) => {
                m.vars(maps);
                t.vars(idx, maps, elems);
            }
        }
    }

    fn instantiate(&self, n: usize, b: &Binding, elems: &[String]) -> Result<Term, Option<usize>> {
        let index = |e: &IndexExpr| -> Result<usize, Option<usize>> {
            let i = e.eval(n, b)?;
            if i >= n {
                Err(None)
            } else {
                Ok(i)
            }
        };
        Ok(match self {
            SchemaTerm::Var(s) => Term::Var(elems.iter().position(|e| e == s).expect("collected")),
            SchemaTerm::Zero => Term::Zero,
            SchemaTerm::One => Term::One,
            SchemaTerm::Join(ts) => fold(ts, n, b, elems, Term::join)?,
            SchemaTerm::Meet(ts) => fold(ts, n, b, elems, Term::meet)?,
            SchemaTerm::Neg(t) => Term::complement(t.instantiate(n, b, elems)?),
            SchemaTerm::Cyl(i, t) => Term::cyl(index(i)?, t.instantiate(n, b, elems)?),
            SchemaTerm::Diag(i, j) => Term::Diag(index(i)?, index(j)?),
            SchemaTerm::Subst(m, t) => {
                Term::subst(m.eval(n, b).map_err(Some)?, t.instantiate(n, b, elems)?)
            }
        })
    }
}

fn fold(
    ts: &[SchemaTerm],
    n: usize,
    b: &Binding,
    elems: &[String],
    op: fn(Term, Term) -> Term,
) -> Result<Term, Option<usize>> {
    let mut it = ts.iter();
    let first = it
        .next()
        .expect("parser requires operands")
        .instantiate(n, b, elems)?;
    it.try_fold(first, |acc, t| Ok(op(acc, t.instantiate(n, b, elems)?)))
}

impl Condition {
    fn holds(&self, n: usize, b: &Binding) -> Result<bool, Option<usize>> {
        let idx = |e: &IndexExpr| -> Result<usize, Option<usize>> {
            let i = e.eval(n, b)?;
            if i >= n {
                Err(None)
            } else {
                Ok(i)
            }
        };
        Ok(match self {
            Condition::Ne(a, c) => idx(a)? != idx(c)?,
            Condition::Eq(a, c) => idx(a)? == idx(c)?,
            Condition::Injective(m) => m.eval(n, b).map_err(Some)?.is_injective(),
            Condition::NotInImage(i, m) => {
                let i = idx(i)?;
                m.eval(n, b).map_err(Some)?.image_mask(None) >> i & 1 == 0
            }
            Condition::Misses(m, i, j) => {
                let t = m.eval(n, b).map_err(Some)?;
                let (i, j) = (idx(i)?, idx(j)?);
                t.missed_outside(i) == Some(j)
            }
        })
    }

    fn vars(&self, idx: &mut Vec<String>, maps: &mut Vec<String>) {
        match self {
            Condition::Ne(a, c) | Condition::Eq(a, c) => {
                a.vars(idx, maps);
                c.vars(idx, maps);
            }
            Condition::Injective(m) => m.vars(maps),
            Condition::NotInImage(i, m) => {
                i.vars(idx, maps);
                m.vars(maps);
            }
            Condition::Misses(m, i, j) => {
                m.vars(maps);
                i.vars(idx, maps);
                j.vars(idx, maps);
            }
        }
    }
}

impl Schema {
    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn element_arity(&self) -> usize {
        self.element_vars.len()
    }

    /// All instances in dimension `n` whose conditions hold, in lexicographic
    /// order of the parameter assignment.
    pub fn instantiate(&self, n: usize) -> Result<Vec<Equation>, InstantiateError> {
        let maps: Vec<Transform> = if self.map_vars.is_empty() {
            Vec::new()
        } else {
            Transform::all(n).collect()
        };
        let ni = self.index_vars.len();
        let nm = self.map_vars.len();
        let total = n.pow(ni as u32) * maps.len().pow(nm as u32).max(1);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let mut b = Binding::default();
            let mut label = Vec::new();
            for v in self.map_vars.iter().rev() {
                let t = maps[c % maps.len()].clone();
                c /= maps.len();
                b.map.insert(v.clone(), t);
            }
            for v in self.index_vars.iter().rev() {
                b.index.insert(v.clone(), c % n);
                c /= n;
            }
            for v in &self.index_vars {
                label.push(format!("{v}={}", b.index[v]));
            }
            for v in &self.map_vars {
                label.push(format!("{v}={:?}", b.map[v]));
            }
            let err = |e: Option<usize>| match e {
                None => InstantiateError::IndexRange {
                    schema: self.name.clone(),
                    index: n,
                    n,
                },
                Some(len) => InstantiateError::MapLength {
                    schema: self.name.clone(),
                    len,
                    n,
                },
            };
            let mut ok = true;
            for cond in &self.conditions {
                if !cond.holds(n, &b).map_err(err)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let lhs = self
                .lhs
                .instantiate(n, &b, &self.element_vars)
                .map_err(err)?;
            let rhs = self
                .rhs
                .instantiate(n, &b, &self.element_vars)
                .map_err(err)?;
            let name = if label.is_empty() {
                self.name.clone()
            } else {
                format!("{}[{}]", self.name, label.join(","))
            };
            out.push(Equation {
                name,
                lhs,
                relation: self.relation,
                rhs,
                variables: self.element_vars.clone(),
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    LBracket,
    RBracket,
    Word(String),
}

fn tokenize(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<Tok>| {
        if !cur.is_empty() {
            out.push(Tok::Word(std::mem::take(cur)));
        }
    };
    for ch in s.chars() {
        match ch {
            '(' | ')' | '[' | ']' => {
                flush(&mut cur, &mut out);
                out.push(match ch {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    '[' => Tok::LBracket,
                    _ => Tok::RBracket,
                });
            }
            c if c.is_whitespace() || c == ',' => flush(&mut cur, &mut out),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    out
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

type PResult<T> = Result<T, ParseError>;

fn is_ident(w: &str) -> bool {
    let mut cs = w.chars();
    cs.next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> PResult<Tok> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        let got = self.next()?;
        if got != t {
            return self.err(format!("expected {t:?}, found {got:?}"));
        }
        Ok(())
    }

    fn word(&mut self) -> PResult<String> {
        match self.next()? {
            Tok::Word(w) => Ok(w),
            t => self.err(format!("expected a word, found {t:?}")),
        }
    }

    fn map(&mut self) -> PResult<MapExpr> {
        match self.next()? {
            Tok::LBracket => {
                let mut v = Vec::new();
                loop {
                    match self.next()? {
                        Tok::RBracket => break,
                        Tok::Word(w) => match w.parse::<u8>() {
                            Ok(x) => v.push(x),
                            Err(_) => return self.err(format!("bad map entry {w:?}")),
                        },
                        t => return self.err(format!("unexpected {t:?} in map literal")),
                    }
                }
                if v.is_empty() {
                    return self.err("empty map literal");
                }
                Ok(MapExpr::Lit(v))
            }
            Tok::Word(w) if w == "id" => Ok(MapExpr::Id),
            Tok::Word(w) if is_ident(&w) && w.starts_with(|c: char| c.is_ascii_uppercase()) => {
                Ok(MapExpr::Var(w))
            }
            Tok::Open => {
                let op = self.word()?;
                if op != "o" {
                    return self.err(format!("expected map composition (o S T), found {op:?}"));
                }
                let a = self.map()?;
                let b = self.map()?;
                self.expect(Tok::Close)?;
                Ok(MapExpr::Compose(Box::new(a), Box::new(b)))
            }
            t => self.err(format!("expected a map, found {t:?}")),
        }
    }

    fn index(&mut self) -> PResult<IndexExpr> {
        match self.next()? {
            Tok::Word(w) => {
                if let Ok(k) = w.parse::<usize>() {
                    Ok(IndexExpr::Lit(k))
                } else if is_ident(&w) && w.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Ok(IndexExpr::Var(w))
                } else {
                    self.err(format!("bad index {w:?}"))
                }
            }
            Tok::Open => {
                let m = self.map()?;
                let i = self.index()?;
                self.expect(Tok::Close)?;
                Ok(IndexExpr::Apply(m, Box::new(i)))
            }
            t => self.err(format!("expected an index, found {t:?}")),
        }
    }

    fn term(&mut self) -> PResult<SchemaTerm> {
        match self.next()? {
            Tok::Word(w) => match w.as_str() {
                "0" => Ok(SchemaTerm::Zero),
                "1" => Ok(SchemaTerm::One),
                _ if is_ident(&w) && w.starts_with(|c: char| c.is_ascii_lowercase()) => {
                    Ok(SchemaTerm::Var(w))
                }
                _ => self.err(format!("bad term {w:?}")),
            },
            Tok::Open => {
                let op = self.word()?;
                let t = match op.as_str() {
                    "+" | "*" => {
                        let mut args = Vec::new();
                        while self.peek() != Some(&Tok::Close) {
                            args.push(self.term()?);
                        }
                        if args.is_empty() {
                            return self.err(format!("({op}) needs at least one operand"));
                        }
                        if op == "+" {
                            SchemaTerm::Join(args)
                        } else {
                            SchemaTerm::Meet(args)
                        }
                    }
                    "-" => SchemaTerm::Neg(Box::new(self.term()?)),
                    "c" => {
                        let i = self.index()?;
                        SchemaTerm::Cyl(i, Box::new(self.term()?))
                    }
                    "d" => {
                        let i = self.index()?;
                        SchemaTerm::Diag(i, self.index()?)
                    }
                    "s" => {
                        let m = self.map()?;
                        SchemaTerm::Subst(m, Box::new(self.term()?))
                    }
                    _ => return self.err(format!("unknown operator {op:?}")),
                };
                self.expect(Tok::Close)?;
                Ok(t)
            }
            t => self.err(format!("expected a term, found {t:?}")),
        }
    }

    fn condition(&mut self) -> PResult<Condition> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "inj" => {
                self.pos += 1;
                Ok(Condition::Injective(self.map()?))
            }
            Some(Tok::Word(w)) if w == "notin" => {
                self.pos += 1;
                let i = self.index()?;
                Ok(Condition::NotInImage(i, self.map()?))
            }
            Some(Tok::Word(w)) if w == "misses" => {
                self.pos += 1;
                let m = self.map()?;
                let i = self.index()?;
                Ok(Condition::Misses(m, i, self.index()?))
            }
            _ => {
                let a = self.index()?;
                let op = self.word()?;
                let b = self.index()?;
                match op.as_str() {
                    "!=" => Ok(Condition::Ne(a, b)),
                    "==" => Ok(Condition::Eq(a, b)),
                    _ => self.err(format!("unknown condition operator {op:?}")),
                }
            }
        }
    }
}

/// Parse a schema file. Blank lines and `#` comments are ignored.
pub fn parse_schemas(src: &str) -> Result<Vec<Schema>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let err = |msg: String| ParseError::Syntax { line, msg };
        let (name, body) = text
            .split_once(':')
            .ok_or_else(|| err("expected `Name: lhs = rhs`".into()))?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(err(format!("bad equation name {name:?}")));
        }
        let (eq, conds) = match body.split_once(" where ") {
            Some((e, c)) => (e, Some(c)),
            None => (body, None),
        };
        let mut p = Parser {
            toks: tokenize(eq),
            pos: 0,
            line,
        };
        let lhs = p.term()?;
        let rel = p.word()?;
        let rhs = p.term()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input after equation");
        }
        let (lhs, relation, rhs) = match rel.as_str() {
            "=" => (lhs, Relation::Eq, rhs),
            "<=" => (lhs, Relation::Le, rhs),
            ">=" => (rhs, Relation::Le, lhs),
            _ => return p.err(format!("expected =, <= or >=, found {rel:?}")),
        };
        let mut conditions = Vec::new();
        if let Some(c) = conds {
            let mut q = Parser {
                toks: tokenize(c),
                pos: 0,
                line,
            };
            while q.pos < q.toks.len() {
                conditions.push(q.condition()?);
            }
            if conditions.is_empty() {
                return q.err("empty where clause");
            }
        }
        let (mut idx, mut maps, mut elems) = (Vec::new(), Vec::new(), Vec::new());
        lhs.vars(&mut idx, &mut maps, &mut elems);
        rhs.vars(&mut idx, &mut maps, &mut elems);
        for c in &conditions {
            c.vars(&mut idx, &mut maps);
        }
        if let Some(v) = idx.iter().find(|v| elems.contains(v)) {
            return Err(err(format!(
                "{v:?} used both as an index and as an element"
            )));
        }
        out.push(Schema {
            name: name.to_string(),
            text: text.to_string(),
            lhs,
            relation,
            rhs,
            conditions,
            index_vars: idx,
            map_vars: maps,
            element_vars: elems,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_instantiates_commutativity() {
        let s = parse_schemas("C4: (c i (c j x)) = (c j (c i x)) where i != j").unwrap();
        assert_eq!(s.len(), 1);
        let eqs = s[0].instantiate(3).unwrap();
        assert_eq!(eqs.len(), 6);
        assert_eq!(eqs[0].name, "C4[i=0,j=1]");
        assert_eq!(
            eqs[0].to_string(),
            "C4[i=0,j=1]: (c 0 (c 1 x0)) = (c 1 (c 0 x0))"
        );
        assert_eq!(eqs[0].arity(), 1);
    }

    #[test]
    fn sugar_and_comments() {
        let src = "# header\n\nA: (c 0 x) >= x  # trailing\nB: x <= 1\n";
        let s = parse_schemas(src).unwrap();
        assert_eq!(s.len(), 2);
        let a = &s[0].instantiate(3).unwrap()[0];
        assert_eq!(a.relation, Relation::Le);
        assert_eq!(a.lhs, Term::Var(0));
        assert_eq!(a.rhs, Term::cyl(0, Term::Var(0)));
    }

    #[test]
    fn maps_and_conditions() {
        let s = parse_schemas(
            "S: (s S (d i j)) = (d (S i) (S j))\n\
             T: (c i (s S x)) = (s S x) where notin i S\n\
             U: (s (o S T) x) = (s S (s T x))\n\
             V: (s [0 0 2] x) = (s [0 0 2] (s id x))\n\
             W: x = x where misses S i j",
        )
        .unwrap();
        assert_eq!(s[0].instantiate(3).unwrap().len(), 27 * 9);
        // maps missing some i: all non-surjective maps, counted per missing index
        let t = s[1].instantiate(3).unwrap();
        let expected: usize = Transform::all(3)
            .map(|m| (0..3).filter(|&i| m.image_mask(None) >> i & 1 == 0).count())
            .sum();
        assert_eq!(t.len(), expected);
        assert_eq!(s[2].instantiate(3).unwrap().len(), 27 * 27);
        assert_eq!(s[3].instantiate(3).unwrap().len(), 1);
        assert!(matches!(
            s[3].instantiate(4),
            Err(InstantiateError::MapLength { len: 3, n: 4, .. })
        ));
        let w = s[4].instantiate(3).unwrap();
        assert!(!w.is_empty() && w.len() < 27 * 9);
    }

    #[test]
    fn multiway_join_folds_left() {
        let s = parse_schemas("J: (+ x y z) = (+ (+ x y) z)").unwrap();
        let e = &s[0].instantiate(3).unwrap()[0];
        assert_eq!(e.lhs, e.rhs);
        assert_eq!(e.arity(), 3);
    }

    #[test]
    fn syntax_errors_report_lines() {
        for bad in [
            "no colon here",
            "A: (c i x) = ",
            "A: (q x) = x",
            "A: x = x where i ?? j",
            "A: (c i i) = i",
            "A: (+) = 0",
            "A: x == x",
            "A: (c 0 x) = x extra",
        ] {
            let e = parse_schemas(&format!("\n{bad}")).unwrap_err();
            assert!(
                matches!(e, ParseError::Syntax { line: 2, .. }),
                "{bad}: {e:?}"
            );
        }
    }

    #[test]
    fn out_of_range_literal_index() {
        let s = parse_schemas("A: (c 5 x) = x").unwrap();
        assert!(matches!(
            s[0].instantiate(3),
            Err(InstantiateError::IndexRange { .. })
        ));
    }
}
