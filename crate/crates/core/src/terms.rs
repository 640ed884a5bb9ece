//! Ortholattice terms, identities and orthoimplications.
//!
//! Syntax is s-expressions: `(+ a b ...)` for join, `(* a b ...)` for meet,
//! `(' a)` for the orthocomplement, constants `0` and `1`, and identifiers
//! for variables. An identity is `(= g h)`; an orthoimplication is
//! `(oimp ((x1 y1) (x2 y2) ...) f)` and states
//! `x1 ⊥ y1 ∧ x2 ⊥ y2 ∧ ... → f = 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::exactla::{int, RationalMatrix};
use crate::finlat::{interval_subalgebra, FiniteOrtholattice};
use crate::subspaces::{random_subspace, FormSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("model has no orthocomplement")]
    NoOrtho,
    #[error("conclusion of an orthoimplication must not use `'`")]
    ComplementInConclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Ortho(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn join(a: Term, b: Term) -> Self {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Self {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn ortho(a: Term) -> Self {
        Term::Ortho(Box::new(a))
    }

    /// Variables in sorted order.
    pub fn variables(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.collect_vars(&mut set);
        set.into_iter().collect()
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Ortho(a) => a.collect_vars(out),
        }
    }

    pub fn has_ortho(&self) -> bool {
        match self {
            Term::Var(_) | Term::Zero | Term::One => false,
            Term::Join(a, b) | Term::Meet(a, b) => a.has_ortho() || b.has_ortho(),
            Term::Ortho(_) => true,
        }
    }

    pub fn has_constants(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Zero | Term::One => true,
            Term::Join(a, b) | Term::Meet(a, b) => a.has_constants() || b.has_constants(),
            Term::Ortho(a) => a.has_constants(),
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn eval<M: OrthoModel>(
        &self,
        m: &M,
        env: &BTreeMap<String, M::Elem>,
    ) -> Result<M::Elem, TermError> {
        Ok(match self {
            Term::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| TermError::UnboundVariable(v.clone()))?,
            Term::Zero => m.zero(),
            Term::One => m.one(),
            Term::Join(a, b) => m.join(&a.eval(m, env)?, &b.eval(m, env)?),
            Term::Meet(a, b) => m.meet(&a.eval(m, env)?, &b.eval(m, env)?),
            Term::Ortho(a) => m.ortho(&a.eval(m, env)?).ok_or(TermError::NoOrtho)?,
        })
    }

    /// Replaces variables by terms.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Zero | Term::One => self.clone(),
            Term::Join(a, b) => Term::join(a.substitute(map), b.substitute(map)),
            Term::Meet(a, b) => Term::meet(a.substitute(map), b.substitute(map)),
            Term::Ortho(a) => Term::ortho(a.substitute(map)),
        }
    }

    fn replace_constants(&self, u: &str) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Zero => Term::meet(Term::var(u), Term::ortho(Term::var(u))),
            Term::One => Term::join(Term::var(u), Term::ortho(Term::var(u))),
            Term::Join(a, b) => Term::join(a.replace_constants(u), b.replace_constants(u)),
            Term::Meet(a, b) => Term::meet(a.replace_constants(u), b.replace_constants(u)),
            Term::Ortho(a) => Term::ortho(a.replace_constants(u)),
        }
    }

    /// Pushes `'` down to the variables using De Morgan's laws and `x'' = x`.
    /// `negate` says whether the whole term sits under an odd number of `'`.
    pub fn negation_normal_form(&self) -> Term {
        self.nnf(false)
    }

    fn nnf(&self, negate: bool) -> Term {
        match (self, negate) {
            (Term::Var(_), false) => self.clone(),
            (Term::Var(_), true) => Term::ortho(self.clone()),
            (Term::Zero, false) | (Term::One, true) => Term::Zero,
            (Term::One, false) | (Term::Zero, true) => Term::One,
            (Term::Join(a, b), false) => Term::join(a.nnf(false), b.nnf(false)),
            (Term::Join(a, b), true) => Term::meet(a.nnf(true), b.nnf(true)),
            (Term::Meet(a, b), false) => Term::meet(a.nnf(false), b.nnf(false)),
            (Term::Meet(a, b), true) => Term::join(a.nnf(true), b.nnf(true)),
            (Term::Ortho(a), n) => a.nnf(!n),
        }
    }

    fn negated_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Ortho(a) => match a.as_ref() {
                Term::Var(v) => {
                    out.insert(v.clone());
                }
                other => other.negated_variables(out),
            },
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.negated_variables(out);
                b.negated_variables(out);
            }
            _ => {}
        }
    }

    fn replace_negated(&self, fresh: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Ortho(a) => match a.as_ref() {
                Term::Var(v) => Term::Var(fresh[v].clone()),
                _ => unreachable!("term is in negation normal form"),
            },
            Term::Join(a, b) => Term::join(a.replace_negated(fresh), b.replace_negated(fresh)),
            Term::Meet(a, b) => Term::meet(a.replace_negated(fresh), b.replace_negated(fresh)),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Join(a, b) => write!(f, "(+ {a} {b})"),
            Term::Meet(a, b) => write!(f, "(* {a} {b})"),
            Term::Ortho(a) => write!(f, "(' {a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoImplication {
    pub premises: Vec<(String, String)>,
    pub conclusion: Term,
}

impl OrthoImplication {
    pub fn new(premises: Vec<(String, String)>, conclusion: Term) -> Result<Self, TermError> {
        if conclusion.has_ortho() {
            return Err(TermError::ComplementInConclusion);
        }
        Ok(Self {
            premises,
            conclusion,
        })
    }

    /// Premise variables in order of first appearance, then the remaining
    /// conclusion variables in sorted order.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (x, y) in &self.premises {
            for v in [x, y] {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        for v in self.conclusion.variables() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }
}

impl fmt::Display for OrthoImplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self
            .premises
            .iter()
            .map(|(x, y)| format!("({x} {y})"))
            .collect();
        write!(f, "(oimp ({}) {})", ps.join(" "), self.conclusion)
    }
}

/// Anything `parse` can produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Term(Term),
    Identity(Term, Term),
    OrthoImplication(OrthoImplication),
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Term(t) => write!(f, "{t}"),
            Statement::Identity(g, h) => write!(f, "(= {g} {h})"),
            Statement::OrthoImplication(oi) => write!(f, "{oi}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> TermError {
    TermError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn read_sexp(text: &str) -> Result<Sexp, TermError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].1.is_whitespace() {
            *i += 1;
        }
    };
    fn read(bytes: &[(usize, char)], i: &mut usize, end: usize) -> Result<Sexp, TermError> {
        while *i < bytes.len() && bytes[*i].1.is_whitespace() {
            *i += 1;
        }
        let Some(&(pos, c)) = bytes.get(*i) else {
            return Err(syntax(end, "unexpected end of input"));
        };
        match c {
            '(' => {
                *i += 1;
                let mut items = Vec::new();
                loop {
                    while *i < bytes.len() && bytes[*i].1.is_whitespace() {
                        *i += 1;
                    }
                    match bytes.get(*i) {
                        None => return Err(syntax(end, "unclosed `(`")),
                        Some(&(_, ')')) => {
                            *i += 1;
                            return Ok(Sexp::List(items, pos));
                        }
                        Some(_) => items.push(read(bytes, i, end)?),
                    }
                }
            }
            ')' => Err(syntax(pos, "unexpected `)`")),
            '\'' => {
                *i += 1;
                Ok(Sexp::Atom("'".into(), pos))
            }
            _ => {
                let start = *i;
                while *i < bytes.len()
                    && !bytes[*i].1.is_whitespace()
                    && !matches!(bytes[*i].1, '(' | ')' | '\'')
                {
                    *i += 1;
                }
                let s: String = bytes[start..*i].iter().map(|&(_, c)| c).collect();
                Ok(Sexp::Atom(s, pos))
            }
        }
    }
    let e = read(&bytes, &mut i, text.len())?;
    skip_ws(&mut i);
    if let Some(&(pos, _)) = bytes.get(i) {
        return Err(syntax(pos, "trailing input"));
    }
    Ok(e)
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn term_of(e: &Sexp) -> Result<Term, TermError> {
    match e {
        Sexp::Atom(s, pos) => match s.as_str() {
            "0" => Ok(Term::Zero),
            "1" => Ok(Term::One),
            _ if is_identifier(s) => Ok(Term::Var(s.clone())),
            _ => Err(syntax(*pos, format!("unexpected token `{s}`"))),
        },
        Sexp::List(items, pos) => {
            let Some((Sexp::Atom(head, hpos), args)) = items.split_first() else {
                return Err(syntax(*pos, "expected an operator after `(`"));
            };
            match head.as_str() {
                "+" | "*" => {
                    let mut terms = args.iter().map(term_of);
                    let first = terms
                        .next()
                        .ok_or_else(|| syntax(*hpos, format!("`{head}` needs an argument")))??;
                    terms.try_fold(first, |acc, t| {
                        let t = t?;
                        Ok(if head == "+" {
                            Term::join(acc, t)
                        } else {
                            Term::meet(acc, t)
                        })
                    })
                }
                "'" => match args {
                    [a] => Ok(Term::ortho(term_of(a)?)),
                    _ => Err(syntax(*hpos, "`'` takes exactly one argument")),
                },
                _ => Err(syntax(*hpos, format!("unknown operator `{head}`"))),
            }
        }
    }
}

/// Parses a term, an identity `(= g h)` or an orthoimplication.
pub fn parse(text: &str) -> Result<Statement, TermError> {
    let e = read_sexp(text)?;
    if let Sexp::List(items, _) = &e {
        match items.first() {
            Some(Sexp::Atom(h, hpos)) if h == "=" => {
                return match &items[1..] {
                    [g, h] => Ok(Statement::Identity(term_of(g)?, term_of(h)?)),
                    _ => Err(syntax(*hpos, "`=` takes two terms")),
                };
            }
            Some(Sexp::Atom(h, hpos)) if h == "oimp" => {
                let [Sexp::List(ps, _), f] = &items[1..] else {
                    return Err(syntax(*hpos, "expected `(oimp (premises) term)`"));
                };
                let mut premises = Vec::new();
                for p in ps {
                    match p {
                        Sexp::List(xy, _)
                            if matches!(xy[..], [Sexp::Atom(_, _), Sexp::Atom(_, _)]) =>
                        {
                            let (Sexp::Atom(x, px), Sexp::Atom(y, py)) = (&xy[0], &xy[1]) else {
                                unreachable!()
                            };
                            for (v, pv) in [(x, px), (y, py)] {
                                if !is_identifier(v) {
                                    return Err(syntax(*pv, format!("`{v}` is not a variable")));
                                }
                            }
                            premises.push((x.clone(), y.clone()));
                        }
                        other => return Err(syntax(other.pos(), "premise must be a pair `(x y)`")),
                    }
                }
                let conclusion = term_of(f)?;
                return OrthoImplication::new(premises, conclusion)
                    .map(Statement::OrthoImplication)
                    .map_err(|_| syntax(f.pos(), "conclusion must not use `'`"));
            }
            _ => {}
        }
    }
    Ok(Statement::Term(term_of(&e)?))
}

impl FromStr for Term {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse(s)? {
            Statement::Term(t) => Ok(t),
            _ => Err(syntax(0, "expected a term")),
        }
    }
}

impl FromStr for OrthoImplication {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse(s)? {
            Statement::OrthoImplication(o) => Ok(o),
            _ => Err(syntax(0, "expected an orthoimplication")),
        }
    }
}

/// An algebra in which terms can be evaluated.
pub trait OrthoModel {
    type Elem: Clone + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn ortho(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn show(&self, a: &Self::Elem) -> String;
}

impl OrthoModel for FiniteOrtholattice {
    type Elem = usize;
    fn zero(&self) -> usize {
        self.bottom()
    }
    fn one(&self) -> usize {
        self.top()
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        FiniteOrtholattice::join(self, *a, *b)
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        FiniteOrtholattice::meet(self, *a, *b)
    }
    fn ortho(&self, a: &usize) -> Option<usize> {
        self.ortho_table().map(|o| o[*a])
    }
    fn show(&self, a: &usize) -> String {
        self.name(*a).to_string()
    }
}

/// The subspace lattice of a form space.
#[derive(Clone, Debug)]
pub struct SubspaceModel {
    pub form: FormSpace,
}

impl OrthoModel for SubspaceModel {
    type Elem = Subspace;
    fn zero(&self) -> Subspace {
        Subspace::zero(self.form.dim())
    }
    fn one(&self) -> Subspace {
        Subspace::full(self.form.dim())
    }
    fn join(&self, a: &Subspace, b: &Subspace) -> Subspace {
        a.sum(b).expect("same ambient")
    }
    fn meet(&self, a: &Subspace, b: &Subspace) -> Subspace {
        a.intersect(b).expect("same ambient")
    }
    fn ortho(&self, a: &Subspace) -> Option<Subspace> {
        Some(self.form.ortho_complement(a).expect("same ambient"))
    }
    fn show(&self, a: &Subspace) -> String {
        let rows: Vec<String> = a
            .basis_vectors()
            .iter()
            .map(|r| {
                format!(
                    "({})",
                    r.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        format!("span{{{}}}", rows.join(","))
    }
}

/// Outcome of checking a statement in a model. `conclusive` is false for
/// sampled checks that found no counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub conclusive: bool,
    pub checked: usize,
    pub counterexample: Option<Vec<(String, String)>>,
}

impl Verdict {
    fn holds(checked: usize, conclusive: bool) -> Self {
        Self {
            holds: true,
            conclusive,
            checked,
            counterexample: None,
        }
    }

    fn fails(checked: usize, cx: Vec<(String, String)>) -> Self {
        Self {
            holds: false,
            conclusive: true,
            checked,
            counterexample: Some(cx),
        }
    }
}

fn show_env<M: OrthoModel>(m: &M, env: &BTreeMap<String, M::Elem>) -> Vec<(String, String)> {
    env.iter().map(|(k, v)| (k.clone(), m.show(v))).collect()
}

/// Exhaustive check of `g = h` over all assignments in a finite model.
pub fn identity_holds(g: &Term, h: &Term, l: &FiniteOrtholattice) -> Result<Verdict, TermError> {
    if (g.has_ortho() || h.has_ortho()) && !l.has_ortho() {
        return Err(TermError::NoOrtho);
    }
    let mut vars: BTreeSet<String> = g.variables().into_iter().collect();
    vars.extend(h.variables());
    let vars: Vec<String> = vars.into_iter().collect();
    let n = l.len();
    let mut idx = vec![0usize; vars.len()];
    let mut checked = 0;
    loop {
        let env: BTreeMap<String, usize> = vars.iter().cloned().zip(idx.iter().copied()).collect();
        checked += 1;
        if g.eval(l, &env)? != h.eval(l, &env)? {
            return Ok(Verdict::fails(checked, show_env(l, &env)));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(Verdict::holds(checked, true));
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Random check of `g = h` in a subspace lattice.
pub fn identity_sampled<R: Rng + ?Sized>(
    g: &Term,
    h: &Term,
    m: &SubspaceModel,
    samples: usize,
    rng: &mut R,
) -> Result<Verdict, TermError> {
    let mut vars: BTreeSet<String> = g.variables().into_iter().collect();
    vars.extend(h.variables());
    for s in 0..samples {
        let env: BTreeMap<String, Subspace> = vars
            .iter()
            .map(|v| (v.clone(), random_subspace(rng, m.form.dim())))
            .collect();
        if g.eval(m, &env)? != h.eval(m, &env)? {
            return Ok(Verdict::fails(s + 1, show_env(m, &env)));
        }
    }
    Ok(Verdict::holds(samples, false))
}

/// Whether `g ≤ h` holds throughout a finite model.
pub fn order_holds(g: &Term, h: &Term, l: &FiniteOrtholattice) -> Result<bool, TermError> {
    identity_holds(&Term::meet(g.clone(), h.clone()), g, l).map(|v| v.holds)
}

fn fresh_name(base: &str, used: &BTreeSet<String>, counter: &mut usize) -> String {
    loop {
        *counter += 1;
        let cand = format!("{base}{counter}");
        if !used.contains(&cand) {
            return cand;
        }
    }
}

/// Translates the identity `g = h` (with `g ≤ h` assumed to hold in all
/// ortholattices) into an equivalent orthoimplication: constants become
/// `uu'` and `u + u'`, then `h g'` is put in negation normal form and each
/// `x'` is replaced by a fresh variable `y_i` with premise `x ⊥ y_i`.
pub fn to_orthoimplication(g: &Term, h: &Term) -> OrthoImplication {
    let mut used: BTreeSet<String> = g.variables().into_iter().collect();
    used.extend(h.variables());
    let (mut g, mut h) = (g.clone(), h.clone());
    if g.has_constants() || h.has_constants() {
        let u = if used.contains("u") {
            fresh_name("u", &used, &mut 0)
        } else {
            "u".to_string()
        };
        g = g.replace_constants(&u);
        h = h.replace_constants(&u);
        used.insert(u);
    }
    let body = Term::meet(h, Term::ortho(g)).negation_normal_form();
    let mut negated = BTreeSet::new();
    body.negated_variables(&mut negated);
    let mut counter = 0;
    let mut fresh = BTreeMap::new();
    let mut premises = Vec::new();
    for x in &negated {
        let y = fresh_name("y", &used, &mut counter);
        used.insert(y.clone());
        premises.push((x.clone(), y.clone()));
        fresh.insert(x.clone(), y);
    }
    let conclusion = body.replace_negated(&fresh);
    OrthoImplication::new(premises, conclusion)
        .expect("negation normal form removes every complement")
}

/// Exhaustive check of an orthoimplication in a finite ortholattice under
/// the canonical orthogonality `x ⊥ y ⇔ x ≤ y'`.
pub fn orthoimplication_holds(
    oi: &OrthoImplication,
    l: &FiniteOrtholattice,
) -> Result<Verdict, TermError> {
    l.ortho_table().ok_or(TermError::NoOrtho)?;
    let vars = oi.variables();
    let pos: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    // premises become checkable once both ends are assigned
    let mut ready: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vars.len()];
    for (x, y) in &oi.premises {
        let (a, b) = (pos[x.as_str()], pos[y.as_str()]);
        ready[a.max(b)].push((a, b));
    }
    let mut assign = vec![0usize; vars.len()];
    let mut checked = 0;
    let mut cx = None;
    search_oimp(oi, l, &vars, &ready, 0, &mut assign, &mut checked, &mut cx)?;
    Ok(match cx {
        Some(env) => Verdict::fails(checked, show_env(l, &env)),
        None => Verdict::holds(checked, true),
    })
}

#[allow(clippy::too_many_arguments)]
fn search_oimp(
    oi: &OrthoImplication,
    l: &FiniteOrtholattice,
    vars: &[String],
    ready: &[Vec<(usize, usize)>],
    k: usize,
    assign: &mut [usize],
    checked: &mut usize,
    cx: &mut Option<BTreeMap<String, usize>>,
) -> Result<(), TermError> {
    if cx.is_some() {
        return Ok(());
    }
    if k == vars.len() {
        *checked += 1;
        let env: BTreeMap<String, usize> =
            vars.iter().cloned().zip(assign.iter().copied()).collect();
        if oi.conclusion.eval(l, &env)? != l.bottom() {
            *cx = Some(env);
        }
        return Ok(());
    }
    for x in 0..l.len() {
        assign[k] = x;
        if ready[k]
            .iter()
            .all(|&(a, b)| l.leq(assign[a], l.ortho(assign[b])))
        {
            search_oimp(oi, l, vars, ready, k + 1, assign, checked, cx)?;
            if cx.is_some() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Checks the orthoimplication in every interval `[0, u]` with its relative
/// orthocomplement. Returns the first failing `u` with its verdict.
pub fn orthoimplication_holds_in_intervals(
    oi: &OrthoImplication,
    l: &FiniteOrtholattice,
) -> Result<(bool, Option<(String, Verdict)>), TermError> {
    l.ortho_table().ok_or(TermError::NoOrtho)?;
    for u in 0..l.len() {
        let (sub, _) = interval_subalgebra(l, u, l.bottom()).expect("0 ≤ u");
        let v = orthoimplication_holds(oi, &sub)?;
        if !v.holds {
            return Ok((false, Some((l.name(u).to_string(), v))));
        }
    }
    Ok((true, None))
}

/// Random subspace of `w` spanned by up to `dim w` random integer
/// combinations of its basis.
fn random_subspace_inside<R: Rng + ?Sized>(rng: &mut R, w: &Subspace) -> Subspace {
    let k = rng.gen_range(0..=w.dim());
    let coeffs: Vec<Vec<_>> = (0..k)
        .map(|_| (0..w.dim()).map(|_| int(rng.gen_range(-5..=5))).collect())
        .collect();
    let c = RationalMatrix::from_rows_with_cols(coeffs, w.dim()).expect("shape");
    Subspace::row_space(&(&c * w.basis()))
}

/// Sampled check of an orthoimplication in a subspace lattice. Each
/// variable is drawn inside the orthogonal complement of its already drawn
/// premise partners, so every sample satisfies the premises.
pub fn orthoimplication_sampled<R: Rng + ?Sized>(
    oi: &OrthoImplication,
    m: &SubspaceModel,
    samples: usize,
    rng: &mut R,
) -> Result<Verdict, TermError> {
    let vars = oi.variables();
    let n = m.form.dim();
    for s in 0..samples {
        let mut env: BTreeMap<String, Subspace> = BTreeMap::new();
        for v in &vars {
            let mut room = Subspace::full(n);
            for (x, y) in &oi.premises {
                let partner = if x == v {
                    y
                } else if y == v {
                    x
                } else {
                    continue;
                };
                if partner == v {
                    room = Subspace::zero(n);
                } else if let Some(p) = env.get(partner) {
                    room = room
                        .intersect(&m.form.ortho_complement(p).expect("same ambient"))
                        .expect("same ambient");
                }
            }
            env.insert(v.clone(), random_subspace_inside(rng, &room));
        }
        if !oi.conclusion.eval(m, &env)?.is_zero() {
            return Ok(Verdict::fails(s + 1, show_env(m, &env)));
        }
    }
    Ok(Verdict::holds(samples, false))
}
