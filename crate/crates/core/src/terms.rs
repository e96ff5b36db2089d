//! Operations induced by linear terms over a finite algebra.
//!
//! Terms use the variables `x1 … xn` with `n` the number of variables, and
//! the `i`-th argument of the induced operation is bound to `xi`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ops::{Operation, OperationSet};
use crate::universe::{advance, Elem, Universe};

/// Function symbols with their arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(symbols: impl IntoIterator<Item = (String, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (name, arity) in symbols {
            if arity == 0 {
                return Err(Error::ZeroArity);
            }
            if map.insert(name.clone(), arity).is_some() {
                return Err(Error::InvalidInput {
                    field: "ops".into(),
                    reason: format!("duplicate symbol `{name}`"),
                });
            }
        }
        Ok(Signature { symbols: map })
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, &a)| (n.as_str(), a))
    }
}

/// A universe with an operation for every symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    universe: Universe,
    ops: BTreeMap<String, Operation>,
}

impl FiniteAlgebra {
    pub fn new(universe: Universe, ops: impl IntoIterator<Item = (String, Operation)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (name, op) in ops {
            universe.ensure_same(op.universe())?;
            if map.insert(name.clone(), op).is_some() {
                return Err(Error::InvalidInput {
                    field: "ops".into(),
                    reason: format!("duplicate symbol `{name}`"),
                });
            }
        }
        Ok(FiniteAlgebra { universe, ops: map })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn ops(&self) -> &BTreeMap<String, Operation> {
        &self.ops
    }

    pub fn signature(&self) -> Signature {
        Signature {
            symbols: self.ops.iter().map(|(n, op)| (n.clone(), op.arity())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `x_i`, counted from 1.
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variable indices in left-to-right order of occurrence.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => out.push(*i),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn is_linear(&self) -> bool {
        let occ = self.occurrences();
        occ.iter().collect::<BTreeSet<_>>().len() == occ.len()
    }

    pub fn is_increasing(&self) -> bool {
        self.occurrences().windows(2).all(|w| w[0] < w[1])
    }

    /// Renames the variables to `x1 … xn`, keeping their relative order.
    pub fn normalized(&self) -> Term {
        let used: BTreeSet<usize> = self.occurrences().into_iter().collect();
        let rank: BTreeMap<usize, usize> = used.into_iter().enumerate().map(|(r, v)| (v, r + 1)).collect();
        self.rename(&rank)
    }

    fn rename(&self, rank: &BTreeMap<usize, usize>) -> Term {
        match self {
            Term::Var(i) => Term::Var(rank[i]),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(rank)).collect()),
        }
    }

    fn eval(&self, alg: &FiniteAlgebra, args: &[Elem]) -> Elem {
        match self {
            Term::Var(i) => args[i - 1],
            Term::App(f, sub) => {
                let values: Vec<Elem> = sub.iter().map(|t| t.eval(alg, args)).collect();
                alg.ops[f].apply(values)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermMode {
    /// No variable occurs twice.
    Linear,
    /// Linear, with variables occurring in increasing order.
    Increasing,
}

impl std::str::FromStr for TermMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(TermMode::Linear),
            "increasing" => Ok(TermMode::Increasing),
            other => Err(Error::InvalidInput {
                field: "mode".into(),
                reason: format!("expected `linear` or `increasing`, got `{other}`"),
            }),
        }
    }
}

/// Term skeletons with unlabelled leaves, each with its leaf count.
fn shapes(sig: &Signature, max_leaves: usize, depth: usize, cap: u64) -> Result<Vec<(Term, usize)>> {
    let mut out = vec![(Term::Var(0), 1)];
    if depth == 0 {
        return Ok(out);
    }
    let smaller = shapes(sig, max_leaves, depth - 1, cap)?;
    for (name, arity) in sig.symbols() {
        let mut args = Vec::new();
        extend_args(&smaller, arity, max_leaves, 0, &mut args, &mut |children, leaves| {
            out.push((Term::App(name.to_string(), children.to_vec()), leaves));
            if out.len() as u64 > cap {
                return Err(Error::cap("term enumeration", out.len() as u128, cap));
            }
            Ok(())
        })?;
    }
    Ok(out)
}

fn extend_args(
    pool: &[(Term, usize)],
    arity: usize,
    max_leaves: usize,
    leaves: usize,
    args: &mut Vec<Term>,
    emit: &mut dyn FnMut(&[Term], usize) -> Result<()>,
) -> Result<()> {
    if args.len() == arity {
        return emit(args, leaves);
    }
    let remaining = arity - args.len() - 1;
    for (t, n) in pool {
        if leaves + n + remaining > max_leaves {
            continue;
        }
        args.push(t.clone());
        extend_args(pool, arity, max_leaves, leaves + n, args, emit)?;
        args.pop();
    }
    Ok(())
}

fn label(shape: &Term, labels: &mut impl Iterator<Item = usize>) -> Term {
    match shape {
        Term::Var(_) => Term::Var(labels.next().expect("one label per leaf")),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| label(a, labels)).collect()),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n);
            out.push(p);
        }
    }
    out
}

/// Every normalized term with at most `max_vars` variables and depth at
/// most `max_depth` that satisfies `mode`, sorted.
pub fn enumerate_terms(
    sig: &Signature,
    mode: TermMode,
    max_vars: usize,
    max_depth: usize,
    limits: &Limits,
) -> Result<Vec<Term>> {
    if max_vars == 0 {
        return Err(Error::MalformedParams("max_vars must be at least 1".into()));
    }
    let mut out = Vec::new();
    for (shape, leaves) in shapes(sig, max_vars, max_depth, limits.max_terms)? {
        let labellings = match mode {
            TermMode::Increasing => vec![(1..=leaves).collect()],
            TermMode::Linear => permutations(leaves),
        };
        for labels in labellings {
            out.push(label(&shape, &mut labels.into_iter()));
            if out.len() as u64 > limits.max_terms {
                return Err(Error::cap("term enumeration", out.len() as u128, limits.max_terms));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The operation of `term` on `alg`; variables are first renamed to
/// `x1 … xn` in order of their index.
pub fn induce_op(alg: &FiniteAlgebra, term: &Term) -> Result<Operation> {
    check_symbols(alg, term)?;
    let term = term.normalized();
    let arity = term.occurrences().into_iter().max().unwrap_or(0).max(1);
    Operation::from_fn(alg.universe, arity, |args| term.eval(alg, args))
}

fn check_symbols(alg: &FiniteAlgebra, term: &Term) -> Result<()> {
    match term {
        Term::Var(0) => Err(Error::MalformedTerm("variables are numbered from 1".into())),
        Term::Var(_) => Ok(()),
        Term::App(f, args) => {
            let op = alg
                .ops
                .get(f)
                .ok_or_else(|| Error::MalformedTerm(format!("unknown symbol `{f}`")))?;
            if op.arity() != args.len() {
                return Err(Error::MalformedTerm(format!(
                    "`{f}` takes {} arguments, got {}",
                    op.arity(),
                    args.len()
                )));
            }
            args.iter().try_for_each(|a| check_symbols(alg, a))
        }
    }
}

/// The deduplicated operations induced by the terms of `enumerate_terms`.
pub fn induced_set(
    alg: &FiniteAlgebra,
    mode: TermMode,
    max_vars: usize,
    max_depth: usize,
    limits: &Limits,
) -> Result<OperationSet> {
    let terms = enumerate_terms(&alg.signature(), mode, max_vars, max_depth, limits)?;
    let ops = terms
        .par_iter()
        .map(|t| induce_op(alg, t))
        .collect::<Result<Vec<_>>>()?;
    OperationSet::from_ops(alg.universe, ops)
}

/// A composition `f ∘ (g_1, …, g_n)` of a member with members or
/// projections (which every clone contains) that falls outside the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionWitness {
    pub outer: Operation,
    pub inner: Vec<Operation>,
    pub result: Operation,
}

/// First composition witness with result arity `<= max_arity`, searching
/// outer members in order and inner tuples lexicographically; `None` if the
/// set together with all projections is composition-closed at the bound.
pub fn composition_witness(set: &OperationSet, max_arity: usize) -> Result<Option<CompositionWitness>> {
    let universe = set.universe();
    for m in 1..=max_arity {
        let mut pool: Vec<Operation> = (1..=m)
            .map(|i| Operation::projection(universe, m, i))
            .collect::<Result<_>>()?;
        pool.extend(set.of_arity(m).cloned());
        pool.sort();
        pool.dedup();
        for outer in set.iter().filter(|f| !f.is_identity()) {
            let n = outer.arity();
            let mut pick = vec![0usize; n];
            loop {
                let inner: Vec<Operation> = pick.iter().map(|&p| pool[p].clone()).collect();
                let result = outer.compose(&inner)?;
                if !set.contains(&result) {
                    return Ok(Some(CompositionWitness {
                        outer: outer.clone(),
                        inner,
                        result,
                    }));
                }
                if !advance(&mut pick, pool.len()) {
                    break;
                }
            }
        }
    }
    Ok(None)
}
