//! Operation tables on a finite universe, superposition, composition and the
//! arity-bounded preclone closure.
//!
//! A table lists `f(a_1, …, a_n)` for all argument tuples in lexicographic
//! order with the last argument varying fastest.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::universe::{decode_tuple, encode_tuple, Elem, Universe};

const MAX_TABLE_LEN: u128 = 1 << 26;

/// An `n`-ary operation `A^n -> A`, `n >= 1`.
///
/// Ordering is by universe, then arity, then table; two operations of
/// different arity are always distinct even if they "behave" alike.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Operation {
    universe: Universe,
    arity: usize,
    table: Vec<Elem>,
}

fn table_len(universe: Universe, arity: usize) -> Result<usize> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    match universe.checked_pow(arity) {
        Some(len) if len <= MAX_TABLE_LEN => Ok(len as usize),
        other => Err(Error::CapExceeded {
            what: "operation table",
            needed: other.unwrap_or(u128::MAX),
            cap: MAX_TABLE_LEN,
        }),
    }
}

impl Operation {
    /// Builds an operation from its value table, rejecting tables of the
    /// wrong length or with entries outside the universe.
    pub fn new(universe: Universe, arity: usize, table: Vec<Elem>) -> Result<Self> {
        let len = table_len(universe, arity)?;
        if table.len() != len {
            return Err(Error::LengthMismatch {
                field: "table",
                expected: len,
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= universe.size()) {
            return Err(Error::ElementOutOfRange {
                value: bad as usize,
                universe: universe.size(),
            });
        }
        Ok(Operation { universe, arity, table })
    }

    /// Tabulates `f` over all argument tuples.
    pub fn from_fn(universe: Universe, arity: usize, f: impl Fn(&[Elem]) -> Elem) -> Result<Self> {
        let len = table_len(universe, arity)?;
        let k = universe.size();
        let mut args = vec![0; arity];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            decode_tuple(k, idx, &mut args);
            table.push(f(&args));
        }
        Operation::new(universe, arity, table)
    }

    /// The `i`-th `n`-ary projection `x_i^(n)`, with `i` counted from 1.
    pub fn projection(universe: Universe, arity: usize, i: usize) -> Result<Self> {
        if i == 0 || i > arity {
            return Err(Error::IndexOutOfRange { index: i, arity });
        }
        Operation::from_fn(universe, arity, |args| args[i - 1])
    }

    /// `x_1^(1)`, the neutral element of the full preclone.
    pub fn identity(universe: Universe) -> Self {
        Operation {
            universe,
            arity: 1,
            table: universe.elements().collect(),
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.arity == 1 && self.table.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Applies the operation to an argument tuple.
    pub fn eval(&self, args: &[Elem]) -> Result<Elem> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        for &a in args {
            self.universe.check(a as usize)?;
        }
        Ok(self.apply(args.iter().copied()))
    }

    /// Unchecked lookup; callers guarantee length and range.
    #[inline]
    pub(crate) fn apply(&self, args: impl IntoIterator<Item = Elem>) -> Elem {
        self.table[encode_tuple(self.universe.size(), args)]
    }

    /// Superposition `f * (g_1, …, g_n)`: each `g_i` reads its own consecutive
    /// block of arguments, so the result has arity `m_1 + … + m_n`.
    pub fn superpose(&self, inner: &[Operation]) -> Result<Operation> {
        if inner.len() != self.arity {
            return Err(Error::WrongOperandCount {
                expected: self.arity,
                found: inner.len(),
            });
        }
        for g in inner {
            self.universe.ensure_same(g.universe)?;
        }
        let k = self.universe.size();
        let arity: usize = inner.iter().map(|g| g.arity).sum();
        let len = table_len(self.universe, arity)?;
        let block_sizes: Vec<usize> = inner.iter().map(|g| g.table.len()).collect();
        let mut blocks = vec![0usize; inner.len()];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            let mut rest = idx;
            for (slot, &size) in blocks.iter_mut().zip(&block_sizes).rev() {
                *slot = rest % size;
                rest /= size;
            }
            let outer = inner
                .iter()
                .zip(&blocks)
                .fold(0, |acc, (g, &b)| acc * k + g.table[b] as usize);
            table.push(self.table[outer]);
        }
        Ok(Operation {
            universe: self.universe,
            arity,
            table,
        })
    }

    /// Clone composition `f ∘ (g_1, …, g_n)` where all `g_i` share one arity.
    pub fn compose(&self, inner: &[Operation]) -> Result<Operation> {
        if inner.len() != self.arity {
            return Err(Error::WrongOperandCount {
                expected: self.arity,
                found: inner.len(),
            });
        }
        let arity = inner[0].arity;
        for g in inner {
            self.universe.ensure_same(g.universe)?;
            if g.arity != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: g.arity,
                });
            }
        }
        let table = (0..inner[0].table.len())
            .map(|idx| self.apply(inner.iter().map(|g| g.table[idx])))
            .collect();
        Ok(Operation {
            universe: self.universe,
            arity,
            table,
        })
    }

    /// `self ∘ (x_{offset+1}^(total), …, x_{offset+n}^(total))`: the same
    /// operation reading the argument block starting at `offset` of a
    /// `total`-ary tuple.
    pub fn spread(&self, total: usize, offset: usize) -> Result<Operation> {
        if offset + self.arity > total {
            return Err(Error::IndexOutOfRange {
                index: offset + self.arity,
                arity: total,
            });
        }
        let projections = (1..=self.arity)
            .map(|i| Operation::projection(self.universe, total, offset + i))
            .collect::<Result<Vec<_>>>()?;
        self.compose(&projections)
    }

    /// Every `arity`-ary operation on `universe`, in table order.
    pub fn all_of_arity(universe: Universe, arity: usize) -> Result<impl Iterator<Item = Operation>> {
        let len = table_len(universe, arity)?;
        let k = universe.size();
        let count = universe
            .checked_pow(len)
            .filter(|&c| c <= u64::MAX as u128)
            .ok_or(Error::CapExceeded {
                what: "operation enumeration",
                needed: u128::MAX,
                cap: u64::MAX as u128,
            })? as u64;
        Ok((0..count).map(move |code| {
            let mut table = vec![0; len];
            let mut rest = code;
            for slot in table.iter_mut().rev() {
                *slot = (rest % k as u64) as Elem;
                rest /= k as u64;
            }
            Operation { universe, arity, table }
        }))
    }

    /// Number of `arity`-ary operations, `k^(k^arity)`, if it fits.
    pub fn count_of_arity(universe: Universe, arity: usize) -> Option<u128> {
        let len = universe.checked_pow(arity)?;
        universe.checked_pow(usize::try_from(len).ok()?)
    }
}

impl fmt::Debug for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op{}{:?}", self.arity, self.table)
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A finite set of operations on one universe, possibly of mixed arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperationSet {
    universe: Universe,
    members: BTreeSet<Operation>,
}

impl OperationSet {
    pub fn new(universe: Universe) -> Self {
        OperationSet {
            universe,
            members: BTreeSet::new(),
        }
    }

    pub fn from_ops(universe: Universe, ops: impl IntoIterator<Item = Operation>) -> Result<Self> {
        let mut set = OperationSet::new(universe);
        for op in ops {
            set.insert(op)?;
        }
        Ok(set)
    }

    /// Every operation of arity `1..=max_arity`.
    pub fn all(universe: Universe, max_arity: usize) -> Result<Self> {
        let mut set = OperationSet::new(universe);
        for n in 1..=max_arity {
            set.members.extend(Operation::all_of_arity(universe, n)?);
        }
        Ok(set)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Inserts `op`; returns whether it was new.
    pub fn insert(&mut self, op: Operation) -> Result<bool> {
        self.universe.ensure_same(op.universe)?;
        Ok(self.members.insert(op))
    }

    pub fn contains(&self, op: &Operation) -> bool {
        self.members.contains(op)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Operation> + Clone {
        self.members.iter()
    }

    pub fn of_arity(&self, arity: usize) -> impl Iterator<Item = &Operation> {
        self.members.iter().filter(move |op| op.arity == arity)
    }

    pub fn max_arity(&self) -> usize {
        self.members.iter().map(|op| op.arity).max().unwrap_or(0)
    }

    /// Members of arity at most `max_arity`.
    pub fn truncate(&self, max_arity: usize) -> OperationSet {
        OperationSet {
            universe: self.universe,
            members: self
                .members
                .iter()
                .filter(|op| op.arity <= max_arity)
                .cloned()
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &OperationSet) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Members of `self` missing from `other`.
    pub fn difference(&self, other: &OperationSet) -> Vec<Operation> {
        self.members.difference(&other.members).cloned().collect()
    }
}

impl<'a> IntoIterator for &'a OperationSet {
    type Item = &'a Operation;
    type IntoIter = std::collections::btree_set::Iter<'a, Operation>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Calls `visit` with every tuple of inner operations whose arities sum to
/// at most `budget`, in lexicographic order of `pool`.
fn for_each_inner_tuple<'a>(
    pool: &'a [Vec<&'a Operation>],
    count: usize,
    budget: usize,
    tuple: &mut Vec<&'a Operation>,
    visit: &mut dyn FnMut(&[&'a Operation]) -> bool,
) -> bool {
    if tuple.len() == count {
        return visit(tuple);
    }
    let remaining = count - tuple.len() - 1;
    for arity in 1..pool.len() {
        if arity + remaining > budget {
            break;
        }
        for &g in &pool[arity] {
            tuple.push(g);
            let keep_going = for_each_inner_tuple(pool, count, budget - arity, tuple, visit);
            tuple.pop();
            if !keep_going {
                return false;
            }
        }
    }
    true
}

fn group_by_arity<'a>(ops: impl IntoIterator<Item = &'a Operation>, max_arity: usize) -> Vec<Vec<&'a Operation>> {
    let mut pool = vec![Vec::new(); max_arity + 1];
    for op in ops {
        if op.arity <= max_arity {
            pool[op.arity].push(op);
        }
    }
    pool
}

/// Smallest set containing the members of `set` of arity `<= max_arity` and
/// `x_1^(1)`, closed under every superposition whose result has arity
/// `<= max_arity`.
///
/// Superposition never lowers arity, so intermediates above the cap are
/// never needed and the returned slice equals the arity-`<= max_arity` part
/// of the unbounded preclone closure.
pub fn preclone_closure(set: &OperationSet, max_arity: usize) -> Result<OperationSet> {
    if max_arity == 0 {
        return Err(Error::ZeroArity);
    }
    let universe = set.universe;
    let mut seen: HashSet<Operation> = set.truncate(max_arity).members.into_iter().collect();
    seen.insert(Operation::identity(universe));
    // `generation[op]` is the round in which `op` first appeared; a round
    // only evaluates combinations touching the previous round's additions.
    let mut generations: Vec<(Operation, usize)> = seen.iter().cloned().map(|op| (op, 0)).collect();
    let mut round = 1;
    loop {
        let by_arity = {
            let mut by_arity: Vec<Vec<(&Operation, usize)>> = vec![Vec::new(); max_arity + 1];
            for (op, g) in &generations {
                by_arity[op.arity].push((op, *g));
            }
            by_arity
        };
        let fresh = round - 1;
        let outers: Vec<(&Operation, usize)> = by_arity.iter().flatten().copied().collect();
        let found: Vec<Operation> = outers
            .par_iter()
            .flat_map_iter(|&(outer, outer_gen)| {
                let mut local = Vec::new();
                let mut tuple = Vec::new();
                collect_new(
                    &by_arity,
                    outer,
                    outer_gen == fresh,
                    fresh,
                    max_arity,
                    &mut tuple,
                    &mut local,
                    &seen,
                );
                local
            })
            .collect();
        let mut added = false;
        for op in found {
            if seen.insert(op.clone()) {
                generations.push((op, round));
                added = true;
            }
        }
        if !added {
            break;
        }
        round += 1;
    }
    let mut members: Vec<Operation> = seen.into_iter().collect();
    members.sort();
    Ok(OperationSet {
        universe,
        members: members.into_iter().collect(),
    })
}

#[allow(clippy::too_many_arguments)]
fn collect_new(
    by_arity: &[Vec<(&Operation, usize)>],
    outer: &Operation,
    touched: bool,
    fresh: usize,
    max_arity: usize,
    tuple: &mut Vec<Operation>,
    out: &mut Vec<Operation>,
    seen: &HashSet<Operation>,
) {
    let used: usize = tuple.iter().map(|g| g.arity).sum();
    if tuple.len() == outer.arity {
        if touched {
            let result = outer.superpose(tuple).expect("arity checked");
            if !seen.contains(&result) {
                out.push(result);
            }
        }
        return;
    }
    let remaining = outer.arity - tuple.len() - 1;
    for (arity, ops) in by_arity.iter().enumerate().skip(1) {
        if used + arity + remaining > max_arity {
            break;
        }
        for &(g, gen) in ops {
            if gen > fresh {
                continue;
            }
            tuple.push(g.clone());
            collect_new(
                by_arity,
                outer,
                touched || gen == fresh,
                fresh,
                max_arity,
                tuple,
                out,
                seen,
            );
            tuple.pop();
        }
    }
}

/// Why a set fails to be closed under superposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureViolation {
    MissingNeutral,
    Superposition {
        outer: Operation,
        inner: Vec<Operation>,
        result: Operation,
    },
}

/// First witness, in member order, that `set` is not closed under
/// superpositions of result arity `<= max_arity`; `None` if it is closed.
pub fn superposition_counterexample(set: &OperationSet, max_arity: usize) -> Option<ClosureViolation> {
    if !set.contains(&Operation::identity(set.universe)) {
        return Some(ClosureViolation::MissingNeutral);
    }
    let pool = group_by_arity(set.iter(), max_arity);
    let mut violation = None;
    for outer in set.iter().filter(|op| op.arity <= max_arity) {
        let mut tuple = Vec::new();
        for_each_inner_tuple(&pool, outer.arity, max_arity, &mut tuple, &mut |inner| {
            let inner: Vec<Operation> = inner.iter().map(|&g| g.clone()).collect();
            let result = outer.superpose(&inner).expect("arity checked");
            if set.contains(&result) {
                true
            } else {
                violation = Some(ClosureViolation::Superposition {
                    outer: outer.clone(),
                    inner,
                    result,
                });
                false
            }
        });
        if violation.is_some() {
            break;
        }
    }
    violation
}

pub fn is_closed_under_superposition(set: &OperationSet, max_arity: usize) -> bool {
    superposition_counterexample(set, max_arity).is_none()
}
