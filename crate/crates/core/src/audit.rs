//! Closure-condition audits for finite families of matrix collections.
//!
//! Quotient maps and conjunctive minors distribute over unions in every
//! argument. When every slice of the family is closed under unions, each
//! member is a union of join-irreducible members, so checking the
//! irreducible members (and `∅`) decides the quotient and minor conditions
//! exactly. Otherwise the irreducible members are searched first and the
//! remaining tuples are enumerated under `Limits::max_tuples`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::collection::MatrixCollection;
use crate::error::{Error, Result};
use crate::family::{CollectionFamily, FamilySlice};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::minor::{minor_work, Image, MinorScheme};
use crate::space::{bits, LinearMap, Mask, MatrixSpace};
use crate::universe::{decode_tuple, Universe};

/// Bounds on the schemes and candidates the audits range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditBounds {
    /// Largest scheme target and source arity.
    pub max_arity: usize,
    /// Largest number of indeterminates.
    pub max_vars: usize,
    /// Largest number of maps in a scheme.
    pub max_maps: usize,
    /// Largest `p` tried for `Ω_m^(p) ⊆ Γ` in the dividend audit.
    pub max_dividend_width: usize,
}

impl Default for AuditBounds {
    fn default() -> Self {
        AuditBounds {
            max_arity: 2,
            max_vars: 2,
            max_maps: 2,
            max_dividend_width: usize::MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Evidence that a closure condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    Missing {
        name: String,
        collection: MatrixCollection,
    },
    Union {
        left: MatrixCollection,
        right: MatrixCollection,
        union: MatrixCollection,
    },
    Quotient {
        collection: MatrixCollection,
        side: Side,
        by: Matrix,
        quotient: MatrixCollection,
    },
    Minor {
        scheme: MinorScheme,
        family: Vec<MatrixCollection>,
        minor: MatrixCollection,
    },
    Dividend {
        candidate: MatrixCollection,
        width: usize,
    },
}

/// The audits in the order `audit_all` runs them.
pub const CONDITIONS: [&str; 6] = [
    "required",
    "unions",
    "quotients",
    "conjunctive_minors",
    "dividends",
    "locally_closed",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    /// Verdicts keyed by the names in [`CONDITIONS`].
    pub verdicts: BTreeMap<&'static str, Verdict>,
    pub counterexamples: BTreeMap<&'static str, Counterexample>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|v| *v == Verdict::Pass)
    }

    pub fn verdict(&self, condition: &str) -> Verdict {
        self.verdicts.get(condition).copied().unwrap_or(Verdict::Skipped)
    }

    /// The first failing condition, in audit order.
    pub fn first_failure(&self) -> Option<&'static str> {
        CONDITIONS.iter().copied().find(|c| self.verdict(c) == Verdict::Fail)
    }
}

/// Union structure of one slice.
#[derive(Clone, Debug)]
struct SliceUnions {
    witness: Option<(Mask, Mask)>,
    irreducible: Vec<Mask>,
}

/// Shared analysis of a family for the individual audits.
pub struct Auditor<'a> {
    family: &'a CollectionFamily,
    limits: Limits,
    unions: Vec<SliceUnions>,
}

const FLAG: u32 = 1 << 31;

impl<'a> Auditor<'a> {
    pub fn new(family: &'a CollectionFamily, limits: &Limits) -> Result<Self> {
        let unions = family
            .slices()
            .map(|slice| analyse_unions(slice, limits))
            .collect::<Result<_>>()?;
        Ok(Auditor {
            family,
            limits: *limits,
            unions,
        })
    }

    fn slice(&self, arity: usize) -> &FamilySlice {
        self.family.slice(arity).expect("arity within family")
    }

    fn union_closed(&self) -> bool {
        self.unions.iter().all(|u| u.witness.is_none())
    }

    /// Irreducible members of one arity, plus `∅` when it is a member.
    fn generators(&self, arity: usize) -> Vec<Mask> {
        let mut out = self.unions[arity - 1].irreducible.clone();
        if self.slice(arity).contains(0) {
            out.insert(0, 0);
        }
        out
    }

    pub fn required(&self) -> Option<Counterexample> {
        let universe = self.family.universe();
        let bound = self.family.breadth_bound();
        let lim = Limits {
            max_matrices: u64::MAX,
            ..self.limits
        };
        let mut wanted = vec![(
            "equality".to_string(),
            MatrixCollection::equality(universe, bound, &lim).expect("bounded by the family"),
        )];
        wanted.push(("empty".into(), MatrixCollection::empty(universe, 1).expect("arity 1")));
        for p in 0..=bound {
            wanted.push((
                format!("trivial({p})"),
                MatrixCollection::trivial(universe, 1, p, &lim).expect("bounded by the family"),
            ));
        }
        wanted
            .into_iter()
            .find(|(_, c)| !self.family.contains(c))
            .map(|(name, collection)| Counterexample::Missing { name, collection })
    }

    pub fn unions(&self) -> Option<Counterexample> {
        self.unions.iter().enumerate().find_map(|(i, u)| {
            u.witness.map(|(a, b)| {
                let space = self.slice(i + 1).space();
                Counterexample::Union {
                    left: space.collection(a),
                    right: space.collection(b),
                    union: space.collection(a | b),
                }
            })
        })
    }

    pub fn quotients(&self) -> Result<Option<Counterexample>> {
        let exact = self.union_closed();
        for m in 1..=self.family.max_arity() {
            let slice = self.slice(m);
            let space = slice.space();
            let maps = quotient_maps(space, true);
            let search = |pool: &mut dyn Iterator<Item = Mask>| {
                for gamma in pool {
                    for (left, right, map) in &maps {
                        let q = map.apply(gamma);
                        if !slice.contains(q) {
                            let (side, by) = if left.cols() > 0 {
                                (Side::Left, left.clone())
                            } else {
                                (Side::Right, right.clone())
                            };
                            return Some(Counterexample::Quotient {
                                collection: space.collection(gamma),
                                side,
                                by,
                                quotient: space.collection(q),
                            });
                        }
                    }
                }
                None
            };
            if let Some(c) = search(&mut self.generators(m).into_iter()) {
                return Ok(Some(c));
            }
            if !exact {
                let needed = slice.len() as u128 * maps.len() as u128;
                if needed > self.limits.max_tuples as u128 {
                    return Err(Error::cap("quotient audit", needed, self.limits.max_tuples));
                }
                if let Some(c) = search(&mut slice.iter()) {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    pub fn conjunctive_minors(&self, bounds: &AuditBounds) -> Result<Option<Counterexample>> {
        let bounds = AuditBounds {
            max_arity: bounds.max_arity.min(self.family.max_arity()),
            ..*bounds
        };
        let schemes = enumerate_schemes(&bounds, &self.limits)?;
        let exact = self.union_closed();
        let generators: Vec<Vec<Mask>> = (1..=bounds.max_arity).map(|m| self.generators(m)).collect();
        if !exact {
            let needed: u128 = schemes
                .iter()
                .map(|s| s.sources().map(|n| self.slice(n).len() as u128).product::<u128>())
                .sum();
            if needed > self.limits.max_tuples as u128 {
                return Err(Error::cap("conjunctive minor audit", needed, self.limits.max_tuples));
            }
        }
        let found = schemes
            .par_iter()
            .map(|scheme| -> Result<Option<Counterexample>> {
                let table = MinorTable::new(
                    scheme,
                    self.family.universe(),
                    self.family.breadth_bound(),
                    &self.limits,
                )?;
                let pools: Vec<Vec<Mask>> = scheme.sources().map(|n| generators[n - 1].clone()).collect();
                if let Some(c) = table.first_outside(scheme, &pools, self) {
                    return Ok(Some(c));
                }
                if !exact {
                    let pools: Vec<Vec<Mask>> = scheme.sources().map(|n| self.slice(n).iter().collect()).collect();
                    return Ok(table.first_outside(scheme, &pools, self));
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(found.into_iter().flatten().next())
    }

    pub fn dividends(&self, max_width: usize) -> Result<Option<Counterexample>> {
        let bound = self.family.breadth_bound();
        let top = max_width.min(bound);
        if top == 0 {
            return Ok(None);
        }
        for m in 1..=self.family.max_arity() {
            let slice = self.slice(m);
            let space = slice.space();
            let base = space.width_mask(1);
            let free = space.len() - base.count_ones() as usize;
            let count = 1u128 << free;
            if count > self.limits.max_pool as u128 {
                return Err(Error::cap("dividend candidate pool", count, self.limits.max_pool));
            }
            // quotients wider than the breadth bound are empty
            let empty_ok = slice.contains(0);
            let maps = quotient_maps(space, false);
            let shift = base.count_ones();
            let hit = (0..count as u64).into_par_iter().find_first(|&x| {
                let gamma = base | (x as Mask) << shift;
                if slice.contains(gamma) || !empty_ok {
                    return false;
                }
                let width = (1..=top)
                    .rev()
                    .find(|&p| gamma & space.width_mask(p) == space.width_mask(p))
                    .unwrap_or(1);
                maps.iter()
                    .filter(|(l, r, _)| l.cols() + r.cols() >= width)
                    .all(|(_, _, map)| slice.contains(map.apply(gamma)))
            });
            if let Some(x) = hit {
                let gamma = base | (x as Mask) << shift;
                let width = (1..=top)
                    .rev()
                    .find(|&p| gamma & space.width_mask(p) == space.width_mask(p))
                    .unwrap_or(1);
                return Ok(Some(Counterexample::Dividend {
                    candidate: space.collection(gamma),
                    width,
                }));
            }
        }
        Ok(None)
    }

    /// Every candidate `Γ` of breadth at most `B` satisfies `Γ^(B) = Γ`, so a
    /// candidate whose restrictions are all members is itself a member: the
    /// condition holds for every family at bounded breadth.
    pub fn locally_closed(&self) -> Option<Counterexample> {
        None
    }
}

/// All maps `Γ ↦ N₁∖Γ/N₂` with `1 <= cols([N₁|N₂]) <= B`, only those with
/// `N₁` or `N₂` empty when `one_sided`.
fn quotient_maps(space: &MatrixSpace, one_sided: bool) -> Vec<(Matrix, Matrix, LinearMap)> {
    let universe = space.universe();
    let m = space.arity();
    let mut out = Vec::new();
    for total in 1..=space.bound() {
        for l in (0..=total).rev().filter(|&l| !one_sided || l == 0 || l == total) {
            for left in Matrix::all(universe, m, l) {
                for right in Matrix::all(universe, m, total - l) {
                    let map = space.quotient_map(&left, &right);
                    out.push((left.clone(), right, map));
                }
            }
        }
    }
    out
}

fn analyse_unions(slice: &FamilySlice, limits: &Limits) -> Result<SliceUnions> {
    if slice.is_dense() {
        Ok(analyse_dense(slice))
    } else {
        analyse_sparse(slice, limits)
    }
}

fn analyse_dense(slice: &FamilySlice) -> SliceUnions {
    let n = slice.space().len();
    let size = 1usize << n;
    // below[T]: union of the members contained in T, FLAG if there is one
    let mut below = vec![0u32; size];
    for mask in slice.iter() {
        below[mask as usize] = mask as u32 | FLAG;
    }
    for b in 0..n {
        let bit = 1usize << b;
        for t in 0..size {
            if t & bit != 0 {
                below[t] |= below[t ^ bit];
            }
        }
    }
    let failing = (0..size).find(|&t| below[t] & FLAG != 0 && !slice.contains((below[t] & !FLAG) as Mask));
    let witness = failing.map(|t| {
        let target = (below[t] & !FLAG) as Mask;
        fold_witness(slice, target).expect("some pairwise union leaves the family")
    });
    let irreducible = slice
        .iter()
        .filter(|&mask| {
            mask != 0 && {
                let strict = bits(mask).fold(0u32, |acc, i| acc | below[(mask & !(1 << i)) as usize]);
                (strict & !FLAG) as Mask != mask
            }
        })
        .collect();
    SliceUnions { witness, irreducible }
}

/// Accumulates the members inside `target` until a union leaves the family.
fn fold_witness(slice: &FamilySlice, target: Mask) -> Option<(Mask, Mask)> {
    let mut acc: Option<Mask> = None;
    for member in slice.iter().filter(|m| m & !target == 0) {
        match acc {
            None => acc = Some(member),
            Some(a) => {
                if !slice.contains(a | member) {
                    return Some((a, member));
                }
                acc = Some(a | member);
            }
        }
    }
    None
}

fn analyse_sparse(slice: &FamilySlice, limits: &Limits) -> Result<SliceUnions> {
    let members: Vec<Mask> = slice.iter().collect();
    let needed = (members.len() as u128).pow(2);
    if needed > limits.max_tuples as u128 {
        return Err(Error::cap("union audit", needed, limits.max_tuples));
    }
    let mut witness = None;
    'outer: for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if !slice.contains(a | b) {
                witness = Some((a, b));
                break 'outer;
            }
        }
    }
    let irreducible = members
        .iter()
        .copied()
        .filter(|&g| {
            g != 0 && {
                let strict = members
                    .iter()
                    .filter(|&&h| h != g && h & !g == 0)
                    .fold(0, |acc, &h| acc | h);
                strict != g
            }
        })
        .collect();
    Ok(SliceUnions { witness, irreducible })
}

/// For every target matrix, the tuples of source matrices (one per map)
/// produced by some choice of Skolem maps.
struct MinorTable {
    target: MatrixSpace,
    tuples: Vec<Vec<Vec<usize>>>,
    sources: Vec<MatrixSpace>,
}

impl MinorTable {
    fn new(scheme: &MinorScheme, universe: Universe, bound: usize, limits: &Limits) -> Result<Self> {
        let target = MatrixSpace::new(universe, scheme.target(), bound)?;
        let work = minor_work(target.universe(), scheme.target(), scheme.var_count(), bound).unwrap_or(u128::MAX);
        if work > limits.max_assignments as u128 {
            return Err(Error::cap("minor table", work, limits.max_assignments));
        }
        let sources: Vec<MatrixSpace> = scheme
            .sources()
            .map(|n| MatrixSpace::new(target.universe(), n, bound))
            .collect::<Result<_>>()?;
        let k = target.universe().size();
        let v = scheme.var_count();
        let mut tuples = Vec::with_capacity(target.len());
        for i in 0..target.len() {
            let t = target.matrix(i);
            let mut sigma = vec![0; v * t.cols()];
            let mut seen = BTreeSet::new();
            for code in 0..k.pow((v * t.cols()) as u32) {
                decode_tuple(k, code, &mut sigma);
                let tuple: Vec<usize> = (0..scheme.maps().len())
                    .map(|j| sources[j].index(&scheme.transform_matrix(j, &t, &sigma)).expect("fits"))
                    .collect();
                seen.insert(tuple);
            }
            tuples.push(seen.into_iter().collect());
        }
        Ok(MinorTable {
            target,
            tuples,
            sources,
        })
    }

    fn apply(&self, args: &[Mask]) -> Mask {
        self.tuples.iter().enumerate().fold(0, |acc, (i, options)| {
            let hit = options
                .iter()
                .any(|tuple| tuple.iter().zip(args).all(|(&idx, &mask)| mask >> idx & 1 == 1));
            acc | (hit as Mask) << i
        })
    }

    /// First tuple from `pools` (lexicographic in pool order) whose minor is
    /// not a member.
    fn first_outside(&self, scheme: &MinorScheme, pools: &[Vec<Mask>], auditor: &Auditor) -> Option<Counterexample> {
        if pools.iter().any(Vec::is_empty) {
            return None;
        }
        let target = auditor.slice(scheme.target());
        let mut pick = vec![0usize; pools.len()];
        loop {
            let args: Vec<Mask> = pick.iter().zip(pools).map(|(&p, pool)| pool[p]).collect();
            let minor = self.apply(&args);
            if !target.contains(minor) {
                return Some(Counterexample::Minor {
                    scheme: scheme.clone(),
                    family: args.iter().zip(&self.sources).map(|(&a, s)| s.collection(a)).collect(),
                    minor: self.target.collection(minor),
                });
            }
            let sizes: Vec<usize> = pools.iter().map(Vec::len).collect();
            if !advance_mixed(&mut pick, &sizes) {
                return None;
            }
        }
    }
}

/// Every scheme within `bounds`, up to renaming of indeterminates and
/// reordering of maps, with every indeterminate used.
pub fn enumerate_schemes(bounds: &AuditBounds, limits: &Limits) -> Result<Vec<MinorScheme>> {
    let mut out = Vec::new();
    for target in 1..=bounds.max_arity {
        for vars in 0..=bounds.max_vars {
            let symbols: Vec<Image> = (0..target).map(Image::Row).chain((0..vars).map(Image::Var)).collect();
            let mut maps: Vec<Vec<Image>> = Vec::new();
            for len in 1..=bounds.max_arity {
                let count = symbols.len().pow(len as u32);
                for code in 0..count {
                    let mut digits = vec![0u8; len];
                    decode_tuple(symbols.len(), code, &mut digits);
                    maps.push(digits.iter().map(|&d| symbols[d as usize]).collect());
                }
            }
            maps.sort();
            let perms = permutations(vars);
            for j in 1..=bounds.max_maps {
                let mut pick = vec![0usize; j];
                loop {
                    let chosen: Vec<Vec<Image>> = pick.iter().map(|&p| maps[p].clone()).collect();
                    if uses_all_vars(&chosen, vars) && is_canonical(&chosen, &perms) {
                        out.push(MinorScheme::with_var_count(target, vars, chosen)?);
                        if out.len() as u64 > limits.max_pool {
                            return Err(Error::cap("scheme enumeration", out.len() as u128, limits.max_pool));
                        }
                    }
                    if !next_multiset(&mut pick, maps.len()) {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Odometer over tuples whose `j`-th digit ranges below `sizes[j]`.
fn advance_mixed(pick: &mut [usize], sizes: &[usize]) -> bool {
    for (d, &size) in pick.iter_mut().zip(sizes).rev() {
        *d += 1;
        if *d < size {
            return true;
        }
        *d = 0;
    }
    false
}

/// Advances a non-decreasing index sequence; false after the last one.
fn next_multiset(pick: &mut [usize], n: usize) -> bool {
    for i in (0..pick.len()).rev() {
        if pick[i] + 1 < n {
            pick[i] += 1;
            let v = pick[i];
            for t in &mut pick[i + 1..] {
                *t = v;
            }
            return true;
        }
    }
    false
}

fn uses_all_vars(maps: &[Vec<Image>], vars: usize) -> bool {
    (0..vars).all(|v| maps.iter().flatten().any(|&im| im == Image::Var(v)))
}

fn is_canonical(maps: &[Vec<Image>], perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|perm| {
        let mut renamed: Vec<Vec<Image>> = maps
            .iter()
            .map(|map| {
                map.iter()
                    .map(|&im| match im {
                        Image::Var(v) => Image::Var(perm[v]),
                        row => row,
                    })
                    .collect()
            })
            .collect();
        renamed.sort();
        maps <= renamed.as_slice()
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Runs every audit in [`CONDITIONS`] order. With `fail_fast`, the audits
/// after the first failure are reported as skipped.
pub fn audit_all(
    family: &CollectionFamily,
    bounds: &AuditBounds,
    fail_fast: bool,
    limits: &Limits,
) -> Result<AuditReport> {
    let auditor = Auditor::new(family, limits)?;
    let mut report = AuditReport {
        verdicts: BTreeMap::new(),
        counterexamples: BTreeMap::new(),
    };
    let mut failed = false;
    for condition in CONDITIONS {
        if failed && fail_fast {
            report.verdicts.insert(condition, Verdict::Skipped);
            continue;
        }
        let outcome = match condition {
            "required" => auditor.required(),
            "unions" => auditor.unions(),
            "quotients" => auditor.quotients()?,
            "conjunctive_minors" => auditor.conjunctive_minors(bounds)?,
            "dividends" => auditor.dividends(bounds.max_dividend_width)?,
            _ => auditor.locally_closed(),
        };
        match outcome {
            Some(c) => {
                failed = true;
                report.verdicts.insert(condition, Verdict::Fail);
                report.counterexamples.insert(condition, c);
            }
            None => {
                report.verdicts.insert(condition, Verdict::Pass);
            }
        }
    }
    Ok(report)
}
