//! Finite families of matrix collections, stored per arity as sets of masks.

use std::collections::BTreeSet;

use crate::collection::MatrixCollection;
use crate::error::{Error, Result};
use crate::galois::apply_to_window;
use crate::limits::Limits;
use crate::ops::OperationSet;
use crate::space::{bits, low_bits, Mask, MatrixSpace};
use crate::universe::Universe;

/// Spaces with at most this many matrices store their members as a bitset
/// over all `2^|space|` collections.
pub const DENSE_LIMIT: usize = 24;

#[derive(Clone, Debug)]
enum Members {
    Dense { words: Vec<u64>, count: usize },
    Sparse(BTreeSet<Mask>),
}

/// The members of one arity.
#[derive(Clone, Debug)]
pub struct FamilySlice {
    space: MatrixSpace,
    members: Members,
}

impl FamilySlice {
    pub fn new(space: MatrixSpace) -> Self {
        let members = if space.len() <= DENSE_LIMIT {
            Members::Dense {
                words: vec![0; (1usize << space.len()).div_ceil(64)],
                count: 0,
            }
        } else {
            Members::Sparse(BTreeSet::new())
        };
        FamilySlice { space, members }
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        match &self.members {
            Members::Dense { count, .. } => *count,
            Members::Sparse(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.members, Members::Dense { .. })
    }

    pub fn contains(&self, mask: Mask) -> bool {
        match &self.members {
            Members::Dense { words, .. } => {
                mask >> self.space.len() == 0 && words[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
            }
            Members::Sparse(set) => set.contains(&mask),
        }
    }

    pub fn insert(&mut self, mask: Mask) -> bool {
        debug_assert_eq!(mask & !self.space.full(), 0);
        match &mut self.members {
            Members::Dense { words, count } => {
                let word = &mut words[(mask >> 6) as usize];
                let bit = 1u64 << (mask & 63);
                let fresh = *word & bit == 0;
                *word |= bit;
                *count += fresh as usize;
                fresh
            }
            Members::Sparse(set) => set.insert(mask),
        }
    }

    pub fn remove(&mut self, mask: Mask) -> bool {
        if !self.contains(mask) {
            return false;
        }
        match &mut self.members {
            Members::Dense { words, count } => {
                words[(mask >> 6) as usize] &= !(1u64 << (mask & 63));
                *count -= 1;
            }
            Members::Sparse(set) => {
                set.remove(&mask);
            }
        }
        true
    }

    /// Members in ascending mask order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Mask> + '_> {
        match &self.members {
            Members::Dense { words, .. } => Box::new(
                words
                    .iter()
                    .enumerate()
                    .flat_map(|(w, &word)| bits(word as Mask).map(move |b| (w * 64 + b) as Mask)),
            ),
            Members::Sparse(set) => Box::new(set.iter().copied()),
        }
    }

    /// The `i`-th member in ascending order, for sampling.
    pub fn nth(&self, i: usize) -> Option<Mask> {
        self.iter().nth(i)
    }
}

/// A finite family of matrix collections of arities `1..=max_arity`, all of
/// breadth at most `breadth_bound`.
#[derive(Clone, Debug)]
pub struct CollectionFamily {
    universe: Universe,
    breadth_bound: usize,
    slices: Vec<FamilySlice>,
}

impl CollectionFamily {
    pub fn new(universe: Universe, max_arity: usize, breadth_bound: usize) -> Result<Self> {
        if max_arity == 0 {
            return Err(Error::ZeroArity);
        }
        let slices = (1..=max_arity)
            .map(|m| MatrixSpace::new(universe, m, breadth_bound).map(FamilySlice::new))
            .collect::<Result<_>>()?;
        Ok(CollectionFamily {
            universe,
            breadth_bound,
            slices,
        })
    }

    /// A family holding `collections`; `max_arity` defaults to the largest
    /// member arity.
    pub fn from_collections<'a>(
        universe: Universe,
        max_arity: Option<usize>,
        breadth_bound: usize,
        collections: impl IntoIterator<Item = &'a MatrixCollection> + Clone,
    ) -> Result<Self> {
        let max_arity = match max_arity {
            Some(m) => m,
            None => collections.clone().into_iter().map(|c| c.arity()).max().unwrap_or(1),
        };
        let mut family = CollectionFamily::new(universe, max_arity, breadth_bound)?;
        for c in collections {
            family.insert(c)?;
        }
        Ok(family)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn breadth_bound(&self) -> usize {
        self.breadth_bound
    }

    pub fn max_arity(&self) -> usize {
        self.slices.len()
    }

    pub fn slice(&self, arity: usize) -> Option<&FamilySlice> {
        arity.checked_sub(1).and_then(|i| self.slices.get(i))
    }

    pub fn slice_mut(&mut self, arity: usize) -> Option<&mut FamilySlice> {
        arity.checked_sub(1).and_then(move |i| self.slices.get_mut(i))
    }

    pub fn slices(&self) -> impl Iterator<Item = &FamilySlice> {
        self.slices.iter()
    }

    pub fn len(&self) -> usize {
        self.slices.iter().map(FamilySlice::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn locate(&self, gamma: &MatrixCollection) -> Result<(usize, Mask)> {
        self.universe.ensure_same(gamma.universe())?;
        let slice = self.slice(gamma.arity()).ok_or(Error::ArityMismatch {
            expected: self.max_arity(),
            found: gamma.arity(),
        })?;
        Ok((gamma.arity(), slice.space.mask_of(gamma)?))
    }

    /// Membership; collections outside the family's arity or breadth range
    /// are never members.
    pub fn contains(&self, gamma: &MatrixCollection) -> bool {
        self.locate(gamma)
            .map(|(m, mask)| self.slices[m - 1].contains(mask))
            .unwrap_or(false)
    }

    pub fn insert(&mut self, gamma: &MatrixCollection) -> Result<bool> {
        let (m, mask) = self.locate(gamma)?;
        Ok(self.slices[m - 1].insert(mask))
    }

    pub fn remove(&mut self, gamma: &MatrixCollection) -> bool {
        match self.locate(gamma) {
            Ok((m, mask)) => self.slices[m - 1].remove(mask),
            Err(_) => false,
        }
    }

    /// All members as explicit collections, by arity and then mask.
    pub fn collections(&self) -> impl Iterator<Item = MatrixCollection> + '_ {
        self.slices
            .iter()
            .flat_map(|s| s.iter().map(move |mask| s.space.collection(mask)))
    }
}

/// The single-premise implications `x ⇒ y` that window replacement by the
/// operations of `ops` induces on one matrix space, closed transitively:
/// `closure[i]` is the least `F`-preserved collection containing matrix `i`.
#[derive(Clone, Debug)]
pub struct Implications {
    space: MatrixSpace,
    closure: Vec<Mask>,
    direct: Vec<Mask>,
}

impl Implications {
    /// `direct[i]`: the matrices one window replacement turns matrix `i` into.
    pub fn direct_images(ops: &OperationSet, space: &MatrixSpace) -> Result<Vec<Mask>> {
        space.universe().ensure_same(ops.universe())?;
        let mut direct = vec![0 as Mask; space.len()];
        for (i, targets) in direct.iter_mut().enumerate() {
            let m = space.matrix(i);
            for f in ops.iter().filter(|f| f.arity() <= m.cols()) {
                for start in 0..=m.cols() - f.arity() {
                    let image = apply_to_window(f, &m, start)?;
                    *targets |= 1 << space.index(&image).expect("replacement stays in the space");
                }
            }
        }
        Ok(direct)
    }

    pub fn new(ops: &OperationSet, space: &MatrixSpace) -> Result<Self> {
        let direct = Self::direct_images(ops, space)?;
        let n = space.len();
        let mut closure: Vec<Mask> = (0..n).map(|i| direct[i] | 1 << i).collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                let grown = bits(closure[i]).fold(closure[i], |acc, j| acc | closure[j]);
                if grown != closure[i] {
                    closure[i] = grown;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Implications {
            space: space.clone(),
            closure,
            direct,
        })
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    /// `closure(i)`, the least preserved collection containing matrix `i`.
    pub fn closure_of(&self, i: usize) -> Mask {
        self.closure[i]
    }

    /// Direct images of matrix `i` under one window replacement.
    pub fn direct(&self, i: usize) -> Mask {
        self.direct[i]
    }

    /// The least preserved collection containing `mask`.
    pub fn close(&self, mask: Mask) -> Mask {
        bits(mask).fold(mask, |acc, i| acc | self.closure[i])
    }

    pub fn is_closed(&self, mask: Mask) -> bool {
        bits(mask).all(|i| self.closure[i] & !mask == 0)
    }

    /// Every closed mask, ascending, failing once more than `cap` exist.
    pub fn closed_masks(&self, cap: u64) -> Result<Vec<Mask>> {
        let mut out = Vec::new();
        self.collect_closed(0, 0, 0, cap, &mut out)?;
        out.sort_unstable();
        Ok(out)
    }

    fn collect_closed(&self, next: usize, chosen: Mask, excluded: Mask, cap: u64, out: &mut Vec<Mask>) -> Result<()> {
        if next == self.space.len() {
            if out.len() as u64 >= cap {
                return Err(Error::cap("preserved family", out.len() as u128 + 1, cap));
            }
            out.push(chosen);
            return Ok(());
        }
        if chosen >> next & 1 == 1 {
            return self.collect_closed(next + 1, chosen, excluded, cap, out);
        }
        self.collect_closed(next + 1, chosen, excluded | 1 << next, cap, out)?;
        let grown = chosen | self.closure[next];
        if grown & excluded == 0 {
            self.collect_closed(next + 1, grown, excluded, cap, out)?;
        }
        Ok(())
    }
}

/// Every collection of arity `1..=max_arity` and breadth at most `breadth`
/// preserved by every member of `ops`.
pub fn preserved_family(
    ops: &OperationSet,
    max_arity: usize,
    breadth: usize,
    limits: &Limits,
) -> Result<CollectionFamily> {
    let mut family = CollectionFamily::new(ops.universe(), max_arity, breadth)?;
    for slice in family.slices.iter_mut() {
        let implications = Implications::new(ops, &slice.space)?;
        for mask in implications.closed_masks(limits.max_pool)? {
            slice.insert(mask);
        }
    }
    Ok(family)
}

/// The full power set of each space: every collection at the bounds.
pub fn full_family(universe: Universe, max_arity: usize, breadth: usize, limits: &Limits) -> Result<CollectionFamily> {
    let mut family = CollectionFamily::new(universe, max_arity, breadth)?;
    for slice in family.slices.iter_mut() {
        let n = slice.space.len();
        let count = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
        if count > limits.max_pool as u128 {
            return Err(Error::cap("full family", count, limits.max_pool));
        }
        for mask in 0..=low_bits(n) {
            slice.insert(mask);
        }
    }
    Ok(family)
}
