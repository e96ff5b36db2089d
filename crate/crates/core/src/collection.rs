//! Breadth-bounded matrix collections and the set-level operations on them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::universe::Universe;

/// A finite set of `arity`-row matrices, each with at most `breadth_bound`
/// columns.
///
/// `breadth_bound` is the slice of the (possibly infinite) mathematical
/// collection this value represents. Equality, ordering and hashing only
/// look at the universe, the arity and the member matrices.
#[derive(Clone, Debug)]
pub struct MatrixCollection {
    universe: Universe,
    arity: usize,
    breadth_bound: usize,
    matrices: BTreeSet<Matrix>,
}

impl PartialEq for MatrixCollection {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.arity == other.arity && self.matrices == other.matrices
    }
}

impl Eq for MatrixCollection {}

impl Hash for MatrixCollection {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.universe.hash(state);
        self.arity.hash(state);
        self.matrices.hash(state);
    }
}

impl PartialOrd for MatrixCollection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MatrixCollection {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.universe, self.arity, &self.matrices).cmp(&(other.universe, other.arity, &other.matrices))
    }
}

/// `Σ_{q=0..=p} k^(m·q)`, the size of the trivial collection.
pub fn trivial_size(universe: Universe, arity: usize, breadth: usize) -> Option<u128> {
    (0..=breadth).try_fold(0u128, |acc, q| {
        acc.checked_add(universe.checked_pow(arity.checked_mul(q)?)?)
    })
}

impl MatrixCollection {
    pub fn new(
        universe: Universe,
        arity: usize,
        breadth_bound: usize,
        matrices: impl IntoIterator<Item = Matrix>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let mut collection = MatrixCollection {
            universe,
            arity,
            breadth_bound,
            matrices: BTreeSet::new(),
        };
        for m in matrices {
            collection.insert(m)?;
        }
        Ok(collection)
    }

    /// Collection whose breadth bound is its actual breadth.
    pub fn from_matrices(universe: Universe, arity: usize, matrices: impl IntoIterator<Item = Matrix>) -> Result<Self> {
        let matrices: Vec<Matrix> = matrices.into_iter().collect();
        let breadth = matrices.iter().map(Matrix::cols).max().unwrap_or(0);
        MatrixCollection::new(universe, arity, breadth, matrices)
    }

    /// `Ω_m^(p)`: every `m`-row matrix with at most `p` columns.
    pub fn trivial(universe: Universe, arity: usize, breadth: usize, limits: &Limits) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let size = trivial_size(universe, arity, breadth).unwrap_or(u128::MAX);
        if size > limits.max_matrices as u128 {
            return Err(Error::cap("trivial collection", size, limits.max_matrices));
        }
        Ok(MatrixCollection {
            universe,
            arity,
            breadth_bound: breadth,
            matrices: (0..=breadth).flat_map(|q| Matrix::all(universe, arity, q)).collect(),
        })
    }

    /// The empty collection of the given arity; its breadth is 0.
    pub fn empty(universe: Universe, arity: usize) -> Result<Self> {
        MatrixCollection::new(universe, arity, 0, [])
    }

    /// `E_2` restricted to breadth `breadth`: two-row matrices with equal
    /// rows, including the 0-column matrix.
    pub fn equality(universe: Universe, breadth: usize, limits: &Limits) -> Result<Self> {
        let size = trivial_size(universe, 1, breadth).unwrap_or(u128::MAX);
        if size > limits.max_matrices as u128 {
            return Err(Error::cap("equality collection", size, limits.max_matrices));
        }
        let matrices = (0..=breadth).flat_map(|q| {
            Matrix::all(universe, 1, q)
                .map(|row| Matrix::from_rows(&[row.entries(), row.entries()]).expect("same length"))
        });
        MatrixCollection::new(universe, 2, breadth, matrices)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn breadth_bound(&self) -> usize {
        self.breadth_bound
    }

    /// Largest column count among members, 0 when empty.
    pub fn breadth(&self) -> usize {
        self.matrices.iter().map(Matrix::cols).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Matrix> + Clone {
        self.matrices.iter()
    }

    /// Returns a copy with a different breadth bound; fails if a member is wider.
    pub fn with_breadth_bound(&self, bound: usize) -> Result<Self> {
        if self.breadth() > bound {
            return Err(Error::BreadthExceeded {
                cols: self.breadth(),
                bound,
            });
        }
        let mut copy = self.clone();
        copy.breadth_bound = bound;
        Ok(copy)
    }

    /// Adds a matrix after checking rows, width and entries.
    pub fn insert(&mut self, m: Matrix) -> Result<bool> {
        self.check_shape(&m)?;
        if m.cols() > self.breadth_bound {
            return Err(Error::BreadthExceeded {
                cols: m.cols(),
                bound: self.breadth_bound,
            });
        }
        m.check_universe(self.universe)?;
        Ok(self.matrices.insert(m))
    }

    pub fn remove(&mut self, m: &Matrix) -> bool {
        self.matrices.remove(m)
    }

    fn check_shape(&self, m: &Matrix) -> Result<()> {
        if m.rows() != self.arity {
            return Err(Error::RowMismatch {
                expected: self.arity,
                found: m.rows(),
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &MatrixCollection) -> Result<()> {
        self.universe.ensure_same(other.universe)?;
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    /// Set membership; the matrix must have `arity` rows.
    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        self.check_shape(m)?;
        Ok(self.matrices.contains(m))
    }

    pub(crate) fn has(&self, m: &Matrix) -> bool {
        self.matrices.contains(m)
    }

    pub fn is_subset(&self, other: &MatrixCollection) -> bool {
        self.universe == other.universe && self.arity == other.arity && self.matrices.is_subset(&other.matrices)
    }

    /// `Γ^(p) = Γ ∩ Ω_m^(p)`.
    pub fn breadth_restrict(&self, p: usize) -> MatrixCollection {
        MatrixCollection {
            universe: self.universe,
            arity: self.arity,
            breadth_bound: p.min(self.breadth_bound),
            matrices: self.matrices.iter().filter(|m| m.cols() <= p).cloned().collect(),
        }
    }

    pub fn union(&self, other: &MatrixCollection) -> Result<MatrixCollection> {
        union_all([self, other])
    }

    pub fn intersect(&self, other: &MatrixCollection) -> Result<MatrixCollection> {
        intersect_all([self, other])
    }

    /// `Γ / N = {M : [M | N] ∈ Γ}`.
    pub fn right_quotient(&self, n: &Matrix) -> Result<MatrixCollection> {
        self.check_shape(n)?;
        Ok(MatrixCollection {
            universe: self.universe,
            arity: self.arity,
            breadth_bound: self.breadth_bound.saturating_sub(n.cols()),
            matrices: self
                .matrices
                .iter()
                .filter(|m| m.ends_with(n))
                .map(|m| m.columns(0, m.cols() - n.cols()))
                .collect(),
        })
    }

    /// `N \ Γ = {M : [N | M] ∈ Γ}`.
    pub fn left_quotient(&self, n: &Matrix) -> Result<MatrixCollection> {
        self.check_shape(n)?;
        Ok(MatrixCollection {
            universe: self.universe,
            arity: self.arity,
            breadth_bound: self.breadth_bound.saturating_sub(n.cols()),
            matrices: self
                .matrices
                .iter()
                .filter(|m| m.starts_with(n))
                .map(|m| m.columns(n.cols(), m.cols()))
                .collect(),
        })
    }
}

/// Union of a nonempty family of same-arity collections; the breadth bound
/// is the largest member bound.
pub fn union_all<'a>(family: impl IntoIterator<Item = &'a MatrixCollection>) -> Result<MatrixCollection> {
    let mut iter = family.into_iter();
    let first = iter.next().ok_or(Error::EmptyFamily("union"))?;
    let mut result = first.clone();
    for c in iter {
        result.check_compatible(c)?;
        result.breadth_bound = result.breadth_bound.max(c.breadth_bound);
        result.matrices.extend(c.matrices.iter().cloned());
    }
    Ok(result)
}

/// Intersection of a nonempty family of same-arity collections; the breadth
/// bound is the smallest member bound.
pub fn intersect_all<'a>(family: impl IntoIterator<Item = &'a MatrixCollection>) -> Result<MatrixCollection> {
    let mut iter = family.into_iter();
    let first = iter.next().ok_or(Error::EmptyFamily("intersection"))?;
    let mut result = first.clone();
    for c in iter {
        result.check_compatible(c)?;
        result.breadth_bound = result.breadth_bound.min(c.breadth_bound);
        result.matrices.retain(|m| c.matrices.contains(m));
    }
    Ok(result)
}
