//! Dense indexing of `Ω_m^(B)` so that collections become bitmasks.
//!
//! Matrix `i` of a space is the `i`-th matrix of `Ω_m^(B)` in canonical
//! order (fewer columns first, then lexicographic entries). A collection of
//! arity `m` and breadth at most `B` is the mask of its member indices.

use crate::collection::MatrixCollection;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::universe::{decode_tuple, encode_tuple, Universe};

/// A set of matrix indices within one [`MatrixSpace`].
pub type Mask = u128;

/// Largest number of matrices a space may index.
pub const MAX_SPACE: usize = Mask::BITS as usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    universe: Universe,
    arity: usize,
    bound: usize,
    /// `offsets[q]` is the index of the first matrix with `q` columns;
    /// `offsets[bound + 1]` is the size of the space.
    offsets: Vec<usize>,
}

impl MatrixSpace {
    pub fn new(universe: Universe, arity: usize, bound: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let size = crate::collection::trivial_size(universe, arity, bound).unwrap_or(u128::MAX);
        if size > MAX_SPACE as u128 {
            return Err(Error::cap("matrix space", size, MAX_SPACE as u64));
        }
        let mut offsets = vec![0];
        for q in 0..=bound {
            offsets.push(offsets[q] + universe.pow(arity * q));
        }
        Ok(MatrixSpace {
            universe,
            arity,
            bound,
            offsets,
        })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.offsets[self.bound + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The mask of every matrix in the space, i.e. `Ω_m^(B)`.
    pub fn full(&self) -> Mask {
        self.width_mask(self.bound)
    }

    /// The mask of `Ω_m^(p)`.
    pub fn width_mask(&self, p: usize) -> Mask {
        low_bits(self.offsets[p.min(self.bound) + 1])
    }

    /// The mask of the matrices with exactly `q` columns.
    pub fn column_mask(&self, q: usize) -> Mask {
        if q > self.bound {
            return 0;
        }
        low_bits(self.offsets[q + 1]) & !low_bits(self.offsets[q])
    }

    pub fn cols_of(&self, index: usize) -> usize {
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    /// Index of `m`, or `None` if it does not belong to the space.
    pub fn index(&self, m: &Matrix) -> Option<usize> {
        if m.rows() != self.arity
            || m.cols() > self.bound
            || m.entries().iter().any(|&e| e as usize >= self.universe.size())
        {
            return None;
        }
        Some(self.offsets[m.cols()] + encode_tuple(self.universe.size(), m.entries().iter().copied()))
    }

    pub fn matrix(&self, index: usize) -> Matrix {
        let q = self.cols_of(index);
        let mut entries = vec![0; self.arity * q];
        decode_tuple(self.universe.size(), index - self.offsets[q], &mut entries);
        Matrix::new(self.arity, q, entries).expect("space shape")
    }

    pub fn mask_of(&self, gamma: &MatrixCollection) -> Result<Mask> {
        self.universe.ensure_same(gamma.universe())?;
        if gamma.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: gamma.arity(),
            });
        }
        gamma.matrices().try_fold(0, |mask, m| match self.index(m) {
            Some(i) => Ok(mask | 1 << i),
            None => Err(Error::BreadthExceeded {
                cols: m.cols(),
                bound: self.bound,
            }),
        })
    }

    /// The collection with the members of `mask`, with breadth bound `B`.
    pub fn collection(&self, mask: Mask) -> MatrixCollection {
        MatrixCollection::new(
            self.universe,
            self.arity,
            self.bound,
            bits(mask).map(|i| self.matrix(i)),
        )
        .expect("space members fit the space")
    }

    /// The map `Γ ↦ N₁∖Γ/N₂` restricted to the space.
    pub fn quotient_map(&self, left: &Matrix, right: &Matrix) -> LinearMap {
        let (l, r) = (left.cols(), right.cols());
        let images: Vec<Mask> = (0..self.len())
            .map(|i| {
                let m = self.matrix(i);
                if m.cols() >= l + r && m.starts_with(left) && m.ends_with(right) {
                    1 << self.index(&m.columns(l, m.cols() - r)).expect("middle block fits")
                } else {
                    0
                }
            })
            .collect();
        LinearMap::new(&images)
    }
}

/// The lowest `n` bits set.
pub fn low_bits(n: usize) -> Mask {
    if n >= MAX_SPACE {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn bits(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// A union-preserving map on masks, given by the images of singletons and
/// evaluated byte by byte through lookup tables.
#[derive(Clone, Debug)]
pub struct LinearMap {
    tables: Vec<[Mask; 256]>,
}

impl LinearMap {
    pub fn new(images: &[Mask]) -> Self {
        let tables = images
            .chunks(8)
            .map(|chunk| {
                let mut table = [0; 256];
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let image = chunk.get(low).copied().unwrap_or(0);
                    table[byte] = table[byte & (byte - 1)] | image;
                }
                table
            })
            .collect();
        LinearMap { tables }
    }

    pub fn apply(&self, mask: Mask) -> Mask {
        self.tables
            .iter()
            .enumerate()
            .fold(0, |acc, (c, table)| acc | table[((mask >> (8 * c)) & 0xff) as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    fn space(m: usize, b: usize) -> MatrixSpace {
        MatrixSpace::new(Universe::boolean(), m, b).unwrap()
    }

    #[test]
    fn sizes_and_offsets() {
        let s = space(2, 2);
        assert_eq!(s.len(), 21);
        assert_eq!(s.cols_of(0), 0);
        assert_eq!(s.cols_of(4), 1);
        assert_eq!(s.cols_of(5), 2);
        assert_eq!(s.cols_of(20), 2);
        assert_eq!(s.width_mask(1).count_ones(), 5);
        assert_eq!(s.column_mask(2).count_ones(), 16);
        assert!(MatrixSpace::new(Universe::boolean(), 2, 4).unwrap_err().is_cap());
    }

    #[test]
    fn index_round_trip_in_canonical_order() {
        let s = space(2, 2);
        let mut prev = None;
        for i in 0..s.len() {
            let m = s.matrix(i);
            assert_eq!(s.index(&m), Some(i));
            if let Some(p) = prev {
                assert!(p < m);
            }
            prev = Some(m);
        }
        assert_eq!(s.index(&Matrix::from_rows(&[[0, 0, 0], [0, 0, 0]]).unwrap()), None);
    }

    #[test]
    fn masks_round_trip() {
        let s = space(2, 2);
        let e = MatrixCollection::equality(Universe::boolean(), 2, &Limits::default()).unwrap();
        let mask = s.mask_of(&e).unwrap();
        assert_eq!(mask.count_ones(), 7);
        assert_eq!(s.collection(mask), e);
        let wide = MatrixCollection::equality(Universe::boolean(), 3, &Limits::default()).unwrap();
        assert!(matches!(s.mask_of(&wide), Err(Error::BreadthExceeded { .. })));
    }

    #[test]
    fn quotient_map_matches_explicit_quotients() {
        let s = space(1, 3);
        let gamma = MatrixCollection::from_matrices(
            Universe::boolean(),
            1,
            [
                Matrix::from_rows(&[[0, 1, 1]]).unwrap(),
                Matrix::from_rows(&[[1, 1]]).unwrap(),
                Matrix::from_rows(&[[0]]).unwrap(),
            ],
        )
        .unwrap()
        .with_breadth_bound(3)
        .unwrap();
        let n = Matrix::from_rows(&[[1]]).unwrap();
        let mask = s.mask_of(&gamma).unwrap();
        let right = s.quotient_map(&Matrix::empty(1), &n).apply(mask);
        assert_eq!(s.collection(right), gamma.right_quotient(&n).unwrap());
        let both = s.quotient_map(&Matrix::from_rows(&[[0]]).unwrap(), &n).apply(mask);
        let explicit = gamma
            .left_quotient(&Matrix::from_rows(&[[0]]).unwrap())
            .unwrap()
            .right_quotient(&n)
            .unwrap();
        assert_eq!(s.collection(both), explicit);
    }

    #[test]
    fn linear_map_is_union_of_images() {
        let images: Vec<Mask> = (0..20).map(|i| (i as Mask * 7919) % 1024).collect();
        let map = LinearMap::new(&images);
        for mask in [0, 1, 0b1011, (1 << 20) - 1, 0xabcde] {
            let expected = bits(mask).fold(0, |acc, i| acc | images[i]);
            assert_eq!(map.apply(mask), expected);
        }
    }
}
