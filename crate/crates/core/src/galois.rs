//! The preservation relation and both sides of the Galois connection it
//! induces between operations and matrix collections.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::collection::MatrixCollection;
use crate::error::{Error, Result};
use crate::family::{CollectionFamily, Implications};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::ops::{preclone_closure, Operation, OperationSet};
use crate::space::{bits, Mask};
use crate::universe::{decode_tuple, Elem, Universe};

/// `[M₁ | f M₂ | M₃]` where `M₂` is the `arity(f)` columns starting at `start`.
pub fn apply_to_window(f: &Operation, m: &Matrix, start: usize) -> Result<Matrix> {
    let n = f.arity();
    let end = start + n;
    if end > m.cols() {
        return Err(Error::WindowOutOfRange {
            start,
            end,
            cols: m.cols(),
        });
    }
    let cols = m.cols() - n + 1;
    let mut entries = Vec::with_capacity(m.rows() * cols);
    for r in 0..m.rows() {
        let row = m.row(r);
        entries.extend_from_slice(&row[..start]);
        entries.push(f.apply(row[start..end].iter().copied()));
        entries.extend_from_slice(&row[end..]);
    }
    Matrix::new(m.rows(), cols, entries)
}

/// A member of a collection whose window replacement leaves the collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub matrix: Matrix,
    pub window_start: usize,
}

/// `None` if `f` preserves `gamma`, otherwise the first violating member
/// (in canonical order) and window.
pub fn preserves(f: &Operation, gamma: &MatrixCollection) -> Result<Option<Violation>> {
    f.universe().ensure_same(gamma.universe())?;
    Ok(first_violation(f, gamma))
}

fn first_violation(f: &Operation, gamma: &MatrixCollection) -> Option<Violation> {
    let n = f.arity();
    for m in gamma.matrices().filter(|m| m.cols() >= n) {
        for start in 0..=m.cols() - n {
            let image = apply_to_window(f, m, start).expect("window in range");
            if !gamma.has(&image) {
                return Some(Violation {
                    matrix: m.clone(),
                    window_start: start,
                });
            }
        }
    }
    None
}

fn operation_count(universe: Universe, max_arity: usize, limits: &Limits) -> Result<u128> {
    if max_arity == 0 {
        return Err(Error::ZeroArity);
    }
    let mut total: u128 = 0;
    for n in 1..=max_arity {
        let count = Operation::count_of_arity(universe, n).unwrap_or(u128::MAX);
        total = total.saturating_add(count);
    }
    if total > limits.max_operations as u128 {
        return Err(Error::cap("operation enumeration", total, limits.max_operations));
    }
    Ok(total)
}

/// Every operation of arity `<= max_arity` preserving every member of `ms`.
pub fn pol(universe: Universe, ms: &[MatrixCollection], max_arity: usize, limits: &Limits) -> Result<OperationSet> {
    for gamma in ms {
        universe.ensure_same(gamma.universe())?;
    }
    operation_count(universe, max_arity, limits)?;
    let mut members = Vec::new();
    for n in 1..=max_arity {
        let ops: Vec<Operation> = Operation::all_of_arity(universe, n)?.collect();
        members.par_extend(
            ops.into_par_iter()
                .filter(|f| ms.iter().all(|gamma| first_violation(f, gamma).is_none())),
        );
    }
    OperationSet::from_ops(universe, members)
}

/// `pol` over a mask-encoded family: an operation preserves every member iff
/// none of its window implications `x ⇒ y` is refuted by a member that
/// contains `x` but not `y`.
pub fn pol_family(family: &CollectionFamily, max_arity: usize, limits: &Limits) -> Result<OperationSet> {
    let universe = family.universe();
    operation_count(universe, max_arity, limits)?;
    // refuted[m][i]: matrices j with some member containing i but not j
    let refuted: Vec<Vec<Mask>> = family
        .slices()
        .map(|slice| {
            let full = slice.space().full();
            let mut out = vec![0 as Mask; slice.space().len()];
            for mask in slice.iter() {
                for i in bits(mask) {
                    out[i] |= full & !mask;
                }
            }
            out
        })
        .collect();
    let spaces: Vec<_> = family.slices().map(|s| s.space().clone()).collect();
    let mut members = Vec::new();
    for n in 1..=max_arity {
        let ops: Vec<Operation> = Operation::all_of_arity(universe, n)?.collect();
        let kept: Vec<Result<Option<Operation>>> = ops
            .into_par_iter()
            .map(|f| {
                let single = OperationSet::from_ops(universe, [f.clone()])?;
                for (space, refuted) in spaces.iter().zip(&refuted) {
                    let direct = Implications::direct_images(&single, space)?;
                    if direct.iter().zip(refuted).any(|(d, r)| d & r != 0) {
                        return Ok(None);
                    }
                }
                Ok(Some(f))
            })
            .collect();
        for f in kept {
            members.extend(f?);
        }
    }
    OperationSet::from_ops(universe, members)
}

/// The least collection containing `seed` that every member of `ops`
/// preserves. Only operations of arity at most the seed's breadth bound can
/// fire, and replacements never add columns, so the fixpoint is finite.
pub fn inv_closure(ops: &OperationSet, seed: &MatrixCollection) -> Result<MatrixCollection> {
    ops.universe().ensure_same(seed.universe())?;
    let mut result = seed.clone();
    let firing: Vec<&Operation> = ops.iter().filter(|f| f.arity() <= seed.breadth_bound()).collect();
    let mut queue: VecDeque<Matrix> = seed.matrices().cloned().collect();
    while let Some(m) = queue.pop_front() {
        for f in firing.iter().filter(|f| f.arity() <= m.cols()) {
            for start in 0..=m.cols() - f.arity() {
                let image = apply_to_window(f, &m, start)?;
                if result.insert(image.clone())? {
                    queue.push_back(image);
                }
            }
        }
    }
    Ok(result)
}

/// `M_*`: the `k^m × m` matrix whose rows are all of `A^m` in
/// lexicographic order.
pub fn star_matrix(universe: Universe, arity: usize, limits: &Limits) -> Result<Matrix> {
    let rows = universe.checked_pow(arity).unwrap_or(u128::MAX);
    if rows > limits.max_table_len as u128 {
        return Err(Error::cap("separating matrix rows", rows, limits.max_table_len));
    }
    let rows = rows as usize;
    let mut entries = vec![0; rows * arity];
    for (r, chunk) in entries.chunks_mut(arity).enumerate() {
        decode_tuple(universe.size(), r, chunk);
    }
    Matrix::new(rows, arity, entries)
}

/// Column `f M` of an `arity(f)`-column block.
fn column_image(f: &Operation, block: &Matrix) -> Vec<Elem> {
    (0..block.rows())
        .map(|r| f.apply(block.row(r).iter().copied()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    /// `g` does not preserve `collection`, which every member of the
    /// closure preserves; `star` is `M_*` and `image` is `g M_*`.
    Separated {
        collection: MatrixCollection,
        star: Matrix,
        image: Matrix,
    },
    /// `g` belongs to the closure of the generators.
    NotSeparable,
}

/// Separates `g` from the preclone generated by `ops` with the collection
/// `{[h₁M₁ | ⋯ | h_rM_r]}`, taken over every split of `M_*` into
/// consecutive blocks and every choice of `h_i` in the preclone (up to
/// arity `m = arity(g)`) with `arity(h_i) = cols(M_i)`.
pub fn separating_collection(ops: &OperationSet, g: &Operation, limits: &Limits) -> Result<Separation> {
    ops.universe().ensure_same(g.universe())?;
    let (star, collection) = block_collection(ops, g.arity(), limits)?;
    let image = Matrix::from_columns(star.rows(), &[column_image(g, &star)])?;
    if collection.has(&image) {
        Ok(Separation::NotSeparable)
    } else {
        Ok(Separation::Separated {
            collection,
            star,
            image,
        })
    }
}

/// `M_*` for arity `m` together with the block collection
/// `{[h₁M₁ | ⋯ | h_rM_r]}` built from `preclone_closure(ops, m)`.
pub fn block_collection(ops: &OperationSet, arity: usize, limits: &Limits) -> Result<(Matrix, MatrixCollection)> {
    let universe = ops.universe();
    let closure = preclone_closure(ops, arity)?;
    let star = star_matrix(universe, arity, limits)?;
    let mut collection = MatrixCollection::new(universe, star.rows(), arity, [])?;
    let mut columns: Vec<Vec<Elem>> = Vec::new();
    split_blocks(&closure, &star, 0, &mut columns, &mut collection, limits.max_matrices)?;
    Ok((star, collection))
}

fn split_blocks(
    closure: &OperationSet,
    star: &Matrix,
    offset: usize,
    columns: &mut Vec<Vec<Elem>>,
    out: &mut MatrixCollection,
    cap: u64,
) -> Result<()> {
    if offset == star.cols() {
        if out.len() as u64 >= cap {
            return Err(Error::cap("separating collection", cap as u128 + 1, cap));
        }
        out.insert(Matrix::from_columns(star.rows(), columns)?)?;
        return Ok(());
    }
    for width in 1..=star.cols() - offset {
        let block = star.columns(offset, offset + width);
        for h in closure.of_arity(width) {
            columns.push(column_image(h, &block));
            split_blocks(closure, star, offset + width, columns, out, cap)?;
            columns.pop();
        }
    }
    Ok(())
}

/// Outcome of comparing `pol(ms)` with the preclone generated by `ops`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterizeReport {
    pub equal: bool,
    pub only_in_pol: Vec<Operation>,
    pub only_in_closure: Vec<Operation>,
}

pub fn characterize_check(
    ops: &OperationSet,
    ms: &[MatrixCollection],
    max_arity: usize,
    limits: &Limits,
) -> Result<CharacterizeReport> {
    let polymorphisms = pol(ops.universe(), ms, max_arity, limits)?;
    let closure = preclone_closure(ops, max_arity)?;
    let only_in_pol = polymorphisms.difference(&closure);
    let only_in_closure = closure.difference(&polymorphisms);
    Ok(CharacterizeReport {
        equal: only_in_pol.is_empty() && only_in_closure.is_empty(),
        only_in_pol,
        only_in_closure,
    })
}

/// One separating collection for every operation of arity `<= max_arity`
/// outside the preclone generated by `ops`.
pub fn separating_family(ops: &OperationSet, max_arity: usize, limits: &Limits) -> Result<Vec<MatrixCollection>> {
    let universe = ops.universe();
    operation_count(universe, max_arity, limits)?;
    let mut out = BTreeSet::new();
    for n in 1..=max_arity {
        for g in Operation::all_of_arity(universe, n)? {
            if let Separation::Separated { collection, .. } = separating_collection(ops, &g, limits)? {
                out.insert(collection);
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Universe {
        Universe::boolean()
    }

    fn op(arity: usize, table: &[Elem]) -> Operation {
        Operation::new(b(), arity, table.to_vec()).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    fn all_zero() -> MatrixCollection {
        MatrixCollection::new(
            b(),
            1,
            2,
            [
                Matrix::empty(1),
                Matrix::from_rows(&[[0]]).unwrap(),
                Matrix::from_rows(&[[0, 0]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn window_replacement() {
        let m = Matrix::from_rows(&[[0, 1], [1, 1]]).unwrap();
        assert_eq!(apply_to_window(&Operation::identity(b()), &m, 1).unwrap(), m);
        let and = op(2, &[0, 0, 0, 1]);
        assert_eq!(
            apply_to_window(&and, &m, 0).unwrap(),
            Matrix::from_rows(&[[0], [1]]).unwrap()
        );
        let not = op(1, &[1, 0]);
        let row = Matrix::from_rows(&[[0, 1]]).unwrap();
        assert_eq!(
            apply_to_window(&not, &row, 1).unwrap(),
            Matrix::from_rows(&[[0, 0]]).unwrap()
        );
        assert!(matches!(
            apply_to_window(&and, &m, 1),
            Err(Error::WindowOutOfRange { .. })
        ));
    }

    #[test]
    fn preservation_examples() {
        let not = op(1, &[1, 0]);
        let v = preserves(&not, &all_zero()).unwrap().unwrap();
        assert_eq!(v.matrix, Matrix::from_rows(&[[0]]).unwrap());
        assert_eq!(v.window_start, 0);
        let e3 = MatrixCollection::equality(b(), 3, &lim()).unwrap();
        for n in 1..=2 {
            for f in Operation::all_of_arity(b(), n).unwrap() {
                assert!(preserves(&f, &e3).unwrap().is_none());
                assert!(preserves(&Operation::identity(b()), &all_zero()).unwrap().is_none());
            }
        }
        let k3 = MatrixCollection::empty(Universe::new(3).unwrap(), 1).unwrap();
        assert!(preserves(&not, &k3).is_err());
    }

    #[test]
    fn pol_examples() {
        let p = pol(b(), &[all_zero()], 2, &lim()).unwrap();
        assert_eq!(p.len(), 10);
        assert!(p.iter().all(|f| f.table()[0] == 0));
        assert_eq!(
            pol(b(), &[MatrixCollection::empty(b(), 1).unwrap()], 1, &lim())
                .unwrap()
                .len(),
            4
        );
        assert_eq!(pol(b(), &[], 1, &lim()).unwrap().len(), 4);
        let tight = Limits {
            max_operations: 10,
            ..lim()
        };
        assert!(pol(b(), &[], 2, &tight).unwrap_err().is_cap());
    }

    #[test]
    fn inv_closure_examples() {
        let and = OperationSet::from_ops(b(), [op(2, &[0, 0, 0, 1])]).unwrap();
        let seed = MatrixCollection::from_matrices(b(), 1, [Matrix::from_rows(&[[0, 1]]).unwrap()]).unwrap();
        let closed = inv_closure(&and, &seed).unwrap();
        let expected = MatrixCollection::from_matrices(
            b(),
            1,
            [
                Matrix::from_rows(&[[0, 1]]).unwrap(),
                Matrix::from_rows(&[[0]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(closed, expected);
        let id = OperationSet::from_ops(b(), [Operation::identity(b())]).unwrap();
        assert_eq!(inv_closure(&id, &all_zero()).unwrap(), all_zero());
    }

    #[test]
    fn separation_examples() {
        let not = op(1, &[1, 0]);
        let empty = OperationSet::new(b());
        match separating_collection(&empty, &not, &lim()).unwrap() {
            Separation::Separated {
                collection,
                star,
                image,
            } => {
                assert_eq!(star, Matrix::from_rows(&[[0], [1]]).unwrap());
                assert_eq!(collection.len(), 1);
                assert!(collection.contains(&star).unwrap());
                assert_eq!(image, Matrix::from_rows(&[[1], [0]]).unwrap());
                assert!(preserves(&not, &collection).unwrap().is_some());
            }
            Separation::NotSeparable => panic!("NOT is not in the trivial preclone"),
        }
        let with_not = OperationSet::from_ops(b(), [not.clone()]).unwrap();
        assert_eq!(
            separating_collection(&with_not, &not, &lim()).unwrap(),
            Separation::NotSeparable
        );
    }

    #[test]
    fn characterize_examples() {
        let all = OperationSet::all(b(), 2).unwrap();
        let e2 = MatrixCollection::equality(b(), 2, &lim()).unwrap();
        assert!(characterize_check(&all, &[e2], 2, &lim()).unwrap().equal);
        let none = OperationSet::new(b());
        let report = characterize_check(&none, &[], 1, &lim()).unwrap();
        assert!(!report.equal);
        assert_eq!(report.only_in_pol.len(), 3);
        let and = OperationSet::from_ops(b(), [op(2, &[0, 0, 0, 1])]).unwrap();
        let family = separating_family(&and, 2, &lim()).unwrap();
        assert!(characterize_check(&and, &family, 2, &lim()).unwrap().equal);
    }
}
