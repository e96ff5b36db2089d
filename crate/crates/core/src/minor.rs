//! Minor formation schemes and conjunctive minors of matrix collections.
//!
//! A scheme with target `m` and indeterminates `V` is a nonempty family of
//! maps `h_j : {0..n_j} -> {0..m} ∪ V`. An `m`-row matrix `M` with columns
//! `a_1 … a_n` belongs to the conjunctive minor of `(Γ_j)` when there are
//! Skolem maps `σ_1 … σ_n : V -> A`, one per column and shared by every
//! `j`, such that the matrix with columns `(a_c + σ_c) h_j` lies in `Γ_j`
//! for every `j`.

use std::collections::BTreeSet;

use crate::collection::MatrixCollection;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::universe::{decode_tuple, Elem, Universe};

/// Where a source row of a scheme map reads from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Image {
    /// A row of the target matrix (0-based).
    Row(usize),
    /// An existentially quantified indeterminate, by position in the scheme.
    Var(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorScheme {
    target: usize,
    indeterminates: Vec<String>,
    maps: Vec<Vec<Image>>,
}

impl MinorScheme {
    pub fn new(target: usize, indeterminates: Vec<String>, maps: Vec<Vec<Image>>) -> Result<Self> {
        if target == 0 {
            return Err(Error::MalformedScheme("target must be at least 1".into()));
        }
        if maps.is_empty() {
            return Err(Error::EmptyFamily("minor formation scheme"));
        }
        let names: BTreeSet<&String> = indeterminates.iter().collect();
        if names.len() != indeterminates.len() {
            return Err(Error::MalformedScheme("duplicate indeterminate names".into()));
        }
        for (j, map) in maps.iter().enumerate() {
            if map.is_empty() {
                return Err(Error::MalformedScheme(format!("map {j} has an empty source")));
            }
            for image in map {
                match *image {
                    Image::Row(r) if r >= target => {
                        return Err(Error::MalformedScheme(format!(
                            "map {j} sends a row to {r}, outside target {target}"
                        )))
                    }
                    Image::Var(v) if v >= indeterminates.len() => {
                        return Err(Error::MalformedScheme(format!(
                            "map {j} uses unknown indeterminate #{v}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(MinorScheme {
            target,
            indeterminates,
            maps,
        })
    }

    /// Scheme with indeterminates named `v0, v1, …`.
    pub fn with_var_count(target: usize, vars: usize, maps: Vec<Vec<Image>>) -> Result<Self> {
        MinorScheme::new(target, (0..vars).map(|v| format!("v{v}")).collect(), maps)
    }

    /// The singleton identity scheme on `arity` rows.
    pub fn identity(arity: usize) -> Result<Self> {
        MinorScheme::new(arity, Vec::new(), vec![(0..arity).map(Image::Row).collect()])
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn indeterminates(&self) -> &[String] {
        &self.indeterminates
    }

    pub fn var_count(&self) -> usize {
        self.indeterminates.len()
    }

    pub fn maps(&self) -> &[Vec<Image>] {
        &self.maps
    }

    /// Source arities `n_j`.
    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        self.maps.iter().map(Vec::len)
    }

    /// `(a + σ) h_j`: the source column read from target column `column`
    /// and Skolem values `sigma`.
    pub fn transform_column(&self, j: usize, column: &[Elem], sigma: &[Elem], out: &mut Vec<Elem>) {
        out.clear();
        out.extend(self.maps[j].iter().map(|image| match *image {
            Image::Row(r) => column[r],
            Image::Var(v) => sigma[v],
        }));
    }

    /// The source matrix for map `j` when the columns of `m` are extended by
    /// the Skolem maps in `sigmas` (one block of `var_count` values per column).
    pub fn transform_matrix(&self, j: usize, m: &Matrix, sigmas: &[Elem]) -> Matrix {
        let v = self.var_count();
        let mut columns = Vec::with_capacity(m.cols());
        let mut buf = Vec::new();
        for c in 0..m.cols() {
            self.transform_column(j, &m.column(c), &sigmas[c * v..(c + 1) * v], &mut buf);
            columns.push(buf.clone());
        }
        Matrix::from_columns(self.maps[j].len(), &columns).expect("columns have source length")
    }

    fn check_family(&self, family: &[&MatrixCollection]) -> Result<Universe> {
        if family.len() != self.maps.len() {
            return Err(Error::WrongOperandCount {
                expected: self.maps.len(),
                found: family.len(),
            });
        }
        let universe = family[0].universe();
        for (gamma, n) in family.iter().zip(self.sources()) {
            universe.ensure_same(gamma.universe())?;
            if gamma.arity() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: gamma.arity(),
                });
            }
        }
        Ok(universe)
    }
}

/// Number of (candidate, Skolem assignment) pairs a brute-force minor of
/// breadth `max_breadth` visits.
pub fn minor_work(universe: Universe, target: usize, vars: usize, max_breadth: usize) -> Option<u128> {
    (0..=max_breadth).try_fold(0u128, |acc, n| {
        let per = universe.checked_pow((target + vars).checked_mul(n)?)?;
        acc.checked_add(per)
    })
}

/// The conjunctive minor of `family` via `scheme`, restricted to breadth
/// `max_breadth`, by joint enumeration of candidates and Skolem maps.
pub fn conjunctive_minor(
    scheme: &MinorScheme,
    family: &[&MatrixCollection],
    max_breadth: usize,
    limits: &Limits,
) -> Result<MatrixCollection> {
    let universe = scheme.check_family(family)?;
    let work = minor_work(universe, scheme.target, scheme.var_count(), max_breadth).unwrap_or(u128::MAX);
    if work > limits.max_assignments as u128 {
        return Err(Error::cap("conjunctive minor", work, limits.max_assignments));
    }
    let k = universe.size();
    let v = scheme.var_count();
    let mut result = MatrixCollection::new(universe, scheme.target, max_breadth, [])?;
    let mut columns: Vec<Vec<Elem>> = Vec::new();
    let mut source_columns: Vec<Vec<Elem>> = Vec::new();
    let mut buf = Vec::new();
    for n in 0..=max_breadth {
        // a member of Γ_j with n columns must exist for every j
        if family.iter().any(|g| !g.matrices().any(|m| m.cols() == n)) {
            continue;
        }
        let assignments = k.pow((v * n) as u32);
        let mut sigma = vec![0; v * n];
        for candidate in Matrix::all(universe, scheme.target, n) {
            columns.clear();
            columns.extend((0..n).map(|c| candidate.column(c)));
            let accepted = (0..assignments).any(|code| {
                decode_tuple(k, code, &mut sigma);
                family.iter().enumerate().all(|(j, gamma)| {
                    source_columns.clear();
                    for (c, column) in columns.iter().enumerate() {
                        scheme.transform_column(j, column, &sigma[c * v..(c + 1) * v], &mut buf);
                        source_columns.push(buf.clone());
                    }
                    let source = Matrix::from_columns(gamma.arity(), &source_columns).expect("shape");
                    gamma.has(&source)
                })
            });
            if accepted {
                result.insert(candidate)?;
            }
        }
    }
    Ok(result)
}

/// The four classical simple minors, each realised by a singleton scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleMinor {
    /// Row `i` of the source matrix is row `perm[i]` of the result.
    PermuteRows(Vec<usize>),
    /// Row `i` of the source matrix is row `map[i]` of the result; `map`
    /// must be onto `0..=max(map)`.
    IdentifyRows(Vec<usize>),
    /// Keeps the source rows and appends unconstrained rows up to the arity.
    AddDummyRows(usize),
    /// Keeps the listed source rows, in order; the others become
    /// indeterminates.
    ProjectRows(Vec<usize>),
}

impl SimpleMinor {
    /// The canonical singleton scheme for a source collection of arity `source`.
    pub fn scheme(&self, source: usize) -> Result<MinorScheme> {
        let bad = |msg: String| Err(Error::MalformedParams(msg));
        match self {
            SimpleMinor::PermuteRows(perm) => {
                let distinct: BTreeSet<_> = perm.iter().collect();
                if perm.len() != source || distinct.len() != source || perm.iter().any(|&p| p >= source) {
                    return bad(format!("{perm:?} is not a permutation of {source} rows"));
                }
                MinorScheme::new(source, Vec::new(), vec![perm.iter().map(|&p| Image::Row(p)).collect()])
            }
            SimpleMinor::IdentifyRows(map) => {
                if map.len() != source {
                    return bad(format!(
                        "identification map has {} entries, expected {source}",
                        map.len()
                    ));
                }
                let target = map.iter().max().map_or(0, |&t| t + 1);
                let hit: BTreeSet<_> = map.iter().collect();
                if hit.len() != target {
                    return bad(format!("identification map {map:?} is not onto 0..{target}"));
                }
                MinorScheme::new(target, Vec::new(), vec![map.iter().map(|&t| Image::Row(t)).collect()])
            }
            SimpleMinor::AddDummyRows(arity) => {
                if *arity < source {
                    return bad(format!("cannot add dummy rows to reach {arity} from {source}"));
                }
                MinorScheme::new(*arity, Vec::new(), vec![(0..source).map(Image::Row).collect()])
            }
            SimpleMinor::ProjectRows(keep) => {
                let distinct: BTreeSet<_> = keep.iter().collect();
                if keep.is_empty() || distinct.len() != keep.len() || keep.iter().any(|&r| r >= source) {
                    return bad(format!(
                        "{keep:?} is not a nonempty list of distinct rows below {source}"
                    ));
                }
                let mut vars = 0;
                let map = (0..source)
                    .map(|row| match keep.iter().position(|&r| r == row) {
                        Some(t) => Image::Row(t),
                        None => {
                            vars += 1;
                            Image::Var(vars - 1)
                        }
                    })
                    .collect();
                MinorScheme::with_var_count(keep.len(), vars, vec![map])
            }
        }
    }
}

/// Applies a simple minor to `gamma`, keeping its breadth bound.
pub fn simple_minor(kind: &SimpleMinor, gamma: &MatrixCollection, limits: &Limits) -> Result<MatrixCollection> {
    let scheme = kind.scheme(gamma.arity())?;
    conjunctive_minor(&scheme, &[gamma], gamma.breadth_bound(), limits)
}
