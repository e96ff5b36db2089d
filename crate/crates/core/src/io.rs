//! JSON file formats.
//!
//! Every record lists its keys alphabetically and collections list their
//! matrices in canonical order, so serializing a value is byte-stable.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::audit::{AuditReport, Counterexample, Side};
use crate::collection::MatrixCollection;
use crate::error::{Error, Result};
use crate::galois::{CharacterizeReport, Violation};
use crate::matrix::Matrix;
use crate::minor::{Image, MinorScheme};
use crate::ops::{Operation, OperationSet};
use crate::terms::FiniteAlgebra;
use crate::universe::{Elem, Universe};

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("records always serialize");
    text.push('\n');
    text
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperationRecord {
    arity: usize,
    table: Vec<usize>,
    universe: usize,
}

fn elements(universe: Universe, field: &str, values: &[usize]) -> Result<Vec<Elem>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            universe.check(v).map_err(|e| Error::InvalidInput {
                field: format!("{field}[{i}]"),
                reason: e.to_string(),
            })
        })
        .collect()
}

impl TryFrom<OperationRecord> for Operation {
    type Error = Error;

    fn try_from(r: OperationRecord) -> Result<Self> {
        let universe = Universe::new(r.universe)?;
        Operation::new(universe, r.arity, elements(universe, "table", &r.table)?)
    }
}

impl Serialize for Operation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperationRecord {
            arity: self.arity(),
            table: self.table().iter().map(|&v| v as usize).collect(),
            universe: self.universe().size(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Operation::try_from(OperationRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperationSetRecord {
    ops: Vec<Operation>,
    universe: usize,
}

impl Serialize for OperationSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperationSetRecord {
            ops: self.iter().cloned().collect(),
            universe: self.universe().size(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperationSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = OperationSetRecord::deserialize(d)?;
        let universe = Universe::new(r.universe).map_err(serde::de::Error::custom)?;
        OperationSet::from_ops(universe, r.ops).map_err(|e| serde::de::Error::custom(format!("ops: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColumnsRecord {
    cols: usize,
    entries: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CollectionRecord {
    arity: usize,
    breadth: usize,
    matrices: Vec<ColumnsRecord>,
    universe: usize,
}

impl Serialize for MatrixCollection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CollectionRecord {
            arity: self.arity(),
            breadth: self.breadth_bound(),
            matrices: self
                .matrices()
                .map(|m| ColumnsRecord {
                    cols: m.cols(),
                    entries: m.entries().iter().map(|&v| v as usize).collect(),
                })
                .collect(),
            universe: self.universe().size(),
        }
        .serialize(s)
    }
}

impl TryFrom<CollectionRecord> for MatrixCollection {
    type Error = Error;

    fn try_from(r: CollectionRecord) -> Result<Self> {
        let universe = Universe::new(r.universe)?;
        let mut gamma = MatrixCollection::new(universe, r.arity, r.breadth, [])?;
        for (i, m) in r.matrices.into_iter().enumerate() {
            let field = format!("matrices[{i}].entries");
            let entries = elements(universe, &field, &m.entries)?;
            let matrix = Matrix::new(r.arity, m.cols, entries).map_err(|e| Error::InvalidInput {
                field: field.clone(),
                reason: e.to_string(),
            })?;
            gamma.insert(matrix).map_err(|e| Error::InvalidInput {
                field: format!("matrices[{i}]"),
                reason: e.to_string(),
            })?;
        }
        Ok(gamma)
    }
}

impl<'de> Deserialize<'de> for MatrixCollection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixCollection::try_from(CollectionRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRecord {
    cols: usize,
    entries: Vec<usize>,
    rows: usize,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord {
            cols: self.cols(),
            entries: self.entries().iter().map(|&v| v as usize).collect(),
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRecord::deserialize(d)?;
        let entries = r
            .entries
            .iter()
            .map(|&v| Elem::try_from(v).map_err(|_| serde::de::Error::custom(format!("entries: {v} is too large"))))
            .collect::<std::result::Result<_, _>>()?;
        Matrix::new(r.rows, r.cols, entries).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ImageRecord {
    Row(usize),
    Var(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeRecord {
    indeterminates: Vec<String>,
    maps: Vec<Vec<ImageRecord>>,
    target: usize,
}

impl Serialize for MinorScheme {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names = self.indeterminates();
        SchemeRecord {
            indeterminates: names.to_vec(),
            maps: self
                .maps()
                .iter()
                .map(|map| {
                    map.iter()
                        .map(|im| match *im {
                            Image::Row(r) => ImageRecord::Row(r),
                            Image::Var(v) => ImageRecord::Var(names[v].clone()),
                        })
                        .collect()
                })
                .collect(),
            target: self.target(),
        }
        .serialize(s)
    }
}

impl TryFrom<SchemeRecord> for MinorScheme {
    type Error = Error;

    fn try_from(r: SchemeRecord) -> Result<Self> {
        let position: BTreeMap<&str, usize> = r
            .indeterminates
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let maps = r
            .maps
            .iter()
            .enumerate()
            .map(|(j, map)| {
                map.iter()
                    .map(|im| match im {
                        ImageRecord::Row(row) => Ok(Image::Row(*row)),
                        ImageRecord::Var(name) => {
                            position
                                .get(name.as_str())
                                .map(|&v| Image::Var(v))
                                .ok_or_else(|| Error::InvalidInput {
                                    field: format!("maps[{j}]"),
                                    reason: format!("unknown indeterminate `{name}`"),
                                })
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MinorScheme::new(r.target, r.indeterminates, maps)
    }
}

impl<'de> Deserialize<'de> for MinorScheme {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MinorScheme::try_from(SchemeRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolRecord {
    arity: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraRecord {
    ops: BTreeMap<String, SymbolRecord>,
    universe: usize,
}

impl Serialize for FiniteAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraRecord {
            ops: self
                .ops()
                .iter()
                .map(|(name, op)| {
                    (
                        name.clone(),
                        SymbolRecord {
                            arity: op.arity(),
                            table: op.table().iter().map(|&v| v as usize).collect(),
                        },
                    )
                })
                .collect(),
            universe: self.universe().size(),
        }
        .serialize(s)
    }
}

impl TryFrom<AlgebraRecord> for FiniteAlgebra {
    type Error = Error;

    fn try_from(r: AlgebraRecord) -> Result<Self> {
        let universe = Universe::new(r.universe)?;
        let ops = r
            .ops
            .into_iter()
            .map(|(name, sym)| {
                let field = format!("ops.{name}.table");
                let table = elements(universe, &field, &sym.table)?;
                let op = Operation::new(universe, sym.arity, table).map_err(|e| Error::InvalidInput {
                    field,
                    reason: e.to_string(),
                })?;
                Ok((name, op))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(universe, ops)
    }
}

impl<'de> Deserialize<'de> for FiniteAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FiniteAlgebra::try_from(AlgebraRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            matrix: &'a Matrix,
            window_start: usize,
        }
        Record {
            matrix: &self.matrix,
            window_start: self.window_start,
        }
        .serialize(s)
    }
}

impl Serialize for CharacterizeReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            equal: bool,
            only_in_closure: &'a [Operation],
            only_in_pol: &'a [Operation],
        }
        Record {
            equal: self.equal,
            only_in_closure: &self.only_in_closure,
            only_in_pol: &self.only_in_pol,
        }
        .serialize(s)
    }
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl Serialize for Counterexample {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Record<'a> {
            Missing {
                collection: &'a MatrixCollection,
                name: &'a str,
            },
            Union {
                left: &'a MatrixCollection,
                right: &'a MatrixCollection,
                union: &'a MatrixCollection,
            },
            Quotient {
                by: &'a Matrix,
                collection: &'a MatrixCollection,
                quotient: &'a MatrixCollection,
                side: Side,
            },
            Minor {
                family: &'a [MatrixCollection],
                minor: &'a MatrixCollection,
                scheme: &'a MinorScheme,
            },
            Dividend {
                candidate: &'a MatrixCollection,
                width: usize,
            },
        }
        match self {
            Counterexample::Missing { name, collection } => Record::Missing { collection, name },
            Counterexample::Union { left, right, union } => Record::Union { left, right, union },
            Counterexample::Quotient {
                collection,
                side,
                by,
                quotient,
            } => Record::Quotient {
                by,
                collection,
                quotient,
                side: *side,
            },
            Counterexample::Minor { scheme, family, minor } => Record::Minor { family, minor, scheme },
            Counterexample::Dividend { candidate, width } => Record::Dividend {
                candidate,
                width: *width,
            },
        }
        .serialize(s)
    }
}

impl Serialize for AuditReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        // keys interleaved alphabetically with "counterexamples"
        let mut entries: BTreeMap<&str, serde_json::Value> = self
            .verdicts
            .iter()
            .map(|(k, v)| (*k, serde_json::Value::from(v.as_str())))
            .collect();
        entries.insert(
            "counterexamples",
            serde_json::to_value(&self.counterexamples).map_err(serde::ser::Error::custom)?,
        );
        let mut map = s.serialize_map(Some(entries.len()))?;
        for (k, v) in entries {
            map.serialize_entry(k, &v)?;
        }
        map.end()
    }
}
