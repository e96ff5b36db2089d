//! Preclones of operations on finite sets and the matrix collections that
//! characterise them.

pub mod audit;
pub mod collection;
pub mod error;
pub mod family;
pub mod galois;
pub mod io;
pub mod limits;
pub mod matrix;
pub mod minor;
pub mod ops;
pub mod space;
pub mod terms;
pub mod universe;

pub use audit::{audit_all, AuditBounds, AuditReport, Verdict};
pub use collection::MatrixCollection;
pub use error::{Error, Result};
pub use family::{preserved_family, CollectionFamily};
pub use galois::{apply_to_window, characterize_check, inv_closure, pol, preserves, separating_collection, Separation};
pub use limits::Limits;
pub use matrix::Matrix;
pub use minor::{conjunctive_minor, Image, MinorScheme, SimpleMinor};
pub use ops::{preclone_closure, Operation, OperationSet};
pub use space::{Mask, MatrixSpace};
pub use terms::{enumerate_terms, induce_op, induced_set, FiniteAlgebra, Signature, Term, TermMode};
pub use universe::{Elem, Universe};
