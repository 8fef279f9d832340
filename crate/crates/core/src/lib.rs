//! Graph coalgebras over finite fields, their automorphism groups, and the
//! realization of finite permutation representations as restrictions of
//! coalgebra automorphisms to grouplike elements.

#![allow(clippy::needless_range_loop)]

pub mod caps;
pub mod coalgebra;
pub mod error;
pub mod field;
pub mod graph;
pub mod graph_coalgebra;
pub mod group;
pub mod json;
pub mod realization;
pub mod report;

pub use caps::Caps;
pub use coalgebra::{Coalgebra, LinearMap};
pub use error::{Error, ErrorKind, Result};
pub use field::{Field, FieldElement};
pub use graph::{BinarySystem, Digraph, SimpleGraph};
pub use graph_coalgebra::{GraphCoalgebra, StructuredAut};
pub use group::{FiniteGroup, Perm};
pub use realization::{PermRep, RealizationBundle, RealizationReport};
pub use report::{Check, CheckStatus};
