//! Explicit isomorphisms between full matrix algebras given by structure
//! constants and `M_n(K)`, for `K` the rationals or a small number field.
//!
//! The pipeline: compute a maximal order, embed it as a lattice through
//! numerical representations at every archimedean place, reduce it with LLL,
//! and search the reduced lattice for an element of rank one. The left action
//! of the algebra on the left ideal generated by that element is the
//! isomorphism. Every decision that reaches the output is made with exact
//! arithmetic; numerics only steer the search.

pub mod algebra;
pub mod apps;
pub mod embed;
pub mod error;
pub mod exact;
pub mod factor;
pub mod instance;
pub mod lattice;
pub mod numeric;
pub mod numfield;
pub mod order;
pub mod splitter;

pub use algebra::{AlgebraElement, StructureAlgebra};
pub use error::{Error, Result};
pub use exact::{ExactMatrix, Rational};
pub use instance::{gen_instance, verify, InstanceFile, WitnessFile};
pub use numfield::{FieldDescriptor, FieldElement, NumberField};
pub use order::Order;
pub use splitter::{split, IsoMap, RankOneWitness, SplitConfig, SplitReport};
