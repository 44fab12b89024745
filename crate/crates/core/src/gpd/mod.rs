//! Finite groupoids and the fibration of isofibrations over them, taken up
//! to fiberwise natural isomorphism.
//!
//! Groupoids are interned in a [`GpdStore`]; every construction the oracle
//! needs (products, pullbacks, path groupoids) is built on demand and keyed
//! by how it was built.

mod family;
mod groupoid;
mod ho;
mod model;
mod oracle;
mod store;

pub use family::{
    cyclic, explicit_product, standard_family, standard_members, symmetric3, ConeSpec, GpdFamily,
    ProductCone,
};
pub use groupoid::{FunId, GId, Gpd};
pub use ho::{
    all_functors, canonical, class_keys, is_equivalence, is_inj_on_objects, is_isofibration, Tables,
};
pub use model::*;
pub use oracle::{GpdOracle, HoMor};
pub use store::{check_functor, GFun, GpdStore, Mark, DEFAULT_CLOSURE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GpdError {
    #[error("{category} is not a groupoid: {morphism} has no inverse")]
    NotAGroupoid { category: String, morphism: String },
    #[error("duplicate member {0}")]
    DuplicateMember(String),
    #[error("unknown member {0}")]
    UnknownMember(String),
    #[error("family is not closed: {witness}")]
    FamilyNotClosed { witness: String },
    #[error("{0} is not a terminal groupoid")]
    NoTerminal(String),
    #[error("closure budget exceeded: {0}")]
    Budget(String),
    #[error("{name} is not a functor: {reason}")]
    Functor { name: String, reason: String },
}
