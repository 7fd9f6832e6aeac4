//! Concrete models: finite cardinals, upset algebras of finite posets and
//! presheaves of finite sets over finite posets.

pub mod finord;
pub mod poset;
pub mod presheaf;

pub use finord::{FinOrd, Table};
pub use poset::{heyting_implies, kripke_embedding_check, poset_reflection, FinPoset, KripkeReport, PosetError, UpsetAlgebra};
pub use presheaf::{enumerate_presheaves, tree_reflection_check, NatTrans, Presheaf, PresheafModel, TreeReflectionReport};
