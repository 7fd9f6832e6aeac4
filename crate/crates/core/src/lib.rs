//! Proof terms, their categorical semantics, decision procedures and
//! realizability over recursive and primitive-recursive worlds.

pub mod decide;
pub mod gen;
pub mod models;
pub mod realize;
pub mod recworld;
pub mod rewrite;
pub mod semantics;
pub mod syntax;
pub mod systemt;
