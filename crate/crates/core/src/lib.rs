//! PolyChor: a choreographic lambda calculus with process polymorphism.
//!
//! Pipeline: [`parse`] a source unit, [`typeck`] it, evaluate with [`eval`],
//! project to a network of local programs with [`project`], run the network
//! with [`net`], and check the correspondence theorems with [`verify`].

pub mod name;
pub mod syntax;
pub mod net;
pub mod parse;
pub mod typeck;
pub mod corpus;
pub mod eval;
pub mod project;
pub mod verify;
