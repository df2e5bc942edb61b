//! The local language run by each process, and networks of local programs.

pub mod lts;
pub mod merge;
pub mod run;
pub mod syntax;

pub use lts::*;
pub use merge::*;
pub use run::*;
pub use syntax::*;
