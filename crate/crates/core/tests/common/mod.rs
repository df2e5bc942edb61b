//! Random generators shared by the property and acceptance targets.
#![allow(dead_code)]

pub mod chor_gen;
pub mod local_gen;
pub mod props;
pub mod type_gen;
