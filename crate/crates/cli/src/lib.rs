//! The `superforms` command-line driver and its scripting language.

pub mod app;
pub mod dsl;
