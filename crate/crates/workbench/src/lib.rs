//! Report serialization and rendering for the workbench CLI.
//!
//! JSON documents are versioned with a top-level `"schema": 1` and emit
//! every mathematical value as a decimal string, so arbitrary-precision
//! entries survive consumers that parse numbers as 64-bit floats.

pub mod json;
pub mod render;
