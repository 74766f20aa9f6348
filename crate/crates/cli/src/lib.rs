//! Support code for the `pcf` binary: the identity suite and table output.

pub mod suite;
pub mod table;
