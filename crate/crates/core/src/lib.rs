//! Exact Kruskal–Katona machinery, region calculus and brute-force oracles
//! for maximum products of cross-intersecting set families.

pub mod arith;
pub mod cascade;
pub mod constructions;
pub mod error;
pub mod family;
pub mod oracle;
pub mod regions;
pub mod report;

pub use error::{Error, Result};
