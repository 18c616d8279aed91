//! Constrained assumption-based argumentation over linear rational arithmetic.

pub mod arguments;
pub mod framework;
pub mod attacks;
pub mod equivalence;
pub mod splitting;
pub mod semantics;
pub mod ground_oracle;
