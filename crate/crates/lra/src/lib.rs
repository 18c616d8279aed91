//! Exact linear rational arithmetic over arbitrary precision rationals.

pub mod constraint;
pub mod solver;
pub mod syntax;
pub mod term;

pub use constraint::{Constraint, ConstraintDnf, ConstraintSet, Rel};
pub use solver::{
    constraint_split, entails_dnf, entails_projected, equivalent_dnf, eval_ground, is_consistent,
    make_exclusive, negate, project, simplify, split_region, witness,
};
pub use syntax::{parse_constraint, parse_constraint_set, parse_term, ParseError};
pub use term::{fmt_rational, rat, rat_frac, LinearTerm, Rational, Var, VarGen};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LraError {
    #[error("constraint set is inconsistent")]
    InconsistentInput,
    #[error("constraint set mentions variables")]
    NonGroundInput,
}
