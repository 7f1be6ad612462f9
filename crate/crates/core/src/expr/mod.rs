//! A small linear language of information quantities.
//!
//! Expressions combine `H(S|T)` and `I(S:T|U)` terms with rational
//! coefficients; statements add equality-to-zero constraints and an
//! inequality goal. [`canonicalize`] lowers an expression to a
//! [`LinearForm`] over subset entropies.

mod ast;
mod canon;
mod parser;

pub use ast::{Inequality, InfoExpr, Quantity, Relation, Statement, Term};
pub use canon::{canonicalize, canonicalize_affine, CanonError, CanonicalStatement, LinearForm};
pub use parser::{parse_expr, parse_stmt, ParseError};
