//! Information-inequality toolkit.
//!
//! * [`dist`]: finite joint distributions with exact rational masses, the
//!   text file format, marginals and KL divergence.
//! * [`profile`]: entropy profiles (bits) indexed by variable bitmask.
//! * [`expr`]: a parser for expressions and statements over `H(·|·)` and
//!   `I(·:·|·)`, lowered to linear forms over subset entropies.
//! * [`cone`]: exact Shannon-cone membership with certificates and
//!   polymatroid witnesses.
//! * [`transform`]: the adhesion and hat transforms, KL report and
//!   hypothesis checks.
//! * [`families`]: three parametric distributions refuting κ-extensions of
//!   conditional inequalities, with refutation search and asymptotic fits.
//! * [`precise`]: arbitrary-precision entropies for tiny parameters.
//! * [`cli`]: the `iitk` command line.
//!
//! ```
//! use iitk::cone::decide;
//! use iitk::expr::parse_stmt;
//!
//! let s = parse_stmt("I(A:B) = 0, I(A:B|C) = 0 => I(C:D) <= I(C:D|A) + I(C:D|B)").unwrap();
//! let c = s.canonical().unwrap();
//! assert!(!decide(&c.goal, &c.constraints).unwrap().is_derivable());
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod cli;
pub mod cone;
pub mod dist;
pub mod expr;
pub mod families;
pub mod number;
pub mod precise;
pub mod profile;
pub mod transform;
