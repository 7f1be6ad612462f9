//! Shannon-cone membership.
//!
//! A goal form `g >= 0` is Shannon-derivable under constraints `f_j = 0`
//! when `g = Σ λ_i e_i + Σ μ_j f_j` with every `λ_i >= 0`, where the `e_i`
//! are the elemental inequalities. [`decide`] settles this with an exact
//! LP. A positive answer comes with the multipliers; a negative one with a
//! polymatroid (integer point satisfying every elemental inequality and
//! every constraint) on which the goal is negative.

mod elemental;
mod simplex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use elemental::{elemental_inequalities, elementals, Elemental, MAX_CONE_VARS};

use crate::expr::LinearForm;
use simplex::LpOutcome;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("cone test supports 1 to {max} variables, got {0}", max = MAX_CONE_VARS)]
    VariableCount(usize),
    #[error("form over {got} variables mixed with forms over {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("internal error: {0}")]
    Internal(&'static str),
}

/// Multipliers proving derivability: `lambda` is aligned with
/// [`elementals`], `mu` with the constraint list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub lambda: Vec<BigRational>,
    pub mu: Vec<BigRational>,
}

/// An integer polymatroid, indexed by `mask - 1`, refuting derivability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatroidWitness {
    pub point: Vec<BigInt>,
}

impl PolymatroidWitness {
    pub fn as_rationals(&self) -> Vec<BigRational> {
        self.point
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivability {
    Derivable(Certificate),
    NotDerivable(PolymatroidWitness),
}

impl Derivability {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Derivability::Derivable(_))
    }
}

fn check_dims(goal: &LinearForm, constraints: &[LinearForm]) -> Result<usize, ConeError> {
    let n = goal.num_vars();
    if !(1..=MAX_CONE_VARS).contains(&n) {
        return Err(ConeError::VariableCount(n));
    }
    for c in constraints {
        if c.num_vars() != n {
            return Err(ConeError::DimensionMismatch {
                expected: n,
                got: c.num_vars(),
            });
        }
    }
    Ok(n)
}

/// Decides whether `goal >= 0` follows from the elemental inequalities
/// given `constraints = 0`. The returned certificate or witness has been
/// verified exactly.
pub fn decide(goal: &LinearForm, constraints: &[LinearForm]) -> Result<Derivability, ConeError> {
    let n = check_dims(goal, constraints)?;
    let elems = elemental_inequalities(n)?;

    // Columns: λ for each elemental, then (μ⁺, μ⁻) per constraint.
    let columns: Vec<&LinearForm> = elems.iter().collect();
    let mut signed: Vec<LinearForm> = Vec::with_capacity(2 * constraints.len());
    for c in constraints {
        signed.push(c.clone());
        signed.push(-c);
    }
    let columns: Vec<&LinearForm> = columns.into_iter().chain(signed.iter()).collect();
    let rows = goal.coeffs().len();
    let a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| columns.iter().map(|f| f.coeffs()[r].clone()).collect())
        .collect();
    let cost = vec![BigRational::one(); columns.len()];

    match simplex::solve(&a, goal.coeffs(), &cost) {
        LpOutcome::Optimal(x) => {
            let (lambda, split) = x.split_at(elems.len());
            let cert = Certificate {
                lambda: lambda.to_vec(),
                mu: split.chunks(2).map(|p| &p[0] - &p[1]).collect(),
            };
            if !verify_certificate(&cert, goal, constraints) {
                return Err(ConeError::Internal("certificate failed verification"));
            }
            Ok(Derivability::Derivable(cert))
        }
        LpOutcome::Infeasible(y) => {
            let h: Vec<BigRational> = y.iter().map(|v| -v).collect();
            let witness = PolymatroidWitness {
                point: integer_normalize(&h),
            };
            if !verify_witness(&witness, goal, constraints) {
                return Err(ConeError::Internal("witness failed verification"));
            }
            Ok(Derivability::NotDerivable(witness))
        }
    }
}

/// Scales by the LCM of the denominators, then divides by the GCD of the
/// resulting integers.
fn integer_normalize(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() || gcd.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &gcd).collect()
    }
}

/// True iff every λ is nonnegative and `Σ λ e + Σ μ f` equals `goal`
/// exactly.
pub fn verify_certificate(c: &Certificate, goal: &LinearForm, constraints: &[LinearForm]) -> bool {
    let Ok(n) = check_dims(goal, constraints) else {
        return false;
    };
    let Ok(elems) = elemental_inequalities(n) else {
        return false;
    };
    if c.lambda.len() != elems.len() || c.mu.len() != constraints.len() {
        return false;
    }
    if c.lambda.iter().any(Signed::is_negative) {
        return false;
    }
    let mut sum = LinearForm::zero(n);
    for (k, e) in c.lambda.iter().zip(&elems).chain(c.mu.iter().zip(constraints)) {
        if !k.is_zero() {
            sum = &sum + &(e * k);
        }
    }
    sum == *goal
}

/// True iff the point satisfies every elemental inequality and every
/// constraint exactly while the goal is strictly negative on it.
pub fn verify_witness(w: &PolymatroidWitness, goal: &LinearForm, constraints: &[LinearForm]) -> bool {
    let Ok(n) = check_dims(goal, constraints) else {
        return false;
    };
    let Ok(elems) = elemental_inequalities(n) else {
        return false;
    };
    if w.point.len() != goal.coeffs().len() {
        return false;
    }
    let h = w.as_rationals();
    elems.iter().all(|e| !e.dot(&h).is_negative())
        && constraints.iter().all(|f| f.dot(&h).is_zero())
        && goal.dot(&h).is_negative()
}
