use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::ast::{InfoExpr, Quantity, Statement};
use crate::profile::{subset_count, subset_label, Mask};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expression has a nonzero constant term {0}; only homogeneous forms are supported")]
    NonHomogeneous(BigRational),
    #[error("{0} variables exceed the supported maximum of {max}", max = crate::profile::MAX_VARS)]
    TooManyVariables(usize),
}

/// Exact rational coefficients over the nonempty subsets of `n` variables;
/// the coefficient of mask `m` lives at position `m - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    n: usize,
    coeffs: Vec<BigRational>,
}

impl LinearForm {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![BigRational::zero(); subset_count(n)],
        }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), subset_count(n), "form length");
        Self { n, coeffs }
    }

    /// `H(S)` for a single subset.
    pub fn unit(n: usize, mask: Mask) -> Self {
        let mut f = Self::zero(n);
        f.add_entropy(mask, &BigRational::one());
        f
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn get(&self, mask: Mask) -> &BigRational {
        &self.coeffs[mask as usize - 1]
    }

    /// Nonzero `(mask, coefficient)` pairs in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Mask, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as Mask + 1, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Adds `k·H(mask)`; `H(∅) = 0` is dropped.
    pub fn add_entropy(&mut self, mask: Mask, k: &BigRational) {
        if mask != 0 {
            self.coeffs[mask as usize - 1] += k;
        }
    }

    /// Adds `k·I(a : b | c) = k·(H(a∪c) + H(b∪c) − H(a∪b∪c) − H(c))`.
    pub fn add_mutual_info(&mut self, a: Mask, b: Mask, c: Mask, k: &BigRational) {
        self.add_entropy(a | c, k);
        self.add_entropy(b | c, k);
        self.add_entropy(a | b | c, &-k);
        self.add_entropy(c, &-k);
    }

    /// Adds `k·H(a | c) = k·(H(a∪c) − H(c))`.
    pub fn add_cond_entropy(&mut self, a: Mask, c: Mask, k: &BigRational) {
        self.add_entropy(a | c, k);
        self.add_entropy(c, &-k);
    }

    /// Exact value on a rational point.
    pub fn dot(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.coeffs.len(), "point length");
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .fold(BigRational::zero(), |acc, (c, x)| acc + c * x)
    }

    /// `2*H(A,B) - H(C)`-style rendering with the given variable names.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = String::new();
        for (mask, c) in self.terms() {
            let magnitude = c.abs();
            out.push_str(match (out.is_empty(), c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            if !magnitude.is_one() {
                out.push_str(&format!("{magnitude}*"));
            }
            out.push_str(&format!("H({})", subset_label(mask, names)));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.n, rhs.n, "form dimension");
        LinearForm {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &-rhs
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&BigRational> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, k: &BigRational) -> LinearForm {
        LinearForm {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

fn mask_of(names: &[String], vars: &[String]) -> Result<Mask, CanonError> {
    names.iter().try_fold(0, |m, name| {
        vars.iter()
            .position(|v| v == name)
            .map(|i| m | 1 << i)
            .ok_or_else(|| CanonError::UnknownVariable(name.clone()))
    })
}

/// Expands every term into subset entropies and collects coefficients,
/// returning the form together with the constant part.
pub fn canonicalize_affine(e: &InfoExpr, vars: &[String]) -> Result<(LinearForm, BigRational), CanonError> {
    if vars.len() > crate::profile::MAX_VARS {
        return Err(CanonError::TooManyVariables(vars.len()));
    }
    let mut form = LinearForm::zero(vars.len());
    let mut constant = BigRational::zero();
    for t in &e.terms {
        match &t.quantity {
            None => constant += &t.coef,
            Some(Quantity::Entropy { of, given }) => {
                form.add_cond_entropy(mask_of(of, vars)?, mask_of(given, vars)?, &t.coef)
            }
            Some(Quantity::MutualInfo { left, right, given }) => form.add_mutual_info(
                mask_of(left, vars)?,
                mask_of(right, vars)?,
                mask_of(given, vars)?,
                &t.coef,
            ),
        }
    }
    Ok((form, constant))
}

/// Canonical form of a homogeneous expression over the ordered variable
/// list `vars` (variable `i` is bit `i`).
pub fn canonicalize(e: &InfoExpr, vars: &[String]) -> Result<LinearForm, CanonError> {
    let (form, constant) = canonicalize_affine(e, vars)?;
    if constant.is_zero() {
        Ok(form)
    } else {
        Err(CanonError::NonHomogeneous(constant))
    }
}

/// A statement lowered to forms: the goal asserted `>= 0` and each
/// constraint asserted `= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalStatement {
    pub vars: Vec<String>,
    pub goal: LinearForm,
    pub constraints: Vec<LinearForm>,
}

impl Statement {
    /// Lowers over the statement's own variables (first-appearance order).
    pub fn canonical(&self) -> Result<CanonicalStatement, CanonError> {
        self.canonical_over(&self.variables())
    }

    /// Lowers over an explicit variable order.
    pub fn canonical_over(&self, vars: &[String]) -> Result<CanonicalStatement, CanonError> {
        Ok(CanonicalStatement {
            vars: vars.to_vec(),
            goal: canonicalize(&self.goal.nonnegative_side(), vars)?,
            constraints: self
                .constraints
                .iter()
                .map(|c| canonicalize(c, vars))
                .collect::<Result<_, _>>()?,
        })
    }
}
