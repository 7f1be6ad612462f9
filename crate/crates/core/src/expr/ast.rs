use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A single information quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    /// `H(of | given)`
    Entropy { of: Vec<String>, given: Vec<String> },
    /// `I(left : right | given)`
    MutualInfo {
        left: Vec<String>,
        right: Vec<String>,
        given: Vec<String>,
    },
}

impl Quantity {
    pub fn entropy<S: Into<String>>(of: impl IntoIterator<Item = S>) -> Self {
        Quantity::Entropy {
            of: collect(of),
            given: Vec::new(),
        }
    }

    pub fn cond_entropy<S: Into<String>>(
        of: impl IntoIterator<Item = S>,
        given: impl IntoIterator<Item = S>,
    ) -> Self {
        Quantity::Entropy {
            of: collect(of),
            given: collect(given),
        }
    }

    pub fn mutual_info<S: Into<String>>(
        left: impl IntoIterator<Item = S>,
        right: impl IntoIterator<Item = S>,
        given: impl IntoIterator<Item = S>,
    ) -> Self {
        Quantity::MutualInfo {
            left: collect(left),
            right: collect(right),
            given: collect(given),
        }
    }

    /// Every variable name mentioned, in source order.
    pub fn variables(&self) -> impl Iterator<Item = &String> {
        let (a, b, c): (&[String], &[String], &[String]) = match self {
            Quantity::Entropy { of, given } => (of, &[], given),
            Quantity::MutualInfo { left, right, given } => (left, right, given),
        };
        a.iter().chain(b).chain(c)
    }
}

fn collect<S: Into<String>>(it: impl IntoIterator<Item = S>) -> Vec<String> {
    it.into_iter().map(Into::into).collect()
}

/// `coef × quantity`, or a bare constant when `quantity` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: BigRational,
    pub quantity: Option<Quantity>,
}

/// A linear combination of information quantities and constants.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InfoExpr {
    pub terms: Vec<Term>,
}

impl InfoExpr {
    pub fn quantity(q: Quantity) -> Self {
        Self {
            terms: vec![Term {
                coef: BigRational::one(),
                quantity: Some(q),
            }],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self {
            terms: vec![Term {
                coef: c,
                quantity: None,
            }],
        }
    }

    /// Sum of the constant terms.
    pub fn constant_part(&self) -> BigRational {
        self.terms
            .iter()
            .filter(|t| t.quantity.is_none())
            .fold(BigRational::zero(), |acc, t| acc + &t.coef)
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: &t.coef * k,
                    quantity: t.quantity.clone(),
                })
                .collect(),
        }
    }

    /// Concatenation of terms, i.e. the sum as an expression.
    pub fn plus(&self, other: &InfoExpr) -> Self {
        Self {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &String> {
        self.terms
            .iter()
            .filter_map(|t| t.quantity.as_ref())
            .flat_map(Quantity::variables)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: InfoExpr,
    pub relation: Relation,
    pub rhs: InfoExpr,
}

impl Inequality {
    /// The expression asserted to be nonnegative.
    pub fn nonnegative_side(&self) -> InfoExpr {
        let minus = -BigRational::one();
        match self.relation {
            Relation::Ge => self.lhs.plus(&self.rhs.scaled(&minus)),
            Relation::Le => self.rhs.plus(&self.lhs.scaled(&minus)),
        }
    }
}

/// `constraints => goal`, each constraint asserted equal to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub constraints: Vec<InfoExpr>,
    pub goal: Inequality,
}

impl Statement {
    /// Distinct variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let all = self
            .constraints
            .iter()
            .flat_map(InfoExpr::variables)
            .chain(self.goal.lhs.variables())
            .chain(self.goal.rhs.variables());
        for v in all {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }
}

fn write_vars(f: &mut fmt::Formatter<'_>, vars: &[String]) -> fmt::Result {
    f.write_str(&vars.join(","))
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Entropy { of, given } => {
                f.write_str("H(")?;
                write_vars(f, of)?;
                if !given.is_empty() {
                    f.write_str("|")?;
                    write_vars(f, given)?;
                }
            }
            Quantity::MutualInfo { left, right, given } => {
                f.write_str("I(")?;
                write_vars(f, left)?;
                f.write_str(":")?;
                write_vars(f, right)?;
                if !given.is_empty() {
                    f.write_str("|")?;
                    write_vars(f, given)?;
                }
            }
        }
        f.write_str(")")
    }
}

impl fmt::Display for InfoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let magnitude = t.coef.abs();
            match (i, t.coef.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match &t.quantity {
                None => write!(f, "{magnitude}")?,
                Some(q) if magnitude.is_one() => write!(f, "{q}")?,
                Some(q) => write!(f, "{magnitude}*{q}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c} = 0")?;
        }
        if !self.constraints.is_empty() {
            f.write_str(" => ")?;
        }
        write!(f, "{}", self.goal)
    }
}
