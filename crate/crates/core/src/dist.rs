//! Finite joint distributions with exact rational masses.
//!
//! Outcomes are tuples of unsigned labels, one per variable. Zero-mass atoms
//! are never stored, so the support of a distribution is exactly its key set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::number::{self, LiteralKind, NumberError};

pub type Outcome = Vec<u32>;

/// Slack allowed on the total of a table written with decimal literals.
pub const DECIMAL_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Number {
        line: usize,
        #[source]
        source: NumberError,
    },
    #[error("duplicate outcome row {0:?}")]
    DuplicateOutcome(Outcome),
    #[error("label {label} of variable `{var}` is outside its alphabet of size {size}")]
    LabelOutOfRange { var: String, label: u32, size: u32 },
    #[error("outcome {outcome:?} has {got} labels, expected {expected}")]
    Arity {
        outcome: Outcome,
        got: usize,
        expected: usize,
    },
    #[error("negative probability {0}")]
    NegativeMass(BigRational),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(BigRational),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("empty variable subset")]
    EmptySubset,
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("alphabet sizes must be positive")]
    EmptyAlphabet,
}

/// A nonnegative mass table over named finite variables. Not necessarily
/// normalized; [`JointDist`] adds that invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassFunction {
    vars: Vec<String>,
    alphabet_sizes: Vec<u32>,
    mass: BTreeMap<Outcome, BigRational>,
}

impl MassFunction {
    /// Builds a mass table. Zero masses are dropped; negative masses,
    /// duplicate outcomes and out-of-range labels are rejected.
    pub fn new(
        vars: Vec<String>,
        alphabet_sizes: Vec<u32>,
        atoms: impl IntoIterator<Item = (Outcome, BigRational)>,
    ) -> Result<Self, DistError> {
        check_names(&vars)?;
        if alphabet_sizes.len() != vars.len() {
            return Err(DistError::Syntax {
                line: 0,
                message: format!(
                    "{} alphabet sizes for {} variables",
                    alphabet_sizes.len(),
                    vars.len()
                ),
            });
        }
        if alphabet_sizes.contains(&0) {
            return Err(DistError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        let mut mass = BTreeMap::new();
        for (outcome, p) in atoms {
            if outcome.len() != vars.len() {
                return Err(DistError::Arity {
                    got: outcome.len(),
                    expected: vars.len(),
                    outcome,
                });
            }
            for ((&label, &size), var) in outcome.iter().zip(&alphabet_sizes).zip(&vars) {
                if label >= size {
                    return Err(DistError::LabelOutOfRange {
                        var: var.clone(),
                        label,
                        size,
                    });
                }
            }
            if p.is_negative() {
                return Err(DistError::NegativeMass(p));
            }
            if !seen.insert(outcome.clone()) {
                return Err(DistError::DuplicateOutcome(outcome));
            }
            if !p.is_zero() {
                mass.insert(outcome, p);
            }
        }
        Ok(Self {
            vars,
            alphabet_sizes,
            mass,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn alphabet_sizes(&self) -> &[u32] {
        &self.alphabet_sizes
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Atoms in lexicographic label order.
    pub fn atoms(&self) -> impl Iterator<Item = (&Outcome, &BigRational)> {
        self.mass.iter()
    }

    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    /// Mass of an outcome; zero off the support.
    pub fn mass(&self, outcome: &[u32]) -> BigRational {
        self.mass.get(outcome).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.mass.values().fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Resolves names to positions, sorted and deduplicated.
    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, DistError> {
        let mut idx = names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref())
                    .ok_or_else(|| DistError::UnknownVariable(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    /// Sums out every variable not listed in `keep` (positions, ascending).
    pub(crate) fn project(&self, keep: &[usize]) -> MassFunction {
        let mut mass: BTreeMap<Outcome, BigRational> = BTreeMap::new();
        for (outcome, p) in &self.mass {
            let key: Outcome = keep.iter().map(|&i| outcome[i]).collect();
            *mass.entry(key).or_insert_with(BigRational::zero) += p;
        }
        MassFunction {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            alphabet_sizes: keep.iter().map(|&i| self.alphabet_sizes[i]).collect(),
            mass,
        }
    }
}

/// A probability distribution: a [`MassFunction`] whose masses sum to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDist {
    table: MassFunction,
    renormalized: bool,
}

impl JointDist {
    /// Builds a distribution whose masses must sum to exactly 1.
    pub fn new(
        vars: Vec<String>,
        alphabet_sizes: Vec<u32>,
        atoms: impl IntoIterator<Item = (Outcome, BigRational)>,
    ) -> Result<Self, DistError> {
        let table = MassFunction::new(vars, alphabet_sizes, atoms)?;
        let total = table.total();
        if !total.is_one() {
            return Err(DistError::NotNormalized(total));
        }
        Ok(Self {
            table,
            renormalized: false,
        })
    }

    /// Like [`JointDist::new`] with alphabets inferred as `1 + max label`.
    pub fn from_atoms<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        atoms: impl IntoIterator<Item = (Outcome, BigRational)>,
    ) -> Result<Self, DistError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let atoms: Vec<_> = atoms.into_iter().collect();
        let sizes = infer_alphabets(vars.len(), atoms.iter().map(|(o, _)| o.as_slice()));
        Self::new(vars, sizes, atoms)
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(
        vars: Vec<String>,
        alphabet_sizes: Vec<u32>,
        weights: impl IntoIterator<Item = (Outcome, BigRational)>,
    ) -> Result<Self, DistError> {
        let table = MassFunction::new(vars, alphabet_sizes, weights)?;
        let total = table.total();
        if total.is_zero() {
            return Err(DistError::NotNormalized(total));
        }
        Ok(Self::normalize(table, total, false))
    }

    fn normalize(mut table: MassFunction, total: BigRational, flag: bool) -> Self {
        if !total.is_one() {
            for p in table.mass.values_mut() {
                *p = &*p / &total;
            }
        }
        Self {
            table,
            renormalized: flag,
        }
    }

    pub fn mass_function(&self) -> &MassFunction {
        &self.table
    }

    /// True when the source table missed 1 by a decimal-rounding amount and
    /// was rescaled.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn vars(&self) -> &[String] {
        self.table.vars()
    }

    pub fn alphabet_sizes(&self) -> &[u32] {
        self.table.alphabet_sizes()
    }

    pub fn num_vars(&self) -> usize {
        self.table.num_vars()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Outcome, &BigRational)> {
        self.table.atoms()
    }

    pub fn support_size(&self) -> usize {
        self.table.support_size()
    }

    pub fn mass(&self, outcome: &[u32]) -> BigRational {
        self.table.mass(outcome)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.table.index_of(name)
    }

    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, DistError> {
        self.table.indices_of(names)
    }

    /// Marginal over a nonempty subset of the variables. The result keeps
    /// the variables in their original order, whatever order `vars` lists
    /// them in.
    pub fn marginal<S: AsRef<str>>(&self, vars: &[S]) -> Result<JointDist, DistError> {
        if vars.is_empty() {
            return Err(DistError::EmptySubset);
        }
        let keep = self.indices_of(vars)?;
        Ok(self.marginal_at(&keep))
    }

    /// Marginal over positions (ascending, nonempty).
    pub fn marginal_at(&self, keep: &[usize]) -> JointDist {
        JointDist {
            table: self.table.project(keep),
            renormalized: self.renormalized,
        }
    }

    /// Parses the text distribution format:
    ///
    /// ```text
    /// # comment
    /// vars A B
    /// alphabets 2 2      # optional
    /// 0 0 1/2
    /// 1 1 0.5
    /// ```
    pub fn parse(text: &str) -> Result<Self, DistError> {
        let mut vars: Option<Vec<String>> = None;
        let mut alphabets: Option<Vec<u32>> = None;
        let mut rows: Vec<(Outcome, BigRational)> = Vec::new();
        let mut any_decimal = false;
        let mut seen = BTreeSet::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let head = fields.next().unwrap();
            let Some(names) = vars.as_ref() else {
                if head != "vars" {
                    return Err(syntax(line, "expected `vars <name> ...` header"));
                }
                let names: Vec<String> = fields.map(str::to_string).collect();
                if names.is_empty() {
                    return Err(syntax(line, "`vars` lists no variables"));
                }
                check_names(&names)?;
                vars = Some(names);
                continue;
            };
            if head == "alphabets" {
                if alphabets.is_some() || !rows.is_empty() {
                    return Err(syntax(line, "`alphabets` must directly follow `vars`"));
                }
                let sizes = fields
                    .map(|f| f.parse::<u32>().map_err(|_| syntax(line, "bad alphabet size")))
                    .collect::<Result<Vec<_>, _>>()?;
                if sizes.len() != names.len() {
                    return Err(syntax(
                        line,
                        &format!("{} alphabet sizes for {} variables", sizes.len(), names.len()),
                    ));
                }
                alphabets = Some(sizes);
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != names.len() + 1 {
                return Err(syntax(
                    line,
                    &format!(
                        "expected {} labels and a probability, found {} fields",
                        names.len(),
                        tokens.len()
                    ),
                ));
            }
            let outcome = tokens[..names.len()]
                .iter()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| syntax(line, &format!("bad label `{t}`")))
                })
                .collect::<Result<Outcome, _>>()?;
            let (p, kind) = number::parse_literal(tokens[names.len()])
                .map_err(|source| DistError::Number { line, source })?;
            any_decimal |= kind == LiteralKind::Decimal;
            if !seen.insert(outcome.clone()) {
                return Err(DistError::DuplicateOutcome(outcome));
            }
            rows.push((outcome, p));
        }

        let vars = vars.ok_or_else(|| syntax(0, "missing `vars` header"))?;
        let sizes =
            alphabets.unwrap_or_else(|| infer_alphabets(vars.len(), rows.iter().map(|(o, _)| o.as_slice())));
        let table = MassFunction::new(vars, sizes, rows)?;
        let total = table.total();
        if total.is_one() {
            return Ok(Self::normalize(table, total, false));
        }
        let miss = number::rational_to_f64(&(&total - BigRational::one())).abs();
        if any_decimal && miss <= DECIMAL_SUM_TOLERANCE {
            Ok(Self::normalize(table, total, true))
        } else {
            Err(DistError::NotNormalized(total))
        }
    }

    /// Canonical text form: explicit alphabets, rows in lexicographic label
    /// order, masses as reduced fractions.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vars {}", self.vars().join(" ")).unwrap();
        let sizes: Vec<String> = self.alphabet_sizes().iter().map(u32::to_string).collect();
        writeln!(out, "alphabets {}", sizes.join(" ")).unwrap();
        for (outcome, p) in self.atoms() {
            for label in outcome {
                write!(out, "{label} ").unwrap();
            }
            writeln!(out, "{}", number::format_fraction(p)).unwrap();
        }
        out
    }
}

impl fmt::Display for JointDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl AsRef<MassFunction> for JointDist {
    fn as_ref(&self) -> &MassFunction {
        &self.table
    }
}

fn syntax(line: usize, message: &str) -> DistError {
    DistError::Syntax {
        line,
        message: message.to_string(),
    }
}

fn infer_alphabets<'a>(n: usize, outcomes: impl Iterator<Item = &'a [u32]>) -> Vec<u32> {
    let mut sizes = vec![1u32; n];
    for o in outcomes {
        for (s, &l) in sizes.iter_mut().zip(o) {
            *s = (*s).max(l.saturating_add(1));
        }
    }
    sizes
}

/// Identifier rule shared with the expression language: a letter, then
/// letters, digits or underscores.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_names(vars: &[String]) -> Result<(), DistError> {
    let mut seen = BTreeSet::new();
    for v in vars {
        if !is_identifier(v) {
            return Err(DistError::InvalidVariable(v.clone()));
        }
        if !seen.insert(v.as_str()) {
            return Err(DistError::DuplicateVariable(v.clone()));
        }
    }
    Ok(())
}

/// `Σ p log₂(p/q)` in bits, with `0·log(0/q) = 0`. Returns `+∞` when some
/// atom of `p` lies outside the support of `q`. `q` may be sub-normalized;
/// the result is then still nonnegative for normalized `p`.
pub fn kl_divergence(p: &MassFunction, q: &MassFunction) -> Result<f64, DistError> {
    if p.vars != q.vars {
        return Err(DistError::VariableMismatch(p.vars.clone(), q.vars.clone()));
    }
    let mut sum = 0.0;
    for (outcome, pm) in &p.mass {
        let Some(qm) = q.mass.get(outcome) else {
            return Ok(f64::INFINITY);
        };
        sum += number::rational_to_f64(pm) * number::log2_rational(&(pm / qm));
    }
    Ok(sum)
}
