//! Distribution transforms from the proofs of the conditional inequality
//! `H(C|A,B) = I(A:B|C) = 0 => I(C:D) <= I(C:D|A) + I(C:D|B) + I(A:B)`.
//!
//! [`adhesion`] glues the two marginals `(left, over)` and `(right, over)`
//! into the distribution where `left` and `right` are independent given
//! `over`. [`hat_transform`] builds the clipped mass function whose KL
//! divergence from the adhesion equals the inequality's slack.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dist::{kl_divergence, DistError, JointDist, MassFunction, Outcome};
use crate::expr::{canonicalize, canonicalize_affine, parse_expr, CanonError, InfoExpr, Statement};
use crate::profile::{entropy_profile, eval_form, EntropyVector};

/// Default tolerance for treating a hypothesis as `= 0`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("expected exactly 4 variables, got {0}")]
    Arity(usize),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Canon(#[from] CanonError),
}

/// A partition of the variables into `left`, `right` and the conditioning
/// block `over`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub over: Vec<String>,
}

impl SplitSpec {
    pub fn new<S: Into<String>>(
        left: impl IntoIterator<Item = S>,
        right: impl IntoIterator<Item = S>,
        over: impl IntoIterator<Item = S>,
    ) -> Self {
        fn names<S: Into<String>>(it: impl IntoIterator<Item = S>) -> Vec<String> {
            it.into_iter().map(Into::into).collect()
        }
        Self {
            left: names(left),
            right: names(right),
            over: names(over),
        }
    }

    /// Positions of the three blocks in `d`, each ascending. `left` and
    /// `right` must be nonempty, and together with `over` partition the
    /// variables.
    fn positions(&self, d: &JointDist) -> Result<[Vec<usize>; 3], TransformError> {
        if self.left.is_empty() || self.right.is_empty() {
            return Err(TransformError::InvalidSplit(
                "left and right must be nonempty".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for name in self.left.iter().chain(&self.right).chain(&self.over) {
            if !seen.insert(name.as_str()) {
                return Err(TransformError::InvalidSplit(format!("`{name}` appears twice")));
            }
        }
        let blocks = [
            d.indices_of(&self.left)?,
            d.indices_of(&self.right)?,
            d.indices_of(&self.over)?,
        ];
        if let Some(missing) = d.vars().iter().find(|v| !seen.contains(v.as_str())) {
            return Err(TransformError::InvalidSplit(format!(
                "`{missing}` is not covered"
            )));
        }
        Ok(blocks)
    }
}

fn project(outcome: &[u32], keep: &[usize]) -> Outcome {
    keep.iter().map(|&i| outcome[i]).collect()
}

/// `p̃(l, r, o) = p(l, o) · p(r, o) / p(o)`. The result has the same
/// `(left, over)` and `(right, over)` marginals as `d`, with `left` and
/// `right` conditionally independent given `over`.
pub fn adhesion(d: &JointDist, s: &SplitSpec) -> Result<JointDist, TransformError> {
    let [left, right, over] = s.positions(d)?;
    type Block = BTreeMap<Outcome, BigRational>;
    let mut by_over: BTreeMap<Outcome, (BigRational, Block, Block)> = BTreeMap::new();
    for (outcome, p) in d.atoms() {
        let (total, ls, rs) = by_over
            .entry(project(outcome, &over))
            .or_insert_with(|| (BigRational::zero(), Block::new(), Block::new()));
        *total += p;
        *ls.entry(project(outcome, &left))
            .or_insert_with(BigRational::zero) += p;
        *rs.entry(project(outcome, &right))
            .or_insert_with(BigRational::zero) += p;
    }
    let n = d.num_vars();
    let mut atoms = Vec::new();
    for (o, (po, ls, rs)) in &by_over {
        for (l, pl) in ls {
            for (r, pr) in rs {
                let mut outcome = vec![0; n];
                for (pos, v) in left
                    .iter()
                    .zip(l)
                    .chain(right.iter().zip(r))
                    .chain(over.iter().zip(o))
                {
                    outcome[*pos] = *v;
                }
                atoms.push((outcome, pl * pr / po));
            }
        }
    }
    Ok(JointDist::new(
        d.vars().to_vec(),
        d.alphabet_sizes().to_vec(),
        atoms,
    )?)
}

/// The clipped product `p̂(a,b,c,d) = p(a,d)·p(b,d)/p(d)` on atoms with
/// `p(a,b,c) > 0`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatTransform {
    pub mass: MassFunction,
    pub total: BigRational,
}

impl HatTransform {
    /// True when the total mass is at most 1, the condition under which
    /// KL divergence against it is nonnegative.
    pub fn is_subnormalized(&self) -> bool {
        self.total <= BigRational::one()
    }
}

/// Hat transform of a 4-variable distribution, variables taken as
/// `A, B, C, D` by position.
pub fn hat_transform(d: &JointDist) -> Result<HatTransform, TransformError> {
    if d.num_vars() != 4 {
        return Err(TransformError::Arity(d.num_vars()));
    }
    let mut abc: BTreeSet<Outcome> = BTreeSet::new();
    let mut ad: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    let mut bd: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    let mut pd: BTreeMap<u32, BigRational> = BTreeMap::new();
    for (x, p) in d.atoms() {
        abc.insert(x[..3].to_vec());
        *ad.entry((x[0], x[3])).or_insert_with(BigRational::zero) += p;
        *bd.entry((x[1], x[3])).or_insert_with(BigRational::zero) += p;
        *pd.entry(x[3]).or_insert_with(BigRational::zero) += p;
    }
    let mut atoms = Vec::new();
    let mut total = BigRational::zero();
    for x in &abc {
        for (&dv, p_d) in &pd {
            let (Some(pa), Some(pb)) = (ad.get(&(x[0], dv)), bd.get(&(x[1], dv))) else {
                continue;
            };
            let m = pa * pb / p_d;
            total += &m;
            atoms.push((vec![x[0], x[1], x[2], dv], m));
        }
    }
    let mass = MassFunction::new(d.vars().to_vec(), d.alphabet_sizes().to_vec(), atoms)?;
    Ok(HatTransform { mass, total })
}

/// The KL form of the inequality's proof, evaluated on one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct KlReport {
    /// `Σ p̃ log₂(p̃/p̂)` with `p̃` the adhesion of `A | B` over `{C, D}`.
    pub divergence: f64,
    /// `I(C:D|A) + I(C:D|B) + I(A:B) − I(C:D)` on the original profile.
    pub slack: f64,
    pub hat_total: BigRational,
    pub hat_subnormalized: bool,
}

pub fn kl_report(d: &JointDist) -> Result<KlReport, TransformError> {
    let hat = hat_transform(d)?;
    let v = d.vars();
    let split = SplitSpec::new([v[0].clone()], [v[1].clone()], [v[2].clone(), v[3].clone()]);
    let tilde = adhesion(d, &split)?;
    let divergence = kl_divergence(tilde.mass_function(), &hat.mass)?;
    let slack_expr = parse_expr("I(C:D|A) + I(C:D|B) + I(A:B) - I(C:D)").expect("fixed expression");
    let positional: Vec<String> = ["A", "B", "C", "D"].map(String::from).to_vec();
    let form = canonicalize(&slack_expr, &positional)?;
    let slack = eval_form(&entropy_profile(d), &form).expect("4-variable form");
    Ok(KlReport {
        divergence,
        slack,
        hat_subnormalized: hat.is_subnormalized(),
        hat_total: hat.total,
    })
}

/// Value of one expression on a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprValue {
    pub expr: InfoExpr,
    pub value: f64,
    pub holds: bool,
}

/// Hypotheses of a statement evaluated on a distribution: each constraint
/// holds when `|value| <= tolerance`, the goal when its nonnegative side is
/// `>= -tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub constraints: Vec<ExprValue>,
    pub goal: ExprValue,
    pub tolerance: f64,
}

impl HypothesisReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.constraints.iter().all(|c| c.holds)
    }
}

fn affine_value(e: &InfoExpr, vars: &[String], profile: &EntropyVector) -> Result<f64, TransformError> {
    let (form, constant) = canonicalize_affine(e, vars)?;
    Ok(eval_form(profile, &form).expect("same variable count") + crate::number::rational_to_f64(&constant))
}

pub fn check_hypotheses(
    d: &JointDist,
    stmt: &Statement,
    tolerance: f64,
) -> Result<HypothesisReport, TransformError> {
    let profile = entropy_profile(d);
    let vars = d.vars();
    let constraints = stmt
        .constraints
        .iter()
        .map(|c| {
            let value = affine_value(c, vars, &profile)?;
            Ok(ExprValue {
                expr: c.clone(),
                value,
                holds: value.abs() <= tolerance,
            })
        })
        .collect::<Result<_, TransformError>>()?;
    let side = stmt.goal.nonnegative_side();
    let value = affine_value(&side, vars, &profile)?;
    Ok(HypothesisReport {
        constraints,
        goal: ExprValue {
            expr: side,
            value,
            holds: value >= -tolerance,
        },
        tolerance,
    })
}
