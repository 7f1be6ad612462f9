//! Parametric counterexamples to the unconditional ("κ-extended") forms of
//! three conditional inequalities.
//!
//! Each family is a distribution of four bits `A, B, C, D` indexed by `ε`.
//! The constraint terms of the matching inequality vanish (or shrink
//! quickly) as `ε → 0` while the inequality's slack turns negative, so no
//! constant `κ` rescues the unconditional form. [`gap`] evaluates
//! `rhs − lhs` at one `ε`, [`refute`] searches a logarithmic grid for a
//! negative gap, and [`slope`] fits the asymptotic order of any quantity.

mod fit;
mod random;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::dist::JointDist;
use crate::expr::{canonicalize, parse_expr, CanonError, LinearForm};
use crate::number;
use crate::precise::{precision_for, PreciseProfile, WideReal};

pub use fit::{log_grid, slope, slope_of_form, zy_b_series, Model, SeriesCheck, SlopeReport};
pub use random::{random_constrained, Alphabets};

/// Variable names of every family member, in order.
pub const FAMILY_VARS: [&str; 4] = ["A", "B", "C", "D"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected zy-a, zy-b or zy-c)")]
    UnknownFamily(String),
    #[error("epsilon {eps} is outside [0, {max}] for {family}")]
    EpsilonOutOfRange {
        family: FamilyId,
        eps: String,
        max: String,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("alphabet of {var} has {size} values, fewer than the {needed} needed for disjoint supports")]
    SupportsTooSmall { var: char, size: u32, needed: u32 },
    #[error(transparent)]
    Canon(#[from] CanonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    ZyA,
    ZyB,
    ZyC,
}

impl FamilyId {
    pub const ALL: [FamilyId; 3] = [FamilyId::ZyA, FamilyId::ZyB, FamilyId::ZyC];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::ZyA => "zy-a",
            FamilyId::ZyB => "zy-b",
            FamilyId::ZyC => "zy-c",
        }
    }

    /// Largest `ε` for which every mass is nonnegative.
    pub fn eps_max(self) -> BigRational {
        let d = match self {
            FamilyId::ZyA => 1,
            FamilyId::ZyB => 2,
            FamilyId::ZyC => 3,
        };
        BigRational::new(1.into(), d.into())
    }

    /// The κ-extended inequality this family refutes.
    pub fn extension(self) -> Extension {
        let (rhs, residuals): (&str, &[&str]) = match self {
            FamilyId::ZyA => ("I(C:D|A) + I(C:D|B)", &["I(A:B)", "I(A:B|C)"]),
            FamilyId::ZyB => ("I(C:D|A) + I(C:D|B) + I(A:B)", &["I(A:B|C)", "H(C|A,B)"]),
            FamilyId::ZyC => ("I(C:D|A) + I(C:D|B) + I(A:B)", &["I(A:B|C)", "I(B:D|C)"]),
        };
        Extension {
            lhs: abcd_form("I(C:D)"),
            rhs_base: abcd_form(rhs),
            residuals: residuals.iter().map(|r| (r.to_string(), abcd_form(r))).collect(),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "zy-a" => Ok(FamilyId::ZyA),
            "zy-b" => Ok(FamilyId::ZyB),
            "zy-c" => Ok(FamilyId::ZyC),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

fn abcd() -> Vec<String> {
    FAMILY_VARS.map(String::from).to_vec()
}

fn abcd_form(text: &str) -> LinearForm {
    canonicalize(&parse_expr(text).expect("fixed expression"), &abcd()).expect("fixed expression")
}

/// A family member: an identifier with an `ε` in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    id: FamilyId,
    eps: BigRational,
}

impl Family {
    pub fn new(id: FamilyId, eps: BigRational) -> Result<Self, FamilyError> {
        if eps.is_negative() || eps > id.eps_max() {
            return Err(FamilyError::EpsilonOutOfRange {
                family: id,
                eps: number::format_fraction(&eps),
                max: number::format_fraction(&id.eps_max()),
            });
        }
        Ok(Self { id, eps })
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn build(&self) -> JointDist {
        let e = &self.eps;
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let atoms: Vec<(Vec<u32>, BigRational)> = match self.id {
            FamilyId::ZyA => {
                let quarter = (BigRational::one() - e) / q(4, 1);
                vec![
                    (vec![0, 0, 0, 1], quarter.clone()),
                    (vec![0, 1, 0, 0], quarter.clone()),
                    (vec![1, 0, 0, 1], quarter.clone()),
                    (vec![1, 1, 0, 1], quarter),
                    (vec![1, 0, 1, 1], e.clone()),
                ]
            }
            FamilyId::ZyB => {
                let half = q(1, 2) - e;
                vec![
                    (vec![1, 1, 0, 0], half.clone()),
                    (vec![0, 1, 1, 0], e.clone()),
                    (vec![1, 0, 1, 0], e.clone()),
                    (vec![0, 0, 1, 1], half),
                ]
            }
            FamilyId::ZyC => {
                let third = q(1, 3) - e;
                vec![
                    (vec![0, 0, 0, 0], e * q(3, 1)),
                    (vec![1, 1, 0, 0], third.clone()),
                    (vec![1, 0, 1, 0], third.clone()),
                    (vec![0, 1, 0, 1], third),
                ]
            }
        };
        JointDist::new(abcd(), vec![2; 4], atoms).expect("family tables are normalized")
    }
}

pub fn build_family(id: FamilyId, eps: BigRational) -> Result<JointDist, FamilyError> {
    Ok(Family::new(id, eps)?.build())
}

/// `lhs <= rhs_base + κ · Σ residuals`, as forms over `A, B, C, D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub lhs: LinearForm,
    pub rhs_base: LinearForm,
    pub residuals: Vec<(String, LinearForm)>,
}

impl Extension {
    pub fn rhs(&self, kappa: &BigRational) -> LinearForm {
        self.residuals
            .iter()
            .fold(self.rhs_base.clone(), |acc, (_, r)| &acc + &(r * kappa))
    }

    /// `rhs − lhs`; negative values violate the inequality.
    pub fn gap_form(&self, kappa: &BigRational) -> LinearForm {
        &self.rhs(kappa) - &self.lhs
    }

    pub fn residual_names(&self) -> Vec<&str> {
        self.residuals.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Both sides of a κ-extension on one family member, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub eps: BigRational,
    pub kappa: BigRational,
    pub lhs: WideReal,
    pub rhs: WideReal,
    pub gap: WideReal,
    pub residuals: Vec<(String, WideReal)>,
}

impl GapReport {
    pub fn is_violation(&self) -> bool {
        self.gap.is_negative()
    }
}

/// Entropy profile of a family member, precise enough that every
/// quantity of order `ε²` keeps about 96 significant bits.
pub fn precise_profile(f: &Family, extra_bits: u32) -> PreciseProfile {
    PreciseProfile::compute(&f.build(), precision_for(f.eps()) + extra_bits)
}

pub fn gap(f: &Family, kappa: &BigRational) -> GapReport {
    let ext = f.id().extension();
    let kappa_bits = kappa.abs().ceil().to_integer().bits() as u32;
    let p = precise_profile(f, kappa_bits + 8);
    let lhs = p.eval_exact(&ext.lhs);
    let rhs = p.eval_exact(&ext.rhs(kappa));
    GapReport {
        eps: f.eps().clone(),
        kappa: kappa.clone(),
        lhs: WideReal::from_rational(&lhs),
        rhs: WideReal::from_rational(&rhs),
        gap: WideReal::from_rational(&(&rhs - &lhs)),
        residuals: ext
            .residuals
            .iter()
            .map(|(n, r)| (n.clone(), p.eval(r)))
            .collect(),
    }
}

/// Gap reports on a logarithmic grid from `eps_min` to the family's largest
/// `ε`, in increasing `ε`.
pub fn scan(
    id: FamilyId,
    kappa: &BigRational,
    eps_min: &BigRational,
    points: usize,
) -> Result<Vec<GapReport>, FamilyError> {
    let grid = log_grid(eps_min, &id.eps_max(), points)?;
    let eval = |eps: &BigRational| gap(&Family::new(id, eps.clone()).expect("grid is in range"), kappa);
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(grid.len());
    if threads <= 1 {
        return Ok(grid.iter().map(eval).collect());
    }
    let chunk = grid.len().div_ceil(threads);
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(eval).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("grid worker panicked"))
            .collect()
    });
    Ok(reports)
}

/// Outcome of a refutation search.
#[derive(Debug, Clone, PartialEq)]
pub enum Refutation {
    /// `witness` is the smallest grid point with a negative gap. When a
    /// larger grid point has a nonnegative gap again, `threshold` is the
    /// largest violating `ε` found by bisecting the first such sign change.
    Violation {
        witness: GapReport,
        threshold: Option<GapReport>,
    },
    /// No grid point violated the inequality.
    NoViolation { grid: Vec<GapReport> },
}

impl Refutation {
    pub fn is_violation(&self) -> bool {
        matches!(self, Refutation::Violation { .. })
    }
}

/// Grid points whose gaps are local minima, for diagnosing a failed search.
pub fn gap_minima(grid: &[GapReport]) -> Vec<&GapReport> {
    let below = |a: &GapReport, b: &GapReport| a.gap.log2_abs() < b.gap.log2_abs() || b.gap.is_zero();
    (0..grid.len())
        .filter(|&i| {
            let g = &grid[i];
            !g.gap.is_zero()
                && (i == 0 || below(g, &grid[i - 1]))
                && (i + 1 == grid.len() || below(g, &grid[i + 1]))
        })
        .map(|i| &grid[i])
        .collect()
}

const BISECTION_STEPS: usize = 30;

/// Searches a logarithmic grid of `points` values from `eps_min` up to the
/// family's largest `ε` for a member on which the κ-extension fails.
pub fn refute(
    id: FamilyId,
    kappa: &BigRational,
    eps_min: &BigRational,
    points: usize,
) -> Result<Refutation, FamilyError> {
    let grid = scan(id, kappa, eps_min, points)?;
    let Some(first) = grid.iter().position(GapReport::is_violation) else {
        return Ok(Refutation::NoViolation { grid });
    };
    let threshold = grid[first..].iter().position(|g| !g.is_violation()).map(|k| {
        let mut lo = grid[first + k - 1].clone();
        let hi = &grid[first + k].eps;
        let (mut t_lo, mut t_hi) = (number::log2_rational(&lo.eps), number::log2_rational(hi));
        for _ in 0..BISECTION_STEPS {
            let t = (t_lo + t_hi) / 2.0;
            let eps = number::dyadic_pow2(t);
            if eps <= lo.eps || eps >= *hi {
                break;
            }
            let g = gap(&Family::new(id, eps).expect("between grid points"), kappa);
            if g.is_violation() {
                lo = g;
                t_lo = t;
            } else {
                t_hi = t;
            }
        }
        lo
    });
    Ok(Refutation::Violation {
        witness: grid[first].clone(),
        threshold,
    })
}
