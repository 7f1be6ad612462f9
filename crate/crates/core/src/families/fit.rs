//! Asymptotic fits of family quantities as `ε → 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{abcd, Family, FamilyError, FamilyId};
use crate::expr::{canonicalize, InfoExpr, LinearForm};
use crate::number;
use crate::precise::{PreciseProfile, WideReal};

/// Leading-order model fitted by [`slope`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `q − q(0) ≈ a·ε + b·ε²`
    Linear,
    /// `q − q(0) ≈ a·ε² + b·ε³`
    Quadratic,
    /// `q − q(0) ≈ a·ε·log₂ε + b·ε`, with `ε²·log₂ε` and `ε²` terms also
    /// fitted so that large multiples of second-order terms do not leak
    /// into `a`.
    EpsLogEps,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub model: Model,
    /// `q(0)`.
    pub limit: WideReal,
    /// Least-squares slope of `log|q − q(0)|` against `log ε`.
    pub exponent: f64,
    /// Fitted `a` of the model.
    pub coefficient: f64,
    /// Fitted `b` of the model.
    pub correction: f64,
    pub points: usize,
}

/// `points` values spaced evenly in `log ε` from `lo` to `hi`, both
/// included exactly; interior points are dyadic rationals.
pub fn log_grid(lo: &BigRational, hi: &BigRational, points: usize) -> Result<Vec<BigRational>, FamilyError> {
    if !lo.is_positive() || lo >= hi {
        return Err(FamilyError::InvalidGrid(format!(
            "need 0 < eps-min < {}",
            number::format_fraction(hi)
        )));
    }
    if points < 2 {
        return Err(FamilyError::InvalidGrid("need at least 2 points".into()));
    }
    let (t0, t1) = (number::log2_rational(lo), number::log2_rational(hi));
    let mut grid = Vec::with_capacity(points);
    grid.push(lo.clone());
    for i in 1..points - 1 {
        let eps = number::dyadic_pow2(t0 + (t1 - t0) * i as f64 / (points - 1) as f64);
        if eps > *grid.last().unwrap() && eps < *hi {
            grid.push(eps);
        }
    }
    grid.push(hi.clone());
    Ok(grid)
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let ones = vec![1.0; xs.len()];
    let c = solve_least_squares(&[xs.to_vec(), ones], ys);
    (c[0], c[1])
}

/// Coefficients minimizing `|Σ c_k columns[k] − ys|²`, via Householder QR
/// on column-normalized data.
fn solve_least_squares(columns: &[Vec<f64>], ys: &[f64]) -> Vec<f64> {
    let (m, k) = (ys.len(), columns.len());
    let scale: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE))
        .collect();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..k).map(|j| columns[j][i] / scale[j]).collect())
        .collect();
    let mut b = ys.to_vec();
    for j in 0..k {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for col in j..k {
            let dot: f64 = (j..m).map(|i| v[i - j] * a[i][col]).sum();
            for i in j..m {
                a[i][col] -= 2.0 * dot / vv * v[i - j];
            }
        }
        let dot: f64 = (j..m).map(|i| v[i - j] * b[i]).sum();
        for i in j..m {
            b[i] -= 2.0 * dot / vv * v[i - j];
        }
    }
    let mut c = vec![0.0; k];
    for j in (0..k).rev() {
        let rest: f64 = (j + 1..k).map(|l| a[j][l] * c[l]).sum();
        c[j] = if a[j][j] == 0.0 {
            0.0
        } else {
            (b[j] - rest) / a[j][j]
        };
    }
    c.iter().zip(&scale).map(|(c, s)| c / s).collect()
}

/// Fits the behaviour of `quantity` (over `A, B, C, D`) near `ε = 0`.
pub fn slope(
    id: FamilyId,
    quantity: &InfoExpr,
    model: Model,
    grid: &[BigRational],
) -> Result<SlopeReport, FamilyError> {
    let form = canonicalize(quantity, &abcd())?;
    slope_of_form(id, &form, model, grid)
}

pub fn slope_of_form(
    id: FamilyId,
    form: &LinearForm,
    model: Model,
    grid: &[BigRational],
) -> Result<SlopeReport, FamilyError> {
    if grid.len() < 2 {
        return Err(FamilyError::InvalidGrid("need at least 2 points".into()));
    }
    let limit = super::precise_profile(&Family::new(id, BigRational::zero())?, 0).eval_exact(form);
    let mut logs_eps = Vec::new();
    let mut logs_dev = Vec::new();
    let width = if model == Model::EpsLogEps { 4 } else { 2 };
    let mut columns = vec![Vec::new(); width];
    let mut ys = Vec::new();
    for eps in grid {
        if !eps.is_positive() {
            return Err(FamilyError::InvalidGrid("grid points must be positive".into()));
        }
        let f = Family::new(id, eps.clone())?;
        let dev = super::precise_profile(&f, 0).eval_exact(form) - &limit;
        if dev.is_zero() {
            continue;
        }
        let log_eps = number::log2_rational(eps);
        let e = number::rational_to_f64(eps);
        logs_eps.push(log_eps);
        logs_dev.push(number::log2_rational(&dev.abs()));
        // the model divided by its leading power of ε
        let (row, basis) = match model {
            Model::Linear => (vec![1.0, e], eps.clone()),
            Model::Quadratic => (vec![1.0, e], eps * eps),
            Model::EpsLogEps => (vec![log_eps, 1.0, e * log_eps, e], eps.clone()),
        };
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
        ys.push(number::rational_to_f64(&(dev / basis)));
    }
    if ys.len() < width + 1 {
        return Err(FamilyError::InvalidGrid(
            "too few points where the quantity varies".into(),
        ));
    }
    let (exponent, _) = least_squares(&logs_eps, &logs_dev);
    let fitted = solve_least_squares(&columns, &ys);
    let (coefficient, correction) = (fitted[0], fitted[1]);
    Ok(SlopeReport {
        model,
        limit: WideReal::from_rational(&limit),
        exponent,
        coefficient,
        correction,
        points: ys.len(),
    })
}

/// Comparison of one quantity of the second family with its two-term
/// expansion `1 + (c − 2/ln 2)·ε + 2ε·log ε`, read with a base-2 and with a
/// natural logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCheck {
    pub quantity: &'static str,
    pub eps: f64,
    /// `q − 1`.
    pub deviation: f64,
    pub base2_error: f64,
    pub base_e_error: f64,
}

impl SeriesCheck {
    pub fn base2_matches(&self) -> bool {
        self.base2_error.abs() < self.base_e_error.abs()
    }
}

/// Checks `I(A:B) = 1 + (2 − 2/ln 2)ε + 2ε log ε + O(ε²)` and
/// `I(C:D) = 1 + (4 − 2/ln 2)ε + 2ε log ε + O(ε²)` at one `ε`.
pub fn zy_b_series(eps: &BigRational) -> Result<[SeriesCheck; 2], FamilyError> {
    let f = Family::new(FamilyId::ZyB, eps.clone())?;
    let profile: PreciseProfile = super::precise_profile(&f, 0);
    let e = number::rational_to_f64(eps);
    let ln2 = std::f64::consts::LN_2;
    let check = |quantity: &'static str, c: f64| {
        let form = super::abcd_form(quantity);
        let value = profile.eval_exact(&form) - BigRational::from_integer(1.into());
        let deviation = number::rational_to_f64(&value);
        let linear = (c - 2.0 / ln2) * e;
        SeriesCheck {
            quantity,
            eps: e,
            deviation,
            base2_error: deviation - linear - 2.0 * e * e.log2(),
            base_e_error: deviation - linear - 2.0 * e * e.ln(),
        }
    };
    Ok([check("I(A:B)", 2.0), check("I(C:D)", 4.0)])
}
