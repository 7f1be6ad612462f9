use num_rational::BigRational;
use num_traits::One;

use super::ConeError;
use crate::expr::LinearForm;
use crate::profile::{subset_label, Mask};

/// Largest variable count accepted by the cone test (246 elementals).
pub const MAX_CONE_VARS: usize = 6;

/// One member of the minimal elemental set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elemental {
    /// `H(X_var | all other variables) >= 0`
    CondEntropy { var: usize },
    /// `I(X_i : X_j | Z) >= 0` with `i < j` and `Z` avoiding both.
    CondMutualInfo { i: usize, j: usize, given: Mask },
}

impl Elemental {
    pub fn form(&self, n: usize) -> LinearForm {
        let one = BigRational::one();
        let mut f = LinearForm::zero(n);
        match *self {
            Elemental::CondEntropy { var } => {
                let all: Mask = (1 << n) - 1;
                f.add_cond_entropy(1 << var, all & !(1 << var), &one);
            }
            Elemental::CondMutualInfo { i, j, given } => {
                f.add_mutual_info(1 << i, 1 << j, given, &one);
            }
        }
        f
    }

    /// Rendered as a mutual information; `H(X|Z)` appears as `I(X:X|Z)`.
    pub fn label<S: AsRef<str>>(&self, names: &[S]) -> String {
        let (a, b, given) = match *self {
            Elemental::CondEntropy { var } => {
                let all: Mask = (1 << names.len()) - 1;
                (var, var, all & !(1 << var))
            }
            Elemental::CondMutualInfo { i, j, given } => (i, j, given),
        };
        let (a, b) = (names[a].as_ref(), names[b].as_ref());
        if given == 0 {
            format!("I({a}:{b})")
        } else {
            format!("I({a}:{b}|{})", subset_label(given, names))
        }
    }
}

/// The elemental inequalities for `n` variables in a fixed order: the `n`
/// conditional entropies first, then pairs `i < j` in lexicographic order,
/// each with its conditioning sets in increasing mask order. There are
/// `n + C(n,2)·2^(n−2)` of them.
pub fn elementals(n: usize) -> Result<Vec<Elemental>, ConeError> {
    if !(1..=MAX_CONE_VARS).contains(&n) {
        return Err(ConeError::VariableCount(n));
    }
    let mut out: Vec<Elemental> = (0..n).map(|var| Elemental::CondEntropy { var }).collect();
    for i in 0..n {
        for j in i + 1..n {
            let pair: Mask = (1 << i) | (1 << j);
            for given in 0..(1 << n) as Mask {
                if given & pair == 0 {
                    out.push(Elemental::CondMutualInfo { i, j, given });
                }
            }
        }
    }
    Ok(out)
}

/// Forms of [`elementals`], each asserted `>= 0`.
pub fn elemental_inequalities(n: usize) -> Result<Vec<LinearForm>, ConeError> {
    Ok(elementals(n)?.iter().map(|e| e.form(n)).collect())
}
