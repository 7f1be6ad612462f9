//! Entropy profiles: the vector of joint entropies over all nonempty
//! variable subsets.
//!
//! Subsets are bitmasks (variable `i` is bit `i`), and a profile stores the
//! entropy of mask `m` at position `m - 1`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::dist::JointDist;
use crate::expr::LinearForm;
use crate::number;

pub type Mask = u32;

/// Largest variable count the subset machinery supports.
pub const MAX_VARS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("form over {form} variables evaluated on a profile over {profile}")]
    DimensionMismatch { form: usize, profile: usize },
}

/// Number of nonempty subsets of `n` variables.
pub fn subset_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// Positions of the set bits of `mask`, ascending.
pub fn members(mask: Mask) -> Vec<usize> {
    (0..Mask::BITS as usize).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `"A,B"`-style label of a subset.
pub fn subset_label<S: AsRef<str>>(mask: Mask, names: &[S]) -> String {
    members(mask)
        .into_iter()
        .map(|i| names[i].as_ref())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVector {
    n: usize,
    values: Vec<f64>,
}

impl EntropyVector {
    /// Wraps raw values indexed by `mask - 1`.
    pub fn from_values(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), subset_count(n), "profile length");
        Self { n, values }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Entropy of the subset `mask` in bits; the empty set has entropy 0.
    pub fn get(&self, mask: Mask) -> f64 {
        if mask == 0 {
            0.0
        } else {
            self.values[mask as usize - 1]
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(mask, entropy)` pairs in mask order.
    pub fn iter(&self) -> impl Iterator<Item = (Mask, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &h)| (i as Mask + 1, h))
    }
}

/// Shannon entropy in bits of every nonempty marginal of `d`.
///
/// Marginal masses are summed exactly before conversion to floating point,
/// so the profile depends only on the rational table.
pub fn entropy_profile(d: &JointDist) -> EntropyVector {
    let n = d.num_vars();
    let values = (1..=subset_count(n) as Mask)
        .map(|mask| {
            let mut marginal: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
            let keep = members(mask);
            for (outcome, p) in d.atoms() {
                let key = keep.iter().map(|&i| outcome[i]).collect();
                *marginal.entry(key).or_insert_with(BigRational::zero) += p;
            }
            marginal.values().map(plogp).sum::<f64>()
        })
        .collect();
    EntropyVector { n, values }
}

/// `-p log₂ p` for a positive rational.
pub(crate) fn plogp(p: &BigRational) -> f64 {
    -number::rational_to_f64(p) * number::log2_rational(p)
}

/// Dot product of a canonical form with a profile.
pub fn eval_form(v: &EntropyVector, f: &LinearForm) -> Result<f64, ProfileError> {
    if f.num_vars() != v.n {
        return Err(ProfileError::DimensionMismatch {
            form: f.num_vars(),
            profile: v.n,
        });
    }
    Ok(f.terms()
        .map(|(mask, c)| number::rational_to_f64(c) * v.get(mask))
        .sum())
}
