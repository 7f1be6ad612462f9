//! Arbitrary-precision entropy evaluation.
//!
//! Gaps of the parametric families shrink like `ε·log ε` while the entropies
//! themselves stay of order one, so resolving the sign of a gap at
//! `ε = 2^-2000` needs thousands of bits. Values here are fixed-point
//! integers `X` standing for `X / 2^precision`, and logarithms come from the
//! `atanh` series after square-root argument reduction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist::JointDist;
use crate::expr::LinearForm;
use crate::number;
use crate::profile::{members, subset_count};

/// A real with an unbounded binary exponent: `mantissa · 2^exp`, mantissa in
/// `[0.5, 1)` in magnitude (or zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WideReal {
    mantissa: f64,
    exp: i64,
}

impl WideReal {
    pub const ZERO: WideReal = WideReal {
        mantissa: 0.0,
        exp: 0,
    };

    pub fn from_rational(x: &BigRational) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        let shift = x.numer().bits() as i64 - x.denom().bits() as i64;
        let r = (x / number::pow2(shift)).to_f64().unwrap();
        Self::normalized(r, shift)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self { mantissa: x, exp: 0 };
        }
        Self::normalized(x, 0)
    }

    fn normalized(mut m: f64, mut e: i64) -> Self {
        while m.abs() >= 1.0 {
            m /= 2.0;
            e += 1;
        }
        while m.abs() < 0.5 {
            m *= 2.0;
            e -= 1;
        }
        Self { mantissa: m, exp: e }
    }

    /// Nearest `f64`; underflows to a signed zero.
    pub fn to_f64(self) -> f64 {
        number::ldexp(self.mantissa, self.exp)
    }

    pub fn is_negative(self) -> bool {
        self.mantissa < 0.0
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn abs(self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
        }
    }

    /// `log₂|x|`, finite for every nonzero value.
    pub fn log2_abs(self) -> f64 {
        self.mantissa.abs().log2() + self.exp as f64
    }

    /// `x / y` as an `f64`, meaningful even when both underflow.
    pub fn ratio(self, other: WideReal) -> f64 {
        number::ldexp(self.mantissa / other.mantissa, self.exp - other.exp)
    }
}

impl WideReal {
    /// Twelve significant digits in scientific notation, e.g.
    /// `-2.06124853678e-632`.
    pub fn to_scientific(self) -> String {
        if self.mantissa == 0.0 {
            return format!("{:.11e}", 0.0);
        }
        if (-1000..1000).contains(&self.exp) {
            return format!("{:.11e}", self.to_f64());
        }
        self.to_string()
    }
}

impl fmt::Display for WideReal {
    /// Same format as [`number::format_real`] when the value fits in an
    /// `f64`, otherwise twelve significant digits with a decimal exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa == 0.0 || (-1000..1000).contains(&self.exp) {
            return f.write_str(&number::format_real(self.to_f64()));
        }
        let log10 = self.mantissa.abs().log10() + self.exp as f64 * std::f64::consts::LOG10_2;
        let mut dexp = log10.floor();
        let mut digits = 10f64.powf(log10 - dexp);
        if format!("{digits:.11}").starts_with("10") {
            digits /= 10.0;
            dexp += 1.0;
        }
        let sign = if self.mantissa < 0.0 { "-" } else { "" };
        write!(f, "{sign}{digits:.11}e{dexp}")
    }
}

/// Fixed-point natural logarithms at one working precision, with `ln 2`
/// cached.
pub struct LnContext {
    work: u32,
    roots: u32,
    ln2: BigInt,
}

impl LnContext {
    /// A context whose results are accurate to roughly `2^-precision`.
    pub fn new(precision: u32) -> Self {
        let roots = ((precision as f64).sqrt() / 2.0).ceil() as u32;
        let work = precision + roots + 64;
        let mut ctx = Self {
            work,
            roots,
            ln2: BigInt::zero(),
        };
        ctx.ln2 = ctx.ln_unit_interval(BigInt::from(2) << work);
        ctx
    }

    pub fn work_bits(&self) -> u32 {
        self.work
    }

    /// `ln r · 2^work` for a fixed-point `r·2^work` with `r ∈ [1, 2]`.
    fn ln_unit_interval(&self, r: BigInt) -> BigInt {
        let w = self.work;
        let one = BigInt::one() << w;
        let mut r = r;
        for _ in 0..self.roots {
            r = (r << w).sqrt();
        }
        let z = ((&r - &one) << w) / (&r + &one);
        let z2 = (&z * &z) >> w;
        let mut sum = BigInt::zero();
        let mut power = z;
        let mut k: u32 = 0;
        while !power.is_zero() {
            sum += &power / BigInt::from(2 * k + 1);
            power = (&power * &z2) >> w;
            k += 1;
        }
        sum << (self.roots + 1)
    }

    /// `ln x · 2^work` for a positive rational.
    pub fn ln(&self, x: &BigRational) -> BigInt {
        debug_assert!(x.is_positive());
        let (num, den) = (x.numer(), x.denom());
        let mut shift = num.bits() as i64 - den.bits() as i64;
        // r = x / 2^shift lies in (1/2, 2); move it into [1, 2)
        let scaled = |s: i64| -> BigInt {
            let e = self.work as i64 - s;
            if e >= 0 {
                (num << e as u64) / den
            } else {
                num / (den << (-e) as u64)
            }
        };
        let mut r = scaled(shift);
        if r < (BigInt::one() << self.work) {
            shift -= 1;
            r = scaled(shift);
        }
        self.ln_unit_interval(r) + &self.ln2 * BigInt::from(shift)
    }
}

/// Entropy profile held as exact rationals `X / 2^precision` with integer
/// `X`.
#[derive(Debug, Clone)]
pub struct PreciseProfile {
    n: usize,
    precision: u32,
    values: Vec<BigInt>,
}

/// Working precision for a member of a parametric family at `eps`: enough
/// to resolve quantities of order `eps²` with 96 bits to spare.
pub fn precision_for(eps: &BigRational) -> u32 {
    if eps.is_zero() {
        return 96;
    }
    let depth = eps.denom().bits() as i64 - eps.numer().bits() as i64;
    (2 * depth.max(0) + 96) as u32
}

impl PreciseProfile {
    pub fn compute(d: &JointDist, precision: u32) -> Self {
        let ctx = LnContext::new(precision);
        let w = ctx.work_bits();
        let n = d.num_vars();
        let mut logs: HashMap<BigRational, BigInt> = HashMap::new();
        let values = (1..=subset_count(n) as u32)
            .map(|mask| {
                let keep = members(mask);
                let mut marginal: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
                for (outcome, p) in d.atoms() {
                    let key = keep.iter().map(|&i| outcome[i]).collect();
                    *marginal.entry(key).or_insert_with(BigRational::zero) += p;
                }
                // H·ln2·2^w = -Σ p·ln p·2^w
                let mut acc = BigInt::zero();
                for p in marginal.values() {
                    let ln = logs.entry(p.clone()).or_insert_with(|| ctx.ln(p));
                    acc -= (&*ln * p.numer()) / p.denom();
                }
                // divide by ln 2 and drop to the requested precision
                let h = (acc << w) / &ctx.ln2;
                round_shift(h, w - precision)
            })
            .collect();
        Self { n, precision, values }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Value of the form on this profile. Each stored entropy is within one
    /// unit of `2^-precision`, so results within `2·Σ|c|` units of zero are
    /// indistinguishable from zero and are returned as exactly zero.
    pub fn eval_exact(&self, f: &LinearForm) -> BigRational {
        assert_eq!(f.num_vars(), self.n, "form dimension");
        let mut num = BigRational::zero();
        let mut bound = BigRational::zero();
        for (mask, c) in f.terms() {
            num += c * BigRational::from_integer(self.values[mask as usize - 1].clone());
            bound += c.abs() * BigRational::from_integer(2.into());
        }
        if num.abs() <= bound {
            return BigRational::zero();
        }
        num * number::pow2(-(self.precision as i64))
    }

    pub fn eval(&self, f: &LinearForm) -> WideReal {
        WideReal::from_rational(&self.eval_exact(f))
    }

    pub fn entropy(&self, mask: u32) -> f64 {
        number::rational_to_f64(&BigRational::new(
            self.values[mask as usize - 1].clone(),
            BigInt::one() << self.precision,
        ))
    }
}

fn round_shift(x: BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x;
    }
    let half = BigInt::one() << (bits - 1);
    match x.sign() {
        Sign::Minus => -((-x + half) >> bits),
        _ => (x + half) >> bits,
    }
}
