//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use iitk::dist::JointDist;
use iitk::expr::{InfoExpr, Quantity, Term};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

pub const NAMES: [&str; 4] = ["A", "B", "C", "D"];

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn decode(mut code: u32, sizes: &[u32]) -> Vec<u32> {
    sizes
        .iter()
        .map(|&s| {
            let v = code % s;
            code /= s;
            v
        })
        .collect()
}

/// A distribution on `n` variables with alphabets of 1 to `max_alphabet`
/// values and random integer weights, about a third of them zero.
pub fn random_dist(rng: &mut impl Rng, n: usize, max_alphabet: u32) -> JointDist {
    let sizes: Vec<u32> = (0..n).map(|_| rng.random_range(1..=max_alphabet)).collect();
    let total: u32 = sizes.iter().product();
    let mut atoms: Vec<(Vec<u32>, BigRational)> = (0..total)
        .map(|code| {
            let w = if rng.random_bool(0.3) {
                0
            } else {
                rng.random_range(1..=20)
            };
            (decode(code, &sizes), q(w, 1))
        })
        .collect();
    if atoms.iter().all(|(_, w)| *w == q(0, 1)) {
        atoms[0].1 = q(1, 1);
    }
    let vars = NAMES[..n].iter().map(|s| s.to_string()).collect();
    JointDist::from_weights(vars, sizes, atoms).unwrap()
}

/// `H(S)` in bits from the definition: for every assignment to the chosen
/// variables, sum the mass of every matching point of the full product
/// space.
pub fn brute_force_entropy(d: &JointDist, chosen: &[usize]) -> f64 {
    let sizes = d.alphabet_sizes();
    let total: u32 = sizes.iter().product();
    let sub_sizes: Vec<u32> = chosen.iter().map(|&i| sizes[i]).collect();
    let sub_total: u32 = sub_sizes.iter().product();
    let mut h = 0.0;
    for sub in 0..sub_total {
        let target = decode(sub, &sub_sizes);
        let mut p = 0.0;
        for code in 0..total {
            let x = decode(code, sizes);
            if chosen.iter().zip(&target).all(|(&i, &t)| x[i] == t) {
                p += d.mass(&x).to_f64().unwrap();
            }
        }
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

fn entropy_of(d: &JointDist, names: &[&Vec<String>]) -> f64 {
    let mut idx: Vec<usize> = names
        .iter()
        .flat_map(|list| list.iter())
        .map(|n| d.index_of(n).expect("known variable"))
        .collect();
    idx.sort_unstable();
    idx.dedup();
    brute_force_entropy(d, &idx)
}

/// Term-by-term value of an expression, using `H(S|T) = H(S,T) − H(T)` and
/// `I(S:T|U) = H(S|U) − H(S|T,U)` with brute-force entropies.
pub fn direct_eval(e: &InfoExpr, d: &JointDist) -> f64 {
    e.terms
        .iter()
        .map(|t| {
            let c = t.coef.to_f64().unwrap();
            let v = match &t.quantity {
                None => 1.0,
                Some(Quantity::Entropy { of, given }) => {
                    entropy_of(d, &[of, given]) - entropy_of(d, &[given])
                }
                Some(Quantity::MutualInfo { left, right, given }) => {
                    let h_s_u = entropy_of(d, &[left, given]) - entropy_of(d, &[given]);
                    let h_s_tu = entropy_of(d, &[left, right, given]) - entropy_of(d, &[right, given]);
                    h_s_u - h_s_tu
                }
            };
            c * v
        })
        .sum()
}

fn random_list(rng: &mut impl Rng, vars: &[&str], nonempty: bool) -> Vec<String> {
    let mut pool: Vec<&str> = vars.to_vec();
    pool.shuffle(rng);
    let lo = usize::from(nonempty);
    let k = rng.random_range(lo..=pool.len().min(3));
    pool[..k].iter().map(|s| s.to_string()).collect()
}

/// 1 to 5 terms over `vars` with nonzero rational coefficients, including
/// the occasional bare constant.
pub fn random_expr(rng: &mut impl Rng, vars: &[&str]) -> InfoExpr {
    let count = rng.random_range(1..=5);
    let terms = (0..count)
        .map(|_| {
            let mut num = rng.random_range(-9..=8);
            if num >= 0 {
                num += 1;
            }
            let coef = q(num, rng.random_range(1..=4));
            let quantity = match rng.random_range(0..10) {
                0 => None,
                1..=4 => Some(Quantity::Entropy {
                    of: random_list(rng, vars, true),
                    given: random_list(rng, vars, false),
                }),
                _ => Some(Quantity::MutualInfo {
                    left: random_list(rng, vars, true),
                    right: random_list(rng, vars, true),
                    given: random_list(rng, vars, false),
                }),
            };
            Term { coef, quantity }
        })
        .collect();
    InfoExpr { terms }
}
