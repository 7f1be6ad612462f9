//! Random distributions satisfying `H(C|A,B) = 0` and `I(A:B|C) = 0`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{abcd, FamilyError};
use crate::dist::JointDist;

/// Alphabet sizes of `A, B, C, D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabets {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Alphabets {
    pub const fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Self { a, b, c, d }
    }
}

fn weights(rng: &mut ChaCha8Rng, count: usize, max: u32) -> Vec<u32> {
    let mut w: Vec<u32> = (0..count).map(|_| rng.random_range(0..=max)).collect();
    if w.iter().all(|&x| x == 0) {
        let i = rng.random_range(0..count);
        w[i] = 1;
    }
    w
}

/// Draws `C`, then `A` and `B` independently given `C` on blocks of their
/// alphabets that are disjoint across values of `C` (value `v` of `A` lies
/// in block `v mod |C|`), then `D` arbitrarily given `(A, B, C)`. Masses are
/// exact rationals; the result depends only on `seed`.
pub fn random_constrained(sizes: Alphabets, seed: u64) -> Result<JointDist, FamilyError> {
    for (var, size) in [('A', sizes.a), ('B', sizes.b)] {
        if size < sizes.c {
            return Err(FamilyError::SupportsTooSmall {
                var,
                size,
                needed: sizes.c,
            });
        }
    }
    if sizes.c == 0 || sizes.d == 0 {
        return Err(FamilyError::SupportsTooSmall {
            var: if sizes.c == 0 { 'C' } else { 'D' },
            size: 0,
            needed: 1,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = |size: u32, c: u32| (0..size).filter(move |v| v % sizes.c == c).collect::<Vec<_>>();
    let pc = weights(&mut rng, sizes.c as usize, 8);
    let mut atoms = Vec::new();
    for c in 0..sizes.c {
        if pc[c as usize] == 0 {
            continue;
        }
        let (av, bv) = (block(sizes.a, c), block(sizes.b, c));
        let pa = weights(&mut rng, av.len(), 8);
        let pb = weights(&mut rng, bv.len(), 8);
        let (sa, sb) = (pa.iter().sum::<u32>(), pb.iter().sum::<u32>());
        for (a, &wa) in av.iter().zip(&pa) {
            for (b, &wb) in bv.iter().zip(&pb) {
                let pd = weights(&mut rng, sizes.d as usize, 8);
                let sd = pd.iter().sum::<u32>();
                for (d, &wd) in pd.iter().enumerate() {
                    let num = pc[c as usize] as u64 * wa as u64 * wb as u64 * wd as u64;
                    let den = sa as u64 * sb as u64 * sd as u64;
                    atoms.push((
                        vec![*a, *b, c, d as u32],
                        BigRational::new(num.into(), den.into()),
                    ));
                }
            }
        }
    }
    let sizes = vec![sizes.a, sizes.b, sizes.c, sizes.d];
    Ok(JointDist::from_weights(abcd(), sizes, atoms).expect("weights are valid"))
}
