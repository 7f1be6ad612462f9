//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0` for `c >= 0`. When the system is
//! infeasible the phase-one duals give a Farkas vector `y` with
//! `yᵀA <= 0` and `yᵀb > 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(Vec<Q>),
    Infeasible(Vec<Q>),
}

struct Tableau {
    /// Constraint rows; the last entry is the right-hand side.
    rows: Vec<Vec<Q>>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<Q>| {
            let k = row[c].clone();
            if k.is_zero() {
                return;
            }
            for &j in &nonzero {
                row[j] -= &k * &pivot_row[j];
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false when
    /// unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bq)) => ratio < *bq || (ratio == *bq && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub(crate) fn solve(a: &[Vec<Q>], b: &[Q], cost: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = cost.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert!(cost.iter().all(|c| !c.is_negative()));
    let width = n + m + 1;

    // Phase one: flip rows so b >= 0, add one artificial per row.
    let signs: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Q::zero(); width];
        for (j, v) in a[i].iter().enumerate() {
            row[j] = if signs[i] { -v } else { v.clone() };
        }
        row[n + i] = Q::one();
        row[width - 1] = b[i].abs();
        rows.push(row);
    }
    let mut obj = vec![Q::zero(); width];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
    };
    let bounded = t.optimize(n + m);
    debug_assert!(bounded, "phase one is bounded below by zero");

    if t.obj[width - 1].is_negative() {
        let farkas = (0..m)
            .map(|i| {
                let y = Q::one() - &t.obj[n + i];
                if signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return LpOutcome::Infeasible(farkas);
    }

    // Drive remaining artificials out of the basis; rows where that is
    // impossible are redundant.
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
            Some(c) => t.pivot(r, c),
            None => t.rows[r].clear(),
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&r| !t.rows[r].is_empty()).collect();
    t.rows = keep.iter().map(|&r| std::mem::take(&mut t.rows[r])).collect();
    t.basis = keep.iter().map(|&r| t.basis[r]).collect();

    // Phase two.
    let mut obj = vec![Q::zero(); width];
    obj[..n].clone_from_slice(cost);
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = &cost[bv];
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            if (j < n || j == width - 1) && !row[j].is_zero() {
                obj[j] -= cb * &row[j];
            }
        }
    }
    t.obj = obj;
    let bounded = t.optimize(n);
    debug_assert!(bounded, "nonnegative cost is bounded below");

    let mut x = vec![Q::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[width - 1].clone();
    }
    LpOutcome::Optimal(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn residual(a: &[Vec<Q>], x: &[Q], b: &[Q]) -> bool {
        a.iter()
            .zip(b)
            .all(|(row, bi)| row.iter().zip(x).fold(Q::zero(), |s, (aij, xj)| s + aij * xj) == *bi)
    }

    #[test]
    fn feasible_minimum() {
        // x0 + x1 = 2, x1 + x2 = 1, min x0 + 2 x1 + x2  ->  x0 = 2, x2 = 1
        let a = mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![q(2), q(1)];
        let LpOutcome::Optimal(x) = solve(&a, &b, &[q(1), q(3), q(1)]) else {
            panic!("expected feasible");
        };
        assert!(residual(&a, &x, &b));
        assert_eq!(x, vec![q(2), q(0), q(1)]);
    }

    #[test]
    fn infeasible_gives_farkas_vector() {
        // x0 - x1 = -1 and x0 - x1 = 1 cannot both hold
        let a = mat(&[&[1, -1], &[1, -1]]);
        let b = vec![q(-1), q(1)];
        let LpOutcome::Infeasible(y) = solve(&a, &b, &[q(0), q(0)]) else {
            panic!("expected infeasible");
        };
        for j in 0..2 {
            let col: Q = (0..2).map(|i| &y[i] * &a[i][j]).sum();
            assert!(!col.is_positive());
        }
        let yb: Q = (0..2).map(|i| &y[i] * &b[i]).sum();
        assert!(yb.is_positive());
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        let b = vec![q(1), q(2)];
        let LpOutcome::Optimal(x) = solve(&a, &b, &[q(1), q(1)]) else {
            panic!("expected feasible");
        };
        assert!(residual(&a, &x, &b));
    }

    #[test]
    fn degenerate_system_is_solved() {
        // Beale's degenerate constraint matrix in equality form with slacks.
        let third = Q::new(1.into(), 3.into());
        let a = vec![
            vec![
                Q::new(1.into(), 4.into()),
                q(-60),
                -Q::new(1.into(), 25.into()),
                q(9),
                q(1),
                q(0),
                q(0),
            ],
            vec![
                Q::new(1.into(), 2.into()),
                q(-90),
                -Q::new(1.into(), 50.into()),
                q(3),
                q(0),
                q(1),
                q(0),
            ],
            vec![q(0), q(0), q(1), q(0), q(0), q(0), q(1)],
        ];
        let b = vec![q(0), q(0), q(1)];
        let LpOutcome::Optimal(x) = solve(&a, &b, &vec![third; 7]) else {
            panic!("expected feasible");
        };
        assert!(residual(&a, &x, &b));
    }
}
