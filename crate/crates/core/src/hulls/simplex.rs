//! Phase-one simplex for `A x = b, x ≥ 0`.
//!
//! Dense tableau with Bland's rule. Either a feasible point is returned or a
//! Farkas vector `y` with `Aᵀy ≥ 0` and `bᵀy < 0`.

use std::cmp::Ordering;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility<F> {
    Feasible(Vec<F>),
    Infeasible(Vec<F>),
}

impl<F> Feasibility<F> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides feasibility of `{x ≥ 0 : A x = b}`; `a` is row-major, `m × n`.
pub fn feasibility<F: Field>(a: &[Vec<F>], b: &[F]) -> Feasibility<F> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    if m == 0 {
        return Feasibility::Feasible(vec![F::zero(); n]);
    }

    // Row signs so that the right-hand side is nonnegative.
    let flip: Vec<bool> = b.iter().map(Field::is_negative).collect();
    let width = n + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<F>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        row.extend(a[i].iter().map(|v| if flip[i] { -v.clone() } else { v.clone() }));
        for k in 0..m {
            row.push(if k == i { F::one() } else { F::zero() });
        }
        row.push(if flip[i] { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![F::zero(); width];
    for j in 0..n {
        cost[j] = t.iter().fold(F::zero(), |acc, row| acc - row[j].clone());
    }
    cost[rhs] = t.iter().fold(F::zero(), |acc, row| acc - row[rhs].clone());

    while let Some(entering) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leaving: Option<(usize, F)> = None;
        for i in 0..m {
            if !t[i][entering].is_positive() {
                continue;
            }
            let ratio = t[i][rhs].clone() / t[i][entering].clone();
            leaving = match leaving {
                None => Some((i, ratio)),
                Some((best, best_ratio)) => match ratio.cmp_tol(&best_ratio) {
                    Ordering::Less => Some((i, ratio)),
                    Ordering::Equal if basis[i] < basis[best] => Some((i, ratio)),
                    _ => Some((best, best_ratio)),
                },
            };
        }
        // The phase-one objective is bounded below by zero, so a pivot row exists.
        let Some((row, _)) = leaving else { break };
        pivot(&mut t, &mut cost, row, entering);
        basis[row] = entering;
    }

    // -cost[rhs] is the optimum of the phase-one problem.
    if (-cost[rhs].clone()).is_positive() {
        let y = (0..m)
            .map(|k| {
                // Dual of row k is 1 - (reduced cost of artificial k), in flipped
                // coordinates; undo the row flip and negate for the Farkas form.
                let pi = F::one() - cost[n + k].clone();
                if flip[k] {
                    pi
                } else {
                    -pi
                }
            })
            .collect();
        return Feasibility::Infeasible(y);
    }

    let mut x = vec![F::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[i][rhs].clone();
        }
    }
    Feasibility::Feasible(x)
}

fn pivot<F: Field>(t: &mut [Vec<F>], cost: &mut [F], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col] == F::zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            *v = v.clone() - factor.clone() * pv.clone();
        }
    }
    let factor = cost[col].clone();
    for (v, pv) in cost.iter_mut().zip(&pivot_row) {
        *v = v.clone() - factor.clone() * pv.clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use crate::vector::dot;

    fn q(v: i64) -> Rational {
        rational(v, 1)
    }

    fn check_farkas(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) {
        for j in 0..a[0].len() {
            let col: Vec<Rational> = a.iter().map(|r| r[j].clone()).collect();
            assert!(dot(&col, y) >= q(0), "Aᵀy ≥ 0 violated in column {j}");
        }
        assert!(dot(b, y) < q(0));
    }

    #[test]
    fn feasible_system() {
        let a = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let b = vec![q(2), q(3)];
        match feasibility(&a, &b) {
            Feasibility::Feasible(x) => {
                assert!(x.iter().all(|v| *v >= q(0)));
                for (row, rhs) in a.iter().zip(&b) {
                    assert_eq!(&dot(row, &x), rhs);
                }
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_system_has_farkas_vector() {
        // x1 + x2 = -1 with x ≥ 0.
        let a = vec![vec![q(1), q(1)]];
        let b = vec![q(-1)];
        match feasibility(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            other => panic!("expected infeasible, got {other:?}"),
        }
        // x1 - x2 = 1, x1 - x2 = 2.
        let a = vec![vec![q(1), q(-1)], vec![q(1), q(-1)]];
        let b = vec![q(1), q(2)];
        match feasibility(&a, &b) {
            Feasibility::Infeasible(y) => check_farkas(&a, &b, &y),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_redundant_rows() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(0)]];
        let b = vec![q(2), q(4), q(0)];
        assert!(feasibility(&a, &b).is_feasible());
    }

    #[test]
    fn float_mode_matches() {
        let a = vec![vec![1.0, -1.0, -1.0], vec![0.0, 1.0, -1.0], vec![1.0, 1.0, 1.0]];
        let b = vec![0.0, 0.0, 1.0];
        match feasibility(&a, &b) {
            Feasibility::Feasible(x) => {
                assert!((x[0] - 0.5).abs() < 1e-12);
                assert!((x[1] - 0.25).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
