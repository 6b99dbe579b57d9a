//! Row reduction over a [`Field`]: rank and kernel bases.

use crate::scalar::Field;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(rows: &mut [Vec<F>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Largest magnitude pivot keeps the float path stable.
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .max_by(|&i, &j| rows[i][c].abs().partial_cmp(&rows[j][c].abs()).unwrap_or(std::cmp::Ordering::Equal))
        else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// A basis of `{x : M x = 0}` for an `m × ncols` matrix.
pub fn kernel_basis<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Matrix-vector product.
pub fn mat_vec<F: Field>(rows: &[Vec<F>], x: &[F]) -> Vec<F> {
    rows.iter().map(|r| crate::vector::dot(r, x)).collect()
}
