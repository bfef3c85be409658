//! Gaussian elimination over `F_q`.

use crate::gf::{Elem, Field};

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows end up at the bottom.
pub fn rref(field: &Field, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let Some(found) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(top, found);
        let inv = field.inv(rows[top][col]).expect("pivot is nonzero");
        for x in rows[top].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = field.sub(*x, field.mul(c, p));
            }
        }
        pivots.push(col);
        top += 1;
    }
    pivots
}

/// Rank of the matrix with the given rows.
pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut work = rows.to_vec();
    rref(field, &mut work).len()
}

/// A basis of `{x : A x = 0}` for the matrix with rows `rows` and `ncols` columns.
pub fn nullspace(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(field, &mut work);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Elem::ZERO; ncols];
        v[free] = Elem::ONE;
        for (row, &pc) in work.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(field: &Field, data: &[&[u64]]) -> Vec<Vec<Elem>> {
        data.iter()
            .map(|r| r.iter().map(|&x| field.elem(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn rank_and_rref() {
        let f = Field::new(3).unwrap();
        let mut m = rows(&f, &[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2]]);
        assert_eq!(rank(&f, &m), 2);
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m, rows(&f, &[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]));
        assert_eq!(rank(&f, &[]), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = Field::new(5).unwrap();
        let a = rows(&f, &[&[1, 2, 3, 4], &[0, 1, 1, 0]]);
        let ns = nullspace(&f, &a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &a {
                let dot = r.iter().zip(v).fold(Elem::ZERO, |s, (&x, &y)| f.add(s, f.mul(x, y)));
                assert!(dot.is_zero());
            }
        }
    }
}
