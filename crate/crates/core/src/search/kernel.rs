//! The counting kernel: a precomputed monomial-value table scanned point by
//! point, with the remaining basis polynomials skipped as soon as one of
//! them is nonzero.

use std::sync::Arc;

use crate::gf::{Elem, Field};
use crate::projgeom::{proj_points, EvalTable, GeomError};

/// Nonzero entries `(column, coefficient)` of each basis row.
pub(crate) type Sparse = Vec<Vec<(u32, Elem)>>;

#[cfg(test)]
pub(crate) fn sparse(rows: &[Vec<Elem>]) -> Sparse {
    rows.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, &c)| (j as u32, c))
                .collect()
        })
        .collect()
}

pub(crate) struct Kernel {
    table: EvalTable,
    /// Per hyperplane of `P^m`, the bitset of its points (projective kernels
    /// with `d <= q` only).
    hyperplanes: Option<Vec<Vec<u64>>>,
    words: usize,
}

impl Kernel {
    pub(crate) fn projective(field: Arc<Field>, m: usize, d: u32) -> Result<Kernel, GeomError> {
        let table = EvalTable::projective(field.clone(), m, d)?;
        let words = table.npoints().div_ceil(64);
        // A form of degree <= q vanishing on every F_q-point of V(H) is divisible by H.
        let hyperplanes = (d as u64 <= field.q() as u64).then(|| {
            let pts = proj_points(m, &field);
            pts.iter()
                .map(|h| {
                    let mut mask = vec![0u64; words];
                    for (i, p) in pts.iter().enumerate() {
                        let dot = h
                            .coords()
                            .iter()
                            .zip(p.coords())
                            .fold(Elem::ZERO, |s, (&a, &b)| field.add(s, field.mul(a, b)));
                        if dot.is_zero() {
                            mask[i / 64] |= 1 << (i % 64);
                        }
                    }
                    mask
                })
                .collect()
        });
        Ok(Kernel { table, hyperplanes, words })
    }

    pub(crate) fn affine(field: Arc<Field>, m: usize, d: u32) -> Result<Kernel, GeomError> {
        let table = EvalTable::affine(field, m, d)?;
        let words = table.npoints().div_ceil(64);
        Ok(Kernel {
            table,
            hyperplanes: None,
            words,
        })
    }

    pub(crate) fn npoints(&self) -> usize {
        self.table.npoints()
    }

    pub(crate) fn field(&self) -> &Arc<Field> {
        self.table.field()
    }

    pub(crate) fn has_linear_factor_test(&self) -> bool {
        self.hyperplanes.is_some()
    }

    #[inline]
    fn vanishes(&self, field: &Field, point: usize, rows: &Sparse) -> bool {
        let vals = self.table.row(point);
        rows.iter().all(|row| {
            row.iter()
                .fold(Elem::ZERO, |s, &(j, c)| {
                    field.add(s, field.mul(c, Elem::from_raw(vals[j as usize])))
                })
                .is_zero()
        })
    }

    pub(crate) fn count(&self, rows: &Sparse) -> u64 {
        let field = &**self.table.field();
        (0..self.table.npoints()).filter(|&p| self.vanishes(field, p, rows)).count() as u64
    }

    pub(crate) fn zero_mask(&self, rows: &Sparse) -> Vec<u64> {
        let field = &**self.table.field();
        let mut mask = vec![0u64; self.words];
        for p in 0..self.table.npoints() {
            if self.vanishes(field, p, rows) {
                mask[p / 64] |= 1 << (p % 64);
            }
        }
        mask
    }

    /// Whether some hyperplane lies inside the zero set, i.e. the family has
    /// a common linear factor. `None` when the test does not apply.
    pub(crate) fn common_linear_factor(&self, rows: &Sparse) -> Option<bool> {
        let hyper = self.hyperplanes.as_ref()?;
        let zeros = self.zero_mask(rows);
        Some(hyper.iter().any(|h| h.iter().zip(&zeros).all(|(&a, &z)| a & !z == 0)))
    }
}
