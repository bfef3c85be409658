use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{Kernel, Sparse};
use super::subspace::{free_positions, gaussian_binomial, next_combination, Cursor};
use super::{check_budget, BoundKind, SearchConfig, SearchError, SearchMode, SearchReport, Verdict, Witness};
use crate::bounds::{hp_bound_general, serre_bound, tb_bound_general, BoundParams};
use crate::closefam::{has_common_linear_factor, linear_factors};
use crate::gf::{Elem, Field};
use crate::linalg;
use crate::poly::{monomial_count, HomPoly};
use crate::projgeom::{dehomogenize, dual_point};

/// Subspaces per parallel work item.
const CHUNK: u128 = 1 << 15;

/// Maximizers kept by the sharpness audit.
pub const AUDIT_CAP: usize = 1 << 16;

pub(crate) fn fill_sparse(rows: &[Vec<Elem>], out: &mut Sparse) {
    out.resize_with(rows.len(), Vec::new);
    for (row, dst) in rows.iter().zip(out.iter_mut()) {
        dst.clear();
        dst.extend(row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, &c)| (j as u32, c)));
    }
}

/// Running maximum with its maximizers, mergeable in any order.
#[derive(Clone, Debug)]
pub(crate) struct Acc {
    pub(crate) any: bool,
    pub(crate) max: u64,
    pub(crate) maximizers: u64,
    pub(crate) with_factor: u64,
    pub(crate) witnesses: Vec<(u64, u64, Vec<Vec<Elem>>)>,
    pub(crate) histogram: Vec<u64>,
    pub(crate) examined: u64,
    keep: usize,
}

impl Acc {
    pub(crate) fn new(npoints: usize, keep: usize) -> Acc {
        Acc {
            any: false,
            max: 0,
            maximizers: 0,
            with_factor: 0,
            witnesses: Vec::new(),
            histogram: vec![0; npoints + 1],
            examined: 0,
            keep,
        }
    }

    /// Keys must arrive in increasing order.
    pub(crate) fn observe(&mut self, key: u64, count: u64, rows: &[Vec<Elem>], factor: impl FnOnce() -> bool) {
        self.examined += 1;
        self.histogram[count as usize] += 1;
        if !self.any || count > self.max {
            self.any = true;
            self.max = count;
            self.maximizers = 0;
            self.with_factor = 0;
            self.witnesses.clear();
        }
        if count == self.max {
            self.maximizers += 1;
            if factor() {
                self.with_factor += 1;
            }
            if self.witnesses.len() < self.keep {
                self.witnesses.push((key, count, rows.to_vec()));
            }
        }
    }

    pub(crate) fn merge(mut self, other: Acc) -> Acc {
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self.examined += other.examined;
        if !other.any || (self.any && self.max > other.max) {
            return self;
        }
        if !self.any || other.max > self.max {
            return Acc {
                histogram: self.histogram,
                examined: self.examined,
                ..other
            };
        }
        self.maximizers += other.maximizers;
        self.with_factor += other.with_factor;
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by_key(|w| w.0);
        self.witnesses.truncate(self.keep);
        self
    }
}

/// Counts every `r`-dimensional subspace of the kernel's coefficient space.
pub(crate) fn run_all(kernel: &Kernel, width: usize, r: usize, keep: usize) -> Acc {
    let q = kernel.field().q() as u128;
    let mut chunks = Vec::new();
    let mut pivots: Vec<usize> = (0..r).collect();
    let mut base = 0u128;
    loop {
        let n = q.pow(free_positions(width, &pivots).len() as u32);
        let mut start = 0;
        while start < n {
            let len = CHUNK.min(n - start);
            chunks.push((pivots.clone(), base + start, start, len));
            start += len;
        }
        base += n;
        if !next_combination(&mut pivots, width) {
            break;
        }
    }
    let npoints = kernel.npoints();
    let test = kernel.has_linear_factor_test();
    chunks
        .par_iter()
        .map(|(piv, key, start, len)| {
            let mut cursor = Cursor::new(q as u64, width, piv, *start);
            let mut acc = Acc::new(npoints, keep);
            let mut sp = Sparse::new();
            for t in 0..*len {
                fill_sparse(cursor.rows(), &mut sp);
                let count = kernel.count(&sp);
                acc.observe((key + t) as u64, count, cursor.rows(), || {
                    test && kernel.common_linear_factor(&sp) == Some(true)
                });
                cursor.advance();
            }
            acc
        })
        .reduce(|| Acc::new(npoints, keep), Acc::merge)
}

pub(crate) fn projective_witnesses(field: &Arc<Field>, m: usize, d: u32, acc: &Acc) -> Result<Vec<Witness>, SearchError> {
    acc.witnesses
        .iter()
        .map(|(index, count, rows)| {
            let members = rows
                .iter()
                .map(|row| HomPoly::from_coeffs(field.clone(), m, d, row))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Witness {
                index: *index,
                count: *count,
                polys: members.iter().map(ToString::to_string).collect(),
                linear_factor: Some(has_common_linear_factor(&members)?),
            })
        })
        .collect()
}

/// The maximum number of projective zeros of `r` independent forms of
/// degree `d`, by exhaustion over all subspaces, compared with `T_r(d,m)`.
pub fn exhaustive_max(params: &BoundParams, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    params.validate()?;
    let BoundParams { q, d, m, r } = *params;
    let bound = tb_bound_general(params)?;
    let field = Arc::new(Field::new(q).map_err(crate::poly::PolyError::from)?);
    let width = monomial_count(m, d) as usize;
    let spaces = gaussian_binomial(width, r as usize, q);
    let npoints = crate::projgeom::proj_point_count(m, q);
    check_budget(&spaces, npoints.min(usize::MAX as u128) as usize, config.budget)?;
    let kernel = Kernel::projective(field.clone(), m, d)?;
    let acc = run_all(&kernel, width, r as usize, config.witnesses);
    debug_assert_eq!(BigUint::from(acc.examined), spaces);
    Ok(SearchReport {
        params: *params,
        mode: SearchMode::Exhaustive,
        spaces_examined: acc.examined,
        max_count: acc.max,
        vacuous: !acc.any,
        verdict: Verdict::compare(acc.max, &bound),
        bound,
        bound_kind: BoundKind::Tb,
        maximizers: acc.maximizers,
        maximizers_with_linear_factor: kernel.has_linear_factor_test().then_some(acc.with_factor),
        witnesses: projective_witnesses(&field, m, d, &acc)?,
        histogram: acc.histogram,
        seed: None,
        directed: None,
    })
}

pub(crate) fn affine_witnesses(field: &Arc<Field>, m: usize, d: u32, acc: &Acc) -> Result<Vec<Witness>, SearchError> {
    acc.witnesses
        .iter()
        .map(|(index, count, rows)| {
            let polys = rows
                .iter()
                .map(|row| Ok(dehomogenize(&HomPoly::from_coeffs(field.clone(), m, d, row)?).to_string()))
                .collect::<Result<Vec<_>, SearchError>>()?;
            Ok(Witness {
                index: *index,
                count: *count,
                polys,
                linear_factor: None,
            })
        })
        .collect()
}

/// The maximum number of zeros in `A^m(F_q)` of `r` independent polynomials
/// of degree at most `d < q`, compared with `H_r(d,m)`.
pub fn exhaustive_affine_max(q: u64, d: u32, m: usize, r: u64, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    let params = BoundParams::new(q, d, m, r)?;
    let bound = hp_bound_general(&params)?;
    let field = Arc::new(Field::new(q).map_err(crate::poly::PolyError::from)?);
    let width = monomial_count(m, d) as usize;
    let spaces = gaussian_binomial(width, r as usize, q);
    let npoints = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    check_budget(&spaces, npoints.min(usize::MAX as u128) as usize, config.budget)?;
    let kernel = Kernel::affine(field.clone(), m, d)?;
    let acc = run_all(&kernel, width, r as usize, config.witnesses);
    Ok(SearchReport {
        params,
        mode: SearchMode::Affine,
        spaces_examined: acc.examined,
        max_count: acc.max,
        vacuous: !acc.any,
        verdict: Verdict::compare(acc.max, &bound),
        bound,
        bound_kind: BoundKind::Hp,
        maximizers: acc.maximizers,
        maximizers_with_linear_factor: None,
        witnesses: affine_witnesses(&field, m, d, &acc)?,
        histogram: acc.histogram,
        seed: None,
        directed: None,
    })
}

/// Result of checking the shape of every single form with the most zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreAudit {
    pub q: u64,
    pub d: u32,
    pub m: usize,
    #[serde(with = "crate::bigser::one")]
    pub bound: BigUint,
    pub max_count: u64,
    pub verdict: Verdict,
    pub maximizers: u64,
    pub audited: u64,
    /// Every audited maximizer is a product of `d` pairwise non-proportional
    /// linear forms.
    pub all_split: bool,
    /// The dual points of those forms span a line, i.e. the hyperplanes share
    /// a codimension-2 subspace.
    pub all_collinear: bool,
    pub failures: Vec<String>,
}

impl SerreAudit {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Match && self.audited == self.maximizers && self.all_split && self.all_collinear
    }
}

/// Exhausts single forms of degree `d <= q+1` and checks that each one
/// attaining Serre's bound splits into `d` distinct linear forms through a
/// common codimension-2 subspace.
pub fn serre_sharpness_audit(q: u64, d: u32, m: usize, config: &SearchConfig) -> Result<SerreAudit, SearchError> {
    if d as u64 > q + 1 {
        return Err(SearchError::OutOfValidity(format!("Serre's bound needs d <= q+1 (d = {d}, q = {q})")));
    }
    BoundParams::new(q, d, m, 1)?;
    let bound = serre_bound(q, d, m);
    let field = Arc::new(Field::new(q).map_err(crate::poly::PolyError::from)?);
    let width = monomial_count(m, d) as usize;
    let spaces = gaussian_binomial(width, 1, q);
    check_budget(&spaces, crate::projgeom::proj_point_count(m, q) as usize, config.budget)?;
    let kernel = Kernel::projective(field.clone(), m, d)?;
    let acc = run_all(&kernel, width, 1, AUDIT_CAP);
    let verdict = Verdict::compare(acc.max, &bound);
    let mut failures = Vec::new();
    let (mut all_split, mut all_collinear) = (true, true);
    if acc.maximizers > acc.witnesses.len() as u64 {
        failures.push(format!("{} maximizers, only {} audited", acc.maximizers, acc.witnesses.len()));
    }
    for (_, _, rows) in &acc.witnesses {
        let f = HomPoly::from_coeffs(field.clone(), m, d, &rows[0])?;
        let (factors, rest) = linear_factors(&f);
        let mut duals: Vec<_> = factors.iter().filter_map(dual_point).collect();
        duals.sort();
        duals.dedup();
        if rest.degree() != 0 || duals.len() != d as usize {
            all_split = false;
            failures.push(format!("{f} is not a product of {d} distinct linear forms"));
            continue;
        }
        let coords: Vec<Vec<Elem>> = duals.iter().map(|p| p.coords().to_vec()).collect();
        if linalg::rank(&field, &coords) > 2 {
            all_collinear = false;
            failures.push(format!("the linear factors of {f} do not share a codimension-2 subspace"));
        }
    }
    Ok(SerreAudit {
        q,
        d,
        m,
        bound,
        max_count: acc.max,
        verdict,
        maximizers: acc.maximizers,
        audited: acc.witnesses.len() as u64,
        all_split,
        all_collinear,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::pk_u64;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn exhaustive_examples() {
        for (r, want, spaces) in [(1u64, 9u64, 1365u64), (2, 6, 93093), (3, 5, 376805)] {
            let rep = exhaustive_max(&BoundParams::new(4, 2, 2, r).unwrap(), &cfg()).unwrap();
            assert_eq!((rep.max_count, rep.verdict, rep.spaces_examined), (want, Verdict::Match, spaces));
            assert!(rep.all_maximizers_have_linear_factor(), "{rep:?}");
            assert_eq!(rep.histogram.iter().sum::<u64>(), spaces);
        }
    }

    #[test]
    fn linear_systems_reach_p_m_minus_r() {
        for q in [2u64, 3] {
            for m in 1..=3usize {
                for r in 1..=m as u64 + 1 {
                    let rep = exhaustive_max(&BoundParams::new(q, 1, m, r).unwrap(), &cfg()).unwrap();
                    assert_eq!(rep.max_count, pk_u64(m as i64 - r as i64, q));
                    assert_eq!(rep.verdict, Verdict::Match);
                }
            }
        }
    }

    #[test]
    fn affine_examples() {
        let rep = exhaustive_affine_max(3, 2, 1, 1, &cfg()).unwrap();
        assert_eq!((rep.max_count, rep.verdict), (2, Verdict::Match));
        let rep = exhaustive_affine_max(3, 2, 2, 2, &cfg()).unwrap();
        assert_eq!((rep.max_count, rep.verdict), (4, Verdict::Match));
        let rep = exhaustive_affine_max(4, 2, 1, 2, &cfg()).unwrap();
        assert_eq!((rep.max_count, rep.verdict), (1, Verdict::Match));
        assert!(rep.maximizers_with_linear_factor.is_none());
        assert!(matches!(exhaustive_affine_max(3, 3, 1, 1, &cfg()), Err(SearchError::Bound(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let tight = SearchConfig { budget: 1000, witnesses: 1 };
        let err = exhaustive_max(&BoundParams::new(4, 2, 2, 2).unwrap(), &tight).unwrap_err();
        assert!(matches!(err, SearchError::BudgetExceeded { .. }));
        let err = exhaustive_max(&BoundParams::new(9, 5, 4, 3).unwrap(), &SearchConfig { budget: 1_000_000, witnesses: 1 });
        assert!(matches!(err, Err(SearchError::BudgetExceeded { .. })));
    }

    #[test]
    fn serre_audits() {
        for (q, d) in [(2u64, 2u32), (3, 2), (4, 2)] {
            let a = serre_sharpness_audit(q, d, 2, &cfg()).unwrap();
            assert!(a.passed(), "{a:?}");
            // pairs of distinct lines
            let lines = pk_u64(2, q);
            assert_eq!(a.maximizers, lines * (lines - 1) / 2);
        }
        assert!(serre_sharpness_audit(2, 4, 2, &cfg()).is_err());
    }

    #[test]
    fn witnesses_are_deterministic_and_sorted() {
        let p = BoundParams::new(3, 2, 2, 2).unwrap();
        let a = exhaustive_max(&p, &SearchConfig { budget: u128::MAX, witnesses: 5 }).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| exhaustive_max(&p, &SearchConfig { budget: u128::MAX, witnesses: 5 })).unwrap();
        assert_eq!(a, b);
        assert!(a.witnesses.windows(2).all(|w| w[0].index < w[1].index));
        assert_eq!(a.witnesses.len(), 5);
    }
}
