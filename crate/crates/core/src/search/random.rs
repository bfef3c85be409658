use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::exhaustive::{fill_sparse, projective_witnesses, run_all, Acc};
use super::kernel::{Kernel, Sparse};
use super::subspace::gaussian_binomial;
use super::{BoundKind, DirectedPass, SearchError, SearchMode, SearchReport, Verdict};
use crate::bounds::{conjecture_bound, tb_bound_general, BoundParams};
use crate::gf::{Elem, Field};
use crate::linalg;
use crate::poly::{binom, monomial_count, HomPoly, PolyFamily};
use crate::projgeom::{count_proj_zeros, pk_u64};

/// Samples drawn from one generator stream.
const BLOCK: u64 = 4096;

/// Work cap (subspaces × points) for running the reduced affine problem of
/// [`conjecture_probe`] exhaustively; above it the pass samples instead.
pub const DIRECTED_EXHAUSTIVE_LIMIT: u128 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub samples: u64,
    pub seed: u64,
    /// [`BoundKind::Tb`] or [`BoundKind::Conjecture`].
    pub target: BoundKind,
    pub witnesses: usize,
    /// Families counted before the random samples (indices `0..len`).
    pub inject: Vec<PolyFamily>,
}

impl ProbeConfig {
    pub fn new(samples: u64, seed: u64, target: BoundKind) -> ProbeConfig {
        ProbeConfig {
            samples,
            seed,
            target,
            witnesses: 8,
            inject: Vec::new(),
        }
    }
}

/// `samples` uniformly random rank-`r` coefficient matrices, sample `s` drawn
/// from stream `s / BLOCK` of the seeded generator.
fn sample_run(kernel: &Kernel, width: usize, r: usize, samples: u64, seed: u64, keep: usize, offset: u64) -> Acc {
    let field = kernel.field().clone();
    let q = field.q() as u16;
    let npoints = kernel.npoints();
    let test = kernel.has_linear_factor_test();
    let blocks = samples.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let mut acc = Acc::new(npoints, keep);
            let mut rows = vec![vec![Elem::ZERO; width]; r];
            let mut sp = Sparse::new();
            for s in b * BLOCK..samples.min((b + 1) * BLOCK) {
                loop {
                    for x in rows.iter_mut().flatten() {
                        *x = Elem::from_raw(rng.gen_range(0..q));
                    }
                    if linalg::rank(&field, &rows) == r {
                        break;
                    }
                }
                fill_sparse(&rows, &mut sp);
                let count = kernel.count(&sp);
                acc.observe(offset + s, count, &rows, || test && kernel.common_linear_factor(&sp) == Some(true));
            }
            acc
        })
        .reduce(|| Acc::new(npoints, keep), Acc::merge)
}

fn probe(params: &BoundParams, config: &ProbeConfig, mode: SearchMode) -> Result<SearchReport, SearchError> {
    params.validate()?;
    let BoundParams { q, d, m, r } = *params;
    let bound = match config.target {
        BoundKind::Tb => tb_bound_general(params)?,
        BoundKind::Conjecture => conjecture_bound(params)?,
        BoundKind::Hp => return Err(SearchError::OutOfValidity("random probes count projective zeros".into())),
    };
    let field = Arc::new(Field::new(q).map_err(crate::poly::PolyError::from)?);
    let width = monomial_count(m, d) as usize;
    let kernel = Kernel::projective(field.clone(), m, d)?;
    let test = kernel.has_linear_factor_test();
    let mut acc = Acc::new(kernel.npoints(), config.witnesses);
    let mut sp = Sparse::new();
    for (i, fam) in config.inject.iter().enumerate() {
        if fam.field().q() as u64 != q || fam.m() != m || fam.degree() != d || fam.len() != r as usize {
            return Err(SearchError::OutOfValidity(format!("injected family {i} does not match the parameters")));
        }
        if !fam.is_independent() {
            return Err(SearchError::OutOfValidity(format!("injected family {i} is not independent")));
        }
        let rows = fam.coeff_rows();
        fill_sparse(&rows, &mut sp);
        let count = kernel.count(&sp);
        acc.observe(i as u64, count, &rows, || test && kernel.common_linear_factor(&sp) == Some(true));
    }
    let sampled = sample_run(
        &kernel,
        width,
        r as usize,
        config.samples,
        config.seed,
        config.witnesses,
        config.inject.len() as u64,
    );
    let acc = acc.merge(sampled);
    Ok(SearchReport {
        params: *params,
        mode,
        spaces_examined: acc.examined,
        max_count: acc.max,
        vacuous: !acc.any,
        verdict: Verdict::compare(acc.max, &bound),
        bound,
        bound_kind: config.target,
        maximizers: acc.maximizers,
        maximizers_with_linear_factor: test.then_some(acc.with_factor),
        witnesses: projective_witnesses(&field, m, d, &acc)?,
        histogram: acc.histogram,
        seed: Some(config.seed),
        directed: None,
    })
}

/// Random rank-`r` systems (plus any injected ones) compared with the
/// selected bound. Deterministic in `(seed, samples)`; `samples = 0` with no
/// injections gives a vacuous report with `max_count = 0`.
pub fn random_probe(params: &BoundParams, config: &ProbeConfig) -> Result<SearchReport, SearchError> {
    probe(params, config, SearchMode::Random)
}

/// For `1 < d < q` and `m+1 < r <= binom(m+d-1, m)`: the best family of the
/// form `{x0 F_i}`, `F_i` homogenized affine polynomials of degree `<= d-1`
/// (it has `p_{m-1}` zeros on `x0 = 0` plus the affine zeros of the `F_i`),
/// followed by `samples` random systems, all compared with the conjectured
/// maximum `H_r(d-1,m) + p_{m-1}`.
pub fn conjecture_probe(params: &BoundParams, samples: u64, seed: u64, witnesses: usize) -> Result<SearchReport, SearchError> {
    params.validate()?;
    let BoundParams { q, d, m, r } = *params;
    if r as usize <= m + 1 {
        return Err(SearchError::OutOfValidity(format!(
            "r = {r} <= m+1; use the exhaustive search"
        )));
    }
    let bound = conjecture_bound(params)?;
    let field = Arc::new(Field::new(q).map_err(crate::poly::PolyError::from)?);
    debug_assert!(r as u128 <= binom(m as u64 + d as u64 - 1, m as u64));

    // the reduced affine problem: degree <= d-1 in m variables
    let width = monomial_count(m, d - 1) as usize;
    let kernel = Kernel::affine(field.clone(), m, d - 1)?;
    let work = gaussian_binomial(width, r as usize, q) * BigUint::from(kernel.npoints());
    let exhaustive = u128::try_from(&work).is_ok_and(|w| w <= DIRECTED_EXHAUSTIVE_LIMIT);
    let acc = if exhaustive {
        run_all(&kernel, width, r as usize, 1)
    } else {
        sample_run(&kernel, width, r as usize, samples.clamp(1, 1 << 20), seed ^ 0x5eed, 1, 0)
    };
    let rows = &acc.witnesses[0].2;
    let x0 = HomPoly::var(field.clone(), m, 0);
    let family = PolyFamily::new(
        rows.iter()
            .map(|row| HomPoly::from_coeffs(field.clone(), m, d - 1, row)?.mul(&x0))
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    let best_count = count_proj_zeros(&family).projective;
    debug_assert_eq!(best_count, pk_u64(m as i64 - 1, q) + acc.max);
    let bound_u64 = u64::try_from(&bound).unwrap_or(u64::MAX);
    let directed = DirectedPass {
        families_examined: acc.examined,
        exhaustive,
        best_count,
        gap: bound_u64 as i64 - best_count as i64,
        witness: family.members().iter().map(ToString::to_string).collect(),
    };
    let config = ProbeConfig {
        samples,
        seed,
        target: BoundKind::Conjecture,
        witnesses,
        inject: vec![family],
    };
    let mut report = probe(params, &config, SearchMode::Conjecture)?;
    report.directed = Some(directed);
    Ok(report)
}
