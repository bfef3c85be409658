//! Exhaustive and randomized searches for systems with many zeros.
//!
//! Zero sets depend only on the span of a system, so the exhaustive searches
//! walk the `r`-dimensional subspaces of the coefficient space once each (see
//! [`subspace`]). Work is split into chunks of consecutive subspaces that are
//! counted in parallel and merged by a commutative reduction, so reports do
//! not depend on the number of worker threads.

mod exhaustive;
mod kernel;
mod random;
pub mod subspace;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{BoundError, BoundParams};
use crate::closefam::CloseError;
use crate::poly::PolyError;
use crate::projgeom::GeomError;

pub use exhaustive::{exhaustive_affine_max, exhaustive_max, serre_sharpness_audit, SerreAudit};
pub use random::{conjecture_probe, random_probe, ProbeConfig};
pub use subspace::{enumerate_subspaces, gaussian_binomial, SubspaceIter};

/// Default cap on subspaces × points.
pub const DEFAULT_BUDGET: u128 = 50_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("work {work} (subspaces x points) exceeds the budget {budget}")]
    BudgetExceeded { work: String, budget: u128 },
    #[error("outside the probe's range: {0}")]
    OutOfValidity(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Close(#[from] CloseError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Cap on subspaces × points for exhaustive runs.
    pub budget: u128,
    /// Number of maximizing families kept in a report.
    pub witnesses: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            witnesses: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Affine,
    Random,
    Conjecture,
}

/// Which closed form the maximum is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Tb,
    Hp,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Match,
    BelowBound,
    ExceedsBound,
}

impl Verdict {
    pub fn compare(max: u64, bound: &BigUint) -> Verdict {
        match BigUint::from(max).cmp(bound) {
            std::cmp::Ordering::Equal => Verdict::Match,
            std::cmp::Ordering::Less => Verdict::BelowBound,
            std::cmp::Ordering::Greater => Verdict::ExceedsBound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Position in enumeration order (exhaustive) or sample index (random).
    pub index: u64,
    pub count: u64,
    pub polys: Vec<String>,
    /// Whether the gcd of the members has a linear factor (trial division);
    /// `None` for affine systems.
    pub linear_factor: Option<bool>,
}

/// The best family found by the homogenize-and-multiply pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedPass {
    pub families_examined: u64,
    /// Whether every affine subspace of the reduced problem was examined.
    pub exhaustive: bool,
    pub best_count: u64,
    /// Conjectured value minus `best_count`.
    pub gap: i64,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub params: BoundParams,
    pub mode: SearchMode,
    pub spaces_examined: u64,
    /// Largest zero count seen; 0 when nothing was examined.
    pub max_count: u64,
    /// Nothing was examined.
    pub vacuous: bool,
    #[serde(with = "crate::bigser::one")]
    pub bound: BigUint,
    pub bound_kind: BoundKind,
    pub verdict: Verdict,
    /// Examined families attaining `max_count`.
    pub maximizers: u64,
    /// How many of those have a common linear factor, decided by whether
    /// some hyperplane lies in the zero set (valid for `d <= q`).
    pub maximizers_with_linear_factor: Option<u64>,
    pub witnesses: Vec<Witness>,
    /// `histogram[c]` = number of examined families with `c` zeros.
    pub histogram: Vec<u64>,
    pub seed: Option<u64>,
    pub directed: Option<DirectedPass>,
}

impl SearchReport {
    /// Every maximizer (not just the recorded witnesses) has a common linear
    /// factor, and so does every witness by trial division.
    pub fn all_maximizers_have_linear_factor(&self) -> bool {
        self.maximizers_with_linear_factor == Some(self.maximizers)
            && self.witnesses.iter().all(|w| w.linear_factor == Some(true))
    }
}

/// Decimal form, abbreviated to `d.ddde<k>` past 20 digits.
fn approx(n: &BigUint) -> String {
    let s = n.to_string();
    if s.len() <= 20 {
        return s;
    }
    format!("{}.{}e{}", &s[..1], &s[1..4], s.len() - 1)
}

/// Work units for a run over `spaces` subspaces with `npoints` points each,
/// checked against the budget.
pub(crate) fn check_budget(spaces: &BigUint, npoints: usize, budget: u128) -> Result<u128, SearchError> {
    let work = spaces * BigUint::from(npoints);
    match u128::try_from(&work) {
        Ok(w) if w <= budget => Ok(w),
        _ => Err(SearchError::BudgetExceeded {
            work: approx(&work),
            budget,
        }),
    }
}
