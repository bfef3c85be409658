//! Close families of sets and of polynomials, the structure of coprime close
//! families, and the pairwise-gcd ("correlation") profile of a system.
//!
//! A family of `k`-sets is close when any two members meet in `k-1`
//! elements; a family of degree-`k` forms is close when any two members have
//! a gcd of degree `k-1`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{gcd, gcd_many, HomPoly, PolyError, PolyFamily};
use crate::projgeom::{dual_point, proj_points, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CloseError {
    #[error("family is not close")]
    NotClose,
    #[error("family is not coprime close")]
    NotCoprimeClose,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("family has rank {rank}, expected {r}")]
    RankDeficient { rank: usize, r: usize },
    #[error("invalid family: {0}")]
    Invalid(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Distinct `k`-subsets of a ground set `{1, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamily {
    n: u32,
    members: Vec<BTreeSet<u32>>,
}

impl SetFamily {
    pub fn new(n: u32, members: Vec<BTreeSet<u32>>) -> Result<SetFamily, CloseError> {
        let first = members.first().ok_or_else(|| CloseError::Invalid("empty family".into()))?;
        let k = first.len();
        if members.iter().any(|a| a.len() != k) {
            return Err(CloseError::Invalid("members differ in size".into()));
        }
        if members.iter().flatten().any(|&x| x == 0 || x > n) {
            return Err(CloseError::Invalid(format!("labels must lie in 1..={n}")));
        }
        if members.iter().collect::<BTreeSet<_>>().len() != members.len() {
            return Err(CloseError::Invalid("members must be distinct".into()));
        }
        Ok(SetFamily { n, members })
    }

    /// Convenience constructor from slices.
    pub fn from_slices(n: u32, members: &[&[u32]]) -> Result<SetFamily, CloseError> {
        SetFamily::new(n, members.iter().map(|s| s.iter().copied().collect()).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.members[0].len()
    }

    pub fn r(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[BTreeSet<u32>] {
        &self.members
    }
}

pub fn set_is_close(fam: &SetFamily) -> bool {
    let k = fam.k();
    let ms = fam.members();
    (0..ms.len()).all(|i| (i + 1..ms.len()).all(|j| ms[i].intersection(&ms[j]).count() + 1 == k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetStructure {
    /// Size of the intersection of all members.
    pub common_size: usize,
    /// `ν_1..ν_r` with member `i` = common part ∪ ({ν_1..ν_r} \ {ν_i}), when
    /// the common part has size `k - r + 1`.
    pub nu: Option<Vec<u32>>,
}

/// The intersection size of a close family is `k-1` or `k-r+1`; in the
/// second case the members are the omit-one subsets of an `r`-set (plus the
/// common part). For `r = 1` the common size is `k`.
pub fn set_structure(fam: &SetFamily) -> Result<SetStructure, CloseError> {
    if !set_is_close(fam) {
        return Err(CloseError::NotClose);
    }
    let (k, r) = (fam.k(), fam.r());
    let common: BTreeSet<u32> = fam
        .members()
        .iter()
        .skip(1)
        .fold(fam.members()[0].clone(), |acc, a| acc.intersection(a).copied().collect());
    let common_size = common.len();
    if r == 1 {
        return Ok(SetStructure { common_size, nu: None });
    }
    if common_size + 1 != k && common_size + r != k + 1 {
        return Err(CloseError::StructureViolation(format!(
            "intersection of size {common_size} with k = {k}, r = {r}"
        )));
    }
    let nu = if common_size + r == k + 1 {
        let rest: BTreeSet<u32> = fam.members().iter().flatten().copied().filter(|x| !common.contains(x)).collect();
        let mut nu = Vec::with_capacity(r);
        for a in fam.members() {
            let missing: Vec<u32> = rest.iter().copied().filter(|x| !a.contains(x)).collect();
            if rest.len() != r || missing.len() != 1 {
                return Err(CloseError::StructureViolation("members are not the omit-one subsets".into()));
            }
            nu.push(missing[0]);
        }
        Some(nu)
    } else {
        None
    };
    Ok(SetStructure { common_size, nu })
}

fn k_subsets(n: u32, k: usize) -> Vec<BTreeSet<u32>> {
    fn rec(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<BTreeSet<u32>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Calls `visit` on every close family of `k`-subsets of `{1..n}` with at
/// most `r_max` members (each family once, members in lexicographic order).
/// Returns the number visited.
pub fn for_each_close_family(n: u32, k: usize, r_max: usize, mut visit: impl FnMut(&SetFamily)) -> u64 {
    let verts = k_subsets(n, k);
    let adj: Vec<Vec<bool>> = verts
        .iter()
        .map(|a| verts.iter().map(|b| a != b && a.intersection(b).count() + 1 == k).collect())
        .collect();
    let mut count = 0u64;
    let mut clique: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn grow(
        start: usize,
        verts: &[BTreeSet<u32>],
        adj: &[Vec<bool>],
        clique: &mut Vec<usize>,
        r_max: usize,
        n: u32,
        count: &mut u64,
        visit: &mut dyn FnMut(&SetFamily),
    ) {
        for v in start..verts.len() {
            if !clique.iter().all(|&u| adj[u][v]) {
                continue;
            }
            clique.push(v);
            let fam = SetFamily {
                n,
                members: clique.iter().map(|&i| verts[i].clone()).collect(),
            };
            *count += 1;
            visit(&fam);
            if clique.len() < r_max {
                grow(v + 1, verts, adj, clique, r_max, n, count, visit);
            }
            clique.pop();
        }
    }
    if k > 0 && k <= n as usize && r_max > 0 {
        grow(0, &verts, &adj, &mut clique, r_max, n, &mut count, &mut visit);
    }
    count
}

fn require_independent(fam: &PolyFamily) -> Result<(), CloseError> {
    if !fam.is_independent() {
        return Err(CloseError::RankDeficient {
            rank: fam.rank(),
            r: fam.len(),
        });
    }
    Ok(())
}

fn pairwise_gcd_degrees(fam: &PolyFamily) -> Result<Vec<Vec<u32>>, CloseError> {
    let ms = fam.members();
    let r = ms.len();
    let mut b = vec![vec![fam.degree(); r]; r];
    for i in 0..r {
        for j in i + 1..r {
            let g = gcd(&ms[i], &ms[j])?.degree();
            b[i][j] = g;
            b[j][i] = g;
        }
    }
    Ok(b)
}

/// Every pairwise gcd has degree `k - 1`.
pub fn poly_is_close(fam: &PolyFamily) -> Result<bool, CloseError> {
    require_independent(fam)?;
    let k = fam.degree();
    if k == 0 {
        return Ok(fam.len() == 1);
    }
    let b = pairwise_gcd_degrees(fam)?;
    Ok((0..fam.len()).all(|i| (0..fam.len()).all(|j| i == j || b[i][j] + 1 == k)))
}

/// All linear forms `H` (normalized, with multiplicity) with `H | f`, found
/// by trial division over the normalized linear forms. The cofactor left
/// after removing them is returned as the second component.
pub fn linear_factors(f: &HomPoly) -> (Vec<HomPoly>, HomPoly) {
    let field = f.field().clone();
    let mut rest = f.clone();
    let mut out = Vec::new();
    if f.is_zero() {
        return (out, rest);
    }
    for h in proj_points(f.m(), &field) {
        let form = h.as_linear_form(field.clone());
        while rest.degree() > 0 {
            match rest.divide_exact(&form) {
                Ok(qt) => {
                    out.push(form.clone());
                    rest = qt;
                }
                Err(_) => break,
            }
        }
        if rest.degree() == 0 {
            break;
        }
    }
    (out, rest)
}

/// Whether the gcd of the members has a linear factor.
pub fn has_common_linear_factor(members: &[HomPoly]) -> Result<bool, CloseError> {
    let g = gcd_many(members)?;
    if g.degree() == 0 {
        return Ok(false);
    }
    Ok(!linear_factors(&g).0.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyStructure {
    pub k: u32,
    /// For `k > 1`: `H_1..H_r` with member `i` a scalar multiple of
    /// `Π_{j != i} H_j`.
    pub forms: Option<Vec<HomPoly>>,
}

/// For a coprime close family of degree `k`: `k = 1` or `k = r - 1`, and in
/// the second case the members are the omit-one products of `r` pairwise
/// non-proportional linear forms, which are recovered.
pub fn poly_structure(fam: &PolyFamily) -> Result<PolyStructure, CloseError> {
    if !poly_is_close(fam)? || gcd_many(fam.members())?.degree() != 0 {
        return Err(CloseError::NotCoprimeClose);
    }
    let (k, r) = (fam.degree(), fam.len());
    if k == 1 {
        return Ok(PolyStructure { k, forms: None });
    }
    if k as usize + 1 != r {
        return Err(CloseError::StructureViolation(format!("k = {k} with r = {r}")));
    }
    let mut all: BTreeSet<ProjPoint> = BTreeSet::new();
    let mut per_member: Vec<BTreeSet<ProjPoint>> = Vec::with_capacity(r);
    for f in fam.members() {
        let (factors, rest) = linear_factors(f);
        if rest.degree() != 0 || factors.len() != k as usize {
            return Err(CloseError::StructureViolation(format!("{f} is not a product of {k} linear forms")));
        }
        let pts: BTreeSet<ProjPoint> = factors.iter().filter_map(dual_point).collect();
        if pts.len() != factors.len() {
            return Err(CloseError::StructureViolation(format!("{f} has a repeated linear factor")));
        }
        all.extend(pts.iter().cloned());
        per_member.push(pts);
    }
    if all.len() != r {
        return Err(CloseError::StructureViolation(format!(
            "{} distinct linear factors, expected {r}",
            all.len()
        )));
    }
    let field = fam.field().clone();
    let mut forms = Vec::with_capacity(r);
    for pts in &per_member {
        let missing: Vec<&ProjPoint> = all.difference(pts).collect();
        if missing.len() != 1 {
            return Err(CloseError::StructureViolation("member is not an omit-one product".into()));
        }
        forms.push(missing[0].as_linear_form(field.clone()));
    }
    // verify member_i = c · Π_{j != i} H_j by exact division
    for (i, f) in fam.members().iter().enumerate() {
        let mut rest = f.clone();
        for (j, h) in forms.iter().enumerate() {
            if j != i {
                rest = rest
                    .divide_exact(h)
                    .map_err(|_| CloseError::StructureViolation("exact division failed".into()))?;
            }
        }
        if rest.degree() != 0 {
            return Err(CloseError::StructureViolation("cofactor is not constant".into()));
        }
    }
    Ok(PolyStructure { k, forms: Some(forms) })
}

/// Omit-one products `Π_{j != i} H_j`, `i = 1..r`.
pub fn omit_one_family(forms: &[HomPoly]) -> Result<PolyFamily, CloseError> {
    let members = (0..forms.len())
        .map(|i| {
            let mut it = forms.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h);
            let first = it.next().ok_or_else(|| CloseError::Invalid("need at least two forms".into()))?;
            it.try_fold(first.clone(), |acc, h| acc.mul(h)).map_err(CloseError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyFamily::new(members)?)
}

/// Shape of the cofactors when every pairwise gcd has degree `d-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case3Branch {
    /// `b = d - 1`: the members share a factor of degree `d-1`.
    BEqualsDMinus1,
    /// `b = d - r + 1`: the cofactors are omit-one products of `r` linear forms.
    BEqualsDMinusRPlus1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CorrelationCase {
    /// Some pair of members is coprime.
    Case1,
    /// Some pairwise gcd has degree strictly between 0 and `d-1`.
    Case2,
    /// Every pairwise gcd has degree `d-1`.
    Case3 { branch: Case3Branch },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationProfile {
    /// `deg G`, `G` the gcd of all members.
    pub b: u32,
    /// `b_ij = deg gcd(F_i, F_j)`; the diagonal holds `d`.
    pub pairwise: Vec<Vec<u32>>,
    pub gcd: HomPoly,
    /// `G_i` with `F_i = G G_i`.
    pub cofactors: Vec<HomPoly>,
    pub case: CorrelationCase,
}

/// Text form of a [`CorrelationProfile`], for JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub b: u32,
    pub pairwise: Vec<Vec<u32>>,
    pub gcd: String,
    pub cofactors: Vec<String>,
    #[serde(flatten)]
    pub case: CorrelationCase,
}

impl CorrelationProfile {
    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            b: self.b,
            pairwise: self.pairwise.clone(),
            gcd: self.gcd.to_string(),
            cofactors: self.cofactors.iter().map(ToString::to_string).collect(),
            case: self.case,
        }
    }
}

/// Gcd data and case split for an independent family with `r >= 2`, `d >= 2`.
pub fn correlation_profile(fam: &PolyFamily) -> Result<CorrelationProfile, CloseError> {
    require_independent(fam)?;
    let (r, d) = (fam.len(), fam.degree());
    if r < 2 || d < 2 {
        return Err(CloseError::Invalid(format!("needs r >= 2 and d >= 2 (r = {r}, d = {d})")));
    }
    let g = gcd_many(fam.members())?;
    let b = g.degree();
    let cofactors = fam
        .members()
        .iter()
        .map(|f| f.divide_exact(&g))
        .collect::<Result<Vec<_>, _>>()?;
    let pairwise = pairwise_gcd_degrees(fam)?;
    let off_diag = || (0..r).flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)));
    let case = if off_diag().any(|(i, j)| pairwise[i][j] == 0) {
        CorrelationCase::Case1
    } else if off_diag().any(|(i, j)| pairwise[i][j] + 1 < d) {
        CorrelationCase::Case2
    } else {
        let k = d - b;
        let branch = if k == 1 {
            Case3Branch::BEqualsDMinus1
        } else if k as usize + 1 == r {
            Case3Branch::BEqualsDMinusRPlus1
        } else {
            return Err(CloseError::StructureViolation(format!(
                "all pairwise gcds have degree d-1 but b = {b} (d = {d}, r = {r})"
            )));
        };
        CorrelationCase::Case3 { branch }
    };
    Ok(CorrelationProfile {
        b,
        pairwise,
        gcd: g,
        cofactors,
        case,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bounds::BoundParams;
    use crate::constructions::tb_maximal_family;
    use crate::gf::Field;
    use crate::poly::parse_hom_poly;

    fn f(q: u64) -> Arc<Field> {
        Arc::new(Field::new(q).unwrap())
    }

    fn fam(field: &Arc<Field>, m: usize, polys: &[&str]) -> PolyFamily {
        PolyFamily::new(polys.iter().map(|s| parse_hom_poly(field.clone(), m, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn set_examples() {
        let a = SetFamily::from_slices(3, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        assert!(set_is_close(&a));
        assert!(!set_is_close(&SetFamily::from_slices(4, &[&[1, 2], &[3, 4]]).unwrap()));
        let one = SetFamily::from_slices(4, &[&[1, 2]]).unwrap();
        assert_eq!(set_structure(&one).unwrap().common_size, 2);
        let star = SetFamily::from_slices(4, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap();
        assert_eq!(set_structure(&star).unwrap(), SetStructure { common_size: 1, nu: None });
        let tri = SetFamily::from_slices(3, &[&[2, 3], &[1, 3], &[1, 2]]).unwrap();
        assert_eq!(set_structure(&tri).unwrap().nu, Some(vec![1, 2, 3]));
        assert_eq!(
            set_structure(&SetFamily::from_slices(4, &[&[1, 2], &[3, 4]]).unwrap()),
            Err(CloseError::NotClose)
        );
        assert!(SetFamily::from_slices(4, &[&[1, 2], &[1, 2]]).is_err());
        assert!(SetFamily::from_slices(4, &[&[1, 2], &[1]]).is_err());
    }

    #[test]
    fn omit_one_sets_are_close() {
        // ν = (5, 2, 7, 1) over a common part {3}
        let nu = [5u32, 2, 7, 1];
        let members: Vec<BTreeSet<u32>> = (0..4)
            .map(|i| nu.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).chain([3]).collect())
            .collect();
        let fam = SetFamily::new(8, members).unwrap();
        assert!(set_is_close(&fam));
        let s = set_structure(&fam).unwrap();
        assert_eq!(s.common_size, 1);
        assert_eq!(s.nu, Some(nu.to_vec()));
    }

    #[test]
    fn exhaustive_close_set_families() {
        let mut checked = 0;
        for n in 1..=6u32 {
            for k in 1..=n as usize {
                for_each_close_family(n, k, 5, |fam| {
                    assert!(set_is_close(fam));
                    let s = set_structure(fam).expect("dichotomy");
                    let r = fam.r();
                    if r >= 2 {
                        assert!(s.common_size + 1 == k || s.common_size + r == k + 1);
                        if s.common_size == 0 && 1 < k && k < n as usize {
                            assert!(s.nu.is_some());
                        }
                    }
                    checked += 1;
                });
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn poly_close_examples() {
        let f5 = f(5);
        let forms = ["x0", "x1", "x2"].map(|s| parse_hom_poly(f5.clone(), 2, s).unwrap());
        let omit = omit_one_family(&forms).unwrap();
        assert!(poly_is_close(&omit).unwrap());
        assert!(!poly_is_close(&fam(&f5, 2, &["x0^2", "x1^2"])).unwrap());
        let dep = PolyFamily::new(vec![forms[0].clone(), forms[0].scale(f5.elem(2).unwrap())]).unwrap();
        assert!(matches!(poly_is_close(&dep), Err(CloseError::RankDeficient { rank: 1, r: 2 })));
    }

    #[test]
    fn poly_structure_examples() {
        let f5 = f(5);
        let forms: Vec<HomPoly> = (0..4).map(|i| HomPoly::var(f5.clone(), 3, i)).collect();
        let s = poly_structure(&omit_one_family(&forms).unwrap()).unwrap();
        assert_eq!(s.k, 3);
        assert_eq!(s.forms.unwrap(), forms);

        let s = poly_structure(&fam(&f5, 2, &["x0", "x1"])).unwrap();
        assert_eq!(s, PolyStructure { k: 1, forms: None });

        let f2 = f(2);
        let forms = ["x0", "x1", "x0 + x1"].map(|s| parse_hom_poly(f2.clone(), 2, s).unwrap());
        let s = poly_structure(&omit_one_family(&forms).unwrap()).unwrap();
        assert_eq!(s.k, 2);
        assert_eq!(s.forms.unwrap(), forms.to_vec());

        // close but not coprime
        let g = parse_hom_poly(f5.clone(), 2, "x2").unwrap();
        let not_coprime = PolyFamily::new(vec![
            HomPoly::var(f5.clone(), 2, 0).mul(&g).unwrap(),
            HomPoly::var(f5.clone(), 2, 1).mul(&g).unwrap(),
        ])
        .unwrap();
        assert_eq!(poly_structure(&not_coprime), Err(CloseError::NotCoprimeClose));
    }

    #[test]
    fn linear_factor_extraction() {
        let f3 = f(3);
        let p = parse_hom_poly(f3.clone(), 2, "x0^2*x1 + x0*x1^2").unwrap();
        let (fs, rest) = linear_factors(&p);
        assert_eq!(fs.len(), 3);
        assert_eq!(rest.degree(), 0);
        // x0^2 + x1^2 is irreducible over F_3
        let p = parse_hom_poly(f3.clone(), 2, "x0^3 + x0*x1^2").unwrap();
        let (fs, rest) = linear_factors(&p);
        assert_eq!(fs.len(), 1);
        assert_eq!(rest.degree(), 2);
        assert!(has_common_linear_factor(&[p.clone(), parse_hom_poly(f3.clone(), 2, "x0*x2^2").unwrap()]).unwrap());
        assert!(!has_common_linear_factor(&[p, parse_hom_poly(f3, 2, "x2^3").unwrap()]).unwrap());
    }

    #[test]
    fn correlation_examples() {
        for (q, d) in [(5u64, 3u32), (7, 4), (4, 2)] {
            let c = tb_maximal_family(&BoundParams::new(q, d, 2, 2).unwrap(), None).unwrap();
            let p = correlation_profile(&c.family).unwrap();
            assert_eq!(p.b, d - 1);
            assert_eq!(p.case, CorrelationCase::Case3 { branch: Case3Branch::BEqualsDMinus1 });
        }
        let f5 = f(5);
        assert_eq!(correlation_profile(&fam(&f5, 2, &["x0^2", "x1^2"])).unwrap().case, CorrelationCase::Case1);
        let p = correlation_profile(&fam(&f5, 1, &["x0^2*x1", "x0*x1^2"])).unwrap();
        assert_eq!((p.b, p.case), (2, CorrelationCase::Case3 { branch: Case3Branch::BEqualsDMinus1 }));
        // A·u, A·v with deg A = 1 and coprime quadratics u, v
        let case2 = fam(&f5, 2, &["x2*x0^2 + x2*x1^2 + 2*x2^3", "x2*x0*x1 + 3*x2*x1^2"]);
        let p = correlation_profile(&case2).unwrap();
        assert_eq!((p.b, p.pairwise[0][1], p.case), (1, 1, CorrelationCase::Case2));
        // G times omit-one quadratics: b = d - r + 1
        let forms: Vec<HomPoly> = (0..3).map(|i| HomPoly::var(f5.clone(), 2, i)).collect();
        let g = parse_hom_poly(f5.clone(), 2, "x0 + x1 + x2").unwrap();
        let members: Vec<HomPoly> = omit_one_family(&forms).unwrap().members().iter().map(|h| h.mul(&g).unwrap()).collect();
        let p = correlation_profile(&PolyFamily::new(members).unwrap()).unwrap();
        assert_eq!((p.b, p.case), (1, CorrelationCase::Case3 { branch: Case3Branch::BEqualsDMinusRPlus1 }));
        let s = serde_json::to_value(p.summary()).unwrap();
        assert_eq!(s["case"], "case3");
        assert_eq!(s["branch"], "b_equals_d_minus_r_plus1");
        for (c, f) in p.cofactors.iter().zip(omit_one_family(&forms).unwrap().members()) {
            assert_eq!(c, &f.monic());
        }
    }
}
