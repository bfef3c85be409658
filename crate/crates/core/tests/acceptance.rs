//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Closed forms are recomputed here in plain `u128` arithmetic so the
//! library is compared against an independent transcription.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fqzeros::bounds::{
    conjecture_bound, hp_bound_explicit, hp_bound_general, ideal_dim_oracle, ideal_dim_rd, serre_bound,
    tb_bound_explicit, tb_bound_general, IndexReading,
};
use fqzeros::closefam::{
    correlation_profile, for_each_close_family, omit_one_family, poly_structure, set_structure, CorrelationCase,
    SetFamily,
};
use fqzeros::constructions::{fermat_family, line_family, tb_maximal_family};
use fqzeros::projgeom::{count_proj_zeros, dual_point, hyperplane_codim_census, proj_points};
use fqzeros::search::{
    conjecture_probe, exhaustive_affine_max, exhaustive_max, serre_sharpness_audit, SearchReport,
};
use fqzeros::{BoundParams, Elem, Field, HomPoly, PolyFamily, ProjPoint, SearchConfig, Verdict};

const MINUTE: Duration = Duration::from_secs(60);
/// Each AC3 run is held to ten minutes separately; this only caps the sum.
const AC3_TOTAL: Duration = Duration::from_secs(3 * 3600);

fn p(k: i64, q: u64) -> u128 {
    if k < 0 {
        0
    } else {
        (0..=k as u32).map(|i| (q as u128).pow(i)).sum()
    }
}

fn tb_explicit(q: u64, d: u32, m: usize, r: u64) -> u128 {
    let q128 = q as u128;
    let floor = if r as usize <= m { q128.pow((m - r as usize) as u32) } else { 0 };
    (d as u128 - 1) * q128.pow(m as u32 - 1) + p(m as i64 - 2, q) + floor
}

fn big(n: u128) -> BigUint {
    BigUint::from(n)
}

fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::new(q).unwrap())
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome, String> {
    Ok(Outcome { ok: true, detail: detail.into() })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1() -> Result<Outcome, String> {
    let mut checks = 0u64;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for d in 1..=6u32 {
            for m in 1..=5usize {
                for r in 1..=m as u64 + 1 {
                    let params = BoundParams::new(q, d, m, r).map_err(|e| e.to_string())?;
                    let general = tb_bound_general(&params).map_err(|e| e.to_string())?;
                    let tag = format!("q={q} d={d} m={m} r={r}");
                    if d >= 2 {
                        let explicit = tb_bound_explicit(&params).map_err(|e| e.to_string())?;
                        ensure(general == explicit, || format!("{tag}: T general {general} != explicit {explicit}"))?;
                        ensure(explicit == big(tb_explicit(q, d, m, r)), || format!("{tag}: T explicit"))?;
                        checks += 2;
                        if r == 1 {
                            ensure(explicit == serre_bound(q, d, m), || format!("{tag}: T_1 != Serre"))?;
                            checks += 1;
                        }
                        if (d as u64) < q {
                            let c = conjecture_bound(&params).map_err(|e| e.to_string())?;
                            ensure(c == explicit, || format!("{tag}: conjecture {c} != T {explicit}"))?;
                            checks += 1;
                        }
                    } else {
                        ensure(general == big(p(m as i64 - r as i64, q)), || format!("{tag}: T(d=1) != p_(m-r)"))?;
                        checks += 1;
                    }
                    if (d as u64) < q {
                        let hg = hp_bound_general(&params).map_err(|e| e.to_string())?;
                        let he = hp_bound_explicit(&params).map_err(|e| e.to_string())?;
                        ensure(hg == he, || format!("{tag}: H general {hg} != explicit {he}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    pass(format!("{checks} identities"))
}

fn ac2() -> Result<Outcome, String> {
    let mut tb = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for d in 1..=6u32 {
            for m in 1..=5usize {
                if p(m as i64, q) > 100_000 || d as u64 > q + 1 {
                    continue;
                }
                for r in 1..=m as u64 + 1 {
                    let params = BoundParams::new(q, d, m, r).unwrap();
                    let c = tb_maximal_family(&params, None).map_err(|e| e.to_string())?;
                    let count = count_proj_zeros(&c.family).projective;
                    let expect = if d >= 2 { tb_explicit(q, d, m, r) } else { p(m as i64 - r as i64, q) };
                    ensure(count as u128 == expect && c.family.rank() == r as usize, || {
                        format!("tb_maximal q={q} d={d} m={m} r={r}: {count} zeros, expected {expect}")
                    })?;
                    tb += 1;
                }
            }
        }
    }
    let mut lines = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for d in 1..=q as u32 {
            for r in 1..=d as u64 + 1 {
                let c = line_family(q, d, r).map_err(|e| e.to_string())?;
                let count = count_proj_zeros(&c.family).projective;
                ensure(count == (d as u64 + 1 - r) && c.family.rank() == r as usize, || {
                    format!("line_family q={q} d={d} r={r}: {count} zeros")
                })?;
                lines += 1;
            }
        }
    }
    let mut fermat = 0;
    for q in [2u64, 3, 4, 5, 7] {
        for m in 1..=3usize {
            for r in 1..=(m * (m + 1) / 2) as u64 {
                let c = fermat_family(q, m, r).map_err(|e| e.to_string())?;
                let count = count_proj_zeros(&c.family).projective;
                ensure(count as u128 == p(m as i64, q), || format!("fermat q={q} m={m} r={r}: {count} zeros"))?;
                fermat += 1;
            }
        }
    }
    pass(format!("{tb} tb_maximal, {lines} line, {fermat} fermat certificates"))
}

fn ac3() -> Result<Outcome, String> {
    let mut runs: Vec<(u64, u32, usize, u64)> = Vec::new();
    runs.extend((1..=3).map(|r| (4, 2, 2, r)));
    runs.extend((1..=3).map(|r| (5, 2, 2, r)));
    runs.push((5, 3, 2, 1));
    runs.extend((1..=4).map(|r| (4, 1, 3, r)));
    for q in [2u64, 3] {
        for m in 2..=3usize {
            runs.extend((1..=m as u64 + 1).map(|r| (q, 1, m, r)));
        }
    }
    let cfg = SearchConfig { budget: u128::MAX, witnesses: 4 };
    let mut slowest = Duration::ZERO;
    let mut spaces = 0u64;
    for &(q, d, m, r) in &runs {
        let tag = format!("q={q} d={d} m={m} r={r}");
        let t = Instant::now();
        let rep = exhaustive_max(&BoundParams::new(q, d, m, r).unwrap(), &cfg).map_err(|e| format!("{tag}: {e}"))?;
        let dt = t.elapsed();
        ensure(dt < 10 * MINUTE, || format!("{tag}: took {dt:?}"))?;
        slowest = slowest.max(dt);
        spaces += rep.spaces_examined;
        let expect = if d >= 2 { tb_explicit(q, d, m, r) } else { p(m as i64 - r as i64, q) };
        ensure(rep.verdict == Verdict::Match && rep.max_count as u128 == expect, || {
            format!("{tag}: max {} vs {expect} ({:?})", rep.max_count, rep.verdict)
        })?;
        if d >= 2 {
            ensure(rep.all_maximizers_have_linear_factor(), || {
                format!(
                    "{tag}: {:?} of {} maximizers have a common linear factor",
                    rep.maximizers_with_linear_factor, rep.maximizers
                )
            })?;
        } else {
            // every system of r independent linear forms cuts out a P^{m-r}
            ensure(rep.maximizers == rep.spaces_examined, || format!("{tag}: some linear system is below the maximum"))?;
        }
    }
    pass(format!("{} runs, {spaces} subspaces, slowest {slowest:.1?}", runs.len()))
}

fn ac4() -> Result<Outcome, String> {
    let cfg = SearchConfig { budget: u128::MAX, witnesses: 4 };
    let mut total = 0;
    for (q, d, m) in [(2u64, 2u32, 2usize), (3, 2, 2), (4, 2, 2), (4, 3, 2)] {
        let a = serre_sharpness_audit(q, d, m, &cfg).map_err(|e| e.to_string())?;
        let serre = d as u128 * q as u128 + 1;
        ensure(a.passed() && a.max_count as u128 == serre, || {
            format!("q={q} d={d}: max {} audited {}/{} failures {:?}", a.max_count, a.audited, a.maximizers, a.failures)
        })?;
        total += a.audited;
    }
    pass(format!("{total} maximizers split into concurrent lines"))
}

/// `H_r(d,m)` by brute force over `Λ(d,m)` in ascending lexicographic order.
fn hp_oracle(q: u64, d: u32, m: usize, r: u64) -> u128 {
    let target = m as i64 * (q as i64 - 1) - d as i64;
    let mut tuples = Vec::new();
    let mut cur = vec![0u64; m];
    loop {
        if cur.iter().sum::<u64>() as i64 >= target {
            tuples.push(cur.clone());
        }
        let mut i = m;
        loop {
            if i == 0 {
                tuples.sort();
                let alpha = &tuples[r as usize - 1];
                let sub: u128 =
                    1 + alpha.iter().enumerate().map(|(j, &a)| a as u128 * (q as u128).pow((m - 1 - j) as u32)).sum::<u128>();
                return (q as u128).pow(m as u32) - sub;
            }
            i -= 1;
            if cur[i] + 1 < q {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

fn ac5() -> Result<Outcome, String> {
    let mut runs: Vec<(u64, u32, usize, u64)> = Vec::new();
    runs.extend((1..=3).map(|r| (3, 2, 1, r)));
    runs.extend((1..=2).map(|r| (3, 2, 2, r)));
    runs.extend((1..=3).map(|r| (4, 2, 1, r)));
    runs.extend((1..=4).map(|r| (4, 3, 1, r)));
    let cfg = SearchConfig { budget: u128::MAX, witnesses: 2 };
    for &(q, d, m, r) in &runs {
        let tag = format!("q={q} d={d} m={m} r={r}");
        let rep = exhaustive_affine_max(q, d, m, r, &cfg).map_err(|e| format!("{tag}: {e}"))?;
        let expect = hp_oracle(q, d, m, r);
        ensure(rep.verdict == Verdict::Match && rep.max_count as u128 == expect, || {
            format!("{tag}: max {} vs {expect}", rep.max_count)
        })?;
    }
    pass(format!("{} affine runs", runs.len()))
}

fn random_point(rng: &mut ChaCha8Rng, f: &Field, m: usize) -> ProjPoint {
    loop {
        let v: Vec<Elem> = (0..=m).map(|_| f.elem(rng.gen_range(0..f.q() as u64)).unwrap()).collect();
        if let Some(pt) = ProjPoint::normalize(f, &v) {
            return pt;
        }
    }
}

fn ac6() -> Result<Outcome, String> {
    let mut families = 0u64;
    let mut violation = None;
    for n in 1..=6u32 {
        for k in 1..=n as usize {
            for_each_close_family(n, k, n as usize + 1, |fam: &SetFamily| {
                families += 1;
                if violation.is_some() {
                    return;
                }
                let (k, r) = (fam.k(), fam.r());
                let common: BTreeSet<u32> =
                    fam.members().iter().skip(1).fold(fam.members()[0].clone(), |a, b| &a & b);
                let ok = match set_structure(fam) {
                    Err(e) => Err(e.to_string()),
                    Ok(s) if s.common_size != common.len() => Err("common size".into()),
                    Ok(_) if r == 1 => Ok(()),
                    Ok(s) if common.len() + r == k + 1 => {
                        let nu = s.nu.unwrap_or_default();
                        let all: BTreeSet<u32> = nu.iter().copied().collect();
                        let rebuilt = fam.members().iter().zip(&nu).all(|(a, v)| {
                            let mut want = &common | &all;
                            want.remove(v);
                            *a == want
                        });
                        if all.len() == r && rebuilt {
                            Ok(())
                        } else {
                            Err("omit-one structure".into())
                        }
                    }
                    Ok(_) if common.len() + 1 == k => Ok(()),
                    Ok(_) => Err("size dichotomy".into()),
                };
                if let Err(e) = ok {
                    violation = Some(format!("n={n} {:?}: {e}", fam.members()));
                }
            });
        }
    }
    if let Some(v) = violation {
        return Err(v);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut inversions = 0;
    while inversions < 1200 {
        let q = [2u64, 3, 5][rng.gen_range(0..3)];
        let m = rng.gen_range(1..=3usize);
        let f = field(q);
        let max_r = proj_points(m, &f).len().min(5);
        let r = rng.gen_range(3..=5usize);
        if r > max_r {
            continue;
        }
        let mut pts: BTreeSet<ProjPoint> = BTreeSet::new();
        while pts.len() < r {
            pts.insert(random_point(&mut rng, &f, m));
        }
        let mut order: Vec<ProjPoint> = pts.into_iter().collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let forms: Vec<HomPoly> = order
            .iter()
            .map(|pt| {
                let c = f.elem(rng.gen_range(1..q)).unwrap();
                pt.as_linear_form(f.clone()).scale(c)
            })
            .collect();
        let fam = omit_one_family(&forms).map_err(|e| e.to_string())?;
        let s = poly_structure(&fam).map_err(|e| format!("q={q} m={m} r={r}: {e}"))?;
        let got = s.forms.ok_or("forms not recovered")?;
        let same = got.len() == r
            && got.iter().zip(&order).all(|(g, pt)| dual_point(g).as_ref() == Some(pt));
        ensure(s.k as usize == r - 1 && same, || format!("q={q} m={m} r={r}: recovered forms differ"))?;
        inversions += 1;
    }
    pass(format!("{families} close set families, {inversions} omit-one inversions"))
}

fn random_independent_forms(rng: &mut ChaCha8Rng, f: &Arc<Field>, m: usize, r: usize) -> Vec<HomPoly> {
    loop {
        let forms: Vec<HomPoly> = (0..r)
            .map(|_| {
                let c: Vec<Elem> = (0..=m).map(|_| f.elem(rng.gen_range(0..f.q() as u64)).unwrap()).collect();
                HomPoly::linear(f.clone(), &c).unwrap()
            })
            .collect();
        if forms.iter().all(|h| !h.is_zero()) && PolyFamily::new(forms.clone()).is_ok_and(|fam| fam.is_independent()) {
            return forms;
        }
    }
}

fn ac7() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    while n < 1200 {
        let q = [2u64, 3, 4, 5][rng.gen_range(0..4)];
        let m = rng.gen_range(1..=4usize);
        let r = rng.gen_range(1..=m);
        let f = field(q);
        let forms = random_independent_forms(&mut rng, &f, m, r);
        let pt = random_point(&mut rng, &f, m);
        if forms.iter().all(|h| h.eval(pt.coords()).unwrap().is_zero()) {
            continue;
        }
        let got = hyperplane_codim_census(&forms, &pt).map_err(|e| e.to_string())?;
        let low = p(r as i64 - 2, q);
        let expect = (low as u64, (p(m as i64 - 1, q) - low) as u64);
        ensure(got == expect, || format!("q={q} m={m} r={r}: {got:?} vs {expect:?}"))?;
        n += 1;
    }
    pass(format!("{n} instances"))
}

fn product(f: &Arc<Field>, m: usize, factors: &[HomPoly]) -> HomPoly {
    let one = HomPoly::new(fqzeros::Poly::one(f.clone(), m + 1), 0).unwrap();
    factors.iter().fold(one, |acc, h| acc.mul(h).unwrap())
}

fn ac8() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut case1, mut case2, mut tries) = (0u64, 0u64, 0u64);
    let mut closest = i128::MIN;
    while case1 + case2 < 2000 {
        tries += 1;
        if tries > 200_000 {
            return Err(format!("only {case1} + {case2} families generated"));
        }
        let (q, d) = [(4u64, 2u32), (5, 2), (5, 3), (7, 2), (7, 3), (7, 4), (7, 5)][rng.gen_range(0..7)];
        let m = rng.gen_range(1..=3usize);
        let r = rng.gen_range(2..=m + 1);
        let f = field(q);
        // shared factor of degree b <= d-2, then cofactors that are products of
        // lines (many zeros) or arbitrary forms
        let b = rng.gen_range(0..=d - 2);
        let g = product(&f, m, &(0..b).map(|_| random_independent_forms(&mut rng, &f, m, 1).remove(0)).collect::<Vec<_>>());
        let members: Vec<HomPoly> = (0..r)
            .map(|_| {
                let k = (d - b) as usize;
                let co = if rng.gen_bool(0.7) {
                    let lines: Vec<HomPoly> = (0..k).map(|_| random_independent_forms(&mut rng, &f, m, 1).remove(0)).collect();
                    product(&f, m, &lines)
                } else {
                    let width = fqzeros::poly::monomial_count(m, k as u32) as usize;
                    let c: Vec<Elem> = (0..width).map(|_| f.elem(rng.gen_range(0..q)).unwrap()).collect();
                    HomPoly::from_coeffs(f.clone(), m, k as u32, &c).unwrap()
                };
                g.mul(&co).unwrap()
            })
            .collect();
        let Ok(fam) = PolyFamily::new(members) else { continue };
        if !fam.is_independent() {
            continue;
        }
        let prof = correlation_profile(&fam).map_err(|e| e.to_string())?;
        match prof.case {
            CorrelationCase::Case1 => case1 += 1,
            CorrelationCase::Case2 => case2 += 1,
            CorrelationCase::Case3 { .. } => continue,
        }
        let count = count_proj_zeros(&fam).projective as i128;
        let bound = ((d as u128 - 1) * (q as u128).pow(m as u32 - 1) + p(m as i64 - 2, q)) as i128;
        closest = closest.max(count - bound);
        ensure(count < bound, || format!("q={q} d={d} m={m} r={r}: {count} zeros >= {bound} ({:?})", prof.case))?;
    }
    pass(format!("{case1} case-1 and {case2} case-2 families, max count - bound = {closest}"))
}

fn ac9() -> Result<Outcome, String> {
    for q in [2u64, 3] {
        for m in [1usize, 2] {
            let o = ideal_dim_oracle(q, q as u32 + 1, m).map_err(|e| e.to_string())?;
            ensure(o == (m * (m + 1) / 2) as u64, || format!("q={q} m={m}: oracle {o}"))?;
        }
    }
    let (mut agree, mut printed_off) = (0, 0);
    for q in [2u64, 3, 4] {
        for m in 1..=3usize {
            for d in q as u32 + 1..=q as u32 + 4 {
                let Ok(o) = ideal_dim_oracle(q, d, m) else { continue };
                let plus = ideal_dim_rd(q, d, m, IndexReading::UpperPlusM).map_err(|e| e.to_string())?;
                ensure(plus == BigInt::from(o), || format!("q={q} d={d} m={m}: formula {plus} vs oracle {o}"))?;
                agree += 1;
                if ideal_dim_rd(q, d, m, IndexReading::AsPrinted).map_err(|e| e.to_string())? != BigInt::from(o) {
                    printed_off += 1;
                }
            }
        }
    }
    pass(format!("{agree} agreements; the literal index reading differs in {printed_off}"))
}

fn ac10() -> Result<Outcome, String> {
    const SAMPLES: u64 = 1_000_000;
    const SEED: u64 = 0x7b_2025;
    let mut notes = Vec::new();
    for (q, d, m, r) in [(5u64, 3u32, 2usize, 4u64), (5, 3, 2, 5), (5, 3, 2, 6), (4, 3, 2, 4)] {
        let tag = format!("q={q} d={d} m={m} r={r}");
        let params = BoundParams::new(q, d, m, r).unwrap();
        let run = || conjecture_probe(&params, SAMPLES, SEED, 4).map_err(|e| format!("{tag}: {e}"));
        let a: SearchReport = run()?;
        let b = run()?;
        ensure(a.verdict != Verdict::ExceedsBound, || format!("{tag}: {} zeros exceed {}", a.max_count, a.bound))?;
        ensure(a.spaces_examined >= SAMPLES, || format!("{tag}: only {} samples", a.spaces_examined))?;
        let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        ensure(ja == jb, || format!("{tag}: reruns differ"))?;
        notes.push(format!("r={r}:{}/{}", a.max_count, a.bound));
    }
    pass(format!("max/conjectured {}", notes.join(" ")))
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Result<Outcome, String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", "bound identities", Duration::from_secs(1), ac1),
        ("AC2", "construction certificates", Duration::from_secs(30), ac2),
        ("AC3", "exhaustive maxima", AC3_TOTAL, ac3),
        ("AC4", "Serre sharpness audit", 5 * MINUTE, ac4),
        ("AC5", "affine maxima", 10 * MINUTE, ac5),
        ("AC6", "close-family structure", 2 * MINUTE, ac6),
        ("AC7", "hyperplane census", 2 * MINUTE, ac7),
        ("AC8", "strict inequality off the all-(d-1) case", 5 * MINUTE, ac8),
        ("AC9", "ideal dimension", MINUTE, ac9),
        ("AC10", "conjecture probe", 30 * MINUTE, ac10),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let dt = start.elapsed();
        let (ok, detail) = match result {
            Ok(Outcome { ok, detail }) if dt <= limit => (ok, detail),
            Ok(Outcome { detail, .. }) => (false, format!("{detail}; took {dt:.1?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("{id} {} {name}: {detail} [{dt:.2?}]", if ok { "PASS" } else { "FAIL" });
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
