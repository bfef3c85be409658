use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fqzeros::bounds::{bound_row, tb_bound_general, BoundRow};
use fqzeros::closefam::{correlation_profile, poly_is_close, poly_structure, ProfileSummary};
use fqzeros::constructions::{fermat_family, line_family, tb_maximal_family, Construction};
use fqzeros::gf::prime_power;
use fqzeros::poly::{format_family, parse_family};
use fqzeros::projgeom::count_proj_zeros;
use fqzeros::search::{
    conjecture_probe, exhaustive_affine_max, exhaustive_max, random_probe, serre_sharpness_audit, BoundKind,
    ProbeConfig, SearchConfig, SerreAudit, DEFAULT_BUDGET,
};
use fqzeros::{BoundParams, Field, PolyFamily, SearchError, SearchReport, Verdict};
use serde::Serialize;

use crate::args::{BoundArgs, ConstructArgs, FileArgs, Format, Kind, Mode, SearchArgs, TableArgs, VerifyArgs};
use crate::output::{json, opt, pairs, render, Table};

/// Text for stdout and the process exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, code: 0 }
    }
}

pub const EXIT_BELOW: i32 = 2;
pub const EXIT_EXCEEDS: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_STRUCTURE: i32 = 5;

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Match => 0,
        Verdict::BelowBound => EXIT_BELOW,
        Verdict::ExceedsBound => EXIT_EXCEEDS,
    }
}

fn check_q(q: u64) -> Result<()> {
    if prime_power(q).is_none() {
        bail!(fqzeros::BoundError::NotPrimePower(q));
    }
    Ok(())
}

fn to_u32(v: u64, what: &str) -> Result<u32> {
    u32::try_from(v).with_context(|| format!("{what} = {v} is too large"))
}

const BOUND_HEADERS: [&str; 11] = [
    "q", "d", "m", "r", "tb_general", "tb_explicit", "hp", "serre", "conjecture", "tb_theorem", "notes",
];

fn bound_cells(row: &BoundRow) -> Vec<String> {
    vec![
        row.q.to_string(),
        row.d.to_string(),
        row.m.to_string(),
        row.r.to_string(),
        opt(&row.tb_general),
        opt(&row.tb_explicit),
        opt(&row.hp),
        row.serre.to_string(),
        opt(&row.conjecture),
        row.validity.tb_theorem.to_string(),
        row.validity.notes.join("; "),
    ]
}

pub fn bound(args: &BoundArgs, format: Format) -> Result<Outcome> {
    check_q(args.q)?;
    let mut rows = Vec::new();
    for &d in &args.d.0 {
        for &m in &args.m.0 {
            let rs = args.r.clone().map_or_else(|| (1..=m + 1).collect(), |l| l.0);
            for r in rs {
                let params = BoundParams::new(args.q, to_u32(d, "d")?, m as usize, r)?;
                rows.push(bound_row(&params)?);
            }
        }
    }
    let mut table = Table::new(BOUND_HEADERS.to_vec());
    for row in &rows {
        table.push(bound_cells(row));
    }
    Ok(Outcome::ok(render(format, &table, &rows)?))
}

#[derive(Serialize)]
struct ConstructOut<'a> {
    q: u64,
    m: usize,
    d: u32,
    family: Vec<String>,
    lambdas: Vec<String>,
    certificate: &'a fqzeros::constructions::Certificate,
}

pub fn construct(args: &ConstructArgs, format: Format) -> Result<Outcome> {
    check_q(args.q)?;
    let c: Construction = match args.kind {
        Kind::Tb => {
            let params = BoundParams::new(args.q, args.d, args.m, args.r)?;
            let lambdas = match &args.lambdas {
                Some(list) => {
                    let field = Field::new(args.q)?;
                    Some(list.iter().map(|s| field.parse_elem(s.trim())).collect::<Result<Vec<_>, _>>()?)
                }
                None => None,
            };
            tb_maximal_family(&params, lambdas.as_deref())?
        }
        Kind::Line => line_family(args.q, args.d, args.r)?,
        Kind::Fermat => fermat_family(args.q, args.m, args.r)?,
    };
    let cert = &c.certificate;
    let field = c.family.field().clone();
    let text = format!(
        "{}# certificate {}\n",
        format_family(c.family.members()),
        serde_json::to_string(cert)?
    );
    if let Some(path) = &args.out {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    let stdout = match format {
        Format::Text => text,
        Format::Json => json(&ConstructOut {
            q: args.q,
            m: c.family.m(),
            d: c.family.degree(),
            family: c.family.members().iter().map(ToString::to_string).collect(),
            lambdas: c.lambdas.iter().map(|&l| field.format_elem(l)).collect(),
            certificate: cert,
        })?,
        Format::Csv => {
            let mut t = Table::new(vec!["kind", "q", "d", "m", "r", "rank", "count", "bound", "match", "status"]);
            let value = serde_json::to_value(cert)?;
            t.push(vec![
                value["kind"].as_str().unwrap_or_default().to_string(),
                cert.params.q.to_string(),
                cert.params.d.to_string(),
                cert.params.m.to_string(),
                cert.params.r.to_string(),
                cert.rank.to_string(),
                opt(&cert.count),
                cert.bound.to_string(),
                opt(&cert.matches),
                value["status"].as_str().unwrap_or_default().to_string(),
            ]);
            t.csv(true)?
        }
    };
    Ok(Outcome::ok(stdout))
}

fn read_family(path: &Path) -> Result<PolyFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_family(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(PolyFamily::new(file.members)?)
}

#[derive(Serialize)]
struct CountOut {
    q: u32,
    m: usize,
    d: u32,
    r: usize,
    rank: usize,
    projective: u64,
    at_infinity: u64,
    affine: u64,
    #[serde(serialize_with = "decimal_as_number")]
    tb_bound: Option<String>,
    verdict: Option<Verdict>,
    profile: Option<ProfileSummary>,
}

pub fn count(args: &FileArgs, format: Format) -> Result<Outcome> {
    let fam = read_family(&args.file)?;
    let zc = count_proj_zeros(&fam);
    let (q, m, d, r) = (fam.field().q(), fam.m(), fam.degree(), fam.len());
    let rank = fam.rank();
    let tb = if rank == r {
        BoundParams::new(q as u64, d, m, r as u64)
            .ok()
            .and_then(|p| tb_bound_general(&p).ok())
    } else {
        None
    };
    let profile = (rank == r && r >= 2 && d >= 2)
        .then(|| correlation_profile(&fam).ok().map(|p| p.summary()))
        .flatten();
    let out = CountOut {
        q,
        m,
        d,
        r,
        rank,
        projective: zc.projective,
        at_infinity: zc.at_infinity,
        affine: zc.affine,
        verdict: tb.as_ref().map(|b| Verdict::compare(zc.projective, b)),
        tb_bound: tb.map(|b| b.to_string()),
        profile,
    };
    let mut t = Table::new(vec!["q", "m", "d", "r", "rank", "projective", "at_infinity", "affine", "tb_bound", "verdict"]);
    t.push(vec![
        q.to_string(),
        m.to_string(),
        d.to_string(),
        r.to_string(),
        rank.to_string(),
        zc.projective.to_string(),
        zc.at_infinity.to_string(),
        zc.affine.to_string(),
        opt(&out.tb_bound),
        out.verdict.map(|v| format!("{v:?}")).unwrap_or_default(),
    ]);
    let stdout = match format {
        Format::Text => {
            let mut items: Vec<(&str, String)> = t.headers.iter().copied().zip(t.rows[0].iter().cloned()).collect();
            if let Some(p) = &out.profile {
                items.push(("case", case_name(p)));
                items.push(("common_degree", p.b.to_string()));
            }
            pairs(&items)
        }
        other => render(other, &t, &out)?,
    };
    Ok(Outcome::ok(stdout))
}

/// Decimal strings that fit in a u64 become JSON numbers, as in the core
/// reports.
fn decimal_as_number<S: serde::Serializer>(v: &Option<String>, s: S) -> Result<S::Ok, S::Error> {
    match v.as_deref().map(|t| (t, t.parse::<u64>())) {
        None => s.serialize_none(),
        Some((_, Ok(n))) => s.serialize_u64(n),
        Some((t, Err(_))) => s.serialize_str(t),
    }
}

fn case_name(p: &ProfileSummary) -> String {
    serde_json::to_value(p)
        .ok()
        .and_then(|v| {
            let case = v["case"].as_str()?.to_string();
            Some(match v.get("branch").and_then(|b| b.as_str()) {
                Some(b) => format!("{case} ({b})"),
                None => case,
            })
        })
        .unwrap_or_default()
}

#[derive(Serialize)]
struct StructureOut {
    k: u32,
    forms: Option<Vec<String>>,
}

#[derive(Serialize)]
struct ClassifyOut {
    r: usize,
    d: u32,
    close: bool,
    #[serde(flatten)]
    profile: ProfileSummary,
    /// Present when the family itself is coprime close.
    structure: Option<StructureOut>,
}

pub fn classify(args: &FileArgs, format: Format) -> Result<Outcome> {
    let fam = read_family(&args.file)?;
    let profile = correlation_profile(&fam)?.summary();
    let close = poly_is_close(&fam)?;
    let structure = poly_structure(&fam).ok().map(|s| StructureOut {
        k: s.k,
        forms: s.forms.map(|fs| fs.iter().map(ToString::to_string).collect()),
    });
    let out = ClassifyOut {
        r: fam.len(),
        d: fam.degree(),
        close,
        profile,
        structure,
    };
    let mut t = Table::new(vec!["r", "d", "b", "case", "close", "gcd"]);
    t.push(vec![
        out.r.to_string(),
        out.d.to_string(),
        out.profile.b.to_string(),
        case_name(&out.profile),
        close.to_string(),
        out.profile.gcd.clone(),
    ]);
    let stdout = match format {
        Format::Text => {
            let mut items: Vec<(&str, String)> = t.headers.iter().copied().zip(t.rows[0].iter().cloned()).collect();
            let pw: Vec<String> = out
                .profile
                .pairwise
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            items.push(("pairwise", pw.join(" | ")));
            items.push(("cofactors", out.profile.cofactors.join(" ; ")));
            pairs(&items)
        }
        other => render(other, &t, &out)?,
    };
    Ok(Outcome::ok(stdout))
}

const REPORT_HEADERS: [&str; 12] = [
    "q",
    "d",
    "m",
    "r",
    "mode",
    "spaces_examined",
    "max_count",
    "bound",
    "verdict",
    "maximizers",
    "maximizers_with_linear_factor",
    "seed",
];

fn report_table(rep: &SearchReport) -> Table {
    let mode = serde_json::to_value(rep.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut t = Table::new(REPORT_HEADERS.to_vec());
    t.push(vec![
        rep.params.q.to_string(),
        rep.params.d.to_string(),
        rep.params.m.to_string(),
        rep.params.r.to_string(),
        mode,
        rep.spaces_examined.to_string(),
        rep.max_count.to_string(),
        rep.bound.to_string(),
        format!("{:?}", rep.verdict),
        rep.maximizers.to_string(),
        opt(&rep.maximizers_with_linear_factor),
        opt(&rep.seed),
    ]);
    t
}

fn report_text(rep: &SearchReport) -> String {
    let t = report_table(rep);
    let mut items: Vec<(&str, String)> = t.headers.iter().copied().zip(t.rows[0].iter().cloned()).collect();
    if let Some(dp) = &rep.directed {
        items.push(("directed_best", dp.best_count.to_string()));
        items.push(("directed_gap", dp.gap.to_string()));
    }
    let mut out = pairs(&items);
    for w in &rep.witnesses {
        let lf = w.linear_factor.map(|b| format!("  linear_factor={b}")).unwrap_or_default();
        out += &format!("witness #{} ({} zeros){lf}: {}\n", w.index, w.count, w.polys.join(", "));
    }
    out
}

fn append_csv(path: &Path, table: &Table) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    f.write_all(table.csv(fresh)?.as_bytes())?;
    Ok(())
}

fn budget_outcome(e: &SearchError) -> Option<Outcome> {
    matches!(e, SearchError::BudgetExceeded { .. }).then(|| Outcome {
        stdout: format!("skipped: {e}\n"),
        code: EXIT_BUDGET,
    })
}

pub fn search(args: &SearchArgs, format: Format) -> Result<Outcome> {
    check_q(args.q)?;
    let params = BoundParams::new(args.q, args.d, args.m, args.r)?;
    let config = SearchConfig {
        budget: args.budget.unwrap_or(DEFAULT_BUDGET),
        witnesses: args.witnesses,
    };
    let samples = u64::try_from(args.samples).context("too many samples")?;
    let result = match args.mode {
        Mode::Exhaustive => exhaustive_max(&params, &config),
        Mode::Affine => exhaustive_affine_max(args.q, args.d, args.m, args.r, &config),
        Mode::Random => {
            let target = if args.r as usize <= args.m + 1 {
                BoundKind::Tb
            } else {
                BoundKind::Conjecture
            };
            let mut probe = ProbeConfig::new(samples, args.seed, target);
            probe.witnesses = args.witnesses;
            random_probe(&params, &probe)
        }
        Mode::Conjecture => conjecture_probe(&params, samples, args.seed, args.witnesses),
    };
    let rep = match result {
        Ok(rep) => rep,
        Err(e) => return budget_outcome(&e).map_or_else(|| Err(e.into()), Ok),
    };
    let table = report_table(&rep);
    if let Some(path) = &args.csv {
        append_csv(path, &table)?;
    }
    let stdout = match format {
        Format::Text => report_text(&rep),
        other => render(other, &table, &rep)?,
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Serialize)]
struct VerifyOut {
    report: SearchReport,
    /// Whether every maximizer has a common linear factor; checked when
    /// `2 <= d < q-1` and `r <= m+1`.
    structure_ok: Option<bool>,
    serre_audit: Option<SerreAudit>,
}

pub fn verify(args: &VerifyArgs, format: Format) -> Result<Outcome> {
    check_q(args.q)?;
    let params = BoundParams::new(args.q, args.d, args.m, args.r)?;
    let config = SearchConfig {
        budget: args.budget.unwrap_or(DEFAULT_BUDGET),
        witnesses: 8,
    };
    let report = match exhaustive_max(&params, &config) {
        Ok(rep) => rep,
        Err(e) => return budget_outcome(&e).map_or_else(|| Err(e.into()), Ok),
    };
    let structure_applies = args.d >= 2 && (args.d as u64) + 1 < args.q && args.r as usize <= args.m + 1;
    let structure_ok = structure_applies.then(|| report.all_maximizers_have_linear_factor());
    let serre_audit = if args.r == 1 && args.d as u64 <= args.q + 1 {
        match serre_sharpness_audit(args.q, args.d, args.m, &config) {
            Ok(a) => Some(a),
            Err(e) => return budget_outcome(&e).map_or_else(|| Err(e.into()), Ok),
        }
    } else {
        None
    };
    let mut code = verdict_code(report.verdict);
    if code == 0 && (structure_ok == Some(false) || serre_audit.as_ref().is_some_and(|a| !a.passed())) {
        code = EXIT_STRUCTURE;
    }
    let out = VerifyOut {
        report,
        structure_ok,
        serre_audit,
    };
    let mut t = report_table(&out.report);
    t.headers.extend(["structure_ok", "serre_audit"]);
    t.rows[0].push(opt(&out.structure_ok));
    t.rows[0].push(opt(&out.serre_audit.as_ref().map(SerreAudit::passed)));
    let stdout = match format {
        Format::Text => {
            let mut s = report_text(&out.report);
            let mut items = vec![("structure_ok", opt(&out.structure_ok))];
            if let Some(a) = &out.serre_audit {
                items.push(("serre_audit", a.passed().to_string()));
                items.push(("serre_maximizers", a.maximizers.to_string()));
            }
            s += &pairs(&items);
            for f in out.serre_audit.iter().flat_map(|a| &a.failures) {
                s += &format!("audit failure: {f}\n");
            }
            s
        }
        other => render(other, &t, &out)?,
    };
    Ok(Outcome { stdout, code })
}

#[derive(Serialize)]
struct TableRow {
    #[serde(flatten)]
    bounds: BoundRow,
    exhaustive_max: Option<u64>,
    /// Verdict name, or `skipped(budget)`.
    status: String,
}

/// Default per-cell budget for `table`.
pub const TABLE_BUDGET: u128 = 1_000_000_000;

pub fn table(args: &TableArgs, format: Format) -> Result<Outcome> {
    for &q in &args.q.0 {
        check_q(q)?;
    }
    let config = SearchConfig {
        budget: args.budget.unwrap_or(TABLE_BUDGET),
        witnesses: 0,
    };
    let mut rows = Vec::new();
    for &q in &args.q.0 {
        for &d in &args.d.0 {
            for &m in &args.m.0 {
                for &r in &args.r.0 {
                    let params = BoundParams::new(q, to_u32(d, "d")?, m as usize, r)?;
                    let bounds = bound_row(&params)?;
                    let (exhaustive_max, status) = match exhaustive_max(&params, &config) {
                        Ok(rep) => (Some(rep.max_count), format!("{:?}", rep.verdict)),
                        Err(SearchError::BudgetExceeded { .. }) => (None, "skipped(budget)".to_string()),
                        Err(e) => return Err(e.into()),
                    };
                    rows.push(TableRow {
                        bounds,
                        exhaustive_max,
                        status,
                    });
                }
            }
        }
    }
    let mut headers = BOUND_HEADERS.to_vec();
    headers.extend(["exhaustive_max", "status"]);
    let mut t = Table::new(headers);
    for row in &rows {
        let mut cells = bound_cells(&row.bounds);
        cells.push(opt(&row.exhaustive_max));
        cells.push(row.status.clone());
        t.push(cells);
    }
    Ok(Outcome::ok(render(format, &t, &rows)?))
}
