//! Flag definitions and value parsers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "fqzeros", version, about = "Zero counts of polynomial systems over finite fields")]
pub struct Cli {
    /// Output format (default: csv for `table`, text otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form bounds for a range of parameters.
    Bound(BoundArgs),
    /// Build an extremal family and certify its zero count.
    Construct(ConstructArgs),
    /// Count the zeros of a family read from a file.
    Count(FileArgs),
    /// Pairwise-gcd profile and case of a family read from a file.
    Classify(FileArgs),
    /// Exhaustive or random search for systems with many zeros.
    Search(SearchArgs),
    /// Exhaustive check that the maximum equals T_r(d,m).
    Verify(VerifyArgs),
    /// Bounds and exhaustive maxima over a parameter grid.
    Table(TableArgs),
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub q: u64,
    /// Degree(s): `3`, `1..4` or `1,3,5`.
    #[arg(long, default_value = "2", value_parser = parse_list)]
    pub d: List,
    #[arg(long, default_value = "2", value_parser = parse_list)]
    pub m: List,
    /// System size(s); defaults to `1..m+1`.
    #[arg(long, value_parser = parse_list)]
    pub r: Option<List>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// `G*·x_i`-type family attaining T_r for `r <= m+1`.
    Tb,
    /// Products of lines in `P^1`.
    Line,
    /// Fermat-type forms of degree `q+1`.
    Fermat,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum, default_value = "tb")]
    pub kind: Kind,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub r: u64,
    /// Comma-separated field elements for the common factor (`tb` only).
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<String>>,
    /// Also write the family to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FileArgs {
    /// Family file: header `q=<q> m=<m> d=<d>`, then one polynomial per line.
    pub file: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Random,
    Conjecture,
    Affine,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub r: u64,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: Mode,
    /// Cap on subspaces x points, e.g. `10^9` or `5e10`.
    #[arg(long, value_parser = parse_count)]
    pub budget: Option<u128>,
    #[arg(long, default_value = "100000", value_parser = parse_count)]
    pub samples: u128,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximizing families to keep.
    #[arg(long, default_value_t = 8)]
    pub witnesses: usize,
    /// Append a CSV row for the run to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub r: u64,
    #[arg(long, value_parser = parse_count)]
    pub budget: Option<u128>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value = "2,3,4", value_parser = parse_list)]
    pub q: List,
    #[arg(long, default_value = "1,2", value_parser = parse_list)]
    pub d: List,
    #[arg(long, default_value = "2", value_parser = parse_list)]
    pub m: List,
    #[arg(long, default_value = "1..3", value_parser = parse_list)]
    pub r: List,
    /// Per-cell budget for the exhaustive column.
    #[arg(long, value_parser = parse_count)]
    pub budget: Option<u128>,
}

/// A list of small integers given as one flag value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<u64>);

/// `5`, `1..4` (inclusive) or `1,3,5`, possibly mixed: `1..3,7`.
pub fn parse_list(s: &str) -> Result<List, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let a: u64 = a.trim().parse().map_err(|e| format!("{part:?}: {e}"))?;
            let b: u64 = b.trim().parse().map_err(|e| format!("{part:?}: {e}"))?;
            if a > b {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|e| format!("{part:?}: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(List(out))
}

/// `1000000`, `1_000_000`, `10^6` or `1e6`.
pub fn parse_count(s: &str) -> Result<u128, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("not a count: {s:?}");
    let (base, exp) = if let Some((b, e)) = t.split_once('^') {
        (b.parse::<u128>().map_err(|_| bad())?, e.parse::<u32>().map_err(|_| bad())?)
    } else if let Some((b, e)) = t.split_once(['e', 'E']) {
        let b: u128 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_mul(10u128.checked_pow(e).ok_or_else(bad)?).ok_or_else(bad);
    } else {
        return t.parse().map_err(|_| bad());
    };
    base.checked_pow(exp).ok_or_else(bad)
}
