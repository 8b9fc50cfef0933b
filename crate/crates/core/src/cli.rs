//! Command-line front end: counting tables, series expansion, identity
//! verification and bijection checks.
//!
//! [`execute`] does all the work and returns the rendered output, so the
//! binary only handles I/O and the exit status. Output is deterministic for
//! a given command line regardless of `--jobs`.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bijection::{check_bijection_on, BijectionReport, Side};
use crate::error::{usage, Error, Result};
use crate::families::{count_table, CountRow, Family, FamilySpec, DEFAULT_BUDGET};
use crate::identities::{
    find, registry, verify, verify_grid, Ctx, Params, Verdict, VerificationReport,
};
use crate::qkernel::{multisum, qbar_doubled, DoubledIndex, MultisumSpec, MultisumVariant};
use crate::series::{expand_product, ProductSpec, SeriesQ, SeriesXQ};

/// Largest truncation order accepted without `--allow-large`.
pub const ORDER_LIMIT: usize = 60;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "RRG_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "rrg", version, about = "Exact checks of parity-restricted Rogers-Ramanujan-Gordon identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format; defaults to a table on a terminal and JSON otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Lift the limits on truncation order and enumeration size.
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Largest weight enumerated without --allow-large.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    pub budget: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count members of a family for each weight up to --n-max.
    Count(CountArgs),
    /// Expand a product, multisum or kernel as a truncated series.
    Expand(ExpandArgs),
    /// Check registered identities coefficient by coefficient.
    Verify(VerifyArgs),
    /// Exhaustively check the split map for U_{2k,2a} (or Ubar_{2k,2a}).
    Bijection(BijectionArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub a: Option<u32>,
    /// Second index: the refinement index for Urefined, and an alias of
    /// --a for Abar and Bbar.
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long = "n-max")]
    pub n_max: u32,
    /// Split each count by number of parts.
    #[arg(long)]
    pub by_parts: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideKind {
    Product,
    Multisum,
    Kernel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(name = "andrews_gordon")]
    AndrewsGordon,
    #[value(name = "w_even_parity")]
    WEvenParity,
    #[value(name = "wbar_parity")]
    WbarParity,
}

impl From<VariantArg> for MultisumVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AndrewsGordon => MultisumVariant::AndrewsGordon,
            VariantArg::WEvenParity => MultisumVariant::EvenParity,
            VariantArg::WbarParity => MultisumVariant::OddParity,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long, value_enum)]
    pub side: SideKind,
    /// Named product (euler, partitions, overpartitions, distinct, odd) or
    /// `triple:A:M` for the triple product with exponent A and modulus M.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// k for multisums; the doubled index K for kernels.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub a: Option<u32>,
    /// Doubled index I for kernels.
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long = "N")]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run every registered identity.
    #[arg(long, conflicts_with = "id")]
    pub all: bool,
    /// Identity id or prefix (`thm-6` selects all of thm-6.*); repeatable.
    #[arg(long)]
    pub id: Vec<String>,
    /// Check a single parameter point instead of a grid (needs one --id).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long = "k-max", default_value_t = 3)]
    pub k_max: u32,
    #[arg(long = "N", default_value_t = 20)]
    pub order: usize,
    /// Compare two-variable cases only up to this power of x.
    #[arg(long)]
    pub x_bound: Option<usize>,
    /// List the registry instead of verifying.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct BijectionArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub a: u32,
    #[arg(long = "n-max")]
    pub n_max: u32,
    #[arg(long, value_enum, default_value = "u")]
    pub side: SideArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    U,
    Ubar,
}

/// Rendered output and whether any check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: false }
    }
}

/// Runs `cli`; `format` falls back to `default_format` when not given.
pub fn execute(cli: &Cli, default_format: Format) -> Result<Outcome> {
    let format = cli.common.format.unwrap_or(default_format);
    let run = || match &cli.command {
        Command::Count(args) => cmd_count(args, &cli.common, format),
        Command::Expand(args) => cmd_expand(args, &cli.common, format),
        Command::Verify(args) => cmd_verify(args, &cli.common, format),
        Command::Bijection(args) => cmd_bijection(args, &cli.common, format),
    };
    match cli.common.jobs {
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(format!("cannot start {n} workers: {e}")))?
            .install(run),
        None => run(),
    }
}

fn check_order(order: usize, common: &Common) -> Result<()> {
    if order > ORDER_LIMIT && !common.allow_large {
        return Err(usage(format!(
            "--N {order} exceeds {ORDER_LIMIT}; pass --allow-large to proceed"
        )));
    }
    Ok(())
}

fn budget(n: u32, common: &Common) -> u32 {
    if common.allow_large {
        common.budget.max(n)
    } else {
        common.budget
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn cmd_count(args: &CountArgs, common: &Common, format: Format) -> Result<Outcome> {
    let family: Family = args.family.parse()?;
    let spec = match family {
        Family::Urefined => FamilySpec::new(family, args.k, args.a.unwrap_or(0), args.i)?,
        Family::Abar | Family::Bbar => {
            let a = args.a.or(args.i).ok_or_else(|| usage("--a (or --i) is required"))?;
            FamilySpec::of(family, args.k, a)?
        }
        _ => {
            let a = args.a.ok_or_else(|| usage("--a is required"))?;
            FamilySpec::of(family, args.k, a)?
        }
    };
    let rows = count_table(&spec, args.n_max, args.by_parts, budget(args.n_max, common))?;
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = format!("{}\n", CountRow::CSV_HEADER);
            for r in &rows {
                writeln!(s, "{}", r.to_csv()).expect("write to string");
            }
            s
        }
        Format::Table => {
            let mut s = format!("{spec}\n");
            if args.by_parts {
                writeln!(s, "{:>4} {:>4} {:>12}", "n", "m", "count").expect("write to string");
            } else {
                writeln!(s, "{:>4} {:>12}", "n", "count").expect("write to string");
            }
            for r in &rows {
                match r.m {
                    Some(m) => writeln!(s, "{:>4} {:>4} {:>12}", r.n, m, r.count),
                    None => writeln!(s, "{:>4} {:>12}", r.n, r.count),
                }
                .expect("write to string");
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn parse_product(spec: &str) -> Result<ProductSpec> {
    if let Some(rest) = spec.strip_prefix("triple:") {
        let nums: Vec<usize> = rest
            .split(':')
            .map(|t| t.parse().map_err(|_| usage(format!("bad number `{t}` in --spec"))))
            .collect::<Result<_>>()?;
        return match nums[..] {
            [a, m] if a <= m && m > 0 => Ok(ProductSpec::new().triple(a, m)),
            _ => Err(usage("--spec triple:A:M needs 0 <= A <= M and M >= 1")),
        };
    }
    ProductSpec::named(spec).ok_or_else(|| {
        usage(format!(
            "unknown product `{spec}`; use triple:A:M or one of {}",
            ProductSpec::NAMES.join(", ")
        ))
    })
}

enum Expanded {
    Q(SeriesQ),
    XQ(SeriesXQ),
}

fn cmd_expand(args: &ExpandArgs, common: &Common, format: Format) -> Result<Outcome> {
    check_order(args.order, common)?;
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required")));
    let (label, series) = match args.side {
        SideKind::Product => {
            let name = args.spec.as_deref().ok_or_else(|| usage("--spec is required"))?;
            let spec = parse_product(name)?;
            let s = expand_product(&spec, args.order)?;
            let s = if spec.has_x() { Expanded::XQ(s) } else { Expanded::Q(s.at_x_one()) };
            (spec.to_string(), s)
        }
        SideKind::Multisum => {
            let variant = args.variant.ok_or_else(|| usage("--variant is required"))?;
            let spec = MultisumSpec::new(need(args.k, "k")?, need(args.a, "a")?, variant.into())?;
            let label = format!("{variant:?} multisum k={} a={}", spec.k, spec.a);
            (label, Expanded::Q(multisum(&spec, args.order)?))
        }
        SideKind::Kernel => {
            let idx = DoubledIndex::new(need(args.k, "k")?, need(args.i, "i")?)?;
            let label = format!("doubled kernel K={} I={}", idx.k, idx.i);
            (label, Expanded::XQ(qbar_doubled(idx, args.order)?))
        }
    };
    let text = match (format, &series) {
        (Format::Json, Expanded::Q(s)) => to_json(&json!({ "label": label, "series": s })),
        (Format::Json, Expanded::XQ(s)) => to_json(&json!({ "label": label, "series": s })),
        (Format::Csv, Expanded::Q(s)) => {
            let mut out = String::from("n,coeff\n");
            for (n, c) in s.coeffs().iter().enumerate() {
                writeln!(out, "{n},{c}").expect("write to string");
            }
            out
        }
        (Format::Csv, Expanded::XQ(s)) => {
            let mut out = String::from("m,n,coeff\n");
            for n in 0..=s.order() {
                for (m, c) in s.poly(n)?.iter().enumerate() {
                    writeln!(out, "{m},{n},{c}").expect("write to string");
                }
            }
            out
        }
        (Format::Table, Expanded::Q(s)) => format!("{label}\n{s}\n"),
        (Format::Table, Expanded::XQ(s)) => {
            let mut out = format!("{label}\n");
            for n in 0..=s.order() {
                let poly: Vec<String> = s.poly(n)?.iter().map(ToString::to_string).collect();
                writeln!(out, "q^{n}: [{}]", poly.join(", ")).expect("write to string");
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    reports: &'a [VerificationReport],
    total: usize,
    failed: usize,
    errors: usize,
}

fn cmd_verify(args: &VerifyArgs, common: &Common, format: Format) -> Result<Outcome> {
    let reg = registry();
    if args.list {
        let rows: Vec<_> = reg
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "variables": c.variables,
                    "params": c.param_names,
                    "hypothesis": c.hypothesis,
                    "statement": c.statement,
                })
            })
            .collect();
        let text = match format {
            Format::Json => to_json(&rows),
            _ => reg
                .iter()
                .map(|c| format!("{:<18} {:<28} {}\n", c.id, c.hypothesis, c.statement))
                .collect(),
        };
        return Ok(Outcome::ok(text));
    }
    check_order(args.order, common)?;
    let ctx = Ctx::new(args.order)
        .with_x_bound(args.x_bound)
        .with_budget(budget(u32::try_from(args.order).unwrap_or(u32::MAX), common));
    let reports = if let Some(k) = args.k {
        let [id] = &args.id[..] else {
            return Err(usage("--k needs exactly one --id"));
        };
        let case = find(id)?;
        vec![verify(&case, Params::new(k, args.a.unwrap_or(0)), &ctx)?]
    } else {
        if !args.all && args.id.is_empty() {
            return Err(usage("pass --all or at least one --id"));
        }
        if args.a.is_some() {
            return Err(usage("--a needs --k"));
        }
        for sel in &args.id {
            if !reg.iter().any(|c| c.matches(sel)) {
                return Err(usage(format!("no identity matches `{sel}`; see `rrg verify --list`")));
            }
        }
        verify_grid(&reg, &args.id, args.k_max, &ctx)
    };
    let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let errors = reports.iter().filter(|r| r.verdict == Verdict::Error).count();
    let text = match format {
        Format::Json => to_json(&VerifySummary {
            reports: &reports,
            total: reports.len(),
            failed,
            errors,
        }),
        Format::Csv => {
            let mut s = String::from("id,params,N,x_bound,verdict,m,n,lhs,rhs,error\n");
            for r in &reports {
                let w = r.witness.as_ref();
                let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},\"{}\",{},{},{},{},{},{},{},\"{}\"",
                    r.id,
                    r.label,
                    r.order,
                    opt(r.x_bound),
                    serde_json::to_value(r.verdict).expect("enum").as_str().unwrap_or(""),
                    opt(w.and_then(|w| w.m)),
                    opt(w.map(|w| w.n)),
                    w.map(|w| w.lhs.as_str()).unwrap_or(""),
                    w.map(|w| w.rhs.as_str()).unwrap_or(""),
                    r.error.as_deref().unwrap_or("").replace('"', "'"),
                )
                .expect("write to string");
            }
            s
        }
        Format::Table => {
            let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
            writeln!(
                s,
                "{} checked, {} passed, {failed} failed, {errors} errors",
                reports.len(),
                reports.len() - failed - errors
            )
            .expect("write to string");
            s
        }
    };
    Ok(Outcome {
        text,
        failed: failed + errors > 0,
    })
}

fn cmd_bijection(args: &BijectionArgs, common: &Common, format: Format) -> Result<Outcome> {
    let limit = budget(args.n_max, common).min(if common.allow_large { u32::MAX } else { 20 });
    if args.n_max > limit {
        return Err(usage(format!(
            "--n-max {} exceeds {limit}; pass --allow-large to proceed",
            args.n_max
        )));
    }
    let side = match args.side {
        SideArg::U => Side::U,
        SideArg::Ubar => Side::Ubar,
    };
    let report: BijectionReport = check_bijection_on(side, args.k, args.a, args.n_max)?;
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("n,source,pairs,ok\n");
            for r in &report.rows {
                writeln!(s, "{},{},{},{}", r.n, r.source, r.pairs, r.ok).expect("write to string");
            }
            s
        }
        Format::Table => {
            let mut s = format!(
                "{:?}_{{{},{}}} split, n <= {}\n{:>4} {:>10} {:>10}  ok\n",
                side,
                2 * args.k,
                2 * args.a,
                args.n_max,
                "n",
                "source",
                "pairs"
            );
            for r in &report.rows {
                writeln!(s, "{:>4} {:>10} {:>10}  {}", r.n, r.source, r.pairs, r.ok)
                    .expect("write to string");
            }
            for w in &report.witnesses {
                writeln!(s, "violation: {w}").expect("write to string");
            }
            writeln!(s, "{}", if report.passed { "pass" } else { "FAIL" }).expect("write to string");
            s
        }
    };
    Ok(Outcome {
        text,
        failed: !report.passed,
    })
}

/// Exit status for an error: 2 for usage and domain problems, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Domain(_) => 2,
        _ => 1,
    }
}
