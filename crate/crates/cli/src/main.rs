//! `ljensen`: γ tables, Jensen polynomial scans and asymptotic diagnostics.
//!
//! Exit codes: 0 success, 1 a scan found a certified non-hyperbolic
//! polynomial, 2 invalid configuration, 3 numerical or precision failure,
//! 4 too many `Unknown` scan verdicts, 5 I/O or cache failure.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use ljensen::asymptotics::{
    asymptotic_f, b1_value, correction_terms, gamma_hat, hj_normalizers, log_expansion, ratio_diagnostics,
    saddle_point, B1Variant,
};
use ljensen::cache::{gamma_range, GammaCache};
use ljensen::jensen::{hermite_deviation, hyperbolicity_scan, jensen_polynomial, normalized_jensen, HyperbolicityStatus};
use ljensen::lfunction::{central_f, detect_functional_sign, make_family, FamilyKind, LFamily};
use ljensen::numerics::{format_sci, to_hex, HexFloat, PrecisionContext};
use ljensen::reference;
use ljensen::theta::load_coefficients_csv;
use ljensen::Error;

const LONG_ROW: u64 = 10_000;
const EXACT_F_LIMIT: u64 = 5_000;

#[derive(Parser, Debug)]
#[command(name = "ljensen", version, about = "Taylor coefficients and Jensen polynomials of self-dual L-functions")]
#[command(after_help = "Exit codes: 0 ok, 1 non-hyperbolic found by scan, 2 bad configuration, \
3 precision failure, 4 too many Unknown verdicts, 5 I/O or cache failure.")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified γ(n) with error bounds.
    Gamma {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Index or range, `A` or `A..B`.
        #[arg(long, value_parser = parse_indices)]
        n: Indices,
    },
    /// Recompute a χ₄ reference table and print it next to the stored values.
    Table {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        run: RunArgs,
        /// Rows, `A`, `A..B` or `A,B,C`.
        #[arg(long, value_parser = parse_indices)]
        n: Option<Indices>,
        /// Degrees for the Jensen table.
        #[arg(long, value_parser = parse_indices)]
        d: Option<Indices>,
        /// Closed form for the first correction of the two-term approximation.
        #[arg(long, value_enum, default_value_t = B1Arg::Family)]
        b1: B1Arg,
    },
    /// Certify hyperbolicity of J^{d,n} and write a CSV report.
    Scan {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_parser = parse_indices)]
        d: Indices,
        #[arg(long, value_parser = parse_indices)]
        n: Indices,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest tolerated fraction of `Unknown` verdicts.
        #[arg(long, default_value_t = 0.0)]
        max_unknown: f64,
    },
    /// Saddle point, correction terms and two-term diagnostics as JSON.
    Asympt {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        n: u64,
        /// Highest correction order.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "chi4_gamma")]
    Chi4Gamma,
    #[value(name = "chi4_jensen")]
    Chi4Jensen,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Zeta,
    Dirichlet,
    Modular,
    Dedekind,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum B1Arg {
    General,
    Family,
    Tabulated,
}

impl From<B1Arg> for B1Variant {
    fn from(b: B1Arg) -> Self {
        match b {
            B1Arg::General => B1Variant::General,
            B1Arg::Family => B1Variant::Family,
            B1Arg::Tabulated => B1Variant::Tabulated,
        }
    }
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Kind,
    /// Fundamental discriminant (dirichlet, dedekind).
    #[arg(long, allow_negative_numbers = true)]
    disc: Option<i64>,
    #[arg(long)]
    level: Option<u64>,
    #[arg(long)]
    weight: Option<u32>,
    /// CSV file with header `n,a_n`.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Atkin-Lehner sign: `+1`, `-1` or `auto`.
    #[arg(long, default_value = "auto", allow_hyphen_values = true, value_parser = parse_epsf)]
    epsf: EpsF,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum EpsF {
    Fixed(i8),
    Auto,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Target decimal digits (at least 10).
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(10..))]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Directory of the γ cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    workers: Option<usize>,
    /// Permit rows with n >= 10000 and exact F beyond n = 5000.
    #[arg(long)]
    allow_long: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Indices(Vec<u64>);

fn parse_indices(s: &str) -> Result<Indices, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        return Ok(Indices((a..=b).collect()));
    }
    s.split(',').map(num).collect::<Result<Vec<_>, _>>().map(Indices)
}

fn parse_epsf(s: &str) -> Result<EpsF, String> {
    match s {
        "+1" | "1" => Ok(EpsF::Fixed(1)),
        "-1" => Ok(EpsF::Fixed(-1)),
        "auto" => Ok(EpsF::Auto),
        _ => Err(format!("expected +1, -1 or auto, got `{s}`")),
    }
}

#[derive(Debug)]
enum Fail {
    Config(String),
    Lib(Error),
    Io(io::Error),
    Code(u8, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Io(e)
    }
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Config(_) => 2,
            Fail::Io(_) => 5,
            Fail::Code(c, _) => *c,
            Fail::Lib(e) => match e {
                Error::InvalidParams(_)
                | Error::NotFundamental(_)
                | Error::OddWeight(_)
                | Error::InvalidEpsF(_)
                | Error::NotReduced(..)
                | Error::WrongDiscriminant { .. }
                | Error::EmptyBound
                | Error::Parse(_)
                | Error::NoDecayProof(_)
                | Error::ShiftTooLarge { .. } => 2,
                Error::Io(_) | Error::CacheCorrupt(_) => 5,
                _ => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Fail::Config(m) | Fail::Code(_, m) => m.clone(),
            Fail::Lib(e) => e.to_string(),
            Fail::Io(e) => e.to_string(),
        }
    }
}

type Out<T> = Result<T, Fail>;

#[derive(Serialize)]
struct Num {
    dec: String,
    hex: HexFloat,
}

fn num(x: &Float, digits: usize) -> Num {
    Num { dec: format_sci(x, digits), hex: to_hex(x) }
}

fn rel_diff(a: &Float, b: &Float) -> Float {
    let p = a.prec().max(64);
    Float::with_val(p, a - b).abs() / Float::with_val(p, b.abs_ref())
}

fn parse_dec(s: &str, prec: u32) -> Float {
    Float::with_val(prec, Float::parse(s).expect("stored decimal"))
}

fn context(run: &RunArgs) -> Out<PrecisionContext> {
    Ok(PrecisionContext::from_digits(run.digits)?)
}

fn open_cache(run: &RunArgs) -> Out<Option<GammaCache>> {
    run.cache.as_ref().map(GammaCache::open).transpose().map_err(Fail::from)
}

fn pool(run: &RunArgs) -> Out<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = run.workers {
        if w == 0 {
            return Err(Fail::Config("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Fail::Config(e.to_string()))
}

fn build_family(args: &FamilyArgs, ctx: &PrecisionContext) -> Out<LFamily> {
    let need = |v: Option<i64>, flag: &str| v.ok_or_else(|| Fail::Config(format!("--{flag} is required")));
    let kind = match args.family {
        Kind::Zeta => FamilyKind::Zeta,
        Kind::Dirichlet => FamilyKind::Dirichlet { disc: need(args.disc, "disc")? },
        Kind::Dedekind => FamilyKind::Dedekind { disc: need(args.disc, "disc")? },
        Kind::Modular => {
            let level = args.level.ok_or_else(|| Fail::Config("--level is required".into()))?;
            let weight = args.weight.ok_or_else(|| Fail::Config("--weight is required".into()))?;
            let path = args.coeffs.as_ref().ok_or_else(|| Fail::Config("--coeffs is required".into()))?;
            let file = File::open(path).map_err(|e| Fail::Config(format!("{}: {e}", path.display())))?;
            let coeffs: Vec<Rational> = load_coefficients_csv(file)?;
            let eps_f = match args.epsf {
                EpsF::Fixed(s) => s,
                EpsF::Auto => detect_functional_sign(&coeffs, level, weight, ctx)?,
            };
            FamilyKind::Modular { level, weight, coeffs, eps_f }
        }
    };
    Ok(make_family(kind)?)
}

fn emit(format: Format, header: &[&str], rows: &[Vec<String>], json_rows: Value) -> Out<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match format {
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&json_rows).expect("json"))?,
        Format::Csv => {
            writeln!(w, "{}", header.join(","))?;
            for r in rows {
                writeln!(w, "{}", r.join(","))?;
            }
        }
        Format::Pretty => {
            let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (i, c) in r.iter().enumerate() {
                    width[i] = width[i].max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect::<Vec<_>>().join("  ")
            };
            writeln!(w, "{}", line(header.to_vec()).trim_end())?;
            for r in rows {
                writeln!(w, "{}", line(r.iter().map(String::as_str).collect()).trim_end())?;
            }
        }
    }
    Ok(())
}

fn cmd_gamma(family: &FamilyArgs, run: &RunArgs, n: &Indices) -> Out<()> {
    let ctx = context(run)?;
    let fam = build_family(family, &ctx)?;
    let cache = open_cache(run)?;
    let shown = run.digits as usize;
    let recs = match (n.0.iter().min(), n.0.iter().max()) {
        (Some(&lo), Some(&hi)) => {
            let all = pool(run)?.install(|| gamma_range(&fam, lo, hi, &ctx, cache.as_ref()))?;
            all.into_iter().filter(|r| n.0.contains(&r.n)).collect()
        }
        _ => Vec::new(),
    };
    let rows: Vec<Vec<String>> = recs
        .iter()
        .map(|r| vec![r.n.to_string(), format_sci(&r.value, shown), format_sci(&r.error_bound, 6)])
        .collect();
    let json_rows = Value::Array(
        recs.iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "gamma": num(&r.value, shown),
                    "bound": num(&r.error_bound, 6),
                    "bits": r.working_bits,
                    "family_hash": r.family_hash,
                })
            })
            .collect(),
    );
    emit(run.format, &["n", "gamma", "bound"], &rows, json_rows)
}

fn check_long(rows: &[u64], run: &RunArgs) -> Out<()> {
    if !run.allow_long && rows.iter().any(|&n| n >= LONG_ROW) {
        return Err(Fail::Config(format!("rows with n >= {LONG_ROW} need --allow-long (minutes to hours)")));
    }
    Ok(())
}

fn cmd_table(which: Which, run: &RunArgs, n: Option<&Indices>, d: Option<&Indices>, b1: B1Arg) -> Out<()> {
    let ctx = context(run)?;
    let fam = make_family(FamilyKind::Dirichlet { disc: -4 })?;
    let cache = open_cache(run)?;
    let workers = pool(run)?;
    let p = ctx.working_bits;
    match which {
        Which::Chi4Gamma => {
            let rows_n = n.map(|i| i.0.clone()).unwrap_or_else(|| vec![10, 100, 1000]);
            check_long(&rows_n, run)?;
            let header = ["n", "gamma", "printed_gamma", "rel_diff", "gamma_hat", "printed_gamma_hat", "rel_diff", "ratio", "printed_ratio"];
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for &k in &rows_n {
                let g = workers.install(|| gamma_range(&fam, k, k, &ctx, cache.as_ref()))?.remove(0);
                let gh = gamma_hat(&fam, k, b1.into(), &ctx)?;
                let ratio = Float::with_val(p, &g.value / &gh);
                let printed = reference::gamma_row(k);
                let cmp = |mine: &Float, s: Option<&str>| match s {
                    Some(s) => (s.to_string(), format_sci(&rel_diff(mine, &parse_dec(s, p)), 3)),
                    None => (String::new(), String::new()),
                };
                let (pg, dg) = cmp(&g.value, printed.map(|r| r.gamma));
                let (pgh, dgh) = cmp(&gh, printed.map(|r| r.gamma_hat));
                let pr = printed.map(|r| r.ratio.to_string()).unwrap_or_default();
                rows.push(vec![
                    k.to_string(),
                    format_sci(&g.value, 11),
                    pg.clone(),
                    dg.clone(),
                    format_sci(&gh, 11),
                    pgh.clone(),
                    dgh.clone(),
                    format_sci(&ratio, 10),
                    pr.clone(),
                ]);
                json_rows.push(json!({
                    "n": k,
                    "gamma": num(&g.value, 20),
                    "gamma_bound": num(&g.error_bound, 6),
                    "gamma_hat": num(&gh, 20),
                    "ratio": num(&ratio, 15),
                    "printed": printed.map(|r| json!({"gamma": r.gamma, "gamma_hat": r.gamma_hat, "ratio": r.ratio})),
                    "rel_diff_gamma": dg,
                    "rel_diff_gamma_hat": dgh,
                }));
            }
            emit(run.format, &header, &rows, Value::Array(json_rows))
        }
        Which::Chi4Jensen => {
            let rows_n = n.map(|i| i.0.clone()).unwrap_or_else(|| vec![100, 1000]);
            let degs: Vec<usize> = d.map(|i| i.0.iter().map(|&x| x as usize).collect()).unwrap_or_else(|| vec![2, 3]);
            check_long(&rows_n, run)?;
            if degs.contains(&0) {
                return Err(Fail::Config("degrees must be at least 1".into()));
            }
            let dmax = degs.iter().copied().max().unwrap_or(0) as u64;
            let header = ["n", "d", "coefficients", "printed", "max_abs_diff", "hermite_deviation"];
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for &k in &rows_n {
                let recs = workers.install(|| gamma_range(&fam, k, k + dmax, &ctx, cache.as_ref()))?;
                let (a, delta) = hj_normalizers(&fam, k, &ctx)?;
                for &deg in &degs {
                    let jp = normalized_jensen(&jensen_polynomial(&recs, deg, k)?, &a, &delta)?;
                    let mine: Vec<f64> = jp.coeffs().iter().map(|c| c.mid.to_f64()).collect();
                    let printed = reference::jensen_row(k).and_then(|r| r.coeffs(deg));
                    let diff = printed.map(|pc| mine.iter().zip(pc).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
                    let dev = hermite_deviation(&jp, deg)?.to_f64();
                    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
                    rows.push(vec![
                        k.to_string(),
                        deg.to_string(),
                        fmt(&mine),
                        printed.map(fmt).unwrap_or_default(),
                        diff.map(|x| format!("{x:.1e}")).unwrap_or_default(),
                        format!("{dev:.4}"),
                    ]);
                    json_rows.push(json!({
                        "n": k, "d": deg, "coefficients": mine, "printed": printed,
                        "max_abs_diff": diff, "hermite_deviation": dev,
                    }));
                }
            }
            emit(run.format, &header, &rows, Value::Array(json_rows))
        }
    }
}

fn cmd_scan(family: &FamilyArgs, run: &RunArgs, d: &Indices, n: &Indices, out: Option<&PathBuf>, max_unknown: f64) -> Out<()> {
    let ctx = context(run)?;
    let fam = build_family(family, &ctx)?;
    let cache = open_cache(run)?;
    let degs: Vec<usize> = d.0.iter().map(|&x| x as usize).collect();
    let range = match (n.0.first(), n.0.last()) {
        (Some(&lo), Some(&hi)) => {
            if n.0.len() as u64 != hi - lo + 1 {
                return Err(Fail::Config("--n must be a contiguous range for scans".into()));
            }
            Some(lo..=hi)
        }
        _ => None,
    };
    let report = pool(run)?.install(|| match range {
        Some(r) => hyperbolicity_scan(&fam, &degs, r, &ctx, cache.as_ref()),
        None => Ok(ljensen::jensen::ScanReport { family: fam.name.clone(), entries: Vec::new() }),
    })?;
    match out {
        Some(path) => report.write_csv(File::create(path)?)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    let total = report.entries.len();
    let bad = report.count(HyperbolicityStatus::CertifiedNotHyperbolic);
    let unknown = report.count(HyperbolicityStatus::Unknown);
    eprintln!("{}: {total} polynomials, {bad} not hyperbolic, {unknown} unknown", fam.name);
    if bad > 0 {
        return Err(Fail::Code(1, format!("{bad} certified non-hyperbolic polynomial(s)")));
    }
    if total > 0 && unknown as f64 > max_unknown * total as f64 {
        return Err(Fail::Code(4, format!("{unknown} of {total} verdicts are Unknown")));
    }
    Ok(())
}

fn cmd_asympt(family: &FamilyArgs, run: &RunArgs, n: u64, order: usize) -> Out<()> {
    if n == 0 {
        return Err(Fail::Config("--n must be at least 1".into()));
    }
    if order == 0 {
        return Err(Fail::Config("--order must be at least 1".into()));
    }
    let ctx = context(run)?;
    let p = ctx.working_bits;
    let fam = build_family(family, &ctx)?;
    let m = fam.m_map(n).filter(|&m| m >= 1).ok_or_else(|| Fail::Config(format!("n = {n} is below the asymptotic range")))?;
    let sp = saddle_point(&fam, m, &ctx)?;
    let series = correction_terms(&log_expansion(&fam, &sp, 2 * order.max(2)), order.max(2))?;
    let exact_f = if m <= EXACT_F_LIMIT || run.allow_long {
        Some(central_f(&fam, m, &ctx)?.value)
    } else {
        None
    };
    let exact_gamma = if exact_f.is_some() {
        Some(gamma_range(&fam, n, n, &ctx, open_cache(run)?.as_ref())?.remove(0).value)
    } else {
        None
    };
    let mut orders = Vec::new();
    for r in 1..=order {
        let f = asymptotic_f(&fam, m, r, &ctx)?;
        let ratio = exact_f.as_ref().map(|e| num(&Float::with_val(p, &f / e), 20));
        orders.push(json!({"order": r, "F_asymptotic": num(&f, 20), "ratio_to_F": ratio}));
    }
    let mut variants = serde_json::Map::new();
    for (name, v) in [("general", B1Variant::General), ("family", B1Variant::Family), ("tabulated", B1Variant::Tabulated)] {
        let gh = gamma_hat(&fam, n, v, &ctx)?;
        let ratio = exact_gamma.as_ref().map(|g| num(&Float::with_val(p, g / &gh), 15));
        variants.insert(
            name.into(),
            json!({"b1": num(&b1_value(&sp.l, sp.j, v), 20), "gamma_hat": num(&gh, 20), "gamma_over_gamma_hat": ratio}),
        );
    }
    let diagnostics = match ratio_diagnostics(&fam, n, 1, &ctx) {
        Ok(r) => json!({
            "ell1": num(&r.ell1, 15), "ell2": num(&r.ell2, 15), "c1": num(&r.c1, 15),
            "g1": num(&r.g1, 15), "g2": num(&r.g2, 15), "g2_printed": num(&r.g2_printed, 15),
            "r_gamma_shift1": num(&r.r_gamma, 15),
        }),
        Err(Error::ShiftTooLarge { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let a: Vec<Num> = series.a.iter().skip(3).take(2 * order - 2).map(|x| num(x, 20)).collect();
    let doc = json!({
        "family": fam.name,
        "family_hash": fam.hash(),
        "n": n,
        "m": m,
        "bits": p,
        "saddle": {"L": num(&sp.l, 30), "a": num(&sp.a, 30), "C": num(&sp.c, 30), "K": num(&sp.k_exp, 30)},
        "correction": {"A_from_3": a, "factor": num(&series.factor, 20)},
        "orders": orders,
        "b1_variants": variants,
        "exact": {"F": exact_f.as_ref().map(|f| num(f, 20)), "gamma": exact_gamma.as_ref().map(|g| num(g, 20))},
        "diagnostics": diagnostics,
    });
    let text = match run.format {
        Format::Pretty => serde_json::to_string_pretty(&doc),
        _ => serde_json::to_string(&doc),
    }
    .expect("json");
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Out<()> {
    match &cli.cmd {
        Command::Gamma { family, run, n } => cmd_gamma(family, run, n),
        Command::Table { which, run, n, d, b1 } => cmd_table(*which, run, n.as_ref(), d.as_ref(), *b1),
        Command::Scan { family, run, d, n, out, max_unknown } => {
            if let Some(dir) = out.as_ref().and_then(|p| p.parent()).filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            cmd_scan(family, run, d, n, out.as_ref(), *max_unknown)
        }
        Command::Asympt { family, run, n, order } => cmd_asympt(family, run, *n, *order),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
