//! Command-line front end: construct pairs, analyze checkpoints, verify
//! structure and coverage, evaluate checkpoint bounds, fuzz the profile
//! inequality, and export plot-ready tables.
//!
//! Exit codes are a stable contract: 0 success, 1 verification/check
//! failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use addcomp::{
    check_felso, construct_with_stats, count_a, count_b, deficiency_decomposition,
    dichotomy_ratios, guaranteed_range, load_pair, save_pair, sigma_delta_fuzz, uncovered_up_to,
    verify_coverage, verify_invariants, AuditReport, ComplementPair, CoverageMode, FuzzConfig,
    GrowthConfig, GrowthPolicy, OmegaSpec, DEFAULT_ENUMERATION_LIMIT, DEFAULT_SIEVE_THRESHOLD,
};

/// Environment variable that overrides the default enumeration limit.
const LIMIT_ENV: &str = "ADDCOMP_LIMIT";

#[derive(Parser)]
#[command(
    name = "addcomp",
    version,
    about = "Construct, analyze, and verify additive-complement pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArg {
    /// Enumeration limit for operations that scan up to x
    /// (default: $ADDCOMP_LIMIT or 1000000).
    #[arg(long)]
    limit: Option<u64>,
}

impl LimitArg {
    fn resolve(&self) -> u64 {
        self.limit
            .or_else(|| {
                std::env::var(LIMIT_ENV)
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(DEFAULT_ENUMERATION_LIMIT)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a pair and save it as an archive.
    Construct {
        /// Number of blocks K (≥ 2).
        #[arg(long)]
        blocks: usize,
        /// greedy-min, lemma-safe, or explicit (with --u-list).
        #[arg(long, default_value = "greedy-min")]
        policy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit u_2,...,u_K for --policy explicit.
        #[arg(long, value_delimiter = ',')]
        u_list: Option<Vec<String>>,
        /// Interval length above which selection switches to sampling.
        #[arg(long, default_value_t = DEFAULT_SIEVE_THRESHOLD)]
        sieve_threshold: u64,
        /// Slow-growth spec to echo into reports (const:N, log2:N, loglog2:N).
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the deficiency decomposition at chosen checkpoints.
    Analyze {
        #[arg(long)]
        pair: PathBuf,
        /// Comma-separated checkpoint values.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        /// Use the built-in checkpoints: every u_{k+1}, the coverage
        /// boundary, and geometric fill-in.
        #[arg(long)]
        auto_checkpoints: bool,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Audit structural invariants and (optionally) coverage witnesses.
    Verify {
        #[arg(long)]
        pair: PathBuf,
        /// "exhaustive" or "sampled:N".
        #[arg(long)]
        coverage: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Evaluate the upper-bound checkpoint record at x = u_{k+1}.
    Felso {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        k: usize,
        /// Overrides the omega spec stored in the pair, if any.
        #[arg(long)]
        omega: Option<String>,
        #[command(flatten)]
        limit: LimitArg,
    },
    /// Fuzz the representation-profile inequality and moment identities.
    Fuzz {
        #[arg(long)]
        trials: u64,
        /// Upper bound on |U| and |V|.
        #[arg(long, default_value_t = 30)]
        size: usize,
        /// Values are drawn from [-values, values].
        #[arg(long, default_value_t = 200)]
        values: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write machine-readable tables.
    Export {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        what: ExportWhat,
        #[arg(long)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        #[arg(long)]
        auto_checkpoints: bool,
        /// Scan bound for --what gaps (default: coverage boundary, capped).
        #[arg(long)]
        x: Option<u64>,
        #[command(flatten)]
        limit: LimitArg,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExportWhat {
    Deficiency,
    Dichotomy,
    Gaps,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Csv,
    Json,
}

/// Errors that should surface as exit code 2 rather than 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(message.into()))
}

enum Outcome {
    Success,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Construct {
            blocks,
            policy,
            seed,
            u_list,
            sieve_threshold,
            omega,
            out,
        } => cmd_construct(blocks, &policy, seed, u_list, sieve_threshold, omega, &out),
        Command::Analyze {
            pair,
            checkpoints,
            auto_checkpoints,
            limit,
        } => cmd_analyze(&pair, checkpoints, auto_checkpoints, limit.resolve()),
        Command::Verify {
            pair,
            coverage,
            seed,
            limit,
        } => cmd_verify(&pair, coverage, seed, limit.resolve()),
        Command::Felso {
            pair,
            k,
            omega,
            limit,
        } => cmd_felso(&pair, k, omega, limit.resolve()),
        Command::Fuzz {
            trials,
            size,
            values,
            seed,
        } => cmd_fuzz(trials, size, values, seed),
        Command::Export {
            pair,
            what,
            format,
            out,
            checkpoints,
            auto_checkpoints,
            x,
            limit,
        } => cmd_export(
            &pair,
            what,
            format,
            &out,
            checkpoints,
            auto_checkpoints,
            x,
            limit.resolve(),
        ),
    }
}

/// Shorten huge integers for terminal summaries; archives always carry the
/// exact decimal form.
fn fmt_big(value: &BigInt) -> String {
    let s = value.to_string();
    if s.len() <= 60 {
        s
    } else {
        format!("{}...({} digits)", &s[..12], s.len())
    }
}

fn parse_policy(policy: &str, u_list: Option<Vec<String>>) -> Result<GrowthPolicy> {
    match policy {
        "explicit" => {
            let list = u_list.ok_or_else(|| usage("--policy explicit requires --u-list"))?;
            let values = list
                .iter()
                .map(|t| t.trim().parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| usage(format!("bad --u-list entry: {e}")))?;
            Ok(GrowthPolicy::Explicit(values))
        }
        other => {
            if u_list.is_some() {
                return Err(usage("--u-list only applies to --policy explicit"));
            }
            other.parse::<GrowthPolicy>().map_err(usage)
        }
    }
}

fn cmd_construct(
    blocks: usize,
    policy: &str,
    seed: u64,
    u_list: Option<Vec<String>>,
    sieve_threshold: u64,
    omega: Option<String>,
    out: &Path,
) -> Result<Outcome> {
    let policy = parse_policy(policy, u_list)?;
    let omega = omega
        .map(|s| s.parse::<OmegaSpec>().map_err(usage))
        .transpose()?;
    let config = GrowthConfig {
        blocks,
        policy,
        seed,
        sieve_threshold,
        omega,
    };
    let (pair, stats) = construct_with_stats(&config)?;
    save_pair(&pair, out).with_context(|| format!("writing {}", out.display()))?;

    println!("blocks: {}", pair.blocks());
    println!(
        "primes: {}",
        pair.schedule()
            .primes()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "u-sequence: {}",
        pair.u_sequence()
            .iter()
            .map(fmt_big)
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "block sizes: {}",
        pair.a_blocks()
            .iter()
            .map(|b| b.elements.len().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for (k, retries) in &stats.block_retries {
        if *retries > 0 {
            println!("block {k}: {retries} retry-doublings");
        }
    }
    for (k, bound) in &stats.feasibility_bounds {
        println!("block {k}: certified feasibility bound {}", fmt_big(bound));
    }
    if let Some(spec) = &pair.config().omega {
        // The slow-growth constraint is reported, never enforced: it asks
        // omega(u_{k+1}) to outgrow u_k.
        for k in 1..pair.blocks() {
            let value = spec.eval(pair.u(k + 1));
            let ok = value > *pair.u(k);
            println!(
                "omega({}) = {} {} u_{k} = {}",
                fmt_big(pair.u(k + 1)),
                fmt_big(&value),
                if ok { ">" } else { "<=" },
                fmt_big(pair.u(k))
            );
        }
    }
    println!("saved: {}", out.display());
    Ok(Outcome::Success)
}

/// Built-in checkpoint ladder: every u_{k+1} under the limit, the coverage
/// boundary, and powers of two as geometric fill-in.
fn auto_checkpoints(pair: &ComplementPair, limit: u64) -> Vec<u64> {
    let mut points = std::collections::BTreeSet::new();
    for u in &pair.u_sequence()[1..] {
        if let Some(v) = u.to_u64() {
            if v <= limit {
                points.insert(v);
            }
        }
    }
    let (lo, hi) = guaranteed_range(pair);
    if let Some(v) = (lo + 1u32).to_u64() {
        if v <= limit {
            points.insert(v);
        }
    }
    if let Some(v) = hi.to_u64() {
        if v <= limit {
            points.insert(v);
        }
    }
    let mut power = 4u64;
    while power <= limit && power <= (1 << 20) {
        points.insert(power);
        power *= 2;
    }
    points.into_iter().collect()
}

fn resolve_checkpoints(
    pair: &ComplementPair,
    checkpoints: Option<Vec<u64>>,
    auto: bool,
    limit: u64,
) -> Result<Vec<u64>> {
    let mut points: Vec<u64> = Vec::new();
    if auto {
        points.extend(auto_checkpoints(pair, limit));
    }
    if let Some(list) = checkpoints {
        points.extend(list);
    }
    points.sort_unstable();
    points.dedup();
    if points.is_empty() {
        return Err(usage(
            "no checkpoints: pass --checkpoints x1,x2,... or --auto-checkpoints",
        ));
    }
    if let Some(&bad) = points.iter().find(|&&x| x == 0 || x > limit) {
        return Err(usage(format!(
            "checkpoint {bad} is outside [1, limit = {limit}]"
        )));
    }
    Ok(points)
}

fn ratio_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn cmd_analyze(
    path: &Path,
    checkpoints: Option<Vec<u64>>,
    auto: bool,
    limit: u64,
) -> Result<Outcome> {
    let pair = load_pair(path)?;
    let points = resolve_checkpoints(&pair, checkpoints, auto, limit)?;
    let mut all_ok = true;
    for x in points {
        let report = deficiency_decomposition(&pair, x, limit)?;
        all_ok &= report.identity_ok;
        println!(
            "x={} A={} B={} a*={} r={} y={} z={} deficiency={} ratio={} ({:.6}) identity={}",
            report.x,
            report.count_a,
            report.count_b,
            report.a_star,
            report.r,
            report.y,
            report.z,
            report.deficiency,
            ratio_str(&report.exactness_ratio),
            ratio_f64(&report.exactness_ratio),
            if report.identity_ok { "ok" } else { "VIOLATED" },
        );
    }
    if all_ok {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CheckFailed)
    }
}

fn print_audit(report: &AuditReport) {
    for check in &report.checks {
        match &check.detail {
            Some(d) => println!(
                "{}: {} ({d})",
                check.name,
                if check.passed { "pass" } else { "FAIL" }
            ),
            None => println!(
                "{}: {}",
                check.name,
                if check.passed { "pass" } else { "FAIL" }
            ),
        }
    }
}

fn cmd_verify(path: &Path, coverage: Option<String>, seed: u64, limit: u64) -> Result<Outcome> {
    let pair = load_pair(path)?;
    let invariants = verify_invariants(&pair);
    print_audit(&invariants);
    let mut ok = invariants.overall();

    if let Some(mode_text) = coverage {
        let (lo, hi) = guaranteed_range(&pair);
        let lo = lo + 1u32;
        let (mode, hi) = if mode_text == "exhaustive" {
            // Exhaustive iteration is capped by the enumeration limit.
            let capped = hi.clone().min(BigInt::from(limit));
            (CoverageMode::Exhaustive, capped)
        } else if let Some(count) = mode_text.strip_prefix("sampled:") {
            let count: u64 = count
                .parse()
                .map_err(|e| usage(format!("bad sample count: {e}")))?;
            (CoverageMode::Sampled { count, seed }, hi)
        } else {
            return Err(usage(format!(
                "--coverage must be 'exhaustive' or 'sampled:N', got '{mode_text}'"
            )));
        };
        if lo > hi {
            println!("coverage: skipped (guaranteed range starts beyond the limit)");
        } else {
            match verify_coverage(&pair, &lo, &hi, mode) {
                Ok(report) => {
                    print_audit(&report);
                    ok &= report.overall();
                }
                Err(e) => {
                    println!("coverage: FAIL ({e})");
                    ok = false;
                }
            }
        }
    }
    Ok(if ok { Outcome::Success } else { Outcome::CheckFailed })
}

fn cmd_felso(path: &Path, k: usize, omega: Option<String>, limit: u64) -> Result<Outcome> {
    let pair = load_pair(path)?;
    let flag_spec = omega
        .map(|s| s.parse::<OmegaSpec>().map_err(usage))
        .transpose()?;
    let spec = flag_spec.as_ref().or(pair.config().omega.as_ref());
    let record = check_felso(&pair, k, spec, limit)?;
    println!("k={} x={}", record.k, record.x);
    println!("deficiency={} a*={}", record.deficiency, record.a_star);
    println!(
        "implied_c={} ({:.6})",
        ratio_str(&record.implied_c),
        ratio_f64(&record.implied_c)
    );
    match (&record.omega_value, record.within_omega) {
        (Some(value), Some(within)) => {
            println!(
                "omega(x)={} within_omega={}",
                value,
                if within { "yes" } else { "no" }
            );
        }
        _ => println!("omega: not specified"),
    }
    Ok(Outcome::Success)
}

fn cmd_fuzz(trials: u64, size: usize, values: i64, seed: u64) -> Result<Outcome> {
    if size == 0 || values <= 0 {
        return Err(usage("--size and --values must be positive"));
    }
    let report = sigma_delta_fuzz(&FuzzConfig {
        trials,
        size_bound: size,
        value_bound: values,
        seed,
    });
    print_audit(&report);
    Ok(if report.overall() {
        Outcome::Success
    } else {
        Outcome::CheckFailed
    })
}

/// Rows as (header, values) with every number an exact decimal string.
type Table = (Vec<&'static str>, Vec<Vec<String>>);

fn deficiency_table(pair: &ComplementPair, points: &[u64], limit: u64) -> Result<Table> {
    let header = vec![
        "x", "A_x", "B_x", "a_star", "r", "y", "z", "deficiency", "ratio_num", "ratio_den",
    ];
    let mut rows = Vec::with_capacity(points.len());
    for &x in points {
        let report = deficiency_decomposition(pair, x, limit)?;
        rows.push(vec![
            report.x.to_string(),
            report.count_a.to_string(),
            report.count_b.to_string(),
            report.a_star.to_string(),
            report.r.to_string(),
            report.y.to_string(),
            report.z.to_string(),
            report.deficiency.to_string(),
            report.exactness_ratio.numer().to_string(),
            report.exactness_ratio.denom().to_string(),
        ]);
    }
    Ok((header, rows))
}

fn dichotomy_table(pair: &ComplementPair, points: &[u64]) -> Result<Table> {
    let header = vec![
        "x",
        "A_x",
        "A_2x",
        "ratio_a_num",
        "ratio_a_den",
        "B_x",
        "B_2x",
        "ratio_b_num",
        "ratio_b_den",
    ];
    let xs: Vec<BigInt> = points.iter().map(|&x| BigInt::from(x)).collect();
    let reports = dichotomy_ratios(pair, &xs)?;
    let mut rows = Vec::with_capacity(reports.len());
    for report in reports {
        let x2 = &report.x * 2u32;
        rows.push(vec![
            report.x.to_string(),
            count_a(pair, &report.x).to_string(),
            count_a(pair, &x2).to_string(),
            report.ratio_a.numer().to_string(),
            report.ratio_a.denom().to_string(),
            count_b(pair, &report.x).to_string(),
            count_b(pair, &x2).to_string(),
            report.ratio_b.numer().to_string(),
            report.ratio_b.denom().to_string(),
        ]);
    }
    Ok((header, rows))
}

fn gaps_table(pair: &ComplementPair, x: u64, limit: u64) -> Result<Table> {
    let report = uncovered_up_to(pair, x, limit)?;
    if report.truncated {
        eprintln!(
            "note: gap list truncated at {} entries (r = {})",
            report.gaps.len(),
            report.r
        );
    }
    let rows = report.gaps.iter().map(|g| vec![g.to_string()]).collect();
    Ok((vec!["n"], rows))
}

fn write_table(path: &Path, format: ExportFormat, table: &Table) -> Result<()> {
    let (header, rows) = table;
    match format {
        ExportFormat::Csv => {
            let mut writer = csv::Writer::from_path(path)
                .with_context(|| format!("opening {}", path.display()))?;
            writer.write_record(header)?;
            for row in rows {
                writer.write_record(row)?;
            }
            writer.flush()?;
        }
        ExportFormat::Json => {
            let objects: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = header
                        .iter()
                        .zip(row)
                        .map(|(key, value)| {
                            ((*key).to_string(), serde_json::Value::String(value.clone()))
                        })
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let text = serde_json::to_string_pretty(&objects)?;
            std::fs::write(path, text + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    path: &Path,
    what: ExportWhat,
    format: ExportFormat,
    out: &Path,
    checkpoints: Option<Vec<u64>>,
    auto: bool,
    x: Option<u64>,
    limit: u64,
) -> Result<Outcome> {
    let pair = load_pair(path)?;
    let table = match what {
        ExportWhat::Deficiency => {
            let points = resolve_checkpoints(&pair, checkpoints, auto, limit)?;
            deficiency_table(&pair, &points, limit)?
        }
        ExportWhat::Dichotomy => {
            let points = resolve_checkpoints(&pair, checkpoints, auto, limit)?;
            dichotomy_table(&pair, &points)?
        }
        ExportWhat::Gaps => {
            let bound = match x {
                Some(value) => value,
                None => {
                    let (_, hi) = guaranteed_range(&pair);
                    hi.to_u64().unwrap_or(limit).min(limit)
                }
            };
            if bound == 0 {
                return Err(usage("--x must be positive"));
            }
            gaps_table(&pair, bound, limit)?
        }
    };
    write_table(out, format, &table)?;
    println!("wrote {} rows to {}", table.1.len(), out.display());
    Ok(Outcome::Success)
}
