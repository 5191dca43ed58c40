//! Command-line interface.
//!
//! Eight subcommands cover the engine end to end: `chain` (build and cache
//! the inductive chain), `verify` (check an identity file), `hankel`
//! (moment-determinant scans), `obstruction` (zero-sum subset analysis),
//! `search` (exact identity search at numeric weights), `multilinear`
//! (polarization), `reduce` (power-sum rewriting), and `bench` (timing).
//!
//! Exit codes: 0 success, 1 a checked property failed to hold (failed
//! verification, blocked reduction, claimed subset not zero-sum), 2 a
//! resource budget was exceeded, 3 usage, parse, or I/O trouble.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::forge::{
    build_chain, reduce_power, verify_chain, ChainBudget, ChainResult, VerifyMode,
};
use crate::hankel::{control_determinant, scan_vanishing, ScanMode};
use crate::integrality::{demonstrate_obstruction, find_zero_subset};
use crate::multilinear::{
    expand_multilinear, multilinearize, trace_count_report, DEFAULT_MAX_VARS,
};
use crate::poly::{rational_string, Rational};
use crate::search::{prediction_report, search_mixed, search_pure, Verdict};
use crate::serial::{chain_cache_filename, load_json, save_json, ChainDoc, IdentityDoc};
use crate::symfun::{verify_mixed, verify_pure, MixedIdentity, PureIdentity, WeightVector};
use crate::Result;

#[derive(Parser)]
#[command(
    name = "specsym",
    version,
    about = "Exact identities of weighted-trace diagonal matrix algebras"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build the chain of sufficiently monic identities up to an arity.
    Chain(ChainArgs),
    /// Verify an identity document at symbolic or numeric weights.
    Verify(VerifyArgs),
    /// Scan moment determinants for the rank obstruction.
    Hankel(HankelArgs),
    /// Find zero-sum weight subsets and demonstrate their consequences.
    Obstruction(ObstructionArgs),
    /// Search exhaustively for identities at numeric weights.
    Search(SearchArgs),
    /// Polarize a pure identity into multilinear trace form.
    Multilinear(MultilinearArgs),
    /// Rewrite a high power sum in terms of low ones at numeric weights.
    Reduce(ReduceArgs),
    /// Time chain construction and verification level by level.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ChainArgs {
    /// Target arity.
    #[arg(long, default_value_t = 3)]
    max_k: u32,
    /// Cap on intermediate flattened term counts.
    #[arg(long, default_value_t = 2_000_000)]
    term_budget: u64,
    /// Directory for chain documents; reused on later runs.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Skip re-verification (structural checks still run).
    #[arg(long)]
    trust_cache: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity document to check.
    #[arg(long)]
    input: PathBuf,
    /// Numeric weights like "2,3" or "1/2,-1"; symbolic when omitted.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args)]
struct HankelArgs {
    /// Number of slots.
    #[arg(long)]
    arity: u32,
    /// Numeric weights; symbolic when omitted.
    #[arg(long)]
    weights: Option<String>,
    /// Largest row/column offset to scan.
    #[arg(long, default_value_t = 3)]
    max_offset: u32,
    /// Scan strategy.
    #[arg(long, value_enum, default_value_t = ScanStrategy::Exhaustive)]
    mode: ScanStrategy,
    /// Specs to draw in sampled mode.
    #[arg(long, default_value_t = 25)]
    count: u32,
    /// Seed for sampled mode.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanStrategy {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct ObstructionArgs {
    /// Numeric weights to analyze.
    #[arg(long)]
    weights: String,
    /// Claimed zero-sum subset, 1-based like "1,3"; scanned when omitted.
    #[arg(long)]
    subset: Option<String>,
    /// Highest power sum to specialize in the demonstration.
    #[arg(long, default_value_t = 8)]
    power_cap: u32,
}

#[derive(Args)]
struct SearchArgs {
    /// Numeric weights to search at.
    #[arg(long)]
    weights: String,
    /// Target weight for a fixed-weight search.
    #[arg(long)]
    weight: Option<u32>,
    /// What to search for in a fixed-weight search.
    #[arg(long, value_enum, default_value_t = KindArg::Mixed)]
    kind: KindArg,
    /// Run the minimal-weight searches and grade the multiplicity
    /// predictions instead.
    #[arg(long)]
    minimal: bool,
    /// Weight cap for the minimal searches.
    #[arg(long, default_value_t = 6)]
    cap: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Pure,
    Mixed,
}

#[derive(Args)]
struct MultilinearArgs {
    /// Pure identity document to polarize.
    #[arg(long, conflicts_with = "chain")]
    input: Option<PathBuf>,
    /// Polarize the top pure identity of the chain at this arity instead.
    #[arg(long)]
    chain: Option<u32>,
    /// Bound on matrix variables (the identity weight).
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: u32,
    /// Numeric weights for verification; symbolic when omitted.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Numeric weights.
    #[arg(long)]
    weights: String,
    /// Power sum index to rewrite.
    #[arg(long)]
    power: u32,
    /// Mixed identity document supplying the relation; the chain at the
    /// weights' arity is built when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Cap on intermediate flattened term counts for chain building.
    #[arg(long, default_value_t = 2_000_000)]
    term_budget: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Highest arity to attempt.
    #[arg(long, default_value_t = 3)]
    max_k: u32,
    /// Cap on intermediate flattened term counts.
    #[arg(long, default_value_t = 2_000_000)]
    term_budget: u64,
    /// Skip the verification pass.
    #[arg(long)]
    skip_verify: bool,
}

/// Entry point: parses arguments, runs the command, maps errors to exit
/// codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    match exec(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn exec(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Chain(a) => cmd_chain(cli.format, a),
        Command::Verify(a) => cmd_verify(cli.format, a),
        Command::Hankel(a) => cmd_hankel(cli.format, a),
        Command::Obstruction(a) => cmd_obstruction(cli.format, a),
        Command::Search(a) => cmd_search(cli.format, a),
        Command::Multilinear(a) => cmd_multilinear(cli.format, a),
        Command::Reduce(a) => cmd_reduce(cli.format, a),
        Command::Bench(a) => cmd_bench(cli.format, a),
    }
}

// =============================================================================
// Shared parsing helpers
// =============================================================================

fn parse_weights(s: &str) -> Result<WeightVector> {
    let entries = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<Rational>()
                .map_err(|e| Error::Usage(format!("bad weight {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightVector::numeric(entries)
}

fn parse_subset(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|e| Error::Usage(format!("bad index {t:?}: {e}")))
        })
        .collect()
}

fn weights_or_symbolic(weights: &Option<String>, arity: u32) -> Result<WeightVector> {
    match weights {
        Some(s) => {
            let d = parse_weights(s)?;
            if d.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: d.arity(),
                });
            }
            Ok(d)
        }
        None => WeightVector::symbolic(arity),
    }
}

fn weights_label(d: &WeightVector) -> String {
    if d.is_numeric() {
        d.to_string()
    } else {
        format!("symbolic {d}")
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

// =============================================================================
// chain
// =============================================================================

struct LoadedChain {
    chain: ChainResult,
    cache_path: Option<PathBuf>,
    from_cache: bool,
}

fn obtain_chain(
    k: u32,
    budget: &ChainBudget,
    cache_dir: Option<&Path>,
) -> Result<LoadedChain> {
    if let Some(dir) = cache_dir {
        let path = dir.join(chain_cache_filename(k));
        if path.exists() {
            let doc: ChainDoc = load_json(&path)?;
            return Ok(LoadedChain {
                chain: doc.to_chain()?,
                cache_path: Some(path),
                from_cache: true,
            });
        }
        let chain = build_chain(k, budget)?;
        std::fs::create_dir_all(dir)?;
        save_json(&path, &ChainDoc::from_chain(&chain))?;
        return Ok(LoadedChain {
            chain,
            cache_path: Some(path),
            from_cache: false,
        });
    }
    Ok(LoadedChain {
        chain: build_chain(k, budget)?,
        cache_path: None,
        from_cache: false,
    })
}

fn verify_mode_json(mode: &VerifyMode) -> serde_json::Value {
    match mode {
        VerifyMode::Full => json!({"mode": "full"}),
        VerifyMode::Sampled { samples } => json!({"mode": "sampled", "samples": samples}),
    }
}

fn verify_mode_label(mode: &VerifyMode) -> String {
    match mode {
        VerifyMode::Full => "full symbolic expansion".to_string(),
        VerifyMode::Sampled { samples } => {
            format!("sampled at {samples} random weight vectors")
        }
    }
}

fn cmd_chain(format: Format, a: ChainArgs) -> Result<i32> {
    let budget = ChainBudget {
        max_arity: a.max_k.max(1),
        max_terms: a.term_budget,
    };
    let loaded = obtain_chain(a.max_k, &budget, a.cache_dir.as_deref())?;
    let verification = if a.trust_cache && loaded.from_cache {
        None
    } else {
        Some(verify_chain(&loaded.chain, &budget)?)
    };
    let ok = verification.as_ref().map_or(true, |v| v.all_ok);
    match format {
        Format::Json => {
            let levels: Vec<serde_json::Value> = loaded
                .chain
                .levels()
                .iter()
                .map(|l| {
                    json!({
                        "arity": l.arity,
                        "mixed_weight": l.mixed.weight(),
                        "mixed_terms": l.mixed.terms().count(),
                        "pure_weight": l.pure.weight(),
                        "pure_terms": l.pure.terms().count(),
                    })
                })
                .collect();
            print_json(&json!({
                "arity": loaded.chain.arity(),
                "levels": levels,
                "verification": verification.as_ref().map(|v| {
                    let mut obj = verify_mode_json(&v.mode);
                    obj["all_ok"] = json!(v.all_ok);
                    obj
                }),
                "cache": loaded.cache_path.as_ref().map(|p| p.display().to_string()),
                "from_cache": loaded.from_cache,
                "document": serde_json::to_value(ChainDoc::from_chain(&loaded.chain))?,
            }));
        }
        Format::Human => {
            println!("chain: arity {}", loaded.chain.arity());
            for l in loaded.chain.levels() {
                println!(
                    "  level {}: mixed weight {} ({} terms), pure weight {} ({} terms)",
                    l.arity,
                    l.mixed.weight(),
                    l.mixed.terms().count(),
                    l.pure.weight(),
                    l.pure.terms().count()
                );
            }
            match &verification {
                Some(v) => println!(
                    "verification: {}, {}",
                    verify_mode_label(&v.mode),
                    if v.all_ok { "all levels pass" } else { "FAILED" }
                ),
                None => println!("verification: skipped (--trust-cache)"),
            }
            if let Some(path) = &loaded.cache_path {
                println!(
                    "cache: {} {}",
                    if loaded.from_cache { "loaded from" } else { "written to" },
                    path.display()
                );
            }
            if loaded.chain.pure().terms().count() <= 16 {
                println!("pure identity: {}", loaded.chain.pure());
                println!("mixed identity: {}", loaded.chain.mixed());
            } else {
                println!(
                    "pure identity: {} terms (use --format json or the cache file)",
                    loaded.chain.pure().terms().count()
                );
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

// =============================================================================
// verify
// =============================================================================

enum AnyIdentity {
    Pure(PureIdentity),
    Mixed(MixedIdentity),
}

fn load_identity(path: &Path) -> Result<AnyIdentity> {
    let doc: IdentityDoc = load_json(path)?;
    match doc.kind.as_str() {
        "pure" => Ok(AnyIdentity::Pure(doc.to_pure()?)),
        "mixed" => Ok(AnyIdentity::Mixed(doc.to_mixed()?)),
        other => Err(Error::InvalidDocument(format!(
            "unknown identity kind {other:?}"
        ))),
    }
}

fn cmd_verify(format: Format, a: VerifyArgs) -> Result<i32> {
    let identity = load_identity(&a.input)?;
    let (kind, arity, weight) = match &identity {
        AnyIdentity::Pure(f) => ("pure", f.arity(), f.weight()),
        AnyIdentity::Mixed(f) => ("mixed", f.arity(), f.weight()),
    };
    let d = weights_or_symbolic(&a.weights, arity)?;
    let report = match &identity {
        AnyIdentity::Pure(f) => verify_pure(f, &d)?,
        AnyIdentity::Mixed(f) => verify_mixed(f, &d)?,
    };
    match format {
        Format::Json => print_json(&json!({
            "kind": kind,
            "arity": arity,
            "weight": weight,
            "weights": weights_label(&d),
            "ok": report.ok,
            "failing_slot": report.failing_slot,
            "witness": report.witness,
        })),
        Format::Human => {
            println!("identity: {kind}, arity {arity}, weight {weight}");
            println!("weights: {}", weights_label(&d));
            if report.ok {
                println!("result: PASS");
            } else {
                println!(
                    "result: FAIL in slot {} (leading term {})",
                    report.failing_slot.unwrap_or(0),
                    report.witness.as_deref().unwrap_or("unknown")
                );
            }
        }
    }
    Ok(if report.ok { 0 } else { 1 })
}

// =============================================================================
// hankel
// =============================================================================

fn cmd_hankel(format: Format, a: HankelArgs) -> Result<i32> {
    if a.arity == 0 {
        return Err(Error::Usage("arity must be at least 1".into()));
    }
    let d = weights_or_symbolic(&a.weights, a.arity)?;
    let mode = match a.mode {
        ScanStrategy::Exhaustive => ScanMode::Exhaustive,
        ScanStrategy::Sampled => ScanMode::Sampled {
            count: a.count,
            seed: a.seed,
        },
    };
    let report = scan_vanishing(&d, a.max_offset, mode)?;
    let control = control_determinant(&d)?;
    let ok = report.all_vanished();
    match format {
        Format::Json => print_json(&json!({
            "arity": a.arity,
            "weights": weights_label(&d),
            "max_offset": a.max_offset,
            "mode": match &report.mode {
                ScanMode::Exhaustive => json!({"mode": "exhaustive"}),
                ScanMode::Sampled { count, seed } =>
                    json!({"mode": "sampled", "count": count, "seed": seed}),
            },
            "checked": report.checked,
            "all_vanished": ok,
            "failures": report.failures.iter().map(|s| json!({
                "a": s.row_offsets(),
                "b": s.column_offsets(),
            })).collect::<Vec<_>>(),
            "control_nonzero": !control.is_zero(),
        })),
        Format::Human => {
            println!("weights: {}", weights_label(&d));
            println!(
                "scan: side {} determinants, offsets up to {}, {} specs checked",
                a.arity + 1,
                a.max_offset,
                report.checked
            );
            if ok {
                println!("result: every scanned determinant vanishes");
            } else {
                println!("result: {} determinants FAILED to vanish:", report.failures.len());
                for s in &report.failures {
                    println!("  {s}");
                }
            }
            println!(
                "control: side {} standard determinant is {}",
                a.arity,
                if control.is_zero() { "zero (degenerate)" } else { "nonzero" }
            );
        }
    }
    Ok(if ok { 0 } else { 1 })
}

// =============================================================================
// obstruction
// =============================================================================

fn cmd_obstruction(format: Format, a: ObstructionArgs) -> Result<i32> {
    let d = parse_weights(&a.weights)?;
    let subset = match &a.subset {
        Some(s) => Some(parse_subset(s)?),
        None => find_zero_subset(&d)?,
    };
    let demo = match &subset {
        Some(indices) => Some(demonstrate_obstruction(&d, indices, a.power_cap)?),
        None => None,
    };
    match format {
        Format::Json => print_json(&json!({
            "weights": d.to_string(),
            "subset": demo.as_ref().map(|x| x.subset.clone()),
            "power_cap": a.power_cap,
            "all_powers_vanish": demo.as_ref().map(|x| x.all_powers_vanish()),
            "monic_identities_blocked": demo.is_some(),
        })),
        Format::Human => {
            println!("weights: {d}");
            match &demo {
                Some(demo) => {
                    let subset = demo
                        .subset
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    println!("zero-sum subset: {{{subset}}}");
                    println!(
                        "specialization: p_1..p_{} {} under the subset collapse",
                        demo.power_cap,
                        if demo.all_powers_vanish() { "all vanish" } else { "DO NOT all vanish" }
                    );
                    println!(
                        "conclusion: no monic mixed identity exists at these weights; \
                         power-sum reduction is unavailable"
                    );
                }
                None => {
                    println!("zero-sum subset: none");
                    println!("conclusion: no obstruction found at these weights");
                }
            }
        }
    }
    Ok(0)
}

// =============================================================================
// search
// =============================================================================

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Match => "MATCH",
        Verdict::Mismatch => "MISMATCH",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

fn cmd_search(format: Format, a: SearchArgs) -> Result<i32> {
    let d = parse_weights(&a.weights)?;
    if a.minimal {
        let report = prediction_report(&d, a.cap)?;
        match format {
            Format::Json => print_json(&json!({
                "weights": d.to_string(),
                "cap": a.cap,
                "profile": report.profile.iter().map(|(v, m)| json!({
                    "value": rational_string(v),
                    "multiplicity": m,
                })).collect::<Vec<_>>(),
                "profile_product": report.profile_product,
                "predicted_mixed_weight": report.predicted_mixed_weight,
                "found_mixed_weight": report.mixed_search.found,
                "mixed_verdict": verdict_label(report.mixed_verdict),
                "predicted_pure_weight": report.predicted_pure_weight,
                "found_pure_weight": report.pure_search.found,
                "pure_verdict": verdict_label(report.pure_verdict),
            })),
            Format::Human => {
                println!("weights: {d}");
                let profile = report
                    .profile
                    .iter()
                    .map(|(v, m)| format!("{}:{m}", rational_string(v)))
                    .collect::<Vec<_>>()
                    .join(", ");
                println!("multiplicity profile: {profile} (product m = {})", report.profile_product);
                println!(
                    "monic mixed: predicted weight {}, found {} [{}]",
                    report.predicted_mixed_weight,
                    report
                        .mixed_search
                        .found
                        .map_or_else(|| format!("none up to {}", a.cap), |w| w.to_string()),
                    verdict_label(report.mixed_verdict)
                );
                println!(
                    "pure: predicted weight {}, found {} [{}]",
                    report.predicted_pure_weight,
                    report
                        .pure_search
                        .found
                        .map_or_else(|| format!("none up to {}", a.cap), |w| w.to_string()),
                    verdict_label(report.pure_verdict)
                );
            }
        }
        return Ok(0);
    }
    let weight = a.weight.ok_or_else(|| {
        Error::Usage("pass --weight N for a fixed-weight search, or --minimal".into())
    })?;
    match a.kind {
        KindArg::Pure => {
            let found = search_pure(&d, weight)?;
            match format {
                Format::Json => print_json(&json!({
                    "weights": d.to_string(),
                    "kind": "pure",
                    "weight": weight,
                    "dimension": found.dimension,
                    "basis": found.basis.iter().map(IdentityDoc::from_pure).collect::<Vec<_>>(),
                })),
                Format::Human => {
                    println!("weights: {d}, pure candidates of weight {weight}");
                    println!("solution dimension: {}", found.dimension);
                    for (i, f) in found.basis.iter().enumerate() {
                        println!("  [{}] {}", i + 1, f);
                    }
                }
            }
        }
        KindArg::Mixed => {
            let found = search_mixed(&d, weight)?;
            match format {
                Format::Json => print_json(&json!({
                    "weights": d.to_string(),
                    "kind": "mixed",
                    "weight": weight,
                    "dimension": found.dimension,
                    "monic": found.monic.as_ref().map(IdentityDoc::from_mixed),
                    "basis": found.basis.iter().map(IdentityDoc::from_mixed).collect::<Vec<_>>(),
                })),
                Format::Human => {
                    println!("weights: {d}, mixed candidates of weight {weight}");
                    println!("solution dimension: {}", found.dimension);
                    match &found.monic {
                        Some(f) => println!("monic representative: {f}"),
                        None => println!("monic representative: none"),
                    }
                    for (i, f) in found.basis.iter().enumerate() {
                        println!("  [{}] {}", i + 1, f);
                    }
                }
            }
        }
    }
    Ok(0)
}

// =============================================================================
// multilinear
// =============================================================================

fn cmd_multilinear(format: Format, a: MultilinearArgs) -> Result<i32> {
    let source = match (&a.input, a.chain) {
        (Some(path), _) => match load_identity(path)? {
            AnyIdentity::Pure(f) => f,
            AnyIdentity::Mixed(_) => {
                return Err(Error::InvalidDocument(
                    "polarization expects a pure identity document".into(),
                ))
            }
        },
        (None, Some(k)) => build_chain(k, &ChainBudget::default())?.pure().clone(),
        (None, None) => {
            return Err(Error::Usage(
                "pass --input FILE or --chain K to choose a pure identity".into(),
            ))
        }
    };
    let g = multilinearize(&source, a.max_vars)?;
    let d = weights_or_symbolic(&a.weights, g.arity())?;
    let expanded = expand_multilinear(&g, &d)?;
    let ok = expanded.is_zero();
    let counts = trace_count_report(&g);
    match format {
        Format::Json => print_json(&json!({
            "arity": g.arity(),
            "num_vars": g.num_vars(),
            "weights": weights_label(&d),
            "singleton_coefficient": g.singleton_coefficient().to_string(),
            "terms": g.terms().map(|(l, beta)| json!({
                "shape": l.parts(),
                "coeff": beta.to_string(),
            })).collect::<Vec<_>>(),
            "trace_factors": {"min": counts.min_traces, "max": counts.max_traces},
            "verified": ok,
        })),
        Format::Human => {
            println!(
                "source: pure identity, arity {}, weight {}",
                g.arity(),
                g.num_vars()
            );
            println!("matrix variables: {}", g.num_vars());
            println!("polarized form: {g}");
            println!("singleton coefficient: {}", g.singleton_coefficient());
            println!(
                "trace factors per monomial: {} to {}",
                counts.min_traces, counts.max_traces
            );
            println!(
                "verification at {}: {}",
                weights_label(&d),
                if ok { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(if ok { 0 } else { 1 })
}

// =============================================================================
// reduce
// =============================================================================

fn cmd_reduce(format: Format, a: ReduceArgs) -> Result<i32> {
    let d = parse_weights(&a.weights)?;
    let relation = match &a.input {
        Some(path) => match load_identity(path)? {
            AnyIdentity::Mixed(f) => f,
            AnyIdentity::Pure(_) => {
                return Err(Error::InvalidDocument(
                    "power reduction expects a mixed identity document".into(),
                ))
            }
        },
        None => {
            let budget = ChainBudget {
                max_arity: d.arity().max(1),
                max_terms: a.term_budget,
            };
            build_chain(d.arity(), &budget)?.mixed().clone()
        }
    };
    let expr = reduce_power(a.power, &d, &relation)?;
    let exact = expr.expand()? == crate::symfun::power_sum(&d, a.power)?;
    match format {
        Format::Json => print_json(&json!({
            "weights": d.to_string(),
            "power": a.power,
            "relation_weight": relation.weight(),
            "max_part": expr.max_part(),
            "terms": expr.terms().map(|(l, c)| json!({
                "partition": l.parts(),
                "coeff": rational_string(c),
            })).collect::<Vec<_>>(),
            "check": if exact { "exact" } else { "MISMATCH" },
        })),
        Format::Human => {
            println!("weights: {d}, relation weight {}", relation.weight());
            println!("{expr}");
            println!(
                "check: expansion {} the power sum",
                if exact { "equals" } else { "DOES NOT equal" }
            );
        }
    }
    Ok(if exact { 0 } else { 1 })
}

// =============================================================================
// bench
// =============================================================================

fn cmd_bench(format: Format, a: BenchArgs) -> Result<i32> {
    let budget = ChainBudget {
        max_arity: a.max_k.max(1),
        max_terms: a.term_budget,
    };
    let mut rows = Vec::new();
    let mut chain: Option<ChainResult> = None;
    for k in 1..=a.max_k {
        let start = Instant::now();
        match build_chain(k, &budget) {
            Ok(built) => {
                let secs = start.elapsed().as_secs_f64();
                rows.push(json!({
                    "arity": k,
                    "build_seconds": secs,
                    "mixed_weight": built.mixed().weight(),
                    "mixed_terms": built.mixed().terms().count(),
                    "pure_weight": built.pure().weight(),
                    "pure_terms": built.pure().terms().count(),
                }));
                if format == Format::Human {
                    println!(
                        "arity {k}: built in {secs:.3}s (mixed weight {}, {} terms; pure weight {}, {} terms)",
                        built.mixed().weight(),
                        built.mixed().terms().count(),
                        built.pure().weight(),
                        built.pure().terms().count()
                    );
                }
                chain = Some(built);
            }
            Err(e @ Error::BudgetExceeded { .. }) => {
                if format == Format::Human {
                    println!("arity {k}: aborted cleanly: {e}");
                } else {
                    rows.push(json!({"arity": k, "aborted": e.to_string()}));
                    print_json(&json!({"levels": rows, "ok": false}));
                }
                eprintln!("error: {e}");
                return Ok(2);
            }
            Err(e) => return Err(e),
        }
    }
    let mut verify_entry = serde_json::Value::Null;
    if !a.skip_verify {
        if let Some(chain) = &chain {
            let start = Instant::now();
            let outcome = verify_chain(chain, &budget)?;
            let secs = start.elapsed().as_secs_f64();
            if format == Format::Human {
                println!(
                    "verification: {} in {secs:.3}s, {}",
                    verify_mode_label(&outcome.mode),
                    if outcome.all_ok { "all levels pass" } else { "FAILED" }
                );
            }
            let mut obj = verify_mode_json(&outcome.mode);
            obj["seconds"] = json!(secs);
            obj["all_ok"] = json!(outcome.all_ok);
            verify_entry = obj;
            if !outcome.all_ok {
                return Ok(1);
            }
        }
    }
    if format == Format::Json {
        print_json(&json!({
            "levels": rows,
            "verification": verify_entry,
            "ok": true,
        }));
    }
    Ok(0)
}
