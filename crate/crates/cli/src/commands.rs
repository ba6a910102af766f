//! Subcommands. Each `run_*` writes its primary output to `out`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epn_core::catalog;
use epn_core::epnverify::{
    precision_sweep, precision_sweep_matrix, split_block_matrix, ConfluenceReport, PerturbationStructure, SweepConfig,
};
use epn_core::groebner::GroebnerBudget;
use epn_core::numerics::{Integer, Rational};
use epn_core::secular::{constraints_at, derive_secular, ModelSpec, SecularRecord, SecularSystem};
use epn_core::solve::{solve_epn_with_budget, EliminationRecord, EliminationResult, ParameterTuple, SolveMethod, TupleRecord};
use epn_core::spectrum::SpectralFamily;
use serde::{Deserialize, Serialize};

use crate::cache::{sha256_hex, Cache, CacheKey};
use crate::output::{
    write_boundary_table, write_interval_table, write_rung_summary, write_spectrum_csv, write_tuple_table,
    write_verify_csv,
};
use crate::plot::render_svg;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "epn", version, about = "Exceptional points of maximal order in tridiagonal PT-symmetric models")]
pub struct Cli {
    /// Cache directory (overrides EPN_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the secular polynomial coefficients P_1..P_J.
    Derive(DeriveArgs),
    /// Solve the maximal-degeneracy system at z = 1.
    Solve(SolveArgs),
    /// Confluence test of the eigenvectors at the EPN under random perturbations.
    Verify(VerifyArgs),
    /// Sample the secular roots s_k(z) over a window.
    Sweep(SweepArgs),
    /// Locate EP2 boundaries and sign changes of the constant term.
    Boundaries(BoundaryArgs),
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    pub n: usize,
    /// Rational value of z; symbolic when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Write the serialized artifact here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Groebner,
    Resultant,
    Auto,
}

impl MethodArg {
    fn method(self) -> SolveMethod {
        match self {
            MethodArg::Groebner => SolveMethod::Groebner,
            MethodArg::Resultant => SolveMethod::Resultant,
            MethodArg::Auto => SolveMethod::Auto,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Groebner => "groebner",
            MethodArg::Resultant => "resultant",
            MethodArg::Auto => "auto",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub n: usize,
    #[arg(long, default_value_t = 40)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Maximum number of S-pairs in the Gröbner computation.
    #[arg(long)]
    pub max_pairs: Option<usize>,
    /// Significant digits shown per value.
    #[arg(long, default_value_t = 16)]
    pub print_digits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    ComplexSymmetric,
    DenseUnstructured,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub n: usize,
    /// Tuple id (bh, a, b, alpha, ..., t1, ..., split-demo) or inline `A=..,B=..`.
    #[arg(long)]
    pub tuple: String,
    #[arg(long, value_delimiter = ',', default_values_t = vec![10u32, 20, 30, 40])]
    pub ladder: Vec<u32>,
    #[arg(long, default_value_t = 3)]
    pub trials: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = StructureArg::ComplexSymmetric)]
    pub structure: StructureArg,
    /// Write the per-trial CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub n: usize,
    #[arg(long)]
    pub tuple: String,
    #[arg(long, allow_hyphen_values = true)]
    pub zmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub zmax: f64,
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write an SVG plot of Re s_k(z) here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    pub n: usize,
    #[arg(long)]
    pub tuple: String,
    /// `lo..hi`.
    #[arg(long, allow_hyphen_values = true, default_value = "-1000..1000")]
    pub window: String,
    #[arg(long, default_value_t = 40)]
    pub digits: u32,
    /// Also print the root census of every interval between boundaries.
    #[arg(long)]
    pub census: bool,
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let cache = Cache::new(cli.cache_dir.clone(), !cli.no_cache);
    match &cli.command {
        Command::Derive(a) => run_derive(a, &cache, out),
        Command::Solve(a) => run_solve(a, &cache, out),
        Command::Verify(a) => run_verify(a, &cache, out),
        Command::Sweep(a) => run_sweep(a, &cache, out),
        Command::Boundaries(a) => run_boundaries(a, &cache, out),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintRecord {
    pub dimension: usize,
    pub z0: String,
    pub variables: Vec<String>,
    pub constraints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub dimension: usize,
    pub method: String,
    pub digits: u32,
    pub elimination: EliminationRecord,
    pub non_bh_degree: usize,
    pub tuples: Vec<TupleRecord>,
    pub diagnostics: Vec<String>,
}

fn secular_key(n: usize) -> CacheKey {
    CacheKey::new(n, "general", "secular")
}

/// Symbolic secular system, from cache when available.
pub fn secular_system(n: usize, cache: &Cache) -> Result<SecularSystem, CliError> {
    let model = ModelSpec::new(n)?;
    let key = secular_key(n);
    if let Some(rec) = cache.load::<SecularRecord>(&key) {
        if let Ok(sys) = SecularSystem::from_record(&rec) {
            return Ok(sys);
        }
    }
    let sys = derive_secular(&model)?;
    cache.store(&key, &sys.to_record())?;
    Ok(sys)
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    if let Ok(q) = text.parse::<Rational>() {
        return Ok(q);
    }
    // decimal literal such as 0.5 or -1.25
    let (neg, body) = text.strip_prefix('-').map_or((false, text), |b| (true, b));
    let (int, frac) = body.split_once('.').ok_or_else(|| CliError::Usage(format!("`{text}` is not a rational")))?;
    let digits = format!("{int}{frac}");
    let num: Rational = digits.parse().map_err(|_| CliError::Usage(format!("`{text}` is not a rational")))?;
    let q = num / Rational::from(Integer::from(Integer::u_pow_u(10, frac.len() as u32)));
    Ok(if neg { -q } else { q })
}

pub fn run_derive<W: Write>(args: &DeriveArgs, cache: &Cache, out: &mut W) -> Result<(), CliError> {
    let sys = secular_system(args.n, cache)?;
    let (lines, artifact) = match &args.z {
        None => {
            let rec = sys.to_record();
            let text = serde_json::to_string_pretty(&crate::cache::CacheEntry::new(secular_key(args.n), &rec)?)?;
            (rec.coefficients, text)
        }
        Some(z) => {
            let z0 = parse_rational(z)?;
            let cs = constraints_at(&sys, &z0)?;
            let rec = ConstraintRecord {
                dimension: args.n,
                z0: z0.to_string(),
                variables: ModelSpec::new(args.n)?.param_names(),
                constraints: cs.iter().map(|p| p.to_string()).collect(),
            };
            let key = CacheKey::new(args.n, &rec.z0, "constraints");
            cache.store(&key, &rec)?;
            let text = serde_json::to_string_pretty(&crate::cache::CacheEntry::new(key, &rec)?)?;
            (rec.constraints, text)
        }
    };
    for (m, p) in lines.iter().enumerate() {
        writeln!(out, "P{} = {p}", m + 1)?;
    }
    if let Some(path) = &args.out {
        fs::write(path, artifact)?;
    }
    Ok(())
}

/// Solver tuples, from cache when available. A budget failure still leaves
/// the derived system in the cache.
pub fn solved(
    n: usize,
    digits: u32,
    method: MethodArg,
    max_pairs: Option<usize>,
    cache: &Cache,
) -> Result<SolveRecord, CliError> {
    let key = CacheKey::new(n, "1", &format!("solve.{}.{digits}", method.name()));
    if max_pairs.is_none() {
        if let Some(rec) = cache.load::<SolveRecord>(&key) {
            return Ok(rec);
        }
    }
    secular_system(n, cache)?;
    let mut budget = GroebnerBudget::default();
    if let Some(m) = max_pairs {
        budget.max_pairs = m;
    }
    let report = solve_epn_with_budget(n, digits, method.method(), &budget)?;
    let rec = SolveRecord {
        dimension: n,
        method: method.name().to_string(),
        digits,
        elimination: report.elimination.to_record(),
        non_bh_degree: report.non_bh_degree,
        tuples: report.tuples.iter().map(ParameterTuple::to_record).collect(),
        diagnostics: report.diagnostics,
    };
    if max_pairs.is_none() {
        cache.store(&key, &rec)?;
    }
    Ok(rec)
}

fn decode_tuples(rec: &SolveRecord) -> Result<Vec<ParameterTuple>, CliError> {
    Ok(rec.tuples.iter().map(ParameterTuple::from_record).collect::<Result<_, _>>()?)
}

pub fn run_solve<W: Write>(args: &SolveArgs, cache: &Cache, out: &mut W) -> Result<(), CliError> {
    ModelSpec::new(args.n)?;
    if args.digits < 20 {
        return Err(CliError::Usage(format!("--digits must be at least 20, got {}", args.digits)));
    }
    let rec = solved(args.n, args.digits, args.method, args.max_pairs, cache)?;
    let e = &rec.elimination;
    let degree = EliminationResult::from_record(e)?.degree();
    writeln!(
        out,
        "# N={} method={} digits={} eliminant in {} of degree {} (non-BH degree {}), {:?}",
        rec.dimension, rec.method, rec.digits, e.variable, degree, rec.non_bh_degree, e.provenance
    )?;
    for d in &rec.diagnostics {
        writeln!(out, "# {d}")?;
    }
    write_tuple_table(out, &decode_tuples(&rec)?, args.print_digits)?;
    Ok(())
}

fn is_solver_id(id: &str) -> bool {
    id.strip_prefix('t').is_some_and(|k| !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()))
}

/// Resolves a tuple id to at least `digits` digits, using cached solver output for `tK`.
pub fn resolve_tuple(n: usize, id: &str, digits: u32, cache: &Cache) -> Result<ParameterTuple, CliError> {
    let list = if is_solver_id(id) {
        Some(decode_tuples(&solved(n, digits, MethodArg::Auto, None, cache)?)?)
    } else {
        None
    };
    Ok(catalog::resolve(n, id, digits, list.as_deref())?)
}

pub fn run_verify<W: Write>(args: &VerifyArgs, cache: &Cache, out: &mut W) -> Result<(), CliError> {
    ModelSpec::new(args.n)?;
    let config = SweepConfig {
        ladder: args.ladder.clone(),
        trials: args.trials,
        seed: args.seed,
        structure: match args.structure {
            StructureArg::ComplexSymmetric => PerturbationStructure::ComplexSymmetric,
            StructureArg::DenseUnstructured => PerturbationStructure::DenseUnstructured,
        },
    };
    let tag = sha256_hex(&format!("{}|{}", args.tuple, serde_json::to_string(&config)?));
    let key = CacheKey::new(args.n, "1", &format!("verify.{}", &tag[..16]));
    let report: ConfluenceReport = match cache.load(&key) {
        Some(r) => r,
        None => {
            let report = if args.tuple == "split-demo" {
                if args.n != 6 {
                    return Err(CliError::Usage("split-demo is a 6x6 matrix; use N=6".into()));
                }
                precision_sweep_matrix(6, |_, d| split_block_matrix(d), &config)?
            } else {
                let top = config.ladder.iter().copied().max().unwrap_or(0);
                let tuple = resolve_tuple(args.n, &args.tuple, 2 * top + 20, cache)?;
                precision_sweep(&tuple, args.n, &config)?
            };
            cache.store(&key, &report)?;
            report
        }
    };
    match &args.csv {
        Some(path) => {
            let mut buf = Vec::new();
            write_verify_csv(&mut buf, &args.tuple, &report)?;
            fs::write(path, buf)?;
            write_rung_summary(out, &report)?;
        }
        None => write_verify_csv(&mut *out, &args.tuple, &report)?,
    }
    writeln!(out, "{}", report.verdict)?;
    Ok(())
}

fn family(n: usize, id: &str, digits: u32, cache: &Cache) -> Result<SpectralFamily, CliError> {
    if id == "split-demo" {
        return Err(CliError::Usage("split-demo has no secular family".into()));
    }
    let tuple = resolve_tuple(n, id, digits + 30, cache)?;
    Ok(SpectralFamily::new(n, &tuple, digits + 50)?)
}

pub fn run_sweep<W: Write>(args: &SweepArgs, cache: &Cache, out: &mut W) -> Result<(), CliError> {
    ModelSpec::new(args.n)?;
    if !(args.zmin < args.zmax) {
        return Err(CliError::Usage(format!("--zmin {} must be below --zmax {}", args.zmin, args.zmax)));
    }
    let fam = family(args.n, &args.tuple, args.digits, cache)?;
    let (samples, report) = fam.sweep(args.zmin, args.zmax, args.grid, args.digits)?;
    match &args.csv {
        Some(path) => {
            let mut buf = Vec::new();
            write_spectrum_csv(&mut buf, &samples)?;
            fs::write(path, buf)?;
        }
        None => write_spectrum_csv(&mut *out, &samples)?,
    }
    if let Some(path) = &args.plot {
        let title = format!("N={} tuple {}: Re s_k(z)", args.n, args.tuple);
        fs::write(path, render_svg(&samples, &report.boundaries, &title))?;
    }
    let ambiguous = samples.iter().filter(|s| s.ambiguous).count();
    if ambiguous > 0 {
        return Err(CliError::Numerical(format!(
            "{ambiguous} samples remain ambiguous after precision escalation (ambiguous=1 rows)"
        )));
    }
    Ok(())
}

fn parse_window(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("window `{text}` is not `lo..hi`"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn run_boundaries<W: Write>(args: &BoundaryArgs, cache: &Cache, out: &mut W) -> Result<(), CliError> {
    ModelSpec::new(args.n)?;
    let (lo, hi) = parse_window(&args.window)?;
    let fam = family(args.n, &args.tuple, args.digits, cache)?;
    let boundaries = fam.ep2_boundaries(lo, hi)?;
    write_boundary_table(out, &boundaries, 10)?;
    if boundaries.iter().any(|b| !b.certified) {
        writeln!(out, "# certified=no: z-polynomial built from numeric tuple values")?;
    }
    if args.census {
        let report = fam.interval_report(lo, hi, boundaries, args.digits)?;
        write_interval_table(out, &report)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_and_windows() {
        assert_eq!(parse_rational("1").unwrap(), Rational::from(1));
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::from((-3, 4)));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::from((-3, 2)));
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_window("-1000..1000").unwrap(), (-1000.0, 1000.0));
        assert!(parse_window("3..1").is_err());
        assert!(is_solver_id("t3") && !is_solver_id("t") && !is_solver_id("tx"));
    }
}
