//! Command-line front end. Every subcommand emits a flat table as CSV or
//! JSON (an array of objects with the same field names).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{criterion_for_2, criterion_for_l, inverse_half_sums, Classifier};
use crate::cyclotomic::Jet;
use crate::error::Error;
use crate::jacobi::{cubic_partition_for, euler_cubic_table, jacobi_sum, normalized_jacobi, verify_generator_product, CubicBranch};
use crate::modp::{is_prime, residue, PrimeContext};
use crate::oracle::ind_class_oracle;
use crate::symbol::check_eisenstein_with;
use crate::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "cyclores", version, about = "Euler's criterion of prime order l via Jacobi sums")]
pub struct Cli {
    /// Seed for the randomized factorization of Φ_l mod q.
    #[arg(long, global = true, env = "CYCLORES_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Orders {
    #[arg(long)]
    pub l: u64,
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the primitive root γ and α = γ^((p-1)/l).
    Context(Orders),
    /// Print the coefficients of J(i, j) with its jet and norm checks.
    Jacobi {
        #[command(flatten)]
        orders: Orders,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        j: i64,
    },
    /// Classify D by its index class mod l, alongside the mod-p oracle.
    Classify {
        #[command(flatten)]
        orders: Orders,
        #[arg(long = "d", allow_hyphen_values = true)]
        d: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        d_list: Vec<i64>,
    },
    /// The cubic partition 4p = L² + 27M² and the Euler-cubic branch table.
    Partition3 {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5", allow_hyphen_values = true)]
        d_list: Vec<i64>,
    },
    /// Run every identity and criterion check for one context.
    Verify(Orders),
    /// List primes l with Σ_{i ≤ (l-1)/2} i⁻¹ ≡ 0 mod l.
    ScanConjecture {
        #[arg(long)]
        max: u64,
        /// Emit S for every prime, not only the zeros.
        #[arg(long)]
        verbose: bool,
    },
    /// Batch classification over a range of primes p ≡ 1 mod l.
    Table {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        d_list: Vec<i64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// One classified D. `match` ⇔ `ind_class` = `oracle_class`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub p: u64,
    pub l: u64,
    pub gamma: u64,
    #[serde(rename = "D")]
    pub d: i64,
    pub t: u64,
    #[serde(rename = "S")]
    pub s: u64,
    pub ind_class: Option<u64>,
    pub oracle_class: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Serialize)]
struct ContextRecord {
    l: u64,
    p: u64,
    gamma: u64,
    alpha: u64,
}

#[derive(Debug, Serialize)]
struct JacobiRecord {
    l: u64,
    p: u64,
    i: i64,
    j: i64,
    coeffs: String,
    jet_b: u64,
    jet_c: u64,
    jet_ok: bool,
    norm_ok: bool,
}

#[derive(Debug, Serialize)]
struct PartitionRecord {
    p: u64,
    #[serde(rename = "L")]
    big_l: i64,
    #[serde(rename = "M")]
    big_m: i64,
    #[serde(rename = "D")]
    d: i64,
    power: u64,
    plus: u64,
    minus: u64,
    branch: String,
}

#[derive(Debug, Serialize)]
struct CheckRecord {
    check: String,
    passed: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct ScanRecord {
    l: u64,
    #[serde(rename = "S")]
    s: u64,
}

/// Failure of a command, with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::Unsupported(_) | Error::SharedFactor { .. } => 2,
            Error::NotDivisible | Error::Internal(_) => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

/// Serializes `records` in the requested format.
pub fn write_records<T: Serialize, W: Write>(records: &[T], format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Parses argv, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let seed = cli.seed;
    let format = cli.format;
    match &cli.command {
        Command::Context(o) => {
            let ctx = PrimeContext::new(o.l, o.p)?;
            let rec = ContextRecord {
                l: ctx.l(),
                p: ctx.p(),
                gamma: ctx.gamma(),
                alpha: ctx.alpha(),
            };
            write_records(&[rec], format, out)?;
            Ok(0)
        }
        Command::Jacobi { orders, i, j } => {
            let ctx = PrimeContext::new(orders.l, orders.p)?;
            let sum = jacobi_sum(&ctx, *i, *j);
            let jet = sum.one_jet();
            let coeffs = sum
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let rec = JacobiRecord {
                l: ctx.l(),
                p: ctx.p(),
                i: *i,
                j: *j,
                coeffs,
                jet_b: jet.b,
                jet_c: jet.c,
                jet_ok: jet == (Jet { b: ctx.l() - 1, c: 0 }),
                norm_ok: (&sum * &sum.conj()).as_rational() == Some(BigInt::from(ctx.p())),
            };
            write_records(&[rec], format, out)?;
            Ok(0)
        }
        Command::Classify { orders, d, d_list } => {
            let ctx = PrimeContext::new(orders.l, orders.p)?;
            let ds: Vec<i64> = d.iter().chain(d_list).copied().collect();
            if ds.is_empty() {
                return Err(CliError {
                    code: 2,
                    message: "no D given (use --d or --d-list)".into(),
                });
            }
            let records = classify_records(&ctx, &ds, seed, false)?;
            write_records(&records, format, out)?;
            Ok(if records.iter().all(|r| r.matches) { 0 } else { 1 })
        }
        Command::Partition3 { p, d_list } => {
            let ctx = PrimeContext::new(3, *p)?;
            let part = cubic_partition_for(&ctx)?;
            let mut rows = Vec::new();
            for &d in d_list {
                let r = euler_cubic_table(&ctx, d)?;
                rows.push(PartitionRecord {
                    p: *p,
                    big_l: part.l,
                    big_m: part.m.abs(),
                    d,
                    power: r.power,
                    plus: r.plus,
                    minus: r.minus,
                    branch: branch_name(r.branch).into(),
                });
            }
            write_records(&rows, format, out)?;
            Ok(if rows.iter().all(|r| r.branch != "none") { 0 } else { 1 })
        }
        Command::Verify(o) => {
            let ctx = PrimeContext::new(o.l, o.p)?;
            let checks = verify_checks(&ctx, seed);
            write_records(&checks, format, out)?;
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
        }
        Command::ScanConjecture { max, verbose } => {
            if *max < 3 {
                return Err(Error::invalid("--max must be at least 3").into());
            }
            let rows: Vec<ScanRecord> = inverse_half_sums(*max)
                .into_iter()
                .filter(|&(_, s)| *verbose || s == 0)
                .map(|(l, s)| ScanRecord { l, s })
                .collect();
            write_records(&rows, format, out)?;
            Ok(0)
        }
        Command::Table {
            l,
            p_min,
            p_max,
            d_list,
            output,
        } => {
            let records = table_records(*l, *p_min, *p_max, d_list, seed)?;
            match output {
                Some(path) => write_records(&records, format, File::create(path)?)?,
                None => write_records(&records, format, out)?,
            }
            Ok(if records.iter().all(|r| r.matches) { 0 } else { 1 })
        }
    }
}

fn branch_name(b: CubicBranch) -> &'static str {
    match b {
        CubicBranch::Residue => "residue",
        CubicBranch::Plus => "plus",
        CubicBranch::Minus => "minus",
        CubicBranch::NoMatch => "none",
    }
}

/// Records for each D; with `skip_invalid`, D sharing a factor with l·p is
/// dropped instead of rejected.
pub fn classify_records(
    ctx: &PrimeContext,
    ds: &[i64],
    seed: u64,
    skip_invalid: bool,
) -> Result<Vec<OutputRecord>, Error> {
    let classifier = Classifier::new(ctx, seed)?;
    let mut out = Vec::with_capacity(ds.len());
    for &d in ds {
        if skip_invalid && (d == 0 || residue(d, ctx.l()) == 0 || residue(d, ctx.p()) == 0) {
            continue;
        }
        let c = classifier.classify(d)?;
        let oracle_class = ind_class_oracle(ctx, d)?;
        out.push(OutputRecord {
            p: ctx.p(),
            l: ctx.l(),
            gamma: ctx.gamma(),
            d,
            t: c.t,
            s: c.s,
            ind_class: c.ind_class,
            oracle_class,
            matches: c.ind_class == Some(oracle_class),
        });
    }
    Ok(out)
}

/// Records for every prime p ∈ [p_min, p_max] with p ≡ 1 mod l, ordered by
/// (p, position in `ds`).
pub fn table_records(l: u64, p_min: u64, p_max: u64, ds: &[i64], seed: u64) -> Result<Vec<OutputRecord>, Error> {
    if l < 3 || !is_prime(l) {
        return Err(Error::invalid(format!("l = {l} must be an odd prime")));
    }
    let primes: Vec<u64> = (p_min.max(2)..=p_max)
        .filter(|&p| p % l == 1 && is_prime(p))
        .collect();
    let chunks = primes
        .par_iter()
        .map(|&p| {
            let ctx = PrimeContext::new(l, p)?;
            classify_records(&ctx, ds, seed, true)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn verify_checks(ctx: &PrimeContext, seed: u64) -> Vec<CheckRecord> {
    let l = ctx.l();
    let p = ctx.p();
    let mut checks = Vec::new();
    let mut push = |check: &str, passed: bool, detail: String| {
        checks.push(CheckRecord {
            check: check.into(),
            passed,
            detail,
        })
    };

    let j = jacobi_sum(ctx, 1, 1);
    let jet = j.one_jet();
    push(
        "jacobi_jet",
        jet == (Jet { b: l - 1, c: 0 }),
        format!("J(1,1) = {j}; jet ({}, {})", jet.b, jet.c),
    );
    let jj = (&j * &j.conj()).as_rational();
    push(
        "jacobi_norm",
        jj == Some(BigInt::from(p)),
        format!("J·conj(J) = {}", jj.map_or("non-rational".to_string(), |n| n.to_string())),
    );

    match verify_generator_product(ctx) {
        Ok(r) => push(
            "generator_product",
            r.holds,
            format!("K = {}; sign {}; product {}", r.generator, r.sign, r.product),
        ),
        Err(Error::Unsupported(msg)) => push("generator_product", true, format!("skipped: {msg}")),
        Err(e) => push("generator_product", false, e.to_string()),
    }

    match normalized_jacobi(ctx) {
        Ok(theta) => {
            let mut failures = Vec::new();
            let mut count = 0;
            for d in (2..=50i64).filter(|&d| is_prime(d as u64) && d as u64 != l && d as u64 != p) {
                count += 1;
                match check_eisenstein_with(ctx, &theta, d, seed) {
                    Ok(r) if r.holds => {}
                    Ok(r) => failures.push(format!("D={d}: {:?} vs {:?}", r.left, r.right)),
                    Err(e) => failures.push(format!("D={d}: {e}")),
                }
            }
            push(
                "eisenstein",
                failures.is_empty(),
                if failures.is_empty() {
                    format!("{count} primes D ≤ 50 agree")
                } else {
                    failures.join("; ")
                },
            );
            let ds: Vec<i64> = (2..=50).collect();
            match classify_records(ctx, &ds, seed, true) {
                Ok(records) => {
                    let bad: Vec<String> = records
                        .iter()
                        .filter(|r| !r.matches)
                        .map(|r| r.d.to_string())
                        .collect();
                    push(
                        "classify_vs_oracle",
                        bad.is_empty(),
                        if bad.is_empty() {
                            format!("{} values of D agree", records.len())
                        } else {
                            format!("mismatch at D = {}", bad.join(" "))
                        },
                    );
                }
                Err(e) => push("classify_vs_oracle", false, e.to_string()),
            }
        }
        Err(e) => push("eisenstein", false, e.to_string()),
    }

    for (name, report) in [("criterion_l", criterion_for_l(ctx)), ("criterion_2", criterion_for_2(ctx))] {
        match report {
            Ok(r) => push(
                name,
                r.agrees,
                format!(
                    "residue={} index_one={} oracle_class={}",
                    r.is_residue, r.index_one, r.oracle_class
                ),
            ),
            Err(e) => push(name, false, e.to_string()),
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["cyclores"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_worked_example() {
        let (code, out, _) = run_str(&["classify", "--l", "3", "--p", "7", "--d", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "p,l,gamma,D,t,S,ind_class,oracle_class,match\n7,3,3,2,2,1,2,2,true\n");
    }

    #[test]
    fn classify_rejects_bad_d() {
        let (code, _, err) = run_str(&["classify", "--l", "3", "--p", "7", "--d", "21"]);
        assert_eq!(code, 2);
        assert!(err.contains("coprime"));
        let (code, _, _) = run_str(&["classify", "--l", "3", "--p", "7"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn context_and_bad_args() {
        let (code, out, _) = run_str(&["context", "--l", "5", "--p", "31"]);
        assert_eq!(code, 0);
        assert_eq!(out, "l,p,gamma,alpha\n5,31,3,16\n");
        let (code, _, err) = run_str(&["context", "--l", "3", "--p", "5"]);
        assert_eq!(code, 2);
        assert!(err.contains("not congruent to 1"));
        let (code, _, _) = run_str(&["context", "--l", "3"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn jacobi_output() {
        let (code, out, _) = run_str(&["jacobi", "--l", "3", "--p", "7"]);
        assert_eq!(code, 0);
        assert_eq!(out, "l,p,i,j,coeffs,jet_b,jet_c,jet_ok,norm_ok\n3,7,1,1,-2 1,2,0,true,true\n");
    }

    #[test]
    fn scan_outputs() {
        let (code, out, _) = run_str(&["scan-conjecture", "--max", "100"]);
        assert_eq!((code, out.as_str()), (0, ""));
        let (_, out, _) = run_str(&["scan-conjecture", "--max", "1100"]);
        assert_eq!(out, "l,S\n1093,0\n");
        let (_, out, _) = run_str(&["scan-conjecture", "--max", "7", "--verbose", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 3);
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = run_str(&["verify", "--l", "3", "--p", "7"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = run_str(&["verify", "--l", "13", "--p", "53"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("skipped"));
    }

    #[test]
    fn partition3_table() {
        let (code, out, _) = run_str(&["partition3", "--p", "7"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "p,L,M,D,power,plus,minus,branch");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("7,1,1,2,4,"));
    }

    #[test]
    fn seed_from_environment_or_flag() {
        let cli = Cli::try_parse_from(["cyclores", "--seed", "42", "context", "--l", "3", "--p", "7"]).unwrap();
        assert_eq!(cli.seed, 42);
        let cli = Cli::try_parse_from(["cyclores", "context", "--l", "3", "--p", "7"]).unwrap();
        assert_eq!(cli.format, Format::Csv);
    }
}
