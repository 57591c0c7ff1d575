//! `plrs-gaps`: sequences, decompositions, gap tables and limit-law
//! diagnostics for positive linear recurrences from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! precondition errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use plrs_gaps::asymptotics::{moments_exact_series, recursive_vs_direct, write_moments_csv, MomentReport};
use plrs_gaps::format::{parse_decimal, write_jsonl, RowRecord, TableRecord};
use plrs_gaps::zeckendorf::{enumerate_interval, GapSelection};
use plrs_gaps::{
    analyze, build_table, decompose, evolve_statistic, gap_profile, validate_table, AsymptoticConstants, Plrs, Provenance, Row,
    Statistic, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(name = "plrs-gaps", version, about = "Gap statistics of generalized Zeckendorf decompositions")]
struct Cli {
    /// Machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print G_1..G_n.
    Seq {
        /// Coefficients c_1,...,c_L, e.g. 1,1.
        #[arg(long)]
        plrs: Plrs,
        #[arg(long)]
        n: usize,
    },
    /// Decompose M ≥ 1 into its digits, summand indices and gaps.
    Decompose {
        /// Coefficients c_1,...,c_L, e.g. 1,1.
        #[arg(long)]
        plrs: Plrs,
        m: String,
    },
    /// Dominant root λ₁ and the Binet constant.
    Spectral {
        /// Coefficients c_1,...,c_L, e.g. 1,1.
        #[arg(long)]
        plrs: Plrs,
    },
    /// Print the coefficient table of a gap or summand recurrence.
    Table(StatArgs),
    /// Brute-force the distribution on [G_n, G_{n+1}).
    Enumerate {
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long)]
        n: usize,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Seed with brute force, evolve to row n and write JSON lines.
    Evolve {
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long)]
        n: usize,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare evolved rows with brute force up to row `depth`.
    Verify {
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long, default_value_t = 25)]
        depth: usize,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Mean, variance and standardized moments for every row, as CSV.
    Moments {
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long)]
        n: usize,
        /// Highest central moment order.
        #[arg(long, default_value_t = 6)]
        mmax: usize,
        /// Use the moment recursion, checked against exact moments.
        #[arg(long)]
        recursive: bool,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limiting constants and line fits, as JSON.
    Constants {
        #[command(flatten)]
        stat: StatArgs,
        /// Last row of the fit window [n/4, n].
        #[arg(long, default_value_t = 400)]
        n: usize,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Moment and Kolmogorov–Smirnov diagnostics at evenly spaced rows, as CSV.
    Clt {
        #[command(flatten)]
        stat: StatArgs,
        #[arg(long)]
        n: usize,
        /// Highest central moment order.
        #[arg(long, default_value_t = 6)]
        mmax: usize,
        /// Checkpoints are the rows t·n/checkpoints for t = 1..=checkpoints.
        #[arg(long, default_value_t = 10)]
        checkpoints: usize,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constants for every (plrs, statistic) pair, one JSON line each, in
    /// input order.
    Sweep {
        /// Coefficients c_1,...,c_L; repeat for several recurrences.
        #[arg(long = "plrs", required = true)]
        plrs: Vec<Plrs>,
        /// Gap size; repeat for several.
        #[arg(long = "g")]
        gaps: Vec<usize>,
        #[arg(long)]
        sigma: bool,
        #[arg(long, default_value_t = 400)]
        n: usize,
        /// Most integers one brute-force interval may hold.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Args)]
struct StatArgs {
    /// Coefficients c_1,...,c_L, e.g. 1,1.
    #[arg(long)]
    plrs: Plrs,
    #[command(flatten)]
    choice: StatChoice,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StatChoice {
    /// Count gaps of this size.
    #[arg(long)]
    g: Option<usize>,
    /// Count summands.
    #[arg(long)]
    sigma: bool,
}

impl StatArgs {
    fn statistic(&self) -> Statistic {
        match self.choice.g {
            Some(g) => Statistic::Gap(g),
            None => Statistic::Summands,
        }
    }
}

/// A check ran and did not pass.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let verification = e.is::<VerificationFailed>()
                || matches!(e.downcast_ref::<plrs_gaps::Error>(), Some(plrs_gaps::Error::MomentDivergence { .. }));
            ExitCode::from(if verification { 1 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let json = cli.json;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Seq { plrs, n } => {
            let terms: Vec<String> = plrs.sequence(n).terms()[..n].iter().map(ToString::to_string).collect();
            if json {
                print_json(&mut out, &serde_json::json!({ "plrs": plrs, "terms": terms }))?;
            } else {
                writeln!(out, "{}", terms.join(" "))?;
            }
        }
        Command::Decompose { plrs, m } => {
            let value = parse_decimal(m.trim())?;
            let d = decompose(&value, &plrs)?;
            let indices = d.summand_indices();
            let gaps: Vec<usize> = indices.windows(2).map(|w| w[0] - w[1]).collect();
            let profile = gap_profile(&d);
            if json {
                let counts: Vec<(usize, u64)> = profile.gap_counts.into_iter().collect();
                print_json(
                    &mut out,
                    &serde_json::json!({
                        "plrs": plrs,
                        "m": value.to_string(),
                        "digits": d.digits(),
                        "indices": indices,
                        "gaps": gaps,
                        "gap_counts": counts,
                        "summands": profile.total_summands,
                    }),
                )?;
            } else {
                writeln!(out, "M = {value}")?;
                writeln!(out, "digits: {d}")?;
                writeln!(out, "indices: {}", join(&indices))?;
                writeln!(out, "gaps: {}", if gaps.is_empty() { "none".to_owned() } else { join(&gaps) })?;
                writeln!(out, "summands: {}", profile.total_summands)?;
            }
        }
        Command::Spectral { plrs } => {
            let s = plrs.dominant_root()?;
            if json {
                print_json(&mut out, &s)?;
            } else {
                writeln!(out, "lambda1 = {}", s.lambda1)?;
                writeln!(out, "binet_a1 = {}", s.binet_a1)?;
                writeln!(out, "residual = {:e}", s.residual)?;
            }
        }
        Command::Table(args) => {
            let table = build_table(&args.plrs, args.statistic())?;
            if json {
                print_json(&mut out, &TableRecord::from(&table))?;
            } else {
                writeln!(out, "i0 = {}, j0 = {}, n0 = {}, k0 = {}", table.i0(), table.j0(), table.n0(), table.k0())?;
                for (&(i, j), &t) in table.entries() {
                    writeln!(out, "t({i},{j}) = {t}")?;
                }
            }
        }
        Command::Enumerate { stat, n, budget } => {
            let s = stat.statistic();
            let counts = enumerate_interval(&stat.plrs, n, GapSelection::for_statistic(s), budget)?;
            let row = Row::new(counts.row_big(s).expect("statistic was tallied"), Provenance::Oracle);
            let record = RowRecord::new(&stat.plrs, s, n, &row);
            if json {
                print_json(&mut out, &record)?;
            } else {
                writeln!(out, "n = {n}, total = {}", counts.total())?;
                for (k, v) in record.row.iter().enumerate() {
                    writeln!(out, "{k} {v}")?;
                }
            }
        }
        Command::Evolve { stat, n, budget, out: path } => {
            let s = stat.statistic();
            let evolved = evolve_statistic(&stat.plrs, s, n, budget)?;
            let sink = open_output(path.as_deref(), out)?;
            write_jsonl(sink, &stat.plrs, s, &evolved.rows)?;
        }
        Command::Verify { stat, depth, budget } => {
            let table = build_table(&stat.plrs, stat.statistic())?;
            let report = validate_table(&table, &stat.plrs, depth, budget)?;
            if json {
                print_json(&mut out, &report)?;
            } else {
                writeln!(
                    out,
                    "{} ({}) {}: {} evolved rows checked against brute force, {} mismatches",
                    if report.passed() { "PASS" } else { "FAIL" },
                    stat.plrs,
                    stat.statistic(),
                    report.rows_checked,
                    report.mismatches.len()
                )?;
                for m in &report.mismatches {
                    writeln!(out, "  n = {}, k = {}: oracle {} vs evolved {}", m.n, m.k, m.oracle, m.evolved)?;
                }
            }
            if !report.passed() {
                return Err(VerificationFailed.into());
            }
        }
        Command::Moments { stat, n, mmax, recursive, budget, out: path } => {
            let evolved = evolve_statistic(&stat.plrs, stat.statistic(), n, budget)?;
            let report = if recursive {
                recursive_vs_direct(&evolved.table, &evolved.rows, mmax, n)?.0
            } else {
                moments_exact_series(&evolved.rows, evolved.rows.first_n(), n, mmax)?
            };
            write_moments_csv(open_output(path.as_deref(), out)?, &report)?;
        }
        Command::Constants { stat, n, budget } => {
            let s = stat.statistic();
            let constants = analyze(&stat.plrs, s, n, budget)?;
            print_json(&mut out, &ConstantsRecord { plrs: &stat.plrs, g: s, n, constants: &constants })?;
        }
        Command::Clt { stat, n, mmax, checkpoints, budget, out: path } => {
            anyhow::ensure!(checkpoints >= 1, "need at least one checkpoint");
            let evolved = evolve_statistic(&stat.plrs, stat.statistic(), n, budget)?;
            let first = evolved.rows.first_n();
            anyhow::ensure!(n >= first, "row {n} precedes the first row {first}");
            let full = moments_exact_series(&evolved.rows, first, n, mmax)?;
            let marks = checkpoint_rows(first, n, checkpoints);
            let report = MomentReport { mode: full.mode, rows: full.rows.into_iter().filter(|r| marks.contains(&r.n)).collect() };
            write_moments_csv(open_output(path.as_deref(), out)?, &report)?;
        }
        Command::Sweep { plrs, gaps, sigma, n, budget } => {
            let mut stats: Vec<Statistic> = gaps.into_iter().map(Statistic::Gap).collect();
            if sigma {
                stats.push(Statistic::Summands);
            }
            anyhow::ensure!(!stats.is_empty(), "pass at least one --g or --sigma");
            let jobs: Vec<(&Plrs, Statistic)> = plrs.iter().flat_map(|p| stats.iter().map(move |&s| (p, s))).collect();
            let results: Vec<_> = jobs.par_iter().map(|&(p, s)| analyze(p, s, n, budget)).collect();
            for (&(p, s), result) in jobs.iter().zip(results) {
                let line = match result {
                    Ok(constants) => serde_json::to_value(ConstantsRecord { plrs: p, g: s, n, constants: &constants })?,
                    Err(e) => serde_json::json!({ "plrs": p, "g": s, "n": n, "error": e.to_string() }),
                };
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstantsRecord<'a> {
    plrs: &'a Plrs,
    g: Statistic,
    n: usize,
    #[serde(flatten)]
    constants: &'a AsymptoticConstants,
}

/// The rows `t·last/count` for `t = 1..=count` that are at least `first`.
fn checkpoint_rows(first: usize, last: usize, count: usize) -> Vec<usize> {
    let mut marks: Vec<usize> = (1..=count).map(|t| last * t / count).filter(|&n| n >= first).collect();
    marks.dedup();
    marks
}

fn open_output<'a>(path: Option<&Path>, stdout: io::StdoutLock<'a>) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(stdout),
    })
}

fn print_json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints_end_at_last_row() {
        assert_eq!(checkpoint_rows(3, 500, 5), vec![100, 200, 300, 400, 500]);
        assert_eq!(checkpoint_rows(3, 5, 10), vec![3, 4, 5]);
        assert_eq!(checkpoint_rows(40, 100, 4), vec![50, 75, 100]);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
