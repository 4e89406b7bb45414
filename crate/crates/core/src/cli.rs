//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or domain error, 3 cap
//! exceeded, 4 invariant violation.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analytics::equidist::{box_discrepancy, build_sample_capped, weyl_table, Case};
use crate::analytics::euler::{constants, Constants};
use crate::analytics::{StatReport, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::{elliptic, quaternion};

#[derive(Parser, Debug)]
#[command(name = "hyperlab", version, about = "Angle statistics of lattice points in SL2(Z) and Γ(2,5)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Hard cap on the range parameter.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// SL2(Z) sums.
    #[command(subcommand)]
    Elliptic(EllipticCmd),
    /// Γ(2,5) sums.
    #[command(subcommand)]
    Hyperbolic(HyperbolicCmd),
    /// Σ N2(5n+1)Λ(n) over n ≡ residue mod 8.
    Titchmarsh {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        residue: u64,
    },
    /// Weyl sums and grid discrepancy of an angle sample.
    Equidist(EquidistArgs),
    /// Euler products and main-term constants.
    Constants {
        #[arg(long, default_value_t = crate::analytics::euler::DEFAULT_CUTOFF)]
        cutoff: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum EllipticCmd {
    /// #{γ : ν_H(γ) ≤ x} against 6x.
    Count {
        #[arg(long)]
        x: u64,
    },
    /// Σ_{p ≤ x} S_e(m1, m2, p − shift).
    Weyl {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m1: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m2: i64,
        #[arg(long, default_value_t = 2)]
        shift: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum HyperbolicCmd {
    /// Σ_{n ≤ x} S_h(0, 0, n).
    Count {
        #[arg(long)]
        x: u64,
    },
    /// Σ_{p ≤ x} S_h(m1, m2, p).
    Weyl {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m1: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m2: i64,
    },
    /// ψ_h(x) and π_h(x).
    Primes {
        #[arg(long)]
        x: u64,
    },
}

#[derive(Args, Debug)]
pub struct EquidistArgs {
    /// One of E, E_shifted, h, script_E, script_H.
    #[arg(long)]
    pub case: String,
    #[arg(long)]
    pub x: u64,
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    /// Keep only prime sizes.
    #[arg(long)]
    pub primes: bool,
    #[arg(long, default_value_t = 3)]
    pub max_freq: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylEntry {
    pub m1: i64,
    pub m2: i64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquidistReport {
    pub case: String,
    pub x: u64,
    pub primes_only: bool,
    pub sample_size: u64,
    pub grid: usize,
    pub box_discrepancy: f64,
    pub max_freq: i64,
    /// Largest normalized Weyl sum away from the zero frequency.
    pub max_weyl: f64,
    pub weyl: Vec<WeylEntry>,
}

#[derive(Serialize)]
struct EquidistCsvRow<'a> {
    case: &'a str,
    x: u64,
    primes_only: bool,
    sample_size: u64,
    grid: usize,
    box_discrepancy: f64,
    m1: i64,
    m2: i64,
    weyl: f64,
}

enum Output {
    Reports(Vec<StatReport>),
    Equidist(EquidistReport),
    Constants(Constants),
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => 2,
        Error::CapExceeded { .. } => 3,
        Error::Invariant(_) | Error::Cache(_) => 4,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let start = Instant::now();
    eprintln!("hyperlab: running on {} threads", pool.current_num_threads());
    let out = pool.install(|| compute(cli))?;
    eprintln!("hyperlab: done in {:.2}s", start.elapsed().as_secs_f64());
    match &cli.output {
        Some(path) => emit(&out, cli.format, File::create(path)?),
        None => emit(&out, cli.format, io::stdout().lock()),
    }
}

fn compute(cli: &Cli) -> Result<Output> {
    let cap = cli.cap;
    Ok(match &cli.command {
        Command::Elliptic(EllipticCmd::Count { x }) => Output::Reports(vec![elliptic::count_range_capped(*x, cap)?]),
        Command::Elliptic(EllipticCmd::Weyl { x, m1, m2, shift }) => {
            Output::Reports(vec![elliptic::prime_weyl_a_capped(*m1, *m2, *shift, *x, cap)?])
        }
        Command::Hyperbolic(HyperbolicCmd::Count { x }) => Output::Reports(vec![quaternion::count_range_h_capped(*x, cap)?]),
        Command::Hyperbolic(HyperbolicCmd::Weyl { x, m1, m2 }) => {
            Output::Reports(vec![quaternion::prime_weyl_b_capped(*m1, *m2, *x, cap)?])
        }
        Command::Hyperbolic(HyperbolicCmd::Primes { x }) => Output::Reports(vec![
            quaternion::psi_h_capped(*x, cap)?,
            quaternion::pi_h_capped(*x, cap)?,
        ]),
        Command::Titchmarsh { x, residue } => Output::Reports(vec![quaternion::titchmarsh_sum_capped(*x, *residue, cap)?]),
        Command::Equidist(a) => Output::Equidist(equidist(a, cap)?),
        Command::Constants { cutoff } => {
            let k = constants(*cutoff)?;
            if k.tail_bound > 1e-6 {
                eprintln!(
                    "warning: Euler-product tail bound {:.3e} at cutoff {} exceeds 1e-6; raise --cutoff",
                    k.tail_bound, cutoff
                );
            }
            Output::Constants(k)
        }
    })
}

fn equidist(a: &EquidistArgs, cap: u64) -> Result<EquidistReport> {
    let case: Case = a.case.parse()?;
    let sample = build_sample_capped(case, a.x, a.primes, cap)?;
    eprintln!("hyperlab: {} points", sample.len());
    let table = weyl_table(&sample, a.max_freq)?;
    let m = a.max_freq;
    let weyl = (-m..=m)
        .flat_map(|m1| (-m..=m).map(move |m2| (m1, m2)))
        .map(|(m1, m2)| WeylEntry { m1, m2, value: table.entry(m1, m2) })
        .collect();
    Ok(EquidistReport {
        case: case.name().to_string(),
        x: a.x,
        primes_only: a.primes,
        sample_size: sample.len() as u64,
        grid: a.grid,
        box_discrepancy: box_discrepancy(&sample, a.grid)?,
        max_freq: m,
        max_weyl: table.max_nonzero(),
        weyl,
    })
}

fn emit<W: Write>(out: &Output, format: Format, mut w: W) -> Result<()> {
    match (out, format) {
        (Output::Reports(rs), Format::Json) => {
            if let [r] = rs.as_slice() {
                writeln!(w, "{}", r.to_json()?)?;
            } else {
                writeln!(w, "{}", serde_json::to_string_pretty(rs)?)?;
            }
        }
        (Output::Reports(rs), Format::Csv) => StatReport::write_csv(rs, w)?,
        (Output::Reports(rs), Format::Table) => {
            for r in rs {
                writeln!(w, "mode                 {:?}", r.mode)?;
                writeln!(w, "range                [{}, {}]", r.x_lo, r.x_hi)?;
                writeln!(w, "count                {}", r.count)?;
                writeln!(w, "weighted_sum         {}", r.weighted_sum)?;
                writeln!(w, "complex_sum          {} {:+}i", r.complex_sum.re, r.complex_sum.im)?;
                writeln!(w, "reference_constant   {}", r.reference_constant)?;
                writeln!(w, "main_term            {} ({:?}, {:?})", r.main_term, r.scale, r.measure)?;
                writeln!(w, "ratio                {}", r.ratio)?;
                writeln!(w, "normalized_magnitude {}", r.normalized_magnitude)?;
                for (k, v) in &r.metadata {
                    writeln!(w, "  {k:<22} {v}")?;
                }
                writeln!(w)?;
            }
        }
        (Output::Equidist(e), Format::Json) => writeln!(w, "{}", serde_json::to_string_pretty(e)?)?,
        (Output::Equidist(e), Format::Csv) => {
            let mut wr = csv::Writer::from_writer(w);
            for entry in &e.weyl {
                wr.serialize(EquidistCsvRow {
                    case: &e.case,
                    x: e.x,
                    primes_only: e.primes_only,
                    sample_size: e.sample_size,
                    grid: e.grid,
                    box_discrepancy: e.box_discrepancy,
                    m1: entry.m1,
                    m2: entry.m2,
                    weyl: entry.value,
                })?;
            }
            wr.flush()?;
        }
        (Output::Equidist(e), Format::Table) => {
            writeln!(w, "case             {}", e.case)?;
            writeln!(w, "x                {}", e.x)?;
            writeln!(w, "primes_only      {}", e.primes_only)?;
            writeln!(w, "sample_size      {}", e.sample_size)?;
            writeln!(w, "box_discrepancy  {} (G = {})", e.box_discrepancy, e.grid)?;
            writeln!(w, "max_weyl         {}", e.max_weyl)?;
            write!(w, "m1\\m2")?;
            for m2 in -e.max_freq..=e.max_freq {
                write!(w, "{m2:>10}")?;
            }
            writeln!(w)?;
            let width = (2 * e.max_freq + 1) as usize;
            for row in e.weyl.chunks(width) {
                write!(w, "{:>5}", row[0].m1)?;
                for entry in row {
                    write!(w, "{:>10.6}", entry.value)?;
                }
                writeln!(w)?;
            }
        }
        (Output::Constants(k), Format::Json) => writeln!(w, "{}", serde_json::to_string_pretty(k)?)?,
        (Output::Constants(k), Format::Csv) => {
            let mut wr = csv::Writer::from_writer(w);
            wr.serialize(k)?;
            wr.flush()?;
        }
        (Output::Constants(k), Format::Table) => {
            writeln!(w, "cutoff                 {}", k.cutoff)?;
            writeln!(w, "log_eps                {}", k.log_eps)?;
            writeln!(w, "L(1, chi8)             {}", k.l1_chi8)?;
            writeln!(w, "chi4 product           {}", k.chi4_product)?;
            writeln!(w, "chi8 product (p != 5)  {}", k.chi8_product_without_5)?;
            writeln!(w, "tail bound             {:e}", k.tail_bound)?;
            writeln!(w, "K (8 pi chi4 product)  {}", k.k_elliptic_shifted)?;
            writeln!(w, "C                      {}", k.c)?;
            writeln!(w, "C'                     {}", k.c_prime)?;
            writeln!(w, "C / C'                 {}", k.c / k.c_prime)?;
            writeln!(w, "hyperbolic slope       {}", k.hyperbolic_count)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["hyperlab", "elliptic", "weyl", "--x", "100", "--m1", "-2", "--format", "json"]).unwrap();
        assert_eq!(cli.format, Format::Json);
        assert!(matches!(cli.command, Command::Elliptic(EllipticCmd::Weyl { m1: -2, shift: 2, .. })));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["hyperlab", "elliptic", "count", "--x", "1"]), 2);
        assert_eq!(run(["hyperlab", "bogus"]), 2);
        assert_eq!(run(["hyperlab", "elliptic", "count", "--x", "1000", "--cap", "10"]), 3);
        assert_eq!(run(["hyperlab", "equidist", "--case", "Q", "--x", "10"]), 2);
        assert_eq!(run(["hyperlab", "titchmarsh", "--x", "100", "--residue", "3"]), 2);
    }
}
