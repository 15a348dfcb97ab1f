use std::error::Error as StdError;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ellgw_core::cache::write_f_cache;
use ellgw_core::exactnum::{format_rat, parse_rat, sigma, Rat};
use ellgw_core::lattice::{enumerate_sublattices, partition_moduli};
use ellgw_core::local::{FiberKind, LocalGwTable, Method};
use ellgw_core::series::SurfaceSeries;
use ellgw_core::surface::{gw0_series, load_spec};
use ellgw_core::taubes::{gr_series_closed_side, gr_series_gw_side, required_trunc, solve_F};
use ellgw_core::verify::run_suite;

type CliResult<T> = Result<T, Box<dyn StdError>>;

/// Exact local Gromov–Witten invariants of elliptic fibers and the
/// generating series of elliptic surfaces.
#[derive(Parser)]
#[command(name = "ellgw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum of divisors of a rational argument (0 unless a positive integer).
    Sigma {
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Index-d sublattices of Z+iZ, optionally split into M+/M- for multiplicity m.
    Sublattices {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Table of local invariants for d = 1..=dmax.
    LocalGw {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Multiplicity m (multiple fibers) or weight n (regular fibers).
        #[arg(long)]
        m: u64,
        #[arg(long)]
        dmax: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Dimension-zero GW generating series of a surface.
    Gw0 {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        bound: String,
        /// Sum coefficients by total t-degree instead of listing fiber classes.
        #[arg(long)]
        collapsed: bool,
    },
    /// Gromov-Taubes (= Seiberg-Witten) series of a surface.
    Gr {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        bound: String,
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
    },
    /// Run an invariant suite: lattice, local, series, taubes or all.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Write the coefficients of log F to a cache file.
    Cache {
        #[arg(long = "write-F", value_name = "TRUNC")]
        write_f: u64,
        #[arg(long)]
        path: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Regular,
    Multiple,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Assembly,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Gw,
    Closed,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a consistency check failed.
fn run(command: Command) -> CliResult<bool> {
    let mut out = io::stdout().lock();
    match command {
        Command::Sigma { d } => {
            writeln!(out, "{}", sigma(&parse_rat(&d)?))?;
        }
        Command::Sublattices { d, m, json } => match m {
            None => {
                let all = enumerate_sublattices(d)?;
                if json {
                    writeln!(out, "{}", serde_json::to_string_pretty(&all)?)?;
                } else {
                    for l in &all {
                        writeln!(out, "a={} b={} k={}", l.a, l.b, l.k)?;
                    }
                }
            }
            Some(m) => {
                let part = partition_moduli(m, d)?;
                if json {
                    writeln!(out, "{}", serde_json::to_string_pretty(&part)?)?;
                } else {
                    for (sign, set) in [('+', &part.plus), ('-', &part.minus)] {
                        for l in set {
                            writeln!(out, "{sign} a={} b={} k={}", l.a, l.b, l.k)?;
                        }
                    }
                    writeln!(
                        out,
                        "# |M+| = {}, |M-| = {}",
                        part.plus.len(),
                        part.minus.len()
                    )?;
                }
            }
        },
        Command::LocalGw {
            kind,
            m,
            dmax,
            method,
            csv,
            json,
        } => {
            let kind = match kind {
                Kind::Regular => FiberKind::regular(m)?,
                Kind::Multiple => FiberKind::multiple(m)?,
            };
            let table = match method {
                MethodArg::Closed => LocalGwTable::build(kind, dmax, Method::Closed)?,
                MethodArg::Assembly => LocalGwTable::build(kind, dmax, Method::Assembly)?,
                MethodArg::Both => {
                    let closed = LocalGwTable::build(kind, dmax, Method::Closed)?;
                    let assembled = LocalGwTable::build(kind, dmax, Method::Assembly)?;
                    let bad = closed.disagreements(&assembled);
                    if !bad.is_empty() {
                        for (kind, d) in bad {
                            eprintln!(
                                "mismatch {kind} d={d}: closed {} vs assembly {}",
                                closed.get(kind, d).map_or("-".into(), format_rat),
                                assembled.get(kind, d).map_or("-".into(), format_rat),
                            );
                        }
                        return Ok(false);
                    }
                    closed
                }
            };
            let rows = table.rows();
            if csv {
                let mut w = csv::Writer::from_writer(&mut out);
                for row in &rows {
                    w.serialize(row)?;
                }
                w.flush()?;
            } else if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            } else {
                writeln!(out, "# GW_1^loc({kind}, d)")?;
                for row in &rows {
                    writeln!(out, "{:>6}  {}", row.d, format_rat(&row.value))?;
                }
            }
        }
        Command::Gw0 {
            spec,
            bound,
            collapsed,
        } => {
            let spec = load_spec(&spec)?;
            let series = gw0_series(&spec, &parse_bound(&bound)?)?;
            print_series(&mut out, &series, collapsed)?;
        }
        Command::Gr { spec, bound, side } => {
            let spec = load_spec(&spec)?;
            let bound = parse_bound(&bound)?;
            let gw = || gr_series_gw_side(&spec, &bound, required_trunc(&spec, &bound));
            match side {
                Side::Gw => print_series(&mut out, &gw()?, false)?,
                Side::Closed => {
                    print_series(&mut out, &gr_series_closed_side(&spec, &bound)?, false)?
                }
                Side::Both => {
                    let gw = gw()?;
                    let closed = gr_series_closed_side(&spec, &bound)?;
                    if gw != closed {
                        eprintln!("gw side:     {}", gw.display());
                        eprintln!("closed side: {}", closed.display());
                        return Ok(false);
                    }
                    print_series(&mut out, &closed, false)?;
                }
            }
        }
        Command::Verify { suite } => {
            let report = run_suite(&suite)?;
            write!(out, "{report}")?;
            return Ok(report.passed());
        }
        Command::Cache { write_f, path } => {
            write_f_cache(&solve_F(write_f)?, &path)?;
            writeln!(out, "wrote {} coefficients to {}", write_f, path.display())?;
        }
    }
    Ok(true)
}

fn parse_bound(s: &str) -> CliResult<Rat> {
    let bound = parse_rat(s)?;
    if bound < Rat::from_integer(0.into()) {
        return Err(format!("bound must be >= 0, got {s}").into());
    }
    Ok(bound)
}

fn print_series(out: &mut impl Write, series: &SurfaceSeries, collapsed: bool) -> CliResult<()> {
    if collapsed {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&series.collapsed_terms())?
        )?;
    } else {
        writeln!(out, "{}", series.to_json())?;
    }
    Ok(())
}
