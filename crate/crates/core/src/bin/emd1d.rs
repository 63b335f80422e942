use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num::BigRational;

use emd1d::emd::{emd_continuous_unit, emd_discrete, Composition, ProbVector};
use emd1d::expectation::{m_table, m_tilde, m_value, monte_carlo_mean_emd_batched, DEFAULT_BATCH};
use emd1d::genfun::{histogram, mean_emd_discrete, n_poly, w_poly};
use emd1d::graph::{
    build_emd_graph, earth_movers_graph, linspace, threshold_sweep, GraphReport, DEFAULT_EMG_CAP,
    DEFAULT_ISOPERIMETRIC_CAP,
};
use emd1d::ingest::{find_record, parse_distribution_csv, DistributionRecord};
use emd1d::numerics::TPoly;
use emd1d::render::{parse_rational, render_decimal, render_exact, render_float, render_fraction};

/// Exact one-dimensional Earth Mover's Distance toolkit.
#[derive(Debug, Parser)]
#[command(name = "emd1d", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmgFormat {
    Edges,
    Json,
}

fn parse_digits(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if (1..=50).contains(&d) => Ok(d),
        _ => Err(format!("`{s}` is not an integer in 1..=50")),
    }
}

fn parse_exact(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a number"))
}

fn parse_composition(s: &str) -> Result<Composition, String> {
    s.parse::<Composition>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// EMD between two distributions, inline or from a file.
    #[command(group(ArgGroup::new("source").required(true).args(["a", "input"])))]
    Pair {
        #[arg(long, requires = "b", value_parser = parse_composition)]
        a: Option<Composition>,
        #[arg(long, requires = "a", value_parser = parse_composition)]
        b: Option<Composition>,
        #[arg(long, requires_all = ["id_a", "id_b"])]
        input: Option<PathBuf>,
        #[arg(long)]
        id_a: Option<u64>,
        #[arg(long)]
        id_b: Option<u64>,
        /// Normalize to probability vectors and divide by `n - 1`.
        #[arg(long)]
        unit: bool,
        #[arg(long, default_value = "6", value_parser = parse_digits)]
        digits: usize,
        #[arg(long)]
        exact: bool,
    },
    /// Mean discrete EMD over `C(s,p) x C(s,q)`, or its limit `M_{p,q}`
    /// when `--s` is omitted.
    Mean {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long, default_value = "6", value_parser = parse_digits)]
        digits: usize,
        #[arg(long)]
        exact: bool,
    },
    /// The grid `M_{p,q}` for `p, q <= nmax`, or the unit-normalized row
    /// `M~_n` for `n = 2..=nmax` with `--tilde`.
    Mtable {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=200))]
        nmax: u64,
        #[arg(long, default_value = "4", value_parser = parse_digits)]
        digits: usize,
        #[arg(long)]
        tilde: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
    /// Exact histogram of distances over `C(s,n) x C(s,n)` as `value,count`.
    Hist {
        #[arg(long)]
        s: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Coefficients of the numerator polynomial `N_{p,q}(t)`.
    Npoly {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
    },
    /// Coefficients of the denominator-side polynomial `W_{p,q}(t)`.
    Wpoly {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
    },
    /// Monte Carlo estimate of the continuous expected EMD on the simplex.
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BATCH, value_parser = clap::value_parser!(u64).range(1..))]
        batch: u64,
    },
    /// Threshold graph analysis of a distribution file, as JSON.
    Graph {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_exact)]
        threshold: BigRational,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "6", value_parser = parse_digits)]
        digits: usize,
        #[arg(long, default_value_t = DEFAULT_ISOPERIMETRIC_CAP)]
        isoperimetric_cap: usize,
        /// Also write the edge list, one `u v` per line.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Component count over evenly spaced thresholds, as
    /// `threshold,component_count`.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_exact)]
        tmin: BigRational,
        #[arg(long, value_parser = parse_exact)]
        tmax: BigRational,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// The Earth Mover's Graph `G(s,n)`.
    Emg {
        #[arg(long)]
        s: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value = "edges")]
        format: EmgFormat,
        #[arg(long, default_value_t = DEFAULT_EMG_CAP)]
        cap: usize,
    },
}

type DataResult = Result<(), Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_line = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &command_line, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn number(x: &BigRational, digits: usize, exact: bool) -> String {
    if exact {
        render_fraction(x)
    } else {
        render_decimal(x, digits)
    }
}

fn load(path: &PathBuf, n: Option<usize>) -> Result<(Vec<DistributionRecord>, Vec<ProbVector>), Box<dyn std::error::Error>> {
    let records = parse_distribution_csv(path, n)?;
    let dists = records.iter().map(DistributionRecord::to_prob_vector).collect::<Result<Vec<_>, _>>()?;
    Ok((records, dists))
}

fn poly_csv(out: &mut impl Write, poly: &TPoly) -> DataResult {
    let coeffs = poly.integer_coeffs().ok_or("polynomial has non-integer coefficients")?;
    writeln!(out, "degree,coefficient")?;
    for (k, c) in coeffs.iter().enumerate() {
        writeln!(out, "{k},{c}")?;
    }
    Ok(())
}

fn run(command: Command, command_line: &str, out: &mut impl Write) -> DataResult {
    match command {
        Command::Pair { a, b, input, id_a, id_b, unit, digits, exact } => {
            let (a, b) = match (a, b, input) {
                (Some(a), Some(b), _) => (a, b),
                (_, _, Some(path)) => {
                    let records = parse_distribution_csv(&path, None)?;
                    let a = find_record(&records, id_a.expect("required by clap"))?;
                    let b = find_record(&records, id_b.expect("required by clap"))?;
                    (Composition::new(a.counts.clone()), Composition::new(b.counts.clone()))
                }
                _ => unreachable!("source group is required"),
            };
            if unit {
                let n = a.len().max(b.len());
                let pa = ProbVector::from_counts(&a.padded(n))?;
                let pb = ProbVector::from_counts(&b.padded(n))?;
                writeln!(out, "{}", number(&emd_continuous_unit(&pa, &pb)?, digits, exact))?;
            } else {
                writeln!(out, "{}", emd_discrete(&a, &b)?)?;
            }
        }
        Command::Mean { p, q, s, digits, exact } => {
            let (p, q) = (p as usize, q as usize);
            let value = match s {
                Some(s) => mean_emd_discrete(p, q, s)?,
                None => m_value(p, q),
            };
            writeln!(out, "{}", number(&value, digits, exact))?;
        }
        Command::Mtable { nmax, digits, tilde, format } => {
            let nmax = nmax as usize;
            if tilde {
                let row = (2..=nmax).map(m_tilde).collect::<Result<Vec<_>, _>>()?;
                match format {
                    TableFormat::Text => {
                        let cells: Vec<String> = row.iter().map(|x| render_decimal(x, digits)).collect();
                        writeln!(out, "{}", cells.join(" "))?;
                    }
                    TableFormat::Csv => {
                        writeln!(out, "n,value")?;
                        for (k, x) in row.iter().enumerate() {
                            writeln!(out, "{},{}", k + 2, render_decimal(x, digits))?;
                        }
                    }
                }
            } else {
                let table = m_table(nmax, nmax);
                match format {
                    TableFormat::Text => {
                        for row in table.chunks(nmax) {
                            let cells: Vec<String> = row.iter().map(|m| render_decimal(&m.value, digits)).collect();
                            writeln!(out, "{}", cells.join(" "))?;
                        }
                    }
                    TableFormat::Csv => {
                        writeln!(out, "p,q,value")?;
                        for m in &table {
                            writeln!(out, "{},{},{}", m.p, m.q, render_decimal(&m.value, digits))?;
                        }
                    }
                }
            }
        }
        Command::Hist { s, n } => {
            let h = histogram(s, n as usize)?;
            writeln!(out, "value,count")?;
            for (k, c) in h.counts.iter().enumerate() {
                writeln!(out, "{k},{c}")?;
            }
        }
        Command::Npoly { p, q } => poly_csv(out, &n_poly(p as usize, q as usize))?,
        Command::Wpoly { p, q } => poly_csv(out, &w_poly(p as usize, q as usize))?,
        Command::Sample { n, trials, seed, batch } => {
            let est = monte_carlo_mean_emd_batched(n as usize, trials, seed, batch)?;
            writeln!(out, "n,trials,seed,estimate,std_error")?;
            writeln!(
                out,
                "{n},{},{seed},{},{}",
                est.trials,
                render_float(est.estimate),
                render_float(est.std_error)
            )?;
        }
        Command::Graph { input, threshold, n, digits, isoperimetric_cap, edges } => {
            let (records, dists) = load(&input, n)?;
            let labels = records.iter().map(|r| r.label.clone()).collect();
            let g = build_emd_graph(&dists, &threshold)?.with_labels(labels)?;
            if let Some(path) = edges {
                std::fs::write(&path, g.edge_list())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            let report = GraphReport::build(&g, command_line, digits, isoperimetric_cap)?;
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Command::Sweep { input, tmin, tmax, steps, n } => {
            if tmax < tmin {
                return Err("--tmax must not be below --tmin".into());
            }
            let (_, dists) = load(&input, n)?;
            let thresholds = linspace(&tmin, &tmax, steps as usize);
            writeln!(out, "threshold,component_count")?;
            for (t, c) in threshold_sweep(&dists, &thresholds)? {
                writeln!(out, "{},{c}", render_exact(&t))?;
            }
        }
        Command::Emg { s, n, format, cap } => {
            let g = earth_movers_graph(s, n as usize, cap)?;
            match format {
                EmgFormat::Edges => write!(out, "{}", g.edge_list())?,
                EmgFormat::Json => {
                    let doc = serde_json::json!({
                        "meta": {
                            "tool": env!("CARGO_PKG_NAME"),
                            "version": env!("CARGO_PKG_VERSION"),
                            "command": command_line,
                        },
                        "vertices": g.vertex_count(),
                        "labels": g.labels(),
                        "edges": g.edges().into_iter().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
                        "max_degree": g.max_degree(),
                    });
                    serde_json::to_writer_pretty(&mut *out, &doc)?;
                    writeln!(out)?;
                }
            }
        }
    }
    Ok(())
}
