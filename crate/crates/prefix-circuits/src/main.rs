//! Command-line front end: tables, growth roots, circuit generation,
//! verification and brute-force oracles.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prefix_circuits::asymptotics;
use prefix_circuits::builder::{self, BuildSpec};
use prefix_circuits::circuit::Circuit;
use prefix_circuits::oracle::{self, SearchConfig};
use prefix_circuits::recurrence::{self, StarTable, WidthTable};

#[derive(Parser)]
#[command(name = "prefix-circuits", version, about = "zero-deficiency prefix circuit toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print the segment-sum table and width bounds per depth.
    Table {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_depth: u32,
        /// Also print the pair-width grid.
        #[arg(long)]
        pairs: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Isolate the dominant growth root and depth factor.
    Alpha {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
    /// Closed-form depth estimate log_alpha(n) next to the exact table depth.
    Estimate {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
    },
    /// Generate a zero-deficiency circuit.
    Gen {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        /// Target depth; defaults to the minimal constructive depth.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: GenFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a circuit file (or stdin) against the prefix contract.
    Verify {
        /// Circuit JSON; stdin when omitted or "-".
        file: Option<PathBuf>,
        #[arg(long)]
        k: u32,
        /// Count output designation against the fanout bound.
        #[arg(long)]
        count_output_fanout: bool,
    },
    /// Render a circuit file as Graphviz.
    Dot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimal-depth search at desk scale.
    Oracle {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_depth: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        // a closed pipe downstream (e.g. piping into head) is not an error
        Err(prefix_circuits::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> prefix_circuits::Result<ExitCode> {
    match command {
        Command::Table { k, max_depth, pairs, csv } => {
            print_table(k, max_depth, pairs, csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Alpha { k, tol } => {
            let root = asymptotics::alpha(k, tol)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "alpha={:.4} factor={:.4}", root.alpha, root.depth_factor)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate { k, n } => {
            let root = asymptotics::alpha(k, 1e-14)?;
            let estimate = asymptotics::depth_estimate(k, n, 1e-14)?;
            let exact = recurrence::min_depth(k, n)?;
            let mut out = std::io::stdout().lock();
            writeln!(
                out,
                "alpha={:.6} estimate={:.4} min_depth={exact}",
                root.alpha, estimate
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { k, n, depth, format, out } => {
            let spec = BuildSpec { k, n, depth };
            let circuit = builder::build_circuit(spec)?;
            if depth.is_none() && n >= 2 {
                let built = circuit.metrics().depth;
                let table = recurrence::min_depth(k, n)?;
                if built > table {
                    eprintln!(
                        "note: emitted depth {built}; the table bound {table} is not \
                         wirable under this fanout accounting"
                    );
                }
            }
            let text = match format {
                GenFormat::Json => circuit.to_json(),
                GenFormat::Dot => circuit.to_dot(),
            };
            emit(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, k, count_output_fanout } => {
            if k < 2 {
                return Err(prefix_circuits::Error::InvalidFanout(k));
            }
            let circuit = read_circuit(file)?;
            let report = circuit.verify_prefix()?;
            let mut out = std::io::stdout().lock();
            if let Some(f) = report.failures.first() {
                writeln!(
                    out,
                    "FAIL output={} found={} expected={}",
                    f.output, f.found, f.expected
                )?;
                return Ok(ExitCode::from(1));
            }
            let metrics = circuit.metrics_with(count_output_fanout);
            if metrics.max_fanout > k as usize {
                writeln!(
                    out,
                    "FAIL max_fanout={} exceeds k={k} (depth={} size={})",
                    metrics.max_fanout, metrics.depth, metrics.size
                )?;
                return Ok(ExitCode::from(1));
            }
            writeln!(
                out,
                "OK depth={} size={} deficiency={} max_fanout={}",
                metrics.depth, metrics.size, metrics.deficiency, metrics.max_fanout
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { file, out } => {
            let circuit = read_circuit(Some(file))?;
            emit(out, &circuit.to_dot())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { k, n, max_depth } => {
            let found = oracle::min_depth_exhaustive(SearchConfig { k, n, max_depth })?;
            let constructive = recurrence::min_depth(k, n as u64)?;
            let mut out = std::io::stdout().lock();
            match found {
                Some(depth) => {
                    writeln!(out, "exhaustive={depth} constructive={constructive}")?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    writeln!(out, "exhaustive=none constructive={constructive}")?;
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn print_table(k: u32, max_depth: u32, pairs: bool, csv: bool) -> prefix_circuits::Result<()> {
    let mut star = StarTable::new(k)?;
    let mut out = std::io::stdout().lock();
    if csv {
        writeln!(out, "D,w_star,bounds")?;
    } else {
        writeln!(out, "{:>4} {:>24} bounds", "D", "w_star")?;
    }
    for depth in 0..=max_depth {
        let value = star.value(depth);
        let bounds = if depth == 0 {
            "-".to_string()
        } else {
            let b = recurrence::circuit_width_bounds(k, depth)?;
            format!("({},{})", b.lower, b.upper)
        };
        if csv {
            writeln!(out, "{depth},{value},{bounds}")?;
        } else {
            writeln!(out, "{depth:>4} {value:>24} {bounds}")?;
        }
    }
    if pairs {
        let mut table = WidthTable::new(k)?;
        if csv {
            let header: Vec<String> = (0..=max_depth).map(|h| format!("h{h}")).collect();
            writeln!(out, "d\\h,{}", header.join(","))?;
            for d in 0..=max_depth {
                let row: Vec<String> =
                    (0..=max_depth).map(|h| table.get(d, h).to_string()).collect();
                writeln!(out, "{d},{}", row.join(","))?;
            }
        } else {
            writeln!(out, "pair widths w(d,h), rows d=0..{max_depth}")?;
            for d in 0..=max_depth {
                let row: Vec<String> =
                    (0..=max_depth).map(|h| table.get(d, h).to_string()).collect();
                writeln!(out, "{d:>4} {}", row.join(" "))?;
            }
        }
    }
    Ok(())
}

fn read_circuit(file: Option<PathBuf>) -> prefix_circuits::Result<Circuit> {
    let text = match file {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)?,
        _ => {
            let mut buffer = String::new();
            std::io::stdin().read_to_string(&mut buffer)?;
            buffer
        }
    };
    Circuit::from_json(&text)
}

fn emit(out: Option<PathBuf>, text: &str) -> prefix_circuits::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                writeln!(stdout)?;
            }
        }
    }
    Ok(())
}
