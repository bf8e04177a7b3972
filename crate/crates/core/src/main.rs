use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mpdist::counting::{cover_bound, enumerate_separable_dichotomies, region_count_table};
use mpdist::dynamics::{find_cycle, trajectory_bits, BitStream};
use mpdist::experiments::{self, ExperimentConfig, ExperimentKind};
use mpdist::formats::{self, StreamFormat};
use mpdist::separability::separate;
use mpdist::{classify_multi, classify_single, BitVector, Dichotomy, MPSystem, MultiSampleInput, SingleStreamInput, Verdict};

#[derive(Parser)]
#[command(name = "mpdist", version, about = "McCulloch-Pitts stream generators and their distinguishers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify bits as `McCulloch-Pitts` or `random`.
    Distinguish {
        #[command(subcommand)]
        mode: DistinguishMode,
    },
    /// Decide separability of a dichotomy given as JSON.
    Separable {
        #[arg(long)]
        dichotomy: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Counting bounds and enumeration of separable dichotomies.
    Count {
        #[command(subcommand)]
        what: CountCommand,
    },
    /// Run a Monte Carlo experiment from a JSON config.
    Experiment(ExperimentArgs),
    /// Write the first t bits of a system's trajectory.
    Generate {
        #[arg(long)]
        system: PathBuf,
        /// Seed state as a 0/1 string, bit 1 leftmost.
        #[arg(long)]
        seed_state: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Report the tail and cycle length of a seed's orbit.
    Cycle {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        seed_state: String,
    },
}

#[derive(Subcommand)]
enum DistinguishMode {
    /// One stream of t > n bits.
    Single {
        #[arg(long)]
        n: usize,
        /// Stream file, or `-` for stdin.
        #[arg(long)]
        stream: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Several samples of n+1 bits, one per line.
    Multi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// 2·Σᵢ₌₀ⁿ C(m−1, i).
    Bound {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Count separable dichotomies of the points in a file (one per line).
    Enumerate {
        #[arg(long)]
        points: PathBuf,
    },
    /// Region-count table.
    Table {
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[arg(long)]
    config: PathBuf,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Sweep lengths `start:end[:step]` and print CSV.
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Packed,
}

impl From<FormatArg> for StreamFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => StreamFormat::Text,
            FormatArg::Packed => StreamFormat::Packed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Soundness,
    CompletenessSingle,
    CompletenessMulti,
    Collision,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Soundness => ExperimentKind::Soundness,
            KindArg::CompletenessSingle => ExperimentKind::CompletenessSingle,
            KindArg::CompletenessMulti => ExperimentKind::CompletenessMulti,
            KindArg::Collision => ExperimentKind::Collision,
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path == Path::new("-") {
        io::stdin().read_to_end(&mut buf)?;
    } else {
        buf = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(buf)
}

fn read_streams(path: &Path) -> Result<Vec<BitStream>> {
    let bytes = read_input(path)?;
    Ok(formats::read_text_streams(BufReader::new(bytes.as_slice()))
        .with_context(|| format!("parsing {}", path.display()))?)
}

fn read_single_stream(path: &Path, format: StreamFormat) -> Result<BitStream> {
    match format {
        StreamFormat::Packed => Ok(formats::unpack(&read_input(path)?)?),
        StreamFormat::Text => {
            let mut streams = read_streams(path)?;
            match streams.len() {
                1 => Ok(streams.remove(0)),
                0 => bail!("{}: no stream found", path.display()),
                k => bail!("{}: expected one stream, found {k} lines", path.display()),
            }
        }
    }
}

fn emit_verdict(verdict: &Verdict, witness: Option<&Path>) -> Result<()> {
    println!("{verdict}");
    if let (Some(path), Some(w)) = (witness, verdict.witness()) {
        fs::write(path, serde_json::to_string_pretty(w)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn parse_sweep(range: &str) -> Result<Vec<usize>> {
    let parts: Vec<usize> = range
        .split(':')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad sweep range {range:?}"))?;
    let (start, end, step) = match parts.as_slice() {
        [a, b] => (*a, *b, 1),
        [a, b, s] => (*a, *b, *s),
        _ => bail!("sweep range must be start:end or start:end:step"),
    };
    if step == 0 || start > end {
        bail!("empty sweep range {range:?}");
    }
    Ok((start..=end).step_by(step).collect())
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Distinguish { mode } => match mode {
            DistinguishMode::Single { n, stream, format, witness } => {
                let y = read_single_stream(&stream, format.into())?;
                let verdict = classify_single(&SingleStreamInput::new(n, y)?)?;
                emit_verdict(&verdict, witness.as_deref())?;
            }
            DistinguishMode::Multi { n, samples, witness } => {
                let samples = read_streams(&samples)?;
                let verdict = classify_multi(&MultiSampleInput::new(n, samples)?)?;
                emit_verdict(&verdict, witness.as_deref())?;
            }
        },
        Command::Separable { dichotomy, witness } => {
            let text = String::from_utf8(read_input(&dichotomy)?)?;
            let d: Dichotomy = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", dichotomy.display()))?;
            let verdict = match separate(&d) {
                Some(w) => Verdict::McCullochPitts(w),
                None => Verdict::Random,
            };
            println!("{}", if verdict.is_mcculloch_pitts() { "separable" } else { "inseparable" });
            if let (Some(path), Some(w)) = (witness, verdict.witness()) {
                fs::write(&path, serde_json::to_string_pretty(w)? + "\n")?;
            }
        }
        Command::Count { what } => match what {
            CountCommand::Bound { m, n } => println!("{}", cover_bound(m, n)?),
            CountCommand::Enumerate { points } => {
                let bytes = read_input(&points)?;
                let pts: BTreeSet<BitVector> = formats::read_points(BufReader::new(bytes.as_slice()))?
                    .into_iter()
                    .collect();
                let e = enumerate_separable_dichotomies(&pts)?;
                println!("{}", serde_json::to_string_pretty(&e.report)?);
            }
            CountCommand::Table { m_max, n_max, format } => {
                let t = region_count_table(m_max, n_max)?;
                match format {
                    TableFormat::Csv => print!("{}", t.to_csv()),
                    TableFormat::Json => println!("{}", t.to_json()),
                }
            }
        },
        Command::Experiment(args) => {
            let text = String::from_utf8(read_input(&args.config)?)?;
            let config = ExperimentConfig::from_json(&text)
                .with_context(|| format!("parsing {}", args.config.display()))?;
            let kind: ExperimentKind = args.kind.into();
            if let Some(range) = &args.sweep {
                print!("{}", experiments::sweep(kind, &config, &parse_sweep(range)?)?);
                return Ok(ExitCode::SUCCESS);
            }
            let report = experiments::run(kind, &config)?;
            if let Some(path) = &args.report {
                fs::write(path, report.to_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.summary());
            }
            if report.soundness_failure {
                eprintln!("soundness failure: a McCulloch-Pitts stream was classified as random");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Generate { system, seed_state, t, out, format } => {
            let text = String::from_utf8(read_input(&system)?)?;
            let s = MPSystem::from_json(&text).with_context(|| format!("parsing {}", system.display()))?;
            let x: BitVector = seed_state.parse()?;
            let y = trajectory_bits(&s, &x, t)?;
            let mut f = io::BufWriter::new(
                fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?,
            );
            match StreamFormat::from(format) {
                StreamFormat::Text => formats::write_text_streams(&mut f, std::slice::from_ref(&y))?,
                StreamFormat::Packed => f.write_all(&formats::pack(&y))?,
            }
            f.flush()?;
        }
        Command::Cycle { system, seed_state } => {
            let text = String::from_utf8(read_input(&system)?)?;
            let s = MPSystem::from_json(&text).with_context(|| format!("parsing {}", system.display()))?;
            let c = find_cycle(&s, &seed_state.parse()?)?;
            println!("tail_length {}\ncycle_length {}", c.tail_length, c.cycle_length);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
