//! `dss`: generate, encode, bound, recognize and benchmark digital straight
//! segments from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage, 3 data format, 4 precision.

mod plot;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dss_core::benchmark::{
    build_bank_with, record_csv_line, run_bank, BankSpec, DELTAS, LENGTHS, NUMERATORS,
    RECORDS_HEADER,
};
use dss_core::bounds::{fit_boundary_lines, slope_bounds_at};
use dss_core::chaincode::{decode, encode};
use dss_core::gen::{basic_sets, generate_from_basic_set, generate_optimal, period_length, Dss};
use dss_core::geometry::{mu_series, GridPoint};
use dss_core::io::{
    detect_format, format_chain, format_points, parse_chain, parse_points, InputFormat,
};
use dss_core::recognizer::segment_with_trace;
use dss_core::{Error, ErrorClass, Rational};

#[derive(Parser, Debug)]
#[command(name = "dss", version, about = "Digital straight segment toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the points of a digital straight segment
    Generate(GenerateArgs),
    /// Convert a point list to a chain file
    Encode(ConvertArgs),
    /// Convert a chain file to a point list
    Decode(ConvertArgs),
    /// Per-distance slope bounds of a generated segment as CSV
    Bounds(BoundsArgs),
    /// Find the vertices of an 8-connected curve
    Recognize(RecognizeArgs),
    /// Score the recognizer on the two-segment benchmark bank
    Benchmark(BenchmarkArgs),
    /// Render a trace CSV as SVG
    Plot(PlotArgs),
    /// Write a seeded random polyline of optimal segments
    Walk(WalkArgs),
}

#[derive(Args, Debug)]
struct SegmentArgs {
    /// Slope in [0, 1] as p/q, an integer, or a decimal
    #[arg(long)]
    slope: Rational,
    /// Number of steps
    #[arg(long, conflicts_with = "periods")]
    length: Option<usize>,
    /// Number of whole periods
    #[arg(long)]
    periods: Option<usize>,
    /// `optimal` or `basic-set:K` (0-based)
    #[arg(long, default_value = "optimal")]
    variant: Variant,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    segment: SegmentArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    segment: SegmentArgs,
    /// Index of the anchor point
    #[arg(long, default_value_t = 0)]
    anchor: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Auto,
    Points,
    Chain,
}

#[derive(Args, Debug)]
struct RecognizeArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    /// Vertices CSV (stdout if omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Per-step envelope CSV
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    /// Angles in degrees, e.g. `1-45` or `1,10,45`
    #[arg(long, default_value = "1-45")]
    deltas: String,
    /// Segment lengths, e.g. `21-430`
    #[arg(long, default_value = "21-430")]
    lengths: String,
    /// First-segment slope numerators over 43
    #[arg(long, default_value = "0-43")]
    numerators: String,
    /// Per-case CSV
    #[arg(long)]
    records: Option<PathBuf>,
    /// Per-angle summary CSV (stdout if omitted)
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Per-angle and length-bucket CSV
    #[arg(long)]
    buckets: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of segments
    #[arg(long, default_value_t = 4)]
    segments: usize,
    /// Steps per segment
    #[arg(long, default_value_t = 40)]
    steps: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    Optimal,
    BasicSet(usize),
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "optimal" {
            return Ok(Variant::Optimal);
        }
        s.strip_prefix("basic-set:")
            .and_then(|k| k.parse().ok())
            .map(Variant::BasicSet)
            .ok_or_else(|| format!("expected `optimal` or `basic-set:K`, got {s:?}"))
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Precision(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Precision(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Precision(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e.class() {
            ErrorClass::Usage => CliError::Usage(msg),
            ErrorClass::DataFormat => CliError::Data(msg),
            ErrorClass::Precision => CliError::Precision(msg),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(CliError::Usage(format!(
            "{}: input file is empty",
            path.display()
        )));
    }
    Ok(text)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    let res = match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    res.map_err(CliError::Io)
}

fn build_segment(args: &SegmentArgs) -> CliResult<Dss> {
    let m = args.slope;
    let s = period_length(m);
    let steps = match (args.length, args.periods) {
        (Some(n), _) => n,
        (None, Some(p)) => p * s as usize,
        (None, None) => s as usize,
    };
    match args.variant {
        Variant::Optimal => Ok(generate_optimal(GridPoint::ORIGIN, m, steps)?),
        Variant::BasicSet(k) => {
            let sets = basic_sets(m)?;
            let bs = sets.get(k).ok_or(Error::VariantOutOfRange {
                index: k,
                period: s,
            })?;
            let periods = (steps as i64 + s - 1) / s;
            let mut d = generate_from_basic_set(bs, periods.max(1) as usize);
            d.points.truncate(steps + 1);
            Ok(d)
        }
    }
}

fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let d = build_segment(&args.segment)?;
    let chain = encode(&d.points)?;
    eprintln!("period: {}", period_length(args.segment.slope));
    eprintln!("chain: {}", chain.digits());
    write_output(args.output.as_deref(), &format_points(&d.points))
}

fn cmd_encode(args: &ConvertArgs) -> CliResult<()> {
    let pts = parse_points(&read_input(&args.input)?)?;
    write_output(args.output.as_deref(), &format_chain(&encode(&pts)?))
}

fn cmd_decode(args: &ConvertArgs) -> CliResult<()> {
    let chain = parse_chain(&read_input(&args.input)?)?;
    write_output(args.output.as_deref(), &format_points(&decode(&chain)?))
}

fn cmd_bounds(args: &BoundsArgs) -> CliResult<()> {
    let d = build_segment(&args.segment)?;
    if args.anchor + 1 >= d.points.len() {
        return Err(CliError::Usage(format!(
            "anchor {} needs a later point; segment has {} points",
            args.anchor,
            d.points.len()
        )));
    }
    let lines = fit_boundary_lines(&d)?;
    let anchor = d.points[args.anchor];
    let mut out = String::from("i,mu,lower,upper\n");
    for (i, mu) in mu_series(&d.points, args.anchor)?.values {
        let b = slope_bounds_at(&lines, anchor, i)?;
        writeln!(out, "{i},{mu},{},{}", b.lower, b.upper).unwrap();
    }
    write_output(args.output.as_deref(), &out)
}

fn cmd_recognize(args: &RecognizeArgs) -> CliResult<()> {
    let text = read_input(&args.input)?;
    let format = match args.format {
        FormatArg::Auto => detect_format(&text),
        FormatArg::Points => InputFormat::Points,
        FormatArg::Chain => InputFormat::Chain,
    };
    let points = match format {
        InputFormat::Points => parse_points(&text)?,
        InputFormat::Chain => decode(&parse_chain(&text)?)?,
    };
    let (result, trace) = segment_with_trace(&points)?;
    let mut out = String::from("index,x,y,cause\n");
    for v in &result.vertices {
        writeln!(
            out,
            "{},{},{},{}",
            v.index,
            v.point.x,
            v.point.y,
            v.cause.as_str()
        )
        .unwrap();
    }
    write_output(args.output.as_deref(), &out)?;
    if let Some(path) = &args.trace {
        let mut t = String::from("i,mu,l,u,one_over_i\n");
        for row in &trace {
            writeln!(
                t,
                "{},{},{},{},{}",
                row.i,
                row.mu,
                row.lower,
                row.upper,
                Rational::new(1, row.i)
            )
            .unwrap();
        }
        write_output(Some(path), &t)?;
    }
    Ok(())
}

/// Parses `a-b`, `a,b,c` or a mix such as `1-5,10`, keeping values in `range`.
fn parse_list<T>(s: &str, range: std::ops::RangeInclusive<T>, what: &str) -> CliResult<Vec<T>>
where
    T: Copy + TryInto<i64> + TryFrom<i64> + std::fmt::Display,
{
    let bad = || CliError::Usage(format!("bad {what} list {s:?}"));
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    let wide = |v: T| v.try_into().ok().unwrap_or(i64::MAX);
    let (lo, hi) = (wide(*range.start()), wide(*range.end()));
    let mut out = Vec::new();
    for part in s.split(',') {
        let (a, b) = match part.trim().split_once('-') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(part)?, num(part)?),
        };
        if a > b {
            return Err(bad());
        }
        if a < lo || b > hi {
            return Err(CliError::Usage(format!(
                "{what} list {s:?} leaves {}..={}",
                range.start(),
                range.end()
            )));
        }
        out.extend(a..=b);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out
        .into_iter()
        .map(|v| T::try_from(v).ok().expect("checked range"))
        .collect())
}

fn cmd_benchmark(args: &BenchmarkArgs) -> CliResult<()> {
    let spec = BankSpec {
        numerators: parse_list(&args.numerators, NUMERATORS, "numerator")?,
        deltas: parse_list(&args.deltas, DELTAS, "delta")?,
        lengths: parse_list(&args.lengths, LENGTHS, "length")?,
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        pool = pool.num_threads(j as usize);
    }
    let pool = pool.build().map_err(|e| CliError::Io(e.to_string()))?;
    let (bank, run) = pool.install(|| -> CliResult<_> {
        let bank = build_bank_with(spec)?;
        let run = run_bank(&bank, dss_core::recognizer::segment)?;
        Ok((bank, run))
    })?;
    eprintln!("{} cases scored", bank.len());

    if let Some(path) = &args.records {
        let mut out = String::with_capacity(bank.len() * 48);
        out.push_str(RECORDS_HEADER);
        out.push('\n');
        for rec in &run.records {
            out.push_str(&record_csv_line(&bank, rec));
            out.push('\n');
        }
        write_output(Some(path), &out)?;
    }
    if let Some(path) = &args.buckets {
        write_output(Some(path), &run.report.bucket_csv())?;
    }
    write_output(args.summary.as_deref(), &run.report.summary_csv())
}

fn cmd_plot(args: &PlotArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let trace = plot::parse_trace(&text).map_err(CliError::Data)?;
    write_output(args.output.as_deref(), &plot::render_svg(&trace))
}

/// Joins optimal segments with random slopes in random octants, each turning
/// away from the previous direction.
fn cmd_walk(args: &WalkArgs) -> CliResult<()> {
    if args.segments == 0 || args.steps == 0 {
        return Err(CliError::Usage(
            "segments and steps must be positive".into(),
        ));
    }
    let mut rng = StdRng::seed_from_u64(args.seed);
    let mut points = vec![GridPoint::ORIGIN];
    let mut octant = rng.gen_range(0..8u8);
    for _ in 0..args.segments {
        let s = rng.gen_range(1..=20i64);
        let m = Rational::new(rng.gen_range(0..=s), s);
        let seg = generate_optimal(GridPoint::ORIGIN, m, args.steps)?;
        let t = dss_core::geometry::OctantTransform::for_octant(octant);
        let start = *points.last().unwrap();
        points.extend(seg.points[1..].iter().map(|&p| {
            let q = t.apply(p);
            start.offset(q.x, q.y)
        }));
        octant = (octant + rng.gen_range(1..=2)) % 8;
    }
    write_output(args.output.as_deref(), &format_points(&points))
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Recognize(a) => cmd_recognize(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Walk(a) => cmd_walk(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
