//! The `perf-profile` command line: compute, plot, stats, run, compare.
//!
//! Commands validate all inputs before producing any output, write complete
//! documents only (never partial files), and exit 0 exactly when every
//! requested output was fully written. Errors print a one-line
//! machine-parseable `error[<category>]: ...` prefix followed by detail.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::harness::{run_benchmark, write_records_jsonl, HarnessConfig};
use crate::ingest::{
    filter_problems, parse_timing_csv, parse_timing_json, write_timing_csv, IngestPolicy,
    SubsetSelector,
};
use crate::plot::{export_steps, render_svg, PlotSpec, Scale};
use crate::profile::{compute_profiles, l1_distance, sup_distance, ProfileSet};
use crate::ratio::{compute_ratios, quartiles, RatioMatrix, RmPolicy};
use crate::table::TimingTable;

#[derive(Parser)]
#[command(
    name = "perf-profile",
    version,
    about = "Compute, compare, and plot performance profiles for solver benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Compute profiles from a timing table and emit profile JSON
    Compute(ComputeArgs),
    /// Render a timing table or profile JSON as an SVG step plot
    Plot(PlotArgs),
    /// Print win/success probabilities, ratio quartiles, and failure counts
    Stats(StatsArgs),
    /// Execute a benchmark described by a harness config file
    Run(RunArgs),
    /// Print L1 and sup distances between two profile JSON files
    Compare(CompareArgs),
}

/// Flags shared by every command that reads a timing table.
#[derive(Args)]
struct TableArgs {
    /// Timing table (CSV or JSON); `-` reads stdin
    #[arg(long, default_value = "-")]
    input: String,
    /// Problem subset: id list `p1,p2`, `prefix:P`, `glob:G`, or `tag:T`
    #[arg(long)]
    subset: Option<String>,
    /// Explicit r_M; must exceed every finite ratio
    #[arg(long)]
    rm: Option<f64>,
    /// Extra cell token treated as a failure (repeatable)
    #[arg(long = "failure-token")]
    failure_tokens: Vec<String>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Profile JSON destination; `-` writes stdout
    #[arg(long, default_value = "-")]
    output: String,
    /// Also write merged step data (CSV) here
    #[arg(long)]
    steps: Option<PathBuf>,
    /// Scale for the step data tau column
    #[arg(long, default_value = "linear")]
    scale: String,
}

#[derive(Args)]
struct PlotArgs {
    /// Timing table (CSV/JSON) or profile JSON; `-` reads stdin
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, default_value = "-")]
    output: String,
    /// x-axis scale: linear, log2, or log:<base>
    #[arg(long, default_value = "linear")]
    scale: String,
    /// Plot range LO:HI in plot coordinates (after the log transform)
    #[arg(long)]
    range: Option<String>,
    /// svg (figure) or csv (step data)
    #[arg(long, value_enum, default_value_t = OutputFormat::Svg)]
    format: OutputFormat,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Subset/r_M/failure-token flags applied when the input is a table
    #[arg(long)]
    subset: Option<String>,
    #[arg(long)]
    rm: Option<f64>,
    #[arg(long = "failure-token")]
    failure_tokens: Vec<String>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long, default_value = "-")]
    output: String,
    /// text (default) or json
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args)]
struct RunArgs {
    /// Harness configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Timing table destination (CSV); `-` writes stdout
    #[arg(long, default_value = "-")]
    output: String,
    /// Run-record log destination (JSON lines)
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// First profile JSON file
    a: PathBuf,
    /// Second profile JSON file
    b: PathBuf,
    /// Compare only this solver (default: all common solvers)
    #[arg(long)]
    solver: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Svg,
    Csv,
    Json,
    Text,
}

/// Parse argv and run one command, writing to the given streams. Returns
/// the process exit code.
pub fn dispatch<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, styled: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "error[usage]: invalid command line");
            let _ = write!(stderr, "{e}");
            return 2;
        }
    };
    let result = match cli.command {
        CliCommand::Compute(args) => cmd_compute(args, stdout),
        CliCommand::Plot(args) => cmd_plot(args, stdout),
        CliCommand::Stats(args) => cmd_stats(args, stdout, styled),
        CliCommand::Run(args) => cmd_run(args, stdout, stderr),
        CliCommand::Compare(args) => cmd_compare(args, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.category());
            1
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|source| Error::File {
            path: PathBuf::from(path),
            source,
        })
    }
}

fn write_output(path: &str, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    if path == "-" {
        stdout.write_all(bytes)?;
    } else {
        std::fs::write(path, bytes).map_err(|source| Error::File {
            path: PathBuf::from(path),
            source,
        })?;
    }
    Ok(())
}

fn build_policy(failure_tokens: &[String]) -> Result<IngestPolicy> {
    let mut policy = IngestPolicy::default();
    for token in failure_tokens {
        policy = policy.with_failure_token(token)?;
    }
    Ok(policy)
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn load_table(text: &str, policy: &IngestPolicy) -> Result<TimingTable> {
    if looks_like_json(text) {
        parse_timing_json(text, policy)
    } else {
        parse_timing_csv(text, policy)
    }
}

fn table_to_ratios(args: &TableArgs) -> Result<RatioMatrix> {
    let policy = build_policy(&args.failure_tokens)?;
    let mut table = load_table(&read_input(&args.input)?, &policy)?;
    if let Some(selector) = &args.subset {
        table = filter_problems(&table, &SubsetSelector::parse(selector))?;
    }
    let policy = args.rm.map_or(RmPolicy::Auto, RmPolicy::Explicit);
    compute_ratios(&table, policy)
}

fn parse_scale(text: &str) -> Result<Scale> {
    match text {
        "linear" => Ok(Scale::Linear),
        "log2" => Ok(Scale::Log(2.0)),
        other => {
            if let Some(base) = other.strip_prefix("log:") {
                let base: f64 = base
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad log base `{base}`")))?;
                Ok(Scale::Log(base))
            } else {
                Err(Error::InvalidArgument(format!(
                    "scale must be linear, log2, or log:<base>, got `{other}`"
                )))
            }
        }
    }
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let err = || Error::InvalidArgument(format!("range must be LO:HI, got `{text}`"));
    let (lo, hi) = text.split_once(':').ok_or_else(err)?;
    Ok((
        lo.trim().parse().map_err(|_| err())?,
        hi.trim().parse().map_err(|_| err())?,
    ))
}

fn cmd_compute(args: ComputeArgs, stdout: &mut dyn Write) -> Result<()> {
    let ratios = table_to_ratios(&args.table)?;
    let set = compute_profiles(&ratios)?;
    let mut json = set.to_json_string();
    json.push('\n');
    let steps = match &args.steps {
        Some(_) => {
            let spec = PlotSpec {
                scale: parse_scale(&args.scale)?,
                ..PlotSpec::default()
            };
            Some(export_steps(&set, &spec)?)
        }
        None => None,
    };
    write_output(&args.output, json.as_bytes(), stdout)?;
    if let (Some(path), Some(csv)) = (&args.steps, steps) {
        std::fs::write(path, csv).map_err(|source| Error::File {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

/// A plot input is either raw timings or an already-computed profile set.
fn load_plot_input(args: &PlotArgs) -> Result<ProfileSet> {
    let text = read_input(&args.input)?;
    let is_profile_json = looks_like_json(&text)
        && serde_json::from_str::<serde_json::Value>(&text)
            .map(|v| v.get("profiles").is_some())
            .unwrap_or(false);
    if is_profile_json {
        if args.subset.is_some() || args.rm.is_some() || !args.failure_tokens.is_empty() {
            return Err(Error::InvalidArgument(
                "--subset/--rm/--failure-token apply to timing tables, \
                 not profile JSON inputs"
                    .into(),
            ));
        }
        return ProfileSet::from_json_str(&text);
    }
    let policy = build_policy(&args.failure_tokens)?;
    let mut table = load_table(&text, &policy)?;
    if let Some(selector) = &args.subset {
        table = filter_problems(&table, &SubsetSelector::parse(selector))?;
    }
    let rm = args.rm.map_or(RmPolicy::Auto, RmPolicy::Explicit);
    compute_profiles(&compute_ratios(&table, rm)?)
}

fn cmd_plot(args: PlotArgs, stdout: &mut dyn Write) -> Result<()> {
    let set = load_plot_input(&args)?;
    let mut spec = PlotSpec {
        scale: parse_scale(&args.scale)?,
        ..PlotSpec::default()
    };
    if let Some(range) = &args.range {
        spec.tau_range = Some(parse_range(range)?);
    }
    if let Some(title) = &args.title {
        spec.title = title.clone();
    }
    if let Some(width) = args.width {
        spec.width = width;
    }
    if let Some(height) = args.height {
        spec.height = height;
    }
    let bytes = match args.format {
        OutputFormat::Svg => render_svg(&set, &spec)?,
        OutputFormat::Csv => export_steps(&set, &spec)?,
        _ => {
            return Err(Error::InvalidArgument(
                "plot emits --format svg or csv".into(),
            ))
        }
    };
    write_output(&args.output, bytes.as_bytes(), stdout)
}

#[derive(serde::Serialize)]
struct SolverStats {
    solver: String,
    win_probability: f64,
    success_probability: f64,
    min: Option<f64>,
    q1: Option<f64>,
    median: Option<f64>,
    q3: Option<f64>,
    max: Option<f64>,
    failures: usize,
}

fn cmd_stats(args: StatsArgs, stdout: &mut dyn Write, styled: bool) -> Result<()> {
    let ratios = table_to_ratios(&args.table)?;
    let set = compute_profiles(&ratios)?;
    let rows: Vec<SolverStats> = set
        .profiles()
        .iter()
        .map(|profile| {
            let q = quartiles(&ratios, profile.solver())?;
            let f = q.summary;
            Ok(SolverStats {
                solver: profile.solver().to_string(),
                win_probability: profile.win_probability(),
                success_probability: profile.success_probability(),
                min: f.map(|f| f.min),
                q1: f.map(|f| f.q1),
                median: f.map(|f| f.median),
                q3: f.map(|f| f.q3),
                max: f.map(|f| f.max),
                failures: q.failures,
            })
        })
        .collect::<Result<_>>()?;

    let text = match args.format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "n_p": set.n_problems(),
                "r_m": set.r_m(),
                "solvers": rows,
            });
            let mut t = serde_json::to_string_pretty(&doc)?;
            t.push('\n');
            t
        }
        OutputFormat::Text => render_stats_table(&set, &rows, styled && args.output == "-"),
        _ => {
            return Err(Error::InvalidArgument(
                "stats emits --format text or json".into(),
            ))
        }
    };
    write_output(&args.output, text.as_bytes(), stdout)
}

fn render_stats_table(set: &ProfileSet, rows: &[SolverStats], styled: bool) -> String {
    let num = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    let header = [
        "solver", "win", "success", "min", "q1", "median", "q3", "max", "failures",
    ];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        cells.push(vec![
            r.solver.clone(),
            format!("{:.3}", r.win_probability),
            format!("{:.3}", r.success_probability),
            num(r.min),
            num(r.q1),
            num(r.median),
            num(r.q3),
            num(r.max),
            r.failures.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap())
        .collect();

    let mut out = format!("n_p = {}, r_M = {}\n", set.n_problems(), set.r_m());
    for (i, row) in cells.iter().enumerate() {
        let line = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        let line = line.trim_end();
        if i == 0 && styled {
            out.push_str(&format!("\x1b[1m{line}\x1b[0m\n"));
        } else {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

fn cmd_run(args: RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let config = HarnessConfig::load(&args.config)?;
    let run = run_benchmark(&config)?;
    let failures = run
        .records
        .iter()
        .filter(|r| r.status != crate::harness::RunStatus::Success)
        .count();
    let _ = writeln!(
        stderr,
        "completed {} runs ({} non-success) over {} problems x {} solvers",
        run.records.len(),
        failures,
        config.problems.len(),
        config.solvers.len()
    );
    let csv = write_timing_csv(&run.table);
    write_output(&args.output, csv.as_bytes(), stdout)?;
    if let Some(path) = &args.records {
        std::fs::write(path, write_records_jsonl(&run.records)).map_err(|source| Error::File {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

fn load_profiles(path: &Path) -> Result<ProfileSet> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    ProfileSet::from_json_str(&text)
}

fn cmd_compare(args: CompareArgs, stdout: &mut dyn Write) -> Result<()> {
    let a = load_profiles(&args.a)?;
    let b = load_profiles(&args.b)?;

    let pairs: Vec<(String, &crate::profile::Profile, &crate::profile::Profile)> =
        if let Some(solver) = &args.solver {
            vec![(solver.clone(), a.get(solver)?, b.get(solver)?)]
        } else {
            let common: Vec<String> = a
                .solvers()
                .filter(|s| b.get(s).is_ok())
                .map(str::to_string)
                .collect();
            if !common.is_empty() {
                common
                    .into_iter()
                    .map(|s| {
                        let pa = a.get(&s).unwrap();
                        let pb = b.get(&s).unwrap();
                        (s, pa, pb)
                    })
                    .collect()
            } else if a.profiles().len() == 1 && b.profiles().len() == 1 {
                let (pa, pb) = (&a.profiles()[0], &b.profiles()[0]);
                vec![(format!("{}/{}", pa.solver(), pb.solver()), pa, pb)]
            } else {
                return Err(Error::InvalidArgument(
                    "profiles share no solver names; use --solver".into(),
                ));
            }
        };

    let upper = a.r_m().max(b.r_m());
    let mut lines = Vec::new();
    for (name, pa, pb) in pairs {
        let l1 = l1_distance(pa, pb, upper)?;
        let sup = sup_distance(pa, pb)?;
        lines.push((name, l1, sup));
    }

    match args.format {
        OutputFormat::Json => {
            let doc: Vec<serde_json::Value> = lines
                .iter()
                .map(|(name, l1, sup)| {
                    serde_json::json!({
                        "solver": name,
                        "l1_distance": l1,
                        "sup_distance": sup,
                    })
                })
                .collect();
            writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        OutputFormat::Text => {
            for (name, l1, sup) in &lines {
                writeln!(stdout, "{name}: l1_distance = {l1}, sup_distance = {sup}")?;
            }
        }
        _ => {
            return Err(Error::InvalidArgument(
                "compare emits --format text or json".into(),
            ))
        }
    }
    Ok(())
}
