//! The `burstlab` command line.
//!
//! Subcommands mirror the pipeline stages so each is independently
//! scriptable: `ingest`, `trains`, `lv`, `null`, `synth`, `analyze`,
//! `export`. `analyze` is the one-shot composition and writes a
//! `manifest.json` that reproduces the run byte for byte.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
//! `BURSTLAB_THREADS` caps worker parallelism (default: available cores).

mod config;
mod output;
mod pipeline;

pub use config::{RunConfig, ZDenominatorChoice};
pub use pipeline::{run_pipeline, FamilyReport, PipelineError, RunReport};

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::ingest::UserId;
use crate::ingest::{load_log, Channel, EventLog, IngestOptions, LogSummary, Window};
use crate::localvar::{analyze_trains, local_variation_train, ExcludedTrain, FreqMode, LvRecord};
use crate::nullmodel::{
    gen_gamma, gen_poisson, permute_null, CountPreservation, NullOptions, PermutationScope, Seed,
};
use crate::stats::BinScheme;
use crate::trains::{build_trains, Role};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> CliError {
        match err {
            PipelineError::Output { .. } => CliError::Internal(err.to_string()),
            _ => CliError::Data(err.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> CliError {
        CliError::Internal(err.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "burstlab",
    version,
    about = "Spike-train statistics for directed interaction logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Ingestion knobs shared by every log-reading subcommand.
#[derive(Args, Debug, Clone)]
struct IngestArgs {
    /// Observation window as two inclusive epoch seconds.
    #[arg(long, num_args = 2, value_names = ["START", "END"])]
    window: Option<Vec<i64>>,
    /// Which input column is the acting user.
    #[arg(long, default_value_t)]
    direction: crate::ingest::DirectionConvention,
    /// Keep or drop events where who == whom.
    #[arg(long = "self", default_value_t)]
    self_policy: crate::ingest::SelfPolicy,
    /// Fail on the first malformed line instead of skip-and-count.
    #[arg(long)]
    strict: bool,
}

impl IngestArgs {
    fn to_options(&self) -> IngestOptions {
        let window = match self.window.as_deref() {
            Some([start, end]) => Window::new(*start, *end),
            _ => Window::default(),
        };
        IngestOptions {
            window,
            direction: self.direction,
            self_policy: self.self_policy,
            strict: self.strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SynthKind {
    Poisson,
    Gamma,
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynthKind::Poisson => "poisson",
            SynthKind::Gamma => "gamma",
        })
    }
}

impl FromStr for SynthKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "poisson" => Ok(SynthKind::Poisson),
            "gamma" => Ok(SynthKind::Gamma),
            other => Err(format!(
                "unknown generator `{other}` (expected poisson|gamma)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExportFormat {
    Gnuplot,
    Json,
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Gnuplot => "gnuplot",
            ExportFormat::Json => "json",
        })
    }
}

impl FromStr for ExportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gnuplot" => Ok(ExportFormat::Gnuplot),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format `{other}` (expected gnuplot|json)")),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse, validate, and summarize an event log (JSON to stdout).
    Ingest {
        file: PathBuf,
        #[command(flatten)]
        ingest: IngestArgs,
    },
    /// Build per-user spike trains for one (role, channel) family.
    Trains {
        file: PathBuf,
        #[command(flatten)]
        ingest: IngestArgs,
        #[arg(long)]
        role: Role,
        #[arg(long)]
        channel: Channel,
        /// Write per-train counts as CSV.
        #[arg(long, value_name = "FILE")]
        dump: Option<PathBuf>,
        /// Write per-train timestamps (pre-dedup) as CSV.
        #[arg(long, value_name = "FILE")]
        timestamps: Option<PathBuf>,
        /// Count spikes before or after the one-second dedup.
        #[arg(long, default_value_t)]
        freq: FreqMode,
    },
    /// Local variation per train (CSV).
    Lv {
        file: PathBuf,
        #[command(flatten)]
        ingest: IngestArgs,
        #[arg(long)]
        role: Role,
        #[arg(long)]
        channel: Channel,
        #[arg(long, default_value_t)]
        freq: FreqMode,
        /// Output file (default: stdout).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Local variation of permutation-null trains (CSV).
    Null {
        file: PathBuf,
        #[command(flatten)]
        ingest: IngestArgs,
        #[arg(long)]
        role: Role,
        #[arg(long)]
        channel: Channel,
        #[arg(long)]
        seed: Seed,
        #[arg(long, default_value_t)]
        scope: PermutationScope,
        #[arg(long, default_value_t)]
        preserve: CountPreservation,
        #[arg(long, default_value_t)]
        freq: FreqMode,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Seeded renewal-train generator (CSV, same schema as lv).
    Synth {
        /// poisson or gamma.
        kind: SynthKind,
        /// Spikes per train.
        #[arg(long)]
        n: usize,
        /// Event rate in events/second.
        #[arg(long)]
        rate: f64,
        /// Gamma shape; required for gamma trains.
        #[arg(long)]
        shape: Option<f64>,
        #[arg(long)]
        seed: Seed,
        /// Number of trains; train i uses seed + i.
        #[arg(long, default_value_t = 1)]
        trains: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Full analysis: all selected train families, class summaries, Zipf,
    /// z-values, correlations, optional null model; writes CSV/JSON files.
    Analyze {
        file: Option<PathBuf>,
        #[command(flatten)]
        ingest: IngestArgs,
        /// Explicit class edges in f units, comma separated (overrides the
        /// log-width scheme).
        #[arg(long, value_delimiter = ',', value_name = "EDGES")]
        bins: Option<Vec<f64>>,
        /// Class width in log10 f.
        #[arg(long, default_value_t = 0.25)]
        bin_width: f64,
        /// First class edge in f units.
        #[arg(long, default_value_t = 3.0)]
        bin_start: f64,
        /// Lv histogram bin width.
        #[arg(long, default_value_t = 0.1)]
        lv_hist_width: f64,
        #[arg(long, default_value_t)]
        freq: FreqMode,
        /// Which sqrt(f) reading the z-values report.
        #[arg(long, default_value_t)]
        z_denominator: ZDenominatorChoice,
        /// Roles to analyze.
        #[arg(long, value_delimiter = ',', default_values_t = Role::BOTH)]
        roles: Vec<Role>,
        /// Channels to analyze.
        #[arg(long, value_delimiter = ',', default_values_t = Channel::ANALYSIS_CHANNELS)]
        channels: Vec<Channel>,
        /// Permutation-null seeds; empty skips the null pass.
        #[arg(long, value_delimiter = ',')]
        null_seeds: Vec<u64>,
        #[arg(long, default_value_t)]
        null_scope: PermutationScope,
        #[arg(long, default_value_t)]
        null_preserve: CountPreservation,
        /// Run from a saved manifest instead of flags.
        #[arg(long, value_name = "FILE", conflicts_with = "file")]
        manifest: Option<PathBuf>,
        /// Output directory.
        #[arg(long, default_value = "burstlab_out")]
        out: PathBuf,
    },
    /// Re-emit analyze outputs as plot-ready tables.
    Export {
        /// Directory holding an analyze run.
        #[arg(long, value_name = "DIR")]
        from: PathBuf,
        #[arg(long)]
        format: ExportFormat,
        /// Output directory (default: FROM/export).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn configure_threads() {
    if let Ok(threads) = std::env::var("BURSTLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

/// Parse arguments, dispatch, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {}", err.message());
            let report = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.message() }
            });
            eprintln!("{report}");
            err.exit_code()
        }
    }
}

fn open_log(path: &Path, options: &IngestOptions) -> Result<(EventLog, LogSummary), CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open input `{}`: {e}", path.display())))?;
    let (log, summary) =
        load_log(BufReader::new(file), options).map_err(|e| CliError::Data(e.to_string()))?;
    Ok((log, summary))
}

fn out_or_stdout(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                CliError::Internal(format!("cannot create `{}`: {e}", path.display()))
            })?;
            Ok(Box::new(file))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest { file, ingest } => {
            let (_, summary) = open_log(&file, &ingest.to_options())?;
            let stdout = io::stdout().lock();
            serde_json::to_writer_pretty(stdout, &summary)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            println!();
            Ok(())
        }
        Command::Trains {
            file,
            ingest,
            role,
            channel,
            dump,
            timestamps,
            freq,
        } => cmd_trains(&file, &ingest, role, channel, dump, timestamps, freq),
        Command::Lv {
            file,
            ingest,
            role,
            channel,
            freq,
            out,
        } => {
            let (log, _) = open_log(&file, &ingest.to_options())?;
            let analysis = analyze_trains(build_trains(&log, role, channel), role, channel, freq);
            let w = out_or_stdout(out.as_deref())?;
            output::write_lv_rows(
                w,
                &role.to_string(),
                &channel.to_string(),
                &analysis.records,
                &analysis.excluded,
            )
            .map_err(|e| CliError::Internal(e.to_string()))
        }
        Command::Null {
            file,
            ingest,
            role,
            channel,
            seed,
            scope,
            preserve,
            freq,
            out,
        } => {
            let (log, _) = open_log(&file, &ingest.to_options())?;
            let options = NullOptions {
                seed,
                scope,
                preservation: preserve,
            };
            let permuted = permute_null(&log, role, channel, &options);
            let analysis = analyze_trains(permuted, role, channel, freq);
            let w = out_or_stdout(out.as_deref())?;
            output::write_lv_rows(
                w,
                &role.to_string(),
                &channel.to_string(),
                &analysis.records,
                &analysis.excluded,
            )
            .map_err(|e| CliError::Internal(e.to_string()))
        }
        Command::Synth {
            kind,
            n,
            rate,
            shape,
            seed,
            trains,
            out,
        } => cmd_synth(kind, n, rate, shape, seed, trains, out),
        Command::Analyze {
            file,
            ingest,
            bins,
            bin_width,
            bin_start,
            lv_hist_width,
            freq,
            z_denominator,
            roles,
            channels,
            null_seeds,
            null_scope,
            null_preserve,
            manifest,
            out,
        } => {
            let config = match manifest {
                Some(path) => {
                    let file = File::open(&path).map_err(|e| {
                        CliError::Data(format!("cannot open manifest `{}`: {e}", path.display()))
                    })?;
                    serde_json::from_reader(BufReader::new(file)).map_err(|e| {
                        CliError::Data(format!("invalid manifest `{}`: {e}", path.display()))
                    })?
                }
                None => {
                    let input = file.ok_or_else(|| {
                        CliError::Usage("an input file or --manifest is required".into())
                    })?;
                    let options = ingest.to_options();
                    RunConfig {
                        input,
                        window: options.window,
                        direction: options.direction,
                        self_policy: options.self_policy,
                        strict: options.strict,
                        roles,
                        channels,
                        bins: match bins {
                            Some(edges) => BinScheme::Explicit(edges),
                            None => BinScheme::Log {
                                width: bin_width,
                                start: bin_start,
                            },
                        },
                        lv_hist_width,
                        freq_mode: freq,
                        z_denominator,
                        null_seeds,
                        null_scope,
                        null_preservation: null_preserve,
                    }
                }
            };
            let report = run_pipeline(&config, &out)?;
            let stdout = io::stdout().lock();
            serde_json::to_writer_pretty(stdout, &report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            println!();
            Ok(())
        }
        Command::Export { from, format, out } => {
            let out = out.unwrap_or_else(|| from.join("export"));
            export::run(&from, &out, format)
        }
    }
}

fn cmd_trains(
    file: &Path,
    ingest: &IngestArgs,
    role: Role,
    channel: Channel,
    dump: Option<PathBuf>,
    timestamps: Option<PathBuf>,
    freq: FreqMode,
) -> Result<(), CliError> {
    let (log, _) = open_log(file, &ingest.to_options())?;
    let trains = build_trains(&log, role, channel);

    if let Some(path) = &timestamps {
        let file = File::create(path)
            .map_err(|e| CliError::Internal(format!("cannot create `{}`: {e}", path.display())))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["user_id", "role", "channel", "t"])
            .map_err(|e| CliError::Internal(e.to_string()))?;
        for (user, train) in &trains {
            for t in train.times() {
                w.write_record([
                    user.to_string(),
                    role.to_string(),
                    channel.to_string(),
                    output::fmt_f64(*t),
                ])
                .map_err(|e| CliError::Internal(e.to_string()))?;
            }
        }
        w.flush().map_err(|e| CliError::Internal(e.to_string()))?;
    }

    let counts: Vec<(UserId, u64)> = trains
        .iter()
        .map(|(user, train)| {
            let n = match freq {
                FreqMode::PreDedup => train.n(),
                FreqMode::PostDedup => train.clone().dedup_one_second().n(),
            };
            (*user, n)
        })
        .collect();

    if let Some(path) = &dump {
        let file = File::create(path)
            .map_err(|e| CliError::Internal(format!("cannot create `{}`: {e}", path.display())))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["user_id", "role", "channel", "n_spikes"])
            .map_err(|e| CliError::Internal(e.to_string()))?;
        for (user, n) in &counts {
            w.write_record([
                user.to_string(),
                role.to_string(),
                channel.to_string(),
                n.to_string(),
            ])
            .map_err(|e| CliError::Internal(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Internal(e.to_string()))?;
    }

    let report = serde_json::json!({
        "role": role.to_string(),
        "channel": channel.to_string(),
        "trains": counts.len(),
        "total_spikes": counts.iter().map(|(_, n)| n).sum::<u64>(),
    });
    println!("{report:#}");
    Ok(())
}

fn cmd_synth(
    kind: SynthKind,
    n: usize,
    rate: f64,
    shape: Option<f64>,
    seed: Seed,
    trains: u64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if kind == SynthKind::Gamma && shape.is_none() {
        return Err(CliError::Usage("gamma trains require --shape".into()));
    }
    let mut records: Vec<LvRecord> = Vec::new();
    let mut excluded: Vec<ExcludedTrain> = Vec::new();
    for i in 0..trains {
        let train_seed = Seed(seed.0.wrapping_add(i));
        let train = match kind {
            SynthKind::Poisson => gen_poisson(rate, n, train_seed),
            SynthKind::Gamma => gen_gamma(shape.unwrap(), rate, n, train_seed),
        }
        .map_err(|e| CliError::Data(e.to_string()))?;
        let deduped = train.dedup_one_second();
        let user = UserId(i);
        match local_variation_train(&deduped) {
            Ok(lv) => records.push(LvRecord {
                user,
                n: deduped.n(),
                lv,
            }),
            Err(reason) => excluded.push(ExcludedTrain {
                user,
                n: deduped.n(),
                reason,
            }),
        }
    }
    let w = out_or_stdout(out.as_deref())?;
    output::write_lv_rows(w, "synth", &kind.to_string(), &records, &excluded)
        .map_err(|e| CliError::Internal(e.to_string()))
}

mod export {
    //! Plot-ready re-emission of an analyze run.

    use std::collections::BTreeMap;
    use std::fs::{self, File};
    use std::io::Write;
    use std::path::Path;

    use super::{CliError, ExportFormat};

    type Rows = Vec<Vec<String>>;

    fn read_csv(dir: &Path, name: &str) -> Result<(Vec<String>, Rows), CliError> {
        let path = dir.join(name);
        let file = File::open(&path)
            .map_err(|e| CliError::Data(format!("cannot open `{}`: {e}", path.display())))?;
        let mut reader = csv::Reader::from_reader(file);
        let header = reader
            .headers()
            .map_err(|e| CliError::Data(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| CliError::Data(e.to_string()))?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Ok((header, rows))
    }

    /// Group rows by the values of the given columns, preserving first-seen
    /// order.
    fn group_by(rows: &Rows, columns: &[usize]) -> Vec<(Vec<String>, Rows)> {
        let mut order: Vec<Vec<String>> = Vec::new();
        let mut groups: BTreeMap<Vec<String>, Rows> = BTreeMap::new();
        for row in rows {
            let key: Vec<String> = columns.iter().map(|&c| row[c].clone()).collect();
            if !groups.contains_key(&key) {
                order.push(key.clone());
            }
            groups.entry(key).or_default().push(row.clone());
        }
        order
            .into_iter()
            .map(|key| {
                let rows = groups[&key].clone();
                (key, rows)
            })
            .collect()
    }

    fn write_dat(out: &Path, name: &str, comment: &str, lines: &[String]) -> Result<(), CliError> {
        let path = out.join(name);
        let mut file = File::create(&path)
            .map_err(|e| CliError::Internal(format!("cannot create `{}`: {e}", path.display())))?;
        writeln!(file, "# {comment}").map_err(CliError::from)?;
        for line in lines {
            writeln!(file, "{line}").map_err(CliError::from)?;
        }
        Ok(())
    }

    fn gnuplot(from: &Path, out: &Path) -> Result<(), CliError> {
        // rank-frequency tables, one file per train family
        let (_, zipf) = read_csv(from, "zipf.csv")?;
        for (key, rows) in group_by(&zipf, &[0, 1]) {
            let lines: Vec<String> = rows.iter().map(|r| format!("{} {}", r[2], r[4])).collect();
            write_dat(
                out,
                &format!("zipf_{}_{}.dat", key[0], key[1]),
                "rank f",
                &lines,
            )?;
        }

        // mean Lv versus log10 mean frequency, with sigma for error bars
        let (_, bins) = read_csv(from, "bins.csv")?;
        for (key, rows) in group_by(&bins, &[0, 1]) {
            let lines: Vec<String> = rows
                .iter()
                .filter(|r| r[4] != "NA" && r[7] != "NA")
                .map(|r| format!("{} {} {}", r[4], r[7], r[8]))
                .collect();
            write_dat(
                out,
                &format!("lv_mean_{}_{}.dat", key[0], key[1]),
                "mean_log10_f mu_lv sigma_lv",
                &lines,
            )?;
        }

        // Lv distributions per frequency class, one block per class
        let (_, hist) = read_csv(from, "lv_hist.csv")?;
        for (key, rows) in group_by(&hist, &[0, 1]) {
            let mut lines: Vec<String> = Vec::new();
            for (class_key, class_rows) in group_by(&rows, &[2, 3]) {
                lines.push(format!("# class [{}, {})", class_key[0], class_key[1]));
                for r in &class_rows {
                    let lo: f64 = r[4].parse().unwrap_or(0.0);
                    let hi: f64 = r[5].parse().unwrap_or(0.0);
                    lines.push(format!("{} {}", 0.5 * (lo + hi), r[6]));
                }
                lines.push(String::new());
            }
            write_dat(
                out,
                &format!("lv_hist_{}_{}.dat", key[0], key[1]),
                "lv_mid p (blocks per frequency class)",
                &lines,
            )?;
        }

        // z-values per role
        let (_, zscores) = read_csv(from, "zscores.csv")?;
        for (key, rows) in group_by(&zscores, &[0]) {
            let lines: Vec<String> = rows
                .iter()
                .map(|r| format!("{} {} {} {}", r[1], r[6], r[4], r[8]))
                .collect();
            write_dat(
                out,
                &format!("zscores_{}.dat", key[0]),
                "comparison denominator mean_log10_f z",
                &lines,
            )?;
        }

        // correlations per role
        let (_, corr) = read_csv(from, "correlations.csv")?;
        for (key, rows) in group_by(&corr, &[0]) {
            let lines: Vec<String> = rows
                .iter()
                .map(|r| format!("{} {} {} {} {} {}", r[1], r[2], r[5], r[6], r[7], r[8]))
                .collect();
            write_dat(
                out,
                &format!("correlations_{}.dat", key[0]),
                "pair mode mean_log10_f_first mean_log10_f_second n_pairs r",
                &lines,
            )?;
        }
        Ok(())
    }

    fn json_value(field: &str) -> serde_json::Value {
        if field == "NA" {
            serde_json::Value::Null
        } else if let Ok(v) = field.parse::<i64>() {
            serde_json::Value::from(v)
        } else if let Ok(v) = field.parse::<f64>() {
            serde_json::Value::from(v)
        } else {
            serde_json::Value::from(field)
        }
    }

    fn json(from: &Path, out: &Path) -> Result<(), CliError> {
        let mut tables = serde_json::Map::new();
        for name in [
            "bins.csv",
            "lv_hist.csv",
            "zipf.csv",
            "zscores.csv",
            "correlations.csv",
        ] {
            let (header, rows) = read_csv(from, name)?;
            let objects: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.clone(), json_value(v)))
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let key = name.trim_end_matches(".csv").to_string();
            tables.insert(key, serde_json::Value::Array(objects));
        }
        let path = out.join("plots.json");
        let mut file = File::create(&path)
            .map_err(|e| CliError::Internal(format!("cannot create `{}`: {e}", path.display())))?;
        serde_json::to_writer_pretty(&mut file, &serde_json::Value::Object(tables))
            .map_err(|e| CliError::Internal(e.to_string()))?;
        file.write_all(b"\n").map_err(CliError::from)?;
        Ok(())
    }

    pub(super) fn run(from: &Path, out: &Path, format: ExportFormat) -> Result<(), CliError> {
        fs::create_dir_all(out)
            .map_err(|e| CliError::Internal(format!("cannot create `{}`: {e}", out.display())))?;
        match format {
            ExportFormat::Gnuplot => gnuplot(from, out),
            ExportFormat::Json => json(from, out),
        }
    }
}
