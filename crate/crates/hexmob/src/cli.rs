//! Command-line front end: flag parsing with optional TOML config-file
//! defaults, run/sweep/validate execution, and CSV emission.
//!
//! Precedence: explicit flags beat config-file values beat built-in
//! defaults. Exit codes: 0 success, 1 usage or configuration error,
//! 2 runtime or invariant failure.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::engine::{self, SimConfig, SimReport, SweepReport};
use crate::schemes::{HlrLog, SchemeConfig};
use crate::Error;

/// CLI failure split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// `--help` / `--version` text; printed to stdout, exit 0.
    Help(String),
    /// Bad flags or configuration; exit 1.
    Usage(String),
    /// Simulation, invariant or I/O failure; exit 2.
    Runtime(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hexmob",
    version,
    about = "Simulate mobile stations roaming a hexagonal cellular grid and count HLR location updates"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Run one simulation and write its summary (and optional update log)
    Run(RunCmd),
    /// Run many seeds per velocity and write per-velocity statistics
    Sweep(SweepCmd),
    /// Run with per-tick invariant checks; exits 0 iff none are violated
    Validate(ValidateCmd),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeKind {
    /// Update when the hop distance from the last reported cell reaches D
    Distance,
    /// Update when the broadcast location-area ID changes
    La,
}

#[derive(Args, Debug, Default)]
struct SimArgs {
    /// Number of mobile stations [default: 10]
    #[arg(long)]
    stations: Option<u32>,
    /// Grid rows [default: 4]
    #[arg(long)]
    rows: Option<u32>,
    /// Grid columns [default: 7]
    #[arg(long)]
    cols: Option<u32>,
    /// Hexagon circumradius in length units [default: 1]
    #[arg(long)]
    cell_radius: Option<f64>,
    /// Coverage multiplier: in coverage iff some BS is within
    /// radio-range * cell-radius [default: 2]
    #[arg(long)]
    radio_range: Option<f64>,
    /// Cells per location area [default: 7]
    #[arg(long)]
    la_size: Option<u32>,
    /// Location-update scheme [default: distance]
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    /// Distance threshold D in cell hops [default: 2]
    #[arg(long)]
    threshold: Option<u32>,
    /// Station speed in length units per second; time advances in
    /// milliseconds, so one unit is 0.001 length units per tick [default: 1.5]
    #[arg(long)]
    max_speed: Option<f64>,
    /// Mean heading-holding time of the random motion [default: 100]
    #[arg(long)]
    motion_timescale: Option<f64>,
    /// Mean session (packet transmission) duration [default: 12]
    #[arg(long)]
    avg_tx_time: Option<f64>,
    /// Mean time between session arrivals per station [default: 120]
    #[arg(long)]
    session_interarrival: Option<f64>,
    /// Simulated time units [default: 30000]
    #[arg(long)]
    sim_time: Option<f64>,
    /// Tick length [default: 1]
    #[arg(long)]
    dt: Option<f64>,
    /// READY timer duration [default: 50]
    #[arg(long)]
    ready_timer: Option<f64>,
    /// STANDBY timer duration [default: 2000]
    #[arg(long)]
    standby_timer: Option<f64>,
    /// RNG seed; HEXMOB_SEED is used when the flag is absent [default: 42]
    #[arg(long, env = "HEXMOB_SEED")]
    seed: Option<u64>,
    /// Assert simulator invariants every tick (~2x runtime)
    #[arg(long)]
    validate: bool,
    /// TOML file supplying values for any flag not given
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunCmd {
    #[command(flatten)]
    sim: SimArgs,
    /// Summary CSV path (station_id,updates rows plus a total footer)
    #[arg(long, default_value = "summary.csv")]
    out: PathBuf,
    /// Full HLR update log CSV path; no log is written when omitted
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepCmd {
    #[command(flatten)]
    sim: SimArgs,
    /// Comma-separated velocities to sweep, in the --max-speed unit
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    velocities: Vec<f64>,
    /// Independent runs (seeds seed, seed+1, ...) per velocity [default: 50]
    #[arg(long, default_value_t = engine::DEFAULT_RUNS)]
    runs: u32,
    /// Sweep statistics CSV path
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ValidateCmd {
    #[command(flatten)]
    sim: SimArgs,
}

/// Values read from a `--config` TOML file; keys mirror the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    stations: Option<u32>,
    rows: Option<u32>,
    cols: Option<u32>,
    cell_radius: Option<f64>,
    radio_range: Option<f64>,
    la_size: Option<u32>,
    scheme: Option<String>,
    threshold: Option<u32>,
    max_speed: Option<f64>,
    motion_timescale: Option<f64>,
    avg_tx_time: Option<f64>,
    session_interarrival: Option<f64>,
    sim_time: Option<f64>,
    dt: Option<f64>,
    ready_timer: Option<f64>,
    standby_timer: Option<f64>,
    seed: Option<u64>,
}

/// Which subcommand was requested.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Run,
    Sweep,
    Validate,
}

/// Fully resolved invocation: merged simulation config plus output targets.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub sim: SimConfig,
    pub out: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub velocities: Vec<f64>,
    pub runs: u32,
}

/// Parse argv (without the program name) into a validated `CliConfig`.
pub fn parse_args<I, S>(args: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let argv = std::iter::once(OsString::from("hexmob")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;
    resolve(cli)
}

fn resolve(cli: Cli) -> Result<CliConfig, CliError> {
    let (command, sim_args, out, log, velocities, runs) = match cli.command {
        CliCommand::Run(cmd) => (CommandKind::Run, cmd.sim, Some(cmd.out), cmd.log, Vec::new(), 1),
        CliCommand::Sweep(cmd) => (
            CommandKind::Sweep,
            cmd.sim,
            Some(cmd.out),
            None,
            cmd.velocities,
            cmd.runs,
        ),
        CliCommand::Validate(cmd) => (CommandKind::Validate, cmd.sim, None, None, Vec::new(), 1),
    };

    let file = match &sim_args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::Usage(format!("bad config file {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let scheme_kind = match sim_args.scheme {
        Some(kind) => kind,
        None => match file.scheme.as_deref() {
            None => SchemeKind::Distance,
            Some("distance") => SchemeKind::Distance,
            Some("la") => SchemeKind::La,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "bad scheme {other:?} in config file (expected \"distance\" or \"la\")"
                )))
            }
        },
    };
    let la_size = sim_args.la_size.or(file.la_size).unwrap_or(engine::DEFAULT_LA_SIZE);
    let threshold = sim_args
        .threshold
        .or(file.threshold)
        .unwrap_or(engine::DEFAULT_THRESHOLD);
    let scheme = match scheme_kind {
        SchemeKind::Distance => SchemeConfig::distance(threshold),
        SchemeKind::La => SchemeConfig::location_area(la_size),
    };

    let sim = SimConfig {
        stations: sim_args.stations.or(file.stations).unwrap_or(engine::DEFAULT_STATIONS),
        rows: sim_args.rows.or(file.rows).unwrap_or(engine::DEFAULT_ROWS),
        cols: sim_args.cols.or(file.cols).unwrap_or(engine::DEFAULT_COLS),
        cell_radius: sim_args
            .cell_radius
            .or(file.cell_radius)
            .unwrap_or(engine::DEFAULT_CELL_RADIUS),
        coverage_radius: sim_args
            .radio_range
            .or(file.radio_range)
            .unwrap_or(engine::DEFAULT_COVERAGE_RADIUS),
        la_size,
        scheme,
        max_speed: sim_args
            .max_speed
            .or(file.max_speed)
            .unwrap_or(engine::DEFAULT_MAX_SPEED),
        motion_timescale: sim_args
            .motion_timescale
            .or(file.motion_timescale)
            .unwrap_or(engine::DEFAULT_MOTION_TIMESCALE),
        avg_tx_time: sim_args
            .avg_tx_time
            .or(file.avg_tx_time)
            .unwrap_or(engine::DEFAULT_AVG_TX_TIME),
        session_interarrival_mean: sim_args
            .session_interarrival
            .or(file.session_interarrival)
            .unwrap_or(engine::DEFAULT_SESSION_INTERARRIVAL),
        sim_time: sim_args.sim_time.or(file.sim_time).unwrap_or(engine::DEFAULT_SIM_TIME),
        dt: sim_args.dt.or(file.dt).unwrap_or(engine::DEFAULT_DT),
        ready_timer: sim_args
            .ready_timer
            .or(file.ready_timer)
            .unwrap_or(engine::DEFAULT_READY_TIMER),
        standby_timer: sim_args
            .standby_timer
            .or(file.standby_timer)
            .unwrap_or(engine::DEFAULT_STANDBY_TIMER),
        seed: sim_args.seed.or(file.seed).unwrap_or(engine::DEFAULT_SEED),
        validate: sim_args.validate || command == CommandKind::Validate,
    };

    // Configuration errors stop the invocation before any simulation runs.
    sim.validate_config()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if command == CommandKind::Sweep {
        if velocities.is_empty() {
            return Err(CliError::Usage("sweep needs at least one velocity".into()));
        }
        if runs == 0 {
            return Err(CliError::Usage("sweep needs at least one run".into()));
        }
    }

    Ok(CliConfig {
        command,
        sim,
        out,
        log,
        velocities,
        runs,
    })
}

/// Execute a resolved invocation.
pub fn execute(config: &CliConfig) -> Result<(), CliError> {
    match config.command {
        CommandKind::Run => {
            let out = engine::run(&config.sim)?;
            if let Some(path) = &config.out {
                emit_report(&out.report, path)?;
                println!("wrote {}", path.display());
            }
            if let Some(path) = &config.log {
                emit_log(&out.hlr_log, path)?;
                println!("wrote {}", path.display());
            }
            print_run_summary(&out.report);
            Ok(())
        }
        CommandKind::Sweep => {
            let report = engine::sweep(&config.sim, &config.velocities, config.runs)?;
            if let Some(path) = &config.out {
                emit_sweep(&report, path)?;
                println!("wrote {}", path.display());
            }
            for row in &report.rows {
                println!(
                    "velocity {}: mean total {} (ready {}, standby {}), std {}",
                    fmt_sig(row.velocity),
                    fmt_sig(row.mean_total),
                    fmt_sig(row.mean_updates_ready),
                    fmt_sig(row.mean_updates_standby),
                    fmt_sig(row.std_total),
                );
            }
            Ok(())
        }
        CommandKind::Validate => {
            let out = engine::run(&config.sim)?;
            let ticks = (config.sim.sim_time / config.sim.dt).ceil() as u64;
            println!(
                "all invariants held over {ticks} ticks ({} stations, scheme {})",
                config.sim.stations,
                config.sim.scheme.kind_str()
            );
            drop(out);
            Ok(())
        }
    }
}

fn print_run_summary(report: &SimReport) {
    let per_station: Vec<String> = report
        .per_station_updates
        .iter()
        .map(|u| u.to_string())
        .collect();
    println!("update for each station = {}", per_station.join(" "));
    println!(
        "total update = {} (ready {}, standby {}, attach {})",
        report.total_updates, report.updates_ready, report.updates_standby, report.attaches
    );
    println!(
        "cell updates = {}; paging events = {}, total paging cost = {}",
        report.cell_updates, report.paging_events, report.total_paging_cost
    );
}

/// Parse argv, execute, and map the outcome to an exit code.
pub fn run_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    match parse_args(args).and_then(|config| execute(&config)) {
        Ok(()) => 0,
        Err(CliError::Help(text)) => {
            println!("{text}");
            0
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("{msg}");
            1
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Format a real with 6 significant digits. Integers are printed bare by the
/// callers; exact zero prints as `0`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Summary CSV: one `station_id,updates` row per station and a
/// `total,<N>` footer.
pub fn write_summary_csv<W: Write>(w: &mut W, report: &SimReport) -> std::io::Result<()> {
    writeln!(w, "station_id,updates")?;
    for (i, updates) in report.per_station_updates.iter().enumerate() {
        writeln!(w, "{i},{updates}")?;
    }
    writeln!(w, "total,{}", report.total_updates)
}

/// Update-log CSV with the fixed header
/// `time,user_id,cell_id,trigger,state,velocity,direction`.
pub fn write_log_csv<W: Write>(w: &mut W, log: &HlrLog) -> std::io::Result<()> {
    writeln!(w, "time,user_id,cell_id,trigger,state,velocity,direction")?;
    for r in log.records() {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_sig(r.time),
            r.user_id,
            r.cell_id,
            r.trigger.as_str(),
            r.state_at_trigger.as_str(),
            fmt_sig(r.velocity),
            fmt_sig(r.direction),
        )?;
    }
    Ok(())
}

/// Sweep CSV with the fixed header
/// `velocity,stations,mean_updates_ready,mean_updates_standby,mean_total,std_total,runs`.
pub fn write_sweep_csv<W: Write>(w: &mut W, report: &SweepReport) -> std::io::Result<()> {
    writeln!(
        w,
        "velocity,stations,mean_updates_ready,mean_updates_standby,mean_total,std_total,runs"
    )?;
    for row in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_sig(row.velocity),
            row.stations,
            fmt_sig(row.mean_updates_ready),
            fmt_sig(row.mean_updates_standby),
            fmt_sig(row.mean_total),
            fmt_sig(row.std_total),
            row.runs,
        )?;
    }
    Ok(())
}

pub fn emit_report(report: &SimReport, path: &Path) -> Result<(), Error> {
    write_file(path, |w| write_summary_csv(w, report))
}

pub fn emit_log(log: &HlrLog, path: &Path) -> Result<(), Error> {
    write_file(path, |w| write_log_csv(w, log))
}

pub fn emit_sweep(report: &SweepReport, path: &Path) -> Result<(), Error> {
    write_file(path, |w| write_sweep_csv(w, report))
}

fn write_file<F>(path: &Path, body: F) -> Result<(), Error>
where
    F: FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
{
    let io_err = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}
