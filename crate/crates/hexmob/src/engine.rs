//! Deterministic discrete-time simulation loop: advances kinematics, detects
//! coverage and cell changes, drives the MM state machine and the active
//! update scheme, generates traffic sessions with their paging arrivals, and
//! aggregates per-run and per-velocity statistics.
//!
//! Every random draw comes from a per-station ChaCha stream derived from
//! `(seed, run_index, station_index)`, so a run is a pure function of its
//! config and the station iteration order never matters.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::hexgrid::Grid;
use crate::mm_state::{MmEvent, MmState, MobileStation, TimerSettings};
use crate::mobility::{self, MotionBox, StepParams};
use crate::schemes::{self, HlrLog, SchemeConfig, UpdateRecord};
use crate::Error;

pub const DEFAULT_STATIONS: u32 = 10;
pub const DEFAULT_ROWS: u32 = 4;
pub const DEFAULT_COLS: u32 = 7;
pub const DEFAULT_CELL_RADIUS: f64 = 1.0;
pub const DEFAULT_COVERAGE_RADIUS: f64 = 2.0;
pub const DEFAULT_LA_SIZE: u32 = 7;
pub const DEFAULT_THRESHOLD: u32 = 2;
pub const DEFAULT_MAX_SPEED: f64 = 1.5;
pub const DEFAULT_MOTION_TIMESCALE: f64 = 100.0;
pub const DEFAULT_AVG_TX_TIME: f64 = 12.0;
pub const DEFAULT_SESSION_INTERARRIVAL: f64 = 120.0;
pub const DEFAULT_SIM_TIME: f64 = 30000.0;
pub const DEFAULT_DT: f64 = 1.0;
pub const DEFAULT_READY_TIMER: f64 = 50.0;
pub const DEFAULT_STANDBY_TIMER: f64 = 2000.0;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RUNS: u32 = 50;

/// Simulation time advances in milliseconds while velocities are expressed
/// in length units per second, so one velocity unit moves a station
/// `0.001` length units per unit of time.
pub const VELOCITY_UNIT: f64 = 1e-3;

/// Full parameter set of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub stations: u32,
    pub rows: u32,
    pub cols: u32,
    pub cell_radius: f64,
    /// Coverage multiplier: a point is in coverage iff some base station is
    /// within `coverage_radius * cell_radius` of it.
    pub coverage_radius: f64,
    pub la_size: u32,
    pub scheme: SchemeConfig,
    /// Common station speed in length units per second (see [`VELOCITY_UNIT`]).
    pub max_speed: f64,
    /// Mean heading-holding time of the random-direction motion.
    pub motion_timescale: f64,
    /// Mean session (packet transmission) duration.
    pub avg_tx_time: f64,
    /// Mean time between session arrivals per station.
    pub session_interarrival_mean: f64,
    pub sim_time: f64,
    pub dt: f64,
    pub ready_timer: f64,
    pub standby_timer: f64,
    pub seed: u64,
    /// Assert module invariants after every station tick (~2x runtime).
    pub validate: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            stations: DEFAULT_STATIONS,
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            cell_radius: DEFAULT_CELL_RADIUS,
            coverage_radius: DEFAULT_COVERAGE_RADIUS,
            la_size: DEFAULT_LA_SIZE,
            scheme: SchemeConfig::distance(DEFAULT_THRESHOLD),
            max_speed: DEFAULT_MAX_SPEED,
            motion_timescale: DEFAULT_MOTION_TIMESCALE,
            avg_tx_time: DEFAULT_AVG_TX_TIME,
            session_interarrival_mean: DEFAULT_SESSION_INTERARRIVAL,
            sim_time: DEFAULT_SIM_TIME,
            dt: DEFAULT_DT,
            ready_timer: DEFAULT_READY_TIMER,
            standby_timer: DEFAULT_STANDBY_TIMER,
            seed: DEFAULT_SEED,
            validate: false,
        }
    }
}

impl SimConfig {
    pub fn validate_config(&self) -> Result<(), Error> {
        if self.stations == 0 {
            return Err(Error::Config("stations must be at least 1".into()));
        }
        self.scheme.validate()?;
        for (name, value) in [
            ("max_speed", self.max_speed),
            ("sim_time", self.sim_time),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be non-negative and finite, got {value}"
                )));
            }
        }
        for (name, value) in [
            ("motion_timescale", self.motion_timescale),
            ("avg_tx_time", self.avg_tx_time),
            ("session_interarrival_mean", self.session_interarrival_mean),
            ("dt", self.dt),
            ("ready_timer", self.ready_timer),
            ("standby_timer", self.standby_timer),
        ] {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be finite, got {}", self.dt)));
        }
        // Grid construction re-checks its own parameters.
        self.build_grid().map(|_| ())
    }

    pub fn build_grid(&self) -> Result<Grid, Error> {
        Grid::build(
            self.rows,
            self.cols,
            self.cell_radius,
            self.coverage_radius,
            self.la_size,
        )
    }
}

/// Aggregated outcome of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    /// HLR updates per station, indexed by station ID.
    pub per_station_updates: Vec<u64>,
    /// All HLR updates: scheme-triggered plus attach registrations.
    pub total_updates: u64,
    /// Scheme-triggered updates sent in READY.
    pub updates_ready: u64,
    /// Scheme-triggered updates sent in STANDBY.
    pub updates_standby: u64,
    /// Attach registrations (each also counts as one HLR update).
    pub attaches: u64,
    /// Cell-level handovers observed in READY.
    pub cell_updates: u64,
    /// Successful pages (one per session arrival at an attached station).
    pub paging_events: u64,
    /// Total cells polled across all pages.
    pub total_paging_cost: u64,
    /// The configuration that produced this report, seed included.
    pub config: SimConfig,
}

/// Report plus the update log behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub report: SimReport,
    pub hlr_log: HlrLog,
}

/// Station iteration order inside a tick; reports are identical either way.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StationOrder {
    Forward,
    Reversed,
}

#[derive(Copy, Clone, Debug)]
pub struct RunOptions {
    pub order: StationOrder,
    pub collect_log: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            order: StationOrder::Forward,
            collect_log: true,
        }
    }
}

/// Derive the RNG stream for one station of one run. Distinct
/// `(seed, run_index, station_index)` triples give distinct streams, so
/// per-station randomness is independent of iteration order.
pub fn derive_rng_stream(seed: u64, run_index: u64, station_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&run_index.to_le_bytes());
    key[16..24].copy_from_slice(&station_index.to_le_bytes());
    key[24..32].copy_from_slice(b"hexmob.1");
    ChaCha8Rng::from_seed(key)
}

/// Inverse-CDF exponential draw.
fn sample_exp<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    -mean * (1.0 - rng.random::<f64>()).ln()
}

/// Reported records carry the run's configured velocity (in velocity units),
/// not the per-tick displacement the kinematics store internally.
fn in_velocity_units(mut rec: UpdateRecord, config: &SimConfig) -> UpdateRecord {
    rec.velocity = config.max_speed;
    rec
}

struct StationSim {
    ms: MobileStation,
    rng: ChaCha8Rng,
    next_session_start: f64,
    session_ends: Vec<f64>,
    paging_events: u64,
    paging_cost: u64,
}

/// Execute one deterministic run with default options.
pub fn run(config: &SimConfig) -> Result<RunOutput, Error> {
    run_with(config, RunOptions::default())
}

/// Execute one deterministic run.
pub fn run_with(config: &SimConfig, options: RunOptions) -> Result<RunOutput, Error> {
    config.validate_config()?;
    let grid = config.build_grid()?;
    let bounds = MotionBox::around_grid(&grid);
    let step = StepParams::new(config.dt, config.motion_timescale);
    let timers = TimerSettings {
        ready: config.ready_timer,
        standby: config.standby_timer,
    };
    let ticks = (config.sim_time / config.dt).ceil() as u64;

    let speed = config.max_speed * VELOCITY_UNIT;
    let mut stations: Vec<StationSim> = (0..config.stations)
        .map(|i| {
            let mut rng = derive_rng_stream(config.seed, 0, i as u64);
            let kinematics = mobility::random_kinematics(&bounds, speed, &mut rng);
            let next_session_start = sample_exp(&mut rng, config.session_interarrival_mean);
            StationSim {
                ms: MobileStation::new(i as u64, kinematics, timers),
                rng,
                next_session_start,
                session_ends: Vec::new(),
                paging_events: 0,
                paging_cost: 0,
            }
        })
        .collect();

    let mut log = HlrLog::new();
    // Records produced within one tick, keyed by station ID so the log is
    // identical regardless of iteration order.
    let mut tick_records: Vec<(u64, UpdateRecord)> = Vec::new();

    if ticks > 0 {
        // Stations that begin inside coverage attach immediately at t = 0.
        for st in stations.iter_mut() {
            if let Some(cell) = grid.nearest_cell(st.ms.kinematics.position) {
                st.ms.current_cell = Some(cell);
                let rec = st.ms.attach(cell, &grid, 0.0).expect("fresh stations are IDLE");
                if options.collect_log {
                    log.append(in_velocity_units(rec, config))?;
                }
            }
        }
    }

    let n = stations.len();
    for tick in 0..ticks {
        let now = (tick + 1) as f64 * config.dt;
        for step_idx in 0..n {
            let i = match options.order {
                StationOrder::Forward => step_idx,
                StationOrder::Reversed => n - 1 - step_idx,
            };
            let st = &mut stations[i];
            tick_station(st, config, &grid, &bounds, &step, now, &mut tick_records)?;
            if config.validate {
                validate_station(st, config, &grid, now)?;
            }
        }
        if !tick_records.is_empty() {
            tick_records.sort_by_key(|(user_id, _)| *user_id);
            for (_, rec) in tick_records.drain(..) {
                if options.collect_log {
                    log.append(rec)?;
                }
            }
        }
    }

    let per_station_updates: Vec<u64> =
        stations.iter().map(|st| st.ms.counters.hlr_total()).collect();
    let report = SimReport {
        total_updates: per_station_updates.iter().sum(),
        per_station_updates,
        updates_ready: stations.iter().map(|st| st.ms.counters.hlr_updates_ready).sum(),
        updates_standby: stations.iter().map(|st| st.ms.counters.hlr_updates_standby).sum(),
        attaches: stations.iter().map(|st| st.ms.counters.attaches).sum(),
        cell_updates: stations.iter().map(|st| st.ms.counters.cell_updates).sum(),
        paging_events: stations.iter().map(|st| st.paging_events).sum(),
        total_paging_cost: stations.iter().map(|st| st.paging_cost).sum(),
        config: config.clone(),
    };
    Ok(RunOutput {
        report,
        hlr_log: log,
    })
}

fn tick_station(
    st: &mut StationSim,
    config: &SimConfig,
    grid: &Grid,
    bounds: &MotionBox,
    step: &StepParams,
    now: f64,
    out: &mut Vec<(u64, UpdateRecord)>,
) -> Result<(), Error> {
    let scheme = &config.scheme;

    // Motion, then coverage and cell-change detection.
    st.ms.kinematics = mobility::step_params(st.ms.kinematics, step, bounds, &mut st.rng);
    let new_cell = grid.nearest_cell_hint(st.ms.kinematics.position, st.ms.current_cell);
    match (st.ms.current_cell, new_cell) {
        (None, Some(cell)) => {
            st.ms.current_cell = Some(cell);
            if let Some(rec) = st.ms.handle_event(MmEvent::CoverageRegained, scheme, grid, now) {
                out.push((st.ms.user_id, in_velocity_units(rec, config)));
            }
        }
        (Some(_), None) => {
            st.ms.handle_event(MmEvent::CoverageLost, scheme, grid, now);
        }
        (Some(old), Some(new)) if old != new => {
            if let Some(rec) = st.ms.handle_event(MmEvent::CellChanged(new), scheme, grid, now) {
                out.push((st.ms.user_id, in_velocity_units(rec, config)));
            }
        }
        _ => {}
    }

    // Timers.
    if let Some(ev) = st.ms.tick_timers(config.dt) {
        if let Some(rec) = st.ms.handle_event(ev, scheme, grid, now) {
            out.push((st.ms.user_id, in_velocity_units(rec, config)));
        }
    }

    // Session arrivals. Each one is a downlink arrival, so the network pages
    // for the station before the session is established.
    while st.next_session_start <= now {
        let start = st.next_session_start;
        if st.ms.state != MmState::Idle {
            let set = schemes::paging_set(scheme, &st.ms, grid)?;
            st.paging_events += 1;
            st.paging_cost += set.len() as u64;
        }
        if let Some(rec) = st.ms.handle_event(MmEvent::SessionStart, scheme, grid, now) {
            out.push((st.ms.user_id, in_velocity_units(rec, config)));
        }
        st.session_ends.push(start + sample_exp(&mut st.rng, config.avg_tx_time));
        st.next_session_start = start + sample_exp(&mut st.rng, config.session_interarrival_mean);
    }

    // Session completions.
    let mut j = 0;
    while j < st.session_ends.len() {
        if st.session_ends[j] <= now {
            st.session_ends.swap_remove(j);
            st.ms.handle_event(MmEvent::SessionEnd, scheme, grid, now);
        } else {
            j += 1;
        }
    }
    Ok(())
}

/// Per-tick invariant checks, enabled by `SimConfig::validate`.
fn validate_station(
    st: &StationSim,
    config: &SimConfig,
    grid: &Grid,
    now: f64,
) -> Result<(), Error> {
    let ms = &st.ms;
    let fail = |message: String| Err(Error::Invariant { time: now, message });

    // Full scan on purpose: the hint shortcut is what the tick loop used.
    let physical = grid.nearest_cell(ms.kinematics.position);
    if physical != ms.current_cell {
        return fail(format!(
            "station {}: current_cell {:?} disagrees with position ({:?})",
            ms.user_id, ms.current_cell, physical
        ));
    }

    match ms.state {
        MmState::Idle => {
            if ms.anchor_cell.is_some() || ms.registered_la.is_some() {
                return fail(format!("station {}: IDLE but still registered", ms.user_id));
            }
        }
        MmState::Ready | MmState::Standby => {
            let (Some(current), Some(anchor), Some(la)) =
                (ms.current_cell, ms.anchor_cell, ms.registered_la)
            else {
                return fail(format!(
                    "station {}: attached but missing cell registration",
                    ms.user_id
                ));
            };
            match &config.scheme {
                SchemeConfig::Distance { .. } => {
                    let threshold = config.scheme.threshold_for(ms.user_id).expect("distance");
                    let hop = grid.hop_between(current, anchor);
                    if hop >= threshold {
                        return fail(format!(
                            "station {}: anchor invariant broken, hop {hop} >= D {threshold}",
                            ms.user_id
                        ));
                    }
                }
                SchemeConfig::LocationArea { .. } => {
                    if grid.la_of(current) != la {
                        return fail(format!(
                            "station {}: registered LA {la} is stale",
                            ms.user_id
                        ));
                    }
                }
            }
            let set = schemes::paging_set(&config.scheme, ms, grid)?;
            if !set.contains(&current) {
                return fail(format!(
                    "station {}: current cell {current} missing from its paging set",
                    ms.user_id
                ));
            }
        }
    }
    Ok(())
}

/// One row of a velocity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub velocity: f64,
    pub stations: u32,
    pub mean_updates_ready: f64,
    pub mean_updates_standby: f64,
    pub mean_total: f64,
    pub std_total: f64,
    pub runs: u32,
}

/// Raw per-run counts behind one sweep row, kept for statistical tests.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocitySamples {
    pub velocity: f64,
    pub ready: Vec<u64>,
    pub standby: Vec<u64>,
    pub totals: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub samples: Vec<VelocitySamples>,
}

/// Run `runs` independent simulations per velocity (seeds `seed`,
/// `seed + 1`, ...) and aggregate per-velocity statistics. Rows keep the
/// input velocity order. Runs execute in parallel; aggregation order is
/// fixed, so the report is identical to a serial sweep.
pub fn sweep(config: &SimConfig, velocities: &[f64], runs: u32) -> Result<SweepReport, Error> {
    if velocities.is_empty() {
        return Err(Error::Config("sweep needs at least one velocity".into()));
    }
    if runs == 0 {
        return Err(Error::Config("sweep needs at least one run".into()));
    }
    config.validate_config()?;

    let jobs: Vec<(usize, u32)> = (0..velocities.len())
        .flat_map(|vi| (0..runs).map(move |k| (vi, k)))
        .collect();
    let reports: Vec<SimReport> = jobs
        .par_iter()
        .map(|&(vi, k)| {
            let mut c = config.clone();
            c.max_speed = velocities[vi];
            c.seed = config.seed.wrapping_add(k as u64);
            run_with(
                &c,
                RunOptions {
                    order: StationOrder::Forward,
                    collect_log: false,
                },
            )
            .map(|out| out.report)
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(velocities.len());
    let mut samples = Vec::with_capacity(velocities.len());
    for (vi, &velocity) in velocities.iter().enumerate() {
        let slice = &reports[vi * runs as usize..(vi + 1) * runs as usize];
        let ready: Vec<u64> = slice.iter().map(|r| r.updates_ready).collect();
        let standby: Vec<u64> = slice.iter().map(|r| r.updates_standby).collect();
        let totals: Vec<u64> = slice.iter().map(|r| r.total_updates).collect();
        rows.push(SweepRow {
            velocity,
            stations: config.stations,
            mean_updates_ready: mean(&ready),
            mean_updates_standby: mean(&standby),
            mean_total: mean(&totals),
            std_total: sample_std(&totals),
            runs,
        });
        samples.push(VelocitySamples {
            velocity,
            ready,
            standby,
            totals,
        });
    }
    Ok(SweepReport { rows, samples })
}

fn mean(xs: &[u64]) -> f64 {
    xs.iter().sum::<u64>() as f64 / xs.len() as f64
}

/// Sample standard deviation; 0 for fewer than two samples.
fn sample_std(xs: &[u64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|&x| (x as f64 - m).powi(2)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> SimConfig {
        SimConfig {
            stations: 5,
            sim_time: 1500.0,
            max_speed: 20.0,
            seed: 7,
            ..SimConfig::default()
        }
    }

    #[test]
    fn zero_sim_time_yields_all_zero_counters() {
        let config = SimConfig {
            sim_time: 0.0,
            ..SimConfig::default()
        };
        let out = run(&config).unwrap();
        assert_eq!(out.report.total_updates, 0);
        assert_eq!(out.report.attaches, 0);
        assert_eq!(out.report.paging_events, 0);
        assert!(out.report.per_station_updates.iter().all(|&u| u == 0));
        assert!(out.hlr_log.is_empty());
    }

    #[test]
    fn identical_config_and_seed_reproduce_the_run() {
        let config = quick_config();
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(a.hlr_log, b.hlr_log);
    }

    #[test]
    fn different_seeds_diverge() {
        let config = quick_config();
        let a = run(&config).unwrap();
        let b = run(&SimConfig {
            seed: config.seed + 1,
            ..config
        })
        .unwrap();
        assert_ne!(a.hlr_log, b.hlr_log);
    }

    #[test]
    fn station_iteration_order_does_not_matter() {
        let config = quick_config();
        let fwd = run_with(&config, RunOptions::default()).unwrap();
        let rev = run_with(
            &config,
            RunOptions {
                order: StationOrder::Reversed,
                collect_log: true,
            },
        )
        .unwrap();
        assert_eq!(fwd.report, rev.report);
        assert_eq!(fwd.hlr_log, rev.hlr_log);
    }

    #[test]
    fn total_updates_equals_log_length() {
        let config = quick_config();
        let out = run(&config).unwrap();
        assert_eq!(out.report.total_updates as usize, out.hlr_log.len());
        assert_eq!(
            out.report.total_updates,
            out.report.updates_ready + out.report.updates_standby + out.report.attaches
        );
        assert_eq!(
            out.report.total_updates,
            out.report.per_station_updates.iter().sum::<u64>()
        );
    }

    #[test]
    fn log_timestamps_are_non_decreasing() {
        let out = run(&quick_config()).unwrap();
        assert!(!out.hlr_log.is_empty());
        let times: Vec<f64> = out.hlr_log.records().iter().map(|r| r.time).collect();
        assert!(times.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn stationary_stations_never_trigger_scheme_updates() {
        for scheme in [SchemeConfig::distance(2), SchemeConfig::location_area(7)] {
            let config = SimConfig {
                max_speed: 0.0,
                sim_time: 5000.0,
                scheme,
                ..SimConfig::default()
            };
            let out = run(&config).unwrap();
            assert_eq!(out.report.updates_ready, 0);
            assert_eq!(out.report.updates_standby, 0);
            // In-coverage stations still registered once.
            assert_eq!(out.report.total_updates, out.report.attaches);
        }
    }

    #[test]
    fn validation_mode_passes_on_default_configs() {
        for scheme in [SchemeConfig::distance(2), SchemeConfig::location_area(7)] {
            let config = SimConfig {
                stations: 4,
                sim_time: 1000.0,
                max_speed: 50.0,
                validate: true,
                scheme,
                ..SimConfig::default()
            };
            run(&config).unwrap();
        }
    }

    #[test]
    fn invalid_configs_are_rejected_before_running() {
        let bad_threshold = SimConfig {
            scheme: SchemeConfig::distance(0),
            ..SimConfig::default()
        };
        assert!(matches!(run(&bad_threshold), Err(Error::Config(_))));

        let bad_dt = SimConfig {
            dt: 0.0,
            ..SimConfig::default()
        };
        assert!(matches!(run(&bad_dt), Err(Error::Config(_))));

        let bad_stations = SimConfig {
            stations: 0,
            ..SimConfig::default()
        };
        assert!(matches!(run(&bad_stations), Err(Error::Config(_))));
    }

    #[test]
    fn derived_streams_are_stable_and_distinct() {
        let mut a = derive_rng_stream(1, 2, 3);
        let mut b = derive_rng_stream(1, 2, 3);
        assert_eq!(a.random::<u64>(), b.random::<u64>());

        let mut c = derive_rng_stream(1, 2, 4);
        let mut d = derive_rng_stream(1, 2, 3);
        assert_ne!(c.random::<u64>(), d.random::<u64>());

        let mut e = derive_rng_stream(1, 3, 3);
        let mut f = derive_rng_stream(1, 2, 3);
        assert_ne!(e.random::<u64>(), f.random::<u64>());
    }

    #[test]
    fn single_run_sweep_row_echoes_the_run() {
        let config = quick_config();
        let report = sweep(&config, &[config.max_speed], 1).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        let single = run(&SimConfig {
            max_speed: config.max_speed,
            ..config
        })
        .unwrap();
        assert_eq!(row.mean_total, single.report.total_updates as f64);
        assert_eq!(row.std_total, 0.0);
        assert_eq!(row.runs, 1);
    }

    #[test]
    fn sweep_rows_follow_input_velocity_order() {
        let config = SimConfig {
            stations: 3,
            sim_time: 400.0,
            ..SimConfig::default()
        };
        let velocities = [30.0, 5.0, 90.0];
        let report = sweep(&config, &velocities, 3).unwrap();
        let order: Vec<f64> = report.rows.iter().map(|r| r.velocity).collect();
        assert_eq!(order, velocities);
        for s in &report.samples {
            assert_eq!(s.totals.len(), 3);
        }
    }

    #[test]
    fn sweep_rejects_empty_inputs() {
        let config = quick_config();
        assert!(sweep(&config, &[], 5).is_err());
        assert!(sweep(&config, &[1.0], 0).is_err());
    }
}
