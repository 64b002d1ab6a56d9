//! Python bindings for the hexmob simulator.
//!
//! Exposes the grid geometry plus the run/sweep entry points so experiments
//! can be driven from Python directly, without the CLI or CSV files:
//!
//! ```text
//! import hexmob_py
//! report = hexmob_py.run(hexmob_py.SimConfig(stations=10, seed=42))
//! print(report.total_updates)
//! ```

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hexmob::engine::{self, SimConfig as CoreSimConfig, SimReport as CoreSimReport};
use hexmob::hexgrid::{CellId, Grid as CoreGrid};
use hexmob::schemes::SchemeConfig;
use hexmob::Error;
use hexmob::Point;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Hexagonal cell layout with base stations at the centroids.
#[pyclass(module = "hexmob_py")]
struct Grid {
    inner: CoreGrid,
}

impl Grid {
    fn cell(&self, id: u32) -> PyResult<CellId> {
        if id < self.inner.cell_count() {
            Ok(CellId(id))
        } else {
            Err(PyValueError::new_err(format!(
                "cell {id} out of range (grid has {} cells)",
                self.inner.cell_count()
            )))
        }
    }
}

#[pymethods]
impl Grid {
    #[new]
    #[pyo3(signature = (rows=4, cols=7, cell_radius=1.0, coverage_radius=2.0, la_size=7))]
    fn new(
        rows: u32,
        cols: u32,
        cell_radius: f64,
        coverage_radius: f64,
        la_size: u32,
    ) -> PyResult<Self> {
        let inner =
            CoreGrid::build(rows, cols, cell_radius, coverage_radius, la_size).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn cell_count(&self) -> u32 {
        self.inner.cell_count()
    }

    /// Base-station position of a cell as an `(x, y)` pair.
    fn bs_position(&self, cell: u32) -> PyResult<(f64, f64)> {
        let p = self.inner.bs_position(self.cell(cell)?);
        Ok((p.x, p.y))
    }

    /// Cell covering `(x, y)`, or `None` when the point is out of coverage.
    fn nearest_cell(&self, x: f64, y: f64) -> Option<u32> {
        self.inner.nearest_cell(Point::new(x, y)).map(|c| c.0)
    }

    /// Hop distance between two cells.
    fn hop_distance(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.hop_between(self.cell(a)?, self.cell(b)?))
    }

    /// IDs of all cells within `d` hops of `center` (sorted).
    fn cells_within(&self, center: u32, d: u32) -> PyResult<Vec<u32>> {
        Ok(self
            .inner
            .cells_within(self.cell(center)?, d)
            .into_iter()
            .map(|c| c.0)
            .collect())
    }

    /// Location-area index of a cell.
    fn la_of(&self, cell: u32) -> PyResult<u32> {
        Ok(self.inner.la_of(self.cell(cell)?).0)
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(rows={}, cols={}, cell_radius={}, coverage_radius={}, la_size={})",
            self.inner.rows(),
            self.inner.cols(),
            self.inner.cell_radius(),
            self.inner.coverage_radius(),
            self.inner.la_size()
        )
    }
}

/// Simulation parameters; every keyword has the CLI's default.
#[pyclass(module = "hexmob_py")]
struct SimConfig {
    inner: CoreSimConfig,
}

#[pymethods]
impl SimConfig {
    #[new]
    #[pyo3(signature = (*, stations=engine::DEFAULT_STATIONS, rows=engine::DEFAULT_ROWS,
        cols=engine::DEFAULT_COLS, cell_radius=engine::DEFAULT_CELL_RADIUS,
        radio_range=engine::DEFAULT_COVERAGE_RADIUS, la_size=engine::DEFAULT_LA_SIZE,
        scheme="distance", threshold=engine::DEFAULT_THRESHOLD,
        max_speed=engine::DEFAULT_MAX_SPEED, motion_timescale=engine::DEFAULT_MOTION_TIMESCALE,
        avg_tx_time=engine::DEFAULT_AVG_TX_TIME,
        session_interarrival=engine::DEFAULT_SESSION_INTERARRIVAL,
        sim_time=engine::DEFAULT_SIM_TIME, dt=engine::DEFAULT_DT,
        ready_timer=engine::DEFAULT_READY_TIMER, standby_timer=engine::DEFAULT_STANDBY_TIMER,
        seed=engine::DEFAULT_SEED, validate=false))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        stations: u32,
        rows: u32,
        cols: u32,
        cell_radius: f64,
        radio_range: f64,
        la_size: u32,
        scheme: &str,
        threshold: u32,
        max_speed: f64,
        motion_timescale: f64,
        avg_tx_time: f64,
        session_interarrival: f64,
        sim_time: f64,
        dt: f64,
        ready_timer: f64,
        standby_timer: f64,
        seed: u64,
        validate: bool,
    ) -> PyResult<Self> {
        let scheme = match scheme {
            "distance" => SchemeConfig::distance(threshold),
            "la" => SchemeConfig::location_area(la_size),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown scheme {other:?} (expected \"distance\" or \"la\")"
                )))
            }
        };
        let inner = CoreSimConfig {
            stations,
            rows,
            cols,
            cell_radius,
            coverage_radius: radio_range,
            la_size,
            scheme,
            max_speed,
            motion_timescale,
            avg_tx_time,
            session_interarrival_mean: session_interarrival,
            sim_time,
            dt,
            ready_timer,
            standby_timer,
            seed,
            validate,
        };
        inner.validate_config().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn stations(&self) -> u32 {
        self.inner.stations
    }

    #[getter]
    fn scheme(&self) -> &'static str {
        self.inner.scheme.kind_str()
    }

    #[getter]
    fn max_speed(&self) -> f64 {
        self.inner.max_speed
    }

    #[getter]
    fn sim_time(&self) -> f64 {
        self.inner.sim_time
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.inner.seed = seed;
    }

    #[setter]
    fn set_max_speed(&mut self, max_speed: f64) {
        self.inner.max_speed = max_speed;
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SimConfig(stations={}, scheme='{}', max_speed={}, sim_time={}, seed={})",
            c.stations,
            c.scheme.kind_str(),
            c.max_speed,
            c.sim_time,
            c.seed
        )
    }
}

/// Aggregated counters of one run.
#[pyclass(module = "hexmob_py")]
struct SimReport {
    inner: CoreSimReport,
}

#[pymethods]
impl SimReport {
    #[getter]
    fn per_station_updates(&self) -> Vec<u64> {
        self.inner.per_station_updates.clone()
    }

    #[getter]
    fn total_updates(&self) -> u64 {
        self.inner.total_updates
    }

    #[getter]
    fn updates_ready(&self) -> u64 {
        self.inner.updates_ready
    }

    #[getter]
    fn updates_standby(&self) -> u64 {
        self.inner.updates_standby
    }

    #[getter]
    fn attaches(&self) -> u64 {
        self.inner.attaches
    }

    #[getter]
    fn cell_updates(&self) -> u64 {
        self.inner.cell_updates
    }

    #[getter]
    fn paging_events(&self) -> u64 {
        self.inner.paging_events
    }

    #[getter]
    fn total_paging_cost(&self) -> u64 {
        self.inner.total_paging_cost
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.config.seed
    }

    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("per_station_updates", self.inner.per_station_updates.clone())?;
        d.set_item("total_updates", self.inner.total_updates)?;
        d.set_item("updates_ready", self.inner.updates_ready)?;
        d.set_item("updates_standby", self.inner.updates_standby)?;
        d.set_item("attaches", self.inner.attaches)?;
        d.set_item("cell_updates", self.inner.cell_updates)?;
        d.set_item("paging_events", self.inner.paging_events)?;
        d.set_item("total_paging_cost", self.inner.total_paging_cost)?;
        d.set_item("seed", self.inner.config.seed)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "SimReport(total_updates={}, ready={}, standby={}, attaches={}, paging_cost={})",
            self.inner.total_updates,
            self.inner.updates_ready,
            self.inner.updates_standby,
            self.inner.attaches,
            self.inner.total_paging_cost
        )
    }
}

/// Run one simulation and return its report.
#[pyfunction]
fn run(config: &SimConfig) -> PyResult<SimReport> {
    let out = engine::run(&config.inner).map_err(to_py_err)?;
    Ok(SimReport { inner: out.report })
}

/// Run one simulation and return `(report, hlr_log)` where the log is a list
/// of dicts, one per HLR update.
#[pyfunction]
fn run_with_log<'py>(
    py: Python<'py>,
    config: &SimConfig,
) -> PyResult<(SimReport, Vec<Bound<'py, PyDict>>)> {
    let out = engine::run(&config.inner).map_err(to_py_err)?;
    let mut log = Vec::with_capacity(out.hlr_log.len());
    for r in out.hlr_log.records() {
        let d = PyDict::new(py);
        d.set_item("time", r.time)?;
        d.set_item("user_id", r.user_id)?;
        d.set_item("cell_id", r.cell_id.0)?;
        d.set_item("trigger", r.trigger.as_str())?;
        d.set_item("state", r.state_at_trigger.as_str())?;
        d.set_item("velocity", r.velocity)?;
        d.set_item("direction", r.direction)?;
        log.push(d);
    }
    Ok((SimReport { inner: out.report }, log))
}

/// Run `runs` seeds per velocity and return one dict per velocity row.
#[pyfunction]
fn sweep<'py>(
    py: Python<'py>,
    config: &SimConfig,
    velocities: Vec<f64>,
    runs: u32,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let report = engine::sweep(&config.inner, &velocities, runs).map_err(to_py_err)?;
    let mut rows = Vec::with_capacity(report.rows.len());
    for row in &report.rows {
        let d = PyDict::new(py);
        d.set_item("velocity", row.velocity)?;
        d.set_item("stations", row.stations)?;
        d.set_item("mean_updates_ready", row.mean_updates_ready)?;
        d.set_item("mean_updates_standby", row.mean_updates_standby)?;
        d.set_item("mean_total", row.mean_total)?;
        d.set_item("std_total", row.std_total)?;
        d.set_item("runs", row.runs)?;
        rows.push(d);
    }
    Ok(rows)
}

#[pymodule]
fn hexmob_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Grid>()?;
    m.add_class::<SimConfig>()?;
    m.add_class::<SimReport>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_with_log, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
