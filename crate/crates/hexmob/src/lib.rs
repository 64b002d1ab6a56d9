//! Deterministic simulator of mobile stations roaming a hexagonal cellular
//! grid under the GPRS mobility-management state model (IDLE / READY /
//! STANDBY), comparing the distance-based location-update scheme against the
//! classic location-area baseline.
//!
//! Module map:
//! - [`hexgrid`] — cell layout, hop distance, neighborhoods, LA partition
//! - [`mobility`] — random-direction motion with wall reflection
//! - [`mm_state`] — the per-station GPRS state machine
//! - [`schemes`] — update triggers, HLR records, paging sets
//! - [`engine`] — the tick loop, runs and velocity sweeps
//! - [`cli`] — flags, config files and CSV reports
//!
//! Every run is a pure function of its `SimConfig` (seed included): all
//! randomness flows through per-station ChaCha streams, so reports and CSV
//! outputs are byte-reproducible.

mod error;

pub mod cli;
pub mod engine;
pub mod hexgrid;
pub mod mm_state;
pub mod mobility;
pub mod schemes;

pub use engine::{run, sweep, RunOutput, SimConfig, SimReport, SweepReport};
pub use error::Error;
pub use hexgrid::{CellId, Grid, HexCoord, LaId, Point};
pub use mm_state::{MmEvent, MmState, MobileStation};
pub use schemes::{HlrLog, SchemeConfig, UpdateRecord};
