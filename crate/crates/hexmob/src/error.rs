use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An operation was applied to a station in a state that forbids it.
    #[error("state machine violation: {0}")]
    StateMachine(String),

    /// An HLR record was appended out of time order.
    #[error("HLR log ordering violated: record at t={new} after record at t={last}")]
    LogOrdering { last: f64, new: f64 },

    /// Paging was requested for a detached station.
    #[error("station {user_id} is unreachable: cannot page an IDLE station")]
    Unreachable { user_id: u64 },

    /// A per-tick validation check failed.
    #[error("invariant violated at t={time}: {message}")]
    Invariant { time: f64, message: String },

    /// File I/O failed; the offending path is part of the message.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
