//! Location-update strategies and their paging counterparts, plus the HLR
//! update log they feed.
//!
//! Two schemes are implemented. The distance scheme re-registers a station
//! once it has wandered `threshold` or more cell hops from its last reported
//! cell (its anchor), and pages the cells within `threshold` hops of the
//! anchor. The location-area scheme re-registers on every LA change and
//! pages the whole registered LA.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::hexgrid::{CellId, Grid};
use crate::mm_state::{MmState, MobileStation};
use crate::Error;

/// Which update strategy is active, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeConfig {
    Distance {
        /// Hop count at which an update fires; at least 1.
        threshold: u32,
        /// Per-user overrides of the threshold.
        per_user: BTreeMap<u64, u32>,
    },
    LocationArea {
        /// Cells per location area; must match the grid's partition.
        la_size: u32,
    },
}

impl SchemeConfig {
    pub fn distance(threshold: u32) -> Self {
        SchemeConfig::Distance {
            threshold,
            per_user: BTreeMap::new(),
        }
    }

    pub fn location_area(la_size: u32) -> Self {
        SchemeConfig::LocationArea { la_size }
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            SchemeConfig::Distance { threshold, per_user } => {
                if *threshold == 0 {
                    return Err(Error::Config("distance threshold must be at least 1".into()));
                }
                if let Some((user, _)) = per_user.iter().find(|(_, d)| **d == 0) {
                    return Err(Error::Config(format!(
                        "distance threshold for user {user} must be at least 1"
                    )));
                }
                Ok(())
            }
            SchemeConfig::LocationArea { la_size } => {
                if *la_size == 0 {
                    return Err(Error::Config("la_size must be at least 1".into()));
                }
                Ok(())
            }
        }
    }

    /// Effective distance threshold for one user; `None` for the LA scheme.
    pub fn threshold_for(&self, user_id: u64) -> Option<u32> {
        match self {
            SchemeConfig::Distance { threshold, per_user } => {
                Some(per_user.get(&user_id).copied().unwrap_or(*threshold))
            }
            SchemeConfig::LocationArea { .. } => None,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            SchemeConfig::Distance { .. } => "distance",
            SchemeConfig::LocationArea { .. } => "la",
        }
    }
}

/// What caused an HLR update.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum UpdateTrigger {
    Attach,
    DistanceThreshold,
    LaChange,
}

impl UpdateTrigger {
    pub fn as_str(&self) -> &'static str {
        match self {
            UpdateTrigger::Attach => "attach",
            UpdateTrigger::DistanceThreshold => "distance_threshold",
            UpdateTrigger::LaChange => "la_change",
        }
    }
}

impl fmt::Display for UpdateTrigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One update row sent to the HLR: the user's profile snapshot at trigger
/// time, the newly reported cell and the MM state the trigger fired in.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct UpdateRecord {
    pub user_id: u64,
    pub velocity: f64,
    pub direction: f64,
    pub cell_id: CellId,
    pub time: f64,
    pub state_at_trigger: MmState,
    pub trigger: UpdateTrigger,
}

/// Append-only HLR update log with non-decreasing timestamps.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HlrLog {
    records: Vec<UpdateRecord>,
}

impl HlrLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn append(&mut self, rec: UpdateRecord) -> Result<(), Error> {
        if let Some(last) = self.records.last() {
            if rec.time < last.time {
                return Err(Error::LogOrdering {
                    last: last.time,
                    new: rec.time,
                });
            }
        }
        self.records.push(rec);
        Ok(())
    }

    pub fn records(&self) -> &[UpdateRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Consult the active scheme after an attached station entered `new_cell`.
/// When the trigger fires the station is re-anchored at `new_cell` and the
/// HLR update is returned.
pub fn check_update(
    scheme: &SchemeConfig,
    ms: &mut MobileStation,
    new_cell: CellId,
    grid: &Grid,
    now: f64,
) -> Result<Option<UpdateRecord>, Error> {
    if ms.state == MmState::Idle {
        return Err(Error::StateMachine(format!(
            "update check on detached station {}",
            ms.user_id
        )));
    }
    let anchor = ms.anchor_cell.ok_or_else(|| {
        Error::StateMachine(format!("attached station {} has no anchor cell", ms.user_id))
    })?;
    match scheme {
        SchemeConfig::Distance { .. } => {
            let threshold = scheme.threshold_for(ms.user_id).expect("distance scheme");
            if grid.hop_between(new_cell, anchor) >= threshold {
                ms.anchor_cell = Some(new_cell);
                ms.registered_la = Some(grid.la_of(new_cell));
                Ok(Some(ms.emit_update(new_cell, now, UpdateTrigger::DistanceThreshold)))
            } else {
                Ok(None)
            }
        }
        SchemeConfig::LocationArea { .. } => {
            let new_la = grid.la_of(new_cell);
            if ms.registered_la != Some(new_la) {
                ms.registered_la = Some(new_la);
                ms.anchor_cell = Some(new_cell);
                Ok(Some(ms.emit_update(new_cell, now, UpdateTrigger::LaChange)))
            } else {
                Ok(None)
            }
        }
    }
}

/// Cells the network polls to locate `ms` for a downlink arrival. The cost
/// of the page is the cardinality of the returned set.
///
/// READY stations are pinpointed to their current cell. STANDBY stations are
/// paged over the distance scheme's residing area (all grid cells within the
/// threshold of the anchor) or over the whole registered LA.
pub fn paging_set(
    scheme: &SchemeConfig,
    ms: &MobileStation,
    grid: &Grid,
) -> Result<BTreeSet<CellId>, Error> {
    if ms.state == MmState::Idle {
        return Err(Error::Unreachable { user_id: ms.user_id });
    }
    let current = ms.current_cell.ok_or_else(|| {
        Error::StateMachine(format!("attached station {} has no current cell", ms.user_id))
    })?;
    match ms.state {
        MmState::Ready => Ok(BTreeSet::from([current])),
        MmState::Standby => match scheme {
            SchemeConfig::Distance { .. } => {
                let anchor = ms.anchor_cell.ok_or_else(|| {
                    Error::StateMachine(format!(
                        "attached station {} has no anchor cell",
                        ms.user_id
                    ))
                })?;
                let threshold = scheme.threshold_for(ms.user_id).expect("distance scheme");
                Ok(grid.cells_within(anchor, threshold))
            }
            SchemeConfig::LocationArea { .. } => {
                let la = ms.registered_la.ok_or_else(|| {
                    Error::StateMachine(format!(
                        "attached station {} has no registered LA",
                        ms.user_id
                    ))
                })?;
                Ok(grid.la_cells(la).collect())
            }
        },
        MmState::Idle => unreachable!(),
    }
}
