//! GPRS mobility-management state machine for one station: IDLE, READY and
//! STANDBY transitions driven by attach, timers, traffic sessions, coverage
//! changes and cell changes.
//!
//! `current_cell` tracks radio coverage, not registration: the simulation
//! loop keeps it in sync with the station's physical position before it
//! delivers a `CoverageRegained` event, and `handle_event` maintains it for
//! cell changes and coverage loss. `anchor_cell` and `registered_la` exist
//! exactly while the station is attached (READY or STANDBY).

use std::fmt;

use crate::hexgrid::{CellId, Grid, LaId};
use crate::mobility::Kinematics;
use crate::schemes::{self, SchemeConfig, UpdateRecord, UpdateTrigger};
use crate::Error;

/// The three GPRS mobility-management states.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum MmState {
    Idle,
    Ready,
    Standby,
}

impl MmState {
    pub fn as_str(&self) -> &'static str {
        match self {
            MmState::Idle => "idle",
            MmState::Ready => "ready",
            MmState::Standby => "standby",
        }
    }
}

impl fmt::Display for MmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Events delivered to the state machine by the simulation loop.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MmEvent {
    SessionStart,
    SessionEnd,
    ReadyTimerExpiry,
    StandbyTimerExpiry,
    CoverageLost,
    CoverageRegained,
    CellChanged(CellId),
}

/// Timer durations armed on the corresponding state entries.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TimerSettings {
    pub ready: f64,
    pub standby: f64,
}

/// Per-station event counters, aggregated into the run report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Scheme-triggered HLR updates sent while READY.
    pub hlr_updates_ready: u64,
    /// Scheme-triggered HLR updates sent while STANDBY.
    pub hlr_updates_standby: u64,
    /// Cell-level handovers noticed while READY.
    pub cell_updates: u64,
    /// Attach procedures (each sends one HLR registration update).
    pub attaches: u64,
}

impl Counters {
    /// All HLR updates this station has produced.
    pub fn hlr_total(&self) -> u64 {
        self.hlr_updates_ready + self.hlr_updates_standby + self.attaches
    }
}

/// One roaming terminal: kinematics plus mobility-management state.
#[derive(Clone, Debug, PartialEq)]
pub struct MobileStation {
    pub user_id: u64,
    pub kinematics: Kinematics,
    pub state: MmState,
    /// Cell the station is physically in; `None` iff out of coverage.
    pub current_cell: Option<CellId>,
    /// Last cell reported to the HLR; center of the distance scheme's
    /// residing area. Present iff attached.
    pub anchor_cell: Option<CellId>,
    /// Location area registered at the last update. Present iff attached.
    pub registered_la: Option<LaId>,
    pub ready_timer_remaining: f64,
    pub standby_timer_remaining: f64,
    pub counters: Counters,
    timers: TimerSettings,
}

impl MobileStation {
    /// A detached (IDLE) station; coverage detection attaches it later.
    pub fn new(user_id: u64, kinematics: Kinematics, timers: TimerSettings) -> Self {
        Self {
            user_id,
            kinematics,
            state: MmState::Idle,
            current_cell: None,
            anchor_cell: None,
            registered_la: None,
            ready_timer_remaining: 0.0,
            standby_timer_remaining: 0.0,
            counters: Counters::default(),
            timers,
        }
    }

    pub fn is_attached(&self) -> bool {
        self.state != MmState::Idle
    }

    /// Attach an IDLE station at `cell`, moving it to READY and anchoring it
    /// there. Returns the registration update sent to the HLR.
    pub fn attach(&mut self, cell: CellId, grid: &Grid, now: f64) -> Result<UpdateRecord, Error> {
        if self.state != MmState::Idle {
            return Err(Error::StateMachine(format!(
                "attach on station {} in state {}",
                self.user_id, self.state
            )));
        }
        if self.current_cell != Some(cell) {
            return Err(Error::StateMachine(format!(
                "attach cell {cell} is not station {}'s current cell",
                self.user_id
            )));
        }
        self.state = MmState::Ready;
        self.anchor_cell = Some(cell);
        self.registered_la = Some(grid.la_of(cell));
        self.ready_timer_remaining = self.timers.ready;
        Ok(self.emit_update(cell, now, UpdateTrigger::Attach))
    }

    /// Apply one event. Combinations outside the transition table are
    /// deliberate no-ops. At most one HLR update results from any event.
    pub fn handle_event(
        &mut self,
        ev: MmEvent,
        scheme: &SchemeConfig,
        grid: &Grid,
        now: f64,
    ) -> Option<UpdateRecord> {
        use MmEvent::*;
        use MmState::*;
        match (self.state, ev) {
            (Ready, ReadyTimerExpiry) => {
                self.state = Standby;
                self.standby_timer_remaining = self.timers.standby;
                None
            }
            (Standby, StandbyTimerExpiry) => {
                // MM context is deleted; only a fresh attach brings it back.
                self.detach();
                None
            }
            (Standby, SessionStart) => {
                self.state = Ready;
                self.ready_timer_remaining = self.timers.ready;
                None
            }
            // The READY timer runs from the last packet activity, so both
            // ends of a session re-arm it.
            (Ready, SessionStart) | (Ready, SessionEnd) => {
                self.ready_timer_remaining = self.timers.ready;
                None
            }
            (_, CoverageLost) => {
                self.detach();
                self.current_cell = None;
                None
            }
            (Idle, CoverageRegained) => match self.current_cell {
                Some(cell) => self.attach(cell, grid, now).ok(),
                None => {
                    log::debug!(
                        "station {}: CoverageRegained without a current cell, ignored",
                        self.user_id
                    );
                    None
                }
            },
            (Ready | Standby, CellChanged(new_cell)) => {
                self.current_cell = Some(new_cell);
                if self.state == Ready {
                    self.counters.cell_updates += 1;
                }
                match schemes::check_update(scheme, self, new_cell, grid, now) {
                    Ok(rec) => rec,
                    Err(e) => {
                        log::debug!("station {}: scheme check skipped: {e}", self.user_id);
                        None
                    }
                }
            }
            (Idle, CellChanged(new_cell)) => {
                // Track the physical cell; a detached station never updates.
                self.current_cell = Some(new_cell);
                None
            }
            (state, ev) => {
                log::debug!("station {}: ignoring {ev:?} in {state}", self.user_id);
                None
            }
        }
    }

    /// Count down the timer of the current state, returning the expiry event
    /// to deliver once it runs out.
    pub fn tick_timers(&mut self, dt: f64) -> Option<MmEvent> {
        match self.state {
            MmState::Ready => {
                self.ready_timer_remaining -= dt;
                if self.ready_timer_remaining <= 0.0 {
                    self.ready_timer_remaining = 0.0;
                    Some(MmEvent::ReadyTimerExpiry)
                } else {
                    None
                }
            }
            MmState::Standby => {
                self.standby_timer_remaining -= dt;
                if self.standby_timer_remaining <= 0.0 {
                    self.standby_timer_remaining = 0.0;
                    Some(MmEvent::StandbyTimerExpiry)
                } else {
                    None
                }
            }
            MmState::Idle => None,
        }
    }

    fn detach(&mut self) {
        self.state = MmState::Idle;
        self.anchor_cell = None;
        self.registered_la = None;
    }

    /// Build an HLR update snapshotting the current kinematics, and bump the
    /// matching counter. All update emission goes through here.
    pub(crate) fn emit_update(
        &mut self,
        cell: CellId,
        now: f64,
        trigger: UpdateTrigger,
    ) -> UpdateRecord {
        match trigger {
            UpdateTrigger::Attach => self.counters.attaches += 1,
            UpdateTrigger::DistanceThreshold | UpdateTrigger::LaChange => match self.state {
                MmState::Ready => self.counters.hlr_updates_ready += 1,
                MmState::Standby => self.counters.hlr_updates_standby += 1,
                MmState::Idle => unreachable!("no updates are emitted while IDLE"),
            },
        }
        UpdateRecord {
            user_id: self.user_id,
            velocity: self.kinematics.speed,
            direction: self.kinematics.heading,
            cell_id: cell,
            time: now,
            state_at_trigger: self.state,
            trigger,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexgrid::{Grid, Point};

    fn grid() -> Grid {
        Grid::build(4, 7, 1.0, 2.0, 7).unwrap()
    }

    fn station() -> MobileStation {
        let kin = Kinematics {
            position: Point::new(0.0, 0.0),
            speed: 1.0,
            heading: 0.5,
        };
        MobileStation::new(
            0,
            kin,
            TimerSettings {
                ready: 50.0,
                standby: 2000.0,
            },
        )
    }

    fn attached_station(grid: &Grid, cell: CellId) -> MobileStation {
        let mut ms = station();
        ms.current_cell = Some(cell);
        ms.attach(cell, grid, 0.0).unwrap();
        ms
    }

    #[test]
    fn attach_moves_idle_station_to_ready() {
        let grid = grid();
        let mut ms = station();
        ms.current_cell = Some(CellId(3));
        let rec = ms.attach(CellId(3), &grid, 0.0).unwrap();
        assert_eq!(ms.state, MmState::Ready);
        assert_eq!(ms.anchor_cell, Some(CellId(3)));
        assert_eq!(ms.registered_la, Some(grid.la_of(CellId(3))));
        assert_eq!(ms.counters.attaches, 1);
        assert_eq!(rec.trigger, UpdateTrigger::Attach);
        assert_eq!(rec.state_at_trigger, MmState::Ready);
        assert_eq!(grid.hop_between(ms.current_cell.unwrap(), ms.anchor_cell.unwrap()), 0);
    }

    #[test]
    fn attach_on_attached_station_is_an_error() {
        let grid = grid();
        let mut ms = attached_station(&grid, CellId(3));
        assert!(ms.attach(CellId(3), &grid, 1.0).is_err());
    }

    #[test]
    fn attach_requires_matching_current_cell() {
        let grid = grid();
        let mut ms = station();
        ms.current_cell = Some(CellId(2));
        assert!(ms.attach(CellId(3), &grid, 0.0).is_err());
    }

    #[test]
    fn ready_timer_expiry_moves_to_standby() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = attached_station(&grid, CellId(0));
        let rec = ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 1.0);
        assert!(rec.is_none());
        assert_eq!(ms.state, MmState::Standby);
        assert_eq!(ms.standby_timer_remaining, 2000.0);
    }

    #[test]
    fn standby_timer_expiry_detaches() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = attached_station(&grid, CellId(0));
        ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 1.0);
        ms.handle_event(MmEvent::StandbyTimerExpiry, &scheme, &grid, 2.0);
        assert_eq!(ms.state, MmState::Idle);
        assert_eq!(ms.anchor_cell, None);
        assert_eq!(ms.registered_la, None);
        // The station is still physically in coverage.
        assert_eq!(ms.current_cell, Some(CellId(0)));
    }

    #[test]
    fn session_start_in_standby_returns_to_ready() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = attached_station(&grid, CellId(0));
        ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 1.0);
        assert_eq!(ms.state, MmState::Standby);
        ms.handle_event(MmEvent::SessionStart, &scheme, &grid, 2.0);
        assert_eq!(ms.state, MmState::Ready);
        assert_eq!(ms.ready_timer_remaining, 50.0);
    }

    #[test]
    fn session_activity_rearms_ready_timer() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = attached_station(&grid, CellId(0));
        for ev in [MmEvent::SessionStart, MmEvent::SessionEnd] {
            ms.tick_timers(30.0);
            assert_eq!(ms.ready_timer_remaining, 20.0);
            ms.handle_event(ev, &scheme, &grid, 30.0);
            assert_eq!(ms.ready_timer_remaining, 50.0);
            assert_eq!(ms.state, MmState::Ready);
        }
    }

    #[test]
    fn coverage_lost_detaches_from_any_state_without_update() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        for to_standby in [false, true] {
            let mut ms = attached_station(&grid, CellId(5));
            if to_standby {
                ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 1.0);
            }
            let rec = ms.handle_event(MmEvent::CoverageLost, &scheme, &grid, 2.0);
            assert!(rec.is_none());
            assert_eq!(ms.state, MmState::Idle);
            assert_eq!(ms.current_cell, None);
            assert_eq!(ms.anchor_cell, None);
        }
    }

    #[test]
    fn coverage_lost_then_regained_gives_fresh_anchor_from_any_state() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        for start in [MmState::Ready, MmState::Standby, MmState::Idle] {
            let mut ms = attached_station(&grid, CellId(5));
            match start {
                MmState::Ready => {}
                MmState::Standby => {
                    ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 0.5);
                }
                MmState::Idle => {
                    ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 0.5);
                    ms.handle_event(MmEvent::StandbyTimerExpiry, &scheme, &grid, 0.7);
                }
            }
            assert_eq!(ms.state, start);
            ms.handle_event(MmEvent::CoverageLost, &scheme, &grid, 1.0);
            assert_eq!(ms.state, MmState::Idle);
            // Re-entry happens in a different cell.
            ms.current_cell = Some(CellId(9));
            let rec = ms.handle_event(MmEvent::CoverageRegained, &scheme, &grid, 2.0).unwrap();
            assert_eq!(ms.state, MmState::Ready, "from {start}");
            assert_eq!(ms.anchor_cell, Some(CellId(9)));
            assert_eq!(rec.trigger, UpdateTrigger::Attach);
            assert_eq!(rec.cell_id, CellId(9));
        }
    }

    #[test]
    fn idle_cell_change_tracks_cell_but_emits_nothing() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = station();
        ms.current_cell = Some(CellId(0));
        let rec = ms.handle_event(MmEvent::CellChanged(CellId(27)), &scheme, &grid, 1.0);
        assert!(rec.is_none());
        assert_eq!(ms.state, MmState::Idle);
        assert_eq!(ms.current_cell, Some(CellId(27)));
        assert_eq!(ms.counters.hlr_total(), 0);
    }

    #[test]
    fn ready_cell_change_counts_cell_update() {
        let grid = grid();
        let scheme = SchemeConfig::distance(10);
        let mut ms = attached_station(&grid, CellId(0));
        ms.handle_event(MmEvent::CellChanged(CellId(1)), &scheme, &grid, 1.0);
        assert_eq!(ms.counters.cell_updates, 1);
        // Below threshold: no HLR update.
        assert_eq!(ms.counters.hlr_updates_ready, 0);
    }

    #[test]
    fn unknown_combinations_are_no_ops() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = station();
        for ev in [
            MmEvent::SessionStart,
            MmEvent::SessionEnd,
            MmEvent::ReadyTimerExpiry,
            MmEvent::StandbyTimerExpiry,
            MmEvent::CoverageRegained,
        ] {
            let before = ms.clone();
            let rec = ms.handle_event(ev, &scheme, &grid, 1.0);
            assert!(rec.is_none(), "{ev:?} on IDLE produced an update");
            assert_eq!(ms, before, "{ev:?} on IDLE changed state");
        }
    }

    #[test]
    fn timers_only_tick_in_their_state() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = attached_station(&grid, CellId(0));
        ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 1.0);
        let ready_before = ms.ready_timer_remaining;
        for _ in 0..10 {
            ms.tick_timers(1.0);
        }
        assert_eq!(ms.ready_timer_remaining, ready_before);
        assert_eq!(ms.standby_timer_remaining, 1990.0);
    }

    #[test]
    fn ready_timer_expires_after_its_duration() {
        let grid = grid();
        let scheme = SchemeConfig::distance(2);
        let mut ms = attached_station(&grid, CellId(0));
        let mut fired = None;
        for t in 1..=60 {
            if let Some(ev) = ms.tick_timers(1.0) {
                fired = Some((t, ev));
                break;
            }
        }
        assert_eq!(fired, Some((50, MmEvent::ReadyTimerExpiry)));
        ms.handle_event(MmEvent::ReadyTimerExpiry, &scheme, &grid, 50.0);
        assert_eq!(ms.state, MmState::Standby);
    }
}
