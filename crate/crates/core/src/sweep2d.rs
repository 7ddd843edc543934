//! Height-map column sweep for two-dimensional canonical boxes.
//!
//! The sweep walks the canonical x-coordinates `1..=2n` left to right. Each
//! step is the single boundary with that rank: entering a rectangle raises a
//! height column over its row span, leaving one first scans that span for
//! row runs on which the height is locally maximal — each such run, closed on
//! the right by the current column, is a maximal intersection candidate —
//! and then lowers the column. A last-entered marker per row supplies the
//! left x-boundary of an emitted box and suppresses re-emission of regions
//! already reported at an earlier column: every emission clears the marker at
//! the run's bottom row, and a run is only emitted while all of its markers
//! are set.
//!
//! Because canonical coordinates are distinct, adjacent rows differ by at
//! most one covering rectangle; the height comparisons alone therefore
//! detect exactly the strict plateaus of the covering structure.

use std::num::NonZeroU32;

use thiserror::Error;

use crate::geometry::{
    validate_canonical, CanonicalBox, CanonicalInterval, CanonicalMaximal, GeometryError,
};
use crate::oracle::clique_of;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SweepError {
    #[error(transparent)]
    Input(#[from] GeometryError),
    #[error("dataset is {got}-dimensional, this reducer handles exactly {expected}")]
    WrongDimension { got: usize, expected: usize },
    #[error("dataset is {got}-dimensional, need at least {min}")]
    DimensionTooSmall { got: usize, min: usize },
}

/// Last-entered marker of one slice cell: cleared (blocking emission) or the
/// index of the box that most recently entered the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EntryMark(Option<NonZeroU32>);

impl EntryMark {
    /// A cleared marker; rows start cleared and emissions clear one again.
    pub const CLEAR: EntryMark = EntryMark(None);

    pub fn entered(box_index: usize) -> Self {
        EntryMark(Some(
            NonZeroU32::new(u32::try_from(box_index + 1).expect("box index fits in u32"))
                .expect("index + 1 is nonzero"),
        ))
    }

    pub fn box_index(self) -> Option<usize> {
        self.0.map(|nz| nz.get() as usize - 1)
    }

    pub fn is_clear(self) -> bool {
        self.0.is_none()
    }
}

/// Mutable state of the column sweep over rows `1..=2n`.
///
/// Index 0 of both arrays is unused so that canonical row `k` lives at
/// index `k`.
#[derive(Clone, Debug)]
pub struct SweepState {
    /// `h[k]`: number of active rectangles covering row `k` at the current column.
    pub h: Vec<u32>,
    /// `e[k]`: last-entered marker for row `k`.
    pub e: Vec<EntryMark>,
    /// Current sweep column (informational).
    pub column: u32,
}

impl SweepState {
    pub fn new(n: usize) -> Self {
        SweepState {
            h: vec![0; 2 * n + 1],
            e: vec![EntryMark::CLEAR; 2 * n + 1],
            column: 0,
        }
    }

    /// Cells allocated for the sweep: two arrays spanning the `2n` rows.
    pub fn workspace_cells(&self) -> usize {
        self.h.len() + self.e.len()
    }
}

/// Scans the row span `(rows.lo, rows.hi]` of a leaving rectangle for
/// locally maximal height runs and emits each run whose markers are all set.
///
/// Must run before the leaving rectangle's rows are decremented. A run
/// `(b, k]` is emitted as the box `(left_of(owner), column] × (b, k]`, where
/// `owner` is the last-entered marker at the run's top row `k`; the marker at
/// the run's bottom row `b+1` is then cleared so the same region cannot be
/// emitted again at a later column. Emissions come bottom-up.
pub fn scan_emit<F>(
    state: &mut SweepState,
    rows: CanonicalInterval,
    column: u32,
    left_of: F,
) -> Vec<(CanonicalInterval, CanonicalInterval)>
where
    F: Fn(usize) -> u32,
{
    let (y1, y2) = (rows.lo, rows.hi);
    let mut out = Vec::new();
    // Bottom of the candidate run; 0 means no candidate is open. The span
    // bottom starts one because the leaving rectangle covers row y1+1 but
    // not row y1, so the height always rises into the span.
    let mut b = y1;

    let mut try_emit = |state: &mut SweepState, b: u32, k: u32| {
        if (b + 1..=k).any(|r| state.e[r as usize].is_clear()) {
            return;
        }
        let owner = state.e[k as usize].box_index().expect("marker checked above");
        out.push((
            CanonicalInterval::new(left_of(owner), column),
            CanonicalInterval::new(b, k),
        ));
        state.e[(b + 1) as usize] = EntryMark::CLEAR;
    };

    for k in y1 + 1..y2 {
        if state.h[(k + 1) as usize] < state.h[k as usize] && b > 0 {
            try_emit(state, b, k);
            b = 0;
        }
        if state.h[(k + 1) as usize] > state.h[k as usize] {
            b = k;
        }
    }
    if b > 0 {
        try_emit(state, b, y2);
    }
    out
}

/// Result of a reduction run that reports regions only (no cliques),
/// together with the number of workspace cells the sweep allocated.
#[derive(Clone, Debug)]
pub struct SweepRun {
    /// Maximal intersections in canonical coordinates, in emission order.
    pub regions: Vec<Vec<CanonicalInterval>>,
    /// Total cells of sweep working memory (excludes input and output).
    pub workspace_cells: usize,
}

#[derive(Clone, Copy)]
enum Event {
    Enter(usize),
    Leave(usize),
}

/// Runs the column sweep and returns the maximal intersections without
/// computing cliques. Emission order is ascending right x-boundary, ties
/// bottom-up by row.
pub fn reduce2d_regions(rects: &[CanonicalBox]) -> Result<SweepRun, SweepError> {
    let d = validate_canonical(rects)?;
    if d != 2 {
        return Err(SweepError::WrongDimension { got: d, expected: 2 });
    }
    let n = rects.len();
    let size = 2 * n;

    // Canonical coordinates are a permutation of 1..=2n per axis, so the
    // event at step j is simply the rectangle with x-boundary j.
    let mut events: Vec<Option<Event>> = vec![None; size + 1];
    for (i, r) in rects.iter().enumerate() {
        events[r.intervals[0].lo as usize] = Some(Event::Enter(i));
        events[r.intervals[0].hi as usize] = Some(Event::Leave(i));
    }

    let mut state = SweepState::new(n);
    let workspace_cells = state.workspace_cells();
    let mut regions = Vec::new();

    for j in 1..=size as u32 {
        state.column = j;
        match events[j as usize].expect("every column is exactly one boundary") {
            Event::Enter(i) => {
                let rows = rects[i].intervals[1];
                for k in rows.cells() {
                    state.h[k as usize] += 1;
                    state.e[k as usize] = EntryMark::entered(i);
                }
            }
            Event::Leave(i) => {
                let rows = rects[i].intervals[1];
                let emitted = scan_emit(&mut state, rows, j, |owner| rects[owner].intervals[0].lo);
                regions.extend(emitted.into_iter().map(|(x, y)| vec![x, y]));
                for k in rows.cells() {
                    state.h[k as usize] -= 1;
                }
            }
        }
    }
    debug_assert!(state.h.iter().all(|&h| h == 0), "every entered rectangle left");

    Ok(SweepRun { regions, workspace_cells })
}

/// Computes all maximal intersections of a two-dimensional canonical dataset
/// together with their cliques.
pub fn reduce2d(rects: &[CanonicalBox]) -> Result<Vec<CanonicalMaximal>, SweepError> {
    let run = reduce2d_regions(rects)?;
    Ok(run
        .regions
        .into_iter()
        .map(|intervals| {
            let clique = clique_of(&intervals, rects);
            CanonicalMaximal { intervals, clique }
        })
        .collect())
}
