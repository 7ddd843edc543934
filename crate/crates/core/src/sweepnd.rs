//! Height-map slice sweep for canonical boxes in any dimension `d >= 2`.
//!
//! Generalizes the two-dimensional column sweep: the sweep walks the last
//! axis, and the per-row height column becomes a `(d-1)`-dimensional slice of
//! heights. When a box leaves, the candidate regions are the connected
//! components of constant height inside the leaving box's slice footprint
//! that have no higher neighbor inside the footprint. Neighbors across the
//! footprint boundary are crossings of the leaving box's own face — no other
//! box shares that coordinate — so they sit exactly one lower and never need
//! inspection.
//!
//! An accepted component always tiles its bounding box: its cells share one
//! covering set, whose intersection is itself a box, and a cell of that box
//! adjacent to the component either has equal height (hence is flooded into
//! the component) or greater height (hence the component was rejected).
//! Emission, marker ownership, and suppression otherwise mirror the
//! two-dimensional sweep: all last-entered markers of a component must be
//! set, the owner is read at the lexicographically greatest cell, and the
//! marker at the lexicographically least cell is cleared on emission.

use std::cmp::Ordering;

use crate::geometry::{validate_canonical, CanonicalBox, CanonicalInterval, CanonicalMaximal};
use crate::oracle::clique_of;
use crate::sweep2d::{EntryMark, SweepError, SweepRun};

/// Mutable state of the slice sweep: a `(d-1)`-dimensional grid of heights,
/// last-entered markers, and flood-fill visit epochs, stored row-major with
/// `2n + 1` entries per axis (index 0 unused so canonical cell `k` lives at
/// offset `k`).
#[derive(Clone, Debug)]
pub struct SliceState {
    /// Number of boxes covering each slice cell at the current sweep position.
    pub h: Vec<u32>,
    /// Last-entered marker per slice cell.
    pub e: Vec<EntryMark>,
    visited: Vec<u64>,
    epoch: u64,
    strides: Vec<usize>,
}

/// Advances `cell` one step in lexicographic order through the cells
/// `footprint[a].lo + 1 ..= footprint[a].hi` of each axis; false when done.
fn advance_in(cell: &mut [u32], footprint: &[CanonicalInterval]) -> bool {
    for a in (0..cell.len()).rev() {
        if cell[a] < footprint[a].hi {
            cell[a] += 1;
            for b in a + 1..cell.len() {
                cell[b] = footprint[b].lo + 1;
            }
            return true;
        }
    }
    false
}

impl SliceState {
    /// Workspace for sweeping `n` boxes of dimension `d` along their last axis.
    pub fn new(n: usize, d: usize) -> Self {
        assert!(d >= 2, "slice sweep needs at least two axes");
        let width = 2 * n + 1;
        let mut strides = vec![1usize; d - 1];
        for a in (0..d - 2).rev() {
            strides[a] = strides[a + 1]
                .checked_mul(width)
                .expect("slice workspace size overflows usize");
        }
        let len = strides[0].checked_mul(width).expect("slice workspace size overflows usize");
        SliceState {
            h: vec![0; len],
            e: vec![EntryMark::CLEAR; len],
            visited: vec![0; len],
            epoch: 0,
            strides,
        }
    }

    /// Cells of sweep working memory: the three slice-sized arrays.
    pub fn workspace_cells(&self) -> usize {
        self.h.len() + self.e.len() + self.visited.len()
    }

    fn flat_of(&self, cell: &[u32]) -> usize {
        cell.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    fn coords_of(&self, flat: usize, coords: &mut [u32]) {
        let mut rem = flat;
        for (a, &stride) in self.strides.iter().enumerate() {
            coords[a] = (rem / stride) as u32;
            rem %= stride;
        }
    }

    /// Raises the height over `footprint` and stamps the entering box's marker.
    pub fn enter(&mut self, footprint: &[CanonicalInterval], box_index: usize) {
        debug_assert_eq!(footprint.len(), self.strides.len());
        let mark = EntryMark::entered(box_index);
        let mut cell: Vec<u32> = footprint.iter().map(|iv| iv.lo + 1).collect();
        loop {
            let flat = self.flat_of(&cell);
            self.h[flat] += 1;
            self.e[flat] = mark;
            if !advance_in(&mut cell, footprint) {
                break;
            }
        }
    }

    /// Lowers the height over `footprint`; call after [`SliceState::slice_scan`].
    pub fn decrement(&mut self, footprint: &[CanonicalInterval]) {
        debug_assert_eq!(footprint.len(), self.strides.len());
        let mut cell: Vec<u32> = footprint.iter().map(|iv| iv.lo + 1).collect();
        loop {
            let flat = self.flat_of(&cell);
            debug_assert!(self.h[flat] > 0);
            self.h[flat] -= 1;
            if !advance_in(&mut cell, footprint) {
                break;
            }
        }
    }

    /// Scans a leaving box's footprint for emittable components.
    ///
    /// Returns each accepted component's bounding box in slice coordinates
    /// together with the owning box index read from the last-entered marker,
    /// in lexicographic order of the components' least cells. Must run
    /// before [`SliceState::decrement`] for the same footprint.
    pub fn slice_scan(&mut self, footprint: &[CanonicalInterval]) -> Vec<(Vec<CanonicalInterval>, usize)> {
        let d_slice = self.strides.len();
        debug_assert_eq!(footprint.len(), d_slice);
        self.epoch += 1;
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut coords = vec![0u32; d_slice];
        let mut cell: Vec<u32> = footprint.iter().map(|iv| iv.lo + 1).collect();

        loop {
            let seed = self.flat_of(&cell);
            if self.visited[seed] != self.epoch {
                self.visited[seed] = self.epoch;
                let level = self.h[seed];
                let mut dominated = false;
                let mut all_marked = true;
                let mut cells = 0usize;
                let mut bbox_lo = cell.clone();
                let mut bbox_hi = cell.clone();
                let mut top = seed;
                stack.clear();
                stack.push(seed);
                while let Some(flat) = stack.pop() {
                    cells += 1;
                    top = top.max(flat);
                    all_marked &= !self.e[flat].is_clear();
                    self.coords_of(flat, &mut coords);
                    for a in 0..d_slice {
                        bbox_lo[a] = bbox_lo[a].min(coords[a]);
                        bbox_hi[a] = bbox_hi[a].max(coords[a]);
                        if coords[a] > footprint[a].lo + 1 {
                            self.probe(flat - self.strides[a], level, &mut dominated, &mut stack);
                        }
                        if coords[a] < footprint[a].hi {
                            self.probe(flat + self.strides[a], level, &mut dominated, &mut stack);
                        }
                    }
                }
                if !dominated && all_marked {
                    debug_assert_eq!(
                        cells,
                        bbox_lo
                            .iter()
                            .zip(&bbox_hi)
                            .map(|(&lo, &hi)| (hi - lo + 1) as usize)
                            .product::<usize>(),
                        "an accepted component tiles its bounding box"
                    );
                    let owner = self.e[top].box_index().expect("all markers set");
                    let slice_box = bbox_lo
                        .iter()
                        .zip(&bbox_hi)
                        .map(|(&lo, &hi)| CanonicalInterval::new(lo - 1, hi))
                        .collect();
                    // Clearing the least cell blocks every later attempt to
                    // re-emit a region containing it.
                    self.e[seed] = EntryMark::CLEAR;
                    out.push((slice_box, owner));
                }
            }
            if !advance_in(&mut cell, footprint) {
                break;
            }
        }
        out
    }

    /// Inspects one in-footprint neighbor during a flood fill: a higher
    /// neighbor dominates the component, an equal one joins it.
    fn probe(&mut self, nb: usize, level: u32, dominated: &mut bool, stack: &mut Vec<usize>) {
        match self.h[nb].cmp(&level) {
            Ordering::Greater => *dominated = true,
            Ordering::Equal => {
                if self.visited[nb] != self.epoch {
                    self.visited[nb] = self.epoch;
                    stack.push(nb);
                }
            }
            Ordering::Less => {}
        }
    }
}

#[derive(Clone, Copy)]
enum Event {
    Enter(usize),
    Leave(usize),
}

/// Runs the slice sweep and returns the maximal intersections without
/// computing cliques.
pub fn reduce_nd_regions(rects: &[CanonicalBox]) -> Result<SweepRun, SweepError> {
    let d = validate_canonical(rects)?;
    if d < 2 {
        return Err(SweepError::DimensionTooSmall { got: d, min: 2 });
    }
    let n = rects.len();
    let size = 2 * n;
    let sweep_axis = d - 1;

    let mut events: Vec<Option<Event>> = vec![None; size + 1];
    for (i, r) in rects.iter().enumerate() {
        events[r.intervals[sweep_axis].lo as usize] = Some(Event::Enter(i));
        events[r.intervals[sweep_axis].hi as usize] = Some(Event::Leave(i));
    }

    let mut state = SliceState::new(n, d);
    let workspace_cells = state.workspace_cells();
    let mut regions = Vec::new();

    for j in 1..=size as u32 {
        match events[j as usize].expect("every sweep coordinate is exactly one boundary") {
            Event::Enter(i) => state.enter(&rects[i].intervals[..sweep_axis], i),
            Event::Leave(i) => {
                let footprint = &rects[i].intervals[..sweep_axis];
                for (mut region, owner) in state.slice_scan(footprint) {
                    region.push(CanonicalInterval::new(
                        rects[owner].intervals[sweep_axis].lo,
                        j,
                    ));
                    regions.push(region);
                }
                state.decrement(footprint);
            }
        }
    }
    debug_assert!(state.h.iter().all(|&h| h == 0), "every entered box left");

    Ok(SweepRun { regions, workspace_cells })
}

/// Computes all maximal intersections of a canonical dataset of any
/// dimension `d >= 2`, together with their cliques.
pub fn reduce_nd(rects: &[CanonicalBox]) -> Result<Vec<CanonicalMaximal>, SweepError> {
    let run = reduce_nd_regions(rects)?;
    Ok(run
        .regions
        .into_iter()
        .map(|intervals| {
            let clique = clique_of(&intervals, rects);
            CanonicalMaximal { intervals, clique }
        })
        .collect())
}
