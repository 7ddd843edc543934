//! Exhaustive grid reference for the sweep reducers.
//!
//! Works directly from the definition: enumerate every unit cell of the
//! canonical grid, record which boxes cover it, and keep the covering sets
//! that are inclusion-maximal. Exponential in the dimension and quadratic-ish
//! in `n` by design — it exists to certify the sweeps at small sizes, never
//! to be fast.

use std::collections::HashMap;

use thiserror::Error;

use crate::geometry::{
    region_contained_in, validate_canonical, CanonicalBox, CanonicalInterval, CanonicalMaximal,
    GeometryError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Input(#[from] GeometryError),
    #[error("dimension mismatch: dataset is {got}-dimensional, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("instance too large for exhaustive reduction: n={n} exceeds the d={d} bound of {max_n}")]
    TooLarge { n: usize, d: usize, max_n: usize },
}

/// Largest `n` the oracle accepts by default for a given dimension. The grid
/// has `(2n)^d` cells and each cell costs `O(n)`, so the bounds shrink fast.
pub fn default_max_n(d: usize) -> usize {
    match d {
        0 | 1 | 2 => 200,
        3 => 25,
        4 => 12,
        _ => {
            // Keep the cell count of higher dimensions near the d=4 budget.
            let budget: f64 = 400_000.0;
            (budget.powf(1.0 / d as f64) / 2.0).floor().max(1.0) as usize
        }
    }
}

/// Exhaustively computes all maximal intersections of a canonical dataset,
/// sorted by their canonical coordinates. See [`oracle_reduce_with_max_n`].
pub fn oracle_reduce(rects: &[CanonicalBox], d: usize) -> Result<Vec<CanonicalMaximal>, OracleError> {
    oracle_reduce_with_max_n(rects, d, default_max_n(d))
}

/// As [`oracle_reduce`] with an explicit size bound instead of the default.
///
/// A covering set is maximal iff it is not a strict subset of any cell's
/// covering set; its region is simultaneously the per-axis intersection of
/// its members and the bounding box of its cells, and both characterizations
/// are computed and asserted equal here.
pub fn oracle_reduce_with_max_n(
    rects: &[CanonicalBox],
    d: usize,
    max_n: usize,
) -> Result<Vec<CanonicalMaximal>, OracleError> {
    let got = validate_canonical(rects)?;
    if got != d {
        return Err(OracleError::DimensionMismatch { got, expected: d });
    }
    let n = rects.len();
    if n > max_n {
        return Err(OracleError::TooLarge { n, d, max_n });
    }

    let side = 2 * n; // cells per axis: 1..=2n (cell 1 is never covered)
    let mut grid_h = vec![0u32; pow_usize(side + 1, d)];
    let strides = row_major_strides(side + 1, d);

    struct Agg {
        count: usize,
        /// Per-axis (min cell, max cell) over the cells carrying this set.
        bbox: Vec<(u32, u32)>,
    }
    let mut sets: HashMap<Vec<u32>, Agg> = HashMap::new();

    // Pass 1: covering set of every cell, aggregated per distinct set.
    let mut cell = vec![1u32; d];
    let mut cover: Vec<u32> = Vec::with_capacity(n);
    loop {
        cover.clear();
        for (i, r) in rects.iter().enumerate() {
            if r.intervals.iter().zip(&cell).all(|(iv, &c)| iv.contains_cell(c)) {
                cover.push(i as u32);
            }
        }
        if !cover.is_empty() {
            let idx = flat_index(&cell, &strides);
            grid_h[idx] = cover.len() as u32;
            match sets.get_mut(cover.as_slice()) {
                Some(agg) => {
                    agg.count += 1;
                    for (b, &c) in agg.bbox.iter_mut().zip(&cell) {
                        b.0 = b.0.min(c);
                        b.1 = b.1.max(c);
                    }
                }
                None => {
                    sets.insert(
                        cover.clone(),
                        Agg { count: 1, bbox: cell.iter().map(|&c| (c, c)).collect() },
                    );
                }
            }
        }
        if !advance(&mut cell, side as u32, d) {
            break;
        }
    }

    // Pass 2: a set is maximal iff no cell of its member intersection carries
    // more boxes than the set itself.
    let mut out = Vec::new();
    for (cover, agg) in &sets {
        let region: Vec<CanonicalInterval> = (0..d)
            .map(|axis| {
                let lo = cover
                    .iter()
                    .map(|&i| rects[i as usize].intervals[axis].lo)
                    .max()
                    .unwrap();
                let hi = cover
                    .iter()
                    .map(|&i| rects[i as usize].intervals[axis].hi)
                    .min()
                    .unwrap();
                CanonicalInterval::new(lo, hi)
            })
            .collect();
        assert!(
            region.iter().all(|iv| iv.lo < iv.hi),
            "a covering set read off a cell has that cell in its intersection"
        );

        let size = cover.len() as u32;
        let mut dominated = false;
        let mut volume = 1usize;
        let mut c: Vec<u32> = region.iter().map(|iv| iv.lo + 1).collect();
        'region: loop {
            if grid_h[flat_index(&c, &strides)] > size {
                dominated = true;
                break 'region;
            }
            // Odometer over the region's cells.
            let mut axis = d;
            loop {
                if axis == 0 {
                    break 'region;
                }
                axis -= 1;
                if c[axis] < region[axis].hi {
                    c[axis] += 1;
                    c[axis + 1..]
                        .iter_mut()
                        .zip(&region[axis + 1..])
                        .for_each(|(x, iv)| *x = iv.lo + 1);
                    break;
                }
            }
        }
        if dominated {
            continue;
        }
        (0..d).for_each(|axis| volume *= (region[axis].hi - region[axis].lo) as usize);

        // The cells carrying exactly this set must tile the member
        // intersection: same bounding box, same count. A maximal set split
        // over disconnected regions would fail here.
        assert_eq!(agg.count, volume, "maximal covering set does not tile its region");
        for (axis, (b, iv)) in agg.bbox.iter().zip(&region).enumerate() {
            assert_eq!(
                (b.0, b.1),
                (iv.lo + 1, iv.hi),
                "bounding box of cells disagrees with member intersection on axis {axis}"
            );
        }

        out.push(CanonicalMaximal {
            intervals: region,
            clique: cover.iter().map(|&i| i as usize).collect(),
        });
    }

    out.sort();
    Ok(out)
}

/// The clique of a canonical region: sorted indices of every box containing it.
pub fn clique_of(region: &[CanonicalInterval], rects: &[CanonicalBox]) -> Vec<usize> {
    rects
        .iter()
        .enumerate()
        .filter(|(_, r)| region_contained_in(region, r))
        .map(|(i, _)| i)
        .collect()
}

fn pow_usize(base: usize, exp: usize) -> usize {
    base.checked_pow(exp as u32).expect("oracle grid size overflow")
}

fn row_major_strides(extent: usize, d: usize) -> Vec<usize> {
    let mut strides = vec![1usize; d];
    for axis in (0..d.saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * extent;
    }
    strides
}

fn flat_index(cell: &[u32], strides: &[usize]) -> usize {
    cell.iter().zip(strides).map(|(&c, &s)| c as usize * s).sum()
}

/// Advances a d-digit odometer over `1..=max`; false when exhausted.
fn advance(cell: &mut [u32], max: u32, d: usize) -> bool {
    for axis in (0..d).rev() {
        if cell[axis] < max {
            cell[axis] += 1;
            cell[axis + 1..].iter_mut().for_each(|c| *c = 1);
            return true;
        }
    }
    false
}
