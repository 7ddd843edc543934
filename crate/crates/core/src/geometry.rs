//! Observation boxes, endpoint ordering, and the canonical rank transform.
//!
//! Interval-censored observations arrive as axis-aligned boxes whose endpoints
//! may be open, closed, or infinite, and whose coordinates may tie. Every
//! dataset is rank-transformed before a sweep runs: per axis the `2n`
//! endpoints are totally ordered (ties broken so that the transformed boxes
//! intersect exactly when the originals do) and replaced by their ranks
//! `1..=2n`. Downstream algorithms then operate on tie-free integer boxes and
//! results are mapped back to original coordinates at the end.

use std::fmt;

use thiserror::Error;

/// Coordinate scalar for box endpoints.
///
/// Only ordering and equality are required — `f64`, `f32`, integers, and
/// exact rational types all qualify. Equality is exact value equality; there
/// is no tolerance knob anywhere in the transform.
pub trait Coordinate: Clone + PartialOrd + fmt::Debug {}

impl<T: Clone + PartialOrd + fmt::Debug> Coordinate for T {}

/// A coordinate on the extended real line.
///
/// Infinities are symbolic, never sentinel values of `T`, so they order
/// correctly against every finite coordinate regardless of the scalar type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtReal<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T> ExtReal<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl<T> From<T> for ExtReal<T> {
    fn from(v: T) -> Self {
        ExtReal::Finite(v)
    }
}

impl<T: fmt::Display> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::Finite(v) => v.fmt(f),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}

/// Which end of an interval an endpoint closes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One interval endpoint of one observation box on one axis.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointDescriptor<T> {
    pub value: ExtReal<T>,
    /// Whether the endpoint value itself belongs to the interval.
    pub closed: bool,
    pub side: Side,
    pub axis: usize,
    /// Index of the owning box in its dataset (zero-based).
    pub box_index: usize,
}

/// Strict total order on the endpoints of one axis: `true` iff `a` sorts
/// strictly before `b`.
///
/// Distinct coordinates order by value (`-inf` below and `inf` above every
/// finite value). Coincident coordinates order so that the rank-transformed
/// intervals overlap exactly when the original intervals do:
///
/// * identical kind (same side, same closure) — owner index decides;
/// * a right endpoint meeting an opposite-closure left endpoint (closed/open
///   or open/closed) describes intervals that share no point, so the right
///   endpoint sorts first;
/// * otherwise the intervals do share a point, and the endpoint that is
///   closed-left or open-right sorts first.
///
/// The caller must ensure the values are mutually comparable (no NaN);
/// validated boxes cannot carry incomparable coordinates.
pub fn compare_endpoints<T: Coordinate>(
    a: &EndpointDescriptor<T>,
    b: &EndpointDescriptor<T>,
) -> bool {
    use std::cmp::Ordering;

    match a
        .value
        .partial_cmp(&b.value)
        .expect("endpoint coordinates must be mutually comparable")
    {
        Ordering::Less => return true,
        Ordering::Greater => return false,
        Ordering::Equal => {}
    }
    let (ra, rb) = (a.side == Side::Right, b.side == Side::Right);
    let (ca, cb) = (a.closed, b.closed);
    if ra == rb && ca == cb {
        return a.box_index < b.box_index;
    }
    if ra != rb && ca != cb {
        // Disjoint at the shared value: the right endpoint leaves first.
        return ra;
    }
    // Overlapping at the shared value: closed-left / open-right sorts first.
    ra != ca
}

/// One axis of an observation box: an interval on the extended real line.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisInterval<T> {
    pub lower: ExtReal<T>,
    pub lower_closed: bool,
    pub upper: ExtReal<T>,
    pub upper_closed: bool,
}

impl<T> AxisInterval<T> {
    pub fn new(lower: ExtReal<T>, lower_closed: bool, upper: ExtReal<T>, upper_closed: bool) -> Self {
        AxisInterval { lower, lower_closed, upper, upper_closed }
    }

    /// Half-open interval `(lo, hi]`, the usual censoring convention.
    pub fn open_closed(lo: T, hi: T) -> Self {
        AxisInterval::new(ExtReal::Finite(lo), false, ExtReal::Finite(hi), true)
    }

    /// Degenerate exact observation `[v, v]`.
    pub fn exact(v: T) -> Self
    where
        T: Clone,
    {
        AxisInterval::new(ExtReal::Finite(v.clone()), true, ExtReal::Finite(v), true)
    }

    /// Right-censored interval `(lo, inf)`.
    pub fn unbounded_above(lo: T) -> Self {
        AxisInterval::new(ExtReal::Finite(lo), false, ExtReal::PosInf, false)
    }

    /// Left-censored interval `(-inf, hi]`.
    pub fn unbounded_below(hi: T) -> Self {
        AxisInterval::new(ExtReal::NegInf, false, ExtReal::Finite(hi), true)
    }
}

/// Validation and canonical-input errors for box datasets.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("axis {axis}: interval is empty as a point set")]
    EmptyInterval { axis: usize },
    #[error("axis {axis}: -inf is only valid as a lower endpoint and inf as an upper endpoint")]
    MisplacedInfinity { axis: usize },
    #[error("box has no axes")]
    ZeroDimensional,
    #[error("dataset contains no boxes")]
    EmptyDataset,
    #[error("box {box_index} has dimension {got}, expected {expected}")]
    DimensionMismatch { box_index: usize, got: usize, expected: usize },
    #[error("canonical coordinate {value} on axis {axis} is outside 1..={max}")]
    CanonicalOutOfRange { axis: usize, value: u32, max: u32 },
    #[error("canonical coordinate {value} on axis {axis} appears more than once")]
    CanonicalDuplicate { axis: usize, value: u32 },
    #[error("canonical interval on axis {axis} has lo {lo} >= hi {hi}")]
    CanonicalEmpty { axis: usize, lo: u32, hi: u32 },
}

/// An axis-aligned observation box: one [`AxisInterval`] per axis.
///
/// Construction validates every axis, so a held value is always nonempty as a
/// point set. Closure flags on infinite endpoints are normalized to open,
/// since no real point attains them.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservationBox<T> {
    axes: Vec<AxisInterval<T>>,
}

impl<T: Coordinate> ObservationBox<T> {
    pub fn new(mut axes: Vec<AxisInterval<T>>) -> Result<Self, GeometryError> {
        if axes.is_empty() {
            return Err(GeometryError::ZeroDimensional);
        }
        for (axis, iv) in axes.iter_mut().enumerate() {
            if iv.lower == ExtReal::PosInf || iv.upper == ExtReal::NegInf {
                return Err(GeometryError::MisplacedInfinity { axis });
            }
            if !iv.lower.is_finite() {
                iv.lower_closed = false;
            }
            if !iv.upper.is_finite() {
                iv.upper_closed = false;
            }
            // Nonempty: lower < upper, or a finite point with both ends closed.
            // NaN coordinates fail both comparisons and are rejected here too.
            let lt = matches!(
                iv.lower.partial_cmp(&iv.upper),
                Some(std::cmp::Ordering::Less)
            );
            let point = iv.lower.is_finite()
                && iv.lower == iv.upper
                && iv.lower_closed
                && iv.upper_closed;
            if !lt && !point {
                return Err(GeometryError::EmptyInterval { axis });
            }
        }
        Ok(ObservationBox { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AxisInterval<T>] {
        &self.axes
    }

    pub fn axis(&self, a: usize) -> &AxisInterval<T> {
        &self.axes[a]
    }
}

/// A half-open integer interval `(lo, hi]` in canonical coordinates.
///
/// It covers the unit cells `lo+1..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalInterval {
    pub lo: u32,
    pub hi: u32,
}

impl CanonicalInterval {
    pub fn new(lo: u32, hi: u32) -> Self {
        CanonicalInterval { lo, hi }
    }

    /// Unit cells covered by the interval.
    pub fn cells(&self) -> std::ops::RangeInclusive<u32> {
        self.lo + 1..=self.hi
    }

    pub fn contains_cell(&self, cell: u32) -> bool {
        self.lo < cell && cell <= self.hi
    }

    /// Interval containment: `(other.lo, other.hi] ⊆ (self.lo, self.hi]`.
    pub fn contains(&self, other: &CanonicalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// A rank-transformed observation box; coordinates per axis are distinct
/// integers drawn from `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBox {
    pub intervals: Vec<CanonicalInterval>,
    /// Index of the source observation in its dataset.
    pub box_index: usize,
}

/// A maximal intersection in canonical coordinates together with its clique:
/// the sorted indices of every observation box containing it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalMaximal {
    pub intervals: Vec<CanonicalInterval>,
    pub clique: Vec<usize>,
}

/// Canonical containment of a region in a canonical box (axis-wise).
pub fn region_contained_in(region: &[CanonicalInterval], rect: &CanonicalBox) -> bool {
    debug_assert_eq!(region.len(), rect.intervals.len());
    region
        .iter()
        .zip(&rect.intervals)
        .all(|(r, b)| b.contains(r))
}

struct AxisMap<T> {
    /// All `2n` endpoint descriptors of the axis in canonical order; the
    /// descriptor at position `k-1` carries canonical coordinate `k`.
    endpoints: Vec<EndpointDescriptor<T>>,
    /// `included[k-1]` is true iff the real value at rank `k` belongs to
    /// canonical cell `k` (it belongs to cell `k+1` otherwise).
    included: Vec<bool>,
}

/// The record of one canonicalization: per axis, the sorted endpoints and the
/// cell-membership flags needed to map canonical boxes back to real ones.
pub struct CanonicalMap<T> {
    axes: Vec<AxisMap<T>>,
}

impl<T: Coordinate> CanonicalMap<T> {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of canonical coordinates per axis (`2n`).
    pub fn len(&self) -> usize {
        self.axes.first().map_or(0, |a| a.endpoints.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Maps a canonical region back to original coordinates.
    ///
    /// The lower bound of `(a, b]` is the real value at rank `a`, closed
    /// exactly when that value lies outside cell `a`; the upper bound is the
    /// value at rank `b`, closed exactly when that value lies inside cell
    /// `b`. For a region emitted by a reduction the result equals, as a point
    /// set, the intersection of the observation boxes in its clique.
    pub fn map_back(&self, region: &[CanonicalInterval]) -> Result<ObservationBox<T>, GeometryError> {
        if region.len() != self.axes.len() {
            return Err(GeometryError::DimensionMismatch {
                box_index: 0,
                got: region.len(),
                expected: self.axes.len(),
            });
        }
        let max = self.len() as u32;
        let mut axes = Vec::with_capacity(region.len());
        for (axis, (iv, map)) in region.iter().zip(&self.axes).enumerate() {
            for value in [iv.lo, iv.hi] {
                if value < 1 || value > max {
                    return Err(GeometryError::CanonicalOutOfRange { axis, value, max });
                }
            }
            if iv.lo >= iv.hi {
                return Err(GeometryError::CanonicalEmpty { axis, lo: iv.lo, hi: iv.hi });
            }
            let lower = &map.endpoints[(iv.lo - 1) as usize];
            let upper = &map.endpoints[(iv.hi - 1) as usize];
            axes.push(AxisInterval::new(
                lower.value.clone(),
                !map.included[(iv.lo - 1) as usize],
                upper.value.clone(),
                map.included[(iv.hi - 1) as usize],
            ));
        }
        ObservationBox::new(axes)
    }
}

/// Rank-transforms a dataset of observation boxes.
///
/// Per axis, the `2n` endpoints are sorted under [`compare_endpoints`] and
/// replaced by their one-based ranks; each box becomes a [`CanonicalBox`]
/// whose per-axis coordinates are a permutation of `1..=2n` across the
/// dataset. The returned [`CanonicalMap`] inverts the transform.
pub fn canonicalize<T: Coordinate>(
    boxes: &[ObservationBox<T>],
) -> Result<(Vec<CanonicalBox>, CanonicalMap<T>), GeometryError> {
    if boxes.is_empty() {
        return Err(GeometryError::EmptyDataset);
    }
    let d = boxes[0].dim();
    for (box_index, b) in boxes.iter().enumerate() {
        if b.dim() != d {
            return Err(GeometryError::DimensionMismatch {
                box_index,
                got: b.dim(),
                expected: d,
            });
        }
    }

    let n = boxes.len();
    let mut canonical: Vec<CanonicalBox> = (0..n)
        .map(|box_index| CanonicalBox {
            intervals: vec![CanonicalInterval::new(0, 0); d],
            box_index,
        })
        .collect();
    let mut axes = Vec::with_capacity(d);

    for axis in 0..d {
        let mut endpoints: Vec<EndpointDescriptor<T>> = Vec::with_capacity(2 * n);
        for (box_index, b) in boxes.iter().enumerate() {
            let iv = b.axis(axis);
            endpoints.push(EndpointDescriptor {
                value: iv.lower.clone(),
                closed: iv.lower_closed,
                side: Side::Left,
                axis,
                box_index,
            });
            endpoints.push(EndpointDescriptor {
                value: iv.upper.clone(),
                closed: iv.upper_closed,
                side: Side::Right,
                axis,
                box_index,
            });
        }
        endpoints.sort_unstable_by(|a, b| {
            if compare_endpoints(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut included = Vec::with_capacity(2 * n);
        for (pos, ep) in endpoints.iter().enumerate() {
            let rank = (pos + 1) as u32;
            let iv = &mut canonical[ep.box_index].intervals[axis];
            match ep.side {
                Side::Left => iv.lo = rank,
                Side::Right => iv.hi = rank,
            }
            included.push(match ep.side {
                Side::Right => ep.closed,
                Side::Left => !ep.closed,
            });
        }
        axes.push(AxisMap { endpoints, included });
    }

    // A nonempty interval's left endpoint always sorts before its right one.
    debug_assert!(canonical
        .iter()
        .all(|c| c.intervals.iter().all(|iv| iv.lo < iv.hi)));

    Ok((canonical, CanonicalMap { axes }))
}

/// Validates that a dataset of canonical boxes is well-formed: consistent
/// dimension and, per axis, coordinates forming a permutation of `1..=2n`
/// with `lo < hi` in every box. Returns the dimension.
pub fn validate_canonical(rects: &[CanonicalBox]) -> Result<usize, GeometryError> {
    if rects.is_empty() {
        return Err(GeometryError::EmptyDataset);
    }
    let d = rects[0].intervals.len();
    if d == 0 {
        return Err(GeometryError::ZeroDimensional);
    }
    for (box_index, r) in rects.iter().enumerate() {
        if r.intervals.len() != d {
            return Err(GeometryError::DimensionMismatch {
                box_index,
                got: r.intervals.len(),
                expected: d,
            });
        }
    }
    let max = (2 * rects.len()) as u32;
    let mut seen = vec![false; 2 * rects.len() + 1];
    for axis in 0..d {
        seen.iter_mut().for_each(|s| *s = false);
        for r in rects {
            let iv = &r.intervals[axis];
            for value in [iv.lo, iv.hi] {
                if value < 1 || value > max {
                    return Err(GeometryError::CanonicalOutOfRange { axis, value, max });
                }
                if seen[value as usize] {
                    return Err(GeometryError::CanonicalDuplicate { axis, value });
                }
                seen[value as usize] = true;
            }
            if iv.lo >= iv.hi {
                return Err(GeometryError::CanonicalEmpty { axis, lo: iv.lo, hi: iv.hi });
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(value: ExtReal<f64>, closed: bool, side: Side, box_index: usize) -> EndpointDescriptor<f64> {
        EndpointDescriptor { value, closed, side, axis: 0, box_index }
    }

    #[test]
    fn closed_right_sorts_before_coincident_open_left() {
        // (…,5] and (5,…) share no point, so the right endpoint leaves first.
        let a = ep(ExtReal::Finite(5.0), true, Side::Right, 1);
        let b = ep(ExtReal::Finite(5.0), false, Side::Left, 0);
        assert!(compare_endpoints(&a, &b));
        assert!(!compare_endpoints(&b, &a));
    }

    #[test]
    fn closed_left_sorts_before_coincident_closed_right() {
        // […,5] and [5,…] share the point 5, so the intervals must overlap
        // after the transform.
        let a = ep(ExtReal::Finite(5.0), true, Side::Left, 1);
        let b = ep(ExtReal::Finite(5.0), true, Side::Right, 0);
        assert!(compare_endpoints(&a, &b));
        assert!(!compare_endpoints(&b, &a));
    }

    #[test]
    fn identical_kind_orders_by_box_index() {
        let a = ep(ExtReal::Finite(5.0), false, Side::Left, 2);
        let b = ep(ExtReal::Finite(5.0), false, Side::Left, 4);
        assert!(compare_endpoints(&a, &b));
        assert!(!compare_endpoints(&b, &a));
    }

    #[test]
    fn infinities_order_around_all_finite_values() {
        let lo = ep(ExtReal::NegInf, false, Side::Left, 0);
        let mid = ep(ExtReal::Finite(1e300), true, Side::Right, 1);
        let hi = ep(ExtReal::PosInf, false, Side::Right, 2);
        assert!(compare_endpoints(&lo, &mid));
        assert!(compare_endpoints(&mid, &hi));
        assert!(compare_endpoints(&lo, &hi));
        // Same-signed infinities fall through to the coincident-value rules.
        let hi2 = ep(ExtReal::PosInf, false, Side::Right, 3);
        assert!(compare_endpoints(&hi, &hi2));
        assert!(!compare_endpoints(&hi2, &hi));
    }

    fn rect2(x: AxisInterval<f64>, y: AxisInterval<f64>) -> ObservationBox<f64> {
        ObservationBox::new(vec![x, y]).unwrap()
    }

    fn canon_of(boxes: &[ObservationBox<f64>]) -> Vec<Vec<(u32, u32)>> {
        let (canon, _) = canonicalize(boxes).unwrap();
        canon
            .iter()
            .map(|c| c.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect())
            .collect()
    }

    #[test]
    fn touching_open_closed_boxes_stay_disjoint() {
        let boxes = vec![
            rect2(AxisInterval::open_closed(0.0, 2.0), AxisInterval::open_closed(0.0, 2.0)),
            rect2(AxisInterval::open_closed(2.0, 4.0), AxisInterval::open_closed(2.0, 4.0)),
        ];
        assert_eq!(canon_of(&boxes), vec![vec![(1, 2), (1, 2)], vec![(3, 4), (3, 4)]]);
    }

    #[test]
    fn touching_closed_closed_boxes_overlap() {
        let boxes = vec![
            rect2(AxisInterval::open_closed(0.0, 2.0), AxisInterval::open_closed(0.0, 2.0)),
            rect2(
                AxisInterval::new(ExtReal::Finite(2.0), true, ExtReal::Finite(4.0), true),
                AxisInterval::new(ExtReal::Finite(2.0), true, ExtReal::Finite(4.0), true),
            ),
        ];
        assert_eq!(canon_of(&boxes), vec![vec![(1, 3), (1, 3)], vec![(2, 4), (2, 4)]]);
    }

    #[test]
    fn single_unbounded_box_canonicalizes_to_unit_square() {
        let boxes = vec![rect2(
            AxisInterval::unbounded_above(0.0),
            AxisInterval::unbounded_above(0.0),
        )];
        assert_eq!(canon_of(&boxes), vec![vec![(1, 2), (1, 2)]]);
    }

    #[test]
    fn map_back_recovers_the_exact_shared_point() {
        let boxes = vec![
            rect2(AxisInterval::open_closed(0.0, 2.0), AxisInterval::open_closed(0.0, 2.0)),
            rect2(
                AxisInterval::new(ExtReal::Finite(2.0), true, ExtReal::Finite(4.0), true),
                AxisInterval::new(ExtReal::Finite(2.0), true, ExtReal::Finite(4.0), true),
            ),
        ];
        let (_, map) = canonicalize(&boxes).unwrap();
        // The overlap of the two boxes on either axis is canonical (2, 3].
        let real = map
            .map_back(&[CanonicalInterval::new(2, 3), CanonicalInterval::new(2, 3)])
            .unwrap();
        for axis in real.axes() {
            assert_eq!(axis.lower, ExtReal::Finite(2.0));
            assert_eq!(axis.upper, ExtReal::Finite(2.0));
            assert!(axis.lower_closed && axis.upper_closed);
        }
    }

    #[test]
    fn map_back_round_trips_an_unbounded_box() {
        let boxes = vec![rect2(
            AxisInterval::unbounded_above(0.0),
            AxisInterval::unbounded_above(0.0),
        )];
        let (canon, map) = canonicalize(&boxes).unwrap();
        let real = map.map_back(&canon[0].intervals).unwrap();
        assert_eq!(real, boxes[0]);
    }

    #[test]
    fn empty_intervals_are_rejected_at_construction() {
        let empty = ObservationBox::new(vec![
            AxisInterval::open_closed(0.0, 1.0),
            AxisInterval::new(ExtReal::Finite(3.0), false, ExtReal::Finite(3.0), true),
        ]);
        assert_eq!(empty.unwrap_err(), GeometryError::EmptyInterval { axis: 1 });

        let inverted = ObservationBox::new(vec![AxisInterval::open_closed(2.0, 1.0)]);
        assert_eq!(inverted.unwrap_err(), GeometryError::EmptyInterval { axis: 0 });

        let nan = ObservationBox::new(vec![AxisInterval::open_closed(f64::NAN, 1.0)]);
        assert_eq!(nan.unwrap_err(), GeometryError::EmptyInterval { axis: 0 });
    }

    #[test]
    fn misplaced_infinities_are_rejected() {
        let b = ObservationBox::new(vec![AxisInterval::new(
            ExtReal::<f64>::PosInf,
            false,
            ExtReal::PosInf,
            false,
        )]);
        assert_eq!(b.unwrap_err(), GeometryError::MisplacedInfinity { axis: 0 });
    }

    #[test]
    fn infinite_endpoint_closure_flags_normalize_to_open() {
        let b = ObservationBox::new(vec![AxisInterval::new(
            ExtReal::<f64>::NegInf,
            true,
            ExtReal::PosInf,
            true,
        )])
        .unwrap();
        assert!(!b.axis(0).lower_closed);
        assert!(!b.axis(0).upper_closed);
    }

    #[test]
    fn validate_canonical_rejects_duplicates_and_gaps() {
        let ok = vec![
            CanonicalBox { intervals: vec![CanonicalInterval::new(1, 3)], box_index: 0 },
            CanonicalBox { intervals: vec![CanonicalInterval::new(2, 4)], box_index: 1 },
        ];
        assert_eq!(validate_canonical(&ok).unwrap(), 1);

        let dup = vec![
            CanonicalBox { intervals: vec![CanonicalInterval::new(1, 3)], box_index: 0 },
            CanonicalBox { intervals: vec![CanonicalInterval::new(3, 4)], box_index: 1 },
        ];
        assert_eq!(
            validate_canonical(&dup).unwrap_err(),
            GeometryError::CanonicalDuplicate { axis: 0, value: 3 }
        );

        let out = vec![CanonicalBox { intervals: vec![CanonicalInterval::new(0, 2)], box_index: 0 }];
        assert_eq!(
            validate_canonical(&out).unwrap_err(),
            GeometryError::CanonicalOutOfRange { axis: 0, value: 0, max: 2 }
        );
    }
}
