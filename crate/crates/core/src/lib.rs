//! Maximal intersections of axis-aligned observation boxes.
//!
//! Interval-censored data records each observation not as a point but as a
//! box: per coordinate, an interval known to contain the true value, possibly
//! unbounded and open or closed at either end. Nonparametric maximum
//! likelihood places all probability mass on the *maximal intersections* of
//! the observation boxes — the intersections of subsets of boxes that are
//! contained in no further box and extend over no larger subset. This crate
//! computes them:
//!
//! * [`geometry`] — observation boxes over any ordered scalar, validation,
//!   and the rank transform to *canonical* integer boxes whose per-axis
//!   coordinates are distinct, plus the inverse map back to real intervals;
//! * [`sweep2d`] — the two-dimensional height-map column sweep, linear in
//!   working memory;
//! * [`sweepnd`] — its generalization to any dimension, sweeping a
//!   `(d-1)`-dimensional height slice along the last axis;
//! * [`oracle`] — an exhaustive grid reference for cross-checking, feasible
//!   only at small sizes;
//! * [`npmle`] — containment matrices, probability masses, log-likelihood,
//!   and mass-vector equivalence for estimators built on the reduction;
//! * [`simbench`] — a bivariate current-status data generator and a timing
//!   harness that fits the empirical growth exponent.
//!
//! The top-level [`reduce`] runs the full pipeline: canonicalize, sweep with
//! the reducer matching the dimension, and map every region back to real
//! coordinates.
//!
//! ```
//! use boxreduce::{reduce, AxisInterval, ObservationBox};
//!
//! let boxes = vec![
//!     ObservationBox::new(vec![
//!         AxisInterval::open_closed(0.0, 2.0),
//!         AxisInterval::open_closed(0.0, 2.0),
//!     ])?,
//!     ObservationBox::new(vec![
//!         AxisInterval::open_closed(1.0, 3.0),
//!         AxisInterval::open_closed(1.0, 3.0),
//!     ])?,
//! ];
//! let maximal = reduce(&boxes)?;
//! assert_eq!(maximal.len(), 1);
//! assert_eq!(maximal[0].canonical.clique, vec![0, 1]);
//! let expected = ObservationBox::new(vec![
//!     AxisInterval::open_closed(1.0, 2.0),
//!     AxisInterval::open_closed(1.0, 2.0),
//! ])?;
//! assert_eq!(maximal[0].real, expected);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod geometry;
pub mod npmle;
pub mod oracle;
pub mod simbench;
pub mod sweep2d;
pub mod sweepnd;

pub use geometry::{
    canonicalize, compare_endpoints, validate_canonical, AxisInterval, CanonicalBox,
    CanonicalInterval, CanonicalMap, CanonicalMaximal, Coordinate, EndpointDescriptor, ExtReal,
    GeometryError, ObservationBox, Side,
};
pub use npmle::{clique_matrix, CliqueMatrix, MassVector, NpmleError};
pub use oracle::{default_max_n, oracle_reduce, oracle_reduce_with_max_n, OracleError};
pub use sweep2d::{reduce2d, reduce2d_regions, SweepError, SweepRun};
pub use sweepnd::{reduce_nd, reduce_nd_regions};

/// Observation box over `f64` coordinates.
pub type BoxF64 = ObservationBox<f64>;
/// Observation box over `f32` coordinates.
pub type BoxF32 = ObservationBox<f32>;
/// Axis interval over `f64` coordinates.
pub type IntervalF64 = AxisInterval<f64>;
/// Axis interval over `f32` coordinates.
pub type IntervalF32 = AxisInterval<f32>;
/// Pipeline output over `f64` coordinates.
pub type MaximalF64 = MaximalIntersection<f64>;
/// Pipeline output over `f32` coordinates.
pub type MaximalF32 = MaximalIntersection<f32>;
/// Mass vector over `f64` probabilities.
pub type MassF64 = MassVector<f64>;
/// Mass vector over `f32` probabilities.
pub type MassF32 = MassVector<f32>;

/// One maximal intersection in both coordinate systems: the canonical
/// integer region with its clique of box indices, and the same region mapped
/// back to the scalars of the input boxes.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalIntersection<T> {
    pub canonical: CanonicalMaximal,
    pub real: ObservationBox<T>,
}

/// Computes all maximal intersections of the given observation boxes.
///
/// Canonicalizes, sweeps — with the column sweep in two dimensions, the
/// slice sweep above — and maps each region back to real coordinates. The
/// mapped-back box of a region equals the point-set intersection of its
/// clique's boxes. Datasets must be at least two-dimensional.
pub fn reduce<T: Coordinate>(
    boxes: &[ObservationBox<T>],
) -> Result<Vec<MaximalIntersection<T>>, SweepError> {
    let (rects, map) = canonicalize(boxes)?;
    let maximals =
        if map.dim() == 2 { reduce2d(&rects)? } else { reduce_nd(&rects)? };
    maximals
        .into_iter()
        .map(|canonical| {
            let real = map.map_back(&canonical.intervals)?;
            Ok(MaximalIntersection { canonical, real })
        })
        .collect()
}
