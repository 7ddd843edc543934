//! Shared helpers for the integration suites: a reference reducer that works
//! entirely in the original real coordinates, instance generators with
//! deliberate coordinate ties, and set-comparison utilities.
#![allow(dead_code)]

use std::collections::BTreeSet;

use boxreduce::{
    AxisInterval, BoxF64, CanonicalBox, CanonicalInterval, CanonicalMaximal, ExtReal,
    ObservationBox,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Point-set intersection of two real intervals; `None` when empty.
pub fn intersect_intervals(
    a: &AxisInterval<f64>,
    b: &AxisInterval<f64>,
) -> Option<AxisInterval<f64>> {
    let (lower, lower_closed) = match a.lower.partial_cmp(&b.lower).unwrap() {
        std::cmp::Ordering::Greater => (a.lower, a.lower_closed),
        std::cmp::Ordering::Less => (b.lower, b.lower_closed),
        std::cmp::Ordering::Equal => (a.lower, a.lower_closed && b.lower_closed),
    };
    let (upper, upper_closed) = match a.upper.partial_cmp(&b.upper).unwrap() {
        std::cmp::Ordering::Less => (a.upper, a.upper_closed),
        std::cmp::Ordering::Greater => (b.upper, b.upper_closed),
        std::cmp::Ordering::Equal => (a.upper, a.upper_closed && b.upper_closed),
    };
    let nonempty = match lower.partial_cmp(&upper).unwrap() {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => lower.is_finite() && lower_closed && upper_closed,
        std::cmp::Ordering::Greater => false,
    };
    nonempty.then(|| AxisInterval::new(lower, lower_closed, upper, upper_closed))
}

/// Point-set intersection of the boxes selected by `members`.
pub fn intersect_boxes(boxes: &[BoxF64], members: &[usize]) -> Option<BoxF64> {
    let first = boxes[members[0]].clone();
    let mut axes: Vec<AxisInterval<f64>> = first.axes().to_vec();
    for &i in &members[1..] {
        for (axis, iv) in axes.iter_mut().enumerate() {
            *iv = intersect_intervals(iv, boxes[i].axis(axis))?;
        }
    }
    Some(ObservationBox::new(axes).expect("nonempty intersection is a valid box"))
}

/// An inclusion-minimal piece of one axis after cutting at every endpoint
/// value: either a single endpoint value or the open gap between two
/// neighboring ones (with infinities at the flanks). An interval whose
/// endpoints are all drawn from the cut values either contains a piece
/// entirely or misses it entirely.
#[derive(Clone, Copy, Debug)]
enum Atom {
    Point(f64),
    Gap(ExtReal<f64>, ExtReal<f64>),
}

impl Atom {
    fn contained_in(&self, iv: &AxisInterval<f64>) -> bool {
        match *self {
            Atom::Point(v) => {
                let v = ExtReal::Finite(v);
                let above_lower = match iv.lower.partial_cmp(&v).unwrap() {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => iv.lower_closed,
                    std::cmp::Ordering::Greater => false,
                };
                let below_upper = match v.partial_cmp(&iv.upper).unwrap() {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => iv.upper_closed,
                    std::cmp::Ordering::Greater => false,
                };
                above_lower && below_upper
            }
            // The gap's ends are cut values, so closure never matters here.
            Atom::Gap(a, b) => iv.lower <= a && b <= iv.upper,
        }
    }
}

/// Cuts one axis of a dataset into atoms.
fn axis_atoms(boxes: &[BoxF64], axis: usize) -> Vec<Atom> {
    let mut values: Vec<f64> = Vec::new();
    for b in boxes {
        for v in [&b.axis(axis).lower, &b.axis(axis).upper] {
            if let Some(&f) = v.finite() {
                values.push(f);
            }
        }
    }
    values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();

    let mut atoms = Vec::with_capacity(2 * values.len() + 1);
    let mut left = ExtReal::NegInf;
    for &v in &values {
        atoms.push(Atom::Gap(left, ExtReal::Finite(v)));
        atoms.push(Atom::Point(v));
        left = ExtReal::Finite(v);
    }
    atoms.push(Atom::Gap(left, ExtReal::PosInf));
    atoms
}

/// Reference reduction in real coordinates, with no rank transform anywhere:
/// cut every axis at every endpoint value, enumerate the covering set of
/// every product of pieces, keep the covering sets no other covering set
/// strictly contains, and intersect each one's members directly.
///
/// Returns (sorted member indices, intersection region), sorted by members.
pub fn real_oracle(boxes: &[BoxF64]) -> Vec<(Vec<usize>, BoxF64)> {
    let n = boxes.len();
    assert!(n > 0 && n <= 128, "mask width");
    let d = boxes[0].dim();
    let per_axis: Vec<Vec<Atom>> = (0..d).map(|a| axis_atoms(boxes, a)).collect();

    let mut covers: BTreeSet<u128> = BTreeSet::new();
    let mut choice = vec![0usize; d];
    'cells: loop {
        let mut mask = 0u128;
        for (i, b) in boxes.iter().enumerate() {
            if (0..d).all(|a| per_axis[a][choice[a]].contained_in(b.axis(a))) {
                mask |= 1 << i;
            }
        }
        if mask != 0 {
            covers.insert(mask);
        }
        for a in (0..d).rev() {
            choice[a] += 1;
            if choice[a] < per_axis[a].len() {
                continue 'cells;
            }
            choice[a] = 0;
        }
        break;
    }

    let mut out: Vec<(Vec<usize>, BoxF64)> = covers
        .iter()
        .filter(|&&m| !covers.iter().any(|&t| t != m && t & m == m))
        .map(|&m| {
            let members: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            let region = intersect_boxes(boxes, &members)
                .expect("a covering set has a nonempty intersection");
            (members, region)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// The pipeline output as comparable (clique, region) pairs, sorted.
pub fn pipeline_pairs(maximal: &[boxreduce::MaximalF64]) -> Vec<(Vec<usize>, BoxF64)> {
    let mut out: Vec<(Vec<usize>, BoxF64)> = maximal
        .iter()
        .map(|m| (m.canonical.clique.clone(), m.real.clone()))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// One random interval with values on a small integer lattice, so ties
/// between boxes (and between axes of one box) are frequent. All closure
/// patterns, exact points, and unbounded sides occur.
pub fn random_interval(rng: &mut impl Rng, levels: u32) -> AxisInterval<f64> {
    match rng.gen_range(0..10u32) {
        // Bounded on both sides, any closure pattern.
        0..=5 => {
            let a = rng.gen_range(0..levels) as f64;
            let b = rng.gen_range(0..levels) as f64;
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if lo == hi {
                AxisInterval::exact(lo)
            } else {
                AxisInterval::new(
                    ExtReal::Finite(lo),
                    rng.gen_bool(0.5),
                    ExtReal::Finite(hi),
                    rng.gen_bool(0.5),
                )
            }
        }
        6 => AxisInterval::exact(rng.gen_range(0..levels) as f64),
        7 => AxisInterval::new(
            ExtReal::Finite(rng.gen_range(0..levels) as f64),
            rng.gen_bool(0.5),
            ExtReal::PosInf,
            false,
        ),
        8 => AxisInterval::new(
            ExtReal::NegInf,
            false,
            ExtReal::Finite(rng.gen_range(0..levels) as f64),
            rng.gen_bool(0.5),
        ),
        _ => AxisInterval::new(ExtReal::NegInf, false, ExtReal::PosInf, false),
    }
}

/// A dataset of `n` mixed boxes in `d` dimensions.
pub fn random_mixed_boxes(rng: &mut impl Rng, n: usize, d: usize, levels: u32) -> Vec<BoxF64> {
    (0..n)
        .map(|_| {
            ObservationBox::new((0..d).map(|_| random_interval(rng, levels)).collect())
                .expect("generated intervals are nonempty")
        })
        .collect()
}

/// A random canonical dataset: per axis, a shuffled pairing of `1..=2n`.
pub fn random_canonical(rng: &mut impl Rng, n: usize, d: usize) -> Vec<CanonicalBox> {
    let mut per_axis: Vec<Vec<CanonicalInterval>> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut coords: Vec<u32> = (1..=2 * n as u32).collect();
        coords.shuffle(rng);
        per_axis.push(
            coords
                .chunks_exact(2)
                .map(|c| CanonicalInterval::new(c[0].min(c[1]), c[0].max(c[1])))
                .collect(),
        );
    }
    (0..n)
        .map(|i| CanonicalBox {
            intervals: (0..d).map(|a| per_axis[a][i]).collect(),
            box_index: i,
        })
        .collect()
}

/// Order-free comparison form.
pub fn as_set(ms: &[CanonicalMaximal]) -> BTreeSet<CanonicalMaximal> {
    ms.iter().cloned().collect()
}
