//! Clique matrices and log-likelihood evaluation for nonparametric maximum
//! likelihood estimation over interval-censored observations.
//!
//! Once the maximal intersections `A_1..A_m` of the observation boxes
//! `R_1..R_n` are known, any candidate estimator places probability mass
//! `alpha_j` on each `A_j`, and the likelihood of observation `i` is the
//! total mass of the regions contained in `R_i`. This module stores the
//! containment incidence as an `m x n` 0/1 matrix, evaluates the resulting
//! per-observation probabilities and their log-likelihood, and decides
//! whether two mass vectors are equivalent (identical per-observation
//! probabilities, hence indistinguishable to any likelihood-based
//! optimizer).
//!
//! Mass vectors are validated on construction: entries must be finite and
//! nonnegative and sum to one within a small tolerance, measured with
//! compensated summation so the check reflects the data rather than the
//! accumulation order.

use num_traits::Float;
use thiserror::Error;

use crate::geometry::{region_contained_in, CanonicalBox, CanonicalMaximal};

/// Default absolute tolerance for mass-vector and probability comparisons.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Row-pair antichain verification runs automatically at construction up to
/// this many rows; above it, call [`CliqueMatrix::verify_antichain`].
pub const ANTICHAIN_AUTO_LIMIT: usize = 4096;

/// Dense bit storage is used while `m * n` stays at or below this many bits.
const DENSE_BIT_LIMIT: usize = 100_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum NpmleError {
    #[error("clique matrix has no rows")]
    NoRows,
    #[error("clique matrix has no columns")]
    NoColumns,
    #[error("row {row} is empty: the region is contained in no box")]
    EmptyRow { row: usize },
    #[error("column {col} is empty: the box contains no maximal intersection")]
    EmptyColumn { col: usize },
    #[error("row {row} lists box {index}, but there are only {n} boxes")]
    IndexOutOfRange { row: usize, index: usize, n: usize },
    #[error("row {inner} is a strict subset of row {outer}: the inner region is not maximal")]
    NestedRows { inner: usize, outer: usize },
    #[error("mass vector has {got} entries, the matrix has {expected} rows")]
    MassLength { got: usize, expected: usize },
    #[error("mass {index} is negative or not finite")]
    InvalidMass { index: usize },
    #[error("masses sum to {sum}, not 1")]
    MassSum { sum: f64 },
    #[error("masses sum to {sum}, cannot normalize")]
    UnnormalizableMass { sum: f64 },
}

#[derive(Debug)]
enum Storage {
    /// Row-major bitset: row `j` occupies `words_per_row` consecutive words.
    Dense { words_per_row: usize, bits: Vec<u64> },
    /// Sorted column indices per row.
    Sparse { rows: Vec<Vec<usize>> },
}

/// The `m x n` containment incidence of `m` maximal intersections in `n`
/// observation boxes: entry `(j, i)` is set iff region `j` lies inside box
/// `i`, i.e. iff box `i` is a member of region `j`'s clique.
#[derive(Debug)]
pub struct CliqueMatrix {
    m: usize,
    n: usize,
    storage: Storage,
}

/// Builds the containment matrix of the given maximal intersections in the
/// given boxes. Membership is recomputed from the geometry; the `clique`
/// fields of the inputs are not consulted.
pub fn clique_matrix(
    maximals: &[CanonicalMaximal],
    rects: &[CanonicalBox],
) -> Result<CliqueMatrix, NpmleError> {
    let rows: Vec<Vec<usize>> = maximals
        .iter()
        .map(|mx| {
            (0..rects.len())
                .filter(|&i| region_contained_in(&mx.intervals, &rects[i]))
                .collect()
        })
        .collect();
    CliqueMatrix::from_rows(rects.len(), rows)
}

impl CliqueMatrix {
    /// Builds a matrix from per-row column supports (duplicates within a row
    /// are merged). Rows and columns must all be nonempty, and when the
    /// matrix is small enough the rows are verified to form an antichain.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, NpmleError> {
        Self::build(n, rows, DENSE_BIT_LIMIT)
    }

    /// As [`CliqueMatrix::from_rows`], but with an explicit cell-count
    /// threshold for choosing dense bit storage over sparse row supports.
    pub fn from_rows_with_dense_limit(
        n: usize,
        rows: Vec<Vec<usize>>,
        dense_cell_limit: usize,
    ) -> Result<Self, NpmleError> {
        Self::build(n, rows, dense_cell_limit)
    }

    fn build(n: usize, mut rows: Vec<Vec<usize>>, dense_bit_limit: usize) -> Result<Self, NpmleError> {
        let m = rows.len();
        if m == 0 {
            return Err(NpmleError::NoRows);
        }
        if n == 0 {
            return Err(NpmleError::NoColumns);
        }
        let mut covered = vec![false; n];
        for (j, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(NpmleError::EmptyRow { row: j });
            }
            if let Some(&bad) = row.iter().find(|&&i| i >= n) {
                return Err(NpmleError::IndexOutOfRange { row: j, index: bad, n });
            }
            for &i in row.iter() {
                covered[i] = true;
            }
        }
        if let Some(col) = covered.iter().position(|&c| !c) {
            return Err(NpmleError::EmptyColumn { col });
        }

        let dense = m.checked_mul(n).is_some_and(|bits| bits <= dense_bit_limit);
        let storage = if dense {
            let words_per_row = n.div_ceil(64);
            let mut bits = vec![0u64; m * words_per_row];
            for (j, row) in rows.iter().enumerate() {
                for &i in row {
                    bits[j * words_per_row + i / 64] |= 1 << (i % 64);
                }
            }
            Storage::Dense { words_per_row, bits }
        } else {
            Storage::Sparse { rows }
        };

        let matrix = CliqueMatrix { m, n, storage };
        if m <= ANTICHAIN_AUTO_LIMIT {
            matrix.verify_antichain()?;
        }
        Ok(matrix)
    }

    /// Number of rows (maximal intersections).
    pub fn num_regions(&self) -> usize {
        self.m
    }

    /// Number of columns (observation boxes).
    pub fn num_boxes(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense { .. })
    }

    /// Whether region `row`'s clique contains box `col`.
    pub fn contains(&self, row: usize, col: usize) -> bool {
        assert!(row < self.m && col < self.n);
        match &self.storage {
            Storage::Dense { words_per_row, bits } => {
                bits[row * words_per_row + col / 64] >> (col % 64) & 1 == 1
            }
            Storage::Sparse { rows } => rows[row].binary_search(&col).is_ok(),
        }
    }

    /// The sorted column support of one row.
    pub fn row_support(&self, row: usize) -> Vec<usize> {
        assert!(row < self.m);
        match &self.storage {
            Storage::Dense { words_per_row, bits } => {
                let words = &bits[row * words_per_row..(row + 1) * words_per_row];
                let mut out = Vec::new();
                for (w, &word) in words.iter().enumerate() {
                    let mut rest = word;
                    while rest != 0 {
                        out.push(w * 64 + rest.trailing_zeros() as usize);
                        rest &= rest - 1;
                    }
                }
                out
            }
            Storage::Sparse { rows } => rows[row].clone(),
        }
    }

    /// Checks that no row's support is a strict subset of another row's:
    /// every region of a correctly reduced dataset is maximal, so its clique
    /// cannot nest inside a different clique (equal rows are fine — they
    /// witness distinct regions with identical membership and are exactly
    /// what makes two mass vectors equivalent).
    ///
    /// Runs automatically at construction for matrices with at most
    /// [`ANTICHAIN_AUTO_LIMIT`] rows; call it explicitly for larger ones.
    pub fn verify_antichain(&self) -> Result<(), NpmleError> {
        match &self.storage {
            Storage::Dense { words_per_row, bits } => {
                for j in 0..self.m {
                    let rj = &bits[j * words_per_row..(j + 1) * words_per_row];
                    for k in 0..self.m {
                        if j == k {
                            continue;
                        }
                        let rk = &bits[k * words_per_row..(k + 1) * words_per_row];
                        let subset = rj.iter().zip(rk).all(|(&a, &b)| a & !b == 0);
                        if subset && rj != rk {
                            return Err(NpmleError::NestedRows { inner: j, outer: k });
                        }
                    }
                }
            }
            Storage::Sparse { rows } => {
                for j in 0..self.m {
                    for k in 0..self.m {
                        if j == k || rows[j].len() >= rows[k].len() {
                            continue;
                        }
                        if sorted_subset(&rows[j], &rows[k]) {
                            return Err(NpmleError::NestedRows { inner: j, outer: k });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-box probabilities under a mass vector: entry `i` is the total
    /// mass of the regions contained in box `i`.
    pub fn prob_masses<F: Float>(&self, mass: &MassVector<F>) -> Result<Vec<F>, NpmleError> {
        if mass.len() != self.m {
            return Err(NpmleError::MassLength { got: mass.len(), expected: self.m });
        }
        let mut p = vec![F::zero(); self.n];
        match &self.storage {
            Storage::Dense { words_per_row, bits } => {
                for (j, &a) in mass.as_slice().iter().enumerate() {
                    let words = &bits[j * words_per_row..(j + 1) * words_per_row];
                    for (w, &word) in words.iter().enumerate() {
                        let mut rest = word;
                        while rest != 0 {
                            let i = w * 64 + rest.trailing_zeros() as usize;
                            p[i] = p[i] + a;
                            rest &= rest - 1;
                        }
                    }
                }
            }
            Storage::Sparse { rows } => {
                for (j, &a) in mass.as_slice().iter().enumerate() {
                    for &i in &rows[j] {
                        p[i] = p[i] + a;
                    }
                }
            }
        }
        Ok(p)
    }

    /// Log-likelihood of the observations under a mass vector. A box that
    /// receives zero probability yields negative infinity rather than an
    /// error: optimizers probe such vectors routinely.
    pub fn log_likelihood<F: Float>(&self, mass: &MassVector<F>) -> Result<F, NpmleError> {
        let p = self.prob_masses(mass)?;
        if p.iter().any(|&pi| pi <= F::zero()) {
            return Ok(F::neg_infinity());
        }
        Ok(neumaier_sum(p.into_iter().map(|pi| pi.ln())))
    }

    /// Whether two mass vectors induce the same per-box probabilities within
    /// an absolute tolerance — if so, no likelihood-based criterion can tell
    /// them apart.
    pub fn same_equivalence_class<F: Float>(
        &self,
        a: &MassVector<F>,
        b: &MassVector<F>,
        tolerance: F,
    ) -> Result<bool, NpmleError> {
        let pa = self.prob_masses(a)?;
        let pb = self.prob_masses(b)?;
        Ok(pa.iter().zip(&pb).all(|(&x, &y)| (x - y).abs() <= tolerance))
    }
}

/// Whether sorted slice `a` is contained in sorted slice `b`.
fn sorted_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// A probability vector over the maximal intersections: entries are finite,
/// nonnegative, and sum to one within the construction tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct MassVector<F: Float> {
    masses: Vec<F>,
}

impl<F: Float> MassVector<F> {
    /// Validates with the default tolerance of [`MASS_TOLERANCE`] — suited
    /// to `f64`; single-precision callers should pass their own tolerance to
    /// [`MassVector::with_tolerance`].
    pub fn new(masses: Vec<F>) -> Result<Self, NpmleError> {
        Self::with_tolerance(masses, F::from(MASS_TOLERANCE).expect("tolerance fits the scalar"))
    }

    pub fn with_tolerance(masses: Vec<F>, tolerance: F) -> Result<Self, NpmleError> {
        for (index, &a) in masses.iter().enumerate() {
            if !(a >= F::zero()) || !a.is_finite() {
                return Err(NpmleError::InvalidMass { index });
            }
        }
        let sum = neumaier_sum(masses.iter().copied());
        if (sum - F::one()).abs() > tolerance {
            return Err(NpmleError::MassSum { sum: sum.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(MassVector { masses })
    }

    /// Scales a nonnegative weight vector to sum to one. Compensated
    /// summation keeps the normalized sum within the default tolerance for
    /// `f64` regardless of length.
    pub fn normalized(weights: Vec<F>) -> Result<Self, NpmleError> {
        for (index, &a) in weights.iter().enumerate() {
            if !(a >= F::zero()) || !a.is_finite() {
                return Err(NpmleError::InvalidMass { index });
            }
        }
        let sum = neumaier_sum(weights.iter().copied());
        if !(sum > F::zero()) || !sum.is_finite() {
            return Err(NpmleError::UnnormalizableMass { sum: sum.to_f64().unwrap_or(f64::NAN) });
        }
        Self::new(weights.into_iter().map(|a| a / sum).collect())
    }

    /// The uniform vector with `m` entries of `1/m`.
    pub fn uniform(m: usize) -> Result<Self, NpmleError> {
        if m == 0 {
            return Err(NpmleError::NoRows);
        }
        let share = F::one() / F::from(m).expect("row count fits the scalar");
        Self::new(vec![share; m])
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.masses
    }
}

/// Neumaier's compensated sum: one running total plus a correction term that
/// absorbs the rounding error of each addition, whichever operand is larger.
fn neumaier_sum<F: Float, I: IntoIterator<Item = F>>(xs: I) -> F {
    let mut sum = F::zero();
    let mut comp = F::zero();
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp = comp + ((sum - t) + x);
        } else {
            comp = comp + ((x - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CanonicalInterval;
    use crate::sweep2d::reduce2d;

    fn two_row_matrix() -> CliqueMatrix {
        CliqueMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn prob_masses_total_the_mass_of_contained_regions() {
        let c = two_row_matrix();
        let mass = MassVector::new(vec![0.5f64, 0.5]).unwrap();
        assert_eq!(c.prob_masses(&mass).unwrap(), vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn log_likelihood_of_the_two_row_example() {
        let c = two_row_matrix();
        let mass = MassVector::new(vec![0.5f64, 0.5]).unwrap();
        let ll = c.log_likelihood(&mass).unwrap();
        assert!((ll - (-1.3862943611198906)).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_box_gives_negative_infinity() {
        let c = two_row_matrix();
        let mass = MassVector::new(vec![1.0f64, 0.0]).unwrap();
        let ll = c.log_likelihood(&mass).unwrap();
        assert!(ll.is_infinite() && ll < 0.0);
    }

    #[test]
    fn distinct_probabilities_are_not_equivalent() {
        let c = two_row_matrix();
        let a = MassVector::new(vec![0.5f64, 0.5]).unwrap();
        let b = MassVector::new(vec![0.4f64, 0.6]).unwrap();
        assert!(c.same_equivalence_class(&a, &a, 1e-12).unwrap());
        assert!(!c.same_equivalence_class(&a, &b, 1e-12).unwrap());
    }

    #[test]
    fn mass_shuffled_within_duplicate_rows_is_equivalent() {
        let c = CliqueMatrix::from_rows(3, vec![vec![0, 1], vec![0, 1], vec![2]]).unwrap();
        let a = MassVector::new(vec![0.3f64, 0.2, 0.5]).unwrap();
        let b = MassVector::new(vec![0.1f64, 0.4, 0.5]).unwrap();
        assert!(c.same_equivalence_class(&a, &b, 1e-12).unwrap());
        let skewed = MassVector::new(vec![0.3f64, 0.3, 0.4]).unwrap();
        assert!(!c.same_equivalence_class(&a, &skewed, 1e-12).unwrap());
    }

    #[test]
    fn disjoint_boxes_give_the_identity_matrix() {
        let rects: Vec<CanonicalBox> = (0..2u32)
            .map(|i| CanonicalBox {
                intervals: vec![
                    CanonicalInterval::new(2 * i + 1, 2 * i + 2),
                    CanonicalInterval::new(2 * i + 1, 2 * i + 2),
                ],
                box_index: i as usize,
            })
            .collect();
        let maximals = reduce2d(&rects).unwrap();
        let c = clique_matrix(&maximals, &rects).unwrap();
        assert_eq!((c.num_regions(), c.num_boxes()), (2, 2));
        assert!(c.contains(0, 0) && c.contains(1, 1));
        assert!(!c.contains(0, 1) && !c.contains(1, 0));
        let mass = MassVector::uniform(2).unwrap();
        let ll: f64 = c.log_likelihood(&mass).unwrap();
        assert!((ll - 2.0 * 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn one_region_in_every_box_has_zero_log_likelihood_at_full_mass() {
        let c = CliqueMatrix::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
        let mass = MassVector::new(vec![1.0f64]).unwrap();
        assert_eq!(c.log_likelihood(&mass).unwrap(), 0.0);
    }

    #[test]
    fn construction_rejects_defective_matrices() {
        assert_eq!(CliqueMatrix::from_rows(3, vec![]).unwrap_err(), NpmleError::NoRows);
        assert_eq!(
            CliqueMatrix::from_rows(0, vec![vec![0]]).unwrap_err(),
            NpmleError::NoColumns
        );
        assert_eq!(
            CliqueMatrix::from_rows(3, vec![vec![0, 1], vec![]]).unwrap_err(),
            NpmleError::EmptyRow { row: 1 }
        );
        assert_eq!(
            CliqueMatrix::from_rows(3, vec![vec![0], vec![2]]).unwrap_err(),
            NpmleError::EmptyColumn { col: 1 }
        );
        assert_eq!(
            CliqueMatrix::from_rows(3, vec![vec![0, 3], vec![1, 2]]).unwrap_err(),
            NpmleError::IndexOutOfRange { row: 0, index: 3, n: 3 }
        );
        assert_eq!(
            CliqueMatrix::from_rows(3, vec![vec![0, 1, 2], vec![0, 2]]).unwrap_err(),
            NpmleError::NestedRows { inner: 1, outer: 0 }
        );
    }

    #[test]
    fn mass_vector_validation() {
        assert_eq!(
            MassVector::new(vec![0.5f64, -0.1, 0.6]).unwrap_err(),
            NpmleError::InvalidMass { index: 1 }
        );
        assert_eq!(
            MassVector::new(vec![0.5f64, f64::NAN]).unwrap_err(),
            NpmleError::InvalidMass { index: 1 }
        );
        assert!(matches!(
            MassVector::new(vec![0.5f64, 0.6]).unwrap_err(),
            NpmleError::MassSum { .. }
        ));
        let c = two_row_matrix();
        let short = MassVector::new(vec![1.0f64]).unwrap();
        assert_eq!(
            c.log_likelihood(&short).unwrap_err(),
            NpmleError::MassLength { got: 1, expected: 2 }
        );
    }

    #[test]
    fn normalized_masses_pass_validation_even_when_long() {
        let weights: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        let mass = MassVector::normalized(weights).unwrap();
        assert_eq!(mass.len(), 10_000);
    }

    #[test]
    fn sparse_storage_agrees_with_dense() {
        let rows = vec![vec![0usize, 1], vec![1, 2], vec![3]];
        let dense = CliqueMatrix::from_rows(4, rows.clone()).unwrap();
        let sparse = CliqueMatrix::from_rows_with_dense_limit(4, rows, 0).unwrap();
        assert!(dense.is_dense() && !sparse.is_dense());
        let mass = MassVector::new(vec![0.25f64, 0.5, 0.25]).unwrap();
        assert_eq!(dense.prob_masses(&mass).unwrap(), sparse.prob_masses(&mass).unwrap());
        assert_eq!(
            dense.log_likelihood(&mass).unwrap(),
            sparse.log_likelihood(&mass).unwrap()
        );
        for row in 0..3 {
            assert_eq!(dense.row_support(row), sparse.row_support(row));
        }
        let nested =
            CliqueMatrix::from_rows_with_dense_limit(4, vec![vec![0, 1, 2, 3], vec![1, 2]], 0)
                .unwrap_err();
        assert_eq!(nested, NpmleError::NestedRows { inner: 1, outer: 0 });
    }
}
