//! Core problem data: multi-objective integer programs, objective vectors,
//! dominance, and nondominated sets.
//!
//! Objective values are exact 64-bit integers; constraint data is exact
//! rational. [`Problem::new`] validates every structural invariant once
//! (shapes, finite bounds, magnitude headroom), so downstream code can rely
//! on them without re-checking. All types are immutable after construction
//! and cheap to move between threads.

use std::collections::BTreeSet;
use std::fmt;

use num::rational::Ratio;
use thiserror::Error;

/// Exact rational scalar used for constraint coefficients and right-hand sides.
pub type Rational = Ratio<i64>;

/// Largest admissible |f_i(x)| over the variable box, enforced at
/// construction. Leaves headroom for bound arithmetic (`l - 1`) and for the
/// equality pins added during lexicographic solves.
pub const MAX_OBJECTIVE_MAGNITUDE: i64 = 1 << 61;

/// Largest admissible |bound| for a variable.
pub const MAX_VAR_BOUND: i64 = 1 << 31;

/// Largest admissible magnitude for integer-scaled constraint coefficients
/// and right-hand sides (scaling clears rational denominators row by row).
pub(crate) const MAX_SCALED_COEFF: i128 = 1 << 80;

/// Comparison sense of a linear constraint.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    /// Row value must be less than or equal to the right-hand side.
    Le,
    /// Row value must be greater than or equal to the right-hand side.
    Ge,
    /// Row value must equal the right-hand side.
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// One linear constraint: `coeffs . x  <sense>  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// Coefficient per decision variable.
    pub coeffs: Vec<Rational>,
    /// Comparison sense.
    pub sense: Sense,
    /// Right-hand side.
    pub rhs: Rational,
}

impl Constraint {
    /// Builds a constraint from rational data.
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Constraint { coeffs, sense, rhs }
    }

    /// Builds a constraint from integer data.
    pub fn integral(coeffs: &[i64], sense: Sense, rhs: i64) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(|&c| Rational::from_integer(c)).collect(),
            sense,
            rhs: Rational::from_integer(rhs),
        }
    }
}

/// A constraint with denominators cleared, kept alongside the rational form
/// so feasibility checks and solver backends can use overflow-safe integer
/// arithmetic. Scaling preserves the feasible set exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ScaledConstraint {
    pub coeffs: Vec<i128>,
    pub sense: Sense,
    pub rhs: i128,
}

/// Construction-time validation failures.
#[derive(Debug, Error)]
pub enum ModelError {
    /// A problem needs at least one variable and one objective.
    #[error("problem must have at least one variable and one objective")]
    Empty,
    /// An objective row has the wrong number of coefficients.
    #[error("objective row {row} has {found} coefficients, expected {expected}")]
    ObjectiveShape {
        /// Zero-based objective row index.
        row: usize,
        /// Coefficients found.
        found: usize,
        /// Coefficients expected (the variable count).
        expected: usize,
    },
    /// A constraint row has the wrong number of coefficients.
    #[error("constraint {index} has {found} coefficients, expected {expected}")]
    ConstraintShape {
        /// Zero-based constraint index.
        index: usize,
        /// Coefficients found.
        found: usize,
        /// Coefficients expected (the variable count).
        expected: usize,
    },
    /// A variable's bounds are inverted or out of range.
    #[error("variable {index} has invalid bounds [{lower}, {upper}]")]
    BadBounds {
        /// Zero-based variable index.
        index: usize,
        /// Offending lower bound.
        lower: i64,
        /// Offending upper bound.
        upper: i64,
    },
    /// Objective values could exceed the exact 64-bit range somewhere in the box.
    #[error("objective {row} may exceed magnitude {limit} over the variable box")]
    ObjectiveRange {
        /// Zero-based objective row index.
        row: usize,
        /// The enforced magnitude limit.
        limit: i64,
    },
    /// Constraint data too large to clear denominators within the integer range.
    #[error("constraint {index} coefficients exceed the exact arithmetic range")]
    CoefficientRange {
        /// Zero-based constraint index.
        index: usize,
    },
    /// Vectors of differing lengths were mixed in one collection.
    #[error("objective vectors have mixed lengths ({first} vs {second})")]
    MixedLengths {
        /// Length seen first.
        first: usize,
        /// Conflicting length.
        second: usize,
    },
}

/// A multi-objective integer program: minimize `k` integer-coefficient
/// linear objectives over the integer points of a rationally constrained,
/// finitely bounded box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    num_vars: usize,
    num_objectives: usize,
    objective_coeffs: Vec<Vec<i64>>,
    constraints: Vec<Constraint>,
    scaled: Vec<ScaledConstraint>,
    var_bounds: Vec<(i64, i64)>,
}

impl Problem {
    /// Validates and builds a problem.
    ///
    /// Every objective coefficient is an integer, every variable has finite
    /// bounds with `lower <= upper`, and all rows match the variable count.
    /// Magnitudes are capped so that objective values, bound decrements, and
    /// scaled constraint arithmetic stay exact.
    pub fn new(
        objective_coeffs: Vec<Vec<i64>>,
        constraints: Vec<Constraint>,
        var_bounds: Vec<(i64, i64)>,
    ) -> Result<Self, ModelError> {
        let n = var_bounds.len();
        let k = objective_coeffs.len();
        if n == 0 || k == 0 {
            return Err(ModelError::Empty);
        }
        for (index, &(lower, upper)) in var_bounds.iter().enumerate() {
            let in_range = lower.abs() <= MAX_VAR_BOUND && upper.abs() <= MAX_VAR_BOUND;
            if lower > upper || !in_range {
                return Err(ModelError::BadBounds {
                    index,
                    lower,
                    upper,
                });
            }
        }
        for (row, coeffs) in objective_coeffs.iter().enumerate() {
            if coeffs.len() != n {
                return Err(ModelError::ObjectiveShape {
                    row,
                    found: coeffs.len(),
                    expected: n,
                });
            }
            let mut reach: i128 = 0;
            for (j, &c) in coeffs.iter().enumerate() {
                let (lo, hi) = var_bounds[j];
                let c = c as i128;
                reach += (c * lo as i128).abs().max((c * hi as i128).abs());
            }
            if reach > MAX_OBJECTIVE_MAGNITUDE as i128 {
                return Err(ModelError::ObjectiveRange {
                    row,
                    limit: MAX_OBJECTIVE_MAGNITUDE,
                });
            }
        }
        let mut scaled = Vec::with_capacity(constraints.len());
        for (index, c) in constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(ModelError::ConstraintShape {
                    index,
                    found: c.coeffs.len(),
                    expected: n,
                });
            }
            scaled.push(
                scale_constraint(c).ok_or(ModelError::CoefficientRange { index })?,
            );
        }
        Ok(Problem {
            num_vars: n,
            num_objectives: k,
            objective_coeffs,
            constraints,
            scaled,
            var_bounds,
        })
    }

    /// Number of decision variables.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of objectives `k`.
    pub fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    /// All objective coefficient rows, one row per objective.
    pub fn objective_coeffs(&self) -> &[Vec<i64>] {
        &self.objective_coeffs
    }

    /// Coefficient row of one objective.
    pub fn objective_row(&self, objective: usize) -> &[i64] {
        &self.objective_coeffs[objective]
    }

    /// The constraint list in input order.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Integer-scaled constraints (denominators cleared), parallel to
    /// [`Problem::constraints`].
    pub(crate) fn scaled_constraints(&self) -> &[ScaledConstraint] {
        &self.scaled
    }

    /// Inclusive `(lower, upper)` bounds per variable.
    pub fn var_bounds(&self) -> &[(i64, i64)] {
        &self.var_bounds
    }

    /// Number of integer points in the variable box, saturating at `u128::MAX`.
    pub fn box_point_count(&self) -> u128 {
        self.var_bounds.iter().fold(1u128, |acc, &(lo, hi)| {
            acc.saturating_mul((hi - lo) as u128 + 1)
        })
    }

    /// Evaluates all objectives at `x`, exactly.
    ///
    /// `x` must have one entry per variable and lie inside the variable box.
    pub fn evaluate(&self, x: &[i64]) -> ObjectiveVector {
        assert_eq!(x.len(), self.num_vars, "assignment length mismatch");
        let values = self
            .objective_coeffs
            .iter()
            .map(|row| {
                let sum: i128 = row
                    .iter()
                    .zip(x)
                    .map(|(&c, &xj)| c as i128 * xj as i128)
                    .sum();
                // In range by the construction-time magnitude guard.
                sum as i64
            })
            .collect();
        ObjectiveVector::new(values)
    }

    /// Checks `x` against every constraint and all variable bounds, exactly.
    pub fn is_feasible(&self, x: &[i64]) -> bool {
        assert_eq!(x.len(), self.num_vars, "assignment length mismatch");
        let bounds_ok = self
            .var_bounds
            .iter()
            .zip(x)
            .all(|(&(lo, hi), &xj)| lo <= xj && xj <= hi);
        bounds_ok && self.scaled.iter().all(|c| c.holds_at(x))
    }
}

impl ScaledConstraint {
    pub(crate) fn holds_at(&self, x: &[i64]) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(&c, &xj)| c * xj as i128)
            .sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

pub(crate) fn scale_constraint(c: &Constraint) -> Option<ScaledConstraint> {
    let mut lcm: i128 = 1;
    for r in c.coeffs.iter().chain(std::iter::once(&c.rhs)) {
        let d = *r.denom() as i128;
        lcm = checked_lcm(lcm, d)?;
        if lcm > MAX_SCALED_COEFF {
            return None;
        }
    }
    let scale = |r: &Rational| -> Option<i128> {
        let v = (*r.numer() as i128).checked_mul(lcm / *r.denom() as i128)?;
        (v.abs() <= MAX_SCALED_COEFF).then_some(v)
    };
    Some(ScaledConstraint {
        coeffs: c.coeffs.iter().map(&scale).collect::<Option<_>>()?,
        sense: c.sense,
        rhs: scale(&c.rhs)?,
    })
}

fn checked_lcm(a: i128, b: i128) -> Option<i128> {
    (a / num::integer::gcd(a, b)).checked_mul(b)
}

/// A point in objective space: the `k` objective values of some assignment.
///
/// Ordering is ascending lexicographic, which fixes the canonical iteration
/// order of [`NDSet`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectiveVector {
    values: Vec<i64>,
}

impl ObjectiveVector {
    /// Wraps raw objective values.
    pub fn new(values: Vec<i64>) -> Self {
        ObjectiveVector { values }
    }

    /// The objective values, first objective first.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Number of objectives.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True for the (degenerate) zero-objective vector.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl From<Vec<i64>> for ObjectiveVector {
    fn from(values: Vec<i64>) -> Self {
        ObjectiveVector::new(values)
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Minimization dominance: true iff `a` is no worse than `b` in every
/// coordinate and strictly better in at least one.
///
/// Irreflexive and transitive; `dominates(a, b)` implies `!dominates(b, a)`.
/// Panics if the lengths differ (caller contract).
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(a.len(), b.len(), "dominance needs equal-length vectors");
    let mut strict = false;
    for (&ai, &bi) in a.values.iter().zip(&b.values) {
        if ai > bi {
            return false;
        }
        strict |= ai < bi;
    }
    strict
}

fn dominates_in_prefix(a: &ObjectiveVector, b: &ObjectiveVector, prefix: usize) -> bool {
    let mut strict = false;
    for (&ai, &bi) in a.values[..prefix].iter().zip(&b.values[..prefix]) {
        if ai > bi {
            return false;
        }
        strict |= ai < bi;
    }
    strict
}

/// A duplicate-free set of pairwise nondominated objective vectors, iterated
/// in ascending lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NDSet {
    vectors: BTreeSet<ObjectiveVector>,
}

impl NDSet {
    /// An empty set.
    pub fn new() -> Self {
        NDSet::default()
    }

    /// Number of vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// True iff the set holds no vectors.
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, v: &ObjectiveVector) -> bool {
        self.vectors.contains(v)
    }

    /// Ascending lexicographic iteration.
    pub fn iter(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.vectors.iter()
    }

    /// Largest value of one coordinate across the set, if nonempty.
    pub fn max_coordinate(&self, index: usize) -> Option<i64> {
        self.vectors.iter().map(|v| v.values()[index]).max()
    }

    /// Merges `other` in. Both operands must already be mutually
    /// nondominated, which holds for the partial fronts the solvers merge;
    /// violations are caught by debug assertions.
    pub fn union_with(&mut self, other: &NDSet) {
        for v in &other.vectors {
            self.vectors.insert(v.clone());
        }
        debug_assert!(self.is_pairwise_nondominated(self.width()));
    }

    /// Builds a set from vectors already known to be pairwise nondominated.
    pub(crate) fn from_nondominated(vectors: impl IntoIterator<Item = ObjectiveVector>) -> Self {
        let set = NDSet {
            vectors: vectors.into_iter().collect(),
        };
        debug_assert!(set.is_pairwise_nondominated(set.width()));
        set
    }

    pub(crate) fn singleton(v: ObjectiveVector) -> Self {
        NDSet {
            vectors: std::iter::once(v).collect(),
        }
    }

    fn width(&self) -> usize {
        self.vectors.iter().next().map_or(0, |v| v.len())
    }

    /// True iff no member dominates another when comparing only the first
    /// `prefix` coordinates. With `prefix` = vector length this is the full
    /// set invariant.
    pub(crate) fn is_pairwise_nondominated(&self, prefix: usize) -> bool {
        let all: Vec<_> = self.vectors.iter().collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if dominates_in_prefix(a, b, prefix) || dominates_in_prefix(b, a, prefix) {
                    return false;
                }
            }
        }
        true
    }
}

impl<'a> IntoIterator for &'a NDSet {
    type Item = &'a ObjectiveVector;
    type IntoIter = std::collections::btree_set::Iter<'a, ObjectiveVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.vectors.iter()
    }
}

/// Keeps exactly the input points not dominated by any other input point,
/// deduplicated. Idempotent and insensitive to input order. Panics on mixed
/// vector lengths (caller contract).
pub fn filter_nondominated(points: impl IntoIterator<Item = ObjectiveVector>) -> NDSet {
    let distinct: BTreeSet<ObjectiveVector> = points.into_iter().collect();
    if let Some(first) = distinct.iter().next() {
        let len = first.len();
        assert!(
            distinct.iter().all(|v| v.len() == len),
            "nondominated filter needs equal-length vectors"
        );
    }
    NDSet::from_nondominated(
        distinct
            .iter()
            .filter(|v| !distinct.iter().any(|u| dominates(u, v)))
            .cloned(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(values: &[i64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec())
    }

    #[test]
    fn equal_vectors_do_not_dominate() {
        let a = ov(&[11, 19, 12, 14]);
        assert!(!dominates(&a, &a.clone()));
    }

    #[test]
    fn single_coordinate_improvement_dominates() {
        assert!(dominates(&ov(&[12, 11, 11, 13]), &ov(&[12, 11, 11, 14])));
    }

    #[test]
    fn incomparable_vectors_do_not_dominate_either_way() {
        let a = ov(&[15, 16, 7, 12]);
        let b = ov(&[13, 9, 16, 11]);
        assert!(!dominates(&a, &b));
        assert!(!dominates(&b, &a));
    }

    #[test]
    fn filter_retains_mutually_nondominated_front() {
        let front = crate::testutil::quad_front();
        let nd = filter_nondominated(front.clone());
        assert_eq!(nd.len(), 14);
        for v in &front {
            assert!(nd.contains(v));
        }
    }

    #[test]
    fn filter_deduplicates() {
        let nd = filter_nondominated(vec![ov(&[1, 1]), ov(&[1, 1])]);
        assert_eq!(nd.len(), 1);
    }

    #[test]
    fn filter_keeps_single_dominator() {
        let nd = filter_nondominated(vec![ov(&[0, 0]), ov(&[0, 1]), ov(&[1, 0])]);
        assert_eq!(nd.iter().cloned().collect::<Vec<_>>(), vec![ov(&[0, 0])]);
    }

    #[test]
    fn filter_is_idempotent() {
        let pts = vec![ov(&[3, 1]), ov(&[1, 3]), ov(&[2, 2]), ov(&[4, 4])];
        let once = filter_nondominated(pts);
        let twice = filter_nondominated(once.iter().cloned());
        assert_eq!(once, twice);
    }

    #[test]
    fn evaluate_all_zero_assignment() {
        let p = Problem::new(
            vec![vec![3, -2], vec![5, 7]],
            vec![],
            vec![(0, 4), (0, 4)],
        )
        .unwrap();
        assert_eq!(p.evaluate(&[0, 0]), ov(&[0, 0]));
    }

    #[test]
    fn evaluate_one_hot_reads_an_objective_column() {
        let p = Problem::new(
            vec![vec![3, -2, 9], vec![5, 7, 1]],
            vec![],
            vec![(0, 1); 3],
        )
        .unwrap();
        assert_eq!(p.evaluate(&[0, 1, 0]), ov(&[-2, 7]));
    }

    #[test]
    fn evaluate_matches_naive_summation() {
        let rows = vec![vec![4, -3, 2, 8], vec![-1, 0, 6, 5], vec![7, 7, -2, 1]];
        let p = Problem::new(rows.clone(), vec![], vec![(-3, 5); 4]).unwrap();
        let x = [2, -1, 4, 3];
        let naive: Vec<i64> = rows
            .iter()
            .map(|row| {
                let mut acc = 0i64;
                for j in 0..4 {
                    acc += row[j] * x[j];
                }
                acc
            })
            .collect();
        assert_eq!(p.evaluate(&x), ObjectiveVector::new(naive));
    }

    #[test]
    fn lower_bounds_feasible_without_constraints() {
        let p = Problem::new(vec![vec![1, 1]], vec![], vec![(2, 5), (-1, 3)]).unwrap();
        assert!(p.is_feasible(&[2, -1]));
        assert!(!p.is_feasible(&[1, -1]));
    }

    #[test]
    fn selection_constraint_accepts_one_hot_only() {
        let p = Problem::new(
            vec![vec![1, 2, 3]],
            vec![Constraint::integral(&[1, 1, 1], Sense::Eq, 1)],
            vec![(0, 1); 3],
        )
        .unwrap();
        assert!(p.is_feasible(&[0, 1, 0]));
        assert!(!p.is_feasible(&[1, 1, 0]));
    }

    #[test]
    fn feasibility_agrees_with_direct_rational_recheck() {
        let c = Constraint::new(
            vec![Rational::new(1, 2), Rational::new(-2, 3)],
            Sense::Le,
            Rational::new(5, 6),
        );
        let p = Problem::new(vec![vec![1, 1]], vec![c.clone()], vec![(-4, 4), (-4, 4)]).unwrap();
        for x0 in -4..=4 {
            for x1 in -4..=4 {
                let lhs = c.coeffs[0] * Rational::from_integer(x0)
                    + c.coeffs[1] * Rational::from_integer(x1);
                assert_eq!(p.is_feasible(&[x0, x1]), lhs <= c.rhs, "at ({x0}, {x1})");
            }
        }
    }

    #[test]
    fn construction_rejects_bad_shapes_and_bounds() {
        assert!(matches!(
            Problem::new(vec![], vec![], vec![(0, 1)]),
            Err(ModelError::Empty)
        ));
        assert!(matches!(
            Problem::new(vec![vec![1, 2]], vec![], vec![(0, 1)]),
            Err(ModelError::ObjectiveShape { .. })
        ));
        assert!(matches!(
            Problem::new(vec![vec![1]], vec![], vec![(3, 2)]),
            Err(ModelError::BadBounds { .. })
        ));
        assert!(matches!(
            Problem::new(
                vec![vec![1]],
                vec![Constraint::integral(&[1, 1], Sense::Le, 0)],
                vec![(0, 1)],
            ),
            Err(ModelError::ConstraintShape { .. })
        ));
    }

    #[test]
    fn construction_rejects_objective_overflow_risk() {
        let huge = i64::MAX / 4;
        assert!(matches!(
            Problem::new(vec![vec![huge, huge]], vec![], vec![(0, 1000), (0, 1000)]),
            Err(ModelError::ObjectiveRange { .. })
        ));
    }

    #[test]
    fn ndset_iterates_in_ascending_lexicographic_order() {
        let nd = filter_nondominated(vec![ov(&[2, 1]), ov(&[1, 2]), ov(&[1, 1])]);
        let order: Vec<_> = nd.iter().cloned().collect();
        assert_eq!(order, vec![ov(&[1, 1])]);
        let nd = filter_nondominated(vec![ov(&[2, 1]), ov(&[1, 2])]);
        let order: Vec<_> = nd.iter().cloned().collect();
        assert_eq!(order, vec![ov(&[1, 2]), ov(&[2, 1])]);
    }

    #[test]
    fn box_point_count_multiplies_ranges() {
        let p = Problem::new(vec![vec![1, 1, 1]], vec![], vec![(0, 1), (0, 2), (-1, 1)]).unwrap();
        assert_eq!(p.box_point_count(), 2 * 3 * 3);
    }
}
