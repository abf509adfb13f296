//! Lexicographic minimization under per-objective upper bounds.
//!
//! [`solve_lex`] is the base step of the enumeration recursion and the unit
//! of the `ip_count` statistic: one invocation, however many scalar solves
//! it spends internally, counts as one. It minimizes the objectives in
//! order by sequential fixing: minimize `f_1`, pin it at its optimum with
//! an equality constraint, minimize `f_2`, and so on through `f_k`. The
//! result is fully determined by objective values, so alternative
//! decision-space optima inside a backend can never change it.

use crate::ipsolver::{self, Backend, ScalarIP, ScalarResult, SolveError};
use crate::model::{ObjectiveVector, Problem, Sense};

/// Per-objective upper bounds. Slot `i` holds the bound on objective
/// `i + 1`'s value; `None` means unbounded (rendered `inf`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundVector {
    bounds: Vec<Option<i64>>,
}

impl BoundVector {
    /// All objectives unbounded.
    pub fn unbounded(num_objectives: usize) -> Self {
        assert!(num_objectives >= 1, "at least one objective");
        BoundVector {
            bounds: vec![None; num_objectives],
        }
    }

    /// Builds from explicit slots.
    pub fn from_bounds(bounds: Vec<Option<i64>>) -> Self {
        assert!(!bounds.is_empty(), "at least one objective");
        BoundVector { bounds }
    }

    /// Number of objective slots.
    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    /// True iff there are no slots (never holds for a constructed value).
    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    /// The bound in `slot`, if finite.
    pub fn get(&self, slot: usize) -> Option<i64> {
        self.bounds[slot]
    }

    /// A copy with `slot` bounded at `value`.
    pub fn with_bound(&self, slot: usize, value: i64) -> Self {
        let mut next = self.clone();
        next.bounds[slot] = Some(value);
        next
    }

    /// Slot bounds in order.
    pub fn iter(&self) -> impl Iterator<Item = Option<i64>> + '_ {
        self.bounds.iter().copied()
    }

    /// True iff `v` meets every finite bound.
    pub fn satisfied_by(&self, v: &ObjectiveVector) -> bool {
        assert_eq!(v.len(), self.bounds.len(), "vector width mismatch");
        self.bounds
            .iter()
            .zip(v.values())
            .all(|(b, value)| b.is_none_or(|limit| *value <= limit))
    }
}

/// What a lexicographic solve found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexOutcome {
    /// The lexicographic minimum under the bounds.
    Found(ObjectiveVector),
    /// No feasible point meets the bounds.
    Infeasible,
}

/// Result of [`solve_lex`]: outcome plus the scalar-solve expenditure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexResult {
    /// Found vector or infeasibility.
    pub outcome: LexOutcome,
    /// Single-objective solves consumed: `k` when feasible, 1 when not.
    pub scalar_solves: u32,
}

impl LexResult {
    /// The found vector, if any.
    pub fn vector(&self) -> Option<&ObjectiveVector> {
        match &self.outcome {
            LexOutcome::Found(v) => Some(v),
            LexOutcome::Infeasible => None,
        }
    }

    /// True iff a vector was found.
    pub fn is_found(&self) -> bool {
        matches!(self.outcome, LexOutcome::Found(_))
    }
}

/// Lexicographically minimizes `(f_1, ..., f_k)` subject to `p`'s
/// constraints and `f_i <= bounds[i - 1]` for every finite bound.
///
/// Stage `i` minimizes `f_i` with every earlier objective pinned at its
/// optimum by an equality row; infeasibility can therefore surface only at
/// stage 1. Each stage hands its optimal assignment to the next as a warm
/// start, which cannot change any value.
pub fn solve_lex(
    p: &Problem,
    bounds: &BoundVector,
    backend: Backend,
) -> Result<LexResult, SolveError> {
    assert_eq!(
        bounds.len(),
        p.num_objectives(),
        "bound slots must match objectives"
    );
    let k = p.num_objectives();

    // Rows appended to every stage: the finite bounds, then one equality
    // pin per completed stage.
    let mut side: Vec<(&[i64], Sense, i64)> = Vec::with_capacity(k + bounds.len());
    for (i, bound) in bounds.iter().enumerate() {
        if let Some(limit) = bound {
            side.push((p.objective_row(i), Sense::Le, limit));
        }
    }

    let mut values: Vec<i64> = Vec::with_capacity(k);
    let mut carry: Option<Vec<i64>> = None;
    let mut scalar_solves: u32 = 0;

    for stage in 0..k {
        let mut ip = ScalarIP::for_objective(p, stage);
        for (row, sense, rhs) in &side {
            ip = ip.tighten_integral(row, *sense, *rhs);
        }
        let hint_value = carry
            .as_ref()
            .map(|x| objective_value(p.objective_row(stage), x));
        let result = ipsolver::solve_scalar_hinted(
            &ip,
            backend,
            carry
                .as_deref()
                .zip(hint_value)
                .map(|(x, v)| (x, v)),
        )?;
        scalar_solves += 1;
        match result {
            ScalarResult::Optimal { solution, value } => {
                values.push(value);
                side.push((p.objective_row(stage), Sense::Eq, value));
                carry = Some(solution);
            }
            ScalarResult::Infeasible => {
                debug_assert_eq!(stage, 0, "pinned stages stay feasible");
                return Ok(LexResult {
                    outcome: LexOutcome::Infeasible,
                    scalar_solves,
                });
            }
        }
    }

    Ok(LexResult {
        outcome: LexOutcome::Found(ObjectiveVector::new(values)),
        scalar_solves,
    })
}

fn objective_value(row: &[i64], x: &[i64]) -> i64 {
    let acc: i128 = row.iter().zip(x).map(|(&c, &v)| c as i128 * v as i128).sum();
    i64::try_from(acc).expect("objective reach is validated at construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::build_point_instance;
    use crate::model::ObjectiveVector;

    const BACKENDS: [Backend; 2] = [Backend::Enum, Backend::Bb];

    fn ov(values: &[i64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec())
    }

    #[test]
    fn unbounded_lex_minimum_of_the_quad_instance() {
        let p = crate::testutil::quad_problem();
        for backend in BACKENDS {
            let r = solve_lex(&p, &BoundVector::unbounded(4), backend).unwrap();
            assert_eq!(r.vector(), Some(&ov(&[11, 19, 12, 14])), "backend {backend}");
            assert_eq!(r.scalar_solves, 4);
        }
    }

    #[test]
    fn second_objective_bound_moves_the_minimum() {
        let p = crate::testutil::quad_problem();
        let bounds = BoundVector::from_bounds(vec![None, Some(18), None, None]);
        for backend in BACKENDS {
            let r = solve_lex(&p, &bounds, backend).unwrap();
            assert_eq!(r.vector(), Some(&ov(&[12, 11, 11, 13])), "backend {backend}");
        }
    }

    #[test]
    fn unreachable_bound_is_infeasible_after_one_scalar_solve() {
        let p = crate::testutil::quad_problem();
        let bounds = BoundVector::from_bounds(vec![None, Some(7), None, None]);
        for backend in BACKENDS {
            let r = solve_lex(&p, &bounds, backend).unwrap();
            assert_eq!(r.outcome, LexOutcome::Infeasible, "backend {backend}");
            assert_eq!(r.scalar_solves, 1);
        }
    }

    #[test]
    fn found_vectors_respect_every_finite_bound() {
        let p = crate::testutil::quad_problem();
        let bounds = BoundVector::from_bounds(vec![None, Some(16), Some(14), Some(12)]);
        for backend in BACKENDS {
            let r = solve_lex(&p, &bounds, backend).unwrap();
            let v = r.vector().expect("feasible bounds");
            assert!(bounds.satisfied_by(v), "backend {backend}: {v}");
        }
    }

    #[test]
    fn duplicate_columns_cannot_perturb_the_result() {
        // Two identical image points give the backends a free choice of
        // solution; the pinned values must be identical anyway.
        let vectors = vec![ov(&[5, 3]), ov(&[5, 3]), ov(&[4, 9])];
        let p = build_point_instance(&vectors).unwrap();
        let bounds = BoundVector::unbounded(2);
        let enum_r = solve_lex(&p, &bounds, Backend::Enum).unwrap();
        let bb_r = solve_lex(&p, &bounds, Backend::Bb).unwrap();
        assert_eq!(enum_r.vector(), bb_r.vector());
        assert_eq!(enum_r.vector(), Some(&ov(&[4, 9])));
    }

    #[test]
    fn lex_minimum_matches_the_image_order_on_point_instances() {
        // On a one-hot instance the lex minimum is the lexicographic
        // smallest image vector satisfying the bounds.
        let vectors = vec![
            ov(&[3, 9, 4]),
            ov(&[3, 7, 8]),
            ov(&[2, 11, 5]),
            ov(&[6, 1, 1]),
        ];
        let p = build_point_instance(&vectors).unwrap();
        let bounds = BoundVector::from_bounds(vec![None, Some(9), None]);
        for backend in BACKENDS {
            let r = solve_lex(&p, &bounds, backend).unwrap();
            assert_eq!(r.vector(), Some(&ov(&[3, 7, 8])), "backend {backend}");
        }
    }

    #[test]
    fn bounds_on_the_first_objective_are_honored_too() {
        let vectors = vec![ov(&[3, 9]), ov(&[5, 2])];
        let p = build_point_instance(&vectors).unwrap();
        let bounds = BoundVector::from_bounds(vec![Some(4), None]);
        for backend in BACKENDS {
            let r = solve_lex(&p, &bounds, backend).unwrap();
            assert_eq!(r.vector(), Some(&ov(&[3, 9])), "backend {backend}");
        }
    }

    #[test]
    fn satisfied_by_treats_missing_bounds_as_unbounded() {
        let b = BoundVector::from_bounds(vec![None, Some(5)]);
        assert!(b.satisfied_by(&ov(&[100, 5])));
        assert!(!b.satisfied_by(&ov(&[100, 6])));
    }
}
