//! Single-objective integer programming backends.
//!
//! [`solve_scalar`] minimizes one integer-coefficient objective over a
//! [`Problem`]'s feasible set plus any extra constraints. Two backends share
//! the contract:
//!
//! * [`Backend::Enum`] walks every integer point of the variable box. Slow
//!   but unconditionally correct; the reference the other backend is tested
//!   against.
//! * [`Backend::Bb`] runs branch-and-bound over a bounded-variable LP
//!   relaxation with exact rational pivoting, so optimality and
//!   infeasibility answers are exact, never tolerance-dependent.
//!
//! Both return identical statuses and optimal values; when alternative
//! optima exist the reported solutions may differ, and callers must depend
//! only on values.

mod branch;
mod enumerate;
mod scalars;
mod simplex;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Constraint, Problem, Rational, Sense, MAX_SCALED_COEFF};

/// Which solver answers a [`ScalarIP`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Exhaustive enumeration of the variable box.
    Enum,
    /// Branch-and-bound over an exact rational LP relaxation.
    Bb,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Enum => "enum",
            Backend::Bb => "bb",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "enum" => Ok(Backend::Enum),
            "bb" => Ok(Backend::Bb),
            other => Err(format!("unknown backend {other:?}, expected \"enum\" or \"bb\"")),
        }
    }
}

/// A single-objective IP: one base problem, one objective row, and any
/// number of appended constraints. Values only; building one performs no
/// solving.
#[derive(Clone, Debug)]
pub struct ScalarIP<'a> {
    base: &'a Problem,
    objective: Vec<i64>,
    extra: Vec<Constraint>,
}

impl<'a> ScalarIP<'a> {
    /// Minimizes objective `index` of the base problem.
    pub fn for_objective(base: &'a Problem, index: usize) -> Self {
        ScalarIP {
            base,
            objective: base.objective_row(index).to_vec(),
            extra: Vec::new(),
        }
    }

    /// Minimizes an explicit integer coefficient row.
    pub fn for_objective_row(base: &'a Problem, objective: Vec<i64>) -> Self {
        assert_eq!(
            objective.len(),
            base.num_vars(),
            "objective row length mismatch"
        );
        ScalarIP {
            base,
            objective,
            extra: Vec::new(),
        }
    }

    /// Returns a copy with one more constraint appended; `self` is unchanged.
    pub fn tighten(&self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        assert_eq!(coeffs.len(), self.base.num_vars(), "row length mismatch");
        let mut next = self.clone();
        next.extra.push(Constraint::new(coeffs, sense, rhs));
        next
    }

    /// [`ScalarIP::tighten`] for integer rows.
    pub fn tighten_integral(&self, coeffs: &[i64], sense: Sense, rhs: i64) -> Self {
        assert_eq!(coeffs.len(), self.base.num_vars(), "row length mismatch");
        let mut next = self.clone();
        next.extra.push(Constraint::integral(coeffs, sense, rhs));
        next
    }

    /// The base problem.
    pub fn base(&self) -> &Problem {
        self.base
    }

    /// The objective row being minimized.
    pub fn objective(&self) -> &[i64] {
        &self.objective
    }

    /// Constraints appended on top of the base problem.
    pub fn extra_constraints(&self) -> &[Constraint] {
        &self.extra
    }
}

/// Outcome of a scalar solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarResult {
    /// A true minimizer over the feasible set.
    Optimal {
        /// One optimal assignment (not unique in general).
        solution: Vec<i64>,
        /// The optimal objective value; equal across backends.
        value: i64,
    },
    /// No feasible point exists.
    Infeasible,
}

impl ScalarResult {
    /// The optimal value, if any.
    pub fn value(&self) -> Option<i64> {
        match self {
            ScalarResult::Optimal { value, .. } => Some(*value),
            ScalarResult::Infeasible => None,
        }
    }

    /// True iff a minimizer was found.
    pub fn is_optimal(&self) -> bool {
        matches!(self, ScalarResult::Optimal { .. })
    }
}

/// Failures of the solving machinery. These are refusals, never wrong
/// answers.
#[derive(Debug, Error)]
pub enum SolveError {
    /// An internal iteration or node limit was exceeded.
    #[error("solver resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// Exact arithmetic would leave the supported magnitude range.
    #[error("coefficient magnitudes exceed the exact arithmetic range: {0}")]
    NumericRange(String),
}

/// Integer-scaled form of a [`ScalarIP`]: base and extra constraints with
/// denominators cleared, plus the objective and box. Both backends consume
/// this form.
#[derive(Clone, Debug)]
pub(crate) struct CompiledIP {
    pub objective: Vec<i64>,
    pub rows: Vec<(Vec<i128>, Sense, i128)>,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

pub(crate) fn compile(ip: &ScalarIP<'_>) -> Result<CompiledIP, SolveError> {
    let mut rows = Vec::with_capacity(ip.base.constraints().len() + ip.extra.len());
    for sc in ip.base.scaled_constraints() {
        rows.push((sc.coeffs.clone(), sc.sense, sc.rhs));
    }
    for c in &ip.extra {
        let scaled = crate::model::scale_constraint(c).ok_or_else(|| {
            SolveError::NumericRange(format!(
                "appended constraint exceeds scaled magnitude {MAX_SCALED_COEFF}"
            ))
        })?;
        rows.push((scaled.coeffs, scaled.sense, scaled.rhs));
    }
    let (lower, upper): (Vec<i64>, Vec<i64>) = ip.base.var_bounds().iter().copied().unzip();
    Ok(CompiledIP {
        objective: ip.objective.clone(),
        rows,
        lower,
        upper,
    })
}

/// Minimizes `ip` with the chosen backend.
///
/// Returns [`ScalarResult::Optimal`] with a true minimizer whenever any
/// feasible point exists, else [`ScalarResult::Infeasible`]. Errors are
/// resource refusals only.
pub fn solve_scalar(ip: &ScalarIP<'_>, backend: Backend) -> Result<ScalarResult, SolveError> {
    solve_scalar_hinted(ip, backend, None)
}

/// [`solve_scalar`] with an optional warm incumbent for the branch-and-bound
/// backend: a known-feasible solution and its objective value. The hint can
/// only speed up pruning; results are identical with or without it.
pub(crate) fn solve_scalar_hinted(
    ip: &ScalarIP<'_>,
    backend: Backend,
    hint: Option<(&[i64], i64)>,
) -> Result<ScalarResult, SolveError> {
    let compiled = compile(ip)?;
    match backend {
        Backend::Enum => enumerate::solve(&compiled),
        Backend::Bb => branch::solve(&compiled, hint),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Problem;

    fn selection_problem(columns: &[i64]) -> Problem {
        Problem::new(
            vec![columns.to_vec()],
            vec![Constraint::integral(&vec![1; columns.len()], Sense::Eq, 1)],
            vec![(0, 1); columns.len()],
        )
        .unwrap()
    }

    #[test]
    fn one_hot_selection_minimum_is_smallest_column() {
        let p = selection_problem(&[11, 12, 13, 14]);
        for backend in [Backend::Enum, Backend::Bb] {
            let r = solve_scalar(&ScalarIP::for_objective(&p, 0), backend).unwrap();
            assert_eq!(r.value(), Some(11), "backend {backend}");
        }
    }

    #[test]
    fn quad_instance_infeasible_below_reachable_second_objective() {
        let p = crate::testutil::quad_problem();
        let ip = ScalarIP::for_objective(&p, 0).tighten_integral(p.objective_row(1), Sense::Le, 7);
        for backend in [Backend::Enum, Backend::Bb] {
            assert_eq!(
                solve_scalar(&ip, backend).unwrap(),
                ScalarResult::Infeasible,
                "backend {backend}"
            );
        }
    }

    #[test]
    fn null_tightening_keeps_the_feasible_set() {
        let p = selection_problem(&[5, 3, 9]);
        let base = ScalarIP::for_objective(&p, 0);
        let tightened = base.tighten_integral(&[0, 0, 0], Sense::Le, 0);
        for backend in [Backend::Enum, Backend::Bb] {
            assert_eq!(
                solve_scalar(&base, backend).unwrap().value(),
                solve_scalar(&tightened, backend).unwrap().value(),
            );
        }
    }

    #[test]
    fn quad_instance_bound_excludes_high_fourth_objective() {
        let p = crate::testutil::quad_problem();
        // Bounding the fourth objective at 13 removes exactly the vectors
        // with value 14 there; the first-objective minimum moves 11 -> 12.
        let ip = ScalarIP::for_objective(&p, 0).tighten_integral(p.objective_row(3), Sense::Le, 13);
        for backend in [Backend::Enum, Backend::Bb] {
            assert_eq!(solve_scalar(&ip, backend).unwrap().value(), Some(12));
        }
    }

    #[test]
    fn contradictory_tightenings_are_infeasible() {
        let p = selection_problem(&[5, 3, 9]);
        let ip = ScalarIP::for_objective(&p, 0)
            .tighten_integral(&[1, 1, 1], Sense::Le, 0)
            .tighten_integral(&[1, 1, 1], Sense::Ge, 1);
        for backend in [Backend::Enum, Backend::Bb] {
            assert_eq!(solve_scalar(&ip, backend).unwrap(), ScalarResult::Infeasible);
        }
    }

    #[test]
    fn tightening_never_improves_the_optimum() {
        let p = selection_problem(&[4, 6, 2, 8]);
        let base = ScalarIP::for_objective(&p, 0);
        let before = solve_scalar(&base, Backend::Enum).unwrap().value().unwrap();
        let tightened = base.tighten_integral(&[0, 0, 1, 0], Sense::Le, 0);
        let after = solve_scalar(&tightened, Backend::Enum).unwrap().value().unwrap();
        assert!(after >= before);
    }

    #[test]
    fn backends_agree_on_random_selection_instances() {
        use crate::instances::{generate_random, GeneratorConfig};
        for seed in 0..100 {
            let cfg = GeneratorConfig {
                cols: 6,
                rows: 3,
                objectives: 2,
                coeff_max: 10,
                seed,
            };
            let p = generate_random(&cfg).unwrap();
            for index in 0..2 {
                let ip = ScalarIP::for_objective(&p, index);
                let e = solve_scalar(&ip, Backend::Enum).unwrap();
                let b = solve_scalar(&ip, Backend::Bb).unwrap();
                assert_eq!(e.value(), b.value(), "seed {seed} objective {index}");
            }
        }
    }
}
