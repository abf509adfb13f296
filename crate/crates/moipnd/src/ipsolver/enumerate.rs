//! Exhaustive backend: walk the integer box, keep the best feasible point.
//!
//! The correctness reference for the branch-and-bound backend. All
//! arithmetic is plain integer arithmetic on the pre-scaled rows, so there
//! is nothing numerically subtle here by design.

use super::{CompiledIP, ScalarResult, SolveError};
use crate::model::Sense;

/// Hard cap on box sizes this backend will walk; larger boxes are refused.
const POINT_LIMIT: u128 = 1 << 26;

pub(super) fn solve(ip: &CompiledIP) -> Result<ScalarResult, SolveError> {
    let n = ip.lower.len();
    let points = ip
        .lower
        .iter()
        .zip(&ip.upper)
        .fold(1u128, |acc, (&lo, &hi)| {
            acc.saturating_mul((hi - lo) as u128 + 1)
        });
    if points > POINT_LIMIT {
        return Err(SolveError::ResourceLimit(format!(
            "enumeration backend refuses boxes over {POINT_LIMIT} points (got {points})"
        )));
    }

    let mut x = ip.lower.clone();
    let mut best: Option<(Vec<i64>, i128)> = None;
    'points: loop {
        if satisfies_all(ip, &x) {
            let value: i128 = ip
                .objective
                .iter()
                .zip(&x)
                .map(|(&c, &xj)| c as i128 * xj as i128)
                .sum();
            if best.as_ref().is_none_or(|(_, b)| value < *b) {
                best = Some((x.clone(), value));
            }
        }
        for j in 0..n {
            if x[j] < ip.upper[j] {
                x[j] += 1;
                continue 'points;
            }
            x[j] = ip.lower[j];
        }
        break;
    }

    Ok(match best {
        Some((solution, value)) => ScalarResult::Optimal {
            solution,
            value: i64::try_from(value).map_err(|_| {
                SolveError::NumericRange("objective value does not fit 64 bits".into())
            })?,
        },
        None => ScalarResult::Infeasible,
    })
}

fn satisfies_all(ip: &CompiledIP, x: &[i64]) -> bool {
    ip.rows.iter().all(|(coeffs, sense, rhs)| {
        let lhs: i128 = coeffs.iter().zip(x).map(|(&c, &xj)| c * xj as i128).sum();
        match sense {
            Sense::Le => lhs <= *rhs,
            Sense::Ge => lhs >= *rhs,
            Sense::Eq => lhs == *rhs,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipsolver::{compile, ScalarIP};
    use crate::model::{Constraint, Problem, Sense};

    #[test]
    fn finds_the_minimum_over_a_small_box() {
        let p = Problem::new(
            vec![vec![2, -3]],
            vec![Constraint::integral(&[1, 1], Sense::Le, 3)],
            vec![(0, 2), (0, 2)],
        )
        .unwrap();
        let compiled = compile(&ScalarIP::for_objective(&p, 0)).unwrap();
        let r = solve(&compiled).unwrap();
        // x = (0, 2) gives -6; (1, 2) violates nothing? 1 + 2 = 3 <= 3, value 2 - 6 = -4.
        assert_eq!(r.value(), Some(-6));
    }

    #[test]
    fn refuses_oversized_boxes() {
        let p = Problem::new(vec![vec![1; 30]], vec![], vec![(0, 3); 30]).unwrap();
        let compiled = compile(&ScalarIP::for_objective(&p, 0)).unwrap();
        assert!(matches!(
            solve(&compiled),
            Err(SolveError::ResourceLimit(_))
        ));
    }
}
