//! Branch-and-bound over exact LP relaxations.
//!
//! Depth-first search on variable bound splits. Each node solves its LP
//! relaxation with [`super::simplex`] using `Ratio<i128>` scalars, retrying
//! the node with arbitrary-precision rationals if the fixed width
//! overflows. Because relaxations are solved exactly, `ceil(lp objective)`
//! is a true lower bound and pruning against the incumbent is lossless.
//!
//! Branching picks the most fractional variable (minimal `|2f - 1|` for
//! fractional part `f`, ties to the lowest index) and descends into the
//! child nearer the LP value first, which tends to find an incumbent early.

use num::rational::Ratio;
use num::BigRational;

use super::simplex::{solve_lp, LpError, LpStatus};
use super::scalars::LpScalar;
use super::{CompiledIP, ScalarResult, SolveError};
use crate::model::Sense;

const NODE_LIMIT: u64 = 200_000;

/// One node's relaxation, reduced to what the search needs.
enum NodeLp {
    Infeasible,
    /// The relaxation optimum is integral, closing this subtree.
    Integral { x: Vec<i64>, value: i64 },
    Fractional {
        /// `ceil` of the LP objective: a valid bound for the subtree.
        bound: i64,
        branch_var: usize,
        /// `floor` of the branch variable's LP value.
        floor: i64,
        /// True when the LP value's fractional part is at least one half.
        prefer_ceil: bool,
    },
}

pub(super) fn solve(
    ip: &CompiledIP,
    hint: Option<(&[i64], i64)>,
) -> Result<ScalarResult, SolveError> {
    let mut incumbent: Option<(Vec<i64>, i64)> = hint.map(|(x, v)| {
        debug_assert!(hint_is_consistent(ip, x, v), "infeasible warm hint");
        (x.to_vec(), v)
    });

    // DFS stack of (lower, upper) boxes; children are pushed far-first so
    // the near child pops first.
    let mut stack: Vec<(Vec<i64>, Vec<i64>)> = vec![(ip.lower.clone(), ip.upper.clone())];
    let mut nodes: u64 = 0;

    while let Some((lower, upper)) = stack.pop() {
        nodes += 1;
        if nodes > NODE_LIMIT {
            return Err(SolveError::ResourceLimit(format!(
                "branch-and-bound node limit {NODE_LIMIT} exceeded"
            )));
        }
        match solve_node(ip, &lower, &upper)? {
            NodeLp::Infeasible => {}
            NodeLp::Integral { x, value } => {
                if incumbent.as_ref().is_none_or(|(_, best)| value < *best) {
                    incumbent = Some((x, value));
                }
            }
            NodeLp::Fractional {
                bound,
                branch_var,
                floor,
                prefer_ceil,
            } => {
                if incumbent.as_ref().is_some_and(|(_, best)| bound >= *best) {
                    continue;
                }
                let mut down_upper = upper.clone();
                down_upper[branch_var] = floor;
                let down = (lower.clone(), down_upper);
                let mut up_lower = lower;
                up_lower[branch_var] = floor + 1;
                let up = (up_lower, upper);
                if prefer_ceil {
                    stack.push(down);
                    stack.push(up);
                } else {
                    stack.push(up);
                    stack.push(down);
                }
            }
        }
    }

    Ok(match incumbent {
        Some((solution, value)) => ScalarResult::Optimal { solution, value },
        None => ScalarResult::Infeasible,
    })
}

fn solve_node(ip: &CompiledIP, lower: &[i64], upper: &[i64]) -> Result<NodeLp, SolveError> {
    match solve_lp::<Ratio<i128>>(&ip.rows, &ip.objective, lower, upper) {
        Ok(status) => classify(status),
        Err(LpError::Overflow) => {
            match solve_lp::<BigRational>(&ip.rows, &ip.objective, lower, upper) {
                Ok(status) => classify(status),
                Err(LpError::Overflow) => unreachable!("arbitrary precision cannot overflow"),
                Err(LpError::Limit(msg)) => Err(SolveError::ResourceLimit(msg.to_string())),
            }
        }
        Err(LpError::Limit(msg)) => Err(SolveError::ResourceLimit(msg.to_string())),
    }
}

fn classify<S: LpScalar>(status: LpStatus<S>) -> Result<NodeLp, SolveError> {
    let LpStatus::Optimal { x, objective } = status else {
        return Ok(NodeLp::Infeasible);
    };

    if x.iter().all(|v| v.is_integer()) {
        debug_assert!(objective.is_integer());
        let x = x
            .iter()
            .map(|v| int_of(v))
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(range_error)?;
        let value = int_of(&objective).ok_or_else(range_error)?;
        return Ok(NodeLp::Integral { x, value });
    }

    let bound = objective
        .ceil_i128()
        .and_then(|c| i64::try_from(c).ok())
        .ok_or_else(range_error)?;

    // Most fractional variable: minimal |2f - 1|, ties to the lowest index.
    let mut choice: Option<(usize, S)> = None;
    for (j, v) in x.iter().enumerate() {
        if v.is_integer() {
            continue;
        }
        let floor = S::from_i128(v.floor_i128().ok_or_else(range_error)?);
        let frac = v.sub(&floor).map_err(|_| range_error())?;
        let twice = frac.add(&frac).map_err(|_| range_error())?;
        let score = twice.sub(&S::one()).map_err(|_| range_error())?.abs();
        if choice.as_ref().is_none_or(|(_, best)| score < *best) {
            choice = Some((j, score));
        }
    }
    let (branch_var, _) = choice.expect("a non-integral solution has a fractional entry");
    let value = &x[branch_var];
    let floor_i = value.floor_i128().ok_or_else(range_error)?;
    let floor = i64::try_from(floor_i).map_err(|_| range_error())?;
    let floor_s = S::from_i128(floor_i);
    let frac = value.sub(&floor_s).map_err(|_| range_error())?;
    let twice = frac.add(&frac).map_err(|_| range_error())?;
    let prefer_ceil = !twice.sub(&S::one()).map_err(|_| range_error())?.is_negative();

    Ok(NodeLp::Fractional {
        bound,
        branch_var,
        floor,
        prefer_ceil,
    })
}

fn int_of<S: LpScalar>(v: &S) -> Option<i64> {
    v.floor_i128().and_then(|i| i64::try_from(i).ok())
}

fn range_error() -> SolveError {
    SolveError::NumericRange("LP values exceed the representable integer range".to_string())
}

#[cfg(debug_assertions)]
fn hint_is_consistent(ip: &CompiledIP, x: &[i64], value: i64) -> bool {
    if x.len() != ip.lower.len() {
        return false;
    }
    let in_box = x
        .iter()
        .zip(ip.lower.iter().zip(&ip.upper))
        .all(|(v, (lo, hi))| lo <= v && v <= hi);
    let rows_hold = ip.rows.iter().all(|(coeffs, sense, rhs)| {
        let dot: i128 = coeffs.iter().zip(x).map(|(c, &v)| c * v as i128).sum();
        match sense {
            Sense::Le => dot <= *rhs,
            Sense::Ge => dot >= *rhs,
            Sense::Eq => dot == *rhs,
        }
    });
    let value_matches = ip
        .objective
        .iter()
        .zip(x)
        .map(|(&c, &v)| c as i128 * v as i128)
        .sum::<i128>()
        == value as i128;
    in_box && rows_hold && value_matches
}

#[cfg(not(debug_assertions))]
fn hint_is_consistent(_: &CompiledIP, _: &[i64], _: i64) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::super::enumerate;
    use super::*;

    fn ip(
        objective: Vec<i64>,
        rows: Vec<(Vec<i128>, Sense, i128)>,
        lower: Vec<i64>,
        upper: Vec<i64>,
    ) -> CompiledIP {
        CompiledIP {
            objective,
            rows,
            lower,
            upper,
        }
    }

    #[test]
    fn integral_root_relaxation_returns_without_branching() {
        let p = ip(vec![1, 1], vec![], vec![2, 3], vec![9, 9]);
        let r = solve(&p, None).unwrap();
        assert_eq!(r.value(), Some(5));
    }

    #[test]
    fn covering_instance_rounds_up_from_fractional_relaxation() {
        // Pairwise covering over binaries: LP optimum 3/2, IP optimum 2.
        let p = ip(
            vec![1, 1, 1],
            vec![
                (vec![1, 1, 0], Sense::Ge, 1),
                (vec![0, 1, 1], Sense::Ge, 1),
                (vec![1, 0, 1], Sense::Ge, 1),
            ],
            vec![0, 0, 0],
            vec![1, 1, 1],
        );
        assert_eq!(solve(&p, None).unwrap().value(), Some(2));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let p = ip(
            vec![1],
            vec![(vec![1], Sense::Ge, 5), (vec![1], Sense::Le, 3)],
            vec![0],
            vec![10],
        );
        assert_eq!(solve(&p, None).unwrap(), ScalarResult::Infeasible);
    }

    #[test]
    fn knapsack_agrees_with_enumeration() {
        // Maximize value within weight: minimize the negated value row.
        let p = ip(
            vec![-10, -13, -7, -11, -9],
            vec![(vec![4, 6, 3, 5, 4], Sense::Le, 10)],
            vec![0; 5],
            vec![1; 5],
        );
        let bb = solve(&p, None).unwrap();
        let reference = enumerate::solve(&p).unwrap();
        assert_eq!(bb.value(), reference.value());
        // Items 0 and 1 fill the capacity exactly: value 10 + 13.
        assert_eq!(bb.value(), Some(-23));
    }

    #[test]
    fn warm_hint_never_changes_the_answer() {
        let p = ip(
            vec![3, 2, 4],
            vec![(vec![1, 1, 1], Sense::Ge, 2)],
            vec![0, 0, 0],
            vec![1, 1, 1],
        );
        let cold = solve(&p, None).unwrap();
        // All-ones is feasible with value 9.
        let warm = solve(&p, Some((&[1, 1, 1], 9))).unwrap();
        assert_eq!(cold.value(), warm.value());
        assert_eq!(cold.value(), Some(5));
    }

    #[test]
    fn wider_integer_boxes_brace_the_bound_splits() {
        // min x + y s.t. 3x + 2y >= 13, 0 <= x,y <= 6 has optimum 5
        // (for example x = 3, y = 2).
        let p = ip(
            vec![1, 1],
            vec![(vec![3, 2], Sense::Ge, 13)],
            vec![0, 0],
            vec![6, 6],
        );
        assert_eq!(solve(&p, None).unwrap().value(), Some(5));
    }
}
