//! Bounded-variable two-phase simplex over exact rational scalars.
//!
//! Dense tableau, Dantzig pricing with a permanent switch to Bland's rule
//! after a degenerate streak (so termination never depends on luck), and a
//! ratio test that treats both variable bounds, including bound flips that
//! move a nonbasic variable across its range without a pivot.
//!
//! `>=` rows are negated into `<=` rows up front. `<=` rows get one slack
//! column; equality rows get none. Rows whose slack cannot host the initial
//! basis get an artificial column; phase 1 drives the artificial sum to
//! zero or proves infeasibility. Artificials stay in the tableau afterwards
//! pinned to `[0, 0]`, where the ratio test keeps them at zero.

use super::scalars::{ArithOverflow, LpScalar};
use crate::model::Sense;

const PIVOT_LIMIT: u64 = 50_000;
const DEGENERATE_SWITCH: u32 = 60;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(super) enum LpError {
    /// Fixed-width arithmetic left its range; retry with wider scalars.
    Overflow,
    /// Pivot budget exhausted or an internal invariant failed.
    Limit(&'static str),
}

impl From<ArithOverflow> for LpError {
    fn from(_: ArithOverflow) -> Self {
        LpError::Overflow
    }
}

#[derive(Clone, Debug)]
pub(super) enum LpStatus<S> {
    Optimal {
        /// Structural variable values.
        x: Vec<S>,
        /// Objective value at `x`.
        objective: S,
    },
    Infeasible,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Tableau<S> {
    cols: usize,
    structural: usize,
    /// Index of the first artificial column; `cols` when there are none.
    first_artificial: usize,
    rows: Vec<Vec<S>>,
    lower: Vec<S>,
    upper: Vec<Option<S>>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    x: Vec<S>,
    costs: Vec<S>,
    pivots: u64,
    degenerate_streak: u32,
    bland: bool,
}

/// Minimizes `objective` over the given rows and finite structural bounds.
pub(super) fn solve_lp<S: LpScalar>(
    rows: &[(Vec<i128>, Sense, i128)],
    objective: &[i64],
    lower: &[i64],
    upper: &[i64],
) -> Result<LpStatus<S>, LpError> {
    let mut t = Tableau::build(rows, objective, lower, upper)?;
    if t.first_artificial < t.cols {
        t.load_phase1_costs()?;
        t.optimize()?;
        if t.artificial_sum_positive() {
            return Ok(LpStatus::Infeasible);
        }
        t.pin_artificials();
    }
    t.load_phase2_costs(objective)?;
    t.optimize()?;
    let x: Vec<S> = t.x[..t.structural].to_vec();
    let mut obj = S::zero();
    for (j, &c) in objective.iter().enumerate() {
        if c != 0 {
            obj = obj.add(&S::from_i128(c as i128).mul(&x[j])?)?;
        }
    }
    Ok(LpStatus::Optimal { x, objective: obj })
}

impl<S: LpScalar> Tableau<S> {
    fn build(
        raw_rows: &[(Vec<i128>, Sense, i128)],
        objective: &[i64],
        lower: &[i64],
        upper: &[i64],
    ) -> Result<Self, LpError> {
        let n = lower.len();
        assert_eq!(objective.len(), n);
        let m = raw_rows.len();

        // Normalize senses: every inequality becomes `<=`.
        let mut norm: Vec<(Vec<S>, bool, S)> = Vec::with_capacity(m);
        for (coeffs, sense, rhs) in raw_rows {
            let sign = if *sense == Sense::Ge { -1i128 } else { 1 };
            let row: Vec<S> = coeffs.iter().map(|&c| S::from_i128(sign * c)).collect();
            norm.push((row, *sense == Sense::Eq, S::from_i128(sign * rhs)));
        }

        let mut lower_s: Vec<S> = lower.iter().map(|&b| S::from_i128(b as i128)).collect();
        let mut upper_s: Vec<Option<S>> =
            upper.iter().map(|&b| Some(S::from_i128(b as i128))).collect();
        let mut x: Vec<S> = lower_s.clone();

        // Residual of each row with structurals at their lower bounds.
        let mut residuals: Vec<S> = Vec::with_capacity(m);
        for (row, _, rhs) in &norm {
            let mut acc = rhs.clone();
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.sub(&c.mul(&x[j])?)?;
                }
            }
            residuals.push(acc);
        }

        // Column layout: structurals, then slacks, then artificials. A `<=`
        // row with a nonnegative residual seats its slack in the basis
        // directly; every other row needs an artificial.
        let mut slack_col: Vec<Option<usize>> = vec![None; m];
        let mut next = n;
        for (r, (_, is_eq, _)) in norm.iter().enumerate() {
            if !is_eq {
                slack_col[r] = Some(next);
                next += 1;
            }
        }
        let first_artificial = next;
        let mut artificial_col: Vec<Option<usize>> = vec![None; m];
        for r in 0..m {
            if slack_col[r].is_none() || residuals[r].is_negative() {
                artificial_col[r] = Some(next);
                next += 1;
            }
        }
        let cols = next;

        for _ in n..cols {
            lower_s.push(S::zero());
            upper_s.push(None);
            x.push(S::zero());
        }

        let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = Vec::with_capacity(m);
        let mut state = vec![VarState::AtLower; cols];

        for (r, (row_s, _, _)) in norm.into_iter().enumerate() {
            let mut full = vec![S::zero(); cols];
            full[..n].clone_from_slice(&row_s);
            if let Some(sc) = slack_col[r] {
                full[sc] = S::one();
            }
            let mut residual = residuals[r].clone();
            if let Some(ac) = artificial_col[r] {
                // Negate the row if needed so the artificial's basic value
                // (the residual) starts nonnegative.
                if residual.is_negative() {
                    for c in full.iter_mut() {
                        *c = c.neg();
                    }
                    residual = residual.neg();
                }
                full[ac] = S::one();
                basis.push(ac);
                state[ac] = VarState::Basic(r);
                x[ac] = residual;
            } else {
                let sc = slack_col[r].expect("rows without artificials have slacks");
                basis.push(sc);
                state[sc] = VarState::Basic(r);
                x[sc] = residual;
            }
            rows.push(full);
        }

        Ok(Tableau {
            cols,
            structural: n,
            first_artificial,
            rows,
            lower: lower_s,
            upper: upper_s,
            state,
            basis,
            x,
            costs: vec![S::zero(); cols],
            pivots: 0,
            degenerate_streak: 0,
            bland: false,
        })
    }

    fn load_phase1_costs(&mut self) -> Result<(), LpError> {
        let mut costs = vec![S::zero(); self.cols];
        for j in self.first_artificial..self.cols {
            costs[j] = S::one();
        }
        self.reduce_costs(costs)
    }

    fn load_phase2_costs(&mut self, objective: &[i64]) -> Result<(), LpError> {
        let mut costs = vec![S::zero(); self.cols];
        for (j, &c) in objective.iter().enumerate() {
            costs[j] = S::from_i128(c as i128);
        }
        self.reduce_costs(costs)
    }

    /// Installs `costs` and reduces them against the current basis.
    fn reduce_costs(&mut self, mut costs: Vec<S>) -> Result<(), LpError> {
        for (r, &b) in self.basis.iter().enumerate() {
            if costs[b].is_zero() {
                continue;
            }
            let cb = costs[b].clone();
            for j in 0..self.cols {
                if !self.rows[r][j].is_zero() {
                    costs[j] = costs[j].sub(&cb.mul(&self.rows[r][j])?)?;
                }
            }
        }
        self.costs = costs;
        self.degenerate_streak = 0;
        self.bland = false;
        Ok(())
    }

    fn artificial_sum_positive(&self) -> bool {
        (self.first_artificial..self.cols).any(|j| self.x[j].is_positive())
    }

    fn pin_artificials(&mut self) {
        for j in self.first_artificial..self.cols {
            self.upper[j] = Some(S::zero());
        }
    }

    fn range_is_empty(&self, j: usize) -> bool {
        match &self.upper[j] {
            Some(u) => *u == self.lower[j],
            None => false,
        }
    }

    fn optimize(&mut self) -> Result<(), LpError> {
        loop {
            let Some((enter, increase)) = self.pick_entering() else {
                return Ok(());
            };
            self.step(enter, increase)?;
            self.pivots += 1;
            if self.pivots > PIVOT_LIMIT {
                return Err(LpError::Limit("LP pivot limit exceeded"));
            }
        }
    }

    /// Chooses an improving nonbasic column and its direction of movement.
    fn pick_entering(&self) -> Option<(usize, bool)> {
        let mut best: Option<(usize, bool, S)> = None;
        for j in 0..self.cols {
            let direction = match self.state[j] {
                VarState::Basic(_) => continue,
                VarState::AtLower => {
                    if !self.costs[j].is_negative() {
                        continue;
                    }
                    true
                }
                VarState::AtUpper => {
                    if !self.costs[j].is_positive() {
                        continue;
                    }
                    false
                }
            };
            if self.range_is_empty(j) {
                continue;
            }
            if self.bland {
                return Some((j, direction));
            }
            let magnitude = self.costs[j].abs();
            match &best {
                Some((_, _, m)) if *m >= magnitude => {}
                _ => best = Some((j, direction, magnitude)),
            }
        }
        best.map(|(j, d, _)| (j, d))
    }

    /// Moves `enter` in the improving direction as far as the first cap:
    /// its own opposite bound (a flip) or a basic variable's bound (a pivot).
    fn step(&mut self, enter: usize, increase: bool) -> Result<(), LpError> {
        // (row, leaving-at-upper) of the blocking basic variable, when the
        // tightest cap comes from a row rather than the entering variable's
        // own opposite bound.
        let mut blocking: Option<(usize, bool)> = None;
        let mut delta: Option<S> = self.upper[enter]
            .as_ref()
            .map(|u| u.sub(&self.lower[enter]))
            .transpose()?;

        for r in 0..self.rows.len() {
            let coeff = &self.rows[r][enter];
            if coeff.is_zero() {
                continue;
            }
            let basic = self.basis[r];
            // Rate of change of the basic variable per unit of entering
            // movement: -coeff when increasing, +coeff when decreasing.
            let rate = if increase { coeff.neg() } else { coeff.clone() };
            let (limit, hits_upper) = if rate.is_positive() {
                match &self.upper[basic] {
                    Some(u) => (u.sub(&self.x[basic])?.div(&rate)?, true),
                    None => continue,
                }
            } else {
                let fall = rate.neg();
                (self.x[basic].sub(&self.lower[basic])?.div(&fall)?, false)
            };
            debug_assert!(!limit.is_negative(), "basic variable out of bounds");
            if delta.as_ref().is_none_or(|d| limit < *d) {
                delta = Some(limit);
                blocking = Some((r, hits_upper));
            }
        }

        let Some(delta) = delta else {
            return Err(LpError::Limit("unbounded LP direction"));
        };
        if delta.is_zero() {
            self.degenerate_streak += 1;
            if self.degenerate_streak > DEGENERATE_SWITCH {
                self.bland = true;
            }
        } else {
            self.degenerate_streak = 0;
        }

        // Update basic values and the entering value.
        for r in 0..self.rows.len() {
            let coeff = &self.rows[r][enter];
            if coeff.is_zero() {
                continue;
            }
            let rate = if increase { coeff.neg() } else { coeff.clone() };
            let basic = self.basis[r];
            self.x[basic] = self.x[basic].add(&rate.mul(&delta)?)?;
        }
        self.x[enter] = if increase {
            self.x[enter].add(&delta)?
        } else {
            self.x[enter].sub(&delta)?
        };

        match blocking {
            None => {
                self.state[enter] = match self.state[enter] {
                    VarState::AtLower => VarState::AtUpper,
                    VarState::AtUpper => VarState::AtLower,
                    VarState::Basic(_) => unreachable!("entering variable is nonbasic"),
                };
                Ok(())
            }
            Some((row, at_upper)) => self.pivot(row, enter, at_upper),
        }
    }

    fn pivot(&mut self, row: usize, enter: usize, leaving_at_upper: bool) -> Result<(), LpError> {
        let leaving = self.basis[row];
        // Snap the leaving variable exactly onto its bound.
        self.x[leaving] = if leaving_at_upper {
            self.upper[leaving].clone().expect("finite upper bound")
        } else {
            self.lower[leaving].clone()
        };
        self.state[leaving] = if leaving_at_upper {
            VarState::AtUpper
        } else {
            VarState::AtLower
        };
        self.state[enter] = VarState::Basic(row);
        self.basis[row] = enter;

        let piv = self.rows[row][enter].clone();
        debug_assert!(!piv.is_zero());
        for j in 0..self.cols {
            if !self.rows[row][j].is_zero() {
                self.rows[row][j] = self.rows[row][j].div(&piv)?;
            }
        }

        let pivot_row = self.rows[row].clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][enter].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if !pivot_row[j].is_zero() {
                    self.rows[r][j] = self.rows[r][j].sub(&factor.mul(&pivot_row[j])?)?;
                }
            }
        }
        let factor = self.costs[enter].clone();
        if !factor.is_zero() {
            for j in 0..self.cols {
                if !pivot_row[j].is_zero() {
                    self.costs[j] = self.costs[j].sub(&factor.mul(&pivot_row[j])?)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;

    type R = Ratio<i128>;

    fn rat(n: i128, d: i128) -> R {
        Ratio::new(n, d)
    }

    fn solve(
        rows: &[(Vec<i128>, Sense, i128)],
        objective: &[i64],
        lower: &[i64],
        upper: &[i64],
    ) -> LpStatus<R> {
        solve_lp(rows, objective, lower, upper).expect("LP solve")
    }

    #[test]
    fn pure_box_minimum_sits_at_signed_bounds() {
        let status = solve(&[], &[3, -2], &[-1, -1], &[4, 5]);
        match status {
            LpStatus::Optimal { x, objective } => {
                assert_eq!(x, vec![rat(-1, 1), rat(5, 1)]);
                assert_eq!(objective, rat(-13, 1));
            }
            LpStatus::Infeasible => panic!("box LP is feasible"),
        }
    }

    #[test]
    fn fractional_vertex_is_reached_exactly() {
        // min -x - y s.t. 2x + y <= 3, x + 2y <= 3, 0 <= x,y <= 2:
        // optimum x = y = 1, value -2.
        let rows = vec![(vec![2, 1], Sense::Le, 3), (vec![1, 2], Sense::Le, 3)];
        match solve(&rows, &[-1, -1], &[0, 0], &[2, 2]) {
            LpStatus::Optimal { x, objective } => {
                assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
                assert_eq!(objective, rat(-2, 1));
            }
            LpStatus::Infeasible => panic!("feasible"),
        }
    }

    #[test]
    fn equality_rows_force_fractional_solutions() {
        // x1 + x2 = 1 and x1 - x2 = 0 pin x = (1/2, 1/2).
        let rows = vec![(vec![1, 1], Sense::Eq, 1), (vec![1, -1], Sense::Eq, 0)];
        match solve(&rows, &[1, 0], &[0, 0], &[1, 1]) {
            LpStatus::Optimal { x, objective } => {
                assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
                assert_eq!(objective, rat(1, 2));
            }
            LpStatus::Infeasible => panic!("feasible"),
        }
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let rows = vec![(vec![1], Sense::Ge, 5), (vec![1], Sense::Le, 3)];
        match solve(&rows, &[1], &[0], &[10]) {
            LpStatus::Infeasible => {}
            LpStatus::Optimal { .. } => panic!("rows contradict"),
        }
    }

    #[test]
    fn fixed_variables_still_participate_in_rows() {
        let rows = vec![(vec![1, 1], Sense::Ge, 4)];
        match solve(&rows, &[0, 1], &[3, 0], &[3, 9]) {
            LpStatus::Optimal { x, objective } => {
                assert_eq!(x, vec![rat(3, 1), rat(1, 1)]);
                assert_eq!(objective, rat(1, 1));
            }
            LpStatus::Infeasible => panic!("feasible"),
        }
    }

    #[test]
    fn ge_rows_push_off_the_lower_corner() {
        // Pairwise covering rows over [0, 1]^3 have LP optimum 3/2.
        let rows = vec![
            (vec![1, 1, 0], Sense::Ge, 1),
            (vec![0, 1, 1], Sense::Ge, 1),
            (vec![1, 0, 1], Sense::Ge, 1),
        ];
        match solve(&rows, &[1, 1, 1], &[0, 0, 0], &[1, 1, 1]) {
            LpStatus::Optimal { objective, .. } => assert_eq!(objective, rat(3, 2)),
            LpStatus::Infeasible => panic!("feasible"),
        }
    }
}
