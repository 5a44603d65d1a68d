//! Dense two-phase primal simplex with Bland's rule.
//!
//! Generic over [`Scalar`]: with [`Rational`](crate::Rational) every pivot is
//! exact and Bland's rule guarantees termination; with `f64` entries below
//! [`Scalar::pivot_epsilon`] are treated as zero and the run is capped at
//! [`FLOAT_PIVOT_LIMIT`] pivots.
//!
//! Dual sign convention, for the problem as stated by the caller:
//!
//! * minimize: `y_i >= 0` on `>=` rows, `y_i <= 0` on `<=` rows;
//! * maximize: `y_i >= 0` on `<=` rows, `y_i <= 0` on `>=` rows;
//! * equality rows are free.
//!
//! With this convention the optimal value equals `Σ b_i y_i` plus the bound
//! terms reported by [`LpSolution::dual_value`]. For the program
//! `min Σ t_j  s.t.  Σ_{j∈s} t_j >= v(s)` the duals are exactly the weights
//! `α(s)` of the partition program, so one solve yields both certificates.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const FLOAT_PIVOT_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `None` means unbounded in that direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub direction: Direction,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub bounds: Vec<Bounds<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub primal: Vec<T>,
    /// One multiplier per constraint, in constraint order.
    pub dual: Vec<T>,
    pub pivots: usize,
}

impl<T: Scalar> LinearProgram<T> {
    /// New program over `objective.len()` variables, all bounded below by 0.
    pub fn new(direction: Direction, objective: Vec<T>) -> Self {
        let bounds = (0..objective.len())
            .map(|_| Bounds {
                lower: Some(T::zero()),
                upper: None,
            })
            .collect();
        LinearProgram {
            direction,
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn minimize(objective: Vec<T>) -> Self {
        Self::new(Direction::Minimize, objective)
    }

    pub fn maximize(objective: Vec<T>) -> Self {
        Self::new(Direction::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn with_constraint(mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> Self {
        self.add_constraint(coeffs, relation, rhs);
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.bounds[var] = Bounds { lower, upper };
        self
    }

    fn validate(&self) -> Result<()> {
        let m = self.num_vars();
        if self.bounds.len() != m {
            return Err(Error::MalformedProgram(format!(
                "{} bounds for {m} variables",
                self.bounds.len()
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != m {
                return Err(Error::MalformedProgram(format!(
                    "row {k} has {} coefficients, expected {m}",
                    c.coeffs.len()
                )));
            }
        }
        let finite = self.objective.iter().all(Scalar::is_finite)
            && self
                .constraints
                .iter()
                .all(|c| c.rhs.is_finite() && c.coeffs.iter().all(Scalar::is_finite))
            && self.bounds.iter().all(|b| {
                b.lower.as_ref().is_none_or(Scalar::is_finite)
                    && b.upper.as_ref().is_none_or(Scalar::is_finite)
            });
        if !finite {
            return Err(Error::MalformedProgram("non-finite data".into()));
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpOutcome<T>> {
        self.validate()?;
        Simplex::build(self).and_then(|s| s.run(self))
    }
}

impl<T: Scalar> LpSolution<T> {
    /// Reduced costs `c - Aᵀy` in the caller's variables.
    pub fn reduced_costs(&self, lp: &LinearProgram<T>) -> Vec<T> {
        (0..lp.num_vars())
            .map(|j| {
                let ay: T = lp
                    .constraints
                    .iter()
                    .zip(&self.dual)
                    .map(|(c, y)| c.coeffs[j].clone() * y.clone())
                    .sum();
                lp.objective[j].clone() - ay
            })
            .collect()
    }

    /// Objective of the dual program at `self.dual`, or `None` when the duals
    /// are infeasible (wrong signs, or a nonzero reduced cost on a side
    /// without a bound). Differences within `tol` count as zero.
    pub fn dual_value(&self, lp: &LinearProgram<T>, tol: &T) -> Option<T> {
        let minimize = lp.direction == Direction::Minimize;
        for (c, y) in lp.constraints.iter().zip(&self.dual) {
            let wrong_sign = match (c.relation, minimize) {
                (Relation::Eq, _) => false,
                (Relation::Ge, true) | (Relation::Le, false) => *y < -tol.clone(),
                (Relation::Le, true) | (Relation::Ge, false) => *y > *tol,
            };
            if wrong_sign {
                return None;
            }
        }
        let mut value: T = lp
            .constraints
            .iter()
            .zip(&self.dual)
            .map(|(c, y)| c.rhs.clone() * y.clone())
            .sum();
        for (d, b) in self.reduced_costs(lp).into_iter().zip(&lp.bounds) {
            if d.abs() <= *tol {
                continue;
            }
            // Which bound the variable must sit at for this reduced cost.
            let at_lower = (d > T::zero()) == minimize;
            let bound = if at_lower { &b.lower } else { &b.upper };
            match bound {
                Some(x) => value = value + x.clone() * d,
                None => return None,
            }
        }
        Some(value)
    }
}

/// How an original variable is expressed in tableau columns:
/// `x = offset + Σ sign * column`.
struct VarMap<T> {
    offset: T,
    columns: Vec<(usize, bool)>,
}

struct Row<T> {
    coeffs: Vec<T>,
    relation: Relation,
    rhs: T,
    /// Index of the caller's constraint, `None` for bound rows.
    origin: Option<usize>,
    /// `-1` when the row was negated to make its right-hand side nonnegative.
    negated: bool,
}

struct Simplex<T> {
    table: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    artificial: Vec<bool>,
    identity_column: Vec<usize>,
    rows: Vec<Row<T>>,
    vars: Vec<VarMap<T>>,
    structural: usize,
    pivots: usize,
    trivially_infeasible: bool,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Simplex<T> {
    fn build(lp: &LinearProgram<T>) -> Result<Self> {
        let mut vars = Vec::with_capacity(lp.num_vars());
        let mut structural = 0;
        let mut bound_rows: Vec<(usize, T)> = Vec::new();
        let mut trivially_infeasible = false;
        for b in &lp.bounds {
            let map = match (&b.lower, &b.upper) {
                (Some(l), upper) => {
                    let col = structural;
                    structural += 1;
                    if let Some(u) = upper {
                        if u < l {
                            trivially_infeasible = true;
                        }
                        bound_rows.push((col, u.clone() - l.clone()));
                    }
                    VarMap {
                        offset: l.clone(),
                        columns: vec![(col, true)],
                    }
                }
                (None, Some(u)) => {
                    structural += 1;
                    VarMap {
                        offset: u.clone(),
                        columns: vec![(structural - 1, false)],
                    }
                }
                (None, None) => {
                    structural += 2;
                    VarMap {
                        offset: T::zero(),
                        columns: vec![(structural - 2, true), (structural - 1, false)],
                    }
                }
            };
            vars.push(map);
        }

        let mut rows = Vec::with_capacity(lp.constraints.len() + bound_rows.len());
        for (k, c) in lp.constraints.iter().enumerate() {
            let mut coeffs = vec![T::zero(); structural];
            let mut rhs = c.rhs.clone();
            for (a, map) in c.coeffs.iter().zip(&vars) {
                if a.is_zero() {
                    continue;
                }
                rhs = rhs - a.clone() * map.offset.clone();
                for &(col, positive) in &map.columns {
                    coeffs[col] = if positive { a.clone() } else { -a.clone() };
                }
            }
            rows.push(Row {
                coeffs,
                relation: c.relation,
                rhs,
                origin: Some(k),
                negated: false,
            });
        }
        for (col, ub) in bound_rows {
            let mut coeffs = vec![T::zero(); structural];
            coeffs[col] = T::one();
            rows.push(Row {
                coeffs,
                relation: Relation::Le,
                rhs: ub,
                origin: None,
                negated: false,
            });
        }
        for row in &mut rows {
            if row.rhs < T::zero() {
                row.rhs = -row.rhs.clone();
                for a in &mut row.coeffs {
                    *a = -a.clone();
                }
                row.relation = row.relation.flipped();
                row.negated = true;
            }
        }

        let extra: usize = rows
            .iter()
            .map(|r| if r.relation == Relation::Ge { 2 } else { 1 })
            .sum();
        let width = structural + extra;
        let mut table = Vec::with_capacity(rows.len());
        let mut artificial = vec![false; width];
        let mut basis = Vec::with_capacity(rows.len());
        let mut identity_column = Vec::with_capacity(rows.len());
        let mut next = structural;
        for (r, row) in rows.iter().enumerate() {
            let mut line = row.coeffs.clone();
            line.resize(width, T::zero());
            match row.relation {
                Relation::Le => {
                    line[next] = T::one();
                    basis.push(next);
                    next += 1;
                }
                Relation::Ge => {
                    line[next] = -T::one();
                    line[next + 1] = T::one();
                    artificial[next + 1] = true;
                    basis.push(next + 1);
                    next += 2;
                }
                Relation::Eq => {
                    line[next] = T::one();
                    artificial[next] = true;
                    basis.push(next);
                    next += 1;
                }
            }
            identity_column.push(basis[r]);
            table.push(line);
        }
        let rhs = rows.iter().map(|r| r.rhs.clone()).collect();
        Ok(Simplex {
            table,
            rhs,
            basis,
            artificial,
            identity_column,
            rows,
            vars,
            structural,
            pivots: 0,
            trivially_infeasible,
        })
    }

    fn width(&self) -> usize {
        self.artificial.len()
    }

    /// Reduced-cost row and `-z` for cost vector `cost` under the current basis.
    fn price(&self, cost: &[T]) -> (Vec<T>, T) {
        let mut obj = cost.to_vec();
        let mut neg_z = T::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(&self.table[r]) {
                if !a.is_zero() {
                    *o = o.clone() - cb.clone() * a.clone();
                }
            }
            neg_z = neg_z - cb * self.rhs[r].clone();
        }
        (obj, neg_z)
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [T], neg_z: &mut T) {
        let p = self.table[r][c].clone();
        for a in self.table[r].iter_mut() {
            if !a.is_zero() {
                *a = a.clone() / p.clone();
            }
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        let pivot_row = self.table[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for k in 0..self.table.len() {
            if k == r {
                continue;
            }
            let factor = self.table[k][c].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, pr) in self.table[k].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *a = a.clone() - factor.clone() * pr.clone();
                }
            }
            self.table[k][c] = T::zero();
            self.rhs[k] = self.rhs[k].clone() - factor * pivot_rhs.clone();
            if T::KIND == crate::scalar::ModeKind::Float && self.rhs[k] < T::zero() && self.rhs[k] > -T::pivot_epsilon() {
                self.rhs[k] = T::zero();
            }
        }
        let factor = obj[c].clone();
        if !factor.is_zero() {
            for (o, pr) in obj.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *o = o.clone() - factor.clone() * pr.clone();
                }
            }
            obj[c] = T::zero();
            *neg_z = neg_z.clone() - factor * pivot_rhs;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn optimize(&mut self, obj: &mut [T], neg_z: &mut T, allowed: &[bool]) -> Result<Phase> {
        let eps = T::pivot_epsilon();
        let neg_eps = -eps.clone();
        loop {
            if T::KIND == crate::scalar::ModeKind::Float && self.pivots >= FLOAT_PIVOT_LIMIT {
                return Err(Error::IterationLimit);
            }
            // Bland: lowest-index improving column.
            let Some(enter) = (0..self.width()).find(|&j| allowed[j] && obj[j] < neg_eps) else {
                return Ok(Phase::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.table.len() {
                let a = &self.table[r][enter];
                if *a <= eps {
                    continue;
                }
                let ratio = self.rhs[r].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter, obj, neg_z),
                None => return Ok(Phase::Unbounded),
            }
        }
    }

    fn run(mut self, lp: &LinearProgram<T>) -> Result<LpOutcome<T>> {
        if self.trivially_infeasible {
            return Ok(LpOutcome::Infeasible);
        }
        let width = self.width();
        let eps = T::pivot_epsilon();

        if self.artificial.iter().any(|&a| a) {
            let cost: Vec<T> = self
                .artificial
                .iter()
                .map(|&a| if a { T::one() } else { T::zero() })
                .collect();
            let (mut obj, mut neg_z) = self.price(&cost);
            let allowed = vec![true; width];
            self.optimize(&mut obj, &mut neg_z, &allowed)?;
            let infeasibility = -neg_z.clone();
            if infeasibility > T::default_tolerance().max_with(eps.clone()) {
                return Ok(LpOutcome::Infeasible);
            }
            // Drive remaining zero-level artificials out of the basis.
            for r in 0..self.table.len() {
                if !self.artificial[self.basis[r]] {
                    continue;
                }
                if let Some(c) = (0..width)
                    .find(|&j| !self.artificial[j] && self.table[r][j].abs() > eps)
                {
                    self.pivot(r, c, &mut obj, &mut neg_z);
                    if self.rhs[r] < T::zero() {
                        self.rhs[r] = T::zero();
                    }
                }
            }
        }

        let mut cost = vec![T::zero(); width];
        let sign_flip = lp.direction == Direction::Maximize;
        for (c, map) in lp.objective.iter().zip(&self.vars) {
            for &(col, positive) in &map.columns {
                let v = if positive { c.clone() } else { -c.clone() };
                cost[col] = if sign_flip { -v } else { v };
            }
        }
        let (mut obj, mut neg_z) = self.price(&cost);
        let allowed: Vec<bool> = self.artificial.iter().map(|&a| !a).collect();
        if let Phase::Unbounded = self.optimize(&mut obj, &mut neg_z, &allowed)? {
            return Ok(LpOutcome::Unbounded);
        }

        let mut column_values = vec![T::zero(); self.structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                column_values[b] = self.rhs[r].clone();
            }
        }
        let primal: Vec<T> = self
            .vars
            .iter()
            .map(|map| {
                map.columns
                    .iter()
                    .fold(map.offset.clone(), |acc, &(col, positive)| {
                        let v = column_values[col].clone();
                        if positive {
                            acc + v
                        } else {
                            acc - v
                        }
                    })
            })
            .collect();
        let value = lp
            .objective
            .iter()
            .zip(&primal)
            .map(|(c, x)| c.clone() * x.clone())
            .sum();

        let mut dual = vec![T::zero(); lp.constraints.len()];
        for (r, row) in self.rows.iter().enumerate() {
            let Some(k) = row.origin else { continue };
            let mut y = -obj[self.identity_column[r]].clone();
            if row.negated {
                y = -y;
            }
            if sign_flip {
                y = -y;
            }
            dual[k] = y;
        }
        Ok(LpOutcome::Optimal(LpSolution {
            value,
            primal,
            dual,
            pivots: self.pivots,
        }))
    }
}

trait MaxWith {
    fn max_with(self, other: Self) -> Self;
}

impl<T: Scalar> MaxWith for T {
    fn max_with(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn r(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    #[test]
    fn single_variable_upper_row() {
        let lp = LinearProgram::maximize(vec![r(1)]).with_constraint(vec![r(1)], Relation::Le, r(3));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.value, r(3));
        assert_eq!(sol.dual, vec![r(1)]);
        assert_eq!(sol.dual_value(&lp, &Rational::zero()), Some(r(3)));
    }

    #[test]
    fn binding_pair_constraint() {
        let lp = LinearProgram::minimize(vec![r(1), r(1)])
            .with_constraint(vec![r(1), r(0)], Relation::Ge, r(1))
            .with_constraint(vec![r(0), r(1)], Relation::Ge, r(1))
            .with_constraint(vec![r(1), r(1)], Relation::Ge, r(3));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.value, r(3));
        assert_eq!(sol.dual_value(&lp, &Rational::zero()), Some(r(3)));
        assert!(sol.dual.iter().all(|y| *y >= Rational::zero()));
    }

    #[test]
    fn unbounded_and_infeasible() {
        let lp = LinearProgram::maximize(vec![r(1)]).with_constraint(vec![r(1)], Relation::Ge, r(0));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
        let lp = LinearProgram::minimize(vec![r(1)])
            .with_constraint(vec![r(1)], Relation::Le, r(1))
            .with_constraint(vec![r(1)], Relation::Ge, r(2));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn negative_rhs_equality_and_free_variables() {
        // min x - y  s.t.  x + y = -2, x free, -5 <= y <= 1
        let mut lp = LinearProgram::minimize(vec![r(1), r(-1)])
            .with_constraint(vec![r(1), r(1)], Relation::Eq, r(-2));
        lp.set_bounds(0, None, None).set_bounds(1, Some(r(-5)), Some(r(1)));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.primal, vec![r(-3), r(1)]);
        assert_eq!(sol.value, r(-4));
        assert_eq!(sol.dual_value(&lp, &Rational::zero()), Some(r(-4)));
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let lp = LinearProgram::minimize(vec![r(1), r(1)]).with_constraint(vec![r(1)], Relation::Ge, r(1));
        assert!(matches!(lp.solve(), Err(Error::MalformedProgram(_))));
        let lp = LinearProgram::minimize(vec![f64::NAN]);
        assert!(matches!(lp.solve(), Err(Error::MalformedProgram(_))));
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example (Beale); Bland's rule must terminate.
        let q = |a: i64, b: i64| Rational::from_ratio(a, b);
        let lp = LinearProgram::minimize(vec![q(-3, 4), r(150), q(-1, 50), r(6)])
            .with_constraint(vec![q(1, 4), r(-60), q(-1, 25), r(9)], Relation::Le, r(0))
            .with_constraint(vec![q(1, 2), r(-90), q(-1, 50), r(3)], Relation::Le, r(0))
            .with_constraint(vec![r(0), r(0), r(1), r(0)], Relation::Le, r(1));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.value, q(-1, 20));
        assert_eq!(sol.dual_value(&lp, &Rational::zero()), Some(q(-1, 20)));
    }

    #[test]
    fn float_mode_matches_rational_mode() {
        let lp = LinearProgram::minimize(vec![2.0, 3.0, 1.0])
            .with_constraint(vec![1.0, 1.0, 0.0], Relation::Ge, 1.5)
            .with_constraint(vec![0.0, 1.0, 1.0], Relation::Ge, 2.25)
            .with_constraint(vec![1.0, 0.0, 1.0], Relation::Le, 4.0);
        let f = lp.solve().unwrap().optimal().unwrap();
        let exact = LinearProgram {
            direction: lp.direction,
            objective: lp.objective.iter().map(|&x| Rational::from_f64(x).unwrap()).collect(),
            constraints: lp
                .constraints
                .iter()
                .map(|c| Constraint {
                    coeffs: c.coeffs.iter().map(|&x| Rational::from_f64(x).unwrap()).collect(),
                    relation: c.relation,
                    rhs: Rational::from_f64(c.rhs).unwrap(),
                })
                .collect(),
            bounds: lp
                .bounds
                .iter()
                .map(|_| Bounds { lower: Some(Rational::zero()), upper: None })
                .collect(),
        };
        let e = exact.solve().unwrap().optimal().unwrap();
        assert!((f.value - e.value.to_f64()).abs() < 1e-7);
        let dv = f.dual_value(&lp, &1e-9).unwrap();
        assert!((dv - f.value).abs() <= 1e-8 * f.value.abs().max(1.0));
    }
}
