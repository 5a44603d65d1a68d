//! Allocation procedures: fitting a core point under a ceiling, and
//! building a single allocation that works for every prefix of a family.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Game, Orientation};
use crate::lp::{Direction, LpOutcome};
use crate::scalar::{le_tol, Scalar};

use super::balance::{core_program, core_total};

#[derive(Debug, Clone, PartialEq)]
pub enum ToleranceOutcome<T: Scalar> {
    /// A core point `R <= T`.
    Feasible(Vec<T>),
    /// No core point lies below the ceiling. When the ceiling itself fails a
    /// coalition constraint `T(s) >= v(s)`, that coalition is reported.
    Infeasible { violated: Option<Coalition> },
}

/// Finds a core point of a cost game that is componentwise at most `ceiling`.
pub fn tolerance_allocation<T: Scalar>(game: &Game<T>, ceiling: &[T]) -> Result<ToleranceOutcome<T>> {
    if game.orientation() != Orientation::Cost {
        return Err(Error::WrongOrientation { expected: "cost" });
    }
    let n = game.n();
    let violated = game.aspiration_violation(ceiling)?;
    if violated.is_some() {
        return Ok(ToleranceOutcome::Infeasible { violated });
    }
    let total = core_total(game)?;
    let tol = game.tolerance().clone();
    let mut lp = core_program(game, &total, Direction::Minimize, vec![T::zero(); n]);
    for (i, ti) in ceiling.iter().enumerate() {
        lp.set_bounds(i, Some(T::zero()), Some(ti.clone() + tol.clone()));
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal(sol) => ToleranceOutcome::Feasible(sol.primal),
        _ => ToleranceOutcome::Infeasible { violated: None },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrefixAllocation<T: Scalar> {
    /// `R_k = G_k([k]) - G_{k-1}([k-1])`.
    pub allocation: Vec<T>,
    /// Pairs `(k, s)` where the first `k` entries fail the constraint of
    /// `s ⊆ [k]` in `G_k` (one-based `k`).
    pub violations: Vec<(usize, Coalition)>,
}

impl<T: Scalar> PrefixAllocation<T> {
    pub fn is_verified(&self) -> bool {
        self.violations.is_empty()
    }

    /// The allocation, or `VerificationFailed` naming the first violation.
    pub fn into_verified(self) -> Result<Vec<T>> {
        match self.violations.first() {
            None => Ok(self.allocation),
            Some(&(k, coalition)) => Err(Error::VerificationFailed { k, coalition }),
        }
    }
}

/// `family[k - 1]` must be a game on `k` players; all share one orientation.
pub fn prefix_robust_allocation<T: Scalar>(family: &[Game<T>]) -> Result<PrefixAllocation<T>> {
    let Some(first) = family.first() else {
        return Err(Error::EmptyFamily);
    };
    for (k, g) in family.iter().enumerate() {
        if g.n() != k + 1 {
            return Err(Error::WrongLength {
                expected: k + 1,
                found: g.n(),
            });
        }
        if g.orientation() != first.orientation() {
            return Err(Error::WrongOrientation {
                expected: first.orientation().name(),
            });
        }
    }
    let mut allocation = Vec::with_capacity(family.len());
    let mut previous = T::zero();
    for g in family {
        let grand = g.grand_value().clone();
        allocation.push(grand.clone() - previous);
        previous = grand;
    }
    let mut violations = Vec::new();
    for (idx, g) in family.iter().enumerate() {
        let k = idx + 1;
        let prefix = &allocation[..k];
        let tol = g.tolerance();
        for s in Coalition::nonempty(k) {
            let lhs = s.sum_of(prefix);
            let ok = match g.orientation() {
                Orientation::Cost => le_tol(g.value(s), &lhs, tol),
                Orientation::Resource => le_tol(&lhs, g.value(s), tol),
            };
            if !ok {
                violations.push((k, s));
            }
        }
    }
    Ok(PrefixAllocation {
        allocation,
        violations,
    })
}
