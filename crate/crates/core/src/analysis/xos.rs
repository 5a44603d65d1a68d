//! Max-of-additive (XOS) representations of resource games.
//!
//! A resource game is XOS when `v(t) = max_j Σ_{i∈t} a_j(i)` for additive
//! clauses `a_j` with `a_j(t) <= v(t)` everywhere. One clause per coalition
//! `s` comes from a core point of the subgame on `s`; such a clause exists
//! exactly when that subgame is balanced.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{indicator, Game, Orientation};
use crate::lp::{Direction, LinearProgram, LpOutcome, Relation};
use crate::scalar::{le_tol, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct XosClause<T: Scalar> {
    /// The coalition on which this clause is tight.
    pub coalition: Coalition,
    /// Weights over all players, zero outside `coalition`.
    pub weights: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Xos<T: Scalar> {
    pub n: usize,
    pub clauses: Vec<XosClause<T>>,
}

impl<T: Scalar> Xos<T> {
    /// `max_j Σ_{i∈t} a_j(i)`, or zero for the empty coalition.
    pub fn evaluate(&self, t: Coalition) -> T {
        self.clauses
            .iter()
            .map(|c| t.sum_of(&c.weights))
            .fold(T::zero(), |best, x| if x > best { x } else { best })
    }
}

/// Builds one clause per nonempty coalition. Errors with `NotMonotone` or
/// with `NotBalanced` naming the first coalition whose subgame has an empty
/// core.
pub fn xos_representation<T: Scalar>(game: &Game<T>) -> Result<Xos<T>> {
    if game.orientation() != Orientation::Resource {
        return Err(Error::WrongOrientation { expected: "resource" });
    }
    if let Some((smaller, larger)) = game.monotonicity_violation() {
        return Err(Error::NotMonotone { smaller, larger });
    }
    let n = game.n();
    let tol = game.tolerance().clone();
    let mut clauses = Vec::with_capacity((1 << n) - 1);
    for s in Coalition::nonempty(n) {
        let mut lp = LinearProgram::new(Direction::Maximize, indicator(s, n));
        for u in s.subsets().filter(|u| !u.is_empty()) {
            lp.add_constraint(indicator(u, n), Relation::Le, game.value(u).clone());
        }
        for i in (0..n).filter(|&i| !s.contains(i)) {
            lp.set_bounds(i, Some(T::zero()), Some(T::zero()));
        }
        let LpOutcome::Optimal(sol) = lp.solve()? else {
            return Err(Error::MalformedProgram("clause program has no optimum".into()));
        };
        if !le_tol(game.value(s), &sol.value, &tol) {
            return Err(Error::NotBalanced { coalition: s });
        }
        clauses.push(XosClause {
            coalition: s,
            weights: sol.primal,
        });
    }
    Ok(Xos { n, clauses })
}
