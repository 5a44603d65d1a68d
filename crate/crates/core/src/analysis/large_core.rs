//! Large core: every aspiration vector dominates some core point.
//!
//! The aspiration set of a cost game is its vertex hull plus the
//! nonnegative orthant, and the set of aspiration vectors dominating a core
//! point is convex and upward closed, so it suffices to test the vertices.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{indicator, Game, Orientation};
use crate::lp::{Constraint, Direction, LpOutcome, Relation};
use crate::scalar::{NumericMode, Scalar};

use super::balance::{check_balanced, core_program};
use super::polytope::enumerate_vertices;

/// Largest player count accepted by [`check_large_core`].
pub const MAX_LARGE_CORE_PLAYERS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct LargeCoreReport<T: Scalar> {
    pub large: bool,
    pub vertices_checked: usize,
    /// An aspiration vertex with no core point below it.
    pub counterexample: Option<Vec<T>>,
    pub mode: NumericMode,
}

/// Vertices of `{y >= 0 : y(s) >= v(s)}`.
pub fn aspiration_vertices<T: Scalar>(game: &Game<T>) -> Vec<Vec<T>> {
    let n = game.n();
    let mut constraints: Vec<Constraint<T>> = Coalition::nonempty(n)
        .map(|s| Constraint {
            coeffs: indicator(s, n),
            relation: Relation::Ge,
            rhs: game.value(s).clone(),
        })
        .collect();
    constraints.extend((0..n).map(|i| Constraint {
        coeffs: indicator(Coalition::singleton(i), n),
        relation: Relation::Ge,
        rhs: T::zero(),
    }));
    enumerate_vertices(n, &constraints, game.tolerance())
}

/// Cost games on at most [`MAX_LARGE_CORE_PLAYERS`] players.
pub fn check_large_core<T: Scalar>(game: &Game<T>) -> Result<LargeCoreReport<T>> {
    if game.orientation() != Orientation::Cost {
        return Err(Error::WrongOrientation { expected: "cost" });
    }
    let n = game.n();
    if n > MAX_LARGE_CORE_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_LARGE_CORE_PLAYERS,
        });
    }
    let vertices = aspiration_vertices(game);
    let balance = check_balanced(game)?;
    if !balance.balanced {
        return Ok(LargeCoreReport {
            large: false,
            vertices_checked: 0,
            counterexample: vertices.into_iter().next(),
            mode: game.mode(),
        });
    }
    let tol = game.tolerance().clone();
    let mut checked = 0;
    for y in vertices {
        checked += 1;
        let mut lp = core_program(game, &balance.optimum, Direction::Minimize, vec![T::zero(); n]);
        for (i, yi) in y.iter().enumerate() {
            lp.set_bounds(i, Some(T::zero()), Some(yi.clone() + tol.clone()));
        }
        if !matches!(lp.solve()?, LpOutcome::Optimal(_)) {
            return Ok(LargeCoreReport {
                large: false,
                vertices_checked: checked,
                counterexample: Some(y),
                mode: game.mode(),
            });
        }
    }
    Ok(LargeCoreReport {
        large: true,
        vertices_checked: checked,
        counterexample: None,
        mode: game.mode(),
    })
}
