//! Exactness: every coalition constraint is tight at some core point.

use crate::coalition::Coalition;
use crate::error::Result;
use crate::game::{indicator, Game, Orientation};
use crate::lp::{Direction, LpOutcome};
use crate::scalar::{le_tol, NumericMode, Scalar};

use super::balance::{core_program, core_total};

#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport<T: Scalar> {
    pub exact: bool,
    /// For each nonempty proper coalition, a core point making it tight, when
    /// one exists.
    pub witnesses: Vec<(Coalition, Vec<T>)>,
    /// Coalitions whose constraint is never tight, with the best value of
    /// `t(s)` over the core.
    pub failures: Vec<(Coalition, T)>,
    pub mode: NumericMode,
}

/// Errors with [`crate::Error::EmptyCore`] when the game is not balanced.
pub fn check_exact<T: Scalar>(game: &Game<T>) -> Result<ExactReport<T>> {
    let n = game.n();
    let total = core_total(game)?;
    let tol = game.tolerance().clone();
    let direction = match game.orientation() {
        Orientation::Cost => Direction::Minimize,
        Orientation::Resource => Direction::Maximize,
    };
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for s in Coalition::nonempty(n).filter(|&s| s != game.grand()) {
        let lp = core_program(game, &total, direction, indicator(s, n));
        let LpOutcome::Optimal(sol) = lp.solve()? else {
            return Err(crate::Error::EmptyCore);
        };
        let v = game.value(s);
        let tight = match game.orientation() {
            Orientation::Cost => le_tol(&sol.value, v, &tol),
            Orientation::Resource => le_tol(v, &sol.value, &tol),
        };
        if tight {
            witnesses.push((s, sol.primal));
        } else {
            failures.push((s, sol.value));
        }
    }
    Ok(ExactReport {
        exact: failures.is_empty(),
        witnesses,
        failures,
        mode: game.mode(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::Error;

    fn rgame(n: usize, orientation: Orientation, values: &[i64]) -> Game<Rational> {
        Game::new(n, orientation, values.iter().map(|&v| Rational::from_ratio(v, 1)).collect()).unwrap()
    }

    #[test]
    fn supermodular_games_are_exact() {
        let g = rgame(3, Orientation::Cost, &[0, 0, 0, 1, 0, 1, 1, 3]);
        let report = check_exact(&g).unwrap();
        assert!(report.exact);
        assert_eq!(report.witnesses.len(), 6);
        for (s, t) in &report.witnesses {
            assert!(g.core_contains(t).unwrap());
            assert_eq!(s.sum_of(t), *g.value(*s));
        }
    }

    #[test]
    fn slack_singleton_breaks_exactness() {
        // The core is the single point (1, 1, 1); singletons are never tight.
        let g = rgame(3, Orientation::Cost, &[0, 0, 0, 2, 0, 2, 2, 3]);
        let report = check_exact(&g).unwrap();
        assert!(!report.exact);
        assert_eq!(report.failures[0], (Coalition(0b001), Rational::from_ratio(1, 1)));
        assert_eq!(report.witnesses.len(), 3);
    }

    #[test]
    fn empty_core_is_an_error() {
        let g = rgame(3, Orientation::Cost, &[0, 0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(check_exact(&g), Err(Error::EmptyCore));
    }
}
