//! Marginal vectors, the Weber set, and the convexity test through them.

use crate::error::{Error, Result};
use crate::game::{Game, Modularity, Order};
use crate::scalar::{NumericMode, Scalar};

/// Largest player count for which all `n!` orders are enumerated.
pub const MAX_WEBER_PLAYERS: usize = 8;

/// Distinct marginal vectors, each paired with the first order producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeberSet<T: Scalar> {
    pub orders: Vec<Order>,
    pub vectors: Vec<Vec<T>>,
}

pub fn weber_set<T: Scalar>(game: &Game<T>) -> Result<WeberSet<T>> {
    let n = game.n();
    if n > MAX_WEBER_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_WEBER_PLAYERS,
        });
    }
    let tol = game.tolerance();
    let mut out: WeberSet<T> = WeberSet {
        orders: Vec::new(),
        vectors: Vec::new(),
    };
    for order in Order::all(n) {
        let m = game.marginal_vector(&order)?;
        let seen = out
            .vectors
            .iter()
            .any(|v| v.iter().zip(&m).all(|(a, b)| (a.clone() - b.clone()).abs() <= *tol));
        if !seen {
            out.orders.push(order);
            out.vectors.push(m);
        }
    }
    Ok(out)
}

/// Core membership that treats negative allocations as outside the core
/// instead of as malformed input.
pub(crate) fn in_core<T: Scalar>(game: &Game<T>, t: &[T]) -> bool {
    game.core_contains(t).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport<T: Scalar> {
    /// Every marginal vector lies in the core.
    pub convex: bool,
    pub modularity: Modularity,
    /// First order whose marginal vector leaves the core.
    pub outside: Option<(Order, Vec<T>)>,
    pub weber_size: usize,
    pub mode: NumericMode,
}

/// Tests whether the Weber set lies inside the core. For cost games this
/// holds exactly for supermodular games, for resource games exactly for
/// submodular ones.
pub fn shapley_ichiishi_check<T: Scalar>(game: &Game<T>) -> Result<ConvexityReport<T>> {
    let weber = weber_set(game)?;
    let outside = weber
        .orders
        .iter()
        .zip(&weber.vectors)
        .find(|(_, m)| !in_core(game, m))
        .map(|(o, m)| (o.clone(), m.clone()));
    Ok(ConvexityReport {
        convex: outside.is_none(),
        modularity: game.check_modularity().class,
        outside,
        weber_size: weber.vectors.len(),
        mode: game.mode(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Orientation;
    use crate::scalar::Rational;

    fn rgame(n: usize, orientation: Orientation, values: &[i64]) -> Game<Rational> {
        Game::new(n, orientation, values.iter().map(|&v| Rational::from_ratio(v, 1)).collect()).unwrap()
    }

    #[test]
    fn additive_game_has_single_marginal_vector() {
        let g = rgame(3, Orientation::Cost, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let w = weber_set(&g).unwrap();
        assert_eq!(w.vectors.len(), 1);
    }

    #[test]
    fn supermodular_cost_game_is_convex() {
        let g = rgame(3, Orientation::Cost, &[0, 0, 0, 1, 0, 1, 1, 3]);
        let report = shapley_ichiishi_check(&g).unwrap();
        assert!(report.convex);
        assert!(report.modularity.is_supermodular());
    }

    #[test]
    fn submodular_cost_game_is_not_convex() {
        let g = rgame(2, Orientation::Cost, &[0, 1, 1, 1]);
        let report = shapley_ichiishi_check(&g).unwrap();
        assert!(!report.convex);
        assert!(report.outside.is_some());
        let resource = g.with_orientation(Orientation::Resource);
        assert!(shapley_ichiishi_check(&resource).unwrap().convex);
    }
}
