//! Balancedness and core points.
//!
//! For a cost game the aspiration program is
//! `min Σ t_i  s.t.  t(s) >= v(s) for every nonempty s, t >= 0`
//! and the partition program is
//! `max Σ α(s) v(s)  s.t.  Σ_{s∋i} α(s) = 1, α >= 0`.
//! Both have the same optimum `d*`, and the core is nonempty exactly when
//! `d* <= v([n])`. Resource games mirror both programs (max/`<=` and
//! min/`=`), with nonemptiness exactly when `d* >= v([n])`.

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{indicator, FractionalPartition, Game, Orientation};
use crate::lp::{Direction, LinearProgram, LpOutcome, Relation};
use crate::scalar::{le_tol, NumericMode, Scalar};

/// Evidence attached to a balancedness verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum BalanceCertificate<T: Scalar> {
    /// A core element.
    CorePoint(Vec<T>),
    /// A fractional partition `α` whose weighted value lies on the wrong side
    /// of `v([n])`.
    Partition(FractionalPartition<T>),
    /// A fractional cover (every player covered with weight at least 1) whose
    /// weighted value is below `v([n])`. Only produced for resource games
    /// that are not monotone, where no exact partition witnesses emptiness.
    Cover(FractionalPartition<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport<T: Scalar> {
    pub balanced: bool,
    /// Optimum of the aspiration program.
    pub optimum: T,
    pub certificate: BalanceCertificate<T>,
    pub mode: NumericMode,
}

fn coalition_rows(n: usize) -> impl Iterator<Item = Coalition> {
    Coalition::nonempty(n)
}

/// The aspiration program over the players' shares (one row per nonempty
/// coalition, in bitmask order).
pub fn aspiration_program<T: Scalar>(game: &Game<T>) -> LinearProgram<T> {
    let n = game.n();
    let (direction, relation) = match game.orientation() {
        Orientation::Cost => (Direction::Minimize, Relation::Ge),
        Orientation::Resource => (Direction::Maximize, Relation::Le),
    };
    let mut lp = LinearProgram::new(direction, vec![T::one(); n]);
    for s in coalition_rows(n) {
        lp.add_constraint(indicator(s, n), relation, game.value(s).clone());
    }
    lp
}

/// The partition program over weights `α(s)` (one variable per nonempty
/// coalition, in bitmask order; one equality row per player).
pub fn partition_program<T: Scalar>(game: &Game<T>) -> LinearProgram<T> {
    let n = game.n();
    let sets: Vec<Coalition> = coalition_rows(n).collect();
    let direction = match game.orientation() {
        Orientation::Cost => Direction::Maximize,
        Orientation::Resource => Direction::Minimize,
    };
    let objective = sets.iter().map(|&s| game.value(s).clone()).collect();
    let mut lp = LinearProgram::new(direction, objective);
    for i in 0..n {
        let row = sets
            .iter()
            .map(|s| if s.contains(i) { T::one() } else { T::zero() })
            .collect();
        lp.add_constraint(row, Relation::Eq, T::one());
    }
    lp
}

fn weights_to_partition<T: Scalar>(n: usize, weights: &[T]) -> Result<FractionalPartition<T>> {
    let (sets, weights): (Vec<_>, Vec<_>) = coalition_rows(n)
        .zip(weights)
        .filter(|(_, w)| **w > T::zero())
        .map(|(s, w)| (s, w.clone()))
        .unzip();
    FractionalPartition::new(sets, weights)
}

fn expect_optimal<T: Scalar>(outcome: LpOutcome<T>) -> Result<crate::lp::LpSolution<T>> {
    match outcome {
        LpOutcome::Optimal(sol) => Ok(sol),
        LpOutcome::Infeasible => Err(Error::MalformedProgram("program unexpectedly infeasible".into())),
        LpOutcome::Unbounded => Err(Error::MalformedProgram("program unexpectedly unbounded".into())),
    }
}

/// Decides whether the core is nonempty, with a core point or a violating
/// weight system as evidence.
pub fn check_balanced<T: Scalar>(game: &Game<T>) -> Result<BalanceReport<T>> {
    let n = game.n();
    let tol = game.tolerance().clone();
    let grand = game.grand_value().clone();
    let aspiration = aspiration_program(game);
    let sol = expect_optimal(aspiration.solve()?)?;
    let d = sol.value.clone();
    let balanced = match game.orientation() {
        Orientation::Cost => le_tol(&d, &grand, &tol),
        Orientation::Resource => le_tol(&grand, &d, &tol),
    };
    let certificate = if balanced {
        BalanceCertificate::CorePoint(sol.primal.clone())
    } else {
        let partition = expect_optimal(partition_program(game).solve()?)?;
        let witnesses = match game.orientation() {
            Orientation::Cost => true,
            Orientation::Resource => !le_tol(&grand, &partition.value, &tol),
        };
        if witnesses {
            BalanceCertificate::Partition(weights_to_partition(n, &partition.primal)?)
        } else {
            BalanceCertificate::Cover(weights_to_partition(n, &sol.dual)?)
        }
    };
    Ok(BalanceReport {
        balanced,
        optimum: d,
        certificate,
        mode: game.mode(),
    })
}

/// Program over the core with efficiency total `total`.
pub(crate) fn core_program<T: Scalar>(
    game: &Game<T>,
    total: &T,
    direction: Direction,
    objective: Vec<T>,
) -> LinearProgram<T> {
    let n = game.n();
    let relation = match game.orientation() {
        Orientation::Cost => Relation::Ge,
        Orientation::Resource => Relation::Le,
    };
    let mut lp = LinearProgram::new(direction, objective);
    for s in coalition_rows(n).filter(|&s| s != game.grand()) {
        lp.add_constraint(indicator(s, n), relation, game.value(s).clone());
    }
    lp.add_constraint(vec![T::one(); n], Relation::Eq, total.clone());
    lp
}

/// Efficiency total used when optimising over the core: `v([n])` in exact
/// arithmetic, or the aspiration optimum when floating rounding puts it a
/// hair past `v([n])`.
pub(crate) fn core_total<T: Scalar>(game: &Game<T>) -> Result<T> {
    let report = check_balanced(game)?;
    if !report.balanced {
        return Err(Error::EmptyCore);
    }
    Ok(report.optimum)
}

/// A core element. With an objective, one maximising `Σ c_i t_i` over the
/// core; without, the point found by the balancedness check.
pub fn find_core_point<T: Scalar>(game: &Game<T>, objective: Option<&[T]>) -> Result<Vec<T>> {
    let report = check_balanced(game)?;
    if !report.balanced {
        return Err(Error::EmptyCore);
    }
    let Some(c) = objective else {
        let BalanceCertificate::CorePoint(t) = report.certificate else {
            unreachable!("balanced report carries a core point")
        };
        return Ok(t);
    };
    if c.len() != game.n() {
        return Err(Error::LengthMismatch {
            expected: game.n(),
            found: c.len(),
        });
    }
    let lp = core_program(game, &report.optimum, Direction::Maximize, c.to_vec());
    match lp.solve()? {
        LpOutcome::Optimal(sol) => Ok(sol.primal),
        _ => Err(Error::EmptyCore),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn r(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    fn rgame(n: usize, orientation: Orientation, values: &[i64]) -> Game<Rational> {
        Game::new(n, orientation, values.iter().map(|&v| r(v, 1)).collect()).unwrap()
    }

    #[test]
    fn symmetric_three_player_game_is_not_balanced() {
        let g = rgame(3, Orientation::Cost, &[0, 0, 0, 1, 0, 1, 1, 1]);
        let report = check_balanced(&g).unwrap();
        assert!(!report.balanced);
        assert_eq!(report.optimum, r(3, 2));
        let BalanceCertificate::Partition(alpha) = report.certificate else {
            panic!("expected partition certificate")
        };
        assert!(alpha.is_fractional_partition(3, &Rational::zero()).unwrap());
        assert_eq!(alpha.weighted_value(&g), r(3, 2));
    }

    #[test]
    fn supermodular_two_player_game_has_core_point() {
        let g = rgame(2, Orientation::Cost, &[0, 1, 1, 3]);
        let report = check_balanced(&g).unwrap();
        assert!(report.balanced);
        let BalanceCertificate::CorePoint(t) = report.certificate else {
            panic!("expected core point")
        };
        assert!(g.core_contains(&t).unwrap());
    }

    #[test]
    fn primal_and_partition_optima_agree() {
        let g = rgame(3, Orientation::Cost, &[0, 2, 1, 4, 3, 5, 4, 6]);
        let d = aspiration_program(&g).solve().unwrap().optimal().unwrap().value;
        let p = partition_program(&g).solve().unwrap().optimal().unwrap().value;
        assert_eq!(d, p);
    }

    #[test]
    fn resource_gmac_is_balanced() {
        let c = |x: f64| 0.5 * (1.0 + x).log2();
        let g = Game::new(2, Orientation::Resource, vec![0.0, c(3.0), c(3.0), c(6.0)]).unwrap();
        let t = find_core_point(&g, None).unwrap();
        assert!(g.core_contains(&t).unwrap());
    }

    #[test]
    fn superadditive_resource_game_is_not_balanced() {
        let g = rgame(2, Orientation::Resource, &[0, 1, 1, 3]);
        let report = check_balanced(&g).unwrap();
        assert!(!report.balanced);
        let BalanceCertificate::Partition(alpha) = report.certificate else {
            panic!("expected partition certificate")
        };
        assert!(alpha.weighted_value(&g) < r(3, 1));
    }

    #[test]
    fn non_monotone_resource_game_gets_cover_certificate() {
        // (-1, 2, 2) satisfies every constraint, so the exact-partition
        // optimum reaches v([3]) = 3, yet no nonnegative allocation does.
        let g = rgame(3, Orientation::Resource, &[0, 5, 5, 1, 5, 1, 10, 3]);
        let report = check_balanced(&g).unwrap();
        assert!(!report.balanced);
        match report.certificate {
            BalanceCertificate::Cover(beta) => {
                let cover = beta.coverage(3);
                assert!(cover.iter().all(|c| *c >= r(1, 1)));
                assert!(beta.weighted_value(&g) < r(3, 1));
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn objective_selects_extreme_core_point() {
        let g = rgame(2, Orientation::Cost, &[0, 1, 1, 3]);
        let t = find_core_point(&g, Some(&[r(1, 1), r(0, 1)])).unwrap();
        assert_eq!(t, vec![r(2, 1), r(1, 1)]);
        let empty = rgame(3, Orientation::Cost, &[0, 0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(find_core_point(&empty, None), Err(Error::EmptyCore));
    }
}
