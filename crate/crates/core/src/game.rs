//! Transferable-utility games on at most [`MAX_PLAYERS`] players.
//!
//! A game stores its value function densely, indexed by coalition bitmask.
//! Cost games constrain allocations from below (`t(s) >= v(s)`), resource
//! games from above (`t(s) <= v(s)`); the core is the part of that aspiration
//! set lying on the efficiency hyperplane `t([n]) = v([n])`.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::scalar::{eq_tol, le_tol, ModeKind, NumericMode, Rational, Scalar};

pub const MAX_PLAYERS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cost,
    Resource,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Cost => "cost",
            Orientation::Resource => "resource",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Game<T: Scalar> {
    n: usize,
    orientation: Orientation,
    values: Vec<T>,
    tolerance: T,
}

impl<T: Scalar> Game<T> {
    /// Validates and builds a game. `values[mask]` is the value of the
    /// coalition with bitmask `mask`.
    pub fn new(n: usize, orientation: Orientation, values: Vec<T>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::TooManyPlayers { n, max: MAX_PLAYERS });
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::WrongLength {
                expected,
                found: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(Error::NonzeroEmptySet);
        }
        if let Some(mask) = values
            .iter()
            .position(|v| !v.is_finite() || *v < T::zero())
        {
            return Err(Error::NegativeValue {
                coalition: Coalition(mask as u32),
            });
        }
        Ok(Game {
            n,
            orientation,
            values,
            tolerance: T::default_tolerance(),
        })
    }

    pub fn from_fn(
        n: usize,
        orientation: Orientation,
        f: impl FnMut(Coalition) -> T,
    ) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::TooManyPlayers { n, max: MAX_PLAYERS });
        }
        Self::new(n, orientation, Coalition::all(n).map(f).collect())
    }

    /// Replaces the comparison tolerance (ignored semantics for rationals are
    /// the caller's choice; pass zero for exact verdicts).
    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn tolerance(&self) -> &T {
        &self.tolerance
    }

    pub fn mode(&self) -> NumericMode {
        NumericMode {
            kind: T::KIND,
            tolerance: match T::KIND {
                ModeKind::Rational => 0.0,
                ModeKind::Float => self.tolerance.to_f64(),
            },
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, s: Coalition) -> &T {
        &self.values[s.bits()]
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn grand_value(&self) -> &T {
        self.value(self.grand())
    }

    /// Converts the value function to another numeric backend.
    pub fn convert<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Game<U> {
        Game {
            n: self.n,
            orientation: self.orientation,
            values: self.values.iter().map(f).collect(),
            tolerance: U::default_tolerance(),
        }
    }

    pub fn to_float(&self) -> Game<f64> {
        let mut g = self.convert(|v| v.to_f64());
        if T::KIND == ModeKind::Float {
            g.tolerance = self.tolerance.to_f64();
        }
        g
    }

    /// Restriction to the players of `s`, relabelled in increasing order.
    pub fn subgame(&self, s: Coalition) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !s.is_subset_of(self.grand()) {
            return Err(Error::SubsetOutOfRange {
                coalition: s,
                n: self.n,
            });
        }
        let members: Vec<usize> = s.players().collect();
        let values = Coalition::all(members.len())
            .map(|local| {
                let original = Coalition::from_players(local.players().map(|j| members[j]));
                self.value(original).clone()
            })
            .collect();
        Ok(Game {
            n: members.len(),
            orientation: self.orientation,
            values,
            tolerance: self.tolerance.clone(),
        })
    }

    /// Relabels players: player `i` of the result is player `perm[i]` of `self`.
    pub fn permuted(&self, perm: &Order) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidOrder(perm.as_slice().to_vec()));
        }
        let values = Coalition::all(self.n)
            .map(|s| {
                let original = Coalition::from_players(s.players().map(|i| perm.0[i]));
                self.value(original).clone()
            })
            .collect();
        Ok(Game {
            values,
            ..self.clone()
        })
    }

    /// Pairwise-increment test of supermodularity and submodularity.
    ///
    /// For every `s` and distinct `i, j` outside it, the second difference
    /// `v(s+i+j) - v(s+i) - v(s+j) + v(s)` must be nonnegative
    /// (supermodular) or nonpositive (submodular). Differences within the
    /// game tolerance count as zero.
    pub fn check_modularity(&self) -> ModularityReport {
        let mut super_violation = None;
        let mut sub_violation = None;
        let tol = &self.tolerance;
        let neg_tol = -tol.clone();
        'outer: for s in Coalition::all(self.n) {
            for i in 0..self.n {
                if s.contains(i) {
                    continue;
                }
                for j in i + 1..self.n {
                    if s.contains(j) {
                        continue;
                    }
                    let delta = self.value(s.with(i).with(j)).clone() - self.value(s.with(i)).clone()
                        - self.value(s.with(j)).clone()
                        + self.value(s).clone();
                    if super_violation.is_none() && delta < neg_tol {
                        super_violation = Some(Violation { coalition: s, i, j });
                    }
                    if sub_violation.is_none() && delta > *tol {
                        sub_violation = Some(Violation { coalition: s, i, j });
                    }
                    if super_violation.is_some() && sub_violation.is_some() {
                        break 'outer;
                    }
                }
            }
        }
        let class = match (super_violation.is_none(), sub_violation.is_none()) {
            (true, true) => Modularity::Additive,
            (true, false) => Modularity::Supermodular,
            (false, true) => Modularity::Submodular,
            (false, false) => Modularity::Neither,
        };
        ModularityReport {
            class,
            supermodular_violation: super_violation,
            submodular_violation: sub_violation,
            mode: self.mode(),
        }
    }

    /// Convex in the sense matching the orientation: supermodular for cost
    /// games, submodular for resource games.
    pub fn is_convex_for_orientation(&self) -> bool {
        let class = self.check_modularity().class;
        match self.orientation {
            Orientation::Cost => class.is_supermodular(),
            Orientation::Resource => class.is_submodular(),
        }
    }

    /// Incremental values along `order`. Entries sum to `v([n])` exactly.
    pub fn marginal_vector(&self, order: &Order) -> Result<Vec<T>> {
        if order.len() != self.n {
            return Err(Error::InvalidOrder(order.as_slice().to_vec()));
        }
        let mut out = vec![T::zero(); self.n];
        let mut prefix = Coalition::EMPTY;
        for &player in order.as_slice() {
            let next = prefix.with(player);
            out[player] = self.value(next).clone() - self.value(prefix).clone();
            prefix = next;
        }
        Ok(out)
    }

    /// Shapley value by direct subset summation.
    pub fn shapley_value(&self) -> Vec<T> {
        let weights: Vec<T> = shapley_weights(self.n)
            .iter()
            .map(T::from_rational)
            .collect();
        let mut phi = vec![T::zero(); self.n];
        for s in Coalition::nonempty(self.n) {
            let w = &weights[s.len()];
            for i in s.players() {
                let gain = self.value(s).clone() - self.value(s.without(i)).clone();
                phi[i] = phi[i].clone() + w.clone() * gain;
            }
        }
        phi
    }

    fn check_allocation(&self, t: &[T]) -> Result<()> {
        if t.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: t.len(),
            });
        }
        if let Some(index) = t.iter().position(|x| !x.is_finite() || *x < T::zero()) {
            return Err(Error::NegativeAllocation { index });
        }
        Ok(())
    }

    /// First coalition whose constraint `t` violates, if any.
    pub fn aspiration_violation(&self, t: &[T]) -> Result<Option<Coalition>> {
        self.check_allocation(t)?;
        let sums = subset_sums(t);
        let tol = &self.tolerance;
        let violated = Coalition::nonempty(self.n).find(|&s| {
            let (lhs, v) = (&sums[s.bits()], self.value(s));
            match self.orientation {
                Orientation::Cost => !le_tol(v, lhs, tol),
                Orientation::Resource => !le_tol(lhs, v, tol),
            }
        });
        Ok(violated)
    }

    pub fn aspiration_contains(&self, t: &[T]) -> Result<bool> {
        Ok(self.aspiration_violation(t)?.is_none())
    }

    pub fn core_contains(&self, t: &[T]) -> Result<bool> {
        if !self.aspiration_contains(t)? {
            return Ok(false);
        }
        let total: T = t.iter().cloned().sum();
        Ok(eq_tol(&total, self.grand_value(), &self.tolerance))
    }

    /// First pair `s ⊂ t` with `v(s) > v(t)`.
    pub fn monotonicity_violation(&self) -> Option<(Coalition, Coalition)> {
        for s in Coalition::all(self.n) {
            for i in 0..self.n {
                if !s.contains(i) && !le_tol(self.value(s), self.value(s.with(i)), &self.tolerance) {
                    return Some((s, s.with(i)));
                }
            }
        }
        None
    }

    /// Conjugate game `v*(s) = v([n]) - v([n] \ s)` with the opposite
    /// orientation. Both games have the same core.
    pub fn conjugate(&self) -> Result<Self> {
        let total = self.grand_value().clone();
        let values = Coalition::all(self.n)
            .map(|s| total.clone() - self.value(s.complement(self.n)).clone())
            .collect();
        let orientation = match self.orientation {
            Orientation::Cost => Orientation::Resource,
            Orientation::Resource => Orientation::Cost,
        };
        Game::new(self.n, orientation, values).map(|g| g.with_tolerance(self.tolerance.clone()))
    }

    /// `Some(c)` when `v(s) = Σ_{i∈s} c_i` for every `s`.
    pub fn additive_weights(&self) -> Option<Vec<T>> {
        let c: Vec<T> = (0..self.n)
            .map(|i| self.value(Coalition::singleton(i)).clone())
            .collect();
        let sums = subset_sums(&c);
        Coalition::all(self.n)
            .all(|s| eq_tol(&sums[s.bits()], self.value(s), &self.tolerance))
            .then_some(c)
    }
}

impl<T: Scalar> Add for &Game<T> {
    type Output = Result<Game<T>>;

    fn add(self, rhs: &Game<T>) -> Result<Game<T>> {
        if self.n != rhs.n {
            return Err(Error::WrongLength {
                expected: self.values.len(),
                found: rhs.values.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Game::new(self.n, self.orientation, values).map(|g| g.with_tolerance(self.tolerance.clone()))
    }
}

impl Game<f64> {
    /// Rounds tiny negative values (from floating cancellation) up to zero
    /// and forces `v(∅) = 0`, then validates.
    pub fn from_float_values(n: usize, orientation: Orientation, mut values: Vec<f64>) -> Result<Self> {
        if let Some(first) = values.first_mut() {
            *first = 0.0;
        }
        for v in &mut values {
            if *v < 0.0 && *v > -1e-12 {
                *v = 0.0;
            }
        }
        Self::new(n, orientation, values)
    }
}

/// Indicator vector of `s` over `n` players.
pub fn indicator<T: Scalar>(s: Coalition, n: usize) -> Vec<T> {
    (0..n)
        .map(|i| if s.contains(i) { T::one() } else { T::zero() })
        .collect()
}

/// `sums[mask] = Σ_{i ∈ mask} t_i` for every mask.
pub fn subset_sums<T: Scalar>(t: &[T]) -> Vec<T> {
    let n = t.len();
    let mut sums = vec![T::zero(); 1 << n];
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)].clone() + t[low].clone();
    }
    sums
}

/// `(k-1)!(n-k)!/n!` for `k = 0..=n` (entry 0 unused).
fn shapley_weights(n: usize) -> Vec<Rational> {
    let fact = |k: usize| -> BigInt { (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) };
    let total = fact(n);
    (0..=n)
        .map(|k| {
            if k == 0 {
                Rational::zero()
            } else {
                BigRational::new(fact(k - 1) * fact(n - k), total.clone())
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modularity {
    Additive,
    Supermodular,
    Submodular,
    Neither,
}

impl Modularity {
    pub fn is_supermodular(self) -> bool {
        matches!(self, Modularity::Additive | Modularity::Supermodular)
    }

    pub fn is_submodular(self) -> bool {
        matches!(self, Modularity::Additive | Modularity::Submodular)
    }
}

/// Triple `(s, i, j)` at which a second difference has the wrong sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub coalition: Coalition,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, i={}, j={})", self.coalition, self.i + 1, self.j + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularityReport {
    pub class: Modularity,
    pub supermodular_violation: Option<Violation>,
    pub submodular_violation: Option<Violation>,
    pub mode: NumericMode,
}

/// A permutation of the zero-based player indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Order(Vec<usize>);

impl Order {
    pub fn new(players: Vec<usize>) -> Result<Self> {
        let n = players.len();
        let mut seen = vec![false; n];
        for &p in &players {
            if p >= n || seen[p] {
                return Err(Error::InvalidOrder(players));
            }
            seen[p] = true;
        }
        Ok(Order(players))
    }

    pub fn identity(n: usize) -> Self {
        Order((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `n!` orders, lexicographically.
    pub fn all(n: usize) -> Vec<Order> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Order>) {
            if current.len() == n {
                out.push(Order(current.clone()));
                return;
            }
            for p in 0..n {
                if !used[p] {
                    used[p] = true;
                    current.push(p);
                    rec(n, current, used, out);
                    current.pop();
                    used[p] = false;
                }
            }
        }
        rec(n, &mut current, &mut used, &mut out);
        out
    }
}

/// Weighted collection of distinct nonempty coalitions.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPartition<T: Scalar> {
    pub sets: Vec<Coalition>,
    pub weights: Vec<T>,
}

impl<T: Scalar> FractionalPartition<T> {
    pub fn new(sets: Vec<Coalition>, weights: Vec<T>) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(Error::WrongLength {
                expected: sets.len(),
                found: weights.len(),
            });
        }
        if sets.iter().any(|s| s.is_empty()) {
            return Err(Error::EmptySetInCollection);
        }
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidPartition);
        }
        let mut sorted = sets.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != sets.len() {
            return Err(Error::InvalidPartition);
        }
        Ok(FractionalPartition { sets, weights })
    }

    /// Same weight on every set.
    pub fn uniform(sets: Vec<Coalition>, weight: T) -> Result<Self> {
        let weights = vec![weight; sets.len()];
        Self::new(sets, weights)
    }

    /// Number of sets containing player `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.sets.iter().filter(|s| s.contains(i)).count()
    }

    /// Largest degree over the first `n` players.
    pub fn max_degree(&self, n: usize) -> usize {
        (0..n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Per-player weight sums.
    pub fn coverage(&self, n: usize) -> Vec<T> {
        (0..n)
            .map(|i| {
                self.sets
                    .iter()
                    .zip(&self.weights)
                    .filter(|(s, _)| s.contains(i))
                    .map(|(_, w)| w.clone())
                    .sum()
            })
            .collect()
    }

    /// True iff every player's weight sum is 1 (within `tol`).
    pub fn is_fractional_partition(&self, n: usize, tol: &T) -> Result<bool> {
        if self.sets.iter().any(|s| s.is_empty()) {
            return Err(Error::EmptySetInCollection);
        }
        if self.sets.iter().any(|s| !s.is_subset_of(Coalition::grand(n))) {
            return Ok(false);
        }
        Ok(self.coverage(n).iter().all(|c| eq_tol(c, &T::one(), tol)))
    }

    /// `Σ α(s) v(s)`.
    pub fn weighted_value(&self, game: &Game<T>) -> T {
        self.sets
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| w.clone() * game.value(*s).clone())
            .sum()
    }
}
