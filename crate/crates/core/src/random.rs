//! Seeded generators for randomized checks.
//!
//! Every generator takes a [`ChaCha8Rng`], so a run is reproducible from its
//! seed on every platform.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::capacity::{contamination_capacity, tv_capacity, Capacity, FinitePmf};
use crate::coalition::Coalition;
use crate::game::{Game, Orientation};
use crate::info::{ChannelSpec, JointPmf, PowerProfile};
use crate::scalar::{Rational, Scalar};
use crate::sums::{GaussianSpec, IntegerPmf};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the probability simplex (flat Dirichlet).
pub fn simplex_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let weights: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w: f64| w / total).collect()
}

/// Supermodular game with nonnegative integer values.
///
/// Draws a nonnegative dividend `m(t)` for every nonempty coalition and sets
/// `v(s) = Σ_{t ⊆ s} m(t)`. Every second difference
/// `v(s ∪ {i, j}) - v(s ∪ {i}) - v(s ∪ {j}) + v(s)` is then a sum of
/// dividends, hence nonnegative, so the game is supermodular by construction.
pub fn supermodular_game<T: Scalar>(rng: &mut ChaCha8Rng, n: usize, orientation: Orientation) -> Game<T> {
    let dividends: Vec<i64> = Coalition::all(n)
        .map(|t| match t.len() {
            0 => 0,
            1 => rng.gen_range(0..=6),
            _ => rng.gen_range(0..=3),
        })
        .collect();
    Game::from_fn(n, orientation, |s| {
        T::from_ratio(s.subsets().map(|t| dividends[t.bits()]).sum(), 1)
    })
    .expect("dividend sums are valid game values")
}

/// Game with values `k/4`, `k` uniform in `0..=24`; the grand coalition
/// draws from `0..=48` so that both balanced and unbalanced games occur.
pub fn rational_game(rng: &mut ChaCha8Rng, n: usize, orientation: Orientation) -> Game<Rational> {
    let grand = Coalition::grand(n);
    Game::from_fn(n, orientation, |s| {
        let k = if s.is_empty() {
            0
        } else if s == grand {
            rng.gen_range(0..=48)
        } else {
            rng.gen_range(0..=24)
        };
        Rational::from_ratio(k, 4)
    })
    .expect("values are nonnegative")
}

/// Joint pmf of `n` variables with alphabet sizes in `2..=max_alphabet`.
pub fn joint_pmf(rng: &mut ChaCha8Rng, n: usize, max_alphabet: usize) -> JointPmf {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_alphabet.max(2))).collect();
    let cells = sizes.iter().product();
    JointPmf::new(sizes, simplex_point(rng, cells)).expect("simplex points are pmfs")
}

/// Channel with binary inputs and output alphabet in `2..=max_output`.
pub fn binary_input_channel(rng: &mut ChaCha8Rng, n: usize, max_output: usize) -> ChannelSpec {
    let output = rng.gen_range(2..=max_output.max(2));
    let marginals = (0..n).map(|_| simplex_point(rng, 2)).collect();
    let rows = (0..1usize << n).map(|_| simplex_point(rng, output)).collect();
    ChannelSpec::new(marginals, rows, output).expect("rows are pmfs")
}

/// Powers in `(0, 10]` and noise in `[0.1, 5]`.
pub fn power_profile(rng: &mut ChaCha8Rng, n: usize) -> PowerProfile {
    let powers = (0..n).map(|_| 10.0 * (1.0 - rng.gen::<f64>())).collect();
    PowerProfile::new(powers, rng.gen_range(0.1..=5.0)).expect("positive noise")
}

/// Pmf on `{offset, .., offset + len - 1}` with `len` in `1..=max_support`.
pub fn integer_pmf(rng: &mut ChaCha8Rng, max_support: usize) -> IntegerPmf {
    let len = rng.gen_range(1..=max_support.max(1));
    IntegerPmf::new(rng.gen_range(-3..=3), simplex_point(rng, len)).expect("simplex points are pmfs")
}

/// `B Bᵀ + 0.1 I` with standard normal `B`.
pub fn spd_matrix(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let b: DMatrix<f64> = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    &b * b.transpose() + DMatrix::identity(d, d) * 0.1
}

pub fn gaussian_spec(rng: &mut ChaCha8Rng, n: usize, d: usize) -> GaussianSpec {
    let covariances = (0..n).map(|_| spd_matrix(rng, d)).collect();
    GaussianSpec::new(d, covariances).expect("matrices are positive definite")
}

/// Variances in `[0.05, 5]`.
pub fn variances(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.05..=5.0)).collect()
}

pub fn finite_pmf(rng: &mut ChaCha8Rng, k: usize) -> FinitePmf {
    FinitePmf::new(simplex_point(rng, k)).expect("simplex points are pmfs")
}

/// Contamination or total-variation neighbourhood of a random pmf, with
/// parameter in `[0, 0.5)`.
pub fn two_alternating_capacity(rng: &mut ChaCha8Rng, k: usize) -> Capacity {
    let p0 = finite_pmf(rng, k);
    let param = rng.gen_range(0.0..0.5);
    if rng.gen_bool(0.5) {
        contamination_capacity(&p0, param)
    } else {
        tv_capacity(&p0, param)
    }
    .expect("parameter in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let a: Game<Rational> = supermodular_game(&mut rng_from_seed(7), 4, Orientation::Cost);
        let b: Game<Rational> = supermodular_game(&mut rng_from_seed(7), 4, Orientation::Cost);
        assert_eq!(a, b);
        assert_eq!(joint_pmf(&mut rng_from_seed(3), 3, 3), joint_pmf(&mut rng_from_seed(3), 3, 3));
    }

    #[test]
    fn supermodular_by_construction() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let g: Game<Rational> = supermodular_game(&mut rng, 4, Orientation::Cost);
            assert!(g.check_modularity().class.is_supermodular());
        }
    }
}
