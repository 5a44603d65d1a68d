//! Entropy of sums: discrete entropy of integer-valued sums, Gaussian
//! entropy power, fractional entropy-power inequalities, and the shifted
//! differential-entropy game.
//!
//! Discrete entropies are in bits and differential entropies in nats.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{FractionalPartition, Game, Orientation};
use crate::info::pmf::{entropy_bits, validate_probs};

/// Largest support of any convolution computed by [`entropy_sum_game`].
pub const SUPPORT_LIMIT: usize = 10_000;
/// Largest number of sources accepted by [`entropy_sum_game`].
pub const MAX_SUM_SOURCES: usize = 10;
/// Symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Relative margin below which a fractional EPI check reports equality.
pub const EPI_EQUALITY_TOLERANCE: f64 = 1e-6;

/// Pmf on consecutive integers `offset, offset + 1, ..`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIntegerPmf", into = "RawIntegerPmf")]
pub struct IntegerPmf {
    offset: i64,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawIntegerPmf {
    offset: i64,
    probs: Vec<f64>,
}

impl TryFrom<RawIntegerPmf> for IntegerPmf {
    type Error = Error;

    fn try_from(raw: RawIntegerPmf) -> Result<Self> {
        IntegerPmf::new(raw.offset, raw.probs)
    }
}

impl From<IntegerPmf> for RawIntegerPmf {
    fn from(p: IntegerPmf) -> Self {
        RawIntegerPmf {
            offset: p.offset,
            probs: p.probs,
        }
    }
}

impl IntegerPmf {
    pub fn new(offset: i64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::UnnormalizedInput);
        }
        validate_probs(&probs)?;
        Ok(IntegerPmf { offset, probs })
    }

    pub fn point_mass(at: i64) -> Self {
        IntegerPmf {
            offset: at,
            probs: vec![1.0],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(self.probs.iter().copied())
    }

    /// Pmf of the sum of independent variables, by direct summation.
    pub fn convolve(&self, other: &IntegerPmf) -> Result<IntegerPmf> {
        let len = self.probs.len() + other.probs.len() - 1;
        if len > SUPPORT_LIMIT {
            return Err(Error::SupportTooLarge { limit: SUPPORT_LIMIT });
        }
        let mut probs = vec![0.0; len];
        for (i, &a) in self.probs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.probs.iter().enumerate() {
                probs[i + j] += a * b;
            }
        }
        Ok(IntegerPmf {
            offset: self.offset + other.offset,
            probs,
        })
    }
}

/// Resource game `v(s) = H(Σ_{i∈s} X_i)` in bits.
pub fn entropy_sum_game(sources: &[IntegerPmf]) -> Result<Game<f64>> {
    let n = sources.len();
    if n == 0 || n > MAX_SUM_SOURCES {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_SUM_SOURCES,
        });
    }
    let mut sums: Vec<IntegerPmf> = Vec::with_capacity(1 << n);
    sums.push(IntegerPmf::point_mass(0));
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let next = sums[mask & (mask - 1)].convolve(&sources[low])?;
        sums.push(next);
    }
    let values = sums.iter().map(IntegerPmf::entropy_bits).collect();
    Game::from_float_values(n, Orientation::Resource, values)
}

/// Independent centred Gaussian vectors in `R^d` with given covariances.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    d: usize,
    covariances: Vec<DMatrix<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawGaussianSpec {
    d: usize,
    covariances: Vec<Vec<Vec<f64>>>,
}

impl Serialize for GaussianSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let covariances = self
            .covariances
            .iter()
            .map(|m| (0..self.d).map(|r| (0..self.d).map(|c| m[(r, c)]).collect()).collect())
            .collect();
        RawGaussianSpec { d: self.d, covariances }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGaussianSpec::deserialize(deserializer)?;
        let mut matrices = Vec::with_capacity(raw.covariances.len());
        for (index, rows) in raw.covariances.iter().enumerate() {
            if rows.len() != raw.d || rows.iter().any(|r| r.len() != raw.d) {
                return Err(serde::de::Error::custom(format!(
                    "covariances[{index}] is not a {}x{} matrix",
                    raw.d, raw.d
                )));
            }
            matrices.push(DMatrix::from_fn(raw.d, raw.d, |r, c| rows[r][c]));
        }
        GaussianSpec::new(raw.d, matrices).map_err(serde::de::Error::custom)
    }
}

impl GaussianSpec {
    pub fn new(d: usize, covariances: Vec<DMatrix<f64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        if covariances.is_empty() || covariances.len() > crate::game::MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                n: covariances.len(),
                max: crate::game::MAX_PLAYERS,
            });
        }
        for (index, m) in covariances.iter().enumerate() {
            let symmetric = m.nrows() == d
                && m.ncols() == d
                && (0..d).all(|r| (0..d).all(|c| (m[(r, c)] - m[(c, r)]).abs() <= SYMMETRY_TOLERANCE));
            if !symmetric || m.iter().any(|x| !x.is_finite()) || m.clone().cholesky().is_none() {
                return Err(Error::NotPositiveDefinite { index });
            }
        }
        Ok(GaussianSpec { d, covariances })
    }

    /// Scalar Gaussians with the given variances.
    pub fn scalar(variances: &[f64]) -> Result<Self> {
        Self::new(1, variances.iter().map(|&v| DMatrix::from_element(1, 1, v)).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.covariances.len()
    }

    pub fn covariances(&self) -> &[DMatrix<f64>] {
        &self.covariances
    }

    /// Covariance of `Σ_{i∈s} X_i`.
    pub fn sum_covariance(&self, s: Coalition) -> DMatrix<f64> {
        s.players()
            .fold(DMatrix::zeros(self.d, self.d), |acc, i| acc + &self.covariances[i])
    }

    /// Entropy power `det(Σ_s)^{1/d}` of `Σ_{i∈s} X_i`; zero for the empty set.
    pub fn entropy_power(&self, s: Coalition) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        let chol = self
            .sum_covariance(s)
            .cholesky()
            .expect("sums of positive definite matrices are positive definite");
        let log_det: f64 = chol.l().diagonal().iter().map(|x| 2.0 * x.ln()).sum();
        (log_det / self.d as f64).exp()
    }
}

/// Cost game `v(s) = det(Σ_{i∈s} Σ_i)^{1/d}`.
pub fn gaussian_entropy_power_game(g: &GaussianSpec) -> Result<Game<f64>> {
    let n = g.n();
    let values = Coalition::all(n).map(|s| g.entropy_power(s)).collect();
    Game::from_float_values(n, Orientation::Cost, values)
}

/// Weighting used by [`check_fractional_epi`].
#[derive(Debug, Clone, PartialEq)]
pub enum EpiWeights {
    /// A fractional partition; the result is evidence, not a theorem.
    Partition(FractionalPartition<f64>),
    /// Weight `1/r₊` on every set of the collection, `r₊` its maximal degree.
    UniformDegree(Vec<Coalition>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpiReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub equality: bool,
    /// True in partition mode, where the inequality is conjectural.
    pub conjecture_evidence: bool,
    /// The `1/r₊` weight in uniform-degree mode.
    pub weight: Option<f64>,
}

/// Compares `𝒩(X_1 + .. + X_n)` with `Σ β(s) 𝒩(Σ_{j∈s} X_j)`.
pub fn check_fractional_epi(g: &GaussianSpec, weights: &EpiWeights) -> Result<EpiReport> {
    let n = g.n();
    let (sets, betas, conjecture, weight) = match weights {
        EpiWeights::Partition(fp) => {
            if !fp.is_fractional_partition(n, &1e-9)? {
                return Err(Error::InvalidPartition);
            }
            (fp.sets.clone(), fp.weights.clone(), true, None)
        }
        EpiWeights::UniformDegree(collection) => {
            let fp = FractionalPartition::uniform(collection.clone(), 1.0)?;
            if collection.is_empty() || collection.iter().any(|s| !s.is_subset_of(Coalition::grand(n))) {
                return Err(Error::InvalidPartition);
            }
            let beta = 1.0 / fp.max_degree(n) as f64;
            (fp.sets, vec![beta; collection.len()], false, Some(beta))
        }
    };
    let lhs = g.entropy_power(Coalition::grand(n));
    let rhs = crate::scalar::compensated_sum(sets.iter().zip(&betas).map(|(s, b)| b * g.entropy_power(*s)));
    let margin = lhs - rhs;
    Ok(EpiReport {
        lhs,
        rhs,
        margin,
        equality: margin.abs() <= EPI_EQUALITY_TOLERANCE * lhs,
        conjecture_evidence: conjecture,
        weight,
    })
}

/// The collection of all `(n-1)`-subsets; the whole set when `n = 1`.
pub fn leave_one_out(n: usize) -> Vec<Coalition> {
    if n == 1 {
        return vec![Coalition::grand(1)];
    }
    (0..n).map(|i| Coalition::grand(n).without(i)).collect()
}

fn check_variances(variances: &[f64]) -> Result<()> {
    if variances.is_empty() || variances.len() > crate::game::MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            n: variances.len(),
            max: crate::game::MAX_PLAYERS,
        });
    }
    if variances.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::NonpositiveVariance);
    }
    Ok(())
}

/// `v(s) = h(X_0 + Σ_{i∈s} X_i)` in nats for scalar Gaussians, where `X_0`
/// has variance `1/(2πe)` so that `h(X_0) = 0`; this equals
/// `½ ln(1 + 2πe Σ_{i∈s} σ_i²)`. The game is submodular and is built as a
/// resource game.
pub fn shifted_diff_entropy_game(variances: &[f64]) -> Result<Game<f64>> {
    check_variances(variances)?;
    let n = variances.len();
    let scale = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    let values = Coalition::all(n)
        .map(|s| 0.5 * (scale * s.sum_of(variances)).ln_1p())
        .collect();
    Game::from_float_values(n, Orientation::Resource, values)
}

/// Raw differential entropies of sums, `v(s) = h(Σ_{i∈s} X_i)`, would need
/// `v(∅) = h(0) = -∞`. Always refused with [`Error::NotAGame`] after the
/// variances are validated.
pub fn differential_entropy_sum_game(variances: &[f64]) -> Result<Game<f64>> {
    check_variances(variances)?;
    Err(Error::NotAGame)
}
