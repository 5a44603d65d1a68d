//! Joint probability mass functions over finite product alphabets.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::scalar::compensated_sum;

/// Normalisation tolerance for probability vectors.
pub const PMF_TOLERANCE: f64 = 1e-12;

/// Checks nonnegativity and unit mass.
pub(crate) fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::UnnormalizedInput);
    }
    if (compensated_sum(probs.iter().copied()) - 1.0).abs() > PMF_TOLERANCE {
        return Err(Error::UnnormalizedInput);
    }
    Ok(())
}

/// Entropy in bits, with `0 log 0 = 0`.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    let h = compensated_sum(
        probs
            .into_iter()
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2()),
    );
    h.max(0.0)
}

/// Joint pmf of `X_1..X_n`, stored row-major with `X_1` most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJointPmf", into = "RawJointPmf")]
pub struct JointPmf {
    alphabet_sizes: Vec<usize>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawJointPmf {
    alphabet_sizes: Vec<usize>,
    probs: Vec<f64>,
}

impl TryFrom<RawJointPmf> for JointPmf {
    type Error = Error;

    fn try_from(raw: RawJointPmf) -> Result<Self> {
        JointPmf::new(raw.alphabet_sizes, raw.probs)
    }
}

impl From<JointPmf> for RawJointPmf {
    fn from(p: JointPmf) -> Self {
        RawJointPmf {
            alphabet_sizes: p.alphabet_sizes,
            probs: p.probs,
        }
    }
}

impl JointPmf {
    pub fn new(alphabet_sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if alphabet_sizes.is_empty() || alphabet_sizes.len() > crate::game::MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                n: alphabet_sizes.len(),
                max: crate::game::MAX_PLAYERS,
            });
        }
        if alphabet_sizes.contains(&0) {
            return Err(Error::Parse("alphabet sizes must be positive".into()));
        }
        let expected = alphabet_sizes
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or_else(|| Error::Parse("product alphabet too large".into()))?;
        if probs.len() != expected {
            return Err(Error::WrongLength {
                expected,
                found: probs.len(),
            });
        }
        validate_probs(&probs)?;
        Ok(JointPmf { alphabet_sizes, probs })
    }

    /// Product of independent marginals.
    pub fn independent(marginals: &[Vec<f64>]) -> Result<Self> {
        for m in marginals {
            validate_probs(m)?;
        }
        let sizes: Vec<usize> = marginals.iter().map(Vec::len).collect();
        let mut probs = vec![1.0];
        for m in marginals {
            probs = probs.iter().flat_map(|&p| m.iter().map(move |&q| p * q)).collect();
        }
        // Products of normalised vectors can drift by a few ulps.
        let total = compensated_sum(probs.iter().copied());
        probs.iter_mut().for_each(|p| *p /= total);
        Self::new(sizes, probs)
    }

    pub fn n(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal on the members of `s`, row-major in increasing player order.
    pub fn marginal(&self, s: Coalition) -> Vec<f64> {
        let n = self.n();
        let members: Vec<usize> = s.players().filter(|&i| i < n).collect();
        let size: usize = members.iter().map(|&i| self.alphabet_sizes[i]).product();
        let mut out = vec![0.0; size];
        let mut digits = vec![0usize; n];
        for &p in &self.probs {
            let idx = members
                .iter()
                .fold(0usize, |acc, &i| acc * self.alphabet_sizes[i] + digits[i]);
            out[idx] += p;
            for i in (0..n).rev() {
                digits[i] += 1;
                if digits[i] < self.alphabet_sizes[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
        out
    }

    /// Joint pmf of the first `k` variables.
    pub fn prefix(&self, k: usize) -> Result<JointPmf> {
        if k == 0 || k > self.n() {
            return Err(Error::EmptySubset);
        }
        let probs = self.marginal(Coalition::grand(k));
        let total = compensated_sum(probs.iter().copied());
        JointPmf::new(
            self.alphabet_sizes[..k].to_vec(),
            probs.into_iter().map(|p| p / total).collect(),
        )
    }

    /// `H(X_s)` in bits.
    pub fn joint_entropy(&self, s: Coalition) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        entropy_bits(self.marginal(s))
    }

    /// `H(X_s | X_t) = H(X_{s∪t}) - H(X_t)` for disjoint `s`, `t`.
    pub fn conditional_entropy(&self, s: Coalition, t: Coalition) -> Result<f64> {
        if !s.intersection(t).is_empty() {
            return Err(Error::OverlappingSubsets);
        }
        Ok((self.joint_entropy(s.union(t)) - self.joint_entropy(t)).max(0.0))
    }

    /// `H(X_s)` for every coalition, indexed by bitmask.
    pub fn all_entropies(&self) -> Vec<f64> {
        Coalition::all(self.n()).map(|s| self.joint_entropy(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_fair_bits() {
        let p = JointPmf::new(vec![2, 2], vec![0.25; 4]).unwrap();
        assert!((p.joint_entropy(Coalition(0b11)) - 2.0).abs() < 1e-15);
        assert!((p.joint_entropy(Coalition(0b01)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn copy_has_zero_conditional_entropy() {
        let p = JointPmf::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(p.conditional_entropy(Coalition(0b01), Coalition(0b10)).unwrap(), 0.0);
        assert_eq!(
            p.conditional_entropy(Coalition(0b01), Coalition(0b01)),
            Err(Error::OverlappingSubsets)
        );
    }

    #[test]
    fn marginal_layout_is_row_major() {
        // p(x1, x2, x3) with sizes (2, 3, 2); X1 most significant.
        let probs: Vec<f64> = (1..=12).map(|k| k as f64 / 78.0).collect();
        let p = JointPmf::new(vec![2, 3, 2], probs.clone()).unwrap();
        let m1 = p.marginal(Coalition(0b001));
        assert!((m1[0] - probs[..6].iter().sum::<f64>()).abs() < 1e-15);
        let m3 = p.marginal(Coalition(0b100));
        let even: f64 = probs.iter().step_by(2).sum();
        assert!((m3[0] - even).abs() < 1e-15);
        let m23 = p.marginal(Coalition(0b110));
        assert!((m23[1] - (probs[1] + probs[7])).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalised_input() {
        assert_eq!(JointPmf::new(vec![2], vec![0.5, 0.6]), Err(Error::UnnormalizedInput));
        assert_eq!(JointPmf::new(vec![2], vec![1.5, -0.5]), Err(Error::UnnormalizedInput));
        assert!(matches!(JointPmf::new(vec![2], vec![1.0]), Err(Error::WrongLength { .. })));
    }

    #[test]
    fn json_round_trip_validates() {
        let p: JointPmf = serde_json::from_str(r#"{"alphabet_sizes":[2],"probs":[0.25,0.75]}"#).unwrap();
        assert_eq!(p.n(), 1);
        assert!(serde_json::from_str::<JointPmf>(r#"{"alphabet_sizes":[2],"probs":[0.5,0.75]}"#).is_err());
    }
}
