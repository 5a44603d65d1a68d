//! Discrete memoryless multiple-access channels with product inputs.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};

use super::pmf::{validate_probs, JointPmf};

/// Independent inputs `X_1..X_n` and a transition matrix `W(y | x_1..x_n)`
/// whose rows follow the row-major product input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel", into = "RawChannel")]
pub struct ChannelSpec {
    input_marginals: Vec<Vec<f64>>,
    transition: Vec<Vec<f64>>,
    output_size: usize,
}

#[derive(Serialize, Deserialize)]
struct RawChannel {
    input_marginals: Vec<Vec<f64>>,
    transition: Vec<Vec<f64>>,
    output_size: usize,
}

impl TryFrom<RawChannel> for ChannelSpec {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        ChannelSpec::new(raw.input_marginals, raw.transition, raw.output_size)
    }
}

impl From<ChannelSpec> for RawChannel {
    fn from(c: ChannelSpec) -> Self {
        RawChannel {
            input_marginals: c.input_marginals,
            transition: c.transition,
            output_size: c.output_size,
        }
    }
}

impl ChannelSpec {
    pub fn new(input_marginals: Vec<Vec<f64>>, transition: Vec<Vec<f64>>, output_size: usize) -> Result<Self> {
        if input_marginals.is_empty() || input_marginals.len() >= crate::game::MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                n: input_marginals.len(),
                max: crate::game::MAX_PLAYERS - 1,
            });
        }
        for m in &input_marginals {
            if m.is_empty() {
                return Err(Error::Parse("input alphabets must be nonempty".into()));
            }
            validate_probs(m)?;
        }
        let rows: usize = input_marginals.iter().map(Vec::len).product();
        if transition.len() != rows {
            return Err(Error::WrongLength {
                expected: rows,
                found: transition.len(),
            });
        }
        for row in &transition {
            if row.len() != output_size {
                return Err(Error::WrongLength {
                    expected: output_size,
                    found: row.len(),
                });
            }
            validate_probs(row)?;
        }
        Ok(ChannelSpec {
            input_marginals,
            transition,
            output_size,
        })
    }

    pub fn n(&self) -> usize {
        self.input_marginals.len()
    }

    pub fn input_marginals(&self) -> &[Vec<f64>] {
        &self.input_marginals
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// Joint pmf of `(X_1, .., X_n, Y)`; `Y` is variable `n + 1`.
    pub fn joint_with_output(&self) -> Result<JointPmf> {
        let input = JointPmf::independent(&self.input_marginals)?;
        let probs: Vec<f64> = input
            .probs()
            .iter()
            .zip(&self.transition)
            .flat_map(|(&px, row)| row.iter().map(move |&w| px * w))
            .collect();
        let total: f64 = crate::scalar::compensated_sum(probs.iter().copied());
        let mut sizes = input.alphabet_sizes().to_vec();
        sizes.push(self.output_size);
        JointPmf::new(sizes, probs.into_iter().map(|p| p / total).collect())
    }

    /// `I(X_s; Y | X_{s^c}) = H(Y | X_{s^c}) - H(Y | X_[n])` in bits.
    pub fn cmi_with_output(&self, s: Coalition) -> Result<f64> {
        let joint = self.joint_with_output()?;
        Ok(cmi_from_joint(&joint, self.n(), s))
    }
}

/// `I(X_s; Y | X_{s^c})` from the joint pmf of inputs and output.
pub(crate) fn cmi_from_joint(joint: &JointPmf, n: usize, s: Coalition) -> f64 {
    let y = Coalition::singleton(n);
    let rest = s.complement(n);
    let all = Coalition::grand(n);
    let h_y_given_rest = joint.joint_entropy(rest.union(y)) - joint.joint_entropy(rest);
    let h_y_given_all = joint.joint_entropy(all.union(y)) - joint.joint_entropy(all);
    (h_y_given_rest - h_y_given_all).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn adder_channel() -> ChannelSpec {
        let mut transition = Vec::new();
        for x1 in 0..2 {
            for x2 in 0..2 {
                let mut row = vec![0.0; 3];
                row[x1 + x2] = 1.0;
                transition.push(row);
            }
        }
        ChannelSpec::new(vec![vec![0.5, 0.5]; 2], transition, 3).unwrap()
    }

    #[test]
    fn binary_adder_channel_information() {
        let ch = adder_channel();
        assert!((ch.cmi_with_output(Coalition(0b01)).unwrap() - 1.0).abs() < 1e-12);
        assert!((ch.cmi_with_output(Coalition(0b11)).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_rows() {
        let err = ChannelSpec::new(vec![vec![1.0]], vec![vec![0.5, 0.4]], 2);
        assert_eq!(err, Err(Error::UnnormalizedInput));
        let err = ChannelSpec::new(vec![vec![1.0]], vec![vec![1.0]], 2);
        assert!(matches!(err, Err(Error::WrongLength { .. })));
    }
}
