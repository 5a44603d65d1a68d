//! Transmit power profiles for Gaussian multiple-access channels.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};

/// Powers `P_i >= 0` and noise variance `N > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct PowerProfile {
    powers: Vec<f64>,
    noise: f64,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    #[serde(rename = "P")]
    powers: Vec<f64>,
    #[serde(rename = "N")]
    noise: f64,
}

impl TryFrom<RawProfile> for PowerProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        PowerProfile::new(raw.powers, raw.noise)
    }
}

impl From<PowerProfile> for RawProfile {
    fn from(p: PowerProfile) -> Self {
        RawProfile {
            powers: p.powers,
            noise: p.noise,
        }
    }
}

impl PowerProfile {
    pub fn new(powers: Vec<f64>, noise: f64) -> Result<Self> {
        if !(noise.is_finite() && noise > 0.0) {
            return Err(Error::NonpositiveNoise);
        }
        if powers.is_empty() || powers.len() > crate::game::MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                n: powers.len(),
                max: crate::game::MAX_PLAYERS,
            });
        }
        if let Some(index) = powers.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::NegativeAllocation { index });
        }
        Ok(PowerProfile { powers, noise })
    }

    pub fn n(&self) -> usize {
        self.powers.len()
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// `P_s = Σ_{i∈s} P_i`.
    pub fn total_power(&self, s: Coalition) -> f64 {
        s.players().map(|i| self.powers[i]).sum()
    }

    /// Coherent jamming power `Λ_s = (Σ_{i∈s} √P_i)²`.
    pub fn jamming_power(&self, s: Coalition) -> f64 {
        let root: f64 = s.players().map(|i| self.powers[i].sqrt()).sum();
        root * root
    }

    /// Senders of `s` whose power reaches the jamming level of the others.
    pub fn effective_senders(&self, s: Coalition) -> Coalition {
        let lambda = self.jamming_power(s.complement(self.n()));
        Coalition::from_players(s.players().filter(|&i| self.powers[i] >= lambda))
    }
}

/// Gaussian capacity `½ log₂(1 + x)` in bits.
pub fn gaussian_capacity(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}
