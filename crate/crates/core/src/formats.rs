//! JSON game files.
//!
//! A game file is an object `{"n": .., "orientation": "cost" | "resource",
//! "values": [..]}` with `2^n` values in bitmask order. A value is either a
//! JSON number or a string `"p/q"` (or a decimal literal) read as an exact
//! rational. Optional keys: `"capacity": true` marks a capacity (resource
//! orientation, `v(Ω) = 1`, monotone), and `"mode": "rational" | "float"`
//! selects the default arithmetic.

use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::game::{Game, Orientation};
use crate::scalar::{parse_rational, rational_from_decimal_f64, ModeKind, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameValue {
    Number(f64),
    Text(String),
}

impl GameValue {
    fn to_rational(&self, index: usize) -> Result<Rational> {
        match self {
            GameValue::Number(x) => rational_from_decimal_f64(*x)
                .ok_or_else(|| Error::Parse(format!("field `values[{index}]`: not a finite number"))),
            GameValue::Text(text) => {
                parse_rational(text).map_err(|e| Error::Parse(format!("field `values[{index}]`: {e}")))
            }
        }
    }

    fn to_f64(&self, index: usize) -> Result<f64> {
        match self {
            GameValue::Number(x) => Ok(*x),
            GameValue::Text(_) => Ok(Scalar::to_f64(&self.to_rational(index)?)),
        }
    }

    fn is_exact_literal(&self) -> bool {
        match self {
            GameValue::Number(x) => x.fract() == 0.0,
            GameValue::Text(_) => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub n: usize,
    pub orientation: Orientation,
    pub values: Vec<GameValue>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub capacity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeKind>,
}

impl GameFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.check_shape()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game files serialize")
    }

    fn check_shape(&self) -> Result<()> {
        if self.n == 0 || self.n > crate::game::MAX_PLAYERS {
            return Err(Error::Parse(format!(
                "field `n`: {} outside 1..={}",
                self.n,
                crate::game::MAX_PLAYERS
            )));
        }
        if self.values.len() != 1 << self.n {
            return Err(Error::Parse(format!(
                "field `values`: expected {} entries, found {}",
                1usize << self.n,
                self.values.len()
            )));
        }
        if self.capacity && self.orientation != Orientation::Resource {
            return Err(Error::Parse("field `orientation`: a capacity must be \"resource\"".into()));
        }
        Ok(())
    }

    /// Mode named in the file, or rational when every value is an integer
    /// or a string, float otherwise.
    pub fn default_mode(&self) -> ModeKind {
        self.mode.unwrap_or(if self.values.iter().all(GameValue::is_exact_literal) {
            ModeKind::Rational
        } else {
            ModeKind::Float
        })
    }

    pub fn rational_game(&self) -> Result<Game<Rational>> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.to_rational(i))
            .collect::<Result<Vec<_>>>()?;
        Game::new(self.n, self.orientation, values).map_err(field_error)
    }

    pub fn float_game(&self) -> Result<Game<f64>> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.to_f64(i))
            .collect::<Result<Vec<_>>>()?;
        Game::new(self.n, self.orientation, values).map_err(field_error)
    }

    pub fn capacity(&self) -> Result<Capacity> {
        if !self.capacity {
            return Err(Error::Parse("field `capacity`: expected true".into()));
        }
        Capacity::new(self.float_game()?).map_err(|e| Error::Parse(format!("field `values`: {e}")))
    }

    pub fn from_float_game(game: &Game<f64>) -> Self {
        GameFile {
            n: game.n(),
            orientation: game.orientation(),
            values: game.values().iter().map(|&x| GameValue::Number(x)).collect(),
            capacity: false,
            mode: Some(ModeKind::Float),
        }
    }

    pub fn from_rational_game(game: &Game<Rational>) -> Self {
        GameFile {
            n: game.n(),
            orientation: game.orientation(),
            values: game.values().iter().map(|x| GameValue::Text(x.to_string())).collect(),
            capacity: false,
            mode: Some(ModeKind::Rational),
        }
    }

    pub fn from_capacity(cap: &Capacity) -> Self {
        GameFile {
            capacity: true,
            ..Self::from_float_game(cap.game())
        }
    }
}

fn field_error(e: Error) -> Error {
    match e {
        Error::NonzeroEmptySet => Error::Parse("field `values[0]`: value of the empty coalition must be 0".into()),
        Error::NegativeValue { coalition } => Error::Parse(format!(
            "field `values[{}]`: coalition {coalition} has a negative or non-finite value",
            coalition.bits()
        )),
        other => Error::Parse(format!("field `values`: {other}")),
    }
}
