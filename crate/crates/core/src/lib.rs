//! Cooperative games arising from information theory.
//!
//! The crate represents finite transferable-utility games, decides their
//! structural properties (balancedness, convexity, exactness, large core,
//! XOS representability) and builds the games attached to rate and capacity
//! regions: Slepian-Wolf coding, multiple-access channels, distributed
//! estimation, entropy of sums and entropy power, and capacities for robust
//! hypothesis testing on finite outcome spaces.

pub mod analysis;
pub mod capacity;
pub mod coalition;
pub mod error;
pub mod estimation;
pub mod formats;
pub mod game;
pub mod info;
pub mod lp;
pub mod random;
pub mod scalar;
pub mod sums;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use game::{FractionalPartition, Game, Modularity, ModularityReport, Order, Orientation};
pub use scalar::{ModeKind, NumericMode, Rational, Scalar};
