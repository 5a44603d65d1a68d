//! Games from information theory: Slepian-Wolf coding, discrete and
//! Gaussian multiple-access channels, and the jammed Gaussian channel.
//! Entropies and capacities are in bits.

pub mod channel;
pub mod games;
pub mod pmf;
pub mod power;

pub use channel::ChannelSpec;
pub use games::{
    dmmac_game, gmac_game, la_anantharam_game, la_constrained_core_point, modified_sw_game, slepian_wolf_game,
    sw_prefix_family, sw_robust_allocation,
};
pub use pmf::{entropy_bits, JointPmf};
pub use power::{gaussian_capacity, PowerProfile};
