//! Source-coding and multiple-access games built from probability data.

use crate::analysis::allocation::{prefix_robust_allocation, PrefixAllocation};
use crate::analysis::balance::check_balanced;
use crate::coalition::Coalition;
use crate::error::Result;
use crate::game::{indicator, Game, Orientation};
use crate::lp::{LinearProgram, LpOutcome, Relation};

use super::channel::{cmi_from_joint, ChannelSpec};
use super::pmf::JointPmf;
use super::power::{gaussian_capacity, PowerProfile};

/// Slepian-Wolf cost game `v(s) = H(X_s | X_{s^c}) = H(X_[n]) - H(X_{s^c})`.
pub fn slepian_wolf_game(p: &JointPmf) -> Result<Game<f64>> {
    let n = p.n();
    let h = p.all_entropies();
    let total = h[Coalition::grand(n).bits()];
    let values = Coalition::all(n)
        .map(|s| {
            if s.is_empty() {
                0.0
            } else {
                (total - h[s.complement(n).bits()]).max(0.0)
            }
        })
        .collect();
    Game::from_float_values(n, Orientation::Cost, values)
}

/// Drop-out game `v(s) = H(X_s | X_{[max s] \ s})`: only players with smaller
/// indices than the largest member of `s` are conditioned on.
pub fn modified_sw_game(p: &JointPmf) -> Result<Game<f64>> {
    let n = p.n();
    let h = p.all_entropies();
    let values = Coalition::all(n)
        .map(|s| match s.max_player() {
            None => 0.0,
            Some(m) => {
                let prefix = Coalition::grand(m + 1);
                let rest = Coalition(prefix.0 & !s.0);
                (h[prefix.bits()] - h[rest.bits()]).max(0.0)
            }
        })
        .collect();
    Game::from_float_values(n, Orientation::Cost, values)
}

/// Slepian-Wolf games of the prefixes `X_[1], .., X_[n]`.
pub fn sw_prefix_family(p: &JointPmf) -> Result<Vec<Game<f64>>> {
    (1..=p.n()).map(|k| slepian_wolf_game(&p.prefix(k)?)).collect()
}

/// Rates `R_k = H(X_k | X_[k-1])`, with the check that every prefix of them
/// lies in the core of the corresponding prefix Slepian-Wolf game.
pub fn sw_robust_allocation(p: &JointPmf) -> Result<PrefixAllocation<f64>> {
    prefix_robust_allocation(&sw_prefix_family(p)?)
}

/// Resource game `γ(s) = I(X_s; Y | X_{s^c})` of a discrete memoryless MAC
/// at a fixed product input distribution.
pub fn dmmac_game(ch: &ChannelSpec) -> Result<Game<f64>> {
    let n = ch.n();
    let joint = ch.joint_with_output()?;
    let values = Coalition::all(n)
        .map(|s| if s.is_empty() { 0.0 } else { cmi_from_joint(&joint, n, s) })
        .collect();
    Game::from_float_values(n, Orientation::Resource, values)
}

/// Gaussian MAC resource game `v(s) = ½ log₂(1 + P_s / N)`.
pub fn gmac_game(pp: &PowerProfile) -> Result<Game<f64>> {
    let n = pp.n();
    let values = Coalition::all(n)
        .map(|s| gaussian_capacity(pp.total_power(s) / pp.noise()))
        .collect();
    Game::from_float_values(n, Orientation::Resource, values)
}

/// Gaussian MAC with the other users acting as coherent jammers:
/// `v(s) = ½ log₂(1 + P_ŝ / (Λ_{s^c} + N))`, where `ŝ` keeps the senders whose
/// power reaches `Λ_{s^c}`. Built as a cost game; use
/// [`Game::with_orientation`] for the resource reading.
pub fn la_anantharam_game(pp: &PowerProfile) -> Result<Game<f64>> {
    let n = pp.n();
    let values = Coalition::all(n)
        .map(|s| {
            let rest = s.complement(n);
            let lambda = pp.jamming_power(rest);
            let effective = pp.effective_senders(s);
            gaussian_capacity(pp.total_power(effective) / (lambda + pp.noise()))
        })
        .collect();
    Game::from_float_values(n, Orientation::Cost, values)
}

/// A point of the La-Anantharam core that also satisfies every G-MAC
/// constraint `x(s) <= v_g(s)`, if one exists.
pub fn la_constrained_core_point(pp: &PowerProfile) -> Result<Option<Vec<f64>>> {
    let la = la_anantharam_game(pp)?;
    let g = gmac_game(pp)?;
    let report = check_balanced(&la)?;
    if !report.balanced {
        return Ok(None);
    }
    let n = pp.n();
    let tol = *la.tolerance();
    let mut lp = LinearProgram::minimize(vec![0.0; n]);
    for s in Coalition::nonempty(n) {
        if s == la.grand() {
            lp.add_constraint(vec![1.0; n], Relation::Eq, report.optimum);
        } else {
            lp.add_constraint(indicator(s, n), Relation::Ge, *la.value(s));
            lp.add_constraint(indicator(s, n), Relation::Le, *g.value(s) + tol);
        }
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal(sol) => Some(sol.primal),
        _ => None,
    })
}
