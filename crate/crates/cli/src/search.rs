//! Seeded randomized searches.

use coopinfo::analysis::{check_balanced, check_large_core};
use coopinfo::info::la_anantharam_game;
use coopinfo::random::{power_profile, rational_game, rng_from_seed};
use coopinfo::{Game, NumericMode, Orientation};
use serde_json::json;

use crate::args::SearchKind;
use crate::commands::{CliError, CliResult, Outcome};
use crate::report::{fmt_vector, vector, Report};

fn profile_json(pp: &coopinfo::info::PowerProfile) -> serde_json::Value {
    json!({"P": pp.powers(), "N": pp.noise()})
}

pub fn search(kind: SearchKind, seed: u64, trials: usize) -> CliResult<Outcome> {
    let mut rng = rng_from_seed(seed);
    let mut out = Outcome::default();
    let property = match kind {
        SearchKind::LaNonconcave => "la_not_submodular",
        SearchKind::LaShapley => "la_shapley_outside_core",
        SearchKind::BalancedNotLarge => "balanced_not_large",
    };
    for trial in 0..trials {
        let found = match kind {
            SearchKind::LaNonconcave => {
                let pp = power_profile(&mut rng, 2 + trial % 3);
                let game = la_anantharam_game(&pp).map_err(|e| CliError::Usage(e.to_string()))?;
                let report = game.check_modularity();
                (!report.class.is_submodular()).then(|| {
                    let violation = report.submodular_violation.map(|v| v.to_string());
                    (
                        json!({"profile": profile_json(&pp), "values": game.values(), "violation": violation}),
                        format!(
                            "profile: P = {}, N = {:.6}\nsubmodularity violated at {}",
                            fmt_vector(pp.powers()),
                            pp.noise(),
                            violation.unwrap_or_default()
                        ),
                        game.mode(),
                    )
                })
            }
            SearchKind::LaShapley => {
                let pp = power_profile(&mut rng, 3 + trial % 2);
                let game = la_anantharam_game(&pp).map_err(|e| CliError::Usage(e.to_string()))?;
                let shapley = game.shapley_value();
                let inside = game.core_contains(&shapley).map_err(|e| CliError::Usage(e.to_string()))?;
                (!inside).then(|| {
                    (
                        json!({"profile": profile_json(&pp), "values": game.values(), "shapley": shapley}),
                        format!(
                            "profile: P = {}, N = {:.6}\nshapley: {} (outside the core)",
                            fmt_vector(pp.powers()),
                            pp.noise(),
                            fmt_vector(&shapley)
                        ),
                        game.mode(),
                    )
                })
            }
            SearchKind::BalancedNotLarge => {
                let game = rational_game(&mut rng, 3, Orientation::Cost);
                balanced_not_large(&game)?
            }
        };
        if let Some((instance, line, mode)) = found {
            out.push(
                Report::new(
                    property,
                    true,
                    json!({"seed": seed, "trial": trial, "instance": instance}),
                    mode,
                ),
                format!("seed: {seed}\ntrial: {trial}\n{line}"),
            );
            return Ok(out);
        }
    }
    out.exit = 1;
    out.push(
        Report::new(
            property,
            false,
            json!({"seed": seed, "trials": trials}),
            NumericMode {
                kind: coopinfo::ModeKind::Float,
                tolerance: coopinfo::scalar::DEFAULT_FLOAT_TOLERANCE,
            },
        ),
        format!("seed: {seed}\nno instance found in {trials} trials"),
    );
    Ok(out)
}

type Found = Option<(serde_json::Value, String, NumericMode)>;

fn balanced_not_large(game: &Game<coopinfo::Rational>) -> CliResult<Found> {
    let balance = check_balanced(game).map_err(|e| CliError::Usage(e.to_string()))?;
    if !balance.balanced {
        return Ok(None);
    }
    let large = check_large_core(game).map_err(|e| CliError::Usage(e.to_string()))?;
    if large.large {
        return Ok(None);
    }
    let vertex = large.counterexample.unwrap_or_default();
    let values: Vec<String> = game.values().iter().map(ToString::to_string).collect();
    Ok(Some((
        json!({"values": values, "vertex": vector(&vertex)}),
        format!(
            "values: [{}]\naspiration vertex with no core point below: {}",
            values.join(", "),
            fmt_vector(&vertex)
        ),
        game.mode(),
    )))
}
