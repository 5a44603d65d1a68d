//! Subcommand implementations.

use std::fs;
use std::path::Path;

use coopinfo::analysis::{
    check_balanced, check_exact, check_large_core, enumerate_minimal_balanced_collections, prefix_robust_allocation,
    shapley_ichiishi_check, tolerance_allocation, xos_representation, BalanceCertificate, ToleranceOutcome,
};
use coopinfo::capacity::{least_favorable_pair, minimax_lr_check, Capacity, DivergenceDirection, LfpOptions};
use coopinfo::estimation::{de_game, DensitySpec, QuadratureSpec};
use coopinfo::formats::GameFile;
use coopinfo::info::{
    dmmac_game, gmac_game, la_anantharam_game, modified_sw_game, slepian_wolf_game, ChannelSpec,
    JointPmf, PowerProfile,
};
use coopinfo::scalar::parse_rational;
use coopinfo::sums::{
    check_fractional_epi, entropy_sum_game, gaussian_entropy_power_game, leave_one_out, shifted_diff_entropy_game,
    EpiWeights, GaussianSpec, IntegerPmf,
};
use coopinfo::{Coalition, Error, FractionalPartition, Game, ModeKind, Orientation, Rational, Scalar};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{ConstructKind, GlobalOpts};
use crate::report::{
    coalition, fmt_scalar, fmt_vector, scalar, vector, Report, CONJECTURE_EVIDENCE, FINITE_REALIZATION,
};

/// Largest game analysed for exactness (one LP per coalition).
pub const MAX_EXACT_PLAYERS: usize = 10;
/// Largest game analysed through its Weber set.
pub const MAX_WEBER_PLAYERS: usize = 8;
/// Largest cost game analysed for a large core.
pub const MAX_LARGE_CORE_PLAYERS: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn input(path: &Path, message: impl ToString) -> Self {
        CliError::Input {
            path: path.display().to_string(),
            message: message.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Result of one subcommand.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<Report>,
    /// Human-readable lines.
    pub lines: Vec<String>,
    /// Verbatim output that replaces reports (game files).
    pub raw: Option<String>,
    pub exit: u8,
}

impl Outcome {
    pub fn push(&mut self, report: Report, line: String) {
        self.reports.push(report);
        self.lines.push(line);
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::input(path, e))
}

fn read_game_file(path: &Path) -> CliResult<GameFile> {
    GameFile::from_json(&read_text(path)?).map_err(|e| CliError::input(path, e))
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn mode_for(file: &GameFile, opts: &GlobalOpts) -> ModeKind {
    opts.mode.map(ModeKind::from).unwrap_or_else(|| file.default_mode())
}

fn float_game(file: &GameFile, path: &Path, opts: &GlobalOpts) -> CliResult<Game<f64>> {
    let game = file.float_game().map_err(|e| CliError::input(path, e))?;
    Ok(match opts.tol {
        Some(tol) => game.with_tolerance(tol),
        None => game,
    })
}

fn rational_game(file: &GameFile, path: &Path) -> CliResult<Game<Rational>> {
    file.rational_game().map_err(|e| CliError::input(path, e))
}

pub fn analyze(path: &Path, opts: &GlobalOpts) -> CliResult<Outcome> {
    let file = read_game_file(path)?;
    match mode_for(&file, opts) {
        ModeKind::Rational => analyze_game(&rational_game(&file, path)?),
        ModeKind::Float => analyze_game(&float_game(&file, path, opts)?),
    }
}

fn partition_json<T: Scalar>(fp: &FractionalPartition<T>) -> Value {
    json!({
        "sets": fp.sets.iter().map(|s| coalition(*s)).collect::<Vec<_>>(),
        "weights": vector(&fp.weights),
    })
}

pub fn analyze_game<T: Scalar>(game: &Game<T>) -> CliResult<Outcome> {
    let mode = game.mode();
    let n = game.n();
    let mut out = Outcome::default();

    let balance = check_balanced(game).map_err(usage)?;
    let certificate = match &balance.certificate {
        BalanceCertificate::CorePoint(x) => json!({"optimum": scalar(&balance.optimum), "core_point": vector(x)}),
        BalanceCertificate::Partition(fp) => {
            json!({"optimum": scalar(&balance.optimum), "partition": partition_json(fp)})
        }
        BalanceCertificate::Cover(fp) => json!({"optimum": scalar(&balance.optimum), "cover": partition_json(fp)}),
    };
    out.push(
        Report::new("balanced", balance.balanced, certificate, mode),
        format!("balanced: {}", balance.balanced),
    );

    let modularity = game.check_modularity();
    let class = serde_json::to_value(modularity.class).expect("enum serializes");
    let class_name = class.as_str().unwrap_or_default().to_string();
    out.push(
        Report::new(
            "modularity",
            class,
            json!({
                "supermodular_violation": modularity.supermodular_violation.map(|v| v.to_string()),
                "submodular_violation": modularity.submodular_violation.map(|v| v.to_string()),
            }),
            mode,
        ),
        format!("modularity: {class_name}"),
    );

    let shapley = game.shapley_value();
    let in_core = game.core_contains(&shapley).map_err(usage)?;
    out.push(
        Report::new("shapley_in_core", in_core, json!({"shapley": vector(&shapley)}), mode),
        format!("shapley: {}\nshapley in core: {in_core}", fmt_vector(&shapley)),
    );

    if n <= MAX_WEBER_PLAYERS {
        let convexity = shapley_ichiishi_check(game).map_err(usage)?;
        let outside = convexity.outside.as_ref().map(|(order, x)| {
            json!({"order": order.as_slice().iter().map(|i| i + 1).collect::<Vec<_>>(), "marginal_vector": vector(x)})
        });
        out.push(
            Report::new(
                "marginal_vectors_in_core",
                convexity.convex,
                json!({"distinct_marginal_vectors": convexity.weber_size, "outside": outside}),
                mode,
            ),
            format!("marginal vectors in core: {}", convexity.convex),
        );
    } else {
        out.lines.push(format!("marginal vectors in core: skipped (n > {MAX_WEBER_PLAYERS})"));
    }

    if n <= MAX_EXACT_PLAYERS {
        let (exact, certificate) = match check_exact(game) {
            Ok(report) => (
                report.exact,
                json!({"failures": report.failures.iter().map(|(s, best)| json!({"coalition": coalition(*s), "best": scalar(best)})).collect::<Vec<_>>()}),
            ),
            Err(Error::EmptyCore) => (false, json!({"reason": "empty core"})),
            Err(e) => return Err(usage(e)),
        };
        out.push(Report::new("exact", exact, certificate, mode), format!("exact: {exact}"));
    } else {
        out.lines.push(format!("exact: skipped (n > {MAX_EXACT_PLAYERS})"));
    }

    if game.orientation() == Orientation::Cost && n <= MAX_LARGE_CORE_PLAYERS {
        let large = check_large_core(game).map_err(usage)?;
        out.push(
            Report::new(
                "large_core",
                large.large,
                json!({"vertices_checked": large.vertices_checked, "counterexample": large.counterexample.as_deref().map(vector)}),
                mode,
            ),
            format!("large core: {}", large.large),
        );
    } else {
        out.lines.push("large core: skipped (cost games with n <= 5 only)".to_string());
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EsumInput {
    sources: Vec<IntegerPmf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiftedInput {
    variances: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeInput {
    sources: Vec<DensitySpec>,
    #[serde(default = "one")]
    samples: usize,
    #[serde(default)]
    quadrature: QuadratureSpec,
}

fn one() -> usize {
    1
}

pub fn construct(kind: ConstructKind, input: &Path, samples: Option<usize>) -> CliResult<GameFile> {
    let at = |e: Error| CliError::input(input, e);
    let game = match kind {
        ConstructKind::Sw => slepian_wolf_game(&read_json::<JointPmf>(input)?).map_err(at)?,
        ConstructKind::Swmod => modified_sw_game(&read_json::<JointPmf>(input)?).map_err(at)?,
        ConstructKind::Dmmac => dmmac_game(&read_json::<ChannelSpec>(input)?).map_err(at)?,
        ConstructKind::Gmac => gmac_game(&read_json::<PowerProfile>(input)?).map_err(at)?,
        ConstructKind::La => la_anantharam_game(&read_json::<PowerProfile>(input)?).map_err(at)?,
        ConstructKind::Esum => entropy_sum_game(&read_json::<EsumInput>(input)?.sources).map_err(at)?,
        ConstructKind::Epower => gaussian_entropy_power_game(&read_json::<GaussianSpec>(input)?).map_err(at)?,
        ConstructKind::Shifted => shifted_diff_entropy_game(&read_json::<ShiftedInput>(input)?.variances).map_err(at)?,
        ConstructKind::Degame => {
            let de: DeInput = read_json(input)?;
            de_game(&de.sources, samples.unwrap_or(de.samples), &de.quadrature).map_err(at)?
        }
    };
    Ok(GameFile::from_float_game(&game))
}

pub fn construct_command(
    kind: ConstructKind,
    input: &Path,
    output: Option<&Path>,
    samples: Option<usize>,
) -> CliResult<Outcome> {
    let text = construct(kind, input, samples)?.to_json() + "\n";
    let mut out = Outcome::default();
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::input(path, e))?;
            out.lines.push(format!("wrote {}", path.display()));
            out.raw = Some(String::new());
        }
        None => out.raw = Some(text),
    }
    Ok(out)
}

fn prefix_report<T: Scalar>(
    allocation: &coopinfo::analysis::PrefixAllocation<T>,
    mode: coopinfo::NumericMode,
) -> (Report, String) {
    let verified = allocation.is_verified();
    let violations: Vec<Value> = allocation
        .violations
        .iter()
        .map(|(k, s)| json!({"k": k, "coalition": coalition(*s)}))
        .collect();
    let mut line = format!("allocation: {}\nverified: {verified}", fmt_vector(&allocation.allocation));
    for (k, s) in &allocation.violations {
        line.push_str(&format!("\nviolation: prefix {k}, coalition {s}"));
    }
    (
        Report::new(
            "prefix_robust_allocation",
            verified,
            json!({"allocation": vector(&allocation.allocation), "violations": violations}),
            mode,
        ),
        line,
    )
}

pub fn robust(path: &Path) -> CliResult<Outcome> {
    let value: Value = read_json(path)?;
    let (allocation, mode) = if value.get("alphabet_sizes").is_some() {
        let p: JointPmf = serde_json::from_value(value).map_err(|e| CliError::input(path, e))?;
        let family = coopinfo::info::sw_prefix_family(&p).map_err(|e| CliError::input(path, e))?;
        let allocation = prefix_robust_allocation(&family).map_err(usage)?;
        (allocation, family[0].mode())
    } else if value.get("P").is_some() {
        let pp: PowerProfile = serde_json::from_value(value).map_err(|e| CliError::input(path, e))?;
        let family = (1..=pp.n())
            .map(|k| gmac_game(&PowerProfile::new(pp.powers()[..k].to_vec(), pp.noise())?))
            .collect::<coopinfo::Result<Vec<_>>>()
            .map_err(|e| CliError::input(path, e))?;
        let allocation = prefix_robust_allocation(&family).map_err(usage)?;
        (allocation, family[0].mode())
    } else {
        return Err(CliError::input(
            path,
            "expected a joint pmf (fields `alphabet_sizes`, `probs`) or a power profile (fields `P`, `N`)",
        ));
    };
    let (report, line) = prefix_report(&allocation, mode);
    let mut out = Outcome::default();
    out.exit = u8::from(!allocation.is_verified());
    out.push(report, line);
    Ok(out)
}

fn parse_ceiling(text: &str) -> CliResult<Vec<Rational>> {
    text.split(',')
        .map(|part| parse_rational(part).map_err(|e| CliError::Usage(format!("--T: {e}"))))
        .collect()
}

pub fn tolerance(path: &Path, ceiling: &str, opts: &GlobalOpts) -> CliResult<Outcome> {
    let file = read_game_file(path)?;
    let ceiling = parse_ceiling(ceiling)?;
    if ceiling.len() != file.n {
        return Err(CliError::Usage(format!(
            "--T: expected {} entries, found {}",
            file.n,
            ceiling.len()
        )));
    }
    match mode_for(&file, opts) {
        ModeKind::Rational => tolerance_game(&rational_game(&file, path)?, &ceiling),
        ModeKind::Float => {
            let floats: Vec<f64> = ceiling.iter().map(Scalar::to_f64).collect();
            tolerance_game(&float_game(&file, path, opts)?, &floats)
        }
    }
}

fn tolerance_game<T: Scalar>(game: &Game<T>, ceiling: &[T]) -> CliResult<Outcome> {
    let outcome = tolerance_allocation(game, ceiling).map_err(usage)?;
    let mut out = Outcome::default();
    match outcome {
        ToleranceOutcome::Feasible(x) => out.push(
            Report::new("tolerance_allocation", true, json!({"allocation": vector(&x)}), game.mode()),
            format!("feasible: true\nallocation: {}", fmt_vector(&x)),
        ),
        ToleranceOutcome::Infeasible { violated } => {
            out.exit = 1;
            let line = match violated {
                Some(s) => format!("feasible: false\nceiling violates coalition {s}"),
                None => "feasible: false\nno core point lies below the ceiling".to_string(),
            };
            out.push(
                Report::new(
                    "tolerance_allocation",
                    false,
                    json!({"violated": violated.map(coalition)}),
                    game.mode(),
                ),
                line,
            );
        }
    }
    Ok(out)
}

pub fn xos(path: &Path, opts: &GlobalOpts) -> CliResult<Outcome> {
    let file = read_game_file(path)?;
    match mode_for(&file, opts) {
        ModeKind::Rational => xos_game(&rational_game(&file, path)?),
        ModeKind::Float => xos_game(&float_game(&file, path, opts)?),
    }
}

fn xos_game<T: Scalar>(game: &Game<T>) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    match xos_representation(game) {
        Ok(rep) => {
            let clauses: Vec<Value> = rep
                .clauses
                .iter()
                .map(|c| json!({"coalition": coalition(c.coalition), "weights": vector(&c.weights)}))
                .collect();
            let mut line = format!("xos: true ({} clauses)", rep.clauses.len());
            for c in &rep.clauses {
                line.push_str(&format!("\n{} {}", c.coalition, fmt_vector(&c.weights)));
            }
            out.push(Report::new("xos", true, json!({"clauses": clauses}), game.mode()), line);
        }
        Err(e @ (Error::NotMonotone { .. } | Error::NotBalanced { .. })) => {
            out.exit = 1;
            out.push(
                Report::new("xos", false, json!({"reason": e.to_string()}), game.mode()),
                format!("xos: false ({e})"),
            );
        }
        Err(e) => return Err(usage(e)),
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionFile {
    /// One-based members.
    sets: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

fn read_partition(path: &Path, n: usize) -> CliResult<FractionalPartition<f64>> {
    let file: PartitionFile = read_json(path)?;
    let mut sets = Vec::with_capacity(file.sets.len());
    for (k, members) in file.sets.iter().enumerate() {
        if members.iter().any(|&i| i == 0 || i > n) {
            return Err(CliError::input(
                path,
                format!("field `sets[{k}]`: players must lie in 1..={n}"),
            ));
        }
        sets.push(Coalition::from_players(members.iter().map(|i| i - 1)));
    }
    FractionalPartition::new(sets, file.weights).map_err(|e| CliError::input(path, e))
}

pub fn epi_check(path: &Path, partition: Option<&Path>) -> CliResult<Outcome> {
    let spec: GaussianSpec = read_json(path)?;
    let weights = match partition {
        Some(p) => EpiWeights::Partition(read_partition(p, spec.n())?),
        None => EpiWeights::UniformDegree(leave_one_out(spec.n())),
    };
    let report = check_fractional_epi(&spec, &weights).map_err(usage)?;
    let holds = report.margin >= -1e-9;
    let certificate = serde_json::to_value(&report).expect("report serializes");
    let mut out = Outcome::default();
    let mut r = Report::float("fractional_epi", holds, certificate, 1e-9);
    let mut line = format!(
        "lhs: {:.6}\nrhs: {:.6}\nmargin: {:.6e}\nholds: {holds}\nequality: {}",
        report.lhs, report.rhs, report.margin, report.equality
    );
    if report.conjecture_evidence {
        r = r.with_note(CONJECTURE_EVIDENCE);
        line.push_str("\nnote: fractional-partition mode is conjecture evidence, not a theorem");
    } else if !holds {
        out.exit = 1;
    }
    out.push(r, line);
    Ok(out)
}

fn read_capacity(path: &Path) -> CliResult<Capacity> {
    read_game_file(path)?.capacity().map_err(|e| CliError::input(path, e))
}

pub fn lfp(u: &Path, v: &Path, reverse: bool, max_iter: usize, opts: &GlobalOpts) -> CliResult<Outcome> {
    let (cu, cv) = (read_capacity(u)?, read_capacity(v)?);
    let lfp_opts = LfpOptions {
        tol: opts.tol.unwrap_or(LfpOptions::default().tol),
        max_iter,
        direction: if reverse {
            DivergenceDirection::Reverse
        } else {
            DivergenceDirection::Forward
        },
    };
    let mut out = Outcome::default();
    match least_favorable_pair(&cu, &cv, &lfp_opts) {
        Ok(pair) => {
            let line = format!(
                "P*: {}\nQ*: {}\ndivergence: {:.6} bits\niterations: {}\nconverged: {}",
                fmt_vector(&pair.p),
                fmt_vector(&pair.q),
                pair.divergence,
                pair.iterations,
                pair.converged
            );
            let certificate = serde_json::to_value(&pair).expect("pair serializes");
            out.push(
                Report::float("least_favorable_pair", pair.converged, certificate, lfp_opts.tol)
                    .with_note(FINITE_REALIZATION),
                line,
            );
        }
        Err(Error::DivergenceInfinite) => {
            out.exit = 1;
            out.push(
                Report::float(
                    "least_favorable_pair",
                    false,
                    json!({"reason": Error::DivergenceInfinite.to_string()}),
                    lfp_opts.tol,
                )
                .with_note(FINITE_REALIZATION),
                format!("least favorable pair: none ({})", Error::DivergenceInfinite),
            );
        }
        Err(e) => return Err(usage(e)),
    }
    Ok(out)
}

pub fn lr_check(u: &Path, v: &Path, step: f64, gap: f64) -> CliResult<Outcome> {
    let (cu, cv) = (read_capacity(u)?, read_capacity(v)?);
    let pair = least_favorable_pair(&cu, &cv, &LfpOptions::default()).map_err(usage)?;
    let report = minimax_lr_check(&cu, &cv, (&pair.p, &pair.q), step, gap).map_err(usage)?;
    let mut out = Outcome::default();
    out.exit = u8::from(!report.within_tolerance);
    let line = format!(
        "tests enumerated: {}\nlikelihood-ratio tests: {}\nmax gap above envelope: {:.6}\nwithin {}: {}",
        report.tests_enumerated,
        report.lr_points.len(),
        report.max_gap,
        gap,
        report.within_tolerance
    );
    let within = report.within_tolerance;
    let certificate = json!({
        "p_star": pair.p,
        "q_star": pair.q,
        "divergence": pair.divergence,
        "check": serde_json::to_value(&report).expect("report serializes"),
    });
    out.push(
        Report::float("minimax_lr", within, certificate, gap).with_note(FINITE_REALIZATION),
        line,
    );
    Ok(out)
}

pub fn mbc(n: usize) -> CliResult<Outcome> {
    let collections = enumerate_minimal_balanced_collections(n).map_err(usage)?;
    let mut lines = vec![format!("{} minimal balanced collections on {n} players", collections.len())];
    for fp in &collections {
        let parts: Vec<String> = fp
            .sets
            .iter()
            .zip(&fp.weights)
            .map(|(s, w)| format!("{s}:{}", fmt_scalar(w)))
            .collect();
        lines.push(parts.join(" "));
    }
    let certificate = json!({"collections": collections.iter().map(partition_json).collect::<Vec<_>>()});
    let mut out = Outcome::default();
    out.push(
        Report::new(
            "minimal_balanced_collections",
            collections.len(),
            certificate,
            coopinfo::NumericMode {
                kind: ModeKind::Rational,
                tolerance: 0.0,
            },
        ),
        lines.join("\n"),
    );
    Ok(out)
}
