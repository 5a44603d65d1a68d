//! Capacities on a finite outcome space and least favourable pairs for
//! robust hypothesis testing.
//!
//! A capacity is a monotone set function `ν` with `ν(∅) = 0` and `ν(Ω) = 1`,
//! stored as a resource game whose players are the outcomes. Its core is
//! the set of probability vectors `P` with `P(A) <= ν(A)` for every `A`. On a
//! finite space the continuity conditions of the general theory hold
//! automatically, so every result here is a finite-Ω realization.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Game, Orientation};
use crate::info::pmf::validate_probs;
use crate::scalar::compensated_sum;

/// Largest outcome space accepted.
pub const MAX_OUTCOMES: usize = 12;
/// Largest outcome space for [`minimax_lr_check`].
pub const MAX_LR_OUTCOMES: usize = 4;
/// Tolerance on `ν(Ω) = 1` and on monotonicity.
pub const CAPACITY_TOLERANCE: f64 = 1e-12;
/// Likelihood ratios closer than this (relative) count as tied.
pub const RATIO_TIE_TOLERANCE: f64 = 1e-6;

/// Probability vector on `Ω = {0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FinitePmf(Vec<f64>);

impl TryFrom<Vec<f64>> for FinitePmf {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        FinitePmf::new(probs)
    }
}

impl From<FinitePmf> for Vec<f64> {
    fn from(p: FinitePmf) -> Self {
        p.0
    }
}

impl FinitePmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.len() > MAX_OUTCOMES {
            return Err(Error::OutcomeSpaceTooLarge {
                size: probs.len(),
                max: MAX_OUTCOMES,
            });
        }
        validate_probs(&probs)?;
        Ok(FinitePmf(probs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// `P(A)`.
    pub fn measure(&self, a: Coalition) -> f64 {
        compensated_sum(a.players().map(|i| self.0[i]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    game: Game<f64>,
}

impl Capacity {
    /// Validates normalisation and monotonicity of a resource game.
    pub fn new(game: Game<f64>) -> Result<Self> {
        if game.n() > MAX_OUTCOMES {
            return Err(Error::OutcomeSpaceTooLarge {
                size: game.n(),
                max: MAX_OUTCOMES,
            });
        }
        let game = game.with_orientation(Orientation::Resource);
        if !is_capacity(&game) {
            return Err(Error::NotACapacity);
        }
        Ok(Capacity { game })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let n = values.len().trailing_zeros() as usize;
        if values.len() != 1 << n {
            return Err(Error::WrongLength {
                expected: 1 << n,
                found: values.len(),
            });
        }
        Self::new(Game::from_float_values(n, Orientation::Resource, values)?)
    }

    /// The additive capacity of `p`.
    pub fn additive(p: &FinitePmf) -> Self {
        let game = Game::from_float_values(p.len(), Orientation::Resource, crate::game::subset_sums(p.probs()))
            .expect("probabilities are nonnegative");
        Capacity { game }
    }

    pub fn n(&self) -> usize {
        self.game.n()
    }

    pub fn value(&self, a: Coalition) -> f64 {
        *self.game.value(a)
    }

    pub fn game(&self) -> &Game<f64> {
        &self.game
    }

    pub fn into_game(self) -> Game<f64> {
        self.game
    }
}

/// `ν(∅) = 0`, `ν(Ω) = 1` and `ν` nondecreasing, within [`CAPACITY_TOLERANCE`].
pub fn is_capacity(game: &Game<f64>) -> bool {
    let strict = game.clone().with_tolerance(CAPACITY_TOLERANCE);
    (strict.grand_value() - 1.0).abs() <= CAPACITY_TOLERANCE && strict.monotonicity_violation().is_none()
}

/// Submodularity of the underlying game.
pub fn is_two_alternating(cap: &Capacity) -> bool {
    cap.game.check_modularity().class.is_submodular()
}

/// `P(A) <= ν(A)` for every `A`.
pub fn capacity_core_contains(p: &FinitePmf, cap: &Capacity) -> Result<bool> {
    if p.len() != cap.n() {
        return Err(Error::MismatchedOutcomeSpaces);
    }
    Ok(cap.game.aspiration_contains(p.probs())?)
}

fn check_parameter(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange(x));
    }
    Ok(())
}

/// `ν(A) = max_P P(A)` over the family.
pub fn upper_envelope(family: &[FinitePmf]) -> Result<Capacity> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let n = first.len();
    if family.iter().any(|p| p.len() != n) {
        return Err(Error::MismatchedOutcomeSpaces);
    }
    let values = Coalition::all(n)
        .map(|a| {
            if a.is_empty() {
                0.0
            } else {
                family.iter().map(|p| p.measure(a)).fold(0.0, f64::max)
            }
        })
        .collect();
    Capacity::from_values(values)
}

/// `ν(A) = (1 - ε) P0(A) + ε` for nonempty `A`.
pub fn contamination_capacity(p0: &FinitePmf, eps: f64) -> Result<Capacity> {
    check_parameter(eps)?;
    let values = Coalition::all(p0.len())
        .map(|a| if a.is_empty() { 0.0 } else { (1.0 - eps) * p0.measure(a) + eps })
        .collect();
    Capacity::from_values(values)
}

/// `ν(A) = min(P0(A) + δ, 1)` for nonempty `A`.
pub fn tv_capacity(p0: &FinitePmf, delta: f64) -> Result<Capacity> {
    check_parameter(delta)?;
    let values = Coalition::all(p0.len())
        .map(|a| if a.is_empty() { 0.0 } else { (p0.measure(a) + delta).min(1.0) })
        .collect();
    Capacity::from_values(values)
}

/// Marginal vector of `cap` along `order`.
fn vertex_along(cap: &Capacity, order: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; cap.n()];
    let mut prefix = Coalition::EMPTY;
    for &i in order {
        let next = prefix.with(i);
        out[i] = (cap.value(next) - cap.value(prefix)).max(0.0);
        prefix = next;
    }
    out
}

/// Core point minimising `Σ g_i P_i` (greedy; exact for 2-alternating
/// capacities). Infinite entries of `g` are allowed.
fn linear_minimizer(cap: &Capacity, g: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..cap.n()).collect();
    order.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
    vertex_along(cap, &order)
}

/// `max_{P ∈ core} Σ f_i P_i` for a 2-alternating capacity.
pub fn upper_expectation(cap: &Capacity, f: &[f64]) -> f64 {
    let neg: Vec<f64> = f.iter().map(|x| -x).collect();
    let p = linear_minimizer(cap, &neg);
    compensated_sum(p.iter().zip(f).map(|(a, b)| a * b))
}

/// Distinct marginal vectors; for a 2-alternating capacity these are the
/// vertices of the core.
pub fn core_vertices(cap: &Capacity) -> Result<Vec<Vec<f64>>> {
    if !is_two_alternating(cap) {
        return Err(Error::NotTwoAlternating);
    }
    Ok(crate::analysis::weber::weber_set(&cap.game)?.vectors)
}

/// `D(P ‖ Q)` in bits; infinite when `P` charges an outcome `Q` does not.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    let mut terms = Vec::with_capacity(p.len());
    for (&a, &b) in p.iter().zip(q) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            return f64::INFINITY;
        }
        terms.push(a * (a / b).log2());
    }
    compensated_sum(terms).max(0.0)
}

/// Which divergence is minimised, for `P` from the first family and `Q` from
/// the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceDirection {
    /// `D(P ‖ Q)`.
    Forward,
    /// `D(Q ‖ P)`.
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LfpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub direction: DivergenceDirection,
}

impl Default for LfpOptions {
    fn default() -> Self {
        LfpOptions {
            tol: 1e-8,
            max_iter: 10_000,
            direction: DivergenceDirection::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeastFavorablePair {
    /// Element of the core of the first capacity.
    pub p: Vec<f64>,
    /// Element of the core of the second capacity.
    pub q: Vec<f64>,
    pub divergence: f64,
    pub iterations: usize,
    /// The Frank-Wolfe gap fell below the tolerance.
    pub converged: bool,
    /// Divergence after each iteration; nonincreasing.
    pub history: Vec<f64>,
    pub direction: DivergenceDirection,
}

/// A point of a core polytope written as a convex combination of core
/// points, so that away steps can shrink any of them.
struct ActiveSet {
    point: Vec<f64>,
    atoms: Vec<(Vec<f64>, f64)>,
}

impl ActiveSet {
    fn new(point: Vec<f64>) -> Self {
        ActiveSet {
            atoms: vec![(point.clone(), 1.0)],
            point,
        }
    }
}

/// `Σ g_i v_i`, skipping zero coordinates so infinite gradients do not
/// produce NaN.
fn dot(g: &[f64], v: &[f64]) -> f64 {
    g.iter().zip(v).filter(|(_, x)| **x != 0.0).map(|(a, b)| a * b).sum()
}

/// Minimises a convex function on `[0, hi]` by golden-section search.
fn line_search(phi: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    for _ in 0..100 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = phi(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(hi, phi(hi)), (mid, phi(mid))]
        .into_iter()
        .fold((0.0, phi(0.0)), |best, cand| if cand.1 < best.1 { cand } else { best })
        .0
}

/// One away-step Frank-Wolfe step on a block. Returns the Frank-Wolfe gap at
/// the starting point.
fn block_step(
    x: &mut ActiveSet,
    grad: &[f64],
    lmo: impl Fn(&[f64]) -> Vec<f64>,
    objective: impl Fn(&[f64]) -> f64,
) -> f64 {
    let s = lmo(grad);
    let gx = dot(grad, &x.point);
    let fw_gap = gx - dot(grad, &s);
    let away = x
        .atoms
        .iter()
        .enumerate()
        .map(|(k, (a, _))| (k, dot(grad, a)))
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let (away_index, away_gap) = match away {
        Some((k, ga)) if x.atoms.len() > 1 => (Some(k), ga - gx),
        _ => (None, f64::NEG_INFINITY),
    };
    let use_away = away_index.is_some() && !(fw_gap >= away_gap) && away_gap.is_finite();
    let (direction, gamma_max): (Vec<f64>, f64) = if use_away {
        let k = away_index.unwrap();
        let w = x.atoms[k].1;
        (
            x.point.iter().zip(&x.atoms[k].0).map(|(p, a)| p - a).collect(),
            w / (1.0 - w),
        )
    } else {
        (s.iter().zip(&x.point).map(|(a, p)| a - p).collect(), 1.0)
    };
    let at = |gamma: f64| -> Vec<f64> {
        x.point
            .iter()
            .zip(&direction)
            .map(|(p, d)| (p + gamma * d).max(0.0))
            .collect()
    };
    let gamma = line_search(|g| objective(&at(g)), gamma_max);
    if gamma <= 0.0 {
        return fw_gap;
    }
    x.point = at(gamma);
    if use_away {
        let k = away_index.unwrap();
        for atom in x.atoms.iter_mut() {
            atom.1 *= 1.0 + gamma;
        }
        x.atoms[k].1 -= gamma;
    } else if gamma >= 1.0 {
        x.atoms = vec![(s, 1.0)];
    } else {
        for atom in x.atoms.iter_mut() {
            atom.1 *= 1.0 - gamma;
        }
        match x.atoms.iter_mut().find(|(a, _)| a == &s) {
            Some(atom) => atom.1 += gamma,
            None => x.atoms.push((s, gamma)),
        }
    }
    x.atoms.retain(|(_, w)| *w > 1e-15);
    let total: f64 = x.atoms.iter().map(|(_, w)| w).sum();
    let mut point = vec![0.0; x.point.len()];
    for (atom, w) in x.atoms.iter_mut() {
        *w /= total;
        for (p, a) in point.iter_mut().zip(atom.iter()) {
            *p += *w * a;
        }
    }
    x.point = point;
    fw_gap
}

/// Core point of `cap` charging no outcome outside `allowed`, if any.
fn start_point(cap: &Capacity, allowed: Coalition) -> Result<Vec<f64>> {
    let n = cap.n();
    if allowed.is_empty() || (cap.value(allowed) - 1.0).abs() > CAPACITY_TOLERANCE {
        return Err(Error::DivergenceInfinite);
    }
    let sub = cap.game.subgame(allowed)?;
    let phi = sub.shapley_value();
    let mut out = vec![0.0; n];
    for (k, i) in allowed.players().enumerate() {
        out[i] = phi[k].max(0.0);
    }
    Ok(out)
}

fn minimize_forward(
    u: &Capacity,
    v: &Capacity,
    opts: &LfpOptions,
    start: Option<(&[f64], &[f64])>,
) -> Result<LeastFavorablePair> {
    let n = u.n();
    // Outcomes charged by some element of core(v).
    let q_support = Coalition::from_players((0..n).filter(|&i| v.value(Coalition::singleton(i)) > 0.0));
    let (p0, q0) = match start {
        Some((p0, q0)) => {
            for (cap, x) in [(u, p0), (v, q0)] {
                if x.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: x.len(),
                    });
                }
                let total: f64 = x.iter().sum();
                if (total - 1.0).abs() > 1e-9 || !cap.game.aspiration_contains(x)? {
                    return Err(Error::StartOutsideCore);
                }
            }
            (p0.to_vec(), q0.to_vec())
        }
        None => (start_point(u, q_support)?, start_point(v, Coalition::grand(n))?),
    };
    let mut p = ActiveSet::new(p0);
    let mut q = ActiveSet::new(q0);
    let mut current = kl_divergence(&p.point, &q.point);
    if !current.is_finite() {
        return Err(Error::DivergenceInfinite);
    }
    let mut history = vec![current];
    let mut converged = false;
    let mut iterations = 0;
    let ln2 = std::f64::consts::LN_2;
    while iterations < opts.max_iter {
        iterations += 1;
        let qp = q.point.clone();
        let grad_p: Vec<f64> = (0..n)
            .map(|i| {
                if !q_support.contains(i) {
                    f64::INFINITY
                } else if p.point[i] <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (p.point[i] / qp[i]).log2() + 1.0 / ln2
                }
            })
            .collect();
        let gap_p = block_step(&mut p, &grad_p, |g| linear_minimizer(u, g), |x| kl_divergence(x, &qp));
        let pp = p.point.clone();
        let grad_q: Vec<f64> = (0..n)
            .map(|i| {
                if pp[i] <= 0.0 {
                    0.0
                } else {
                    -pp[i] / (q.point[i] * ln2)
                }
            })
            .collect();
        let gap_q = block_step(&mut q, &grad_q, |g| linear_minimizer(v, g), |x| kl_divergence(&pp, x));
        let next = kl_divergence(&p.point, &q.point);
        history.push(next);
        let improvement = current - next;
        current = next;
        if gap_p + gap_q <= opts.tol || (improvement <= 0.0 && gap_p + gap_q <= opts.tol.sqrt()) {
            converged = gap_p + gap_q <= opts.tol;
            break;
        }
    }
    Ok(LeastFavorablePair {
        p: p.point,
        q: q.point,
        divergence: current,
        iterations,
        converged,
        history,
        direction: DivergenceDirection::Forward,
    })
}

/// Approximately minimises the divergence between the cores of `u` and `v`
/// by alternating away-step Frank-Wolfe steps on each core, starting from
/// Shapley values and stopping when the combined Frank-Wolfe gap (an upper
/// bound on the remaining suboptimality) is below `opts.tol`.
pub fn least_favorable_pair(u: &Capacity, v: &Capacity, opts: &LfpOptions) -> Result<LeastFavorablePair> {
    if u.n() != v.n() {
        return Err(Error::MismatchedOutcomeSpaces);
    }
    if !is_two_alternating(u) || !is_two_alternating(v) {
        return Err(Error::NotTwoAlternating);
    }
    solve_pair(u, v, opts, None)
}

/// [`least_favorable_pair`] started from `p0 ∈ core(u)` and `q0 ∈ core(ν)`.
pub fn least_favorable_pair_from(
    u: &Capacity,
    v: &Capacity,
    opts: &LfpOptions,
    p0: &[f64],
    q0: &[f64],
) -> Result<LeastFavorablePair> {
    if u.n() != v.n() {
        return Err(Error::MismatchedOutcomeSpaces);
    }
    if !is_two_alternating(u) || !is_two_alternating(v) {
        return Err(Error::NotTwoAlternating);
    }
    solve_pair(u, v, opts, Some((p0, q0)))
}

fn solve_pair(
    u: &Capacity,
    v: &Capacity,
    opts: &LfpOptions,
    start: Option<(&[f64], &[f64])>,
) -> Result<LeastFavorablePair> {
    match opts.direction {
        DivergenceDirection::Forward => minimize_forward(u, v, opts, start),
        DivergenceDirection::Reverse => {
            let swapped = minimize_forward(v, u, opts, start.map(|(p0, q0)| (q0, p0)))?;
            Ok(LeastFavorablePair {
                p: swapped.q,
                q: swapped.p,
                direction: DivergenceDirection::Reverse,
                ..swapped
            })
        }
    }
}

/// Worst-case error pair of one randomized test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrPoint {
    /// Reject when `Q*/P*` exceeds this (infinite means never on ratio alone).
    pub threshold: f64,
    /// Rejection probability when the ratio equals the threshold.
    pub gamma: f64,
    pub test: Vec<f64>,
    /// `sup_{P ∈ core(u)} E_P[φ]`.
    pub type_one: f64,
    /// `sup_{Q ∈ core(ν)} E_Q[1 - φ]`.
    pub type_two: f64,
    /// Smallest enumerated type-II error among tests whose type-I error is
    /// at most `type_one`.
    pub envelope: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrReport {
    pub step: f64,
    pub tolerance: f64,
    pub tests_enumerated: usize,
    pub lr_points: Vec<LrPoint>,
    pub max_gap: f64,
    /// Every likelihood-ratio point lies within `tolerance` of the envelope.
    pub within_tolerance: bool,
}

/// Worst-case (type-I, type-II) errors of `φ`.
pub fn worst_case_errors(u: &Capacity, v: &Capacity, phi: &[f64]) -> (f64, f64) {
    let complement: Vec<f64> = phi.iter().map(|x| 1.0 - x).collect();
    (upper_expectation(u, phi), upper_expectation(v, &complement))
}

/// Replaces each ratio by the smallest ratio of its tie cluster, where
/// consecutive sorted ratios within [`RATIO_TIE_TOLERANCE`] share a cluster.
fn merge_ties(ratio: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..ratio.len()).collect();
    order.sort_by(|&a, &b| ratio[a].total_cmp(&ratio[b]));
    let mut out = ratio.to_vec();
    let mut representative = f64::NAN;
    let mut previous = f64::NAN;
    for &i in &order {
        let r = ratio[i];
        let tied = r.is_finite() && previous.is_finite() && r - previous <= RATIO_TIE_TOLERANCE * r.abs().max(1.0);
        if !tied && r != previous {
            representative = r;
        }
        out[i] = representative;
        previous = r;
    }
    out
}

/// Compares likelihood-ratio tests built from `(P*, Q*)` with every test on
/// the grid `{0, step, .., 1}^Ω`.
pub fn minimax_lr_check(
    u: &Capacity,
    v: &Capacity,
    pair: (&[f64], &[f64]),
    step: f64,
    tolerance: f64,
) -> Result<LrReport> {
    let n = u.n();
    if n > MAX_LR_OUTCOMES {
        return Err(Error::OutcomeSpaceTooLarge {
            size: n,
            max: MAX_LR_OUTCOMES,
        });
    }
    if v.n() != n || pair.0.len() != n || pair.1.len() != n {
        return Err(Error::MismatchedOutcomeSpaces);
    }
    if !is_two_alternating(u) || !is_two_alternating(v) {
        return Err(Error::NotTwoAlternating);
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::ParameterOutOfRange(step));
    }
    let levels_count = (1.0 / step).round() as usize;
    let levels: Vec<f64> = (0..=levels_count).map(|k| (k as f64 * step).min(1.0)).collect();
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(levels.len().pow(n as u32));
    let mut phi = vec![0.0; n];
    let mut digits = vec![0usize; n];
    loop {
        for i in 0..n {
            phi[i] = levels[digits[i]];
        }
        points.push(worst_case_errors(u, v, &phi));
        let mut i = 0;
        while i < n {
            digits[i] += 1;
            if digits[i] < levels.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    // Running minimum of type-II error over increasing type-I error.
    let mut prefix_min = Vec::with_capacity(points.len());
    let mut best = f64::INFINITY;
    for &(_, b) in &points {
        best = best.min(b);
        prefix_min.push(best);
    }
    let envelope_at = |alpha: f64| -> f64 {
        let idx = points.partition_point(|p| p.0 <= alpha + 1e-12);
        if idx == 0 {
            f64::INFINITY
        } else {
            prefix_min[idx - 1]
        }
    };
    let (p_star, q_star) = pair;
    let ratio: Vec<f64> = (0..n)
        .map(|i| {
            if p_star[i] > 0.0 {
                q_star[i] / p_star[i]
            } else if q_star[i] > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        })
        .collect();
    let ratio = merge_ties(&ratio);
    let mut thresholds = ratio.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let mut lr_points = Vec::new();
    for &t in &thresholds {
        for &gamma in &levels {
            let test: Vec<f64> = ratio
                .iter()
                .map(|&r| if r > t { 1.0 } else if r == t { gamma } else { 0.0 })
                .collect();
            let (a, b) = worst_case_errors(u, v, &test);
            let envelope = envelope_at(a);
            lr_points.push(LrPoint {
                threshold: t,
                gamma,
                test,
                type_one: a,
                type_two: b,
                envelope,
                gap: b - envelope,
            });
        }
    }
    let max_gap = lr_points.iter().map(|p| p.gap).fold(f64::NEG_INFINITY, f64::max);
    Ok(LrReport {
        step,
        tolerance,
        tests_enumerated: points.len(),
        within_tolerance: max_gap <= tolerance,
        lr_points,
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pmf(p: &[f64]) -> FinitePmf {
        FinitePmf::new(p.to_vec()).unwrap()
    }

    #[test]
    fn envelope_examples() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        let single = upper_envelope(&[p.clone()]).unwrap();
        assert!(single.game().additive_weights().is_some());
        let deltas = upper_envelope(&[pmf(&[1.0, 0.0]), pmf(&[0.0, 1.0])]).unwrap();
        assert_eq!(deltas.game().values(), &[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(upper_envelope(&[]), Err(Error::EmptyFamily));
        assert_eq!(
            upper_envelope(&[pmf(&[1.0]), pmf(&[0.5, 0.5])]),
            Err(Error::MismatchedOutcomeSpaces)
        );
    }

    #[test]
    fn contamination_values() {
        let cap = contamination_capacity(&pmf(&[1.0 / 3.0; 3]), 0.1).unwrap();
        assert!((cap.value(Coalition(0b001)) - 0.4).abs() < 1e-15);
        assert!(is_two_alternating(&cap));
        assert!(capacity_core_contains(&pmf(&[1.0 / 3.0; 3]), &cap).unwrap());
        assert_eq!(tv_capacity(&pmf(&[0.5, 0.5]), 1.0), Err(Error::ParameterOutOfRange(1.0)));
        let zero = contamination_capacity(&pmf(&[0.25, 0.75]), 0.0).unwrap();
        assert!(zero.game().additive_weights().is_some());
    }

    #[test]
    fn rejects_non_capacities() {
        assert_eq!(Capacity::from_values(vec![0.0, 0.5, 0.5, 0.9]), Err(Error::NotACapacity));
        assert_eq!(Capacity::from_values(vec![0.0, 1.0, 0.5, 0.9]), Err(Error::NotACapacity));
    }

    #[test]
    fn singleton_cores_give_their_divergence() {
        let p = pmf(&[0.5, 0.5]);
        let q = pmf(&[0.25, 0.75]);
        let lfp = least_favorable_pair(&Capacity::additive(&p), &Capacity::additive(&q), &LfpOptions::default()).unwrap();
        let expected = 0.5 * (0.5f64 / 0.25).log2() + 0.5 * (0.5f64 / 0.75).log2();
        assert!((lfp.divergence - expected).abs() < 1e-12);
        assert!(lfp.converged);
    }

    #[test]
    fn identical_capacities_have_zero_divergence() {
        let cap = contamination_capacity(&pmf(&[0.6, 0.3, 0.1]), 0.1).unwrap();
        let lfp = least_favorable_pair(&cap, &cap, &LfpOptions::default()).unwrap();
        assert!(lfp.divergence.abs() < 1e-12);
        assert_eq!(lfp.p, lfp.q);
    }

    #[test]
    fn disjoint_supports_are_infinite() {
        let u = Capacity::additive(&pmf(&[1.0, 0.0]));
        let v = Capacity::additive(&pmf(&[0.0, 1.0]));
        assert_eq!(
            least_favorable_pair(&u, &v, &LfpOptions::default()),
            Err(Error::DivergenceInfinite)
        );
    }

    #[test]
    fn divergence_history_is_monotone() {
        let u = contamination_capacity(&pmf(&[0.6, 0.3, 0.1]), 0.1).unwrap();
        let v = contamination_capacity(&pmf(&[0.1, 0.3, 0.6]), 0.1).unwrap();
        let lfp = least_favorable_pair(&u, &v, &LfpOptions::default()).unwrap();
        assert!(lfp.history.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        assert!(u.game().aspiration_contains(&lfp.p).unwrap());
        assert!(v.game().aspiration_contains(&lfp.q).unwrap());
        assert!(lfp.converged);
    }

    #[test]
    fn nearly_equal_ratios_are_tied() {
        let merged = merge_ties(&[1.3636363637, 2.0, 1.3636363635, f64::INFINITY, f64::INFINITY]);
        assert_eq!(merged, vec![1.3636363635, 2.0, 1.3636363635, f64::INFINITY, f64::INFINITY]);
    }

    #[test]
    fn identical_capacities_have_total_error_at_least_one() {
        let cap = tv_capacity(&pmf(&[0.5, 0.3, 0.2]), 0.1).unwrap();
        let report = minimax_lr_check(&cap, &cap, (&[0.5, 0.3, 0.2], &[0.5, 0.3, 0.2]), 0.25, 0.02).unwrap();
        assert!(report.tests_enumerated == 125);
        let mut phi = [0.0; 3];
        for a in 0..5 {
            for b in 0..5 {
                phi[0] = a as f64 / 4.0;
                phi[1] = b as f64 / 4.0;
                let (x, y) = worst_case_errors(&cap, &cap, &phi);
                assert!(x + y >= 1.0 - 1e-12);
            }
        }
    }
}
