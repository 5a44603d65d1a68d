//! Pitman minimax risk for a location parameter and the distributed
//! estimation game.
//!
//! Observations are `Y_j = θ + W_j`, `j = 1..M`, with i.i.d. noise of density
//! `f`. Under a flat prior the posterior mean is the Pitman estimator, whose
//! risk is the same for every `θ` and equals `E[Var(θ | Y)]`. Writing
//! `S_k(d) = ∫ θ^k f(-θ) Π_{j>=2} f(d_j - θ) dθ`, translation invariance gives
//!
//! `risk = ∫ (S_2(d) - S_1(d)² / S_0(d)) dd`
//!
//! over the `M - 1` differences `d_j = y_j - y_1`. Everything is evaluated
//! with the trapezoid rule on one tabulated copy of `f`, so inner values
//! are table lookups.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Game, Orientation};

/// Largest supported sample size.
pub const MAX_SAMPLE_SIZE: usize = 3;
/// Tolerance recorded on distributed estimation games.
pub const DE_TOLERANCE: f64 = 5e-3;
/// Mass tolerance for tabulated densities.
pub const GRID_MASS_TOLERANCE: f64 = 1e-6;

/// A noise density on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DensitySpec {
    /// Centred Gaussian.
    Gaussian { var: f64 },
    Uniform { a: f64, b: f64 },
    /// Piecewise-linear density through `(start + k·step, values[k])`.
    Grid { start: f64, step: f64, values: Vec<f64> },
    /// Density of the sum of independent components.
    #[serde(rename = "sum")]
    SumOf { components: Vec<DensitySpec> },
}

/// Quadrature resolution. `theta_points` samples the noise density,
/// `sample_points` is the per-axis size of the outer grid over differences,
/// and `k` the Gaussian truncation in standard deviations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub k: f64,
    pub theta_points: usize,
    pub sample_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            k: 8.0,
            theta_points: 2001,
            sample_points: 401,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, count) in [("theta_points", self.theta_points), ("sample_points", self.sample_points)] {
            if count < 3 || count % 2 == 0 {
                return Err(Error::InvalidQuadrature(format!("{name} must be odd and at least 3")));
            }
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::InvalidQuadrature("k must be positive".into()));
        }
        Ok(())
    }

    /// The same rule at half resolution, used for the error estimate.
    pub fn coarse(&self) -> Self {
        QuadratureSpec {
            k: self.k,
            theta_points: (self.theta_points + 1) / 2,
            sample_points: (self.sample_points + 1) / 2,
        }
    }
}

/// Samples of a density at `lo + i·h`. Support endpoints hold half the
/// density there (the midpoint value at a jump), so plain Riemann sums
/// integrate tables exactly for piecewise-constant densities.
#[derive(Debug, Clone)]
struct Table {
    lo: f64,
    h: f64,
    values: Vec<f64>,
}

fn trapezoid_weight(i: usize, len: usize) -> f64 {
    if i == 0 || i + 1 == len {
        0.5
    } else {
        1.0
    }
}

impl Table {
    fn mass(&self) -> f64 {
        self.h * self.values.iter().sum::<f64>()
    }

    fn normalized(mut self) -> Result<Self> {
        let mass = self.mass();
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidDensity("density has no mass on its grid".into()));
        }
        self.values.iter_mut().for_each(|v| *v /= mass);
        Ok(self)
    }
}

impl DensitySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DensitySpec::Gaussian { var } => {
                if !(var.is_finite() && *var > 0.0) {
                    return Err(Error::InvalidDensity("gaussian variance must be positive".into()));
                }
            }
            DensitySpec::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::InvalidDensity("uniform needs a < b".into()));
                }
            }
            DensitySpec::Grid { start, step, values } => {
                if !(start.is_finite() && step.is_finite() && *step > 0.0) || values.len() < 2 {
                    return Err(Error::InvalidDensity("grid needs a positive step and two values".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InfiniteVariance);
                }
                if values.iter().any(|v| *v < 0.0) {
                    return Err(Error::InvalidDensity("grid values must be nonnegative".into()));
                }
                let mass: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| trapezoid_weight(i, values.len()) * v * step)
                    .sum();
                if (mass - 1.0).abs() > GRID_MASS_TOLERANCE {
                    return Err(Error::InvalidDensity("grid density must integrate to 1".into()));
                }
                let second: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let x = start + i as f64 * step;
                        trapezoid_weight(i, values.len()) * v * x * x * step
                    })
                    .sum();
                if !second.is_finite() {
                    return Err(Error::InfiniteVariance);
                }
            }
            DensitySpec::SumOf { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidDensity("sum needs at least one component".into()));
                }
                components.iter().try_for_each(DensitySpec::validate)?;
            }
        }
        Ok(())
    }

    /// Flattens nested sums and merges Gaussian components.
    fn leaves(&self) -> Vec<DensitySpec> {
        match self {
            DensitySpec::SumOf { components } => {
                let mut gaussian_var = 0.0;
                let mut has_gaussian = false;
                let mut out = Vec::new();
                for leaf in components.iter().flat_map(DensitySpec::leaves) {
                    match leaf {
                        DensitySpec::Gaussian { var } => {
                            gaussian_var += var;
                            has_gaussian = true;
                        }
                        other => out.push(other),
                    }
                }
                if has_gaussian {
                    out.insert(0, DensitySpec::Gaussian { var: gaussian_var });
                }
                out
            }
            other => vec![other.clone()],
        }
    }

    /// Variance when every leaf is Gaussian.
    pub fn gaussian_variance(&self) -> Option<f64> {
        match self.leaves().as_slice() {
            [DensitySpec::Gaussian { var }] => Some(*var),
            _ => None,
        }
    }

    /// Support used for tabulation (Gaussians truncated at `k` deviations).
    fn range(&self, k: f64) -> (f64, f64) {
        match self {
            DensitySpec::Gaussian { var } => (-k * var.sqrt(), k * var.sqrt()),
            DensitySpec::Uniform { a, b } => (*a, *b),
            DensitySpec::Grid { start, step, values } => (*start, start + step * (values.len() - 1) as f64),
            DensitySpec::SumOf { .. } => self.leaves().iter().fold((0.0, 0.0), |(lo, hi), leaf| {
                let (a, b) = leaf.range(k);
                (lo + a, hi + b)
            }),
        }
    }

    /// Pointwise density of a leaf.
    fn pdf(&self, x: f64) -> f64 {
        match self {
            DensitySpec::Gaussian { var } => {
                (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
            }
            DensitySpec::Uniform { a, b } => {
                if x >= *a && x <= *b {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            DensitySpec::Grid { start, step, values } => {
                let t = (x - start) / step;
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let i = (t.floor() as usize).min(values.len() - 2);
                let frac = t - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
            DensitySpec::SumOf { .. } => unreachable!("sums are tabulated by convolution"),
        }
    }

    fn tabulate(&self, points: usize, k: f64) -> Result<Table> {
        let leaves = self.leaves();
        if let [leaf] = leaves.as_slice() {
            let (lo, hi) = leaf.range(k);
            let h = (hi - lo) / (points - 1) as f64;
            let values = (0..points)
                .map(|i| leaf.pdf(lo + i as f64 * h) * trapezoid_weight(i, points))
                .collect();
            return Table { lo, h, values }.normalized();
        }
        let (lo, hi) = self.range(k);
        let h = (hi - lo) / (points - 1) as f64;
        let mut acc: Option<Table> = None;
        for leaf in &leaves {
            let (a, b) = leaf.range(k);
            let steps = (((b - a) / h) - 1e-9).ceil().max(1.0) as usize;
            let next = match acc {
                None => {
                    let step = (b - a) / steps as f64;
                    Table {
                        lo: a,
                        h: step,
                        values: (0..=steps)
                            .map(|i| leaf.pdf(a + i as f64 * step) * trapezoid_weight(i, steps + 1))
                            .collect(),
                    }
                }
                Some(prev) => {
                    // Both factors carry halved endpoint samples (the midpoint
                    // value at a jump), so a plain Riemann sum is used.
                    let prev = resample(&prev, h);
                    let component: Vec<f64> = (0..=steps)
                        .map(|i| leaf.pdf(a + i as f64 * h) * trapezoid_weight(i, steps + 1))
                        .collect();
                    let mut values = vec![0.0; prev.values.len() + component.len() - 1];
                    for (i, &p) in prev.values.iter().enumerate() {
                        if p == 0.0 {
                            continue;
                        }
                        for (j, &c) in component.iter().enumerate() {
                            values[i + j] += p * c * h;
                        }
                    }
                    Table {
                        lo: prev.lo + a,
                        h,
                        values,
                    }
                }
            };
            acc = Some(next);
        }
        acc.expect("sum has components").normalized()
    }
}

/// Linear interpolation of `t` onto step `h`, starting at the same point.
fn resample(t: &Table, h: f64) -> Table {
    if (t.h - h).abs() <= 1e-15 * h.abs() {
        return t.clone();
    }
    let width = t.h * (t.values.len() - 1) as f64;
    let steps = ((width / h) - 1e-9).ceil().max(1.0) as usize;
    let values = (0..=steps)
        .map(|i| {
            let x = i as f64 * h / t.h;
            let j = (x.floor() as usize).min(t.values.len() - 2);
            let frac = (x - j as f64).min(1.0);
            if x > (t.values.len() - 1) as f64 {
                0.0
            } else {
                t.values[j] * (1.0 - frac) + t.values[j + 1] * frac
            }
        })
        .collect();
    Table { lo: t.lo, h, values }
}

/// A risk value with an error estimate from halving the resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PitmanRisk {
    pub risk: f64,
    pub error_bound: f64,
}

fn risk_on_table(table: &Table, m: usize, sample_points: usize) -> f64 {
    let len = table.values.len();
    let t = len - 1;
    let f = &table.values;
    let h = table.h;
    // θ_k = -(lo + (t - k) h), shifted by the centre for numerical stability.
    let centre = table.lo + 0.5 * t as f64 * h;
    let theta = |k: usize| -(table.lo + (t - k) as f64 * h) + centre;
    let inner = |offsets: &[isize]| -> f64 {
        let lo_k = offsets.iter().fold(0isize, |acc, &o| acc.max(o)).max(0) as usize;
        let hi_k = offsets.iter().fold(t as isize, |acc, &o| acc.min(t as isize + o)).min(t as isize);
        if hi_k < lo_k as isize {
            return 0.0;
        }
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for k in lo_k..=hi_k as usize {
            let mut w = f[t - k];
            for &o in offsets {
                w *= f[(t as isize + o - k as isize) as usize];
            }
            if w == 0.0 {
                continue;
            }
            let th = theta(k);
            s0 += w;
            s1 += w * th;
            s2 += w * th * th;
        }
        if s0 <= 0.0 {
            return 0.0;
        }
        h * (s2 - s1 * s1 / s0)
    };
    if m == 1 {
        return inner(&[]);
    }
    let stride = (2 * t).div_ceil(sample_points - 1).max(1);
    let reach = t.div_ceil(stride) as isize;
    let outer: Vec<(isize, f64)> = (-reach..=reach)
        .map(|j| {
            let w = if j == -reach || j == reach { 0.5 } else { 1.0 };
            (j * stride as isize, w * stride as f64 * h)
        })
        .collect();
    match m {
        2 => outer.iter().map(|&(o, w)| w * inner(&[o])).sum(),
        _ => outer
            .iter()
            .map(|&(o1, w1)| {
                outer
                    .iter()
                    .map(|&(o2, w2)| w1 * w2 * inner(&[o1, o2]))
                    .sum::<f64>()
            })
            .sum(),
    }
}

/// Risk of the Pitman estimator from `m` observations with noise `f`.
pub fn pitman_risk(f: &DensitySpec, m: usize, q: &QuadratureSpec) -> Result<PitmanRisk> {
    if m == 0 || m > MAX_SAMPLE_SIZE {
        return Err(Error::UnsupportedSampleSize(m));
    }
    f.validate()?;
    q.validate()?;
    let fine = risk_on_table(&f.tabulate(q.theta_points, q.k)?, m, q.sample_points);
    let c = q.coarse();
    let coarse = risk_on_table(&f.tabulate(c.theta_points, c.k)?, m, c.sample_points);
    Ok(PitmanRisk {
        risk: fine,
        error_bound: (fine - coarse).abs(),
    })
}

/// Cost game `v(s) =` Pitman risk of `m` observations corrupted by the sum of
/// the noises in `s`. Coalitions with only Gaussian noise use the closed
/// form `Σ σ_i² / m`. The game carries tolerance [`DE_TOLERANCE`].
pub fn de_game(sources: &[DensitySpec], m: usize, q: &QuadratureSpec) -> Result<Game<f64>> {
    Ok(de_game_with_bounds(sources, m, q)?.0)
}

/// [`de_game`] together with the per-coalition quadrature error estimates.
pub fn de_game_with_bounds(sources: &[DensitySpec], m: usize, q: &QuadratureSpec) -> Result<(Game<f64>, Vec<f64>)> {
    let n = sources.len();
    if n == 0 || n > crate::game::MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: crate::game::MAX_PLAYERS,
        });
    }
    if m == 0 || m > MAX_SAMPLE_SIZE {
        return Err(Error::UnsupportedSampleSize(m));
    }
    sources.iter().try_for_each(DensitySpec::validate)?;
    q.validate()?;
    let mut values = vec![0.0; 1 << n];
    let mut bounds = vec![0.0; 1 << n];
    for s in Coalition::nonempty(n) {
        let sum = DensitySpec::SumOf {
            components: s.players().map(|i| sources[i].clone()).collect(),
        };
        if let Some(var) = sum.gaussian_variance() {
            values[s.bits()] = var / m as f64;
        } else {
            let r = pitman_risk(&sum, m, q)?;
            values[s.bits()] = r.risk;
            bounds[s.bits()] = r.error_bound;
        }
    }
    let game = Game::from_float_values(n, Orientation::Cost, values)?.with_tolerance(DE_TOLERANCE);
    Ok((game, bounds))
}
