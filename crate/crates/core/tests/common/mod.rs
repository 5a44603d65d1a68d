//! Independent oracles shared by integration tests.

#![allow(dead_code)]

use coopinfo::analysis::enumerate_minimal_balanced_collections;
use coopinfo::capacity::{kl_divergence, Capacity};
use coopinfo::{Coalition, Game, Orientation, Rational};

/// Core points of a capacity on three outcomes on the grid of step `1/grid`.
pub fn grid_core(cap: &Capacity, grid: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for i in 0..=grid {
        for j in 0..=grid - i {
            let p = [i as f64 / grid as f64, j as f64 / grid as f64, (grid - i - j) as f64 / grid as f64];
            let inside = Coalition::nonempty(3).all(|a| {
                let mass: f64 = a.players().map(|k| p[k]).sum();
                mass <= cap.value(a) + 1e-12
            });
            if inside {
                out.push(p);
            }
        }
    }
    out
}

/// Smallest `D(P ‖ Q)` over grid points of the two cores.
pub fn grid_minimum(u: &Capacity, v: &Capacity, grid: usize) -> f64 {
    let ps = grid_core(u, grid);
    let qs = grid_core(v, grid);
    let mut best = f64::INFINITY;
    for p in &ps {
        for q in &qs {
            best = best.min(kl_divergence(p, q));
        }
    }
    best
}

/// Balancedness decided by the inequalities `Σ α(s) v(s) <= v([n])` (cost)
/// or `>=` (resource) over every minimal balanced collection.
pub fn balanced_by_collections(game: &Game<Rational>) -> bool {
    let grand = game.grand_value().clone();
    enumerate_minimal_balanced_collections(game.n())
        .unwrap()
        .iter()
        .all(|fp| {
            let total: Rational = fp
                .sets
                .iter()
                .zip(&fp.weights)
                .map(|(s, w)| w * game.value(*s))
                .sum();
            match game.orientation() {
                Orientation::Cost => total <= grand,
                Orientation::Resource => total >= grand,
            }
        })
}

/// `ν(A ∪ B) + ν(A ∩ B) <= ν(A) + ν(B)` over every pair of events.
pub fn two_alternating_by_pairs(cap: &Capacity) -> bool {
    let n = cap.n();
    Coalition::all(n).all(|a| {
        Coalition::all(n).all(|b| {
            cap.value(a.union(b)) + cap.value(a.intersection(b)) <= cap.value(a) + cap.value(b) + 1e-12
        })
    })
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}
