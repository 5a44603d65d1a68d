//! Least favourable pairs and robust tests checked against grid oracles.

use coopinfo::capacity::{
    contamination_capacity, core_vertices, kl_divergence, least_favorable_pair, minimax_lr_check,
    tv_capacity, upper_envelope, Capacity, DivergenceDirection, FinitePmf, LfpOptions,
};
use coopinfo::Coalition;

mod common;

const GRID: usize = 600;

fn grid_minimum(u: &Capacity, v: &Capacity) -> f64 {
    common::grid_minimum(u, v, GRID)
}

fn pmf(p: &[f64]) -> FinitePmf {
    FinitePmf::new(p.to_vec()).unwrap()
}

#[test]
fn contamination_pair_matches_grid() {
    let u = contamination_capacity(&pmf(&[0.6, 0.3, 0.1]), 0.1).unwrap();
    let v = contamination_capacity(&pmf(&[0.1, 0.3, 0.6]), 0.1).unwrap();
    let lfp = least_favorable_pair(&u, &v, &LfpOptions::default()).unwrap();
    let grid = grid_minimum(&u, &v);
    assert!(lfp.divergence <= grid + 1e-9, "{} vs {grid}", lfp.divergence);
    assert!((lfp.divergence - grid).abs() <= 1e-3, "{} vs {grid}", lfp.divergence);
}

#[test]
fn total_variation_pair_matches_grid_in_both_directions() {
    let u = tv_capacity(&pmf(&[0.5, 0.4, 0.1]), 0.05).unwrap();
    let v = tv_capacity(&pmf(&[0.2, 0.3, 0.5]), 0.05).unwrap();
    let forward = least_favorable_pair(&u, &v, &LfpOptions::default()).unwrap();
    let grid = grid_minimum(&u, &v);
    assert!((forward.divergence - grid).abs() <= 1e-3, "{} vs {grid}", forward.divergence);
    assert!(forward.converged, "{} iterations", forward.iterations);
    let opts = LfpOptions {
        direction: DivergenceDirection::Reverse,
        ..LfpOptions::default()
    };
    let reverse = least_favorable_pair(&u, &v, &opts).unwrap();
    let grid_reverse = grid_minimum(&v, &u);
    assert!((reverse.divergence - grid_reverse).abs() <= 1e-3);
    assert!((kl_divergence(&reverse.q, &reverse.p) - reverse.divergence).abs() < 1e-12);
}

#[test]
fn likelihood_ratio_tests_trace_the_envelope() {
    let u = contamination_capacity(&pmf(&[0.6, 0.3, 0.1]), 0.1).unwrap();
    let v = contamination_capacity(&pmf(&[0.1, 0.3, 0.6]), 0.1).unwrap();
    let lfp = least_favorable_pair(&u, &v, &LfpOptions::default()).unwrap();
    let report = minimax_lr_check(&u, &v, (&lfp.p, &lfp.q), 0.05, 0.02).unwrap();
    assert_eq!(report.tests_enumerated, 21usize.pow(3));
    assert!(report.within_tolerance, "max gap {}", report.max_gap);
}

#[test]
fn singleton_cores_reduce_to_neyman_pearson() {
    let p = pmf(&[0.5, 0.3, 0.2]);
    let q = pmf(&[0.1, 0.3, 0.6]);
    let u = Capacity::additive(&p);
    let v = Capacity::additive(&q);
    let report = minimax_lr_check(&u, &v, (p.probs(), q.probs()), 0.05, 0.0).unwrap();
    assert!(report.max_gap <= 1e-12, "max gap {}", report.max_gap);
}

#[test]
fn envelope_of_core_vertices_reproduces_capacity() {
    let cap = contamination_capacity(&pmf(&[0.4, 0.35, 0.25]), 0.2).unwrap();
    let vertices: Vec<FinitePmf> = core_vertices(&cap)
        .unwrap()
        .into_iter()
        .map(|v| FinitePmf::new(v).unwrap())
        .collect();
    let rebuilt = upper_envelope(&vertices).unwrap();
    for a in Coalition::all(3) {
        assert!((rebuilt.value(a) - cap.value(a)).abs() < 1e-12);
    }
}
