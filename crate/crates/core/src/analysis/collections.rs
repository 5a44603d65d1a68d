//! Minimal balanced collections.
//!
//! A collection of nonempty coalitions is balanced when some strictly
//! positive weights make it a fractional partition, and minimal when no
//! proper subcollection is balanced. Minimal balanced collections are
//! exactly the balanced collections with linearly independent incidence
//! vectors, so they have at most `n` members and unique weights.

use num_traits::{Signed, Zero};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::FractionalPartition;
use crate::scalar::{Rational, Scalar};

/// Largest player count accepted by the enumeration.
pub const MAX_COLLECTION_PLAYERS: usize = 4;

/// Solves `Σ_k α_k 1_{s_k} = 1` exactly. `None` unless the incidence vectors
/// are independent and the system is consistent.
fn unique_weights(n: usize, sets: &[Coalition]) -> Option<Vec<Rational>> {
    let k = sets.len();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = sets
                .iter()
                .map(|s| if s.contains(i) { Rational::from_ratio(1, 1) } else { Rational::zero() })
                .collect();
            row.push(Rational::from_ratio(1, 1));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(k);
    for col in 0..k {
        let found = (pivot_row..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, found);
        let lead = rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = x.clone() / lead.clone();
        }
        for r in 0..n {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_vals = rows[pivot_row].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_vals) {
                    *x = x.clone() - factor.clone() * p;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][k].clone()).collect())
}

/// Every minimal balanced collection on `n <= 4` players with its unique
/// weights, ordered by size and then lexicographically by bitmask.
pub fn enumerate_minimal_balanced_collections(n: usize) -> Result<Vec<FractionalPartition<Rational>>> {
    if n == 0 || n > MAX_COLLECTION_PLAYERS {
        return Err(Error::TooManyPlayers {
            n,
            max: MAX_COLLECTION_PLAYERS,
        });
    }
    let coalitions: Vec<Coalition> = Coalition::nonempty(n).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    for size in 1..=n {
        combinations(&coalitions, size, 0, &mut current, &mut |sets| {
            if let Some(weights) = unique_weights(n, sets) {
                if weights.iter().all(Signed::is_positive) {
                    out.push(FractionalPartition::new(sets.to_vec(), weights).expect("validated weights"));
                }
            }
        });
    }
    Ok(out)
}

fn combinations(
    items: &[Coalition],
    size: usize,
    start: usize,
    current: &mut Vec<Coalition>,
    visit: &mut dyn FnMut(&[Coalition]),
) {
    if current.len() == size {
        visit(current);
        return;
    }
    for k in start..items.len() {
        if items.len() - k < size - current.len() {
            break;
        }
        current.push(items[k]);
        combinations(items, size, k + 1, current, visit);
        current.pop();
    }
}

/// Converts rational weights into another backend.
pub fn convert_partition<T: Scalar>(p: &FractionalPartition<Rational>) -> FractionalPartition<T> {
    FractionalPartition {
        sets: p.sets.clone(),
        weights: p.weights.iter().map(T::from_rational).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_minimal_balanced_collections(1).unwrap().len(), 1);
        assert_eq!(enumerate_minimal_balanced_collections(2).unwrap().len(), 2);
        assert_eq!(enumerate_minimal_balanced_collections(3).unwrap().len(), 6);
        assert_eq!(enumerate_minimal_balanced_collections(4).unwrap().len(), 42);
        assert!(enumerate_minimal_balanced_collections(5).is_err());
    }

    #[test]
    fn three_player_pairs_get_half_weights() {
        let all = enumerate_minimal_balanced_collections(3).unwrap();
        let pairs = all
            .iter()
            .find(|c| c.sets == vec![Coalition(0b011), Coalition(0b101), Coalition(0b110)])
            .expect("pairs collection present");
        assert!(pairs.weights.iter().all(|w| *w == Rational::from_ratio(1, 2)));
    }

    #[test]
    fn every_collection_is_a_partition() {
        for n in 1..=4 {
            for c in enumerate_minimal_balanced_collections(n).unwrap() {
                assert!(c.is_fractional_partition(n, &Rational::zero()).unwrap());
            }
        }
    }
}
