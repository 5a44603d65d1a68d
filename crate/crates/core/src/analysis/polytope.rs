//! Vertex enumeration for small polyhedra `{x : a_k·x (<=|>=|=) b_k}`.
//!
//! Every choice of `dim` linearly independent tight constraints (always
//! including the equalities) yields a candidate point; the feasible ones are
//! the vertices. This is exponential and meant for `dim <= 5`.
//!
//! In exact arithmetic the search runs in `f64` first (with a loose
//! tolerance, so it over-approximates); each candidate is then recomputed
//! exactly from its tight constraints and kept only if exactly feasible.

use crate::lp::{Constraint, Relation};
use crate::scalar::{le_tol, ModeKind, Scalar};

/// Reduced row-echelon rows, each augmented with its right-hand side.
#[derive(Clone)]
struct Echelon<T> {
    dim: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Echelon<T> {
    fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    /// Adds `row` (length `dim + 1`); `false` if it is dependent on the rows
    /// already present.
    fn push(&mut self, mut row: Vec<T>, eps: &T) -> bool {
        for (pivot, existing) in &self.rows {
            let factor = row[*pivot].clone();
            if !factor.is_zero() {
                for (x, e) in row.iter_mut().zip(existing) {
                    *x = x.clone() - factor.clone() * e.clone();
                }
            }
        }
        let Some(pivot) = (0..self.dim).find(|&j| row[j].abs() > *eps) else {
            return false;
        };
        let lead = row[pivot].clone();
        for x in row.iter_mut() {
            *x = x.clone() / lead.clone();
        }
        for (_, existing) in self.rows.iter_mut() {
            let factor = existing[pivot].clone();
            if !factor.is_zero() {
                for (e, x) in existing.iter_mut().zip(&row) {
                    *e = e.clone() - factor.clone() * x.clone();
                }
            }
        }
        self.rows.push((pivot, row));
        true
    }

    fn solution(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.dim];
        for (pivot, row) in &self.rows {
            x[*pivot] = row[self.dim].clone();
        }
        x
    }
}

fn satisfies<T: Scalar>(c: &Constraint<T>, x: &[T], tol: &T) -> bool {
    let lhs: T = c.coeffs.iter().zip(x).map(|(a, b)| a.clone() * b.clone()).sum();
    match c.relation {
        Relation::Le => le_tol(&lhs, &c.rhs, tol),
        Relation::Ge => le_tol(&c.rhs, &lhs, tol),
        Relation::Eq => le_tol(&lhs, &c.rhs, tol) && le_tol(&c.rhs, &lhs, tol),
    }
}

fn augmented<T: Scalar>(c: &Constraint<T>) -> Vec<T> {
    let mut row = c.coeffs.clone();
    row.push(c.rhs.clone());
    row
}

fn same_point<T: Scalar>(a: &[T], b: &[T], tol: &T) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).abs() <= *tol)
}

/// All vertices of the polyhedron, without duplicates, in discovery order.
/// Returns an empty list when the equalities are inconsistent or the
/// polyhedron has no vertex.
pub fn enumerate_vertices<T: Scalar>(dim: usize, constraints: &[Constraint<T>], tol: &T) -> Vec<Vec<T>> {
    if T::KIND == ModeKind::Rational {
        exact_from_float(dim, constraints, tol)
    } else {
        enumerate_direct(dim, constraints, tol)
    }
}

/// Tolerance of the floating-point pre-pass in exact mode.
const GUIDE_TOLERANCE: f64 = 1e-7;

fn exact_from_float<T: Scalar>(dim: usize, constraints: &[Constraint<T>], tol: &T) -> Vec<Vec<T>> {
    let approx: Vec<Constraint<f64>> = constraints
        .iter()
        .map(|c| Constraint {
            coeffs: c.coeffs.iter().map(Scalar::to_f64).collect(),
            relation: c.relation,
            rhs: c.rhs.to_f64(),
        })
        .collect();
    let eps = T::pivot_epsilon();
    let mut out: Vec<Vec<T>> = Vec::new();
    for guess in enumerate_direct(dim, &approx, &GUIDE_TOLERANCE) {
        let mut system = Echelon::new(dim);
        let tight = constraints.iter().zip(&approx).filter(|(_, a)| {
            let lhs: f64 = a.coeffs.iter().zip(&guess).map(|(x, y)| x * y).sum();
            (lhs - a.rhs).abs() <= 10.0 * GUIDE_TOLERANCE * (1.0 + a.rhs.abs())
        });
        for (c, _) in tight {
            if system.rows.len() == dim {
                break;
            }
            system.push(augmented(c), &eps);
        }
        if system.rows.len() < dim {
            continue;
        }
        let x = system.solution();
        if constraints.iter().all(|c| satisfies(c, &x, tol)) && !out.iter().any(|v| same_point(v, &x, tol)) {
            out.push(x);
        }
    }
    out
}

fn enumerate_direct<T: Scalar>(dim: usize, constraints: &[Constraint<T>], tol: &T) -> Vec<Vec<T>> {
    let eps = T::pivot_epsilon();
    let mut base = Echelon::new(dim);
    for c in constraints.iter().filter(|c| c.relation == Relation::Eq) {
        // Inconsistent equalities surface as infeasible candidates below.
        base.push(augmented(c), &eps);
    }
    let inequalities: Vec<&Constraint<T>> = constraints.iter().filter(|c| c.relation != Relation::Eq).collect();
    let mut vertices: Vec<Vec<T>> = Vec::new();
    let need = dim.saturating_sub(base.rows.len());

    #[allow(clippy::too_many_arguments)]
    fn rec<T: Scalar>(
        start: usize,
        need: usize,
        state: &Echelon<T>,
        inequalities: &[&Constraint<T>],
        all: &[Constraint<T>],
        eps: &T,
        tol: &T,
        out: &mut Vec<Vec<T>>,
    ) {
        if need == 0 {
            let x = state.solution();
            if all.iter().all(|c| satisfies(c, &x, tol)) && !out.iter().any(|v| same_point(v, &x, tol)) {
                out.push(x);
            }
            return;
        }
        for k in start..inequalities.len() {
            if inequalities.len() - k < need {
                break;
            }
            let mut next = state.clone();
            if next.push(augmented(inequalities[k]), eps) {
                rec(k + 1, need - 1, &next, inequalities, all, eps, tol, out);
            }
        }
    }

    rec(0, need, &base, &inequalities, constraints, &eps, tol, &mut vertices);
    vertices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn c(coeffs: &[i64], relation: Relation, rhs: i64) -> Constraint<Rational> {
        Constraint {
            coeffs: coeffs.iter().map(|&a| Rational::from_ratio(a, 1)).collect(),
            relation,
            rhs: Rational::from_ratio(rhs, 1),
        }
    }

    #[test]
    fn unit_square_has_four_vertices() {
        let cs = vec![
            c(&[1, 0], Relation::Ge, 0),
            c(&[0, 1], Relation::Ge, 0),
            c(&[1, 0], Relation::Le, 1),
            c(&[0, 1], Relation::Le, 1),
        ];
        let vs = enumerate_vertices(2, &cs, &Rational::from_ratio(0, 1));
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn simplex_slice_with_equality() {
        let cs = vec![
            c(&[1, 1, 1], Relation::Eq, 1),
            c(&[1, 0, 0], Relation::Ge, 0),
            c(&[0, 1, 0], Relation::Ge, 0),
            c(&[0, 0, 1], Relation::Ge, 0),
        ];
        let vs = enumerate_vertices(3, &cs, &Rational::from_ratio(0, 1));
        assert_eq!(vs.len(), 3);
    }

    #[test]
    fn degenerate_apex_is_reported_once() {
        let cs = vec![
            c(&[1, 0], Relation::Ge, 0),
            c(&[0, 1], Relation::Ge, 0),
            c(&[1, 1], Relation::Ge, 0),
            c(&[1, 1], Relation::Le, 1),
        ];
        let vs = enumerate_vertices(2, &cs, &Rational::from_ratio(0, 1));
        assert_eq!(vs.len(), 3);
    }

    #[test]
    fn exact_and_direct_enumeration_agree() {
        let cs = vec![
            c(&[1, 0, 0], Relation::Ge, 0),
            c(&[0, 1, 0], Relation::Ge, 0),
            c(&[0, 0, 1], Relation::Ge, 0),
            c(&[1, 1, 0], Relation::Ge, 3),
            c(&[0, 1, 1], Relation::Ge, 2),
            c(&[1, 0, 1], Relation::Ge, 2),
            c(&[1, 1, 1], Relation::Le, 7),
        ];
        let zero = Rational::from_ratio(0, 1);
        let mut exact = enumerate_vertices(3, &cs, &zero);
        let mut direct = enumerate_direct(3, &cs, &zero);
        exact.sort();
        direct.sort();
        assert_eq!(exact, direct);
        assert!(exact.contains(&vec![Rational::from_ratio(3, 2), Rational::from_ratio(3, 2), Rational::from_ratio(1, 2)]));
    }

    #[test]
    fn inconsistent_equalities_give_nothing() {
        let cs = vec![c(&[1, 1], Relation::Eq, 1), c(&[1, 1], Relation::Eq, 2), c(&[1, 0], Relation::Ge, 0)];
        assert!(enumerate_vertices(2, &cs, &Rational::from_ratio(0, 1)).is_empty());
    }
}
