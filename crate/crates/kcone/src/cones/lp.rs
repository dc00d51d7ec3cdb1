//! Cone membership by exact phase-one simplex, with self-validating
//! certificates: a nonnegative combination on success, a separating
//! covector on failure.

use num_traits::{One, Signed, Zero};

use crate::arith::{QMat, QVec, Rat};
use crate::error::{Error, Result};

use super::PairingForm;

/// Outcome of a membership test. Exactly one of the certificates is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// x = sum coefficients[i] * rays[i] with all coefficients >= 0.
    Inside { coefficients: Vec<Rat> },
    /// <separator, ray_i> >= 0 for every generator while <separator, x> < 0,
    /// under the form the test was run with.
    Outside { separator: QVec },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Decides x in cone(rays) and produces a certificate either way.
pub fn cone_member(x: &[Rat], rays: &[QVec], form: PairingForm) -> Result<Membership> {
    if rays.is_empty() {
        return Err(Error::Degenerate);
    }
    let dim = x.len();
    if rays.iter().any(|r| r.len() != dim) {
        return Err(Error::Malformed("generator dimension mismatch".into()));
    }

    match feasible_combination(x, rays) {
        FeasibilityOutcome::Feasible(coefficients) => {
            debug_assert!({
                let mut acc = vec![Rat::zero(); dim];
                for (c, r) in coefficients.iter().zip(rays) {
                    for (slot, v) in acc.iter_mut().zip(r) {
                        *slot += c * v;
                    }
                }
                acc.as_slice() == x
            });
            Ok(Membership::Inside { coefficients })
        }
        FeasibilityOutcome::Infeasible(dual) => {
            // dual·ray_i <= 0 for all i and dual·x > 0; the separator under
            // the requested form is s with G s = -dual.
            let separator = match form {
                PairingForm::Euclidean => dual.iter().map(|v| -v.clone()).collect::<QVec>(),
                PairingForm::Picard => {
                    assert_eq!(dim, crate::lattice::RANK);
                    dual.iter()
                        .enumerate()
                        .map(|(i, v)| if i == 0 { -v.clone() } else { v.clone() })
                        .collect()
                }
            };
            debug_assert!(rays.iter().all(|r| !form.pair(&separator, r).is_negative()));
            debug_assert!(form.pair(&separator, x).is_negative());
            Ok(Membership::Outside { separator })
        }
    }
}

enum FeasibilityOutcome {
    Feasible(Vec<Rat>),
    /// y with y·A <= 0 componentwise and y·b > 0 (Farkas direction).
    Infeasible(QVec),
}

/// Phase-one simplex for {lambda >= 0 : A lambda = b} with A's columns the
/// generators. Bland's rule, dense exact tableau.
fn feasible_combination(b: &[Rat], cols: &[QVec]) -> FeasibilityOutcome {
    let m = b.len();
    let k = cols.len();

    // Row-flip so the right-hand side is nonnegative, artificial basis = I.
    let mut flip = vec![false; m];
    let mut tab = QMat::zeros(m, k + m + 1);
    for i in 0..m {
        flip[i] = b[i].is_negative();
        let sign = if flip[i] { -Rat::one() } else { Rat::one() };
        for j in 0..k {
            *tab.at_mut(i, j) = &cols[j][i] * &sign;
        }
        *tab.at_mut(i, k + i) = Rat::one();
        *tab.at_mut(i, k + m) = &b[i] * &sign;
    }

    // Reduced-cost row for the phase-one objective (sum of artificials):
    // cost[j] - sum_i tab[i][j] for the nonbasic lambda columns.
    let mut cost = vec![Rat::zero(); k + m + 1];
    for j in 0..=k + m {
        let mut acc = Rat::zero();
        for i in 0..m {
            acc += tab.at(i, j);
        }
        let base = if (k..k + m).contains(&j) { Rat::one() } else { Rat::zero() };
        cost[j] = base - acc;
    }

    let mut basis: Vec<usize> = (k..k + m).collect();
    loop {
        // Bland: entering = lowest-index column with negative reduced cost.
        let Some(enter) = (0..k + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        // Ratio test; Bland tie-break on the smallest basis variable.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if tab.at(i, enter).is_positive() {
                let ratio = tab.at(i, k + m) / tab.at(i, enter);
                let better = match &best {
                    None => true,
                    Some(r) => {
                        ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else {
            // Unbounded phase-one objective cannot happen (bounded below by 0
            // and decreasing); treat as a bug.
            unreachable!("phase-one simplex cannot be unbounded");
        };
        pivot(&mut tab, &mut cost, li, enter);
        basis[li] = enter;
    }

    // cost holds  c_j - y·A_j  with y the simplex multipliers; the objective
    // value is -cost[last].
    let objective = -cost[k + m].clone();
    if objective.is_zero() {
        let mut lambda = vec![Rat::zero(); k];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < k {
                lambda[bv] = tab.at(i, k + m).clone();
            }
        }
        FeasibilityOutcome::Feasible(lambda)
    } else {
        // y_i = 1 - reduced_cost(artificial_i), then unflip the rows.
        let y: QVec = (0..m)
            .map(|i| {
                let v = Rat::one() - &cost[k + i];
                if flip[i] {
                    -v
                } else {
                    v
                }
            })
            .collect();
        FeasibilityOutcome::Infeasible(y)
    }
}

fn pivot(tab: &mut QMat, cost: &mut [Rat], row: usize, col: usize) {
    let m = tab.nrows();
    let w = tab.ncols();
    let inv = tab.at(row, col).recip();
    for j in 0..w {
        let v = tab.at(row, j) * &inv;
        *tab.at_mut(row, j) = v;
    }
    for i in 0..m {
        if i != row && !tab.at(i, col).is_zero() {
            let f = tab.at(i, col).clone();
            for j in 0..w {
                let v = tab.at(i, j) - &f * tab.at(row, j);
                *tab.at_mut(i, j) = v;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for j in 0..w {
            cost[j] = &cost[j] - &f * tab.at(row, j);
        }
    }
}
