//! Finite-volume bounds on the growth constant.
//!
//! With `g(V) = N(V - V0)`, subadditivity makes `log g` superadditive, so
//! `log g(V) / V` approaches its supremum from below. The running supremum
//! is therefore a lower bound at every `V`, never the limit itself.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BetaError {
    #[error("table has no nonzero count")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaRow {
    pub volume: usize,
    /// `log N(V - V0) / V`.
    pub log_n_over_v: f64,
    /// Largest `log N(V' - V0) / V'` over tabulated `V' <= V`.
    pub running_sup: f64,
}

impl BetaRow {
    /// Running infimum of `f(V) / V` with `f(V) = -log N(V - V0)`.
    pub fn running_inf(&self) -> f64 {
        0.0 - self.running_sup
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaEstimate {
    pub v0: usize,
    pub rows: Vec<BetaRow>,
}

impl BetaEstimate {
    /// Best lower bound available from the table.
    pub fn lower_bound(&self) -> f64 {
        self.rows.last().map_or(f64::NEG_INFINITY, |r| r.running_sup)
    }
}

/// One row per volume `V = v + v0` with `N(v) > 0`; zero counts are skipped
/// since their logarithm is undefined.
pub fn estimate_beta(counts: &BTreeMap<usize, u64>, v0: usize) -> Result<BetaEstimate, BetaError> {
    let mut rows = Vec::new();
    let mut sup = f64::NEG_INFINITY;
    for (&v, &n) in counts {
        if n == 0 || v + v0 == 0 {
            continue;
        }
        let volume = v + v0;
        let value = libm::log(n as f64) / volume as f64;
        sup = sup.max(value);
        rows.push(BetaRow {
            volume,
            log_n_over_v: value,
            running_sup: sup,
        });
    }
    if rows.is_empty() {
        return Err(BetaError::Empty);
    }
    Ok(BetaEstimate { v0, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_table_gives_zero() {
        let counts = (1..=10).map(|v| (v, 1)).collect();
        let est = estimate_beta(&counts, 3).unwrap();
        assert_eq!(est.rows.len(), 10);
        assert!(est.rows.iter().all(|r| r.log_n_over_v == 0.0 && r.running_sup == 0.0));
        assert_eq!(est.rows[0].volume, 4);
    }

    #[test]
    fn empty_table_is_an_error() {
        let counts = (1..=4).map(|v| (v, 0)).collect();
        assert_eq!(estimate_beta(&counts, 0), Err(BetaError::Empty));
    }

    #[test]
    fn running_sup_is_monotone() {
        let counts: BTreeMap<usize, u64> = [(2, 3), (4, 1), (6, 40)].into_iter().collect();
        let est = estimate_beta(&counts, 1).unwrap();
        assert!(est.rows.windows(2).all(|w| w[0].running_sup <= w[1].running_sup));
        assert_eq!(est.rows[1].running_sup, est.rows[0].log_n_over_v);
    }
}
