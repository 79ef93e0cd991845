//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use perf_profile::{FailureKind, Measurement, TimingTable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random timing table: times uniform in [0.1, 100], cells failing
/// independently at `fail_rate`.
pub fn random_table(
    rng: &mut ChaCha8Rng,
    max_problems: usize,
    max_solvers: usize,
    fail_rate: f64,
) -> TimingTable {
    let n_p = rng.random_range(1..=max_problems);
    let n_s = rng.random_range(1..=max_solvers);
    let cells = (0..n_p * n_s)
        .map(|_| {
            if rng.random_bool(fail_rate) {
                let kind = match rng.random_range(0..4) {
                    0 => FailureKind::Timeout,
                    1 => FailureKind::Error,
                    2 => FailureKind::Nonconverged,
                    _ => FailureKind::Missing,
                };
                Measurement::Failure(kind)
            } else {
                Measurement::Success(rng.random_range(0.1..100.0))
            }
        })
        .collect();
    TimingTable::new(
        (0..n_p).map(|i| format!("p{i}")).collect(),
        (0..n_s).map(|i| format!("s{i}")).collect(),
        cells,
    )
    .unwrap()
}

/// Independent ratio oracle: evaluates the defining formula directly, cell
/// by cell, without going through the library's ratio machinery.
pub fn oracle_ratios(table: &TimingTable, r_m: f64) -> Vec<Vec<f64>> {
    (0..table.n_problems())
        .map(|p| {
            let best = (0..table.n_solvers())
                .filter_map(|s| table.cell(p, s).value())
                .fold(f64::INFINITY, f64::min);
            (0..table.n_solvers())
                .map(|s| match table.cell(p, s).value() {
                    Some(t) if best.is_finite() => t / best,
                    _ => r_m,
                })
                .collect()
        })
        .collect()
}

/// Brute-force profile oracle: count ratios at or below tau.
pub fn brute_count(column: &[f64], tau: f64) -> usize {
    column.iter().filter(|&&r| r <= tau).count()
}

/// One solver's column out of the oracle ratio rows.
pub fn column(rows: &[Vec<f64>], solver: usize) -> Vec<f64> {
    rows.iter().map(|row| row[solver]).collect()
}

/// Largest finite (success-backed) ratio of a table, straight from the
/// definition.
pub fn max_finite_ratio(table: &TimingTable) -> Option<f64> {
    let rows = oracle_ratios(table, f64::INFINITY);
    let mut max = None;
    for row in rows {
        for r in row {
            if r.is_finite() && max.is_none_or(|m| r > m) {
                max = Some(r);
            }
        }
    }
    max
}

/// An r_M valid for every table in the slice (strictly above all of their
/// finite ratios).
pub fn shared_rm(tables: &[&TimingTable]) -> f64 {
    let max = tables
        .iter()
        .filter_map(|t| max_finite_ratio(t))
        .fold(1.0f64, f64::max);
    2.0 * max
}
