//! Performance ratios: each measurement divided by the best measurement any
//! solver achieved on the same problem, with failures mapped to a sentinel
//! ratio r_M that strictly exceeds every genuine ratio.

use crate::error::{Error, Result};
use crate::table::TimingTable;

/// How the failure sentinel r_M is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RmPolicy {
    /// r_M = 2 x (largest finite ratio), but never below 2. The exact value
    /// is immaterial for profile comparisons below r_M; doubling keeps the
    /// sentinel clear of every genuine ratio while staying plottable.
    Auto,
    /// Caller-supplied r_M. Rejected unless it strictly exceeds every finite
    /// ratio in the table.
    Explicit(f64),
}

/// The derived ratio matrix. Every entry lies in [1, r_M]; an entry equals
/// r_M exactly when the underlying measurement failed (or the whole problem
/// row failed, in which case every solver receives r_M for that problem).
#[derive(Debug, Clone, PartialEq)]
pub struct RatioMatrix {
    problems: Vec<String>,
    solvers: Vec<String>,
    ratios: Vec<f64>,
    r_m: f64,
}

impl RatioMatrix {
    pub fn problems(&self) -> &[String] {
        &self.problems
    }

    pub fn solvers(&self) -> &[String] {
        &self.solvers
    }

    pub fn n_problems(&self) -> usize {
        self.problems.len()
    }

    pub fn n_solvers(&self) -> usize {
        self.solvers.len()
    }

    pub fn r_m(&self) -> f64 {
        self.r_m
    }

    pub fn ratio(&self, problem: usize, solver: usize) -> f64 {
        self.ratios[problem * self.solvers.len() + solver]
    }

    pub fn solver_index(&self, solver: &str) -> Result<usize> {
        self.solvers
            .iter()
            .position(|s| s == solver)
            .ok_or_else(|| Error::UnknownSolver(solver.to_string()))
    }

    /// One solver's ratios in problem order.
    pub fn solver_ratios(&self, solver: &str) -> Result<Vec<f64>> {
        let idx = self.solver_index(solver)?;
        Ok((0..self.problems.len())
            .map(|p| self.ratio(p, idx))
            .collect())
    }

    pub fn is_failure(&self, problem: usize, solver: usize) -> bool {
        self.ratio(problem, solver) == self.r_m
    }
}

/// Compute the ratio matrix for `table` under the given r_M policy.
///
/// The per-problem baseline is the minimum over successful measurements
/// only; problems on which every solver failed assign r_M to all solvers.
pub fn compute_ratios(table: &TimingTable, policy: RmPolicy) -> Result<RatioMatrix> {
    let n_p = table.n_problems();
    let n_s = table.n_solvers();
    if n_p == 0 || n_s == 0 {
        return Err(Error::InvalidTable(
            "ratios require at least one problem and one solver".into(),
        ));
    }

    // First pass: finite ratios (None marks a failure) and the largest one.
    let mut finite = vec![None::<f64>; n_p * n_s];
    let mut max_finite: Option<(f64, usize, usize)> = None;
    for p in 0..n_p {
        let best = table
            .row(p)
            .iter()
            .filter_map(|m| m.value())
            .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.min(v))));
        let Some(best) = best else {
            continue; // whole row failed
        };
        for s in 0..n_s {
            if let Some(t) = table.cell(p, s).value() {
                let r = t / best;
                finite[p * n_s + s] = Some(r);
                if max_finite.is_none_or(|(m, _, _)| r > m) {
                    max_finite = Some((r, p, s));
                }
            }
        }
    }

    let r_m = match policy {
        RmPolicy::Auto => max_finite.map_or(2.0, |(m, _, _)| (2.0 * m).max(2.0)),
        RmPolicy::Explicit(v) => {
            if !v.is_finite() || v <= 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "explicit r_M must be finite and > 1, got {v}"
                )));
            }
            if let Some((m, p, s)) = max_finite {
                if v <= m {
                    return Err(Error::RmTooSmall {
                        r_m: v,
                        ratio: m,
                        problem: table.problems()[p].clone(),
                        solver: table.solvers()[s].clone(),
                    });
                }
            }
            v
        }
    };

    let ratios = finite.into_iter().map(|r| r.unwrap_or(r_m)).collect();
    Ok(RatioMatrix {
        problems: table.problems().to_vec(),
        solvers: table.solvers().to_vec(),
        ratios,
        r_m,
    })
}

/// Five-number summary of one solver's finite ratios. Failures carry no
/// meaningful ratio magnitude, so they are excluded from the summary and
/// reported as a separate count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuartileSummary {
    pub summary: Option<FiveNumber>,
    pub failures: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linear-interpolation quantile on a sorted slice (the common empirical
/// rule: rank h = (n-1)p, interpolate between floor and ceil).
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (h - lo as f64)
}

/// Quartiles of one solver's finite ratios, failures counted separately.
pub fn quartiles(ratios: &RatioMatrix, solver: &str) -> Result<QuartileSummary> {
    let idx = ratios.solver_index(solver)?;
    let mut finite: Vec<f64> = (0..ratios.n_problems())
        .map(|p| ratios.ratio(p, idx))
        .filter(|&r| r < ratios.r_m())
        .collect();
    let failures = ratios.n_problems() - finite.len();
    if finite.is_empty() {
        return Ok(QuartileSummary {
            summary: None,
            failures,
        });
    }
    finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(QuartileSummary {
        summary: Some(FiveNumber {
            min: finite[0],
            q1: quantile_sorted(&finite, 0.25),
            median: quantile_sorted(&finite, 0.5),
            q3: quantile_sorted(&finite, 0.75),
            max: finite[finite.len() - 1],
        }),
        failures,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::table::{FailureKind, Measurement};

    fn s(v: f64) -> Measurement {
        Measurement::Success(v)
    }

    fn fail() -> Measurement {
        Measurement::Failure(FailureKind::Error)
    }

    /// Two solvers over four problems; used across the crate's tests.
    pub(crate) fn example_table() -> TimingTable {
        TimingTable::new(
            vec!["p1".into(), "p2".into(), "p3".into(), "p4".into()],
            vec!["A".into(), "B".into()],
            vec![
                s(2.0),
                s(4.0),
                s(6.0),
                s(2.0),
                s(1.0),
                fail(),
                s(10.0),
                s(5.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_ratios_match_hand_computation() {
        let ratios = compute_ratios(&example_table(), RmPolicy::Auto).unwrap();
        assert_eq!(ratios.r_m(), 6.0); // 2 x max finite ratio 3
        assert_eq!(ratios.solver_ratios("A").unwrap(), vec![1.0, 3.0, 1.0, 2.0]);
        assert_eq!(ratios.solver_ratios("B").unwrap(), vec![2.0, 1.0, 6.0, 1.0]);
        assert!(ratios.is_failure(2, 1));
        assert!(!ratios.is_failure(2, 0));
    }

    #[test]
    fn single_solver_is_its_own_minimum() {
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into()],
            vec!["A".into()],
            vec![s(3.0), s(0.5)],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Auto).unwrap();
        assert_eq!(ratios.solver_ratios("A").unwrap(), vec![1.0, 1.0]);
        assert_eq!(ratios.r_m(), 2.0); // floor of 2 when every entry is best
    }

    #[test]
    fn uniform_factor_two_gives_constant_ratios() {
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into(), "p3".into()],
            vec!["A".into(), "B".into()],
            vec![s(2.0), s(1.0), s(9.0), s(4.5), s(0.2), s(0.1)],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Auto).unwrap();
        assert_eq!(ratios.solver_ratios("A").unwrap(), vec![2.0, 2.0, 2.0]);
        assert_eq!(ratios.solver_ratios("B").unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn all_fail_row_assigns_rm_to_everyone() {
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into()],
            vec!["A".into(), "B".into()],
            vec![s(1.0), s(2.0), fail(), fail()],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Auto).unwrap();
        assert_eq!(ratios.r_m(), 4.0);
        assert_eq!(ratios.ratio(1, 0), 4.0);
        assert_eq!(ratios.ratio(1, 1), 4.0);
    }

    #[test]
    fn explicit_rm_must_exceed_largest_finite_ratio() {
        let err = compute_ratios(&example_table(), RmPolicy::Explicit(3.0)).unwrap_err();
        match err {
            Error::RmTooSmall {
                ratio,
                problem,
                solver,
                ..
            } => {
                assert_eq!(ratio, 3.0);
                assert_eq!(problem, "p2");
                assert_eq!(solver, "A");
            }
            other => panic!("unexpected error {other:?}"),
        }

        let ok = compute_ratios(&example_table(), RmPolicy::Explicit(3.5)).unwrap();
        assert_eq!(ok.r_m(), 3.5);
    }

    #[test]
    fn every_surviving_row_has_a_unit_ratio() {
        let ratios = compute_ratios(&example_table(), RmPolicy::Auto).unwrap();
        for p in 0..ratios.n_problems() {
            let row: Vec<f64> = (0..ratios.n_solvers())
                .map(|q| ratios.ratio(p, q))
                .collect();
            assert!(row.contains(&1.0), "row {p}: {row:?}");
        }
    }

    #[test]
    fn quartiles_linear_interpolation() {
        // ratios (1, 1, 2, 3): expected from the rank-interpolation rule
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into(), "p3".into(), "p4".into()],
            vec!["A".into(), "B".into()],
            vec![
                s(1.0),
                s(1.0),
                s(1.0),
                s(1.0),
                s(2.0),
                s(1.0),
                s(3.0),
                s(1.0),
            ],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Auto).unwrap();
        let q = quartiles(&ratios, "A").unwrap();
        let f = q.summary.unwrap();
        assert_eq!(
            (f.min, f.q1, f.median, f.q3, f.max),
            (1.0, 1.0, 1.5, 2.25, 3.0)
        );
        assert_eq!(q.failures, 0);
    }

    #[test]
    fn quartiles_all_ones() {
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into()],
            vec!["A".into()],
            vec![s(5.0), s(7.0)],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Auto).unwrap();
        let f = quartiles(&ratios, "A").unwrap().summary.unwrap();
        assert_eq!(
            (f.min, f.q1, f.median, f.q3, f.max),
            (1.0, 1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn quartiles_exclude_failures() {
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into(), "p3".into(), "p4".into()],
            vec!["A".into(), "B".into()],
            vec![
                s(1.0),
                s(1.0),
                s(2.0),
                s(1.0),
                fail(),
                s(1.0),
                fail(),
                s(1.0),
            ],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Explicit(8.0)).unwrap();
        let q = quartiles(&ratios, "A").unwrap();
        let f = q.summary.unwrap();
        assert_eq!(q.failures, 2);
        assert_eq!((f.min, f.max), (1.0, 2.0));
        assert_eq!(f.median, 1.5);
    }

    #[test]
    fn quartiles_of_all_fail_solver_marked_empty() {
        let table = TimingTable::new(
            vec!["p1".into(), "p2".into()],
            vec!["A".into(), "B".into()],
            vec![fail(), s(1.0), fail(), s(2.0)],
        )
        .unwrap();
        let ratios = compute_ratios(&table, RmPolicy::Auto).unwrap();
        let q = quartiles(&ratios, "A").unwrap();
        assert!(q.summary.is_none());
        assert_eq!(q.failures, 2);
    }

    #[test]
    fn unknown_solver_is_a_lookup_error() {
        let ratios = compute_ratios(&example_table(), RmPolicy::Auto).unwrap();
        assert!(matches!(
            quartiles(&ratios, "nope").unwrap_err(),
            Error::UnknownSolver(_)
        ));
    }
}
