//! Raw benchmark measurements: one metric value (or failure) per
//! (problem, solver) cell.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Why a solve produced no usable metric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureKind {
    Timeout,
    Error,
    Nonconverged,
    Missing,
}

impl FailureKind {
    /// Canonical token used by the CSV writer; the default ingest policy
    /// maps each token back to the same kind.
    pub fn token(self) -> &'static str {
        match self {
            FailureKind::Timeout => "timeout",
            FailureKind::Error => "fail",
            FailureKind::Nonconverged => "nc",
            FailureKind::Missing => "",
        }
    }
}

/// One cell of a timing table: a strictly positive metric value
/// (seconds, evaluation counts, ...) or a failure marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measurement {
    Success(f64),
    Failure(FailureKind),
}

impl Measurement {
    pub fn is_success(&self) -> bool {
        matches!(self, Measurement::Success(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Measurement::Success(v) => Some(*v),
            Measurement::Failure(_) => None,
        }
    }
}

/// An n_p x n_s matrix of measurements with problem and solver labels.
///
/// Row-major: cell `(p, s)` lives at `cells[p * n_s + s]`. Labels are unique
/// within each axis and every success value is finite and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingTable {
    problems: Vec<String>,
    solvers: Vec<String>,
    cells: Vec<Measurement>,
    tags: Option<Vec<String>>,
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidTable(format!("duplicate {kind} `{name}`")));
        }
    }
    Ok(())
}

impl TimingTable {
    pub fn new(
        problems: Vec<String>,
        solvers: Vec<String>,
        cells: Vec<Measurement>,
    ) -> Result<Self> {
        Self::with_tags(problems, solvers, cells, None)
    }

    /// Like [`TimingTable::new`] with an optional per-problem tag column.
    pub fn with_tags(
        problems: Vec<String>,
        solvers: Vec<String>,
        cells: Vec<Measurement>,
        tags: Option<Vec<String>>,
    ) -> Result<Self> {
        if cells.len() != problems.len() * solvers.len() {
            return Err(Error::InvalidTable(format!(
                "expected {} x {} = {} cells, got {}",
                problems.len(),
                solvers.len(),
                problems.len() * solvers.len(),
                cells.len()
            )));
        }
        check_unique("problem id", &problems)?;
        check_unique("solver name", &solvers)?;
        if let Some(t) = &tags {
            if t.len() != problems.len() {
                return Err(Error::InvalidTable(format!(
                    "{} tags for {} problems",
                    t.len(),
                    problems.len()
                )));
            }
        }
        for (i, cell) in cells.iter().enumerate() {
            if let Measurement::Success(v) = cell {
                if !v.is_finite() || *v <= 0.0 {
                    return Err(Error::InvalidTable(format!(
                        "measurement for (problem `{}`, solver `{}`) must be finite and positive, got {v}",
                        problems[i / solvers.len()],
                        solvers[i % solvers.len()],
                    )));
                }
            }
        }
        Ok(TimingTable {
            problems,
            solvers,
            cells,
            tags,
        })
    }

    pub fn problems(&self) -> &[String] {
        &self.problems
    }

    pub fn solvers(&self) -> &[String] {
        &self.solvers
    }

    pub fn tags(&self) -> Option<&[String]> {
        self.tags.as_deref()
    }

    pub fn n_problems(&self) -> usize {
        self.problems.len()
    }

    pub fn n_solvers(&self) -> usize {
        self.solvers.len()
    }

    pub fn cell(&self, problem: usize, solver: usize) -> &Measurement {
        &self.cells[problem * self.solvers.len() + solver]
    }

    /// All cells of one problem, in solver order.
    pub fn row(&self, problem: usize) -> &[Measurement] {
        let n_s = self.solvers.len();
        &self.cells[problem * n_s..(problem + 1) * n_s]
    }

    pub fn solver_index(&self, solver: &str) -> Option<usize> {
        self.solvers.iter().position(|s| s == solver)
    }

    pub fn problem_index(&self, problem: &str) -> Option<usize> {
        self.problems.iter().position(|p| p == problem)
    }
}
