//! Readers and writers for timing tables, failure-marking policies, and
//! problem-subset filtering.
//!
//! The CSV carrier is deliberately small: a `problem,<solver>...[,tags]`
//! header, one row per problem, `#` comment lines, dot decimal separator,
//! case-insensitive failure tokens. A JSON equivalent with explicit nulls
//! for failures is accepted for machine producers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{FailureKind, Measurement, TimingTable};

/// Maps raw cell text to measurements.
#[derive(Debug, Clone)]
pub struct IngestPolicy {
    failure_tokens: BTreeSet<String>,
    nonconverged_tokens: BTreeSet<String>,
    treat_nonpositive_as_failure: bool,
}

impl Default for IngestPolicy {
    fn default() -> Self {
        IngestPolicy {
            failure_tokens: ["fail", "timeout", "inf", ""]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            nonconverged_tokens: ["nc", "near"].iter().map(|s| s.to_string()).collect(),
            treat_nonpositive_as_failure: true,
        }
    }
}

impl IngestPolicy {
    /// Add a token to the failure set. Tokens are matched case-insensitively.
    pub fn with_failure_token(mut self, token: &str) -> Result<Self> {
        let token = token.to_lowercase();
        if self.nonconverged_tokens.contains(&token) {
            return Err(Error::InvalidArgument(format!(
                "token `{token}` already marks non-convergence"
            )));
        }
        self.failure_tokens.insert(token);
        Ok(self)
    }

    /// Add a token marking a solve that stopped without converging.
    pub fn with_nonconverged_token(mut self, token: &str) -> Result<Self> {
        let token = token.to_lowercase();
        if self.failure_tokens.contains(&token) {
            return Err(Error::InvalidArgument(format!(
                "token `{token}` already marks failure"
            )));
        }
        self.nonconverged_tokens.insert(token);
        Ok(self)
    }

    pub fn treat_nonpositive_as_failure(mut self, on: bool) -> Self {
        self.treat_nonpositive_as_failure = on;
        self
    }

    /// Classify one trimmed cell. `None` means the cell is not covered by
    /// the policy and must parse as a positive number.
    fn classify_token(&self, cell: &str) -> Option<Measurement> {
        let lower = cell.to_lowercase();
        if self.nonconverged_tokens.contains(&lower) {
            return Some(Measurement::Failure(FailureKind::Nonconverged));
        }
        if self.failure_tokens.contains(&lower) {
            let kind = match lower.as_str() {
                "timeout" => FailureKind::Timeout,
                "" => FailureKind::Missing,
                _ => FailureKind::Error,
            };
            return Some(Measurement::Failure(kind));
        }
        None
    }

    /// Classify a parsed numeric value.
    fn classify_number(&self, value: f64) -> Option<Measurement> {
        if value.is_finite() && value > 0.0 {
            Some(Measurement::Success(value))
        } else if self.treat_nonpositive_as_failure {
            Some(Measurement::Failure(FailureKind::Error))
        } else {
            None
        }
    }
}

/// Parse the timing CSV described in the module docs.
pub fn parse_timing_csv(text: &str, policy: &IngestPolicy) -> Result<TimingTable> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| !line.trim_start().starts_with('#'))
        .filter(|(_, line)| !line.trim().is_empty());

    let Some((header_line, header)) = rows.next() else {
        return Err(Error::parse(1, 1, "missing header row"));
    };
    let mut fields: Vec<&str> = header.split(',').map(str::trim).collect();
    if fields.len() < 2 {
        return Err(Error::parse(
            header_line,
            1,
            "header must name a problem column and at least one solver",
        ));
    }
    let has_tags = fields.len() > 2
        && fields
            .last()
            .is_some_and(|f| f.eq_ignore_ascii_case("tags"));
    if has_tags {
        fields.pop();
    }
    let solvers: Vec<String> = fields[1..].iter().map(|s| s.to_string()).collect();
    let n_cols = 1 + solvers.len() + usize::from(has_tags);

    let mut problems = Vec::new();
    let mut cells = Vec::new();
    let mut tags = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line_no, line) in rows {
        let row: Vec<&str> = line.split(',').map(str::trim).collect();
        if row.len() != n_cols {
            return Err(Error::parse(
                line_no,
                row.len().min(n_cols),
                format!("expected {n_cols} fields, got {}", row.len()),
            ));
        }
        if !seen.insert(row[0].to_string()) {
            return Err(Error::parse(
                line_no,
                1,
                format!("duplicate problem id `{}`", row[0]),
            ));
        }
        problems.push(row[0].to_string());
        for (s, cell) in row[1..1 + solvers.len()].iter().enumerate() {
            let column = s + 2; // 1-based, after the problem column
            let m = match policy.classify_token(cell) {
                Some(m) => m,
                None => match cell.parse::<f64>() {
                    Ok(v) => policy.classify_number(v).ok_or_else(|| {
                        Error::parse(line_no, column, format!("non-positive value `{cell}`"))
                    })?,
                    Err(_) => {
                        return Err(Error::parse(
                            line_no,
                            column,
                            format!("cell `{cell}` is neither a number nor a known token"),
                        ))
                    }
                },
            };
            cells.push(m);
        }
        if has_tags {
            tags.push(row[n_cols - 1].to_string());
        }
    }

    TimingTable::with_tags(problems, solvers, cells, has_tags.then_some(tags)).map_err(|e| {
        match e {
            // re-surface duplicate ids as positioned parse errors
            Error::InvalidTable(msg) => Error::parse(header_line, 1, msg),
            other => other,
        }
    })
}

/// Canonical CSV writer; `parse(write(parse(text)))` equals `parse(text)`.
pub fn write_timing_csv(table: &TimingTable) -> String {
    let mut out = String::from("problem");
    for s in table.solvers() {
        out.push(',');
        out.push_str(s);
    }
    if table.tags().is_some() {
        out.push_str(",tags");
    }
    out.push('\n');
    for (p, problem) in table.problems().iter().enumerate() {
        out.push_str(problem);
        for s in 0..table.n_solvers() {
            out.push(',');
            match table.cell(p, s) {
                Measurement::Success(v) => out.push_str(&format!("{v}")),
                Measurement::Failure(kind) => out.push_str(kind.token()),
            }
        }
        if let Some(tags) = table.tags() {
            out.push(',');
            out.push_str(&tags[p]);
        }
        out.push('\n');
    }
    out
}

/// JSON carrier: row-major times with explicit nulls for failures.
#[derive(Debug, Serialize, Deserialize)]
struct TimingDoc {
    solvers: Vec<String>,
    problems: Vec<String>,
    times: Vec<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags: Option<Vec<String>>,
}

/// Parse the timing JSON document.
pub fn parse_timing_json(text: &str, policy: &IngestPolicy) -> Result<TimingTable> {
    let doc: TimingDoc = serde_json::from_str(text)?;
    if doc.times.len() != doc.problems.len() {
        return Err(Error::InvalidTable(format!(
            "{} time rows for {} problems",
            doc.times.len(),
            doc.problems.len()
        )));
    }
    let mut cells = Vec::with_capacity(doc.problems.len() * doc.solvers.len());
    for (p, row) in doc.times.iter().enumerate() {
        if row.len() != doc.solvers.len() {
            return Err(Error::InvalidTable(format!(
                "row for problem `{}` has {} entries, expected {}",
                doc.problems[p],
                row.len(),
                doc.solvers.len()
            )));
        }
        for (s, value) in row.iter().enumerate() {
            let m = match value {
                None => Measurement::Failure(FailureKind::Missing),
                Some(v) => policy.classify_number(*v).ok_or_else(|| {
                    Error::InvalidTable(format!(
                        "non-positive time {v} for (problem `{}`, solver `{}`)",
                        doc.problems[p], doc.solvers[s]
                    ))
                })?,
            };
            cells.push(m);
        }
    }
    TimingTable::with_tags(doc.problems, doc.solvers, cells, doc.tags)
}

/// Serialize to the timing JSON document (failure subtype collapses to null).
pub fn write_timing_json(table: &TimingTable) -> String {
    let doc = TimingDoc {
        solvers: table.solvers().to_vec(),
        problems: table.problems().to_vec(),
        times: (0..table.n_problems())
            .map(|p| {
                (0..table.n_solvers())
                    .map(|s| table.cell(p, s).value())
                    .collect()
            })
            .collect(),
        tags: table.tags().map(|t| t.to_vec()),
    };
    serde_json::to_string_pretty(&doc).expect("timing table serializes")
}

/// Picks a problem subset out of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetSelector {
    /// Exact problem identifiers; unknown identifiers are an error.
    Explicit(Vec<String>),
    /// Identifier prefix.
    Prefix(String),
    /// Glob over identifiers (`*` any run, `?` one character).
    Glob(String),
    /// Problems whose tag equals the given string (requires a tag column).
    Tag(String),
}

impl SubsetSelector {
    /// Parse the CLI selector syntax: `tag:T`, `prefix:P`, `glob:G`, a bare
    /// pattern containing `*`/`?`, or a comma-separated identifier list.
    pub fn parse(text: &str) -> Self {
        if let Some(tag) = text.strip_prefix("tag:") {
            SubsetSelector::Tag(tag.to_string())
        } else if let Some(prefix) = text.strip_prefix("prefix:") {
            SubsetSelector::Prefix(prefix.to_string())
        } else if let Some(glob) = text.strip_prefix("glob:") {
            SubsetSelector::Glob(glob.to_string())
        } else if text.contains('*') || text.contains('?') {
            SubsetSelector::Glob(text.to_string())
        } else {
            SubsetSelector::Explicit(
                text.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
            )
        }
    }
}

fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    // iterative wildcard match with single backtrack point
    let (mut pi, mut ti) = (0, 0);
    let (mut star, mut star_ti) = (None, 0);
    while ti < t.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some(pi);
            star_ti = ti;
            pi += 1;
        } else if let Some(sp) = star {
            pi = sp + 1;
            star_ti += 1;
            ti = star_ti;
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

/// Keep only the problems matched by `selector`, in original order. The
/// solver list is unchanged. Ratios must be recomputed on the sub-table:
/// the per-problem best can leave the subset.
pub fn filter_problems(table: &TimingTable, selector: &SubsetSelector) -> Result<TimingTable> {
    if let SubsetSelector::Explicit(ids) = selector {
        for id in ids {
            if table.problem_index(id).is_none() {
                return Err(Error::InvalidArgument(format!(
                    "subset names unknown problem `{id}`"
                )));
            }
        }
    }
    if matches!(selector, SubsetSelector::Tag(_)) && table.tags().is_none() {
        return Err(Error::InvalidArgument(
            "tag selector requires a table with a tag column".into(),
        ));
    }

    let keep: Vec<usize> = (0..table.n_problems())
        .filter(|&p| {
            let id = &table.problems()[p];
            match selector {
                SubsetSelector::Explicit(ids) => ids.iter().any(|i| i == id),
                SubsetSelector::Prefix(prefix) => id.starts_with(prefix.as_str()),
                SubsetSelector::Glob(pattern) => glob_match(pattern, id),
                SubsetSelector::Tag(tag) => table.tags().unwrap()[p] == *tag,
            }
        })
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptySelection);
    }

    let problems = keep.iter().map(|&p| table.problems()[p].clone()).collect();
    let cells = keep
        .iter()
        .flat_map(|&p| table.row(p).iter().copied())
        .collect();
    let tags = table
        .tags()
        .map(|t| keep.iter().map(|&p| t[p].clone()).collect());
    TimingTable::with_tags(problems, table.solvers().to_vec(), cells, tags)
}

/// Concatenate two tables along their disjoint axis: identical problems
/// with disjoint solvers, or identical solvers with disjoint problems.
/// Overlapping (problem, solver) cells are always an error, never a silent
/// overwrite.
pub fn merge_tables(a: &TimingTable, b: &TimingTable) -> Result<TimingTable> {
    let same_problems = a.problems() == b.problems();
    let same_solvers = a.solvers() == b.solvers();

    if same_problems && (b.n_solvers() == 0 || a.n_solvers() == 0 || !same_solvers) {
        // column-wise: shared problems, solvers must not overlap
        if let Some(dup) = a.solvers().iter().find(|s| b.solver_index(s).is_some()) {
            return Err(Error::MergeConflict(format!(
                "solver `{dup}` appears in both tables"
            )));
        }
        let solvers: Vec<String> = a.solvers().iter().chain(b.solvers()).cloned().collect();
        let mut cells = Vec::with_capacity(a.n_problems() * solvers.len());
        for p in 0..a.n_problems() {
            cells.extend(a.row(p).iter().copied());
            cells.extend(b.row(p).iter().copied());
        }
        let tags = match (a.tags(), b.tags()) {
            (Some(ta), Some(tb)) if ta != tb => {
                return Err(Error::MergeConflict("tables disagree on tags".into()))
            }
            (ta, tb) => ta.or(tb).map(|t| t.to_vec()),
        };
        return TimingTable::with_tags(a.problems().to_vec(), solvers, cells, tags);
    }

    if same_solvers {
        // row-wise: shared solvers, problems must not overlap
        if let Some(dup) = a.problems().iter().find(|p| b.problem_index(p).is_some()) {
            return Err(Error::MergeConflict(format!(
                "problem `{dup}` appears in both tables"
            )));
        }
        let problems: Vec<String> = a.problems().iter().chain(b.problems()).cloned().collect();
        let mut cells = Vec::with_capacity(problems.len() * a.n_solvers());
        for p in 0..a.n_problems() {
            cells.extend(a.row(p).iter().copied());
        }
        for p in 0..b.n_problems() {
            cells.extend(b.row(p).iter().copied());
        }
        let tags = match (a.tags(), b.tags()) {
            (None, None) => None,
            (ta, tb) => {
                let empty_a = vec![String::new(); a.n_problems()];
                let empty_b = vec![String::new(); b.n_problems()];
                let ta = ta.map_or(empty_a, |t| t.to_vec());
                let tb = tb.map_or(empty_b, |t| t.to_vec());
                Some(ta.into_iter().chain(tb).collect())
            }
        };
        return TimingTable::with_tags(problems, a.solvers().to_vec(), cells, tags);
    }

    Err(Error::MergeConflict(
        "tables must share the problem axis with disjoint solvers, \
         or share the solver axis with disjoint problems"
            .into(),
    ))
}
