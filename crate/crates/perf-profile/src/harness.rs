//! Timing harness: runs solver commands over a problem list, enforcing a
//! wall-clock timeout and re-running any solve whose solver-reported time
//! disagrees with the wall clock by more than a configured fraction.
//!
//! The schedule is problem-major — every solver sees a problem before the
//! harness moves to the next one — so slow drift in machine load spreads
//! evenly across solvers. Runs are strictly sequential unless `parallel`
//! is set, which carries a timing-comparability warning.
//!
//! Configuration is a TOML document:
//!
//! ```toml
//! timeout_seconds = 3600.0
//! discrepancy_fraction = 0.10
//! max_rerun_cycles = 3
//! reported_time_extractor = "time: ([0-9.eE+-]+)"
//!
//! [[solvers]]
//! name = "A"
//! command = "solver-a --input {problem}"
//!
//! [[problems]]
//! id = "p1"
//! arg = "problems/p1.dat"
//! ```

use std::collections::HashMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{FailureKind, Measurement, TimingTable};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSpec {
    pub name: String,
    /// Command template; every `{problem}` expands to the problem's `arg`.
    pub command: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: String,
    /// Input path or argument string substituted into the command template.
    pub arg: String,
}

fn default_timeout() -> f64 {
    3600.0
}

fn default_discrepancy() -> f64 {
    0.10
}

fn default_max_rerun_cycles() -> u32 {
    3
}

fn default_capture_limit() -> u64 {
    1024 * 1024
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub solvers: Vec<SolverSpec>,
    pub problems: Vec<ProblemSpec>,
    #[serde(default = "default_timeout")]
    pub timeout_seconds: f64,
    #[serde(default = "default_discrepancy")]
    pub discrepancy_fraction: f64,
    #[serde(default = "default_max_rerun_cycles")]
    pub max_rerun_cycles: u32,
    /// Regex pulling the solver-reported time out of process output; the
    /// first capture group (or the whole match) must parse as seconds.
    #[serde(default)]
    pub reported_time_extractor: Option<String>,
    /// Run solves concurrently. Off by default: concurrent solves contend
    /// for the machine and invalidate timing comparability.
    #[serde(default)]
    pub parallel: bool,
    /// Directory for per-run stdout/stderr captures; no persistence if
    /// unset.
    #[serde(default)]
    pub capture_dir: Option<PathBuf>,
    #[serde(default = "default_capture_limit")]
    pub capture_limit_bytes: u64,
}

impl HarnessConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: HarnessConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Check everything that can fail before the first run.
    pub fn validate(&self) -> Result<()> {
        if self.solvers.is_empty() || self.problems.is_empty() {
            return Err(Error::Config(
                "at least one solver and one problem required".into(),
            ));
        }
        let solver_names: Vec<&str> = self.solvers.iter().map(|s| s.name.as_str()).collect();
        let problem_ids: Vec<&str> = self.problems.iter().map(|p| p.id.as_str()).collect();
        for (label, names) in [("solver", solver_names), ("problem", problem_ids)] {
            let mut seen = std::collections::HashSet::new();
            for name in names {
                if !seen.insert(name) {
                    return Err(Error::Config(format!("duplicate {label} `{name}`")));
                }
            }
        }
        if !self.timeout_seconds.is_finite() || self.timeout_seconds <= 0.0 {
            return Err(Error::Config(format!(
                "timeout must be positive, got {}",
                self.timeout_seconds
            )));
        }
        if !(0.0..1.0).contains(&self.discrepancy_fraction) || self.discrepancy_fraction <= 0.0 {
            return Err(Error::Config(format!(
                "discrepancy fraction must lie in (0, 1), got {}",
                self.discrepancy_fraction
            )));
        }
        if self.max_rerun_cycles == 0 {
            return Err(Error::Config("max_rerun_cycles must be positive".into()));
        }
        if let Some(pattern) = &self.reported_time_extractor {
            regex::Regex::new(pattern)
                .map_err(|e| Error::Config(format!("extractor regex: {e}")))?;
        }
        for solver in &self.solvers {
            let tokens = split_command(&solver.command)?;
            let program = tokens.first().ok_or_else(|| {
                Error::Config(format!("solver `{}` has an empty command", solver.name))
            })?;
            resolve_program(program)
                .map_err(|e| Error::Config(format!("solver `{}`: {e}", solver.name)))?;
        }
        Ok(())
    }
}

/// Split a command template into tokens; single and double quotes group
/// whitespace, with no escape processing.
fn split_command(template: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_token = false;
    let mut quote: Option<char> = None;
    for c in template.chars() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) => current.push(c),
            None if c == '\'' || c == '"' => {
                quote = Some(c);
                in_token = true;
            }
            None if c.is_whitespace() => {
                if in_token {
                    tokens.push(std::mem::take(&mut current));
                    in_token = false;
                }
            }
            None => {
                current.push(c);
                in_token = true;
            }
        }
    }
    if quote.is_some() {
        return Err(Error::Config(format!("unclosed quote in `{template}`")));
    }
    if in_token {
        tokens.push(current);
    }
    Ok(tokens)
}

/// Find the executable behind the first command token.
fn resolve_program(program: &str) -> Result<PathBuf> {
    use std::os::unix::fs::PermissionsExt;
    let is_executable = |path: &Path| {
        path.metadata()
            .map(|m| m.is_file() && m.permissions().mode() & 0o111 != 0)
            .unwrap_or(false)
    };
    if program.contains('/') {
        let path = PathBuf::from(program);
        if is_executable(&path) {
            return Ok(path);
        }
        return Err(Error::Config(format!("`{program}` is not executable")));
    }
    for dir in std::env::var_os("PATH")
        .map(|p| std::env::split_paths(&p).collect::<Vec<_>>())
        .unwrap_or_default()
    {
        let candidate = dir.join(program);
        if is_executable(&candidate) {
            return Ok(candidate);
        }
    }
    Err(Error::Config(format!("`{program}` not found on PATH")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Success,
    Timeout,
    NonzeroExit,
    /// Clean exit, but the configured extractor matched nothing usable.
    ExtractorMiss,
}

/// One solver execution on one problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub solver: String,
    /// 1-based attempt counter per (problem, solver).
    pub attempt: u32,
    /// Cycle in which this attempt ran (1 = initial pass).
    pub cycle: u32,
    pub status: RunStatus,
    pub wall_seconds: f64,
    pub reported_seconds: Option<f64>,
    /// Reported and wall time disagreed by more than the configured
    /// fraction; set on the final attempt too when the disagreement never
    /// resolved within the re-run budget.
    pub discrepant: bool,
    pub exit_code: Option<i32>,
    /// Seconds since the benchmark started when this run began; exposes
    /// the schedule order.
    pub start_offset_seconds: f64,
    /// Where the captured stdout/stderr landed, when persistence is on.
    pub output_path: Option<PathBuf>,
}

/// Everything a benchmark produces.
#[derive(Debug)]
pub struct BenchmarkRun {
    pub records: Vec<RunRecord>,
    pub table: TimingTable,
}

struct RawRun {
    timed_out: bool,
    exit_code: Option<i32>,
    wall: Duration,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

/// Read up to `cap` bytes, then drain the rest so the child never blocks
/// on a full pipe.
fn capped_reader<R: Read + Send + 'static>(
    mut source: R,
    cap: usize,
) -> std::thread::JoinHandle<Vec<u8>> {
    std::thread::spawn(move || {
        let mut captured = Vec::new();
        let mut buf = [0u8; 8192];
        loop {
            match source.read(&mut buf) {
                Ok(0) | Err(_) => break,
                Ok(n) => {
                    let room = cap.saturating_sub(captured.len());
                    captured.extend_from_slice(&buf[..n.min(room)]);
                }
            }
        }
        captured
    })
}

fn kill_process_group(child: &mut Child) {
    let pgid = child.id() as libc::pid_t;
    unsafe {
        libc::killpg(pgid, libc::SIGKILL);
    }
}

fn run_once(program: &Path, args: &[String], timeout: Duration, cap: usize) -> Result<RawRun> {
    use std::os::unix::process::CommandExt;
    let start = Instant::now();
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0) // own group, so the kill reaches grandchildren
        .spawn()
        .map_err(|e| Error::Config(format!("failed to spawn `{}`: {e}", program.display())))?;

    let stdout = capped_reader(child.stdout.take().expect("stdout piped"), cap);
    let stderr = capped_reader(child.stderr.take().expect("stderr piped"), cap);

    let mut timed_out = false;
    let exit_status = loop {
        match child.try_wait()? {
            Some(status) => break status,
            None => {
                if start.elapsed() >= timeout {
                    timed_out = true;
                    kill_process_group(&mut child);
                    break child.wait()?;
                }
                std::thread::sleep(Duration::from_millis(2));
            }
        }
    };
    let wall = start.elapsed();
    let stdout = stdout.join().unwrap_or_default();
    let stderr = stderr.join().unwrap_or_default();
    Ok(RawRun {
        timed_out,
        exit_code: exit_status.code(),
        wall,
        stdout,
        stderr,
    })
}

fn extract_reported(pattern: &regex::Regex, stdout: &[u8], stderr: &[u8]) -> Option<f64> {
    for stream in [stdout, stderr] {
        let text = String::from_utf8_lossy(stream);
        if let Some(captures) = pattern.captures(&text) {
            let m = captures.get(1).or_else(|| captures.get(0)).unwrap();
            if let Ok(v) = m.as_str().parse::<f64>() {
                return Some(v);
            }
        }
    }
    None
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Runner<'a> {
    config: &'a HarnessConfig,
    programs: Vec<(PathBuf, Vec<String>)>,
    extractor: Option<regex::Regex>,
    started: Instant,
}

impl<'a> Runner<'a> {
    fn new(config: &'a HarnessConfig) -> Result<Self> {
        let mut programs = Vec::with_capacity(config.solvers.len());
        for solver in &config.solvers {
            let tokens = split_command(&solver.command)?;
            let program = resolve_program(&tokens[0])?;
            programs.push((program, tokens[1..].to_vec()));
        }
        let extractor = config
            .reported_time_extractor
            .as_deref()
            .map(regex::Regex::new)
            .transpose()
            .map_err(|e| Error::Config(format!("extractor regex: {e}")))?;
        Ok(Runner {
            config,
            programs,
            extractor,
            started: Instant::now(),
        })
    }

    fn run_pair(&self, p: usize, s: usize, attempt: u32, cycle: u32) -> Result<RunRecord> {
        let problem = &self.config.problems[p];
        let solver = &self.config.solvers[s];
        let (program, arg_templates) = &self.programs[s];
        let args: Vec<String> = arg_templates
            .iter()
            .map(|t| t.replace("{problem}", &problem.arg))
            .collect();

        let start_offset_seconds = self.started.elapsed().as_secs_f64();
        let raw = run_once(
            program,
            &args,
            Duration::from_secs_f64(self.config.timeout_seconds),
            self.config.capture_limit_bytes as usize,
        )?;
        let wall_seconds = raw.wall.as_secs_f64();

        let output_path = match &self.config.capture_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!(
                    "{}__{}__a{attempt}.log",
                    sanitize(&problem.id),
                    sanitize(&solver.name)
                ));
                let mut contents = Vec::new();
                contents.extend_from_slice(b"=== stdout ===\n");
                contents.extend_from_slice(&raw.stdout);
                contents.extend_from_slice(b"\n=== stderr ===\n");
                contents.extend_from_slice(&raw.stderr);
                std::fs::write(&path, contents)?;
                Some(path)
            }
            None => None,
        };

        let (status, reported_seconds) = if raw.timed_out {
            (RunStatus::Timeout, None)
        } else if raw.exit_code != Some(0) {
            (RunStatus::NonzeroExit, None)
        } else if let Some(pattern) = &self.extractor {
            match extract_reported(pattern, &raw.stdout, &raw.stderr) {
                // a non-positive "time" is not a usable measurement
                Some(v) if v > 0.0 && v.is_finite() => (RunStatus::Success, Some(v)),
                _ => (RunStatus::ExtractorMiss, None),
            }
        } else {
            (RunStatus::Success, None)
        };

        let discrepant = match (status, reported_seconds) {
            (RunStatus::Success, Some(reported)) => {
                (reported - wall_seconds).abs() / wall_seconds > self.config.discrepancy_fraction
            }
            _ => false,
        };

        Ok(RunRecord {
            problem: problem.id.clone(),
            solver: solver.name.clone(),
            attempt,
            cycle,
            status,
            wall_seconds,
            reported_seconds,
            discrepant,
            exit_code: raw.exit_code,
            start_offset_seconds,
            output_path,
        })
    }

    fn run_cycle(
        &self,
        pairs: &[(usize, usize)],
        attempts: &mut HashMap<(usize, usize), u32>,
        cycle: u32,
    ) -> Result<Vec<RunRecord>> {
        let numbered: Vec<(usize, usize, u32)> = pairs
            .iter()
            .map(|&(p, s)| {
                let n = attempts.entry((p, s)).or_insert(0);
                *n += 1;
                (p, s, *n)
            })
            .collect();

        if !self.config.parallel {
            return numbered
                .iter()
                .map(|&(p, s, attempt)| self.run_pair(p, s, attempt, cycle))
                .collect();
        }

        let queue = Mutex::new(numbered.into_iter());
        let results: Mutex<Vec<Result<RunRecord>>> = Mutex::new(Vec::new());
        let workers = std::thread::available_parallelism().map_or(2, |n| n.get().min(8));
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let next = queue.lock().unwrap().next();
                    let Some((p, s, attempt)) = next else { break };
                    let record = self.run_pair(p, s, attempt, cycle);
                    results.lock().unwrap().push(record);
                });
            }
        });
        let mut records = results
            .into_inner()
            .unwrap()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        // keep the log problem-major even though execution was not
        records.sort_by_key(|r| {
            let p = self.config.problems.iter().position(|x| x.id == r.problem);
            let s = self.config.solvers.iter().position(|x| x.name == r.solver);
            (p, s)
        });
        Ok(records)
    }
}

/// Run the full benchmark: an initial problem-major cycle over every
/// (problem, solver) pair, then re-run cycles for pairs whose reported and
/// wall times disagree, up to `max_rerun_cycles` extra cycles.
pub fn run_benchmark(config: &HarnessConfig) -> Result<BenchmarkRun> {
    config.validate()?;
    if config.parallel {
        eprintln!(
            "warning: parallel mode runs solves concurrently; \
             timings are not comparable to sequential measurements"
        );
    }
    let runner = Runner::new(config)?;

    let all_pairs: Vec<(usize, usize)> = (0..config.problems.len())
        .flat_map(|p| (0..config.solvers.len()).map(move |s| (p, s)))
        .collect();

    let mut records: Vec<RunRecord> = Vec::new();
    let mut attempts: HashMap<(usize, usize), u32> = HashMap::new();
    let mut active = all_pairs;
    let mut cycle = 1;
    loop {
        let cycle_records = runner.run_cycle(&active, &mut attempts, cycle)?;
        let rerun: Vec<(usize, usize)> = cycle_records
            .iter()
            .filter(|r| r.discrepant)
            .map(|r| {
                (
                    config
                        .problems
                        .iter()
                        .position(|p| p.id == r.problem)
                        .unwrap(),
                    config
                        .solvers
                        .iter()
                        .position(|s| s.name == r.solver)
                        .unwrap(),
                )
            })
            .collect();
        records.extend(cycle_records);
        if rerun.is_empty() || cycle > config.max_rerun_cycles {
            break;
        }
        active = rerun;
        cycle += 1;
    }

    let table = records_to_table(&records, config)?;
    Ok(BenchmarkRun { records, table })
}

/// Fold run records into a timing table: the last attempt per (problem,
/// solver) wins, successes carry the reported time when an extractor is
/// configured (wall time otherwise), and failures keep their kind.
pub fn records_to_table(records: &[RunRecord], config: &HarnessConfig) -> Result<TimingTable> {
    let mut finals: HashMap<(&str, &str), &RunRecord> = HashMap::new();
    for record in records {
        let key = (record.problem.as_str(), record.solver.as_str());
        match finals.get(&key) {
            Some(existing) if existing.attempt == record.attempt => {
                return Err(Error::Config(format!(
                    "duplicate final record for (problem `{}`, solver `{}`)",
                    record.problem, record.solver
                )));
            }
            Some(existing) if existing.attempt > record.attempt => {}
            _ => {
                finals.insert(key, record);
            }
        }
    }

    let mut cells = Vec::with_capacity(config.problems.len() * config.solvers.len());
    for problem in &config.problems {
        for solver in &config.solvers {
            let cell = match finals.get(&(problem.id.as_str(), solver.name.as_str())) {
                None => Measurement::Failure(FailureKind::Missing),
                Some(record) => match record.status {
                    RunStatus::Success => {
                        let time = if config.reported_time_extractor.is_some() {
                            record.reported_seconds.unwrap_or(record.wall_seconds)
                        } else {
                            record.wall_seconds
                        };
                        Measurement::Success(time)
                    }
                    RunStatus::Timeout => Measurement::Failure(FailureKind::Timeout),
                    RunStatus::NonzeroExit | RunStatus::ExtractorMiss => {
                        Measurement::Failure(FailureKind::Error)
                    }
                },
            };
            cells.push(cell);
        }
    }
    TimingTable::new(
        config.problems.iter().map(|p| p.id.clone()).collect(),
        config.solvers.iter().map(|s| s.name.clone()).collect(),
        cells,
    )
}

/// Serialize records as line-delimited JSON.
pub fn write_records_jsonl(records: &[RunRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_command_handles_quotes() {
        assert_eq!(
            split_command("solver --input {problem}").unwrap(),
            vec!["solver", "--input", "{problem}"]
        );
        assert_eq!(
            split_command("sh -c 'sleep 1 && echo done'").unwrap(),
            vec!["sh", "-c", "sleep 1 && echo done"]
        );
        assert_eq!(split_command("a \"b c\" d").unwrap(), vec!["a", "b c", "d"]);
        assert!(split_command("a 'unclosed").is_err());
    }

    #[test]
    fn resolve_program_uses_path() {
        assert!(resolve_program("sh").is_ok());
        assert!(resolve_program("definitely-not-a-real-binary-xyz").is_err());
        assert!(resolve_program("/definitely/not/here").is_err());
    }

    fn base_config() -> HarnessConfig {
        HarnessConfig {
            solvers: vec![SolverSpec {
                name: "echoer".into(),
                command: "echo {problem}".into(),
            }],
            problems: vec![ProblemSpec {
                id: "p1".into(),
                arg: "one".into(),
            }],
            timeout_seconds: 5.0,
            discrepancy_fraction: 0.10,
            max_rerun_cycles: 3,
            reported_time_extractor: None,
            parallel: false,
            capture_dir: None,
            capture_limit_bytes: default_capture_limit(),
        }
    }

    #[test]
    fn config_validation_catches_errors() {
        let mut c = base_config();
        c.timeout_seconds = 0.0;
        assert!(c.validate().is_err());

        let mut c = base_config();
        c.discrepancy_fraction = 1.0;
        assert!(c.validate().is_err());

        let mut c = base_config();
        c.solvers.push(SolverSpec {
            name: "echoer".into(),
            command: "echo x".into(),
        });
        assert!(c.validate().is_err());

        let mut c = base_config();
        c.solvers[0].command = "no-such-binary-zzz {problem}".into();
        let err = c.validate().unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");

        let mut c = base_config();
        c.reported_time_extractor = Some("time: ([0-9".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_toml_defaults() {
        let toml = r#"
            [[solvers]]
            name = "A"
            command = "echo {problem}"

            [[problems]]
            id = "p1"
            arg = "x"
        "#;
        let config = HarnessConfig::from_toml_str(toml).unwrap();
        assert_eq!(config.timeout_seconds, 3600.0);
        assert_eq!(config.discrepancy_fraction, 0.10);
        assert_eq!(config.max_rerun_cycles, 3);
        assert!(!config.parallel);
    }

    fn record(problem: &str, solver: &str, attempt: u32, status: RunStatus) -> RunRecord {
        RunRecord {
            problem: problem.into(),
            solver: solver.into(),
            attempt,
            cycle: attempt,
            status,
            wall_seconds: 0.5,
            reported_seconds: Some(0.4),
            discrepant: false,
            exit_code: Some(0),
            start_offset_seconds: 0.0,
            output_path: None,
        }
    }

    #[test]
    fn records_to_table_maps_statuses() {
        let mut config = base_config();
        config.solvers.push(SolverSpec {
            name: "other".into(),
            command: "echo y".into(),
        });
        config.problems.push(ProblemSpec {
            id: "p2".into(),
            arg: "two".into(),
        });
        let records = vec![
            record("p1", "echoer", 1, RunStatus::Success),
            record("p1", "other", 1, RunStatus::Timeout),
            record("p2", "echoer", 1, RunStatus::ExtractorMiss),
            // no record at all for (p2, other)
        ];
        let table = records_to_table(&records, &config).unwrap();
        assert_eq!(table.cell(0, 0), &Measurement::Success(0.5)); // wall: no extractor
        assert_eq!(
            table.cell(0, 1),
            &Measurement::Failure(FailureKind::Timeout)
        );
        assert_eq!(table.cell(1, 0), &Measurement::Failure(FailureKind::Error));
        assert_eq!(
            table.cell(1, 1),
            &Measurement::Failure(FailureKind::Missing)
        );
    }

    #[test]
    fn records_to_table_prefers_reported_time_with_extractor() {
        let mut config = base_config();
        config.reported_time_extractor = Some("time: ([0-9.]+)".into());
        let records = vec![record("p1", "echoer", 1, RunStatus::Success)];
        let table = records_to_table(&records, &config).unwrap();
        assert_eq!(table.cell(0, 0), &Measurement::Success(0.4));
    }

    #[test]
    fn records_to_table_keeps_last_attempt_and_rejects_duplicates() {
        let config = base_config();
        let mut second = record("p1", "echoer", 2, RunStatus::Success);
        second.wall_seconds = 0.7;
        let records = vec![record("p1", "echoer", 1, RunStatus::Success), second];
        let table = records_to_table(&records, &config).unwrap();
        assert_eq!(table.cell(0, 0), &Measurement::Success(0.7));

        let dup = vec![
            record("p1", "echoer", 1, RunStatus::Success),
            record("p1", "echoer", 1, RunStatus::Success),
        ];
        assert!(records_to_table(&dup, &config).is_err());
    }

    #[test]
    fn extract_reported_takes_first_group() {
        let pattern = regex::Regex::new("time: ([0-9.]+)").unwrap();
        assert_eq!(
            extract_reported(&pattern, b"solved\ntime: 1.25\n", b""),
            Some(1.25)
        );
        assert_eq!(extract_reported(&pattern, b"", b"time: 0.5"), Some(0.5));
        assert_eq!(extract_reported(&pattern, b"no match", b""), None);
    }

    #[test]
    fn quick_echo_run_succeeds() {
        let config = base_config();
        let run = run_benchmark(&config).unwrap();
        assert_eq!(run.records.len(), 1);
        let r = &run.records[0];
        assert_eq!(r.status, RunStatus::Success);
        assert!(r.wall_seconds > 0.0 && r.wall_seconds < 4.0);
        assert!(run.table.cell(0, 0).is_success());
    }

    #[test]
    fn jsonl_round_trips() {
        let records = vec![record("p1", "echoer", 1, RunStatus::Success)];
        let text = write_records_jsonl(&records);
        let back: RunRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(back.problem, "p1");
        assert_eq!(back.status, RunStatus::Success);
    }
}
