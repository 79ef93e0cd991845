//! Harness integration tests with controlled stub executables.

mod common;

use std::path::{Path, PathBuf};

use perf_profile::harness::{
    run_benchmark, write_records_jsonl, HarnessConfig, RunRecord, RunStatus,
};
use perf_profile::{compute_profiles, compute_ratios, FailureKind, Measurement, RmPolicy};

fn write_stub(dir: &Path, name: &str, body: &str) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

/// A stub that sleeps and reports its own elapsed time, like a real solver.
fn self_timing_stub(dir: &Path, name: &str, sleep: f64) -> PathBuf {
    write_stub(
        dir,
        name,
        &format!(
            "s=$(date +%s.%N)\nsleep {sleep}\ne=$(date +%s.%N)\n\
             echo \"time: $(echo \"$e $s\" | awk '{{printf \"%.4f\", $1-$2}}')\""
        ),
    )
}

fn config_for(solvers: &[(&str, &PathBuf)], problems: &[&str], extra: &str) -> HarnessConfig {
    let mut toml = String::from(extra);
    for (name, path) in solvers {
        toml.push_str(&format!(
            "\n[[solvers]]\nname = \"{name}\"\ncommand = \"{} {{problem}}\"\n",
            path.display()
        ));
    }
    for id in problems {
        toml.push_str(&format!("\n[[problems]]\nid = \"{id}\"\narg = \"{id}\"\n"));
    }
    HarnessConfig::from_toml_str(&toml).unwrap()
}

#[test]
fn short_sleep_is_a_success_within_slop() {
    let dir = tempfile::tempdir().unwrap();
    let stub = write_stub(dir.path(), "s.sh", "sleep 0.2");
    let config = config_for(&[("s", &stub)], &["p1"], "timeout_seconds = 5.0\n");
    let run = run_benchmark(&config).unwrap();
    let r = &run.records[0];
    assert_eq!(r.status, RunStatus::Success);
    assert!(r.wall_seconds >= 0.2 && r.wall_seconds < 1.2, "{r:?}");
    // no extractor: the wall time enters the table
    assert_eq!(run.table.cell(0, 0).value(), Some(r.wall_seconds));
}

#[test]
fn long_sleep_is_killed_at_the_timeout() {
    let dir = tempfile::tempdir().unwrap();
    let stub = write_stub(dir.path(), "s.sh", "sleep 5");
    let config = config_for(&[("s", &stub)], &["p1"], "timeout_seconds = 0.5\n");
    let started = std::time::Instant::now();
    let run = run_benchmark(&config).unwrap();
    assert!(
        started.elapsed().as_secs_f64() < 2.0,
        "kill was not enforced"
    );
    let r = &run.records[0];
    assert_eq!(r.status, RunStatus::Timeout);
    assert!(r.wall_seconds >= 0.5 && r.wall_seconds < 1.5, "{r:?}");
    assert_eq!(
        run.table.cell(0, 0),
        &Measurement::Failure(FailureKind::Timeout)
    );
}

#[test]
fn nonzero_exit_and_extractor_miss_become_error_cells() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_stub(dir.path(), "bad.sh", "exit 3");
    let silent = write_stub(dir.path(), "silent.sh", "echo no numbers here");
    let config = config_for(
        &[("bad", &bad), ("silent", &silent)],
        &["p1"],
        "timeout_seconds = 5.0\nreported_time_extractor = \"time: ([0-9.]+)\"\n",
    );
    let run = run_benchmark(&config).unwrap();
    assert_eq!(run.records[0].status, RunStatus::NonzeroExit);
    assert_eq!(run.records[0].exit_code, Some(3));
    assert_eq!(run.records[1].status, RunStatus::ExtractorMiss);
    assert_eq!(
        run.table.cell(0, 0),
        &Measurement::Failure(FailureKind::Error)
    );
    assert_eq!(
        run.table.cell(0, 1),
        &Measurement::Failure(FailureKind::Error)
    );
}

#[test]
fn schedule_is_problem_major() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_stub(dir.path(), "a.sh", "true");
    let b = write_stub(dir.path(), "b.sh", "true");
    let config = config_for(
        &[("a", &a), ("b", &b)],
        &["p1", "p2", "p3"],
        "timeout_seconds = 5.0\n",
    );
    let run = run_benchmark(&config).unwrap();
    let visits: Vec<(String, String)> = run
        .records
        .iter()
        .map(|r| (r.problem.clone(), r.solver.clone()))
        .collect();
    let expected: Vec<(String, String)> = ["p1", "p2", "p3"]
        .iter()
        .flat_map(|p| {
            ["a", "b"]
                .iter()
                .map(move |s| (p.to_string(), s.to_string()))
        })
        .collect();
    assert_eq!(visits, expected);
    // record order agrees with actual start times
    let offsets: Vec<f64> = run.records.iter().map(|r| r.start_offset_seconds).collect();
    assert!(offsets.windows(2).all(|w| w[0] <= w[1]), "{offsets:?}");
}

#[test]
fn rerun_set_is_exactly_the_discrepant_pairs() {
    let dir = tempfile::tempdir().unwrap();
    // 0.05 vs ~0.5s wall: hugely discrepant at any sane fraction
    let liar = write_stub(dir.path(), "liar.sh", "sleep 0.5\necho \"time: 0.05\"");
    // self-measured: overhead would need to exceed half the wall to trip 0.5
    let honest = self_timing_stub(dir.path(), "honest.sh", 0.5);
    let config = config_for(
        &[("honest", &honest), ("liar", &liar)],
        &["p1", "p2"],
        "timeout_seconds = 10.0\ndiscrepancy_fraction = 0.5\nmax_rerun_cycles = 2\n\
         reported_time_extractor = \"time: ([0-9.]+)\"\n",
    );
    let run = run_benchmark(&config).unwrap();

    let cycle_pairs = |cycle: u32| -> Vec<(String, String)> {
        run.records
            .iter()
            .filter(|r| r.cycle == cycle)
            .map(|r| (r.problem.clone(), r.solver.clone()))
            .collect()
    };
    assert_eq!(cycle_pairs(1).len(), 4);
    for cycle in 2..=3 {
        let pairs = cycle_pairs(cycle);
        let discrepant_before: Vec<(String, String)> = run
            .records
            .iter()
            .filter(|r| r.cycle == cycle - 1 && r.discrepant)
            .map(|r| (r.problem.clone(), r.solver.clone()))
            .collect();
        assert_eq!(pairs, discrepant_before, "cycle {cycle}");
        assert!(pairs.iter().all(|(_, s)| s == "liar"));
    }
    // the final liar attempts keep the flag
    for r in run
        .records
        .iter()
        .filter(|r| r.solver == "liar" && r.cycle == 3)
    {
        assert!(r.discrepant);
    }
    // reported time enters the table even when flagged
    assert_eq!(run.table.cell(0, 1), &Measurement::Success(0.05));
}

#[test]
fn pipeline_to_profiles_matches_hand_computation() {
    let dir = tempfile::tempdir().unwrap();
    let fast = self_timing_stub(dir.path(), "fast.sh", 0.1);
    let slow = self_timing_stub(dir.path(), "slow.sh", 0.3);
    let config = config_for(
        &[("fast", &fast), ("slow", &slow)],
        &["p1", "p2"],
        "timeout_seconds = 10.0\ndiscrepancy_fraction = 0.9\n\
         reported_time_extractor = \"time: ([0-9.]+)\"\n",
    );
    let run = run_benchmark(&config).unwrap();
    let ratios = compute_ratios(&run.table, RmPolicy::Auto).unwrap();
    let set = compute_profiles(&ratios).unwrap();

    // fast wins every problem; slow solves everything at a ratio near 3
    let fast_profile = set.get("fast").unwrap();
    assert_eq!(fast_profile.win_probability(), 1.0);
    assert_eq!(fast_profile.success_probability(), 1.0);
    let slow_profile = set.get("slow").unwrap();
    assert_eq!(slow_profile.win_probability(), 0.0);
    assert_eq!(slow_profile.success_probability(), 1.0);
    for &(tau, _) in slow_profile.breakpoints() {
        assert!((1.5..6.0).contains(&tau), "ratio {tau} out of range");
    }
}

#[test]
fn captures_are_persisted_and_capped() {
    let dir = tempfile::tempdir().unwrap();
    let noisy = write_stub(
        dir.path(),
        "noisy.sh",
        "yes filler | head -c 100000\necho done",
    );
    let captures = dir.path().join("captures");
    let config = config_for(
        &[("noisy", &noisy)],
        &["p1"],
        &format!(
            "timeout_seconds = 5.0\ncapture_dir = \"{}\"\ncapture_limit_bytes = 4096\n",
            captures.display()
        ),
    );
    let run = run_benchmark(&config).unwrap();
    let path = run.records[0].output_path.clone().expect("capture path");
    let contents = std::fs::read(&path).unwrap();
    assert!(contents.starts_with(b"=== stdout ==="));
    // capped stdout plus the stderr section header
    assert!(
        contents.len() <= 4096 + 64,
        "capture too large: {}",
        contents.len()
    );
}

#[test]
fn parallel_mode_completes_the_full_table() {
    let dir = tempfile::tempdir().unwrap();
    let quick = write_stub(dir.path(), "q.sh", "sleep 0.05");
    let config = config_for(
        &[("q1", &quick), ("q2", &quick.clone())],
        &["p1", "p2", "p3"],
        "timeout_seconds = 5.0\nparallel = true\n",
    );
    let run = run_benchmark(&config).unwrap();
    assert_eq!(run.records.len(), 6);
    for p in 0..3 {
        for s in 0..2 {
            assert!(run.table.cell(p, s).is_success());
        }
    }
}

#[test]
fn records_log_round_trips_through_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let stub = write_stub(dir.path(), "s.sh", "true");
    let config = config_for(&[("s", &stub)], &["p1", "p2"], "timeout_seconds = 5.0\n");
    let run = run_benchmark(&config).unwrap();
    let text = write_records_jsonl(&run.records);
    let parsed: Vec<RunRecord> = text
        .lines()
        .map(|line| serde_json::from_str(line).unwrap())
        .collect();
    assert_eq!(parsed.len(), run.records.len());
    assert_eq!(parsed[0].problem, "p1");
    assert_eq!(parsed[1].problem, "p2");
}
