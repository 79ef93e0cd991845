//! Performance profiles for solver benchmarking.
//!
//! A performance profile is the cumulative distribution function of a
//! solver's performance ratios — each problem's metric divided by the best
//! metric any solver achieved on that problem — over a common problem set.
//! Profiles expose wins (value at ratio 1), overall success rates (the
//! flatline height), and everything in between, without letting a handful
//! of hard problems or solver failures distort the comparison.
//!
//! The crate covers the full workflow:
//!
//! - [`table`]: timing tables of raw measurements with failure markers.
//! - [`ratio`]: performance ratios, the failure sentinel r_M, quartiles.
//! - [`profile`]: step-function profiles, queries, rescaling, distances.
//! - [`ingest`]: CSV/JSON readers, subset filters, table merging.
//! - [`plot`]: step geometry, SVG rendering, step-data export.
//! - [`harness`]: a timing harness that runs solver commands with timeout
//!   enforcement and wall-clock consistency re-runs.
//! - [`cli`]: the `perf-profile` command-line front end.
//!
//! ```
//! use perf_profile::ingest::{parse_timing_csv, IngestPolicy};
//! use perf_profile::{compute_profiles, compute_ratios, RmPolicy};
//!
//! # fn main() -> perf_profile::Result<()> {
//! let csv = "problem,A,B\np1,2.0,4.0\np2,6.0,2.0\np3,1.0,fail\np4,10.0,5.0\n";
//! let table = parse_timing_csv(csv, &IngestPolicy::default())?;
//! let profiles = compute_profiles(&compute_ratios(&table, RmPolicy::Auto)?)?;
//!
//! let a = profiles.get("A")?;
//! assert_eq!(a.win_probability(), 0.5); // fastest on half the problems
//! assert_eq!(a.evaluate(2.0), 0.75); // within 2x of the best on 3 of 4
//! assert_eq!(profiles.get("B")?.success_probability(), 0.75); // one failure
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod error;
pub mod harness;
pub mod ingest;
pub mod plot;
pub mod profile;
pub mod ratio;
pub mod table;

pub use error::{Error, Result};
pub use profile::{
    compute_profile, compute_profiles, l1_distance, sup_distance, Profile, ProfileSet,
};
pub use ratio::{compute_ratios, quartiles, QuartileSummary, RatioMatrix, RmPolicy};
pub use table::{FailureKind, Measurement, TimingTable};
