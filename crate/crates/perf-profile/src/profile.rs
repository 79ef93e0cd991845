//! Performance profiles: the cumulative distribution function of one
//! solver's performance ratios, stored as exact cumulative counts so that
//! profile values are k/n_p with integer k.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::RatioMatrix;

/// A nondecreasing right-continuous step function on the ratio axis.
///
/// `breakpoints` holds the distinct ratio values of the solver together with
/// the cumulative count of ratios at or below each; the function value at
/// tau is `count / n_p` for the greatest breakpoint <= tau, and 0 below the
/// first breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    solver: String,
    n_p: usize,
    r_m: f64,
    breakpoints: Vec<(f64, usize)>,
    success_count: usize,
}

impl Profile {
    /// Build a profile directly from a vector of ratios in [1, r_m].
    pub fn from_ratios(solver: impl Into<String>, ratios: &[f64], r_m: f64) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::InvalidProfile(
                "profile requires at least one problem".into(),
            ));
        }
        if !r_m.is_finite() || r_m <= 1.0 {
            return Err(Error::InvalidProfile(format!(
                "r_M must be finite and > 1, got {r_m}"
            )));
        }
        for &r in ratios {
            if !r.is_finite() || !(1.0..=r_m).contains(&r) {
                return Err(Error::InvalidProfile(format!(
                    "ratio {r} outside [1, {r_m}]"
                )));
            }
        }
        let mut sorted = ratios.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut breakpoints: Vec<(f64, usize)> = Vec::new();
        for (i, &r) in sorted.iter().enumerate() {
            match breakpoints.last_mut() {
                Some((tau, count)) if *tau == r => *count = i + 1,
                _ => breakpoints.push((r, i + 1)),
            }
        }
        let success_count = sorted.iter().filter(|&&r| r < r_m).count();
        Ok(Profile {
            solver: solver.into(),
            n_p: ratios.len(),
            r_m,
            breakpoints,
            success_count,
        })
    }

    /// Rebuild a profile from breakpoint (tau, cumulative count) pairs, as
    /// stored in the profile JSON interchange format.
    pub fn from_breakpoints(
        solver: impl Into<String>,
        n_p: usize,
        r_m: f64,
        breakpoints: Vec<(f64, usize)>,
    ) -> Result<Self> {
        if n_p == 0 {
            return Err(Error::InvalidProfile("n_p must be positive".into()));
        }
        if !r_m.is_finite() || r_m <= 1.0 {
            return Err(Error::InvalidProfile(format!(
                "r_M must be finite and > 1, got {r_m}"
            )));
        }
        if breakpoints.is_empty() {
            return Err(Error::InvalidProfile("no breakpoints".into()));
        }
        let mut prev: Option<(f64, usize)> = None;
        for &(tau, count) in &breakpoints {
            if !tau.is_finite() || tau > r_m {
                return Err(Error::InvalidProfile(format!(
                    "breakpoint tau {tau} outside (-inf, r_M = {r_m}]"
                )));
            }
            if count == 0 || count > n_p {
                return Err(Error::InvalidProfile(format!(
                    "cumulative count {count} outside 1..={n_p}"
                )));
            }
            if let Some((ptau, pcount)) = prev {
                if tau <= ptau || count <= pcount {
                    return Err(Error::InvalidProfile(
                        "breakpoints must be strictly increasing in tau and count".into(),
                    ));
                }
            }
            prev = Some((tau, count));
        }
        let (_, last_count) = *breakpoints.last().unwrap();
        if last_count != n_p {
            return Err(Error::InvalidProfile(format!(
                "last cumulative count {last_count} must equal n_p = {n_p}"
            )));
        }
        let success_count = breakpoints
            .iter()
            .rev()
            .find(|&&(tau, _)| tau < r_m)
            .map_or(0, |&(_, count)| count);
        Ok(Profile {
            solver: solver.into(),
            n_p,
            r_m,
            breakpoints,
            success_count,
        })
    }

    pub fn solver(&self) -> &str {
        &self.solver
    }

    pub fn n_problems(&self) -> usize {
        self.n_p
    }

    pub fn r_m(&self) -> f64 {
        self.r_m
    }

    /// Breakpoints as (tau, cumulative count).
    pub fn breakpoints(&self) -> &[(f64, usize)] {
        &self.breakpoints
    }

    /// Breakpoints as (tau, value) with value = count / n_p.
    pub fn breakpoint_values(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n_p as f64;
        self.breakpoints
            .iter()
            .map(move |&(t, c)| (t, c as f64 / n))
    }

    /// Number of ratios at or below tau (exact count).
    pub fn evaluate_count(&self, tau: f64) -> usize {
        let idx = self.breakpoints.partition_point(|&(t, _)| t <= tau);
        if idx == 0 {
            0
        } else {
            self.breakpoints[idx - 1].1
        }
    }

    /// Fraction of problems whose ratio is at most tau; 0 below the first
    /// breakpoint (in particular for tau < 1).
    pub fn evaluate(&self, tau: f64) -> f64 {
        self.evaluate_count(tau) as f64 / self.n_p as f64
    }

    /// Fraction of problems on which this solver matched the best metric.
    pub fn win_probability(&self) -> f64 {
        self.evaluate(1.0)
    }

    /// Fraction of problems the solver solved at all: the profile value just
    /// below r_M, where the function flatlines.
    pub fn success_probability(&self) -> f64 {
        self.success_count as f64 / self.n_p as f64
    }

    /// Largest breakpoint strictly below r_M, if the solver solved anything.
    pub fn largest_finite_breakpoint(&self) -> Option<f64> {
        self.breakpoints
            .iter()
            .rev()
            .find(|&&(tau, _)| tau < self.r_m)
            .map(|&(tau, _)| tau)
    }

    /// Map every breakpoint (and r_M) through log_base. Values are
    /// unchanged, so the rescaled profile at log_base(tau) equals the
    /// original at tau.
    pub fn rescale_log(&self, base: f64) -> Result<Profile> {
        if !base.is_finite() || base <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "log base must be > 1, got {base}"
            )));
        }
        let log = log_fn(base);
        let mut breakpoints: Vec<(f64, usize)> = Vec::with_capacity(self.breakpoints.len());
        for &(tau, count) in &self.breakpoints {
            let t = log(tau);
            match breakpoints.last_mut() {
                // adjacent ratios can collapse to one float under the log map
                Some((pt, pc)) if *pt == t => *pc = count,
                _ => breakpoints.push((t, count)),
            }
        }
        Ok(Profile {
            solver: self.solver.clone(),
            n_p: self.n_p,
            r_m: log(self.r_m),
            breakpoints,
            success_count: self.success_count,
        })
    }
}

pub(crate) fn log_fn(base: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        if base == 2.0 {
            t.log2()
        } else if base == 10.0 {
            t.log10()
        } else {
            t.log(base)
        }
    }
}

/// Profiles for every solver of a ratio matrix, sharing n_p and r_M.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSet {
    n_p: usize,
    r_m: f64,
    profiles: Vec<Profile>,
}

impl ProfileSet {
    pub fn new(profiles: Vec<Profile>) -> Result<Self> {
        let Some(first) = profiles.first() else {
            return Err(Error::InvalidProfile("empty profile set".into()));
        };
        let (n_p, r_m) = (first.n_p, first.r_m);
        for p in &profiles {
            if p.n_p != n_p || p.r_m != r_m {
                return Err(Error::InvalidProfile(format!(
                    "profile `{}` does not share n_p/r_M with the set",
                    p.solver
                )));
            }
        }
        Ok(ProfileSet { n_p, r_m, profiles })
    }

    pub fn n_problems(&self) -> usize {
        self.n_p
    }

    pub fn r_m(&self) -> f64 {
        self.r_m
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn solvers(&self) -> impl Iterator<Item = &str> {
        self.profiles.iter().map(|p| p.solver())
    }

    pub fn get(&self, solver: &str) -> Result<&Profile> {
        self.profiles
            .iter()
            .find(|p| p.solver() == solver)
            .ok_or_else(|| Error::UnknownSolver(solver.to_string()))
    }

    /// Serialize to the JSON interchange document.
    pub fn to_json_string(&self) -> String {
        let doc = ProfileSetDoc::from(self);
        serde_json::to_string_pretty(&doc).expect("profile set serializes")
    }

    /// Parse the JSON interchange document back into a profile set.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: ProfileSetDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// Profile of one solver from a ratio matrix.
pub fn compute_profile(ratios: &RatioMatrix, solver: &str) -> Result<Profile> {
    let column = ratios.solver_ratios(solver)?;
    Profile::from_ratios(solver, &column, ratios.r_m())
}

/// Profiles of every solver, in the matrix's solver order.
pub fn compute_profiles(ratios: &RatioMatrix) -> Result<ProfileSet> {
    let profiles = ratios
        .solvers()
        .to_vec()
        .iter()
        .map(|s| compute_profile(ratios, s))
        .collect::<Result<Vec<_>>>()?;
    ProfileSet::new(profiles)
}

fn require_same_n_p(a: &Profile, b: &Profile) -> Result<()> {
    if a.n_p != b.n_p {
        return Err(Error::MismatchedProblemCount {
            left: a.n_p,
            right: b.n_p,
        });
    }
    Ok(())
}

/// Distinct breakpoint positions of both profiles, sorted.
fn merged_breakpoints(a: &Profile, b: &Profile) -> Vec<f64> {
    let mut taus: Vec<f64> = a
        .breakpoints
        .iter()
        .chain(b.breakpoints.iter())
        .map(|&(t, _)| t)
        .collect();
    taus.sort_by(|x, y| x.partial_cmp(y).unwrap());
    taus.dedup();
    taus
}

/// Exact integral of |rho_a - rho_b| over [1, upper].
///
/// Both functions are piecewise constant, so the integral is a finite sum
/// over the merged breakpoint grid. Breakpoints beyond `upper` do not
/// contribute; `upper` should be at least the largest finite breakpoint of
/// both profiles (r_M by default) for the full area between the profiles.
pub fn l1_distance(a: &Profile, b: &Profile, upper: f64) -> Result<f64> {
    require_same_n_p(a, b)?;
    if !upper.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "integration bound must be finite, got {upper}"
        )));
    }
    let mut grid = vec![1.0];
    grid.extend(
        merged_breakpoints(a, b)
            .into_iter()
            .filter(|&t| t > 1.0 && t < upper),
    );
    grid.push(upper);
    let mut total = 0.0;
    for pair in grid.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        // counts are exact, so the height of each piece is exact
        let diff = a.evaluate_count(lo).abs_diff(b.evaluate_count(lo));
        total += diff as f64 * (hi - lo);
    }
    Ok(total / a.n_p as f64)
}

/// Maximum of |rho_a - rho_b| over the whole axis.
pub fn sup_distance(a: &Profile, b: &Profile) -> Result<f64> {
    require_same_n_p(a, b)?;
    let max_count_diff = merged_breakpoints(a, b)
        .into_iter()
        .map(|t| a.evaluate_count(t).abs_diff(b.evaluate_count(t)))
        .max()
        .unwrap_or(0);
    Ok(max_count_diff as f64 / a.n_p as f64)
}

/// JSON interchange document for a profile set: archives profiles so they
/// can be re-plotted or compared without the raw timing data.
#[derive(Debug, Serialize, Deserialize)]
struct ProfileSetDoc {
    n_p: usize,
    r_m: f64,
    solvers: Vec<String>,
    profiles: Vec<ProfileDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileDoc {
    solver: String,
    success_probability: f64,
    /// (tau, value) pairs with value = count / n_p.
    breakpoints: Vec<(f64, f64)>,
}

impl From<&ProfileSet> for ProfileSetDoc {
    fn from(set: &ProfileSet) -> Self {
        ProfileSetDoc {
            n_p: set.n_p,
            r_m: set.r_m,
            solvers: set.solvers().map(str::to_string).collect(),
            profiles: set
                .profiles
                .iter()
                .map(|p| ProfileDoc {
                    solver: p.solver.clone(),
                    success_probability: p.success_probability(),
                    breakpoints: p.breakpoint_values().collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ProfileSetDoc> for ProfileSet {
    type Error = Error;

    fn try_from(doc: ProfileSetDoc) -> Result<Self> {
        if doc.solvers.len() != doc.profiles.len() {
            return Err(Error::InvalidProfile(format!(
                "{} solver names for {} profiles",
                doc.solvers.len(),
                doc.profiles.len()
            )));
        }
        let profiles = doc
            .profiles
            .into_iter()
            .map(|p| {
                // values are k/n_p, so counts round-trip exactly
                let breakpoints = p
                    .breakpoints
                    .into_iter()
                    .map(|(tau, value)| (tau, (value * doc.n_p as f64).round() as usize))
                    .collect();
                let profile = Profile::from_breakpoints(p.solver, doc.n_p, doc.r_m, breakpoints)?;
                let stored = p.success_probability;
                if (profile.success_probability() - stored).abs() > 1e-9 {
                    return Err(Error::InvalidProfile(format!(
                        "stored success probability {stored} disagrees with breakpoints for `{}`",
                        profile.solver
                    )));
                }
                Ok(profile)
            })
            .collect::<Result<Vec<_>>>()?;
        ProfileSet::new(profiles)
    }
}
