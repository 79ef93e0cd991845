//! Step-plot geometry and SVG rendering for profile sets.
//!
//! Rendering is deterministic: identical inputs produce byte-identical
//! documents (stable element order, coordinates fixed at 4 decimals).

use crate::error::{Error, Result};
use crate::profile::{log_fn, Profile, ProfileSet};

/// x-axis scale of a plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Linear,
    /// Logarithmic with the given base (> 1).
    Log(f64),
}

impl Scale {
    pub fn transform(&self, tau: f64) -> f64 {
        match *self {
            Scale::Linear => tau,
            Scale::Log(base) => log_fn(base)(tau),
        }
    }

    pub fn inverse(&self, x: f64) -> f64 {
        match *self {
            Scale::Linear => x,
            Scale::Log(base) => base.powf(x),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Scale::Log(base) = *self {
            if !base.is_finite() || base <= 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "log base must be > 1, got {base}"
                )));
            }
        }
        Ok(())
    }
}

/// Stroke style for one solver's line; the default cycle varies dash
/// patterns as well as colors so figures survive grayscale.
#[derive(Debug, Clone, PartialEq)]
pub struct LineStyle {
    pub color: String,
    /// SVG stroke-dasharray; empty string means solid.
    pub dash: String,
}

fn default_style_cycle() -> Vec<LineStyle> {
    [
        ("#1a6fb5", ""),
        ("#c23b22", "7 3"),
        ("#2e8b57", "2 3"),
        ("#7b3f9d", "9 3 2 3"),
        ("#b8860b", "5 2"),
        ("#36454f", "1 3"),
    ]
    .iter()
    .map(|&(color, dash)| LineStyle {
        color: color.to_string(),
        dash: dash.to_string(),
    })
    .collect()
}

/// Everything a plot needs besides the profiles themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub scale: Scale,
    /// Plot-coordinate range (after the log transform when log-scaled).
    /// `None` selects the automatic range.
    pub tau_range: Option<(f64, f64)>,
    /// Fraction by which the automatic range extends past the last genuine
    /// breakpoint, exposing the flatline.
    pub extend_fraction: f64,
    /// Suppress the artificial jump to 1 at r_M so profiles with failures
    /// visibly flatline at their success probability.
    pub include_flatline: bool,
    pub title: String,
    pub x_label: Option<String>,
    pub y_label: Option<String>,
    pub width: f64,
    pub height: f64,
    pub style_cycle: Vec<LineStyle>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            scale: Scale::Linear,
            tau_range: None,
            extend_fraction: 0.05,
            include_flatline: true,
            title: String::new(),
            x_label: None,
            y_label: None,
            width: 640.0,
            height: 480.0,
            style_cycle: default_style_cycle(),
        }
    }
}

impl PlotSpec {
    pub fn validate(&self) -> Result<()> {
        self.scale.validate()?;
        if let Some((lo, hi)) = self.tau_range {
            if lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "range lower bound {lo} must be below upper bound {hi}"
                )));
            }
            if matches!(self.scale, Scale::Log(_)) && lo < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "log-scale range must start at or above 0, got {lo}"
                )));
            }
        }
        if self.extend_fraction < 0.0 {
            return Err(Error::InvalidArgument(
                "extend fraction must be non-negative".into(),
            ));
        }
        if self.width <= 0.0 || self.height <= 0.0 {
            return Err(Error::InvalidArgument("plot size must be positive".into()));
        }
        if self.style_cycle.is_empty() {
            return Err(Error::InvalidArgument(
                "style cycle must not be empty".into(),
            ));
        }
        Ok(())
    }

    fn x_label(&self) -> String {
        self.x_label.clone().unwrap_or_else(|| match self.scale {
            Scale::Linear => "performance ratio".to_string(),
            Scale::Log(2.0) => "log2(performance ratio)".to_string(),
            Scale::Log(base) => format!("log{base}(performance ratio)"),
        })
    }

    fn y_label(&self) -> String {
        self.y_label
            .clone()
            .unwrap_or_else(|| "fraction of problems".to_string())
    }
}

/// Automatic plot range: starts at 0 and ends past the largest genuine
/// (below-r_M) breakpoint of any solver, extended to show the flatline.
pub fn auto_range(set: &ProfileSet, spec: &PlotSpec) -> (f64, f64) {
    let max_finite = set
        .profiles()
        .iter()
        .filter_map(Profile::largest_finite_breakpoint)
        .fold(None::<f64>, |acc, t| Some(acc.map_or(t, |a| a.max(t))));
    let hi = max_finite
        .map(|t| spec.scale.transform(t) * (1.0 + spec.extend_fraction))
        .unwrap_or(0.0);
    // degenerate sets (every breakpoint at ratio 1, or all failures)
    let hi = if hi > 0.0 {
        hi
    } else {
        1.0 + spec.extend_fraction
    };
    (0.0, hi)
}

fn resolve_range(set: &ProfileSet, spec: &PlotSpec) -> (f64, f64) {
    spec.tau_range.unwrap_or_else(|| auto_range(set, spec))
}

/// The right-continuous staircase of one profile over a plot range, in plot
/// coordinates. Consecutive segments alternate horizontal/vertical.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPolyline {
    pub solver: String,
    pub vertices: Vec<(f64, f64)>,
}

impl StepPolyline {
    /// y value at x, taking the post-jump value on verticals.
    pub fn y_at(&self, x: f64) -> f64 {
        let mut y = self.vertices.first().map_or(0.0, |&(_, y0)| y0);
        for &(vx, vy) in &self.vertices {
            if vx <= x {
                y = vy;
            } else {
                break;
            }
        }
        y
    }
}

fn polyline_in_range(profile: &Profile, spec: &PlotSpec, lo: f64, hi: f64) -> StepPolyline {
    // breakpoints in plot coordinates; the artificial jump at r_M is
    // dropped when flatlining so failure mass never reads as success
    let mut steps: Vec<(f64, f64)> = Vec::new();
    for (tau, value) in profile.breakpoint_values() {
        if spec.include_flatline && tau == profile.r_m() {
            continue;
        }
        let x = spec.scale.transform(tau);
        match steps.last_mut() {
            Some((px, pv)) if *px == x => *pv = value,
            _ => steps.push((x, value)),
        }
    }

    let mut y = steps
        .iter()
        .take_while(|&&(x, _)| x <= lo)
        .last()
        .map_or(0.0, |&(_, v)| v);
    let mut vertices = vec![(lo, y)];
    for &(x, v) in steps.iter().filter(|&&(x, _)| x > lo && x <= hi) {
        vertices.push((x, y));
        vertices.push((x, v));
        y = v;
    }
    vertices.push((hi, y));
    vertices.dedup();
    StepPolyline {
        solver: profile.solver().to_string(),
        vertices,
    }
}

/// Staircase for one profile. The range comes from `spec.tau_range`, or the
/// automatic rule applied to this profile alone.
pub fn profile_to_polyline(profile: &Profile, spec: &PlotSpec) -> Result<StepPolyline> {
    spec.validate()?;
    let (lo, hi) = spec.tau_range.unwrap_or_else(|| {
        let hi = profile
            .largest_finite_breakpoint()
            .map(|t| spec.scale.transform(t) * (1.0 + spec.extend_fraction))
            .unwrap_or(0.0);
        (
            0.0,
            if hi > 0.0 {
                hi
            } else {
                1.0 + spec.extend_fraction
            },
        )
    });
    Ok(polyline_in_range(profile, spec, lo, hi))
}

/// Staircases for every profile of a set over a shared range.
pub fn set_to_polylines(set: &ProfileSet, spec: &PlotSpec) -> Result<Vec<StepPolyline>> {
    spec.validate()?;
    let (lo, hi) = resolve_range(set, spec);
    Ok(set
        .profiles()
        .iter()
        .map(|p| polyline_in_range(p, spec, lo, hi))
        .collect())
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    for m in [1.0, 2.0, 5.0, 10.0] {
        if raw <= m * mag {
            return m * mag;
        }
    }
    10.0 * mag
}

fn tick_values(lo: f64, hi: f64, target: usize) -> (f64, Vec<f64>) {
    let step = nice_step(hi - lo, target);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (step, (first..=last).map(|i| i as f64 * step).collect())
}

fn tick_label(value: f64, step: f64) -> String {
    // enough decimals to render the step itself exactly
    let mut decimals = 0;
    while decimals < 9 {
        let scaled = step * 10f64.powi(decimals);
        if (scaled - scaled.round()).abs() < 1e-9 {
            break;
        }
        decimals += 1;
    }
    format!("{value:.prec$}", prec = decimals as usize)
}

/// Render a profile set as a self-contained SVG 1.1 document.
pub fn render_svg(set: &ProfileSet, spec: &PlotSpec) -> Result<String> {
    spec.validate()?;
    let (lo, hi) = resolve_range(set, spec);
    let polylines = set
        .profiles()
        .iter()
        .map(|p| polyline_in_range(p, spec, lo, hi))
        .collect::<Vec<_>>();

    let (width, height) = (spec.width, spec.height);
    let (ml, mr, mt, mb) = (58.0, 20.0, 34.0, 48.0);
    let (plot_w, plot_h) = (width - ml - mr, height - mt - mb);
    let to_px_x = |x: f64| ml + (x - lo) / (hi - lo) * plot_w;
    let to_px_y = |y: f64| mt + (1.0 - y) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n",
        w = fmt(width),
        h = fmt(height)
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(width),
        fmt(height)
    ));

    let (x_step, x_ticks) = tick_values(lo, hi, 8);
    let y_ticks: Vec<f64> = (0..=5).map(|i| i as f64 * 0.2).collect();

    // grid
    svg.push_str("<g stroke=\"#dddddd\" stroke-width=\"1\">\n");
    for &t in &x_ticks {
        let x = fmt(to_px_x(t));
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\"/>\n",
            fmt(mt),
            fmt(mt + plot_h)
        ));
    }
    for &t in &y_ticks {
        let y = fmt(to_px_y(t));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>\n",
            fmt(ml),
            fmt(ml + plot_w)
        ));
    }
    svg.push_str("</g>\n");

    // frame
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n",
        fmt(ml),
        fmt(mt),
        fmt(plot_w),
        fmt(plot_h)
    ));

    // profiles
    for (i, poly) in polylines.iter().enumerate() {
        let style = &spec.style_cycle[i % spec.style_cycle.len()];
        let dash = if style.dash.is_empty() {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{}\"", style.dash)
        };
        let points: Vec<String> = poly
            .vertices
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(to_px_x(x)), fmt(to_px_y(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{} points=\"{}\"/>\n",
            style.color,
            dash,
            points.join(" ")
        ));
    }

    // tick labels
    svg.push_str("<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n");
    for &t in &x_ticks {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt(to_px_x(t)),
            fmt(mt + plot_h + 16.0),
            tick_label(t, x_step)
        ));
    }
    for &t in &y_ticks {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            fmt(ml - 6.0),
            fmt(to_px_y(t) + 4.0),
            tick_label(t, 0.2)
        ));
    }
    svg.push_str("</g>\n");

    // axis labels and title
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\" fill=\"#111111\">{}</text>\n",
        fmt(ml + plot_w / 2.0),
        fmt(height - 10.0),
        escape_xml(&spec.x_label())
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\" fill=\"#111111\" transform=\"rotate(-90 {x} {y})\">{}</text>\n",
        fmt(16.0),
        fmt(mt + plot_h / 2.0),
        escape_xml(&spec.y_label()),
        x = fmt(16.0),
        y = fmt(mt + plot_h / 2.0)
    ));
    if !spec.title.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"15\" fill=\"#111111\">{}</text>\n",
            fmt(ml + plot_w / 2.0),
            fmt(20.0),
            escape_xml(&spec.title)
        ));
    }

    // legend, bottom-right inside the frame, one entry per solver
    let name_px = 7.0;
    let legend_w = 40.0
        + set
            .solvers()
            .map(|s| s.chars().count() as f64 * name_px)
            .fold(0.0, f64::max);
    let entry_h = 16.0;
    let legend_h = set.profiles().len() as f64 * entry_h + 10.0;
    let lx = ml + plot_w - legend_w - 10.0;
    let ly = mt + plot_h - legend_h - 10.0;
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\" \
         fill-opacity=\"0.85\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n",
        fmt(lx),
        fmt(ly),
        fmt(legend_w),
        fmt(legend_h)
    ));
    for (i, profile) in set.profiles().iter().enumerate() {
        let style = &spec.style_cycle[i % spec.style_cycle.len()];
        let dash = if style.dash.is_empty() {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{}\"", style.dash)
        };
        let ey = ly + 5.0 + i as f64 * entry_h + entry_h / 2.0;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{}\" \
             stroke-width=\"1.8\"{}/>\n",
            fmt(lx + 6.0),
            fmt(lx + 30.0),
            style.color,
            dash,
            y = fmt(ey)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             fill=\"#333333\">{}</text>\n",
            fmt(lx + 36.0),
            fmt(ey + 4.0),
            escape_xml(profile.solver())
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Tabular step data: one row per distinct breakpoint across all solvers,
/// tau in plot coordinates, one right-continuous value column per solver.
pub fn export_steps(set: &ProfileSet, spec: &PlotSpec) -> Result<String> {
    spec.validate()?;
    let mut taus: Vec<f64> = set
        .profiles()
        .iter()
        .flat_map(|p| p.breakpoints().iter().map(|&(t, _)| t))
        .collect();
    taus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    taus.dedup();

    let mut out = String::from("tau");
    for solver in set.solvers() {
        out.push(',');
        out.push_str(solver);
    }
    out.push('\n');
    for &tau in &taus {
        out.push_str(&format!("{}", spec.scale.transform(tau)));
        for profile in set.profiles() {
            out.push_str(&format!(",{}", profile.evaluate(tau)));
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{compute_profiles, ProfileSet};
    use crate::ratio::{compute_ratios, RmPolicy};

    fn example_set() -> ProfileSet {
        let ratios = compute_ratios(&crate::ratio::tests::example_table(), RmPolicy::Auto).unwrap();
        compute_profiles(&ratios).unwrap()
    }

    fn single_profile_set(ratios: &[f64], r_m: f64) -> ProfileSet {
        ProfileSet::new(vec![Profile::from_ratios("S", ratios, r_m).unwrap()]).unwrap()
    }

    #[test]
    fn auto_range_log2_extends_past_largest_ratio() {
        let set = single_profile_set(&[1.0, 12.0, 1043.0], 2086.0);
        let spec = PlotSpec {
            scale: Scale::Log(2.0),
            ..PlotSpec::default()
        };
        let (lo, hi) = auto_range(&set, &spec);
        assert_eq!(lo, 0.0);
        let expected = 1043f64.log2() * 1.05;
        assert!((hi - expected).abs() < 1e-12, "hi = {hi}");
        assert!(hi >= 1043f64.log2());
    }

    #[test]
    fn auto_range_all_unit_ratios() {
        let set = single_profile_set(&[1.0, 1.0], 2.0);
        let (lo, hi) = auto_range(&set, &PlotSpec::default());
        assert_eq!((lo, hi), (0.0, 1.05));
    }

    #[test]
    fn auto_range_linear_two_solvers() {
        let a = Profile::from_ratios("A", &[1.0, 4.0], 8.0).unwrap();
        let b = Profile::from_ratios("B", &[1.0, 2.0], 8.0).unwrap();
        let set = ProfileSet::new(vec![a, b]).unwrap();
        let (lo, hi) = auto_range(&set, &PlotSpec::default());
        assert_eq!(lo, 0.0);
        assert!((hi - 4.2).abs() < 1e-12);
    }

    #[test]
    fn polyline_suppresses_rm_jump_and_flatlines() {
        let set = example_set();
        let spec = PlotSpec {
            tau_range: Some((0.0, 6.3)),
            ..PlotSpec::default()
        };
        let b = profile_to_polyline(set.get("B").unwrap(), &spec).unwrap();
        assert_eq!(
            b.vertices,
            vec![
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 0.5),
                (2.0, 0.5),
                (2.0, 0.75),
                (6.3, 0.75),
            ]
        );
    }

    #[test]
    fn polyline_without_failures_climbs_to_one_and_stays() {
        let set = single_profile_set(&[1.0, 2.0, 3.0], 6.0);
        let spec = PlotSpec {
            tau_range: Some((0.0, 5.0)),
            ..PlotSpec::default()
        };
        let poly = profile_to_polyline(&set.profiles()[0], &spec).unwrap();
        assert_eq!(poly.vertices.last(), Some(&(5.0, 1.0)));
        assert_eq!(poly.y_at(3.0), 1.0);
        assert_eq!(poly.y_at(4.9), 1.0);
    }

    #[test]
    fn polyline_single_unit_breakpoint() {
        let set = single_profile_set(&[1.0, 1.0], 2.0);
        let spec = PlotSpec {
            tau_range: Some((0.0, 1.05)),
            ..PlotSpec::default()
        };
        let poly = profile_to_polyline(&set.profiles()[0], &spec).unwrap();
        assert_eq!(
            poly.vertices,
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (1.05, 1.0)]
        );
    }

    #[test]
    fn polyline_draws_rm_jump_when_flatline_disabled() {
        let set = example_set();
        let spec = PlotSpec {
            tau_range: Some((0.0, 6.3)),
            include_flatline: false,
            ..PlotSpec::default()
        };
        let b = profile_to_polyline(set.get("B").unwrap(), &spec).unwrap();
        assert_eq!(b.vertices.last(), Some(&(6.3, 1.0)));
        assert!(b.vertices.contains(&(6.0, 1.0)));
    }

    #[test]
    fn polyline_segments_alternate_and_never_descend() {
        let set = example_set();
        for include_flatline in [true, false] {
            let spec = PlotSpec {
                include_flatline,
                ..PlotSpec::default()
            };
            let (lo, hi) = auto_range(&set, &spec);
            for poly in set_to_polylines(&set, &spec).unwrap() {
                let v = &poly.vertices;
                for w in v.windows(2) {
                    let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                    assert!(x1 >= x0 && y1 >= y0, "{poly:?}");
                    let horizontal = y0 == y1;
                    let vertical = x0 == x1;
                    assert!(horizontal ^ vertical, "degenerate segment in {poly:?}");
                }
                for w in v.windows(3) {
                    let h01 = w[0].1 == w[1].1;
                    let h12 = w[1].1 == w[2].1;
                    assert!(h01 != h12, "segments do not alternate in {poly:?}");
                }
                assert!(v.iter().all(|&(_, y)| (0.0..=1.0).contains(&y)));
                assert!(v.iter().all(|&(x, _)| (lo..=hi).contains(&x)));
            }
        }
    }

    #[test]
    fn polyline_matches_evaluate_below_rm() {
        let set = example_set();
        let spec = PlotSpec::default();
        let (lo, hi) = auto_range(&set, &spec);
        for profile in set.profiles() {
            let poly = profile_to_polyline(
                profile,
                &PlotSpec {
                    tau_range: Some((lo, hi)),
                    ..spec.clone()
                },
            )
            .unwrap();
            let cap = hi.min(profile.r_m());
            for i in 0..200 {
                let x = lo + (cap - lo) * i as f64 / 200.0;
                if x >= cap {
                    break;
                }
                let expected = profile.evaluate(spec.scale.inverse(x));
                assert!(
                    (poly.y_at(x) - expected).abs() < 1e-3,
                    "{} at x = {x}: {} vs {expected}",
                    profile.solver(),
                    poly.y_at(x)
                );
            }
        }
    }

    #[test]
    fn log_scale_polyline_starts_at_zero() {
        let set = example_set();
        let spec = PlotSpec {
            scale: Scale::Log(2.0),
            ..PlotSpec::default()
        };
        let polys = set_to_polylines(&set, &spec).unwrap();
        // ratio 1 maps to 0, so the first jump happens at x = 0
        assert_eq!(polys[0].y_at(0.0), 0.5);
    }

    #[test]
    fn render_is_deterministic() {
        let set = example_set();
        let spec = PlotSpec {
            title: "example".into(),
            ..PlotSpec::default()
        };
        let one = render_svg(&set, &spec).unwrap();
        let two = render_svg(&set, &spec).unwrap();
        assert_eq!(one, two);
        assert!(one.starts_with("<svg"));
        assert!(one.ends_with("</svg>\n"));
    }

    #[test]
    fn legend_has_one_entry_per_solver_in_order() {
        let profiles: Vec<Profile> = ["S1", "S2", "S3", "S4"]
            .iter()
            .map(|s| Profile::from_ratios(*s, &[1.0, 2.0], 4.0).unwrap())
            .collect();
        let set = ProfileSet::new(profiles).unwrap();
        let svg = render_svg(&set, &PlotSpec::default()).unwrap();
        let positions: Vec<usize> = ["S1", "S2", "S3", "S4"]
            .iter()
            .map(|s| svg.find(&format!(">{s}</text>")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn solver_names_are_escaped() {
        let set = single_profile_set(&[1.0], 2.0);
        let spec = PlotSpec {
            title: "a < b & c".into(),
            ..PlotSpec::default()
        };
        let svg = render_svg(&set, &spec).unwrap();
        assert!(svg.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn export_steps_merges_breakpoints() {
        let set = example_set();
        let out = export_steps(&set, &PlotSpec::default()).unwrap();
        let expected = "\
tau,A,B
1,0.5,0.5
2,0.75,0.75
3,1,0.75
6,1,1
";
        assert_eq!(out, expected);
    }

    #[test]
    fn export_steps_log2_transforms_tau_column() {
        let set = single_profile_set(&[1.0, 4.0], 8.0);
        let spec = PlotSpec {
            scale: Scale::Log(2.0),
            ..PlotSpec::default()
        };
        let out = export_steps(&set, &spec).unwrap();
        assert_eq!(out, "tau,S\n0,0.5\n2,1\n");
    }

    #[test]
    fn export_steps_values_match_evaluate_exactly() {
        let set = example_set();
        let out = export_steps(&set, &PlotSpec::default()).unwrap();
        for line in out.lines().skip(1) {
            let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            for (profile, &value) in set.profiles().iter().zip(&cells[1..]) {
                assert_eq!(profile.evaluate(cells[0]), value);
            }
        }
    }

    #[test]
    fn spec_validation() {
        let set = example_set();
        let bad_range = PlotSpec {
            tau_range: Some((5.0, 5.0)),
            ..PlotSpec::default()
        };
        assert!(render_svg(&set, &bad_range).is_err());

        let bad_log = PlotSpec {
            scale: Scale::Log(2.0),
            tau_range: Some((-1.0, 5.0)),
            ..PlotSpec::default()
        };
        assert!(render_svg(&set, &bad_log).is_err());

        let bad_base = PlotSpec {
            scale: Scale::Log(1.0),
            ..PlotSpec::default()
        };
        assert!(render_svg(&set, &bad_base).is_err());
    }

    #[test]
    fn tick_label_decimals_follow_step() {
        assert_eq!(tick_label(2.0, 1.0), "2");
        assert_eq!(tick_label(0.6000000000000001, 0.2), "0.6");
        assert_eq!(tick_label(2.5, 0.5), "2.5");
        assert_eq!(tick_label(0.75, 0.25), "0.75");
    }
}
