//! The command implementations. Each returns the rendered report and the
//! exit status it implies.

use std::fs;
use std::path::{Path, PathBuf};

use regime_core::sim::{
    close_parameter_scenarios, compare_estimators, distant_parameter_scenarios, null_scenarios, run_scenarios,
    CampaignOptions, RngSpec, SplitPolicy,
};
use regime_core::{
    acf, cumulative_squares, estimate_changepoint, recursive_segmentation_with, regime_variance_test_with,
    tsay_changepoint, window_from_cumulative, ReferenceRule, RegimeTestConfig, RegimeTestResult, SegmentationConfig,
    TimeSeries,
};

use crate::error::{CliError, CliResult};
use crate::report::{real, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `(j, C_j)` to `<dir>/cumulative.csv` and `(j, R_{j,k})` to
/// `<dir>/window.csv`.
pub fn pretest(ts: &TimeSeries, window: usize, dir: &Path) -> CliResult<Report> {
    let c = cumulative_squares(ts);
    let r = window_from_cumulative(&c, window)?;
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;

    let mut cum = String::from("j,c\n");
    for (i, v) in c.values().iter().enumerate() {
        cum.push_str(&format!("{},{}\n", i + 1, real(*v)));
    }
    let mut win = String::from("j,r\n");
    for (j, v) in r.values().iter().enumerate() {
        win.push_str(&format!("{j},{}\n", real(*v)));
    }
    let cum_path = dir.join("cumulative.csv");
    let win_path = dir.join("window.csv");
    write_file(&cum_path, &cum)?;
    write_file(&win_path, &win)?;

    let mut report = Report::new("pretest");
    report
        .field("n", ts.n())
        .field("window", window)
        .field("cumulative_rows", c.n())
        .field("window_rows", r.values().len())
        .field("cumulative_file", cum_path.display())
        .field("window_file", win_path.display());
    Ok(report)
}

pub fn detect(ts: &TimeSeries, h: Option<usize>, dump_rss: bool) -> CliResult<Report> {
    let est = estimate_changepoint(ts)?;
    let mut report = Report::new("detect");
    report
        .field("n", ts.n())
        .field("l_hat", est.l_hat)
        .real("rss_min", est.rss_at(est.l_hat).unwrap_or(f64::NAN));
    match tsay_changepoint(ts, h) {
        Ok(t) => {
            report
                .field("tsay_h", t.h)
                .field("l_tsay", t.last_before_change())
                .field("tsay_first_after", t.l_hat)
                .real("r_hat", t.r_hat)
                .real("r_min", t.r_min)
                .real("r_max", t.r_max);
        }
        // too short for the variance-ratio scan: the main estimate still stands
        Err(e) if h.is_none() => {
            report.field("tsay_status", e);
        }
        Err(e) => return Err(e.into()),
    }
    if dump_rss {
        let (lo, _) = est.candidate_range();
        let rows = est
            .rss_curve
            .iter()
            .enumerate()
            .map(|(i, v)| vec![(lo + i).to_string(), real(*v)])
            .collect();
        report.table("rss", &["k", "rss"], rows);
    }
    Ok(report)
}

fn test_fields(report: &mut Report, r: &RegimeTestResult) {
    report
        .field("l", r.l)
        .real("alpha", r.alpha)
        .field("reference_segment", r.reference_segment.as_str())
        .real("sigma_left", r.sigma_left)
        .real("sigma_right", r.sigma_right)
        .real("band_lower", r.band.lower)
        .real("band_upper", r.band.upper)
        .field("degenerate_band", r.degenerate_band)
        .field("b", r.b_count)
        .field("m", r.m_test)
        .real("p_value", r.p_value)
        .field("decision", r.decision.as_str());
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOptions {
    pub config: RegimeTestConfig,
    pub l: Option<usize>,
    pub recursive: bool,
    pub min_len: usize,
    pub max_depth: usize,
}

/// Single or recursive regime test; exit status 1 when the root rejects.
pub fn test(ts: &TimeSeries, opts: &TestOptions) -> CliResult<(Report, i32)> {
    let mut report = Report::new("test");
    report
        .field("n", ts.n())
        .field("reference_rule", opts.config.reference.as_str());
    if !opts.recursive {
        let r = regime_variance_test_with(ts, &opts.config, opts.l)?;
        test_fields(&mut report, &r);
        let code = if r.rejected() { EXIT_REJECT } else { EXIT_OK };
        return Ok((report, code));
    }
    if opts.l.is_some() {
        return Err(CliError::Usage("--l cannot be combined with --recursive".into()));
    }
    let config = SegmentationConfig {
        test: opts.config,
        min_len: opts.min_len,
        max_depth: opts.max_depth,
    };
    let root = recursive_segmentation_with(ts, &config)?;
    let root_result = root.result.clone()?;
    test_fields(&mut report, &root_result);
    report
        .field("min_len", opts.min_len)
        .field("max_depth", opts.max_depth)
        .field("nodes", root.node_count())
        .field("leaves", root.leaf_count());

    let rows = root
        .walk()
        .into_iter()
        .map(|node| {
            let mut row = vec![
                node.depth.to_string(),
                (node.range.start + 1).to_string(),
                node.range.end.to_string(),
                node.is_leaf().to_string(),
            ];
            match &node.result {
                Ok(r) => row.extend([
                    node.absolute_split().map_or_else(String::new, |s| s.to_string()),
                    r.b_count.to_string(),
                    r.m_test.to_string(),
                    real(r.p_value),
                    r.decision.as_str().to_string(),
                    String::new(),
                ]),
                Err(e) => row.extend([
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                ]),
            }
            row
        })
        .collect();
    report.table(
        "nodes",
        &[
            "depth", "start", "end", "leaf", "split", "b", "m", "p_value", "decision", "error",
        ],
        rows,
    );
    let code = if root_result.rejected() { EXIT_REJECT } else { EXIT_OK };
    Ok((report, code))
}

pub fn acf_report(ts: &TimeSeries, max_lag: usize) -> CliResult<Report> {
    let a = acf(ts, max_lag)?;
    let mut report = Report::new("acf");
    report
        .field("n", ts.n())
        .field("max_lag", max_lag)
        .real("band_halfwidth", a.band_halfwidth)
        .real("fraction_inside_band", a.fraction_inside_band());
    let rows = a
        .rho
        .iter()
        .enumerate()
        .map(|(lag, r)| vec![lag.to_string(), real(*r)])
        .collect();
    report.table("acf", &["lag", "rho"], rows);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Campaign {
    NoChange,
    TwoRegime,
    Compare,
}

impl Campaign {
    pub fn as_str(self) -> &'static str {
        match self {
            Campaign::NoChange => "table1",
            Campaign::TwoRegime => "table2",
            Campaign::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateOptions {
    pub campaign: Campaign,
    pub trials: usize,
    pub seed: u64,
    pub alpha: f64,
    pub h: Option<usize>,
    pub split: SplitPolicy,
    pub reference: ReferenceRule,
}

fn opt_real(v: Option<f64>) -> String {
    v.map_or_else(|| "na".to_string(), real)
}

pub fn simulate(opts: &SimulateOptions) -> CliResult<Report> {
    let rng = RngSpec::new(opts.seed);
    let mut report = Report::new("simulate");
    report
        .field("table", opts.campaign.as_str())
        .field("trials", opts.trials)
        .field("seed", opts.seed);

    if opts.campaign == Campaign::Compare {
        report.field("h", opts.h.map_or_else(|| "default".to_string(), |h| h.to_string()));
        let scenarios: Vec<_> = close_parameter_scenarios()
            .into_iter()
            .chain(distant_parameter_scenarios())
            .collect();
        let mut summary = Vec::new();
        let mut trials = Vec::new();
        for s in &scenarios {
            let c = compare_estimators(s, opts.trials, opts.h, rng.stream(&s.name))?;
            summary.push(vec![
                s.name.clone(),
                s.describe(),
                c.true_break.to_string(),
                c.h.to_string(),
                real(c.median_abs_error_l_hat()),
                real(c.median_abs_error_tsay()),
            ]);
            for (t, (a, b)) in c.l_hat.iter().zip(&c.l_tsay).enumerate() {
                trials.push(vec![s.name.clone(), t.to_string(), a.to_string(), b.to_string()]);
            }
        }
        report.table(
            "summary",
            &[
                "scenario",
                "laws",
                "true_break",
                "h",
                "median_abs_error_l_hat",
                "median_abs_error_tsay",
            ],
            summary,
        );
        report.table("trials", &["scenario", "trial", "l_hat", "l_tsay"], trials);
        return Ok(report);
    }

    report
        .real("alpha", opts.alpha)
        .field("split", opts.split.as_str())
        .field("reference_rule", opts.reference.as_str());
    let scenarios = match opts.campaign {
        Campaign::NoChange => null_scenarios(),
        _ => close_parameter_scenarios(),
    };
    let options = CampaignOptions {
        trials: opts.trials,
        alpha: opts.alpha,
        rng,
        split: opts.split,
        reference: opts.reference,
    };
    let reports = run_scenarios(&scenarios, &options)?;
    let summary = scenarios
        .iter()
        .zip(&reports)
        .map(|(s, r)| {
            vec![
                r.scenario.clone(),
                s.describe(),
                r.trials.to_string(),
                r.accept_count.to_string(),
                r.reject_count.to_string(),
                opt_real(r.mean_p_accept),
                opt_real(r.mean_p_reject),
                real(r.mean_p),
                real(r.mean_l_hat),
            ]
        })
        .collect();
    report.table(
        "summary",
        &[
            "scenario",
            "laws",
            "trials",
            "accept_count",
            "reject_count",
            "mean_p_accept",
            "mean_p_reject",
            "mean_p",
            "mean_l_hat",
        ],
        summary,
    );
    let mut rows = Vec::new();
    for r in &reports {
        for t in 0..r.trials {
            rows.push(vec![
                r.scenario.clone(),
                t.to_string(),
                r.l_hats[t].to_string(),
                r.tested_l[t].to_string(),
                real(r.p_values[t]),
                r.decisions[t].as_str().to_string(),
            ]);
        }
    }
    report.table(
        "trials",
        &["scenario", "trial", "l_hat", "tested_l", "p_value", "decision"],
        rows,
    );
    Ok(report)
}

/// Writes to `out`, or returns the text for standard output.
pub fn emit(report: &Report, out: Option<&PathBuf>) -> CliResult<Option<String>> {
    let text = report.render();
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
