//! Monte Carlo campaigns: many trajectories of a scenario pushed through the
//! change-point estimator and the regime test.

use rayon::prelude::*;

use super::rng::RngSpec;
use super::scenario::{close_parameter_scenarios, generate_scenario, null_scenarios, Scenario};
use crate::changepoint::{estimate_changepoint, tsay_changepoint};
use crate::error::{Error, Result};
use crate::regime::{regime_variance_test_with, Decision, ReferenceRule, RegimeTestConfig};

/// Which split each trial's test uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitPolicy {
    /// The trial's own estimate l̂.
    #[default]
    PerTrial,
    /// The campaign average of l̂, rounded to the nearest index, for every
    /// trial.
    CampaignMean,
}

impl SplitPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitPolicy::PerTrial => "per-trial",
            SplitPolicy::CampaignMean => "campaign-mean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignOptions {
    pub trials: usize,
    pub alpha: f64,
    pub rng: RngSpec,
    pub split: SplitPolicy,
    pub reference: ReferenceRule,
}

impl CampaignOptions {
    pub fn new(trials: usize, alpha: f64, seed: u64) -> Self {
        Self {
            trials,
            alpha,
            rng: RngSpec::new(seed),
            split: SplitPolicy::default(),
            reference: ReferenceRule::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::invalid("trials", "need at least one trial"));
        }
        RegimeTestConfig {
            alpha: self.alpha,
            reference: self.reference,
        }
        .validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub scenario: String,
    pub trials: usize,
    pub alpha: f64,
    pub split: SplitPolicy,
    pub accept_count: usize,
    pub reject_count: usize,
    /// Mean p-value over accepting trials; `None` when there are none.
    pub mean_p_accept: Option<f64>,
    /// Mean p-value over rejecting trials; `None` when there are none.
    pub mean_p_reject: Option<f64>,
    pub mean_p: f64,
    pub mean_l_hat: f64,
    /// Split actually tested in each trial.
    pub tested_l: Vec<usize>,
    pub p_values: Vec<f64>,
    pub l_hats: Vec<usize>,
    pub decisions: Vec<Decision>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

impl MonteCarloReport {
    fn from_trials(scenario: &str, options: &CampaignOptions, trials: Vec<TrialOutcome>) -> Self {
        let p_values: Vec<f64> = trials.iter().map(|t| t.p_value).collect();
        let l_hats: Vec<usize> = trials.iter().map(|t| t.l_hat).collect();
        let tested_l: Vec<usize> = trials.iter().map(|t| t.tested_l).collect();
        let decisions: Vec<Decision> = trials.iter().map(|t| t.decision).collect();
        let mut report = Self {
            scenario: scenario.to_string(),
            trials: trials.len(),
            alpha: options.alpha,
            split: options.split,
            accept_count: 0,
            reject_count: 0,
            mean_p_accept: None,
            mean_p_reject: None,
            mean_p: 0.0,
            mean_l_hat: 0.0,
            tested_l,
            p_values,
            l_hats,
            decisions,
        };
        report.recompute();
        report
    }

    fn recompute(&mut self) {
        let with = |d: Decision| {
            self.p_values
                .iter()
                .zip(&self.decisions)
                .filter(move |(_, &x)| x == d)
                .map(|(&p, _)| p)
        };
        self.accept_count = with(Decision::AcceptH0).count();
        self.reject_count = with(Decision::RejectH0).count();
        self.mean_p_accept = mean(with(Decision::AcceptH0));
        self.mean_p_reject = mean(with(Decision::RejectH0));
        self.mean_p = mean(self.p_values.iter().copied()).unwrap_or(f64::NAN);
        self.mean_l_hat = mean(self.l_hats.iter().map(|&l| l as f64)).unwrap_or(f64::NAN);
    }

    pub fn accept_rate(&self) -> f64 {
        self.accept_count as f64 / self.trials as f64
    }

    pub fn reject_rate(&self) -> f64 {
        self.reject_count as f64 / self.trials as f64
    }

    /// Checks that the stored aggregates follow from the stored sequences.
    pub fn is_consistent(&self) -> bool {
        let mut fresh = self.clone();
        fresh.recompute();
        let close = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => (x - y).abs() <= 1e-12,
            (None, None) => true,
            _ => false,
        };
        let n = self.trials;
        self.p_values.len() == n
            && self.l_hats.len() == n
            && self.tested_l.len() == n
            && self.decisions.len() == n
            && self.accept_count + self.reject_count == n
            && fresh.accept_count == self.accept_count
            && close(fresh.mean_p_accept, self.mean_p_accept)
            && close(fresh.mean_p_reject, self.mean_p_reject)
            && close(Some(fresh.mean_p), Some(self.mean_p))
            && close(Some(fresh.mean_l_hat), Some(self.mean_l_hat))
    }
}

#[derive(Debug, Clone, Copy)]
struct TrialOutcome {
    l_hat: usize,
    tested_l: usize,
    p_value: f64,
    decision: Decision,
}

fn trial_l_hat(scenario: &Scenario, rng: &RngSpec, trial: usize) -> Result<usize> {
    let x = generate_scenario(scenario, &mut rng.trial_rng(trial as u64))?;
    Ok(estimate_changepoint(&x)?.l_hat)
}

fn run_trial(
    scenario: &Scenario,
    options: &CampaignOptions,
    rng: &RngSpec,
    trial: usize,
    fixed_l: Option<usize>,
) -> Result<TrialOutcome> {
    let x = generate_scenario(scenario, &mut rng.trial_rng(trial as u64))?;
    let l_hat = estimate_changepoint(&x)?.l_hat;
    let tested_l = fixed_l.unwrap_or(l_hat);
    let config = RegimeTestConfig {
        alpha: options.alpha,
        reference: options.reference,
    };
    let result = regime_variance_test_with(&x, &config, Some(tested_l))?;
    Ok(TrialOutcome {
        l_hat,
        tested_l,
        p_value: result.p_value,
        decision: result.decision,
    })
}

/// Runs one scenario. Trials draw from `options.rng` directly; results are
/// gathered in trial order so the report does not depend on scheduling.
pub fn run_scenario(scenario: &Scenario, options: &CampaignOptions) -> Result<MonteCarloReport> {
    scenario.validate()?;
    options.validate()?;
    let rng = options.rng;
    let fixed_l = match options.split {
        SplitPolicy::PerTrial => None,
        SplitPolicy::CampaignMean => {
            let l_hats = (0..options.trials)
                .into_par_iter()
                .map(|t| trial_l_hat(scenario, &rng, t))
                .collect::<Result<Vec<_>>>()?;
            let avg = l_hats.iter().map(|&l| l as f64).sum::<f64>() / l_hats.len() as f64;
            Some(avg.round() as usize)
        }
    };
    let outcomes = (0..options.trials)
        .into_par_iter()
        .map(|t| run_trial(scenario, options, &rng, t, fixed_l))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonteCarloReport::from_trials(&scenario.name, options, outcomes))
}

/// Runs each scenario on its own stream keyed by the scenario name.
pub fn run_scenarios(scenarios: &[Scenario], options: &CampaignOptions) -> Result<Vec<MonteCarloReport>> {
    scenarios
        .iter()
        .map(|s| {
            let per_row = CampaignOptions {
                rng: options.rng.stream(&s.name),
                ..*options
            };
            run_scenario(s, &per_row)
        })
        .collect()
}

/// The three no-change campaigns.
pub fn run_table1(trials: usize, alpha: f64, rng: RngSpec) -> Result<Vec<MonteCarloReport>> {
    let options = CampaignOptions {
        rng,
        ..CampaignOptions::new(trials, alpha, 0)
    };
    run_scenarios(&null_scenarios(), &options)
}

/// The three close-parameter two-regime campaigns.
pub fn run_table2(trials: usize, alpha: f64, rng: RngSpec) -> Result<Vec<MonteCarloReport>> {
    let options = CampaignOptions {
        rng,
        ..CampaignOptions::new(trials, alpha, 0)
    };
    run_scenarios(&close_parameter_scenarios(), &options)
}

/// Paired split estimates from the least-squares estimator and the
/// variance-ratio estimator, both as "last index of the first regime".
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorComparison {
    pub scenario: String,
    pub true_break: usize,
    pub h: usize,
    pub l_hat: Vec<usize>,
    pub l_tsay: Vec<usize>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

impl EstimatorComparison {
    pub fn errors_l_hat(&self) -> Vec<i64> {
        self.l_hat.iter().map(|&l| l as i64 - self.true_break as i64).collect()
    }

    pub fn errors_tsay(&self) -> Vec<i64> {
        self.l_tsay.iter().map(|&l| l as i64 - self.true_break as i64).collect()
    }

    pub fn median_abs_error_l_hat(&self) -> f64 {
        median(self.errors_l_hat().iter().map(|e| e.unsigned_abs() as f64).collect())
    }

    pub fn median_abs_error_tsay(&self) -> f64 {
        median(self.errors_tsay().iter().map(|e| e.unsigned_abs() as f64).collect())
    }
}

/// Runs both estimators on the same trajectories. `h` defaults to the
/// variance-ratio estimator's own margin rule.
pub fn compare_estimators(
    scenario: &Scenario,
    trials: usize,
    h: Option<usize>,
    rng: RngSpec,
) -> Result<EstimatorComparison> {
    scenario.validate()?;
    let true_break = scenario
        .true_break()
        .ok_or_else(|| Error::invalid("scenario", "comparison needs an unshuffled two-segment scenario"))?;
    if trials < 1 {
        return Err(Error::invalid("trials", "need at least one trial"));
    }
    let pairs = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(usize, usize, usize)> {
            let x = generate_scenario(scenario, &mut rng.trial_rng(t as u64))?;
            let l_hat = estimate_changepoint(&x)?.l_hat;
            let tsay = tsay_changepoint(&x, h)?;
            Ok((l_hat, tsay.last_before_change(), tsay.h))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimatorComparison {
        scenario: scenario.name.clone(),
        true_break,
        h: pairs[0].2,
        l_hat: pairs.iter().map(|p| p.0).collect(),
        l_tsay: pairs.iter().map(|p| p.1).collect(),
    })
}
