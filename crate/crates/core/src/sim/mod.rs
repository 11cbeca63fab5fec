//! Synthetic data and Monte Carlo campaigns.

pub mod campaign;
pub mod dist;
pub mod rng;
pub mod scenario;

pub use campaign::{
    compare_estimators, run_scenario, run_scenarios, run_table1, run_table2, CampaignOptions, EstimatorComparison,
    MonteCarloReport, SplitPolicy,
};
pub use dist::{sample_gaussian, sample_stable, DistributionSpec, StableSampler};
pub use rng::{mix, splitmix64, RngSpec, TrialRng};
pub use scenario::{
    close_parameter_scenarios, distant_parameter_scenarios, generate_scenario, null_scenarios, variance_step_series,
    Scenario,
};
