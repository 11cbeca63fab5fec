//! Detection of a change in variance for heavy-tailed series.
//!
//! The split point is estimated by fitting two lines to the cumulative sum
//! of squares; the regime test then compares the squares on either side of
//! it against an empirical quantile band and scores the count with a
//! binomial tail.

pub mod binomial;
pub mod changepoint;
pub mod error;
pub mod regime;
pub mod series;
pub mod sim;
pub mod stats;
pub mod sum;

pub use binomial::{binomial_cdf_strict, binomial_sf};
pub use changepoint::{
    brute_force_changepoint, default_tsay_margin, estimate_changepoint, estimate_from_cumulative, segment_fit,
    tsay_changepoint, tsay_variance_ratio, ChangePointEstimate, SegmentFit, SegmentFitter, TsayEstimate,
};
pub use error::{Error, Result};
pub use regime::{
    recursive_segmentation, recursive_segmentation_with, regime_variance_test, regime_variance_test_with, Decision,
    ReferenceRule, RegimeTestConfig, RegimeTestResult, Segment, SegmentationConfig, SegmentationNode,
};
pub use series::TimeSeries;
pub use stats::{
    acf, cumulative_squares, empirical_quantile, expected_cumulative, expected_window, order_statistic_rank,
    sample_std, window_from_cumulative, window_second_moment, AcfResult, CumulativeSquares, QuantileBand,
    WindowMoments,
};
