//! Quantile regime-variance test and its recursive application.
//!
//! The squared series is split at `l` into `W₁ = x_1² … x_l²` and
//! `W₂ = x_{l+1}² … x_n²`. The segment whose squares have the smaller sample
//! standard deviation is the reference: its empirical quantiles at `α/2`
//! and `1 − α/2` form a band, and `B` counts squares of the other segment
//! strictly inside that band. Under H0 `B ~ Binomial(m, 1 − α)`, and the
//! p-value is the strict left tail `P(Z < B)`.

use std::ops::Range;

use crate::binomial::binomial_cdf_strict;
use crate::changepoint::estimate_changepoint;
use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::stats::{sample_std, QuantileBand};

/// Minimum series length accepted by [`regime_variance_test`].
pub const MIN_TEST_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Left,
    Right,
}

impl Segment {
    pub fn as_str(self) -> &'static str {
        match self {
            Segment::Left => "left",
            Segment::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    AcceptH0,
    RejectH0,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::AcceptH0 => "accept_H0",
            Decision::RejectH0 => "reject_H0",
        }
    }
}

/// How the reference segment is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReferenceRule {
    /// Segment whose squares have the smaller sample standard deviation;
    /// ties go to the left segment.
    #[default]
    SmallerSpread,
    /// Always the left segment `W₁`, i.e. the ordering `σ̂₁ < σ̂₂` is
    /// assumed rather than checked.
    Leading,
}

impl ReferenceRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ReferenceRule::SmallerSpread => "smaller-spread",
            ReferenceRule::Leading => "leading",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeTestConfig {
    pub alpha: f64,
    pub reference: ReferenceRule,
}

impl Default for RegimeTestConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            reference: ReferenceRule::SmallerSpread,
        }
    }
}

impl RegimeTestConfig {
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeTestResult {
    /// Split used: `W₁` holds positions `1..=l`.
    pub l: usize,
    pub alpha: f64,
    pub band: QuantileBand,
    pub reference_segment: Segment,
    pub sigma_left: f64,
    pub sigma_right: f64,
    /// Squares of the tested segment strictly inside the band.
    pub b_count: usize,
    pub m_test: usize,
    pub p_value: f64,
    pub decision: Decision,
    /// Set when the band collapsed to a point, so nothing can fall inside.
    pub degenerate_band: bool,
}

impl RegimeTestResult {
    pub fn rejected(&self) -> bool {
        self.decision == Decision::RejectH0
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Runs the test with `α = alpha`. When `l` is `None` the split comes from
/// [`estimate_changepoint`].
pub fn regime_variance_test(ts: &TimeSeries, alpha: f64, l: Option<usize>) -> Result<RegimeTestResult> {
    regime_variance_test_with(ts, &RegimeTestConfig::with_alpha(alpha), l)
}

pub fn regime_variance_test_with(
    ts: &TimeSeries,
    config: &RegimeTestConfig,
    l: Option<usize>,
) -> Result<RegimeTestResult> {
    let n = ts.n();
    if n < MIN_TEST_LEN {
        return Err(Error::TooShort {
            required: MIN_TEST_LEN,
            actual: n,
        });
    }
    check_alpha(config.alpha)?;
    let l = match l {
        Some(l) if l < 2 || l > n - 2 => {
            return Err(Error::IndexOutOfRange {
                name: "l",
                value: l,
                min: 2,
                max: n - 2,
            })
        }
        Some(l) => l,
        None => estimate_changepoint(ts)?.l_hat,
    };
    test_at_split(&ts.squares(), l, config)
}

fn test_at_split(squares: &[f64], l: usize, config: &RegimeTestConfig) -> Result<RegimeTestResult> {
    let alpha = config.alpha;
    let (w1, w2) = squares.split_at(l);
    let sigma_left = sample_std(w1)?;
    let sigma_right = sample_std(w2)?;
    if sigma_left == 0.0 && sigma_right == 0.0 {
        return Err(Error::DegenerateSegments);
    }

    let reference_segment = match config.reference {
        ReferenceRule::SmallerSpread if sigma_right < sigma_left => Segment::Right,
        ReferenceRule::SmallerSpread | ReferenceRule::Leading => Segment::Left,
    };
    let (reference, tested) = match reference_segment {
        Segment::Left => (w1, w2),
        Segment::Right => (w2, w1),
    };

    let band = QuantileBand::from_sample(reference, alpha)?;
    let b_count = tested.iter().filter(|&&w| band.contains(w)).count();
    let m_test = tested.len();
    let p_value = binomial_cdf_strict(m_test as u64, 1.0 - alpha, b_count as u64)?;
    // equality accepts
    let decision = if p_value < alpha {
        Decision::RejectH0
    } else {
        Decision::AcceptH0
    };

    Ok(RegimeTestResult {
        l,
        alpha,
        band,
        reference_segment,
        sigma_left,
        sigma_right,
        b_count,
        m_test,
        p_value,
        decision,
        degenerate_band: band.is_degenerate(),
    })
}

/// Limits for [`recursive_segmentation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentationConfig {
    pub test: RegimeTestConfig,
    /// Sub-ranges shorter than this are not split further (≥ 10).
    pub min_len: usize,
    /// Depth below the root at which recursion stops (≥ 1).
    pub max_depth: usize,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            test: RegimeTestConfig::default(),
            min_len: 50,
            max_depth: 4,
        }
    }
}

/// One tested range of the original series.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationNode {
    /// Half-open 0-based range; positions `start+1 ..= end` in 1-based terms.
    pub range: Range<usize>,
    pub depth: usize,
    /// Test outcome; the split `l` inside it is relative to `range.start`.
    pub result: Result<RegimeTestResult>,
    pub children: Vec<SegmentationNode>,
}

impl SegmentationNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(Self::leaf_count).sum()
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Self::node_count).sum::<usize>()
    }

    /// Split position in original-series coordinates (last index of the
    /// left part, 1-based), when the test ran.
    pub fn absolute_split(&self) -> Option<usize> {
        self.result.as_ref().ok().map(|r| self.range.start + r.l)
    }

    /// Pre-order traversal.
    pub fn walk(&self) -> Vec<&SegmentationNode> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.walk());
        }
        out
    }
}

/// Tests the whole series and, on rejection, re-tests each side of the
/// estimated split while both sides have at least `min_len` points and the
/// depth limit allows. A node whose test fails keeps the error and has no
/// children; siblings are unaffected.
pub fn recursive_segmentation(
    ts: &TimeSeries,
    alpha: f64,
    min_len: usize,
    max_depth: usize,
) -> Result<SegmentationNode> {
    let config = SegmentationConfig {
        test: RegimeTestConfig::with_alpha(alpha),
        min_len,
        max_depth,
    };
    recursive_segmentation_with(ts, &config)
}

pub fn recursive_segmentation_with(ts: &TimeSeries, config: &SegmentationConfig) -> Result<SegmentationNode> {
    if config.min_len < MIN_TEST_LEN {
        return Err(Error::invalid(
            "min_len",
            format!("must be at least {MIN_TEST_LEN}, got {}", config.min_len),
        ));
    }
    if config.max_depth < 1 {
        return Err(Error::invalid("max_depth", "must be at least 1"));
    }
    check_alpha(config.test.alpha)?;
    Ok(segment_node(ts.values(), 0..ts.n(), 0, config))
}

fn segment_node(values: &[f64], range: Range<usize>, depth: usize, config: &SegmentationConfig) -> SegmentationNode {
    let result = TimeSeries::from_slice(&values[range.clone()])
        .and_then(|sub| regime_variance_test_with(&sub, &config.test, None));
    let mut children = Vec::new();
    if let Ok(r) = &result {
        let split = range.start + r.l;
        let fits = r.l >= config.min_len && range.end - split >= config.min_len;
        if r.rejected() && depth < config.max_depth && fits {
            let (left, right) = rayon::join(
                || segment_node(values, range.start..split, depth + 1, config),
                || segment_node(values, split..range.end, depth + 1, config),
            );
            children = vec![left, right];
        }
    }
    SegmentationNode {
        range,
        depth,
        result,
        children,
    }
}
