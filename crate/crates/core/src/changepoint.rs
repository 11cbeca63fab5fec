//! Single change-point estimation on the cumulative sum of squares.
//!
//! For each candidate split `k` the curve `(j, C_j)` is cut into
//! `j ≤ k` and `j > k`, a least-squares line is fitted to each side, and
//! the estimate is the `k` with the smallest combined residual sum of
//! squares. Candidates run over `2 ≤ k ≤ n − 2` so both lines are defined.
//!
//! The fast path removes one global least-squares line from the curve
//! first (per-segment residuals are unchanged by that) and accumulates
//! centered co-moments point by point from both ends, giving every
//! candidate's residual in O(1) after two O(n) sweeps.
//!
//! Tsay's variance-ratio estimator is provided as a baseline.

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::stats::{cumulative_squares, CumulativeSquares};
use crate::sum::{compensated_sum, CompensatedSum};

/// Smallest admissible split.
pub const MIN_SPLIT: usize = 2;

/// Residual sums within `TIE_RTOL · Σ C_j²` of the minimum count as tied.
const TIE_RTOL: f64 = 16.0 * f64::EPSILON;

/// Variance ratios within this relative distance of the extreme are tied.
const RATIO_TIE_RTOL: f64 = 1e-12;

/// Least-squares fits on both sides of a split of the `C_j` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentFit {
    pub k: usize,
    /// Slope and intercept of the line through `(j, C_j)`, `j ≤ k`.
    pub a1: f64,
    pub b1: f64,
    /// Slope and intercept of the line through `(j, C_j)`, `j > k`.
    pub a2: f64,
    pub b2: f64,
    pub rss_left: f64,
    pub rss_right: f64,
    /// `rss_left + rss_right`
    pub rss: f64,
}

/// Centered running moments of a point cloud, updated one point at a time.
#[derive(Debug, Clone, Copy, Default)]
struct LineMoments {
    count: f64,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    sxy: f64,
    syy: f64,
}

impl LineMoments {
    #[inline]
    fn push(&mut self, x: f64, y: f64) {
        self.count += 1.0;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.mean_x += dx / self.count;
        self.mean_y += dy / self.count;
        self.sxx += dx * (x - self.mean_x);
        self.sxy += dx * (y - self.mean_y);
        self.syy += dy * (y - self.mean_y);
    }

    #[inline]
    fn rss(&self) -> f64 {
        if self.sxx > 0.0 {
            (self.syy - self.sxy * self.sxy / self.sxx).max(0.0)
        } else {
            self.syy.max(0.0)
        }
    }

    fn slope_intercept(&self) -> (f64, f64) {
        let slope = if self.sxx > 0.0 { self.sxy / self.sxx } else { 0.0 };
        (slope, self.mean_y - slope * self.mean_x)
    }
}

/// The `C_j` curve with its global least-squares line removed.
///
/// Points are `(x_j, e_j)` with `x_j = j − (n+1)/2` and `e_j` the residual
/// of `C_j` against the global line `C ≈ trend_slope · x + trend_level`.
struct Detrended {
    x: Vec<f64>,
    e: Vec<f64>,
    center: f64,
    trend_slope: f64,
    trend_level: f64,
}

impl Detrended {
    fn new(c: &[f64]) -> Self {
        let n = c.len();
        let center = (n as f64 + 1.0) / 2.0;
        let x: Vec<f64> = (1..=n).map(|j| j as f64 - center).collect();
        let level = compensated_sum(c.iter().copied()) / n as f64;
        let sxx = n as f64 * ((n * n) as f64 - 1.0) / 12.0;
        let sxy = compensated_sum(x.iter().zip(c).map(|(xi, ci)| xi * (ci - level)));
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let e = x.iter().zip(c).map(|(xi, ci)| (ci - level) - slope * xi).collect();
        Self {
            x,
            e,
            center,
            trend_slope: slope,
            trend_level: level,
        }
    }

    /// Converts a line `e ≈ slope·x + intercept` back to `C ≈ a·j + b`.
    fn to_original(&self, (slope, intercept): (f64, f64)) -> (f64, f64) {
        let a = slope + self.trend_slope;
        let b = intercept + self.trend_level - a * self.center;
        (a, b)
    }
}

fn tie_tolerance(c: &[f64]) -> f64 {
    TIE_RTOL * compensated_sum(c.iter().map(|v| v * v))
}

fn check_split(k: usize, n: usize) -> Result<()> {
    if n < MIN_SPLIT + 2 || k < MIN_SPLIT || k > n - 2 {
        return Err(Error::IndexOutOfRange {
            name: "k",
            value: k,
            min: MIN_SPLIT,
            max: n.saturating_sub(2),
        });
    }
    Ok(())
}

/// Precomputed per-split statistics answering [`SegmentFit`] queries in O(1).
pub struct SegmentFitter {
    curve: Detrended,
    /// `prefix[k − 1]` covers points `1..=k`.
    prefix: Vec<LineMoments>,
    /// `suffix[k]` covers points `k+1..=n`.
    suffix: Vec<LineMoments>,
}

impl SegmentFitter {
    pub fn new(c: &CumulativeSquares) -> Self {
        let curve = Detrended::new(c.values());
        let n = curve.x.len();
        let mut prefix = Vec::with_capacity(n);
        let mut m = LineMoments::default();
        for (&x, &e) in curve.x.iter().zip(&curve.e) {
            m.push(x, e);
            prefix.push(m);
        }
        let mut suffix = vec![LineMoments::default(); n + 1];
        let mut m = LineMoments::default();
        for i in (0..n).rev() {
            m.push(curve.x[i], curve.e[i]);
            suffix[i] = m;
        }
        Self { curve, prefix, suffix }
    }

    pub fn n(&self) -> usize {
        self.curve.x.len()
    }

    pub fn fit(&self, k: usize) -> Result<SegmentFit> {
        check_split(k, self.n())?;
        let left = &self.prefix[k - 1];
        let right = &self.suffix[k];
        let (a1, b1) = self.curve.to_original(left.slope_intercept());
        let (a2, b2) = self.curve.to_original(right.slope_intercept());
        let (rss_left, rss_right) = (left.rss(), right.rss());
        Ok(SegmentFit {
            k,
            a1,
            b1,
            a2,
            b2,
            rss_left,
            rss_right,
            rss: rss_left + rss_right,
        })
    }
}

/// Two-line fit of the cumulative curve split after position `k`
/// (`2 ≤ k ≤ n − 2`).
pub fn segment_fit(c: &CumulativeSquares, k: usize) -> Result<SegmentFit> {
    check_split(k, c.n())?;
    SegmentFitter::new(c).fit(k)
}

/// Estimated split with the residual curve it was chosen from.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangePointEstimate {
    /// Last position of the first regime (1-based).
    pub l_hat: usize,
    /// `rss_curve[i]` is the combined residual for `k = MIN_SPLIT + i`.
    pub rss_curve: Vec<f64>,
}

impl ChangePointEstimate {
    pub fn rss_at(&self, k: usize) -> Option<f64> {
        k.checked_sub(MIN_SPLIT).and_then(|i| self.rss_curve.get(i).copied())
    }

    /// Candidate range `(k_min, k_max)`.
    pub fn candidate_range(&self) -> (usize, usize) {
        (MIN_SPLIT, MIN_SPLIT + self.rss_curve.len() - 1)
    }
}

/// Index of the first entry within `tol` of the curve minimum.
fn first_minimizer(curve: &[f64], tol: f64) -> usize {
    let min = curve.iter().copied().fold(f64::INFINITY, f64::min);
    curve.iter().position(|&r| r <= min + tol).expect("curve is non-empty")
}

fn check_estimable(n: usize) -> Result<()> {
    if n < 5 {
        return Err(Error::TooShort { required: 5, actual: n });
    }
    Ok(())
}

/// Segmented-regression estimate of the split on the `C_j` curve.
///
/// Ties (residuals equal up to rounding) resolve to the smallest `k`.
pub fn estimate_changepoint(ts: &TimeSeries) -> Result<ChangePointEstimate> {
    check_estimable(ts.n())?;
    Ok(estimate_from_cumulative(&cumulative_squares(ts)))
}

/// Same as [`estimate_changepoint`] on a precomputed curve (`n ≥ 5`).
pub fn estimate_from_cumulative(c: &CumulativeSquares) -> ChangePointEstimate {
    let n = c.n();
    assert!(n >= 5, "need at least five points");
    let curve = Detrended::new(c.values());

    // suffix residuals for points k+1..=n, k = MIN_SPLIT..=n-2
    let mut right = vec![0.0; n + 1];
    let mut m = LineMoments::default();
    for i in (MIN_SPLIT..n).rev() {
        m.push(curve.x[i], curve.e[i]);
        right[i] = m.rss();
    }

    let mut rss_curve = Vec::with_capacity(n - 3);
    let mut m = LineMoments::default();
    for i in 0..n - 2 {
        m.push(curve.x[i], curve.e[i]);
        let k = i + 1;
        if k >= MIN_SPLIT {
            rss_curve.push(m.rss() + right[k]);
        }
    }

    let l_hat = MIN_SPLIT + first_minimizer(&rss_curve, tie_tolerance(c.values()));
    ChangePointEstimate { l_hat, rss_curve }
}

/// Residual of a least-squares line through `(j, c_j)` for the given
/// 1-based positions, computed from scratch with two-pass centering.
fn direct_line_rss(c: &[f64], positions: std::ops::RangeInclusive<usize>) -> f64 {
    let m = positions.clone().count() as f64;
    let mean_j = positions.clone().map(|j| j as f64).sum::<f64>() / m;
    let mean_c = compensated_sum(positions.clone().map(|j| c[j - 1])) / m;
    let mut sjj = CompensatedSum::new();
    let mut sjc = CompensatedSum::new();
    let mut scc = CompensatedSum::new();
    for j in positions {
        let dj = j as f64 - mean_j;
        let dc = c[j - 1] - mean_c;
        sjj.add(dj * dj);
        sjc.add(dj * dc);
        scc.add(dc * dc);
    }
    let (sjj, sjc, scc) = (sjj.value(), sjc.value(), scc.value());
    (scc - sjc * sjc / sjj).max(0.0)
}

/// O(n²) reference: refits both segments from scratch for every candidate.
/// Intended as an oracle for moderate `n`.
pub fn brute_force_changepoint(ts: &TimeSeries) -> Result<ChangePointEstimate> {
    let n = ts.n();
    check_estimable(n)?;
    let cs = cumulative_squares(ts);
    let c = cs.values();
    let rss_curve: Vec<f64> = (MIN_SPLIT..=n - 2)
        .map(|k| direct_line_rss(c, 1..=k) + direct_line_rss(c, k + 1..=n))
        .collect();
    let l_hat = MIN_SPLIT + first_minimizer(&rss_curve, tie_tolerance(c));
    Ok(ChangePointEstimate { l_hat, rss_curve })
}

/// Tsay's variance ratio at split `l`:
/// `(l−1) Σ_{i≥l} x_i² / ((n−l+1) Σ_{i<l} x_i²)`, for `2 ≤ l ≤ n − 1`.
pub fn tsay_variance_ratio(ts: &TimeSeries, l: usize) -> Result<f64> {
    let n = ts.n();
    if n < 3 || l < 2 || l > n - 1 {
        return Err(Error::IndexOutOfRange {
            name: "l",
            value: l,
            min: 2,
            max: n.saturating_sub(1),
        });
    }
    ratio_at(&cumulative_squares(ts), l)
}

fn ratio_at(c: &CumulativeSquares, l: usize) -> Result<f64> {
    let n = c.n();
    let before = c.at(l - 1);
    if before <= 0.0 {
        return Err(Error::ZeroDenominator { split: l });
    }
    let after = c.total() - before;
    Ok((l - 1) as f64 * after / ((n - l + 1) as f64 * before))
}

/// Default trimming margin `max(10, ⌈0.05·n⌉)`.
pub fn default_tsay_margin(n: usize) -> usize {
    10.max(n.div_ceil(20))
}

/// Result of the variance-ratio scan.
#[derive(Debug, Clone, PartialEq)]
pub struct TsayEstimate {
    /// Position `l` at which `r̂` occurs: first index of the second regime.
    pub l_hat: usize,
    /// `max(1/r̂_min, r̂_max)`, always ≥ 1.
    pub r_hat: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// `r_curve[i]` is `r̂_l` for `l = h + i`; `None` where the ratio is undefined.
    pub r_curve: Vec<Option<f64>>,
    pub h: usize,
    /// Candidates skipped because the pre-split sum of squares was zero.
    pub skipped: Vec<usize>,
}

impl TsayEstimate {
    /// Split expressed as the last position of the first regime (`l_hat − 1`),
    /// the convention used by [`ChangePointEstimate::l_hat`].
    pub fn last_before_change(&self) -> usize {
        self.l_hat - 1
    }
}

/// Scans `r̂_l` over `h ≤ l ≤ n − h` and returns the split where
/// `r̂ = max(1/r̂_min, r̂_max)` occurs. `h = None` uses [`default_tsay_margin`].
pub fn tsay_changepoint(ts: &TimeSeries, h: Option<usize>) -> Result<TsayEstimate> {
    let n = ts.n();
    let h = h.unwrap_or_else(|| default_tsay_margin(n));
    if h < 2 {
        return Err(Error::invalid(
            "h",
            format!("trimming margin must be at least 2, got {h}"),
        ));
    }
    if 2 * h > n {
        return Err(Error::invalid(
            "h",
            format!("trimming margin {h} leaves no candidates for n = {n}"),
        ));
    }
    let c = cumulative_squares(ts);
    let mut r_curve = Vec::with_capacity(n - 2 * h + 1);
    let mut skipped = Vec::new();
    for l in h..=n - h {
        match ratio_at(&c, l) {
            Ok(r) => r_curve.push(Some(r)),
            Err(Error::ZeroDenominator { .. }) => {
                skipped.push(l);
                r_curve.push(None);
            }
            Err(e) => return Err(e),
        }
    }

    let valid = || r_curve.iter().enumerate().filter_map(|(i, r)| r.map(|r| (h + i, r)));
    let r_min = valid().map(|(_, r)| r).fold(f64::INFINITY, f64::min);
    let r_max = valid().map(|(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
    if !r_min.is_finite() || r_min <= 0.0 {
        return Err(Error::NoValidCandidate);
    }
    let argmin = valid()
        .find(|&(_, r)| r <= r_min * (1.0 + RATIO_TIE_RTOL))
        .map(|(l, _)| l)
        .expect("minimum exists");
    let argmax = valid()
        .find(|&(_, r)| r >= r_max * (1.0 - RATIO_TIE_RTOL))
        .map(|(l, _)| l)
        .expect("maximum exists");

    let inv_min = 1.0 / r_min;
    let (l_hat, r_hat) = if (inv_min - r_max).abs() <= RATIO_TIE_RTOL * r_max.max(inv_min) {
        (argmin.min(argmax), r_max.max(inv_min))
    } else if inv_min > r_max {
        (argmin, inv_min)
    } else {
        (argmax, r_max)
    };

    Ok(TsayEstimate {
        l_hat,
        r_hat,
        r_min,
        r_max,
        r_curve,
        h,
        skipped,
    })
}
