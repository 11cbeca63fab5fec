//! Second-moment statistics of a series and the small set of sample
//! primitives the regime test is built from.
//!
//! Series positions are 1-based in the documentation (`x_1 … x_n`), while
//! the window index `j` of `R_{j,k}` runs `0 … n−k`. Storage is 0-based
//! throughout: `CumulativeSquares::values()[j − 1]` holds `C_j`.

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::sum::{compensated_sum, CompensatedSum};

/// Running sums of squares `C_j = x_1² + … + x_j²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeSquares {
    c: Vec<f64>,
}

impl CumulativeSquares {
    /// Stored values, `values()[j − 1] = C_j`.
    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `C_j` for `j` in `0..=n`, with `C_0 = 0`.
    pub fn at(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.c[j - 1]
        }
    }

    /// Total sum of squares, `C_n`.
    pub fn total(&self) -> f64 {
        *self.c.last().expect("non-empty by construction")
    }

    /// Wraps an already-computed curve. Used when re-ingesting exported
    /// statistics; the values must be finite and non-decreasing.
    pub fn from_values(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = c.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if c.windows(2).any(|w| w[1] < w[0]) || c[0] < 0.0 {
            return Err(Error::invalid(
                "c",
                "cumulative squares must be non-negative and non-decreasing",
            ));
        }
        Ok(Self { c })
    }
}

pub fn cumulative_squares(ts: &TimeSeries) -> CumulativeSquares {
    let mut acc = CompensatedSum::new();
    let mut prev = 0.0_f64;
    let c = ts
        .iter()
        .map(|x| {
            acc.add(x * x);
            // compensation can wobble by an ulp; keep the curve monotone
            prev = acc.value().max(prev);
            prev
        })
        .collect();
    CumulativeSquares { c }
}

fn check_moment(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::invalid(
            name,
            format!("must be a finite non-negative second moment, got {v}"),
        ));
    }
    Ok(())
}

/// Mean curve of `C_j` under a single change of second moment after
/// position `l`: `jσ₁²` up to `l`, then `jσ₂² + l(σ₁² − σ₂²)`.
///
/// Returned entry `j − 1` corresponds to `E(C_j)`.
pub fn expected_cumulative(sigma1_sq: f64, sigma2_sq: f64, l: usize, n: usize) -> Result<Vec<f64>> {
    check_moment("sigma1_sq", sigma1_sq)?;
    check_moment("sigma2_sq", sigma2_sq)?;
    if l < 1 || l > n {
        return Err(Error::IndexOutOfRange {
            name: "l",
            value: l,
            min: 1,
            max: n,
        });
    }
    let lf = l as f64;
    Ok((1..=n)
        .map(|j| {
            let jf = j as f64;
            if j <= l {
                jf * sigma1_sq
            } else {
                jf * sigma2_sq + lf * (sigma1_sq - sigma2_sq)
            }
        })
        .collect())
}

/// Window sums `R_{j,k}` for `j = 0 … n − k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowMoments {
    k: usize,
    r: Vec<f64>,
}

impl WindowMoments {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `values()[j] = R_{j,k}`.
    pub fn values(&self) -> &[f64] {
        &self.r
    }
}

pub fn window_second_moment(ts: &TimeSeries, k: usize) -> Result<WindowMoments> {
    let c = cumulative_squares(ts);
    window_from_cumulative(&c, k)
}

/// `R_{j,k} = C_{j+k} − C_j`, reusing an existing cumulative curve.
pub fn window_from_cumulative(c: &CumulativeSquares, k: usize) -> Result<WindowMoments> {
    let n = c.n();
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange {
            name: "k",
            value: k,
            min: 1,
            max: n,
        });
    }
    let r = (0..=n - k).map(|j| c.at(j + k) - c.at(j)).collect();
    Ok(WindowMoments { k, r })
}

/// Mean of `R_{j,k}` for `j = 0 … n − k` under a change after `l`.
/// Requires `k < l ≤ n`.
pub fn expected_window(sigma1_sq: f64, sigma2_sq: f64, l: usize, k: usize, n: usize) -> Result<Vec<f64>> {
    check_moment("sigma1_sq", sigma1_sq)?;
    check_moment("sigma2_sq", sigma2_sq)?;
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange {
            name: "k",
            value: k,
            min: 1,
            max: n,
        });
    }
    if l <= k || l > n {
        return Err(Error::IndexOutOfRange {
            name: "l",
            value: l,
            min: k + 1,
            max: n,
        });
    }
    let (kf, lf) = (k as f64, l as f64);
    Ok((0..=n - k)
        .map(|j| {
            if j + k <= l {
                kf * sigma1_sq
            } else if j < l {
                // j + 1 ≤ l < j + k
                j as f64 * (sigma2_sq - sigma1_sq) + lf * (sigma1_sq - sigma2_sq) + kf * sigma2_sq
            } else {
                kf * sigma2_sq
            }
        })
        .collect())
}

/// Two-sided band `(q_{α/2}, q_{1−α/2})` of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileBand {
    pub lower: f64,
    pub upper: f64,
    pub alpha: f64,
}

impl QuantileBand {
    /// Band from the empirical quantiles of `sample` at `α/2` and `1 − α/2`.
    pub fn from_sample(sample: &[f64], alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        check_sample(sample)?;
        let mut sorted = sample.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let m = sorted.len();
        Ok(Self {
            lower: sorted[order_statistic_rank(alpha / 2.0, m) - 1],
            upper: sorted[order_statistic_rank(1.0 - alpha / 2.0, m) - 1],
            alpha,
        })
    }

    /// Strict interior membership.
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower >= self.upper
    }
}

/// 1-based rank `⌈a·m⌉` of the order statistic returned by
/// [`empirical_quantile`], clamped to `1..=m`.
///
/// Products that land within a few ulps of an integer are treated as that
/// integer, so e.g. `0.025 · 1000` selects rank 25 rather than 26.
pub fn order_statistic_rank(a: f64, m: usize) -> usize {
    let t = a * m as f64;
    let nearest = t.round();
    let rank = if (t - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        t.ceil()
    };
    (rank as usize).clamp(1, m)
}

fn check_sample(sample: &[f64]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some((index, &value)) = sample.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

/// The `⌈a·m⌉`-th order statistic of the sample (generalized inverse of the
/// empirical CDF), for `a` in `(0, 1]`.
pub fn empirical_quantile(sample: &[f64], a: f64) -> Result<f64> {
    check_sample(sample)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::invalid(
            "a",
            format!("quantile order must lie in (0, 1], got {a}"),
        ));
    }
    let rank = order_statistic_rank(a, sample.len());
    let mut scratch = sample.to_vec();
    let (_, nth, _) = scratch.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(*nth)
}

/// Square root of the unbiased sample variance (divisor `m − 1`).
pub fn sample_std(sample: &[f64]) -> Result<f64> {
    if sample.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: sample.len(),
        });
    }
    check_sample(sample)?;
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    Ok((m2 / (sample.len() - 1) as f64).max(0.0).sqrt())
}

/// Sample autocorrelation for lags `0 … max_lag` with the white-noise band.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfResult {
    pub rho: Vec<f64>,
    /// `1.96 / √n`
    pub band_halfwidth: f64,
}

impl AcfResult {
    /// Fraction of lags `1 … max_lag` with `|ρ(h)|` inside the band.
    pub fn fraction_inside_band(&self) -> f64 {
        let lags = &self.rho[1..];
        if lags.is_empty() {
            return 1.0;
        }
        lags.iter().filter(|r| r.abs() <= self.band_halfwidth).count() as f64 / lags.len() as f64
    }
}

pub fn acf(ts: &TimeSeries, max_lag: usize) -> Result<AcfResult> {
    let n = ts.n();
    if n < 2 {
        return Err(Error::TooShort { required: 2, actual: n });
    }
    if max_lag >= n {
        return Err(Error::IndexOutOfRange {
            name: "max_lag",
            value: max_lag,
            min: 0,
            max: n - 1,
        });
    }
    let mean = compensated_sum(ts.iter().copied()) / n as f64;
    let centered: Vec<f64> = ts.iter().map(|x| x - mean).collect();
    let denom = compensated_sum(centered.iter().map(|d| d * d));
    if denom <= 0.0 || centered.iter().all(|&d| d == 0.0) {
        return Err(Error::ConstantSeries);
    }
    let mut rho = Vec::with_capacity(max_lag + 1);
    rho.push(1.0);
    for h in 1..=max_lag {
        let num = compensated_sum(centered[..n - h].iter().zip(&centered[h..]).map(|(a, b)| a * b));
        rho.push((num / denom).clamp(-1.0, 1.0));
    }
    Ok(AcfResult {
        rho,
        band_halfwidth: 1.96 / (n as f64).sqrt(),
    })
}
