use rand::seq::SliceRandom;
use rand::Rng;

use super::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Concatenation of independent segments, optionally shuffled.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub segments: Vec<(DistributionSpec, usize)>,
    /// Shuffle the concatenated sample, mixing the laws uniformly over time.
    pub permuted: bool,
}

impl Scenario {
    pub fn new(name: impl Into<String>, segments: Vec<(DistributionSpec, usize)>, permuted: bool) -> Result<Self> {
        let scenario = Self {
            name: name.into(),
            segments,
            permuted,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn single(name: impl Into<String>, spec: DistributionSpec, len: usize) -> Result<Self> {
        Self::new(name, vec![(spec, len)], false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::invalid("segments", "scenario needs at least one segment"));
        }
        for (spec, len) in &self.segments {
            spec.validate()?;
            if *len < 1 {
                return Err(Error::invalid(
                    "segments",
                    "every segment needs at least one observation",
                ));
            }
        }
        if self.len() < 10 {
            return Err(Error::TooShort {
                required: 10,
                actual: self.len(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(|(_, len)| len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Last position of the first regime for an unshuffled two-segment
    /// scenario.
    pub fn true_break(&self) -> Option<usize> {
        match self.segments.as_slice() {
            [(_, first), _] if !self.permuted => Some(*first),
            _ => None,
        }
    }

    /// Human-readable law list, e.g. `N(0,4) x800 | N(0,4.55) x1000`.
    pub fn describe(&self) -> String {
        let body = self
            .segments
            .iter()
            .map(|(spec, len)| format!("{spec} x{len}"))
            .collect::<Vec<_>>()
            .join(" | ");
        if self.permuted {
            format!("permuted[{body}]")
        } else {
            body
        }
    }
}

/// Draws the segments in order from one generator and, for permuted
/// scenarios, applies a Fisher–Yates shuffle from the same generator.
pub fn generate_scenario<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<TimeSeries> {
    scenario.validate()?;
    let mut values = Vec::with_capacity(scenario.len());
    for (spec, len) in &scenario.segments {
        values.extend(spec.sample(*len, rng));
    }
    if scenario.permuted {
        values.shuffle(rng);
    }
    TimeSeries::new(values)
}

/// Gaussian noise whose observations from position `l` on (1-based) are
/// multiplied by `1 + omega`: `x_i = ε_i` for `i < l`, `x_i = ε_i (1 + ω)`
/// for `i ≥ l`, with `ε_i ~ N(0, sigma)`.
pub fn variance_step_series<R: Rng + ?Sized>(
    n: usize,
    l: usize,
    omega: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<TimeSeries> {
    if l < 2 || l > n {
        return Err(Error::IndexOutOfRange {
            name: "l",
            value: l,
            min: 2,
            max: n,
        });
    }
    if !(omega > -1.0 && omega.is_finite()) {
        return Err(Error::invalid(
            "omega",
            format!("scale step must exceed -1, got {omega}"),
        ));
    }
    let mut values = DistributionSpec::gaussian(0.0, sigma)?.sample(n, rng);
    for v in &mut values[l - 1..] {
        *v *= 1.0 + omega;
    }
    TimeSeries::new(values)
}

fn gauss(sigma: f64) -> DistributionSpec {
    DistributionSpec::Gaussian { mu: 0.0, sigma }
}

fn stable(alpha: f64, sigma: f64) -> DistributionSpec {
    DistributionSpec::Stable {
        alpha,
        beta: 0.0,
        sigma,
        mu: 0.0,
    }
}

fn two_regime(name: &str, first: DistributionSpec, second: DistributionSpec) -> Scenario {
    Scenario {
        name: name.to_string(),
        segments: vec![(first, 800), (second, 1000)],
        permuted: false,
    }
}

/// Null-hypothesis campaigns: length 1800 with no regime change.
pub fn null_scenarios() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "h0-gaussian".into(),
            segments: vec![(gauss(2.0), 1800)],
            permuted: false,
        },
        Scenario {
            name: "h0-stable".into(),
            segments: vec![(stable(1.8, 1.0), 1800)],
            permuted: false,
        },
        Scenario {
            name: "h0-permuted-mixture".into(),
            segments: vec![(gauss(1.0), 900), (stable(1.9, 1.0), 900)],
            permuted: true,
        },
    ]
}

/// Two-regime cases with close parameters (break after 800 of 1800).
pub fn close_parameter_scenarios() -> Vec<Scenario> {
    vec![
        two_regime("h1-close-gaussian", gauss(4.0), gauss(4.55)),
        two_regime("h1-close-stable", stable(1.9, 2.0), stable(1.9, 2.5)),
        two_regime("h1-close-mixed", stable(1.8, 1.2), gauss(2.45)),
    ]
}

/// Two-regime cases with clearly different parameters.
pub fn distant_parameter_scenarios() -> Vec<Scenario> {
    vec![
        two_regime("h1-distant-gaussian", gauss(2.0), gauss(4.0)),
        two_regime("h1-distant-stable", stable(1.9, 2.0), stable(1.9, 4.0)),
        two_regime("h1-distant-mixed", gauss(4.0), stable(1.9, 1.0)),
    ]
}
