//! Binomial left-tail probabilities.
//!
//! The probability mass at a starting point is evaluated with Loader's
//! saddle-point expansion, which stays accurate to a few ulps for large `n`
//! where `ln Γ` differences lose digits. Neighbouring masses follow from the
//! ratio recurrence, summed outward from the start until the terms vanish.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `ln Γ(n+1) − (n + ½) ln n + n − ½ ln 2π` for `n = 0..=15`.
#[allow(clippy::excessive_precision)]
const STIRLING_ERROR: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

fn stirling_error(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return STIRLING_ERROR[n as usize];
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/np) + np − x`, evaluated without cancellation.
fn deviance(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `P(Z = k)` for `Z ~ Binomial(n, p)`, with `q = 1 − p` supplied separately.
pub(crate) fn pmf(k: u64, n: u64, p: f64, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let (kf, nf) = (k as f64, n as f64);
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    if k == 0 {
        let lc = if p < 0.1 {
            -deviance(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
        return lc.exp();
    }
    if k == n {
        let lc = if q < 0.1 {
            -deviance(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
        return lc.exp();
    }
    let lc = stirling_error(nf)
        - stirling_error(kf)
        - stirling_error(nf - kf)
        - deviance(kf, nf * p)
        - deviance(nf - kf, nf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// Sum of masses from `start` moving in one direction until they vanish
/// or the support ends.
fn tail_from(start: u64, n: u64, p: f64, q: f64, downward: bool) -> f64 {
    let mut term = pmf(start, n, p, q);
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut k = start;
    loop {
        // Neumaier
        let t = total + term;
        comp += if total.abs() >= term.abs() {
            (total - t) + term
        } else {
            (term - t) + total
        };
        total = t;
        if term <= (total + comp) * 1e-18 || term == 0.0 {
            break;
        }
        if downward {
            if k == 0 {
                break;
            }
            // P(k−1) = P(k) · k q / ((n − k + 1) p)
            term *= k as f64 * q / ((n - k + 1) as f64 * p);
            k -= 1;
        } else {
            if k == n {
                break;
            }
            // P(k+1) = P(k) · (n − k) p / ((k + 1) q)
            term *= (n - k) as f64 * p / ((k + 1) as f64 * q);
            k += 1;
        }
    }
    total + comp
}

fn validate(n: u64, p: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::invalid("n", "binomial size must be at least 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(
            "p",
            format!("success probability must lie in (0, 1), got {p}"),
        ));
    }
    Ok(())
}

/// `P(Z < b)` for `Z ~ Binomial(n, p)`: the strict left tail
/// `Σ_{k=0}^{b−1} C(n,k) p^k (1−p)^{n−k}`.
pub fn binomial_cdf_strict(n: u64, p: f64, b: u64) -> Result<f64> {
    validate(n, p)?;
    if b == 0 {
        return Ok(0.0);
    }
    if b > n {
        return Ok(1.0);
    }
    let q = 1.0 - p;
    let last = b - 1;
    // the lower tail is the smaller side while its top sits below the mean
    if (last as f64) < n as f64 * p {
        Ok(tail_from(last, n, p, q, true).min(1.0))
    } else {
        Ok((1.0 - tail_from(b, n, p, q, false)).clamp(0.0, 1.0))
    }
}

/// `P(Z ≥ b)`, the complement of [`binomial_cdf_strict`].
pub fn binomial_sf(n: u64, p: f64, b: u64) -> Result<f64> {
    validate(n, p)?;
    if b == 0 {
        return Ok(1.0);
    }
    if b > n {
        return Ok(0.0);
    }
    if (b as f64) > n as f64 * p {
        Ok(tail_from(b, n, p, 1.0 - p, false).min(1.0))
    } else {
        Ok((1.0 - binomial_cdf_strict(n, p, b)?).clamp(0.0, 1.0))
    }
}
