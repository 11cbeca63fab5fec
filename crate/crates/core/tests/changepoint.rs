use approx::assert_relative_eq;
use regime_core::sim::{generate_scenario, DistributionSpec, RngSpec, Scenario};
use regime_core::{
    brute_force_changepoint, estimate_changepoint, estimate_from_cumulative, segment_fit, tsay_changepoint,
    tsay_variance_ratio, CumulativeSquares, TimeSeries,
};

/// Ordinary least squares through `(j, c_j)` by the normal equations on raw
/// sums, returning slope, intercept and residual sum of squares.
fn textbook_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let det = m * sxx - sx * sx;
    let a = (m * sxy - sx * sy) / det;
    let b = (sxx * sy - sx * sxy) / det;
    let rss = points.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum();
    (a, b, rss)
}

/// Displayed closed forms for the left-segment slope and intercept.
fn closed_form_left(c: &[f64], k: usize) -> (f64, f64) {
    let kf = k as f64;
    let s: f64 = c[..k].iter().sum();
    let sj: f64 = c[..k].iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).sum();
    let a = (sj - (kf + 1.0) / 2.0 * s) / (-0.25 * kf * (kf + 1.0).powi(2) + kf * (kf + 1.0) * (2.0 * kf + 1.0) / 6.0);
    let b = ((2.0 * kf + 1.0) / 3.0 * s - sj) / (-0.5 * kf * (kf + 1.0) + kf * (2.0 * kf + 1.0) / 3.0);
    (a, b)
}

fn points(c: &[f64], range: std::ops::RangeInclusive<usize>) -> Vec<(f64, f64)> {
    range.map(|j| (j as f64, c[j - 1])).collect()
}

#[test]
fn closed_form_coefficients_agree() {
    let c = [1.0, 2.0, 4.0, 10.0, 11.0];
    let fit = segment_fit(&CumulativeSquares::from_values(c.to_vec()).unwrap(), 3).unwrap();
    assert_relative_eq!(fit.a1, 1.5, max_relative = 1e-12);
    assert_relative_eq!(fit.b1, -2.0 / 3.0, max_relative = 1e-12);
    let (a, b) = closed_form_left(&c, 3);
    assert_relative_eq!(a, 1.5, max_relative = 1e-12);
    assert_relative_eq!(b, -2.0 / 3.0, max_relative = 1e-12);

    // longer curve, every split
    let x = generate_scenario(
        &Scenario::new(
            "cf",
            vec![
                (DistributionSpec::gaussian(0.0, 1.0).unwrap(), 30),
                (DistributionSpec::gaussian(0.0, 2.0).unwrap(), 30),
            ],
            false,
        )
        .unwrap(),
        &mut RngSpec::new(201).trial_rng(0),
    )
    .unwrap();
    let cs = regime_core::cumulative_squares(&x);
    for k in 2..=58 {
        let fit = segment_fit(&cs, k).unwrap();
        let (a, b) = closed_form_left(cs.values(), k);
        assert_relative_eq!(fit.a1, a, max_relative = 1e-9, epsilon = 1e-9);
        assert_relative_eq!(fit.b1, b, max_relative = 1e-9, epsilon = 1e-9);
    }
}

#[test]
fn six_point_fit_matches_textbook_solver() {
    let c = [1.0, 2.0, 3.0, 10.0, 20.0, 30.0];
    let cs = CumulativeSquares::from_values(c.to_vec()).unwrap();
    for k in 2..=4 {
        let fit = segment_fit(&cs, k).unwrap();
        let (a1, b1, r1) = textbook_fit(&points(&c, 1..=k));
        let (a2, b2, r2) = textbook_fit(&points(&c, k + 1..=6));
        assert_relative_eq!(fit.a1, a1, max_relative = 1e-10, epsilon = 1e-10);
        assert_relative_eq!(fit.b1, b1, max_relative = 1e-10, epsilon = 1e-10);
        assert_relative_eq!(fit.a2, a2, max_relative = 1e-10, epsilon = 1e-10);
        assert_relative_eq!(fit.b2, b2, max_relative = 1e-10, epsilon = 1e-10);
        assert!((fit.rss - (r1 + r2)).abs() <= 1e-10);
    }
    let fit = segment_fit(&cs, 3).unwrap();
    assert_relative_eq!(fit.a2, 10.0, max_relative = 1e-12);
    assert_relative_eq!(fit.b2, -30.0, max_relative = 1e-12);
    assert!(fit.rss < 1e-10);
    assert_eq!(estimate_from_cumulative(&cs).l_hat, 3);
}

#[test]
fn exact_two_line_curves() {
    // a jump between two lines: residual vanishes only at the break
    let c: Vec<f64> = (1..=100)
        .map(|j| if j <= 50 { j as f64 } else { 100.0 + 5.0 * j as f64 })
        .collect();
    let est = estimate_from_cumulative(&CumulativeSquares::from_values(c).unwrap());
    assert_eq!(est.l_hat, 50);
    let zeros: Vec<usize> = (2..=98).filter(|&k| est.rss_at(k).unwrap() <= 1e-9).collect();
    assert_eq!(zeros, vec![50]);

    // a continuous kink: the corner point lies on both lines, so k = 49 and
    // k = 50 both fit exactly and the smaller one wins
    let x: Vec<f64> = (1..=100).map(|j| if j <= 50 { 1.0 } else { 5f64.sqrt() }).collect();
    let ts = TimeSeries::new(x).unwrap();
    let fast = estimate_changepoint(&ts).unwrap();
    let zeros: Vec<usize> = (2..=98).filter(|&k| fast.rss_at(k).unwrap() <= 1e-9).collect();
    assert_eq!(zeros, vec![49, 50]);
    assert_eq!(fast.l_hat, 49);
    assert_eq!(brute_force_changepoint(&ts).unwrap().l_hat, 49);
}

#[test]
fn constant_series_ties_resolve_low() {
    let ts = TimeSeries::new(vec![3.0; 40]).unwrap();
    assert_eq!(estimate_changepoint(&ts).unwrap().l_hat, 2);
    assert_eq!(brute_force_changepoint(&ts).unwrap().l_hat, 2);
    for l in [2, 17, 39] {
        assert_eq!(tsay_variance_ratio(&ts, l).unwrap(), 1.0);
    }
    let t = tsay_changepoint(&ts, Some(10)).unwrap();
    assert_eq!(t.r_hat, 1.0);
    assert_eq!(t.l_hat, 10);
}

#[test]
fn strong_break_is_located() {
    // σ = 1 then σ = 10, break after 1000 of 2000. An independent dense
    // least-squares scan puts about 73% of estimates within ±20 of the
    // break, all of them at or after it and within +60.
    let g = |s| DistributionSpec::gaussian(0.0, s).unwrap();
    let scenario = Scenario::new("step", vec![(g(1.0), 1000), (g(10.0), 1000)], false).unwrap();
    let rng = RngSpec::new(202);
    let l_hats: Vec<usize> = (0..200)
        .map(|t| {
            estimate_changepoint(&generate_scenario(&scenario, &mut rng.trial_rng(t)).unwrap())
                .unwrap()
                .l_hat
        })
        .collect();
    let near = l_hats.iter().filter(|l| (980..=1020).contains(*l)).count();
    let bounded = l_hats.iter().filter(|l| (980..=1060).contains(*l)).count();
    assert!((110..=170).contains(&near), "{near}/200 within ±20");
    assert!(bounded >= 196, "{bounded}/200 within [980, 1060]");
}
