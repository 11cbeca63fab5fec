use regime_core::sim::*;
use regime_core::*;
fn main() {
    let g = |s| DistributionSpec::gaussian(0.0, s).unwrap();
    let scenario = Scenario::new("step", vec![(g(1.0), 1000), (g(10.0), 1000)], false).unwrap();
    let rng = RngSpec::new(202);
    let mut e: Vec<i64> = (0..200)
        .map(|t| {
            let x = generate_scenario(&scenario, &mut rng.trial_rng(t)).unwrap();
            let a = estimate_changepoint(&x).unwrap().l_hat as i64 - 1000;
            let b = brute_force_changepoint(&x).unwrap().l_hat as i64 - 1000;
            assert_eq!(a, b);
            a
        })
        .collect();
    e.sort();
    println!("{:?}", &e[..]);
}
