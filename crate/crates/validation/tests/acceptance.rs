//! Acceptance criteria 1–10. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any criterion fails. All randomness derives
//! from `SEED`, one named stream per criterion.

use std::time::Instant;

use rand::Rng;
use regime_core::sim::{
    close_parameter_scenarios, compare_estimators, distant_parameter_scenarios, generate_scenario, run_table1,
    run_table2, sample_gaussian, sample_stable, variance_step_series, DistributionSpec, MonteCarloReport, RngSpec,
    Scenario,
};
use regime_core::{
    binomial_cdf_strict, brute_force_changepoint, cumulative_squares, estimate_changepoint, recursive_segmentation,
    tsay_variance_ratio,
};
use regime_validation::{median, run, within, Checks, Outcome};

const SEED: u64 = 0x5EED_2024;
const ALPHA: f64 = 0.05;
const TRIALS: usize = 1000;

// table reproduction tolerances
const COUNT_TOL: f64 = 45.0;
const P_ACCEPT_TOL: f64 = 0.05;
const P_REJECT_TOL: f64 = 0.005;
const L_HAT_TOL: f64 = 60.0;

fn stream(label: &str) -> RngSpec {
    RngSpec::new(SEED).stream(label)
}

fn criterion_1() -> Outcome {
    run(1, "fast estimator equals brute force", || {
        let rng = stream("oracle-equivalence");
        let start = Instant::now();
        let mut agree = 0;
        for t in 0..200u64 {
            let mut r = rng.trial_rng(t);
            let n = r.random_range(20..=200usize);
            let pieces = r.random_range(1..=3usize);
            let mut cuts: Vec<usize> = (1..pieces).map(|_| r.random_range(1..n)).collect();
            cuts.sort_unstable();
            cuts.dedup();
            let mut bounds = vec![0];
            bounds.extend(cuts);
            bounds.push(n);
            let segments = bounds
                .windows(2)
                .map(|w| {
                    let scale = r.random_range(0.2..5.0);
                    let law = if r.random_bool(0.5) {
                        DistributionSpec::gaussian(0.0, scale).unwrap()
                    } else {
                        DistributionSpec::stable(r.random_range(1.1..=2.0), 0.0, scale, 0.0).unwrap()
                    };
                    (law, w[1] - w[0])
                })
                .collect();
            let x = generate_scenario(&Scenario::new("mix", segments, false).unwrap(), &mut r).unwrap();
            if estimate_changepoint(&x).unwrap().l_hat == brute_force_changepoint(&x).unwrap().l_hat {
                agree += 1;
            }
        }
        let secs = start.elapsed().as_secs_f64();
        let mut c = Checks::new();
        c.check(agree == 200, format!("identical index in {agree}/200"))
            .check(secs < 5.0, format!("runtime {secs:.2} s < 5 s"));
        c.finish()
    })
}

fn table_rows(reports: &[MonteCarloReport]) -> String {
    reports
        .iter()
        .map(|r| {
            format!(
                "{}: accept {} reject {} mean_p_accept {} mean_p_reject {} mean_l_hat {:.2}",
                r.scenario,
                r.accept_count,
                r.reject_count,
                r.mean_p_accept.map_or("na".into(), |p| format!("{p:.4}")),
                r.mean_p_reject.map_or("na".into(), |p| format!("{p:.4}")),
                r.mean_l_hat
            )
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn criterion_2() -> Outcome {
    run(2, "no-change campaign reproduction", || {
        const ACCEPT: [f64; 3] = [866.0, 865.0, 889.0];
        const MEAN_P: [f64; 3] = [0.5623, 0.5349, 0.5621];
        let start = Instant::now();
        let reports = run_table1(TRIALS, ALPHA, stream("table1")).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let mut c = Checks::new();
        for (i, r) in reports.iter().enumerate() {
            let p = r.mean_p_accept.unwrap_or(f64::NAN);
            c.check(
                within(r.accept_count as f64, ACCEPT[i], COUNT_TOL),
                format!("{} accept {} vs {}±{COUNT_TOL}", r.scenario, r.accept_count, ACCEPT[i]),
            )
            .check(
                within(p, MEAN_P[i], P_ACCEPT_TOL),
                format!("{} mean p {p:.4} vs {}±{P_ACCEPT_TOL}", r.scenario, MEAN_P[i]),
            )
            .check(
                (0.08..=0.20).contains(&r.reject_rate()),
                format!("{} rejection rate {:.3} in [0.08, 0.20]", r.scenario, r.reject_rate()),
            );
        }
        c.check(secs < 180.0, format!("runtime {secs:.2} s"));
        println!("    rows: {}", table_rows(&reports));
        c.finish()
    })
}

fn criterion_3() -> Outcome {
    run(3, "two-regime campaign reproduction", || {
        const REJECT: [f64; 3] = [759.0, 758.0, 652.0];
        const MEAN_P: [f64; 3] = [0.0061, 0.0054, 0.0044];
        const MEAN_L: [f64; 3] = [822.28, 943.72, 646.42];
        let start = Instant::now();
        let reports = run_table2(TRIALS, ALPHA, stream("table2")).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let mut c = Checks::new();
        for (i, r) in reports.iter().enumerate() {
            let p = r.mean_p_reject.unwrap_or(f64::NAN);
            c.check(
                within(r.reject_count as f64, REJECT[i], COUNT_TOL),
                format!("{} reject {} vs {}±{COUNT_TOL}", r.scenario, r.reject_count, REJECT[i]),
            )
            .check(
                within(p, MEAN_P[i], P_REJECT_TOL),
                format!("{} mean p {p:.4} vs {}±{P_REJECT_TOL}", r.scenario, MEAN_P[i]),
            )
            .check(
                within(r.mean_l_hat, MEAN_L[i], L_HAT_TOL),
                format!(
                    "{} mean l_hat {:.2} vs {}±{L_HAT_TOL}",
                    r.scenario, r.mean_l_hat, MEAN_L[i]
                ),
            );
        }
        c.check(secs < 300.0, format!("runtime {secs:.2} s"));
        println!("    rows: {}", table_rows(&reports));
        c.finish()
    })
}

fn criterion_4() -> Outcome {
    run(4, "least-squares split beats variance ratio", || {
        let distant = &distant_parameter_scenarios()[0];
        let close = &close_parameter_scenarios()[0];
        let d = compare_estimators(distant, TRIALS, None, stream("compare-distant")).unwrap();
        let k = compare_estimators(close, TRIALS, None, stream("compare-close")).unwrap();
        let (dl, dt) = (d.median_abs_error_l_hat(), d.median_abs_error_tsay());
        let (kl, kt) = (k.median_abs_error_l_hat(), k.median_abs_error_tsay());
        let mut c = Checks::new();
        c.check(
            dl <= dt,
            format!("{} median |err| l_hat {dl} <= tsay {dt}", distant.name),
        )
        .check(dl <= 40.0, format!("{} median |err| l_hat {dl} <= 40", distant.name))
        .check(kl <= kt, format!("{} median |err| l_hat {kl} <= tsay {kt}", close.name));
        c.finish()
    })
}

fn criterion_5() -> Outcome {
    run(5, "variance-ratio calibration", || {
        let rng = stream("tsay-calibration");
        let ratios: Vec<f64> = (0..200u64)
            .map(|t| {
                let x = variance_step_series(1800, 900, 1.0, 1.0, &mut rng.trial_rng(t)).unwrap();
                tsay_variance_ratio(&x, 900).unwrap()
            })
            .collect();
        let m = median(&ratios);
        let mut c = Checks::new();
        c.check(
            (3.5..=4.5).contains(&m),
            format!("median ratio at true split {m:.4} in [3.5, 4.5]"),
        );
        c.finish()
    })
}

fn criterion_6() -> Outcome {
    run(6, "binomial tail accuracy", || {
        let grid = include_str!("../../core/tests/fixtures/binomial_grid.csv");
        let mut worst: f64 = 0.0;
        let mut rows = 0;
        let mut cells = std::collections::BTreeSet::new();
        for line in grid.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let n: u64 = f[0].parse().unwrap();
            let p: f64 = f[1].parse().unwrap();
            let b: u64 = f[2].parse().unwrap();
            let want: f64 = f[3].parse().unwrap();
            let got = binomial_cdf_strict(n, p, b).unwrap();
            let rel = if want == 0.0 {
                got.abs()
            } else {
                ((got - want) / want).abs()
            };
            worst = worst.max(rel);
            rows += 1;
            cells.insert((n, f[1].to_string()));
        }
        let mut c = Checks::new();
        c.check(
            cells.len() == 12,
            format!("{} (n, p) cells, {rows} points", cells.len()),
        )
        .check(worst <= 1e-9, format!("worst relative error {worst:.3e} <= 1e-9"));
        c.finish()
    })
}

fn criterion_7() -> Outcome {
    run(7, "recursive segmentation", || {
        let g = |s| DistributionSpec::gaussian(0.0, s).unwrap();
        let three = Scenario::new("three", vec![(g(1.0), 600), (g(3.0), 600), (g(9.0), 600)], false).unwrap();
        let control = Scenario::single("control", g(1.0), 1800).unwrap();
        let leaves = |s: &Scenario, label: &str| -> Vec<usize> {
            let rng = stream(label);
            (0..200u64)
                .map(|t| {
                    let x = generate_scenario(s, &mut rng.trial_rng(t)).unwrap();
                    recursive_segmentation(&x, ALPHA, 50, 4).unwrap().leaf_count()
                })
                .collect()
        };
        let split = leaves(&three, "recursive-three").iter().filter(|&&l| l >= 3).count();
        let single = leaves(&control, "recursive-control")
            .iter()
            .filter(|&&l| l == 1)
            .count();
        let mut c = Checks::new();
        c.check(
            split >= 160,
            format!("three regimes: >= 3 leaves in {split}/200 (need 160)"),
        )
        .check(
            single >= 160,
            format!("iid control: single leaf in {single}/200 (need 160)"),
        );
        c.finish()
    })
}

fn criterion_8() -> Outcome {
    run(8, "stable sampler at alpha = 2", || {
        const N: usize = 100_000;
        // standard normal quantiles and density there
        const LEVELS: [(f64, f64); 7] = [
            (0.01, -2.326_347_874_040_841),
            (0.05, -1.644_853_626_951_472_2),
            (0.25, -0.674_489_750_196_081_7),
            (0.5, 0.0),
            (0.75, 0.674_489_750_196_081_7),
            (0.95, 1.644_853_626_951_472_2),
            (0.99, 2.326_347_874_040_841),
        ];
        let sigma = 1.5;
        let sd = 2f64.sqrt() * sigma;
        let mut a = sample_stable(2.0, 0.0, sigma, 0.0, N, &mut stream("alpha-two-stable").trial_rng(0))
            .unwrap()
            .into_values();
        let mut b = sample_gaussian(0.0, sd, N, &mut stream("alpha-two-gauss").trial_rng(0))
            .unwrap()
            .into_values();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let mut c = Checks::new();
        let mut worst: f64 = 0.0;
        for (level, z) in LEVELS {
            let idx = ((level * N as f64).ceil() as usize).clamp(1, N) - 1;
            let density = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt() / sd;
            // standard error of the difference of two independent sample quantiles
            let se = (2.0 * level * (1.0 - level) / N as f64).sqrt() / density;
            let dev = (a[idx] - b[idx]).abs() / se;
            worst = worst.max(dev);
            c.check(
                dev <= 3.0,
                format!("q{level}: {:.4} vs {:.4} ({dev:.2} se)", a[idx], b[idx]),
            );
        }
        let base = sample_stable(1.9, 0.0, 1.0, 0.0, 1000, &mut stream("scale").trial_rng(0)).unwrap();
        let doubled = sample_stable(1.9, 0.0, 2.0, 0.0, 1000, &mut stream("scale").trial_rng(0)).unwrap();
        let exact = base.iter().zip(doubled.iter()).all(|(x, y)| *y == 2.0 * *x);
        c.check(exact, "scale equivariance exact under a fixed seed");
        let (ok, detail) = c.finish();
        (ok, format!("worst {worst:.2} se; {detail}"))
    })
}

/// Sum of squares carried as an unevaluated pair `hi + lo`.
fn double_double_prefix(x: &[f64]) -> Vec<f64> {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(x.len());
    for &v in x {
        let p = v * v;
        let perr = v.mul_add(v, -p);
        let s = hi + p;
        let bp = s - hi;
        let serr = (hi - (s - bp)) + (p - bp);
        let t = serr + lo + perr;
        hi = s + t;
        lo = t - (hi - s);
        out.push(hi + lo);
    }
    out
}

fn criterion_9() -> Outcome {
    run(9, "large-series performance and accuracy", || {
        const N: usize = 1_000_000;
        let g = |s| DistributionSpec::gaussian(0.0, s).unwrap();
        let s = Scenario::new("big", vec![(g(1.0), 400_000), (g(1.5), 600_000)], false).unwrap();
        let x = generate_scenario(&s, &mut stream("large").trial_rng(0)).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let (est, secs) = pool.install(|| {
            let start = Instant::now();
            let est = estimate_changepoint(&x).unwrap();
            (est, start.elapsed().as_secs_f64())
        });
        let c_lib = cumulative_squares(&x);
        let oracle = double_double_prefix(&x);
        let worst = c_lib
            .values()
            .iter()
            .zip(&oracle)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        let mut c = Checks::new();
        c.check(
            secs < 1.0,
            format!("estimate on n = {N} in {secs:.3} s (l_hat {})", est.l_hat),
        )
        .check(worst < 1e-12, format!("cumulative relative error {worst:.3e} < 1e-12"));
        c.finish()
    })
}

fn simulate(table: &str, threads: &str) -> (i32, String) {
    let outcome = regime_cli::run([
        "regime",
        "simulate",
        table,
        "--trials",
        "200",
        "--seed",
        "77",
        "--threads",
        threads,
    ]);
    (outcome.code, outcome.stdout.unwrap_or_default())
}

fn criterion_10() -> Outcome {
    run(10, "simulation reports are deterministic", || {
        let mut c = Checks::new();
        for table in ["table1", "table2", "compare"] {
            let (code_a, first) = simulate(table, "1");
            let (code_b, again) = simulate(table, "1");
            let (code_c, many) = simulate(table, "8");
            c.check(
                code_a == 0 && code_b == 0 && code_c == 0 && !first.is_empty(),
                format!("{table} ran"),
            )
            .check(first == again, format!("{table} repeat byte-identical"))
            .check(
                first == many,
                format!("{table} 1 vs 8 threads byte-identical ({} bytes)", first.len()),
            );
        }
        c.finish()
    })
}

fn main() {
    println!("acceptance suite, seed {SEED:#x}");
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!(
        "acceptance: {}/{} criteria passed{}",
        outcomes.len() - failed.len(),
        outcomes.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
