//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use tempfile::TempDir;
use tribasis::metrics::default_sign_tol;
use tribasis::reconstruct::MAX_ENUMERATION_DIM;
use tribasis::seed::stream;
use tribasis::{
    derive_seed, enumerate_candidates, estimate_3bb_exact, estimate_3bb_with_retry, exact_probs, haar_random,
    infidelity, make_state, three_bases, Complex64, EstimatorOptions, LambdaChain, Method, PairBasisParams,
    PureState, RetryOptions, RetryPolicy, StateSource, SweepConfig, VectorRole,
};
use tribasis_cli::args::{BasisArgs, MethodArg, OracleArgs, SimulateArgs};
use tribasis_cli::commands::{oracle_check, simulate};
use tribasis_cli::error::CliError;
use tribasis_cli::sweep;

const SEED: u64 = 20_240_601;

fn verdict(n: u32, pass: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn exact_three(psi: &PureState, d: usize) -> (tribasis::ThreeBasisSet, Vec<tribasis::ProbabilityVector>) {
    let bases = three_bases(d, &PairBasisParams::balanced(d)).unwrap();
    let probs = bases.bases().into_iter().map(|b| exact_probs(psi, b).unwrap()).collect();
    (bases, probs)
}

#[test]
fn criterion_1_exact_recovery() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for d in [4usize, 6, 8, 12] {
        let (mut flagged, mut bad, mut worst) = (0, 0, 0.0f64);
        for j in 0..1000u64 {
            let psi = haar_random(d, derive_seed(SEED, &[stream::STATE, d as u64, j])).unwrap();
            let (bases, probs) = exact_three(&psi, d);
            let r = estimate_3bb_exact(&probs, &bases, &EstimatorOptions::default()).unwrap();
            if r.flags.likelihood_tie || r.flags.equal_pairs_detected {
                flagged += 1;
                continue;
            }
            let f = infidelity(&psi, &r.estimate).unwrap();
            worst = worst.max(f);
            if f >= 1e-9 {
                bad += 1;
            }
        }
        pass &= bad == 0 && flagged < 10;
        details.push(format!("d={d}: unflagged failures {bad}, flagged {flagged}/1000, max infidelity {worst:.1e}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    verdict(1, pass, &format!("[{}] in {:.1}s", details.join("; "), elapsed.as_secs_f64()));
}

#[test]
fn criterion_2_lambda_oracle() {
    let run = |literal_scaling| {
        oracle_check(&OracleArgs {
            dim: 8,
            trials: 1000,
            seed: SEED,
            literal_scaling,
        })
    };
    let corrected = run(false);
    let literal = run(true);
    let ok = matches!(&corrected, Ok(s) if s.max_lambda_error < 1e-10);
    let control = matches!(literal, Err(CliError::OracleFailure(_)));
    let max = corrected.as_ref().map(|s| s.max_lambda_error).unwrap_or(f64::NAN);
    verdict(
        2,
        ok && control,
        &format!("1000 draws at d=8: max |dLambda| {max:.1e}; literal scaling rejected: {control}"),
    );
}

#[test]
fn criterion_3_candidate_count_and_consistency() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in [4usize, 6, 8] {
        let mut worst = 0.0f64;
        let mut count_ok = true;
        for j in 0..50u64 {
            let psi = haar_random(d, derive_seed(SEED, &[stream::STATE, d as u64, 1000 + j])).unwrap();
            let (bases, probs) = exact_three(&psi, d);
            let q = &probs[0].entries;
            let pick = |basis: &tribasis::OrthonormalBasis, p: &[f64]| -> Vec<f64> {
                basis.positions(VectorRole::PairPlus).into_iter().map(|k| p[k]).collect()
            };
            let even = pick(&bases.b1p, &probs[1].entries);
            let odd = pick(&bases.b3p, &probs[2].entries);
            let chain = LambdaChain::from_frequencies(q, &even, &odd, &bases.params).unwrap();
            let candidates = enumerate_candidates(&chain, q, 1e-6).unwrap();
            count_ok &= candidates.len() == 1 << (d - 1);
            for c in &candidates {
                let cq = exact_probs(&c.state, &bases.canonical).unwrap().entries;
                let ce = pick(&bases.b1p, &exact_probs(&c.state, &bases.b1p).unwrap().entries);
                let co = pick(&bases.b3p, &exact_probs(&c.state, &bases.b3p).unwrap().entries);
                // the closing pair (d-1, 0) is the last odd pair and is not a chain link
                let chain_outcomes = cq.iter().zip(q).chain(ce.iter().zip(&even)).chain(co[..d / 2 - 1].iter().zip(&odd));
                for (x, y) in chain_outcomes {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        pass &= count_ok && worst < 1e-9;
        details.push(format!("d={d}: 2^{} candidates {count_ok}, max deviation {worst:.1e}", d - 1));
    }
    assert!(MAX_ENUMERATION_DIM >= 8);
    verdict(3, pass, &format!("[{}]", details.join("; ")));
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn criterion_4_scaling_trend() {
    let start = Instant::now();
    let config = SweepConfig::new(vec![4], vec![1_000, 10_000, 100_000], 200, 20, SEED);
    let rows = sweep::run(&config, true, false).unwrap();
    let xs: Vec<f64> = rows.iter().map(|r| (r.total_ensemble as f64).log10()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean.log10()).collect();
    let slope = least_squares_slope(&xs, &ys);
    let median_below = rows.iter().all(|r| r.median <= r.mean);
    let elapsed = start.elapsed();
    let means: Vec<String> = rows.iter().map(|r| format!("{:.2e}/{:.2e}", r.mean, r.median)).collect();
    verdict(
        4,
        (-1.2..=-0.8).contains(&slope) && median_below && elapsed < Duration::from_secs(600),
        &format!(
            "d=4 slope {slope:.3} (window [-1.2, -0.8]); mean/median per N [{}]; median <= mean: {median_below}; {:.1}s",
            means.join(", "),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_5_omega_f_fraction() {
    let grid = vec![100, 300, 1_000, 3_000];
    let config = SweepConfig::new(vec![12], grid.clone(), 500, 20, SEED);
    let rows = sweep::run(&config, true, false).unwrap();
    let trials = |r: &tribasis::SweepRow| (500 * 20 - r.failures) as f64;
    let fractions: Vec<f64> = rows.iter().map(|r| r.omega_f_fraction).collect();
    let at_smallest = (fractions[0] - 0.45).abs() <= 0.10 && trials(&rows[0]) >= 1e4;
    let non_increasing = rows.windows(2).all(|w| {
        let (p, q) = (w[0].omega_f_fraction, w[1].omega_f_fraction);
        let sigma = (p * (1.0 - p) / trials(&w[0]) + q * (1.0 - q) / trials(&w[1])).sqrt();
        q <= p + 2.0 * sigma
    });
    let listed: Vec<String> = grid.iter().zip(&fractions).map(|(n, f)| format!("N={n}: {f:.3}")).collect();
    verdict(
        5,
        at_smallest && non_increasing,
        &format!(
            "d=12, tol 2/sqrt(N) = {:.2} at N=100; fractions [{}] (target 0.45 +- 0.10 at N=100, non-increasing: {non_increasing})",
            default_sign_tol(100),
            listed.join(", ")
        ),
    );
}

#[test]
fn criterion_6_omega_f_severity() {
    let config = SweepConfig::new(vec![8], vec![100], 500, 20, SEED);
    let row = &sweep::run(&config, true, false).unwrap()[0];
    let ratio = row.omega_f_mean / row.mean;
    verdict(
        6,
        (3.0..=30.0).contains(&ratio),
        &format!(
            "d=8 N=100: mean on Omega_f {:.3} / overall mean {:.3} = {ratio:.2} (window [3, 30]); fraction {:.3} bounds the ratio by {:.2}",
            row.omega_f_mean,
            row.mean,
            row.omega_f_fraction,
            1.0 / row.omega_f_fraction
        ),
    );
}

#[test]
fn criterion_7_degenerate_state_recovery() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in [4usize, 6, 8] {
        let psi = make_state(&vec![Complex64::new(1.0, 0.0); d]).unwrap();
        let (bases, probs) = exact_three(&psi, d);
        let plain = estimate_3bb_exact(&probs, &bases, &EstimatorOptions::default()).unwrap();
        let detected = plain.flags.equal_pairs_detected || plain.flags.likelihood_tie;
        let source = StateSource::Simulated {
            state: &psi,
            shots: None,
            bases: &bases,
        };
        let r = estimate_3bb_with_retry(source, SEED, &RetryOptions::default(), &EstimatorOptions::default()).unwrap();
        let f = infidelity(&psi, &r.estimate).unwrap();
        let ok = detected && r.retries >= 1 && r.basis_set.as_ref().is_some_and(|b| b.randomized) && f < 1e-9;
        pass &= ok;
        details.push(format!("d={d}: detected {detected}, retries {}, infidelity {f:.1e}", r.retries));
    }
    verdict(7, pass, &format!("[{}]", details.join("; ")));
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn simulated_median(state: &str, shots: u64) -> f64 {
    median(
        (0..20)
            .map(|seed| {
                simulate(&SimulateArgs {
                    dim: None,
                    shots,
                    seed,
                    method: MethodArg::ThreeBases,
                    state: state.to_string(),
                    retries: 3,
                    zero_eps: None,
                    basis: BasisArgs::default(),
                    output: None,
                    counts_output: None,
                })
                .unwrap()
                .infidelity
            })
            .collect(),
    )
}

#[test]
fn criterion_8_experimental_states() {
    let qudit = simulated_median("1,-1,1,-1,1,-1,1,-1", 100_000);
    let qubits = simulated_median("0.5846,0.157+0.295i,0.608+0.200i,0.062+0.362i", 8192);
    verdict(
        8,
        qudit < 0.01 && qubits < 0.01,
        &format!("median infidelity over 20 seeds: alternating d=8 qudit {qudit:.2e}, two-qubit {qubits:.2e}"),
    );
}

#[test]
fn criterion_9_determinism() {
    let dir = TempDir::new().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    fs::write(
        p("sweep.json"),
        r#"{"dimensions": [4, 6], "shots": [200, 2000], "states": 8, "trials": 4, "seed": 5, "retries": 2}"#,
    )
    .unwrap();
    let run = |tag: &str| -> Vec<Vec<u8>> {
        let commands: Vec<(Vec<String>, String)> = vec![
            (
                vec!["simulate", "--dim", "8", "--shots", "3000", "--seed", "7", "--output", &p(&format!("sim{tag}.json")), "--counts-output", &p(&format!("counts{tag}.json"))]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                p(&format!("sim{tag}.json")),
            ),
            (
                vec!["simulate", "--state", "1,1,1,1", "--shots", "500", "--seed", "3", "--method", "5bb", "--output", &p(&format!("five{tag}.json"))]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                p(&format!("five{tag}.json")),
            ),
            (
                vec!["reconstruct", "--input", &p("counts_a.json"), "--output", &p(&format!("rec{tag}.json"))]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                p(&format!("rec{tag}.json")),
            ),
            (
                vec!["sweep", "--input", &p("sweep.json"), "--output", &p(&format!("sweep{tag}.csv"))]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                p(&format!("sweep{tag}.csv")),
            ),
        ];
        let mut outputs = Vec::new();
        for (args, out) in commands {
            let status = Command::new(env!("CARGO_BIN_EXE_tribasis")).args(&args).output().unwrap();
            assert!(status.status.success(), "{args:?}: {}", String::from_utf8_lossy(&status.stderr));
            outputs.push(fs::read(out).unwrap());
        }
        outputs.push(fs::read(p(&format!("counts{tag}.json"))).unwrap());
        outputs
    };
    let a = run("_a");
    let b = run("_b");
    let oracle = |_| Command::new(env!("CARGO_BIN_EXE_tribasis"))
        .args(["oracle-check", "--dim", "6", "--trials", "50", "--seed", "9"])
        .output()
        .unwrap()
        .stdout;
    let same = a == b && oracle(0) == oracle(1);
    verdict(9, same, &format!("{} output files and oracle summary byte-identical on repeat: {same}", a.len()));
}

#[test]
fn sweep_rows_are_consistent() {
    let mut config = SweepConfig::new(vec![4, 8], vec![300, 3000], 40, 5, SEED);
    config.retry = RetryPolicy::Randomize { max_retries: 2 };
    for method in [Method::ThreeBases, Method::FiveBases] {
        config.method = method;
        let rows = sweep::run(&config, true, false).unwrap();
        // rows may hold NaN, so compare the rendered form
        assert_eq!(format!("{rows:?}"), format!("{:?}", tribasis::run_sweep(&config).unwrap()));
        for r in &rows {
            assert!(r.q25 <= r.median && r.median <= r.q75);
            assert_eq!(r.total_ensemble, method.bases() * r.shots);
            let f = r.omega_f_fraction;
            let parts = match (f > 0.0, f < 1.0) {
                (true, true) => f * r.omega_f_mean + (1.0 - f) * r.complement_mean,
                (false, _) => r.complement_mean,
                (_, false) => r.omega_f_mean,
            };
            // the split is over trials, the overall mean over per-state averages;
            // with no failures and equal trial counts the two coincide
            assert_eq!(r.failures, 0);
            assert!((parts - r.mean).abs() < 1e-9, "{r:?}");
        }
    }
}
