//! The four workflows behind the subcommands.

use std::io::Write;
use std::path::Path;

use tribasis::basis::default_phases;
use tribasis::seed::stream;
use tribasis::{
    canonical, derive_seed, estimate_3bb, estimate_3bb_exact, estimate_3bb_with_retry, estimate_5bb_report,
    exact_probs, five_bases, haar_random, infidelity, make_state, measure_three, random_three_bases,
    sample_counts, three_bases, CountRecord, Error, EstimationReport, EstimatorOptions, FiveBasisObservations,
    LambdaChain, Method, OrthonormalBasis, PairBasisParams, PureState, RetryOptions, StateSource, VectorRole,
};

use crate::args::{BasisArgs, MethodArg, OracleArgs, ReconstructArgs, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::formats::{read_json, to_json, write_text, CountsFile, ReportDoc};
use crate::state_spec::parse_state;

const EXACT_TOL: f64 = 1e-9;
const ORACLE_LAMBDA_TOL: f64 = 1e-10;

pub fn basis_params(d: usize, args: &BasisArgs) -> CliResult<PairBasisParams> {
    let (a, b) = match (args.a, args.b) {
        (None, None) => {
            let balanced = PairBasisParams::balanced(d);
            (balanced.a(), balanced.b())
        }
        (Some(a), None) => (a, (1.0 - a * a).max(0.0).sqrt()),
        (None, Some(b)) => ((1.0 - b * b).max(0.0).sqrt(), b),
        (Some(a), Some(b)) => (a, b),
    };
    let phases = args.phases.clone().unwrap_or_else(|| default_phases(d));
    if phases.len() != d / 2 {
        return Err(CliError::Config(format!("--phases needs {} values for d = {d}", d / 2)));
    }
    PairBasisParams::new(a, b, phases).map_err(|e| CliError::Config(e.to_string()))
}

fn estimator_options(zero_eps: Option<f64>) -> CliResult<EstimatorOptions> {
    if let Some(eps) = zero_eps {
        if eps.is_nan() || eps < 0.0 {
            return Err(CliError::Config("--zero-eps must be non-negative".into()));
        }
    }
    Ok(EstimatorOptions {
        zero_eps,
        ..EstimatorOptions::default()
    })
}

/// Result of `simulate`: the report, the truth, and the counts of the
/// measurement the estimate came from.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub report: EstimationReport,
    pub truth: PureState,
    pub infidelity: f64,
    pub counts: CountsFile,
    pub retries_exhausted: bool,
}

fn truth_state(args: &SimulateArgs) -> CliResult<PureState> {
    if args.state.trim().eq_ignore_ascii_case("haar") {
        let d = args
            .dim
            .ok_or_else(|| CliError::Config("--dim is required for a Haar-random state".into()))?;
        return Ok(haar_random(d, derive_seed(args.seed, &[stream::STATE, d as u64]))?);
    }
    let amplitudes = parse_state(&args.state)?;
    if let Some(d) = args.dim {
        if d != amplitudes.len() {
            return Err(CliError::Config(format!(
                "--state has {} amplitudes but --dim is {d}",
                amplitudes.len()
            )));
        }
    }
    make_state(&amplitudes).map_err(|e| CliError::Config(format!("--state: {e}")))
}

fn five_basis_list(d: usize, params: &PairBasisParams) -> CliResult<Vec<OrthonormalBasis>> {
    let mut bases = vec![canonical(d)?];
    bases.extend(five_bases(d, params)?);
    Ok(bases)
}

pub fn simulate(args: &SimulateArgs) -> CliResult<Simulation> {
    if args.shots == 0 {
        return Err(CliError::Config("--shots must be at least 1".into()));
    }
    let truth = truth_state(args)?;
    let d = truth.dim();
    tribasis::error::check_dimension(d).map_err(|e| CliError::Config(e.to_string()))?;
    let params = basis_params(d, &args.basis)?;
    let opts = estimator_options(args.zero_eps)?;

    let (report, counts, retries_exhausted) = match args.method {
        MethodArg::ThreeBases => {
            let bases = three_bases(d, &params)?;
            let (report, exhausted) = if args.retries == 0 {
                let records = measure_three(&truth, &bases, args.shots, args.seed, 0)?;
                (estimate_3bb(&records, &bases, &opts)?, false)
            } else {
                let source = StateSource::Simulated {
                    state: &truth,
                    shots: Some(args.shots),
                    bases: &bases,
                };
                let retry = RetryOptions {
                    max_retries: args.retries,
                    ..RetryOptions::default()
                };
                match estimate_3bb_with_retry(source, args.seed, &retry, &opts) {
                    Ok(r) => (r, false),
                    Err(Error::RetriesExhausted { report, .. }) => (*report, true),
                    Err(e) => return Err(e.into()),
                }
            };
            let used = report.basis_set.clone().unwrap_or(bases);
            let records = measure_three(&truth, &used, args.shots, args.seed, report.retries as u64)?;
            let counts = CountsFile::new(&used.params, Some(&used), &records);
            (report, counts, exhausted)
        }
        MethodArg::FiveBases => {
            let records = five_basis_list(d, &params)?
                .iter()
                .enumerate()
                .map(|(i, basis)| {
                    sample_counts(
                        &exact_probs(&truth, basis)?,
                        args.shots,
                        derive_seed(args.seed, &[stream::MEASURE, 0, i as u64]),
                    )
                })
                .collect::<tribasis::Result<Vec<CountRecord>>>()?;
            let report = estimate_5bb_report(&FiveBasisObservations::from_counts(&records)?, &params, &opts)?;
            let counts = CountsFile::new(&params, None, &records);
            (report, counts, false)
        }
    };
    let infidelity = infidelity(&truth, &report.estimate)?;
    Ok(Simulation {
        report,
        truth,
        infidelity,
        counts,
        retries_exhausted,
    })
}

fn summary_line(report: &EstimationReport, shots: Option<u64>, infidelity: Option<f64>) -> String {
    let mut line = format!("{} d={}", report.method.name(), report.estimate.dim());
    if let Some(n) = shots {
        line += &format!(" N={n}");
    }
    if let Some(f) = infidelity {
        line += &format!(" infidelity={f:.6e}");
    }
    line += &format!(
        " retries={} equal_pairs={} tie={} clamped={}",
        report.retries,
        report.flags.equal_pairs_detected,
        report.flags.likelihood_tie,
        report.flags.clamped_k.len()
    );
    line
}

/// Writes the report to `output` (summary on stdout) or to stdout (summary
/// on stderr).
fn emit_report(doc: &ReportDoc, summary: &str, output: Option<&Path>) -> CliResult<()> {
    let json = to_json(doc);
    match output {
        Some(path) => {
            write_text(path, &json)?;
            println!("{summary}");
        }
        None => {
            print!("{json}");
            std::io::stdout().flush().ok();
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    let sim = simulate(args)?;
    if let Some(path) = &args.counts_output {
        write_text(path, &to_json(&sim.counts))?;
    }
    let doc = ReportDoc::new(&sim.report, Some((&sim.truth, sim.infidelity)));
    emit_report(
        &doc,
        &summary_line(&sim.report, Some(args.shots), Some(sim.infidelity)),
        args.output.as_deref(),
    )?;
    if sim.retries_exhausted {
        return Err(Error::RetriesExhausted {
            retries: sim.report.retries,
            report: Box::new(sim.report),
        }
        .into());
    }
    Ok(())
}

pub fn reconstruct(path: &Path, zero_eps: Option<f64>) -> CliResult<EstimationReport> {
    let file: CountsFile = read_json(path)?;
    let label = path.display().to_string();
    let records = file.records(&label)?;
    let opts = estimator_options(zero_eps)?;
    let missing = |e: Error| match e {
        Error::MissingRecord(id) => CliError::Schema {
            path: label.clone(),
            message: format!("records: missing basis {id}"),
        },
        e => e.into(),
    };
    match file.method() {
        Method::ThreeBases => {
            let bases = file.three_bases(&label)?;
            estimate_3bb(&records, &bases, &opts).map_err(missing)
        }
        Method::FiveBases => {
            let params = file.params(&label)?;
            let obs = FiveBasisObservations::from_counts(&records).map_err(missing)?;
            Ok(estimate_5bb_report(&obs, &params, &opts)?)
        }
    }
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> CliResult<()> {
    let report = reconstruct(&args.input, args.zero_eps)?;
    emit_report(
        &ReportDoc::new(&report, None),
        &summary_line(&report, None, None),
        args.output.as_deref(),
    )
}

/// Largest deviations seen by the oracle check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleSummary {
    pub trials: usize,
    pub max_lambda_error: f64,
    pub max_infidelity_3bb: f64,
    pub max_infidelity_5bb: f64,
    /// Three-basis estimates flagged as ties (not counted as failures).
    pub flagged: usize,
}

fn pair_plus_outcomes(state: &PureState, basis: &OrthonormalBasis) -> CliResult<Vec<f64>> {
    let p = exact_probs(state, basis)?.entries;
    Ok(basis.positions(VectorRole::PairPlus).into_iter().map(|j| p[j]).collect())
}

/// Real part of `Lambda_k` from the unnormalized minus vector
/// `a|k> - b|k+1>`: `(p+ - p-) / (ab)`.
fn literal_real(state: &PureState, params: &PairBasisParams, pplus: f64, k: usize) -> f64 {
    let c = state.amplitudes();
    let d = c.len();
    let (a, b) = (params.a(), params.b());
    let pminus = (c[k] * a - c[(k + 1) % d] * b).norm_sqr();
    (pplus - pminus) / (a * b)
}

pub fn oracle_check(args: &OracleArgs) -> CliResult<OracleSummary> {
    let d = args.dim;
    tribasis::error::check_dimension(d).map_err(|e| CliError::Config(e.to_string()))?;
    let mut summary = OracleSummary {
        trials: args.trials,
        ..OracleSummary::default()
    };
    for t in 0..args.trials {
        let psi = haar_random(d, derive_seed(args.seed, &[stream::ORACLE, d as u64, t as u64, 0]))?;
        let bases = random_three_bases(d, derive_seed(args.seed, &[stream::ORACLE, d as u64, t as u64, 1]))?;
        let params = &bases.params;
        let fail = |what: String| {
            CliError::OracleFailure(format!(
                "trial {t} (seed {}, d = {d}, a = {}, b = {}): {what}; state = {:?}",
                args.seed,
                params.a(),
                params.b(),
                psi.amplitudes()
            ))
        };

        let q = psi.probabilities();
        let even = pair_plus_outcomes(&psi, &bases.b1p)?;
        let odd = pair_plus_outcomes(&psi, &bases.b3p)?;
        let chain = LambdaChain::from_frequencies(&q, &even, &odd, params)?;
        let truth = psi.pair_correlators();
        for (k, lambda) in truth.iter().enumerate() {
            let (re, im) = if k + 1 < d {
                (chain.re[k], chain.im_mag[k])
            } else {
                (chain.wrap_re.unwrap_or(f64::NAN), chain.wrap_im_mag.unwrap_or(f64::NAN))
            };
            let re = if args.literal_scaling {
                let pplus = if k % 2 == 0 { even[k / 2] } else { odd[k / 2] };
                literal_real(&psi, params, pplus, k)
            } else {
                re
            };
            let err = (re - lambda.re).abs().max((im - lambda.im.abs()).abs());
            summary.max_lambda_error = summary.max_lambda_error.max(err);
            if err.is_nan() || err >= ORACLE_LAMBDA_TOL {
                return Err(fail(format!(
                    "Lambda_{k} = {re} ± {im}i, expected {} {:+}i (deviation {err:.3e})",
                    lambda.re, lambda.im
                )));
            }
        }

        let probs = bases
            .bases()
            .into_iter()
            .map(|b| exact_probs(&psi, b))
            .collect::<tribasis::Result<Vec<_>>>()?;
        let report = estimate_3bb_exact(&probs, &bases, &EstimatorOptions::default())?;
        if report.flags.likelihood_tie {
            summary.flagged += 1;
        } else {
            let f = infidelity(&psi, &report.estimate)?;
            summary.max_infidelity_3bb = summary.max_infidelity_3bb.max(f);
            if f.is_nan() || f >= EXACT_TOL {
                return Err(fail(format!("three-basis infidelity {f:.3e}")));
            }
        }

        let probs5 = five_basis_list(d, params)?
            .iter()
            .map(|b| exact_probs(&psi, b))
            .collect::<tribasis::Result<Vec<_>>>()?;
        let report5 = estimate_5bb_report(
            &FiveBasisObservations::from_probs(&probs5)?,
            params,
            &EstimatorOptions::default(),
        )?;
        let f = infidelity(&psi, &report5.estimate)?;
        summary.max_infidelity_5bb = summary.max_infidelity_5bb.max(f);
        if f.is_nan() || f >= EXACT_TOL {
            return Err(fail(format!("five-basis infidelity {f:.3e}")));
        }
    }
    Ok(summary)
}

pub fn cmd_oracle_check(args: &OracleArgs) -> CliResult<()> {
    let s = oracle_check(args)?;
    println!(
        "oracle-check d={} trials={} pass: max |dLambda| = {:.3e}, max infidelity 3bb = {:.3e}, 5bb = {:.3e}, flagged = {}",
        args.dim, s.trials, s.max_lambda_error, s.max_infidelity_3bb, s.max_infidelity_5bb, s.flagged
    );
    Ok(())
}

