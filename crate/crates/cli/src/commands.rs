use qetlab_core::circuit::{
    bob_energy, build_circuit, chebyshev_budget, exact_row, protocol_rotations, sample_pauli_stream, Measured,
    ObservableRow, BOB_OBSERVABLES,
};
use qetlab_core::hamiltonians::{appendix_b_basis, flipflop_ground_state, original_ground_state, spectrum};
use qetlab_core::protocol::{
    alice_x_measurement, extraction_ratio_sweep, flipflop_extraction, original_extraction, run_protocol,
    zeno_trace_distance,
};
use qetlab_core::slp::{certify_slp_with_oracle, PSD_TOL};
use qetlab_core::{CircuitMode, ComplexMatrix, DensityMatrix, ModelParams, OracleConfig, Outcome};

use crate::args::{CertifyArgs, CircuitArgs, Mode, Model, ModelArgs, OutcomeArg, RunArgs, Stage, SweepArgs, ZenoArgs};
use crate::config::FileConfig;
use crate::error::{CliError, EXIT_INDETERMINATE, EXIT_OK};
use crate::report::{Report, Value};

/// Tolerance used for the Chebyshev bound reported by `circuit`.
const SHOT_EPSILON: f64 = 0.02;

pub struct CommandOutput {
    pub report: Report,
    pub exit_code: i32,
}

fn ok(report: Report) -> CommandOutput {
    CommandOutput { report, exit_code: EXIT_OK }
}

fn model_name(m: Model) -> &'static str {
    match m {
        Model::Original => "original",
        Model::Flipflop => "flipflop",
        Model::AppendixB => "appendix_b",
    }
}

/// Resolves the model flags and echoes them into the report inputs.
fn resolve_model(args: &ModelArgs, cfg: &FileConfig, report: &mut Report) -> Result<(Model, ModelParams), CliError> {
    let model = cfg.get_enum(args.model, "model")?.unwrap_or(Model::Flipflop);
    report.input("model", model_name(model));
    let params = match model {
        Model::Original | Model::Flipflop => {
            let h = cfg.get(args.h, "h")?.unwrap_or(1.0);
            let kappa = cfg.get(args.kappa, "kappa")?.unwrap_or(1.5);
            report.input("h", h).input("kappa", kappa);
            if model == Model::Original {
                ModelParams::original(h, kappa)?
            } else {
                ModelParams::flipflop(h, kappa)?
            }
        }
        Model::AppendixB => {
            let alpha = cfg.get(args.alpha, "alpha")?.unwrap_or(0.3);
            let beta = cfg.get(args.beta, "beta")?.unwrap_or(0.2);
            let big_e = cfg.get(args.big_e, "E")?.unwrap_or(2.0);
            let big_f = cfg.get(args.big_f, "F")?.unwrap_or(1.0);
            report.input("alpha", alpha).input("beta", beta).input("E", big_e).input("F", big_f);
            ModelParams::appendix_b(alpha, beta, big_e, big_f)?
        }
    };
    Ok((model, params))
}

fn select_state(selector: &str, params: &ModelParams, warnings: &mut Vec<String>) -> Result<DensityMatrix, CliError> {
    if selector.len() == 2 && selector.chars().all(|c| c == '0' || c == '1') {
        return Ok(DensityMatrix::basis(selector)?);
    }
    if selector == "ground" {
        let v = match *params {
            ModelParams::FlipFlop { h, kappa } => flipflop_ground_state(h, kappa)?,
            ModelParams::Original { h, kappa } => original_ground_state(h, kappa)?,
            _ => spectrum(&params.build()?)?.vector(0),
        };
        return Ok(DensityMatrix::pure(&v)?);
    }
    if selector == "v2" {
        return match *params {
            ModelParams::AppendixB { alpha, beta, .. } | ModelParams::AppendixBGeneral { alpha, beta, .. } => {
                Ok(DensityMatrix::pure(&appendix_b_basis(alpha, beta).v[1])?)
            }
            _ => Err(CliError::Usage("state v2 requires --model appendix_b".into())),
        };
    }
    if let Some(k) = selector.strip_prefix("eigenstate-") {
        let k: usize = k.parse().map_err(|_| CliError::Usage(format!("bad eigenstate index in '{selector}'")))?;
        if k > 3 {
            return Err(CliError::Usage(format!("eigenstate index {k} out of range 0..3")));
        }
        let eig = spectrum(&params.build()?)?;
        let degenerate = (k > 0 && (eig.values[k] - eig.values[k - 1]).abs() < 1e-9)
            || (k < 3 && (eig.values[k + 1] - eig.values[k]).abs() < 1e-9);
        if degenerate {
            warnings.push(format!("eigenvalue {k} is degenerate; the eigenvector within its eigenspace is arbitrary"));
        }
        return Ok(DensityMatrix::pure(&eig.vector(k))?);
    }
    Err(CliError::Usage(format!("unknown state '{selector}' (expected 00, 01, 10, 11, ground, v2 or eigenstate-k)")))
}

pub fn certify(args: &CertifyArgs, cfg: &FileConfig) -> Result<CommandOutput, CliError> {
    let mut report = Report::record("certify");
    let (_, params) = resolve_model(&args.model, cfg, &mut report)?;
    let state = cfg.get(args.state.clone(), "state")?.unwrap_or_else(|| "ground".into());
    let post = cfg.flag(args.post_measurement, "post-measurement")?;
    let starts = cfg.get(args.starts, "starts")?.unwrap_or(OracleConfig::default().starts);
    let seed = cfg.seed(args.seed)?;
    report.input("state", state.as_str()).input("post_measurement", post).input("starts", starts).input("seed", seed);

    let mut warnings = Vec::new();
    let mut rho = select_state(&state, &params, &mut warnings)?;
    if post {
        rho = alice_x_measurement(&rho)?.mixture()?;
    }
    let h = params.build()?.matrix;
    let config = OracleConfig { starts, seed, ..OracleConfig::default() };
    let cert = certify_slp_with_oracle(&rho, &h, PSD_TOL, &config)?;
    let oracle = cert.oracle.as_ref().expect("oracle requested");

    for (i, v) in cert.m_eigenvalues.iter().enumerate() {
        report.field(&format!("m_eigenvalue_{i}"), *v);
    }
    report
        .field("min_eigenvalue", cert.min_eigenvalue())
        .field("stationarity_residual", cert.stationarity_residual)
        .field("tolerance", cert.tolerance)
        .field("verdict", cert.psd_verdict)
        .field("indeterminate", cert.indeterminate)
        .field("oracle_min_delta_e", oracle.min_delta_e)
        .field("oracle_tolerance", oracle.tolerance)
        .field("oracle_verdict", oracle.verdict())
        .field("oracle_stagnated_starts", oracle.stagnated_starts)
        .field("agreement", cert.agreement());

    if cert.indeterminate {
        warnings.push(format!("smallest M eigenvalue {:.3e} lies in the indeterminate band", cert.min_eigenvalue()));
    } else if cert.agreement() == Some(false) {
        warnings.push("the eigenvalue test and the oracle disagree".into());
    }
    report.warnings = warnings;
    let exit_code = if cert.indeterminate { EXIT_INDETERMINATE } else { EXIT_OK };
    Ok(CommandOutput { report, exit_code })
}

pub fn run(args: &RunArgs, cfg: &FileConfig) -> Result<CommandOutput, CliError> {
    let mut report = Report::record("run");
    let (_, params) = resolve_model(&args.model, cfg, &mut report)?;
    let r = run_protocol(&params)?;
    let closed_form = match params {
        ModelParams::FlipFlop { h, kappa } => Some(flipflop_extraction(h, kappa)?),
        ModelParams::Original { h, kappa } => Some(original_extraction(h, kappa)?),
        _ => None,
    };
    report
        .field("energy_initial", r.energy_initial)
        .field("energy_before", r.energy_before)
        .field("energy_after", r.energy_after)
        .field("extracted", r.extracted)
        .field("extracted_closed_form", closed_form)
        .field("p_plus", r.ensemble.branch(Outcome::Plus).probability)
        .field("p_minus", r.ensemble.branch(Outcome::Minus).probability)
        .field("slp_initial_verdict", r.slp_initial.psd_verdict)
        .field("slp_initial_min_eigenvalue", r.slp_initial.min_eigenvalue())
        .field("slp_post_verdict", r.slp_post_measurement.psd_verdict)
        .field("slp_post_min_eigenvalue", r.slp_post_measurement.min_eigenvalue())
        .field("yy_initial", r.yy_expectation_trace[0])
        .field("yy_post_measurement", r.yy_expectation_trace[1])
        .field("yy_final", r.yy_expectation_trace[2]);
    report.warnings = r.warnings;
    Ok(ok(report))
}

pub fn sweep(args: &SweepArgs, cfg: &FileConfig) -> Result<CommandOutput, CliError> {
    let mut report = Report::table("sweep", &["kappa_over_h", "e_new", "e_orig", "ratio"]);
    let min = cfg.get(args.kappa_min, "kappa-min")?.unwrap_or(0.1);
    let max = cfg.get(args.kappa_max, "kappa-max")?.unwrap_or(3.0);
    let steps = cfg.get(args.steps, "steps")?.unwrap_or(30);
    report.input("kappa_min", min).input("kappa_max", max).input("steps", steps);
    if !(min > 0.0 && min.is_finite() && max.is_finite()) {
        return Err(CliError::Usage("kappa range must be positive and finite".into()));
    }
    if min >= max {
        return Err(CliError::Usage(format!("kappa-min {min} must be below kappa-max {max}")));
    }
    if steps < 2 {
        return Err(CliError::Usage("sweep needs at least 2 steps".into()));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| if i == steps - 1 { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 })
        .collect();
    let points = extraction_ratio_sweep(&grid)?;
    for p in &points {
        report.row(vec![p.kappa_over_h.into(), p.e_new.into(), p.e_orig.into(), p.ratio.into()]);
    }
    if points.iter().any(|p| p.at_crossing) {
        report.warnings.push("grid includes kappa = h, the flip-flop level crossing".into());
    }
    Ok(ok(report))
}

fn sampled_row(rho: &DensityMatrix, shots: u64, seed: u64, first_stream: u64) -> Result<Vec<Measured>, CliError> {
    BOB_OBSERVABLES
        .iter()
        .enumerate()
        .map(|(i, w)| Ok(Measured::from(&sample_pauli_stream(rho, w, shots, seed, first_stream + i as u64)?)))
        .collect()
}

pub fn circuit(args: &CircuitArgs, cfg: &FileConfig) -> Result<CommandOutput, CliError> {
    let mut report = Report::record("circuit");
    let (_, params) = resolve_model(&args.model, cfg, &mut report)?;
    let ModelParams::FlipFlop { h, kappa } = params else {
        return Err(CliError::Usage("circuit supports --model flipflop only".into()));
    };
    let mode = cfg.get_enum(args.mode, "mode")?.unwrap_or(Mode::Dynamic);
    let stage = cfg.get_enum(args.stage, "stage")?.unwrap_or(Stage::After);
    let shots = cfg.get(args.shots, "shots")?.unwrap_or(20_000);
    let seed = cfg.seed(args.seed)?;
    if shots == 0 {
        return Err(CliError::Usage("shots must be positive".into()));
    }
    let mode = match mode {
        Mode::Dynamic => CircuitMode::Dynamic,
        Mode::Deferred => CircuitMode::Deferred,
    };
    report
        .input("mode", mode.to_string())
        .input("stage", if stage == Stage::Before { "before" } else { "after" })
        .input("shots", shots)
        .input("seed", seed);

    let zero = DensityMatrix::basis("00")?;
    let id = ComplexMatrix::identity(2);
    let (u_plus, u_minus) = protocol_rotations(h, kappa)?;
    let before = build_circuit(mode, id.clone(), id)?.simulate(&zero)?.final_state;
    let after = build_circuit(mode, u_plus, u_minus)?.simulate(&zero)?.final_state;

    let exact_before = exact_row(&before, h, kappa)?;
    let exact_after = exact_row(&after, h, kappa)?;
    // Streams 0-2 sample the before circuit, 3-5 the after circuit.
    let shots_before = sampled_row(&before, shots, seed, 0)?;
    let shots_after = sampled_row(&after, shots, seed, 3)?;
    let (e_before, err_before) = bob_energy(&shots_before, h, kappa)?;
    let (e_after, err_after) = bob_energy(&shots_after, h, kappa)?;

    let (exact, sampled, e, err): (&ObservableRow, &[Measured], f64, f64) = match stage {
        Stage::Before => (&exact_before, &shots_before, e_before, err_before),
        Stage::After => (&exact_after, &shots_after, e_after, err_after),
    };
    report
        .field("iz_exact", exact.iz)
        .field("xx_exact", exact.xx)
        .field("yy_exact", exact.yy)
        .field("e_bob_exact", exact.e_bob);
    for m in sampled {
        let name = m.observable.to_lowercase();
        report.field(&format!("{name}_shots"), m.value).field(&format!("{name}_std_error"), m.std_error);
    }
    report
        .field("e_bob_shots", e)
        .field("e_bob_std_error", err)
        .field("extracted_exact", exact_before.e_bob - exact_after.e_bob)
        .field("extracted_shots", e_before - e_after)
        .field("extracted_std_error", err_before.hypot(err_after))
        .field("epsilon", SHOT_EPSILON)
        .field("chebyshev_delta", chebyshev_budget(shots, SHOT_EPSILON)?);
    Ok(ok(report))
}

fn parse_steps(text: &str) -> Result<Vec<usize>, CliError> {
    let steps: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad step count '{s}'"))))
        .collect::<Result<_, _>>()?;
    if steps.is_empty() || steps.contains(&0) {
        return Err(CliError::Usage("step counts must be positive".into()));
    }
    if steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("step counts must be strictly ascending".into()));
    }
    Ok(steps)
}

pub fn zeno(args: &ZenoArgs, cfg: &FileConfig) -> Result<CommandOutput, CliError> {
    let mut report = Report::table("zeno", &["steps", "trace_distance"]);
    let (_, params) = resolve_model(&args.model, cfg, &mut report)?;
    let t = cfg.get(args.t, "t")?.unwrap_or(1.0);
    let steps_text = cfg.get(args.steps.clone(), "steps")?.unwrap_or_else(|| "100,1000,10000".into());
    let outcome = match cfg.get_enum(args.outcome, "outcome")?.unwrap_or(OutcomeArg::Plus) {
        OutcomeArg::Plus => Outcome::Plus,
        OutcomeArg::Minus => Outcome::Minus,
    };
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("t must be non-negative, got {t}")));
    }
    let steps = parse_steps(&steps_text)?;
    report.input("t", t).input("outcome", outcome.label()).input("steps", steps_text.as_str());

    let h = params.build()?.matrix;
    for &n in &steps {
        let d = zeno_trace_distance(&h, outcome, t, n)?;
        report.row(vec![Value::from(n), d.into()]);
    }
    Ok(ok(report))
}
