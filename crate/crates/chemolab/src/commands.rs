//! The check / run / sweep drivers behind the CLI.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use chemolab_core::diagnostics::{
    lp_identity_residual, mass_balance_residual, sweep_point, sweep_points, SweepAtlas, SweepSpec,
};
use chemolab_core::dynamics::{run, RunOutcome};
use chemolab_core::hypothesis::{
    check_hypothesis, lambda_tildes_unchecked, moser_table, HypothesisReport, RkConvention,
};
use chemolab_core::params::{ModelParams, Sign};

use crate::config::{ExperimentConfig, GeometryConfig};
use crate::json::{self, float, object, string, JsonValue};
use crate::{checkpoint, csvio, exit_codes};

pub struct CommandError {
    pub code: u8,
    pub message: String,
}

impl CommandError {
    fn invalid(message: impl Into<String>) -> CommandError {
        CommandError {
            code: exit_codes::INVALID_INPUT,
            message: message.into(),
        }
    }
}

fn params_json(p: &ModelParams) -> JsonValue {
    object(vec![
        ("n", JsonValue::UInt(p.n as u64)),
        ("m", float(p.m)),
        ("a", float(p.a)),
        ("b", float(p.b)),
        ("alpha", float(p.alpha)),
        ("beta", float(p.beta)),
        ("eta", float(p.eta)),
        ("sign", string(p.sign.as_str())),
    ])
}

fn report_json(report: &HypothesisReport) -> JsonValue {
    let sample_p = report.p_bar + 1.0;
    let t = lambda_tildes_unchecked(sample_p, &report.params);
    object(vec![
        ("params", params_json(&report.params)),
        ("l", float(report.l)),
        ("h1_threshold", float(report.h1_threshold)),
        ("h2_threshold", float(report.h2_threshold)),
        ("h1_holds", JsonValue::Bool(report.h1_holds)),
        ("h2_holds", JsonValue::Bool(report.h2_holds)),
        ("h1_margin", float(report.h1_margin)),
        ("h2_margin", float(report.h2_margin)),
        ("p_bar", float(report.p_bar)),
        (
            "predicted",
            string(if report.predicted_bounded {
                "bounded"
            } else {
                "no guarantee"
            }),
        ),
        (
            "remark_condition_holds",
            report
                .remark_condition_holds
                .map_or(JsonValue::Null, JsonValue::Bool),
        ),
        (
            "lambda_sample",
            object(vec![
                ("p", float(sample_p)),
                ("lambda0", float(t.lambda0)),
                ("lambda1", float(t.lambda1)),
                ("lambdaEta", float(t.lambda_eta)),
                ("in_range", JsonValue::Bool(t.all_in_unit_interval())),
            ]),
        ),
    ])
}

fn config_json(cfg: &ExperimentConfig, resolved_threshold: Option<f64>) -> JsonValue {
    let geometry = match cfg.geometry {
        GeometryConfig::Radial { r_max, cells } => object(vec![
            ("kind", string("radial")),
            ("r_max", float(r_max)),
            ("cells", JsonValue::UInt(cells as u64)),
        ]),
        GeometryConfig::Box {
            extent,
            points_per_axis,
        } => object(vec![
            ("kind", string("box")),
            ("extent", float(extent)),
            ("points_per_axis", JsonValue::UInt(points_per_axis as u64)),
        ]),
    };
    let mut solver_fields = vec![
        ("t_end", float(cfg.solver.t_end)),
        ("dt_init", float(cfg.solver.dt_init)),
        ("dt_min", float(cfg.solver.dt_min)),
        ("cfl_safety", float(cfg.solver.cfl_safety)),
        ("eps", float(cfg.solver.eps)),
        ("scheme", string(cfg.solver.scheme.as_str())),
    ];
    if let Some(threshold) = resolved_threshold.or(cfg.solver.blowup_linf_threshold) {
        solver_fields.push(("blowup_linf_threshold", float(threshold)));
    }
    let mut fields = vec![
        ("seed", JsonValue::UInt(cfg.seed)),
        ("model", params_json(&cfg.model)),
        ("geometry", geometry),
        (
            "initial_data",
            object(vec![
                ("family", string(cfg.initial.family.as_str())),
                ("mass", float(cfg.initial.mass)),
                ("width", float(cfg.initial.width)),
                (
                    "center",
                    JsonValue::Array(cfg.initial.center.iter().map(|&c| float(c)).collect()),
                ),
            ]),
        ),
        ("solver", object(solver_fields)),
        (
            "outputs",
            object(vec![
                ("directory", string(cfg.outputs.directory.clone())),
                ("cadence", float(cfg.outputs.cadence)),
                (
                    "p_list",
                    JsonValue::Array(cfg.outputs.p_list.iter().map(|&p| float(p)).collect()),
                ),
                (
                    "identity_p",
                    cfg.outputs.identity_p.map_or(JsonValue::Null, float),
                ),
            ]),
        ),
    ];
    if let Some(sweep) = &cfg.sweep {
        fields.push((
            "sweep",
            object(vec![
                ("parallelism", JsonValue::UInt(sweep.parallelism as u64)),
                (
                    "axes",
                    JsonValue::Array(
                        sweep
                            .axes
                            .iter()
                            .map(|axis| {
                                object(vec![
                                    ("param", string(axis.param.as_str())),
                                    (
                                        "values",
                                        JsonValue::Array(
                                            axis.values.iter().map(|&v| float(v)).collect(),
                                        ),
                                    ),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]),
        ));
    }
    object(fields)
}

fn moser_json(params: &ModelParams, k_max: u32) -> Result<JsonValue, CommandError> {
    let rows = moser_table(params, k_max, RkConvention::PreviousExponent)
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    Ok(JsonValue::Array(
        rows.iter()
            .map(|r| {
                object(vec![
                    ("k", JsonValue::UInt(r.k as u64)),
                    ("p_k", float(r.p_k)),
                    ("q1_k", float(r.q1_k)),
                    ("qEta_k", float(r.q_eta_k)),
                    ("q0_k", float(r.q0_k)),
                    ("r_k", float(r.r_k)),
                    ("mu1_k", float(r.mu1_k)),
                    ("muEta_k", float(r.mu_eta_k)),
                    ("mu0_k", float(r.mu0_k)),
                ])
            })
            .collect(),
    ))
}

/// Evaluate the hypotheses for one parameter set, print the report, and
/// optionally enforce expectations (exit code 3 on mismatch).
pub fn cmd_check(
    params: &ModelParams,
    expect_h1: Option<bool>,
    expect_h2: Option<bool>,
    moser_k: Option<u32>,
    json_path: Option<&Path>,
) -> Result<u8, CommandError> {
    params
        .validate()
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    let report = check_hypothesis(params);
    let hold = |b: bool| if b { "holds" } else { "does not hold" };
    println!(
        "model: n={} m={} a={} b={} alpha={} beta={} eta={} sign={}",
        params.n, params.m, params.a, params.b, params.alpha, params.beta, params.eta, params.sign
    );
    println!("  l            = {}", report.l);
    println!(
        "  h1_threshold = {}  (margin {:+}, {})",
        report.h1_threshold,
        report.h1_margin,
        hold(report.h1_holds)
    );
    println!(
        "  h2_threshold = {}  (margin {:+}, {})",
        report.h2_threshold,
        report.h2_margin,
        hold(report.h2_holds)
    );
    println!("  p_bar        = {}", report.p_bar);
    let sample_p = report.p_bar + 1.0;
    let t = lambda_tildes_unchecked(sample_p, params);
    println!(
        "  lambda at p = {}: lambda0={} lambda1={} lambdaEta={}{}",
        sample_p,
        t.lambda0,
        t.lambda1,
        t.lambda_eta,
        if t.all_in_unit_interval() {
            ""
        } else {
            "  [outside (0,1): hypothesis not satisfied]"
        }
    );
    if let Some(remark) = report.remark_condition_holds {
        println!(
            "  simplified condition alpha < 1 + 2 beta / n: {}",
            hold(remark)
        );
    }
    println!(
        "  predicted ({}): {}",
        params.sign,
        if report.predicted_bounded {
            "bounded"
        } else {
            "no guarantee"
        }
    );
    let mut report_value = report_json(&report);
    if let Some(k_max) = moser_k {
        let table = moser_json(params, k_max)?;
        if let JsonValue::Object(ref mut fields) = report_value {
            fields.push(("moser_table".to_string(), table));
        }
        let rows = moser_table(params, k_max, RkConvention::PreviousExponent)
            .map_err(|e| CommandError::invalid(e.to_string()))?;
        println!("  iteration table (previous-exponent r_k):");
        for r in &rows {
            println!(
                "    k={:>2} p_k={:<12} r_k={:.6} mu1={:.6} muEta={:.6} mu0={:.6}",
                r.k, r.p_k, r.r_k, r.mu1_k, r.mu_eta_k, r.mu0_k
            );
        }
    }
    let doc = json::to_string(&report_value);
    match json_path {
        Some(path) => {
            fs::write(path, &doc)
                .map_err(|e| CommandError::invalid(format!("cannot write {path:?}: {e}")))?;
            println!("wrote {}", path.display());
        }
        None => print!("{doc}"),
    }
    let mut code = exit_codes::SUCCESS;
    if let Some(expected) = expect_h1 {
        if expected != report.h1_holds {
            eprintln!(
                "expectation mismatch: expected h1_holds = {expected}, got {}",
                report.h1_holds
            );
            code = exit_codes::EXPECTATION_MISMATCH;
        }
    }
    if let Some(expected) = expect_h2 {
        if expected != report.h2_holds {
            eprintln!(
                "expectation mismatch: expected h2_holds = {expected}, got {}",
                report.h2_holds
            );
            code = exit_codes::EXPECTATION_MISMATCH;
        }
    }
    Ok(code)
}

fn outcome_summary_json(
    cfg: &ExperimentConfig,
    outcome: &RunOutcome,
    resolved_threshold: f64,
) -> JsonValue {
    object(vec![
        ("verdict", string(outcome.verdict.as_str())),
        ("t_final", float(outcome.t_final)),
        ("max_linf", float(outcome.max_linf)),
        ("step_count", JsonValue::UInt(outcome.step_count)),
        ("dt_pinned_steps", JsonValue::UInt(outcome.dt_pinned_steps)),
        ("clipped_mass", float(outcome.clipped_mass)),
        ("rho_bar_initial", float(outcome.rho_bar_initial)),
        ("eps", float(outcome.eps)),
        ("code_version", string(env!("CARGO_PKG_VERSION"))),
        ("config", config_json(cfg, Some(resolved_threshold))),
    ])
}

/// Integrate one configured experiment and write the norm series CSV, the
/// final checkpoint, residual CSVs when configured, and the JSON summary.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<u8, CommandError> {
    let geometry = cfg
        .geometry
        .build(cfg.model.n)
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    let rho0 = cfg.initial.build(&geometry);
    let solver = cfg.solver.resolve(rho0.linf(), &cfg.outputs);
    let threshold = solver.blowup_linf_threshold;
    let outcome =
        run(rho0, &cfg.model, &solver).map_err(|e| CommandError::invalid(e.to_string()))?;

    let dir = PathBuf::from(&cfg.outputs.directory);
    fs::create_dir_all(&dir)
        .map_err(|e| CommandError::invalid(format!("cannot create {dir:?}: {e}")))?;
    let config_line = csvio::config_comment(&json::to_line(&config_json(cfg, Some(threshold))));
    let norms_path = dir.join("norms.csv");
    fs::write(
        &norms_path,
        config_line.clone() + &csvio::norms_csv(&outcome.norm_series, &solver.p_list),
    )
    .map_err(|e| CommandError::invalid(e.to_string()))?;
    let ckpt_path = dir.join("checkpoint.bin");
    checkpoint::write(&ckpt_path, &outcome.final_field)
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    if let Ok(residuals) = mass_balance_residual(&outcome.norm_series, &cfg.model) {
        fs::write(
            dir.join("mass_residuals.csv"),
            config_line.clone() + &csvio::residuals_csv(&residuals),
        )
        .map_err(|e| CommandError::invalid(e.to_string()))?;
    }
    if let Some(p_exp) = solver.identity_p {
        if let Ok(residuals) = lp_identity_residual(&outcome.norm_series, &cfg.model, p_exp) {
            fs::write(
                dir.join("identity_residuals.csv"),
                config_line.clone() + &csvio::residuals_csv(&residuals),
            )
            .map_err(|e| CommandError::invalid(e.to_string()))?;
        }
    }
    let summary = json::to_string(&outcome_summary_json(cfg, &outcome, threshold));
    fs::write(dir.join("summary.json"), summary)
        .map_err(|e| CommandError::invalid(e.to_string()))?;

    println!(
        "verdict: {}  (t_final = {}, steps = {}, max linf = {})",
        outcome.verdict, outcome.t_final, outcome.step_count, outcome.max_linf
    );
    println!("wrote {}", dir.display());
    Ok(exit_codes::SUCCESS)
}

fn atlas_json(cfg: &ExperimentConfig, atlas: &SweepAtlas, compare_theory: bool) -> JsonValue {
    let records = atlas
        .records
        .iter()
        .map(|r| {
            let mut fields = vec![
                ("params", params_json(&r.params)),
                ("mass", float(r.mass)),
                ("verdict", string(r.verdict.as_str())),
                ("h1_holds", JsonValue::Bool(r.h1_holds)),
                ("h2_holds", JsonValue::Bool(r.h2_holds)),
                ("h1_margin", float(r.h1_margin)),
                ("h2_margin", float(r.h2_margin)),
                (
                    "remark_condition_holds",
                    r.remark_condition_holds
                        .map_or(JsonValue::Null, JsonValue::Bool),
                ),
                ("refined", JsonValue::Bool(r.refined)),
                ("t_final", float(r.t_final)),
                ("max_linf", float(r.max_linf)),
                ("step_count", JsonValue::UInt(r.step_count)),
            ];
            if compare_theory {
                fields.push(("consistency", string(r.consistency.as_str())));
            }
            object(fields)
        })
        .collect();
    object(vec![
        (
            "axes",
            JsonValue::Array(
                atlas
                    .axes
                    .iter()
                    .map(|axis| {
                        object(vec![
                            ("param", string(axis.param.as_str())),
                            (
                                "values",
                                JsonValue::Array(axis.values.iter().map(|&v| float(v)).collect()),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("records", JsonValue::Array(records)),
        ("config", config_json(cfg, None)),
    ])
}

/// Worker count: the sweep's parallelism knob capped by CHEMOLAB_THREADS.
fn worker_count(parallelism: usize, points: usize) -> usize {
    let env_cap = std::env::var("CHEMOLAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(usize::MAX);
    parallelism.max(1).min(env_cap).min(points.max(1))
}

/// Run the configured sweep (radial solver), classify every point, and write
/// the atlas as CSV and JSON.
pub fn cmd_sweep(cfg: &ExperimentConfig, compare_theory: bool) -> Result<u8, CommandError> {
    let sweep_cfg = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CommandError::invalid("config has no [sweep] section"))?;
    if sweep_cfg.axes.is_empty() || sweep_cfg.axes.len() > 2 {
        return Err(CommandError::invalid(
            "sweep needs one or two axes (sweep.axis1, sweep.axis2)",
        ));
    }
    let (r_max, cells) = match cfg.geometry {
        GeometryConfig::Radial { r_max, cells } => (r_max, cells),
        GeometryConfig::Box { .. } => {
            return Err(CommandError::invalid(
                "sweeps run on the radial solver; configure [geometry.radial]",
            ))
        }
    };
    // the sweep shares one resolved solver config; the threshold must be a
    // concrete number since initial data varies along a mass axis
    let initial_probe = {
        let geometry = cfg
            .geometry
            .build(cfg.model.n)
            .map_err(|e| CommandError::invalid(e.to_string()))?;
        cfg.initial.build(&geometry).linf()
    };
    let solver = cfg.solver.resolve(initial_probe, &cfg.outputs);
    let spec = SweepSpec {
        base: cfg.model,
        initial: cfg.initial,
        mesh_r_max: r_max,
        mesh_cells: cells,
        solver,
        axes: sweep_cfg.axes.clone(),
    };

    let points = sweep_points(&spec);
    let workers = worker_count(sweep_cfg.parallelism, points.len());
    let records = Mutex::new(vec![None; points.len()]);
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let record = sweep_point(&spec, &points[i]);
                records.lock().unwrap()[i] = Some(record);
            });
        }
    });
    let records: Vec<_> = records
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every point visited"))
        .collect();
    let atlas = SweepAtlas {
        axes: spec.axes.clone(),
        records,
    };

    let dir = PathBuf::from(&cfg.outputs.directory);
    fs::create_dir_all(&dir)
        .map_err(|e| CommandError::invalid(format!("cannot create {dir:?}: {e}")))?;
    let config_line = csvio::config_comment(&json::to_line(&config_json(cfg, None)));
    fs::write(
        dir.join("atlas.csv"),
        config_line + &csvio::atlas_csv(&atlas, compare_theory),
    )
    .map_err(|e| CommandError::invalid(e.to_string()))?;
    fs::write(
        dir.join("atlas.json"),
        json::to_string(&atlas_json(cfg, &atlas, compare_theory)),
    )
    .map_err(|e| CommandError::invalid(e.to_string()))?;

    let counts = |v: chemolab_core::dynamics::Verdict| {
        atlas.records.iter().filter(|r| r.verdict == v).count()
    };
    println!(
        "sweep: {} points ({} bounded, {} blow_up, {} inconclusive), {} workers",
        atlas.records.len(),
        counts(chemolab_core::dynamics::Verdict::Bounded),
        counts(chemolab_core::dynamics::Verdict::BlowUp),
        counts(chemolab_core::dynamics::Verdict::Inconclusive),
        workers
    );
    println!("wrote {}", dir.display());
    Ok(exit_codes::SUCCESS)
}

/// Build model parameters from inline CLI flags.
#[allow(clippy::too_many_arguments)]
pub fn inline_params(
    n: u32,
    m: f64,
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
    eta: f64,
    sign: &str,
) -> Result<ModelParams, CommandError> {
    let sign = match sign {
        "attractive" => Sign::Attractive,
        "repulsive" => Sign::Repulsive,
        other => {
            return Err(CommandError::invalid(format!(
                "sign: expected attractive|repulsive, got `{other}`"
            )))
        }
    };
    ModelParams::new(n, m, a, b, alpha, beta, eta, sign)
        .map_err(|e| CommandError::invalid(e.to_string()))
}

/// Parse a config file from disk.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CommandError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CommandError::invalid(format!("cannot read {}: {e}", path.display())))?;
    crate::config::parse(&text).map_err(|e| CommandError::invalid(e.to_string()))
}
