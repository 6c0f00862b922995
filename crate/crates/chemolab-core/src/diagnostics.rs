//! Norm functionals, integral-identity residuals, verdict classification
//! against the (H1)/(H2) predictions, and parameter-sweep atlases.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::{run, NormSample, RunOutcome, SolverConfig, Verdict};
use crate::geometry::{Field, Geometry, InitialData, RadialMesh};
use crate::hypothesis::{check_hypothesis, dissipation_c1, HypothesisReport};
use crate::math;
use crate::params::ModelParams;
use crate::potential::unit_ball_volume;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagnosticsError {
    /// L^p norms need p >= 1 (or the infinity sentinel).
    InvalidExponent { value: f64 },
    /// Residual evaluation needs at least three samples with the required
    /// functionals.
    NotEnoughData { needed: &'static str },
    /// The outcome and the report come from different parameter sets.
    InputMismatch,
}

impl fmt::Display for DiagnosticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagnosticsError::InvalidExponent { value } => {
                write!(f, "InvalidExponent: p = {value} must be >= 1 or infinity")
            }
            DiagnosticsError::NotEnoughData { needed } => {
                write!(f, "NotEnoughData: {needed}")
            }
            DiagnosticsError::InputMismatch => {
                f.write_str("InputMismatch: outcome and report use different parameters")
            }
        }
    }
}

/// Quadrature-weighted L^p norm; pass f64::INFINITY for the max norm.
pub fn lp_norm(rho: &Field, p_exp: f64) -> Result<f64, DiagnosticsError> {
    if p_exp == f64::INFINITY {
        return Ok(rho.linf());
    }
    if !p_exp.is_finite() || p_exp < 1.0 {
        return Err(DiagnosticsError::InvalidExponent { value: p_exp });
    }
    Ok(math::powf(rho.integrate_pow(p_exp), 1.0 / p_exp))
}

/// One residual record: both sides of an identity at a sample time, plus
/// |lhs-rhs| / max(|lhs|, |rhs|, 1e-30).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_residual: f64,
}

impl IdentityResidual {
    fn new(t: f64, lhs: f64, rhs: f64) -> IdentityResidual {
        let scale = lhs.abs().max(rhs.abs()).max(1e-30);
        IdentityResidual {
            t,
            lhs,
            rhs,
            rel_residual: (lhs - rhs).abs() / scale,
        }
    }
}

/// Three-point derivative at the middle of three (possibly unevenly spaced)
/// samples; second-order accurate at t1.
fn centered_derivative(t0: f64, f0: f64, t1: f64, f1: f64, t2: f64, f2: f64) -> f64 {
    f0 * (t1 - t2) / ((t0 - t1) * (t0 - t2))
        + f1 * (2.0 * t1 - t0 - t2) / ((t1 - t0) * (t1 - t2))
        + f2 * (t1 - t0) / ((t2 - t0) * (t2 - t1))
}

/// Compare the centered-difference d/dt of the total mass against
/// a INT rho^eta - b INT rho^alpha INT rho^beta at interior sample times.
pub fn mass_balance_residual(
    series: &[NormSample],
    p: &ModelParams,
) -> Result<Vec<IdentityResidual>, DiagnosticsError> {
    if series.len() < 3 {
        return Err(DiagnosticsError::NotEnoughData {
            needed: "at least 3 samples for a centered difference",
        });
    }
    let mut out = Vec::with_capacity(series.len() - 2);
    for w in series.windows(3) {
        let (prev, mid, next) = (&w[0], &w[1], &w[2]);
        let lhs = centered_derivative(prev.t, prev.mass, mid.t, mid.mass, next.t, next.mass);
        let rhs = p.a * mid.int_rho_eta - p.b * mid.int_rho_alpha * mid.int_rho_beta;
        out.push(IdentityResidual::new(mid.t, lhs, rhs));
    }
    Ok(out)
}

/// Residual of the L^p differential identity
///
/// ```text
/// d/dt INT rho^p + 2 c1 INT |grad rho^((m+p-1)/2)|^2
///   + p b INT rho^(p+alpha-1) INT rho^beta
///   = p a INT rho^(p+eta-1) +/- n (p-1) alpha_n INT rho^p (rho - rho_bar)
/// ```
///
/// with c1 the dissipation coefficient; the last term enters with minus for
/// repulsive runs and is evaluated against the same neutralized interaction
/// source the truncated dynamics integrates (rho_bar is the recorded
/// background; it vanishes in the untruncated limit and contributes under
/// 0.2% for compact data in a large domain). Uses centered time differences
/// at the stored snapshots.
pub fn lp_identity_residual(
    series: &[NormSample],
    p: &ModelParams,
    p_exp: f64,
) -> Result<Vec<IdentityResidual>, DiagnosticsError> {
    if series.len() < 3 {
        return Err(DiagnosticsError::NotEnoughData {
            needed: "at least 3 samples for a centered difference",
        });
    }
    if series.iter().any(|s| s.identity.is_none()) {
        return Err(DiagnosticsError::NotEnoughData {
            needed: "samples are missing the gradient functionals; configure identity_p",
        });
    }
    let c1 = dissipation_c1(p_exp, p.m);
    let alpha_n = unit_ball_volume(p.n).map_err(|_| DiagnosticsError::NotEnoughData {
        needed: "valid dimension",
    })?;
    let orientation = p.sign.factor();
    let mut out = Vec::with_capacity(series.len() - 2);
    for w in series.windows(3) {
        let (prev, mid, next) = (&w[0], &w[1], &w[2]);
        let (fp, fm, fn_) = (
            prev.identity.as_ref().unwrap(),
            mid.identity.as_ref().unwrap(),
            next.identity.as_ref().unwrap(),
        );
        let ddt = centered_derivative(
            prev.t,
            fp.int_pow_p,
            mid.t,
            fm.int_pow_p,
            next.t,
            fn_.int_pow_p,
        );
        let lhs = ddt
            + 2.0 * c1 * fm.grad_power_sq
            + p_exp * p.b * fm.int_pow_p_alpha * mid.int_rho_beta;
        let interaction = fm.int_pow_p_plus_1 - mid.rho_bar * fm.int_pow_p;
        let rhs = p_exp * p.a * fm.int_pow_p_eta
            + orientation * p.n as f64 * (p_exp - 1.0) * alpha_n * interaction;
        out.push(IdentityResidual::new(mid.t, lhs, rhs));
    }
    Ok(out)
}

/// Agreement between a numerical verdict and the theoretical prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    /// Predicted bounded and observed bounded.
    Consistent,
    /// Nothing was guaranteed; any verdict is compatible.
    ConsistentNoGuarantee,
    /// Predicted bounded but observed blow-up: demands refinement before
    /// acceptance.
    CounterexampleCandidate,
    /// The run itself was inconclusive.
    InconclusiveRun,
}

impl Consistency {
    pub fn as_str(self) -> &'static str {
        match self {
            Consistency::Consistent => "consistent",
            Consistency::ConsistentNoGuarantee => "consistent-with-no-guarantee",
            Consistency::CounterexampleCandidate => "counterexample-candidate",
            Consistency::InconclusiveRun => "inconclusive-run",
        }
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One atlas record: the parameter point, the numerical verdict, the
/// hypothesis flags and margins, and the consistency join.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasRecord {
    pub params: ModelParams,
    pub mass: f64,
    pub verdict: Verdict,
    pub h1_holds: bool,
    pub h2_holds: bool,
    pub h1_margin: f64,
    pub h2_margin: f64,
    /// The simplified condition alpha < 1 + 2 beta / n, reported separately
    /// from the full threshold predicate (m = 1, eta = alpha only).
    pub remark_condition_holds: Option<bool>,
    pub consistency: Consistency,
    /// The point was re-run once at doubled resolution.
    pub refined: bool,
    pub t_final: f64,
    pub max_linf: f64,
    pub step_count: u64,
}

/// Join a numerical verdict with the theoretical prediction. Pure function:
/// identical inputs give identical records.
pub fn classify(
    outcome: &RunOutcome,
    report: &HypothesisReport,
) -> Result<Consistency, DiagnosticsError> {
    if outcome.params != report.params {
        return Err(DiagnosticsError::InputMismatch);
    }
    let predicted = report.predicted_bounded;
    Ok(match (predicted, outcome.verdict) {
        (true, Verdict::Bounded) => Consistency::Consistent,
        (true, Verdict::BlowUp) => Consistency::CounterexampleCandidate,
        (true, Verdict::Inconclusive) => Consistency::InconclusiveRun,
        (false, Verdict::Inconclusive) => Consistency::InconclusiveRun,
        (false, _) => Consistency::ConsistentNoGuarantee,
    })
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    M,
    Alpha,
    Beta,
    Eta,
    A,
    B,
    Mass,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::M => "m",
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::Eta => "eta",
            SweepParam::A => "a",
            SweepParam::B => "b",
            SweepParam::Mass => "mass",
        }
    }

    pub fn parse(s: &str) -> Option<SweepParam> {
        Some(match s {
            "m" => SweepParam::M,
            "alpha" => SweepParam::Alpha,
            "beta" => SweepParam::Beta,
            "eta" => SweepParam::Eta,
            "a" => SweepParam::A,
            "b" => SweepParam::B,
            "mass" => SweepParam::Mass,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Everything one sweep needs: the base model, the initial-data family, the
/// radial mesh, and the solver settings. Runs use the radial solver.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub initial: InitialData,
    pub mesh_r_max: f64,
    pub mesh_cells: usize,
    pub solver: SolverConfig,
    pub axes: Vec<SweepAxis>,
}

/// Grid of classified records, one per parameter point.
#[derive(Debug, Clone)]
pub struct SweepAtlas {
    pub axes: Vec<SweepAxis>,
    pub records: Vec<AtlasRecord>,
}

fn apply_axis(params: &mut ModelParams, initial: &mut InitialData, param: SweepParam, value: f64) {
    match param {
        SweepParam::M => params.m = value,
        SweepParam::Alpha => params.alpha = value,
        SweepParam::Beta => params.beta = value,
        SweepParam::Eta => params.eta = value,
        SweepParam::A => params.a = value,
        SweepParam::B => params.b = value,
        SweepParam::Mass => initial.mass = value,
    }
}

fn run_once(
    params: &ModelParams,
    initial: &InitialData,
    r_max: f64,
    cells: usize,
    solver: &SolverConfig,
) -> Option<RunOutcome> {
    let mesh = RadialMesh::new(params.n, r_max, cells).ok()?;
    let geom = Geometry::Radial(mesh);
    let rho0 = initial.build(&geom);
    run(rho0, params, solver).ok()
}

/// Evaluate one sweep point: run, classify, and retry once at doubled
/// resolution (half spacing, half step floors) if the record came out as a
/// counterexample candidate. Failures degrade to inconclusive records.
pub fn sweep_point(spec: &SweepSpec, point: &[(SweepParam, f64)]) -> AtlasRecord {
    let mut params = spec.base;
    let mut initial = spec.initial;
    for &(param, value) in point {
        apply_axis(&mut params, &mut initial, param, value);
    }
    let report = check_hypothesis(&params);

    let make_record = |outcome: Option<&RunOutcome>, consistency, refined| AtlasRecord {
        params,
        mass: initial.mass,
        verdict: outcome.map_or(Verdict::Inconclusive, |o| o.verdict),
        h1_holds: report.h1_holds,
        h2_holds: report.h2_holds,
        h1_margin: report.h1_margin,
        h2_margin: report.h2_margin,
        remark_condition_holds: report.remark_condition_holds,
        consistency,
        refined,
        t_final: outcome.map_or(0.0, |o| o.t_final),
        max_linf: outcome.map_or(0.0, |o| o.max_linf),
        step_count: outcome.map_or(0, |o| o.step_count),
    };

    if params.validate().is_err() {
        return make_record(None, Consistency::InconclusiveRun, false);
    }
    let Some(outcome) = run_once(&params, &initial, spec.mesh_r_max, spec.mesh_cells, &spec.solver)
    else {
        return make_record(None, Consistency::InconclusiveRun, false);
    };
    let consistency = classify(&outcome, &report).expect("same params by construction");
    if consistency != Consistency::CounterexampleCandidate {
        return make_record(Some(&outcome), consistency, false);
    }
    // one refinement retry: half spacing, half step floors
    let mut refined_solver = spec.solver.clone();
    refined_solver.dt_init = spec.solver.dt_init / 2.0;
    refined_solver.dt_min = spec.solver.dt_min / 2.0;
    let Some(outcome) = run_once(
        &params,
        &initial,
        spec.mesh_r_max,
        spec.mesh_cells * 2,
        &refined_solver,
    ) else {
        return make_record(None, Consistency::InconclusiveRun, true);
    };
    let consistency = classify(&outcome, &report).expect("same params by construction");
    make_record(Some(&outcome), consistency, true)
}

/// Run the whole grid (1 or 2 axes) sequentially and assemble the atlas;
/// deterministic given the spec. Per-point failures never abort the sweep.
pub fn sweep(spec: &SweepSpec) -> SweepAtlas {
    let mut records = Vec::new();
    match spec.axes.len() {
        1 => {
            for &v in &spec.axes[0].values {
                records.push(sweep_point(spec, &[(spec.axes[0].param, v)]));
            }
        }
        2 => {
            for &v0 in &spec.axes[0].values {
                for &v1 in &spec.axes[1].values {
                    records.push(sweep_point(
                        spec,
                        &[(spec.axes[0].param, v0), (spec.axes[1].param, v1)],
                    ));
                }
            }
        }
        _ => {}
    }
    SweepAtlas {
        axes: spec.axes.clone(),
        records,
    }
}

/// Enumerate the grid points of a sweep in the same order `sweep` visits
/// them; lets callers parallelize point evaluation externally.
pub fn sweep_points(spec: &SweepSpec) -> Vec<Vec<(SweepParam, f64)>> {
    let mut points = Vec::new();
    match spec.axes.len() {
        1 => {
            for &v in &spec.axes[0].values {
                points.push(alloc::vec![(spec.axes[0].param, v)]);
            }
        }
        2 => {
            for &v0 in &spec.axes[0].values {
                for &v1 in &spec.axes[1].values {
                    points.push(alloc::vec![
                        (spec.axes[0].param, v0),
                        (spec.axes[1].param, v1)
                    ]);
                }
            }
        }
        _ => {}
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Scheme;
    use crate::geometry::Family;
    use crate::params::Sign;
    use alloc::vec;

    fn params(sign: Sign) -> ModelParams {
        ModelParams {
            n: 3,
            m: 1.0,
            a: 1.0,
            b: 1.0,
            alpha: 2.0,
            beta: 2.0,
            eta: 1.0,
            sign,
        }
    }

    fn solver() -> SolverConfig {
        SolverConfig {
            t_end: 1.0,
            dt_init: 1e-3,
            dt_min: 1e-12,
            cfl_safety: 0.9,
            eps: 1e-8,
            blowup_linf_threshold: 1e6,
            scheme: Scheme::ExplicitRadial,
            cadence: 0.05,
            p_list: vec![2.0],
            identity_p: None,
        }
    }

    #[test]
    fn lp_norm_uniform_zero_and_sentinel() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let volume = geom.domain_volume();
        let c = 0.7;
        let uniform = Field::new(geom.clone(), vec![c; 32]).unwrap();
        for &p in &[1.0, 2.0, 3.5] {
            let expected = math::powf(math::powf(c, p) * volume, 1.0 / p);
            assert!((lp_norm(&uniform, p).unwrap() - expected).abs() < 1e-12);
        }
        assert_eq!(lp_norm(&uniform, f64::INFINITY).unwrap(), c);
        let zero = Field::zeros(geom);
        for &p in &[1.0, 2.0, f64::INFINITY] {
            assert_eq!(lp_norm(&zero, p).unwrap(), 0.0);
        }
        assert!(matches!(
            lp_norm(&uniform, 0.5),
            Err(DiagnosticsError::InvalidExponent { .. })
        ));
    }

    #[test]
    fn lp_norm_monotone_under_domination() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let mut rng = crate::rng::SplitMix64::new(5);
        let lo: Vec<f64> = (0..32).map(|_| rng.range(0.0, 1.0)).collect();
        let hi: Vec<f64> = lo.iter().map(|&v| v + rng.range(0.0, 1.0)).collect();
        let f_lo = Field::new(geom.clone(), lo).unwrap();
        let f_hi = Field::new(geom, hi).unwrap();
        for &p in &[1.0, 2.0, 4.0, f64::INFINITY] {
            assert!(lp_norm(&f_lo, p).unwrap() <= lp_norm(&f_hi, p).unwrap());
        }
    }

    #[test]
    fn nested_norm_inequality() {
        // ||rho||_inf >= ||rho||_p / V^(1/p) on the finite domain
        let mesh = RadialMesh::new(3, 2.0, 64).unwrap();
        let geom = Geometry::Radial(mesh);
        let volume = geom.domain_volume();
        let mut rng = crate::rng::SplitMix64::new(17);
        for _ in 0..20 {
            let values: Vec<f64> = (0..64).map(|_| rng.range(0.0, 3.0)).collect();
            let f = Field::new(geom.clone(), values).unwrap();
            for &p in &[1.0, 2.0, 5.0] {
                let lp = lp_norm(&f, p).unwrap();
                assert!(f.linf() >= lp / math::powf(volume, 1.0 / p) - 1e-12);
            }
        }
    }

    #[test]
    fn mass_balance_needs_three_samples() {
        let p = params(Sign::Attractive);
        assert!(matches!(
            mass_balance_residual(&[], &p),
            Err(DiagnosticsError::NotEnoughData { .. })
        ));
    }

    #[test]
    fn mass_balance_on_uniform_run() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let p = params(Sign::Attractive);
        let mut cfg = solver();
        cfg.t_end = 2.0;
        cfg.cadence = 0.005;
        let uniform = Field::new(geom, vec![0.5; 32]).unwrap();
        let out = run(uniform, &p, &cfg).unwrap();
        let residuals = mass_balance_residual(&out.norm_series, &p).unwrap();
        assert!(!residuals.is_empty());
        for r in &residuals {
            assert!(r.rel_residual <= 0.01, "t = {}: {}", r.t, r.rel_residual);
        }
    }

    #[test]
    fn lp_identity_zero_trajectory() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let p = params(Sign::Attractive);
        let mut cfg = solver();
        cfg.identity_p = Some(2.0);
        let out = run(Field::zeros(geom), &p, &cfg).unwrap();
        let residuals = lp_identity_residual(&out.norm_series, &p, 2.0).unwrap();
        for r in &residuals {
            assert_eq!(r.lhs, 0.0);
            assert_eq!(r.rhs, 0.0);
            assert_eq!(r.rel_residual, 0.0);
        }
    }

    #[test]
    fn lp_identity_requires_functionals() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let p = params(Sign::Attractive);
        let cfg = solver(); // identity_p = None
        let out = run(Field::zeros(geom), &p, &cfg).unwrap();
        assert!(matches!(
            lp_identity_residual(&out.norm_series, &p, 2.0),
            Err(DiagnosticsError::NotEnoughData { .. })
        ));
    }

    #[test]
    fn lp_identity_uniform_run_reduces_to_balance() {
        let mesh = RadialMesh::new(3, 2.0, 64).unwrap();
        let geom = Geometry::Radial(mesh);
        let p = params(Sign::Attractive);
        let mut cfg = solver();
        cfg.t_end = 1.5;
        cfg.cadence = 0.005;
        cfg.identity_p = Some(2.0);
        let uniform = Field::new(geom, vec![0.35; 64]).unwrap();
        let out = run(uniform, &p, &cfg).unwrap();
        let residuals = lp_identity_residual(&out.norm_series, &p, 2.0).unwrap();
        // gradient term vanishes; centered differences limited by cadence
        for r in &residuals {
            assert!(r.rel_residual <= 0.01, "t = {}: {}", r.t, r.rel_residual);
        }
    }

    #[test]
    fn classify_matrix() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let p_holding = params(Sign::Attractive); // alpha+beta = 4 > 3.5
        let cfg = solver();
        let out = run(Field::zeros(geom), &p_holding, &cfg).unwrap();
        let report = check_hypothesis(&p_holding);
        assert_eq!(classify(&out, &report).unwrap(), Consistency::Consistent);

        // pretend verdicts for the synthetic branches
        let mut blowup = out.clone();
        blowup.verdict = Verdict::BlowUp;
        assert_eq!(
            classify(&blowup, &report).unwrap(),
            Consistency::CounterexampleCandidate
        );

        let p_failing = ModelParams {
            alpha: 1.0,
            beta: 1.0,
            ..p_holding
        };
        let report_failing = check_hypothesis(&p_failing);
        let mut failing_out = out.clone();
        failing_out.params = p_failing;
        failing_out.verdict = Verdict::BlowUp;
        assert_eq!(
            classify(&failing_out, &report_failing).unwrap(),
            Consistency::ConsistentNoGuarantee
        );

        // mismatched inputs
        assert!(matches!(
            classify(&failing_out, &report),
            Err(DiagnosticsError::InputMismatch)
        ));
    }

    #[test]
    fn classify_is_pure() {
        let mesh = RadialMesh::new(3, 2.0, 32).unwrap();
        let geom = Geometry::Radial(mesh);
        let p = params(Sign::Attractive);
        let cfg = solver();
        let out = run(Field::zeros(geom), &p, &cfg).unwrap();
        let report = check_hypothesis(&p);
        assert_eq!(
            classify(&out, &report).unwrap(),
            classify(&out, &report).unwrap()
        );
    }

    #[test]
    fn single_point_sweep_equals_run_plus_check() {
        // uniform data above the ODE fixed point relaxes monotonically down
        let mut cfg = solver();
        cfg.t_end = 2.0;
        let spec = SweepSpec {
            base: params(Sign::Attractive),
            initial: InitialData {
                family: Family::UniformBall,
                mass: 15.0,
                width: 2.0,
                center: [0.0; 3],
            },
            mesh_r_max: 2.0,
            mesh_cells: 32,
            solver: cfg,
            axes: vec![SweepAxis {
                param: SweepParam::Alpha,
                values: vec![2.0],
            }],
        };
        let atlas = sweep(&spec);
        assert_eq!(atlas.records.len(), 1);
        let record = &atlas.records[0];
        assert!(record.h1_holds);
        assert_eq!(record.consistency, Consistency::Consistent);
        assert_eq!(record.verdict, Verdict::Bounded);
    }

    #[test]
    fn two_axis_sweep_cardinality_and_subset_property() {
        let mut cfg = solver();
        cfg.t_end = 0.2;
        let spec = SweepSpec {
            base: params(Sign::Attractive),
            initial: InitialData {
                family: Family::UniformBall,
                mass: 1.0,
                width: 2.0,
                center: [0.0; 3],
            },
            mesh_r_max: 2.0,
            mesh_cells: 32,
            solver: cfg,
            axes: vec![
                SweepAxis {
                    param: SweepParam::Alpha,
                    values: vec![0.5, 1.5, 3.0],
                },
                SweepAxis {
                    param: SweepParam::Beta,
                    values: vec![1.0, 2.5],
                },
            ],
        };
        let atlas = sweep(&spec);
        assert_eq!(atlas.records.len(), 6);
        for record in &atlas.records {
            // h1 implies h2 (the max-set is a superset)
            if record.h1_holds {
                assert!(record.h2_holds);
            }
            assert!(record.h2_margin >= record.h1_margin);
        }
    }

    #[test]
    fn invalid_point_degrades_to_inconclusive() {
        let spec = SweepSpec {
            base: params(Sign::Attractive),
            initial: InitialData {
                family: Family::UniformBall,
                mass: 1.0,
                width: 2.0,
                center: [0.0; 3],
            },
            mesh_r_max: 2.0,
            mesh_cells: 32,
            solver: solver(),
            axes: vec![SweepAxis {
                param: SweepParam::Beta,
                values: vec![0.5], // beta < 1 violates the type invariant
            }],
        };
        let atlas = sweep(&spec);
        assert_eq!(atlas.records.len(), 1);
        assert_eq!(atlas.records[0].verdict, Verdict::Inconclusive);
    }
}
