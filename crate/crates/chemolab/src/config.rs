//! Experiment configuration: INI-style key-value text with dotted section
//! names, chosen for human-diffable sweep configs. Parsing is strict —
//! unknown sections or keys are errors so typos surface as exit code 2.

use std::fmt;

use chemolab_core::diagnostics::{SweepAxis, SweepParam};
use chemolab_core::dynamics::{Scheme, SolverConfig};
use chemolab_core::geometry::{BoxGrid, Family, Geometry, InitialData, RadialMesh};
use chemolab_core::params::{ModelParams, Sign};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config line {}: {}", self.line, self.message)
        } else {
            write!(f, "config: {}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryConfig {
    Radial { r_max: f64, cells: usize },
    Box { extent: f64, points_per_axis: usize },
}

impl GeometryConfig {
    pub fn build(&self, n: u32) -> Result<Geometry, ConfigError> {
        match *self {
            GeometryConfig::Radial { r_max, cells } => RadialMesh::new(n, r_max, cells)
                .map(Geometry::Radial)
                .map_err(|e| err(0, e.to_string())),
            GeometryConfig::Box {
                extent,
                points_per_axis,
            } => {
                if n != 3 {
                    return Err(err(0, format!("UnsupportedBoxDimension: box grid supports n = 3, got n = {n}")));
                }
                BoxGrid::new(extent, points_per_axis)
                    .map(Geometry::Box)
                    .map_err(|e| err(0, e.to_string()))
            }
        }
    }

    pub fn default_scheme(&self) -> Scheme {
        match self {
            GeometryConfig::Radial { .. } => Scheme::ExplicitRadial,
            GeometryConfig::Box { .. } => Scheme::SemiImplicitBox,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub t_end: f64,
    pub dt_init: f64,
    pub dt_min: f64,
    pub cfl_safety: f64,
    pub eps: f64,
    /// None: resolved to 1e6 x the initial max-norm at run time.
    pub blowup_linf_threshold: Option<f64>,
    pub scheme: Scheme,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            t_end: 1.0,
            dt_init: 1e-3,
            dt_min: 1e-12,
            cfl_safety: 0.9,
            eps: 1e-8,
            blowup_linf_threshold: None,
            scheme: Scheme::ExplicitRadial,
        }
    }
}

impl SolverSettings {
    /// Resolve into the solver configuration for a concrete initial state.
    pub fn resolve(&self, initial_linf: f64, outputs: &OutputSettings) -> SolverConfig {
        SolverConfig {
            t_end: self.t_end,
            dt_init: self.dt_init,
            dt_min: self.dt_min,
            cfl_safety: self.cfl_safety,
            eps: self.eps,
            blowup_linf_threshold: self
                .blowup_linf_threshold
                .unwrap_or(1e6 * initial_linf.max(1e-300)),
            scheme: self.scheme,
            cadence: outputs.cadence,
            p_list: outputs.p_list.clone(),
            identity_p: outputs.identity_p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    pub directory: String,
    pub cadence: f64,
    pub p_list: Vec<f64>,
    pub identity_p: Option<f64>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings {
            directory: "out".into(),
            cadence: 0.01,
            p_list: vec![1.0, 2.0],
            identity_p: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub parallelism: usize,
    pub axes: Vec<SweepAxis>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub model: ModelParams,
    pub geometry: GeometryConfig,
    pub initial: InitialData,
    pub solver: SolverSettings,
    pub outputs: OutputSettings,
    pub sweep: Option<SweepSettings>,
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, format!("{key}: cannot parse `{value}` as a number")))
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse::<usize>()
        .map_err(|_| err(line, format!("{key}: cannot parse `{value}` as an integer")))
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|s| parse_f64(line, key, s.trim()))
        .collect()
}

#[derive(Default)]
struct ModelDraft {
    n: Option<u32>,
    m: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    eta: Option<f64>,
    sign: Option<Sign>,
}

#[derive(Default)]
struct AxisDraft {
    param: Option<SweepParam>,
    values: Option<Vec<f64>>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
}

impl AxisDraft {
    fn finish(self, which: &str) -> Result<SweepAxis, ConfigError> {
        let param = self
            .param
            .ok_or_else(|| err(0, format!("[sweep.{which}] is missing `param`")))?;
        let values = if let Some(values) = self.values {
            values
        } else {
            let (min, max, count) = match (self.min, self.max, self.count) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => {
                    return Err(err(
                        0,
                        format!("[sweep.{which}] needs either `values` or `min`+`max`+`count`"),
                    ))
                }
            };
            if count < 1 {
                return Err(err(0, format!("[sweep.{which}] count must be >= 1")));
            }
            if count == 1 {
                vec![min]
            } else {
                (0..count)
                    .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
                    .collect()
            }
        };
        Ok(SweepAxis { param, values })
    }
}

/// Parse the INI text into a config. Sections: [model], [geometry.radial] or
/// [geometry.box], [initial_data], [solver], [outputs], optional [sweep],
/// [sweep.axis1], [sweep.axis2]; `seed` may appear before any section.
pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut seed: u64 = 0;
    let mut model = ModelDraft::default();
    let mut geometry: Option<GeometryConfig> = None;
    let mut family: Option<Family> = None;
    let mut mass: Option<f64> = None;
    let mut width: Option<f64> = None;
    let mut center = [0.0f64; 3];
    let mut solver = SolverSettings::default();
    let mut scheme_given = false;
    let mut outputs = OutputSettings::default();
    let mut sweep_seen = false;
    let mut parallelism: usize = 1;
    let mut axis1 = AxisDraft::default();
    let mut axis2 = AxisDraft::default();
    let mut axis2_seen = false;

    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find(['#', ';']) {
            Some(cut) => &raw[..cut],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "unterminated section header"))?
                .trim();
            section = name.to_string();
            match section.as_str() {
                "model" | "initial_data" | "solver" | "outputs" => {}
                "geometry.radial" => {
                    geometry = Some(GeometryConfig::Radial {
                        r_max: 0.0,
                        cells: 0,
                    })
                }
                "geometry.box" => {
                    geometry = Some(GeometryConfig::Box {
                        extent: 0.0,
                        points_per_axis: 0,
                    })
                }
                "sweep" => sweep_seen = true,
                "sweep.axis1" => sweep_seen = true,
                "sweep.axis2" => {
                    sweep_seen = true;
                    axis2_seen = true;
                }
                other => return Err(err(line_no, format!("unknown section [{other}]"))),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        match (section.as_str(), key) {
            ("", "seed") => {
                seed = value
                    .parse::<u64>()
                    .map_err(|_| err(line_no, format!("seed: cannot parse `{value}`")))?
            }
            ("model", "n") => {
                model.n = Some(
                    value
                        .parse::<u32>()
                        .map_err(|_| err(line_no, format!("n: cannot parse `{value}`")))?,
                )
            }
            ("model", "m") => model.m = Some(parse_f64(line_no, key, value)?),
            ("model", "a") => model.a = Some(parse_f64(line_no, key, value)?),
            ("model", "b") => model.b = Some(parse_f64(line_no, key, value)?),
            ("model", "alpha") => model.alpha = Some(parse_f64(line_no, key, value)?),
            ("model", "beta") => model.beta = Some(parse_f64(line_no, key, value)?),
            ("model", "eta") => model.eta = Some(parse_f64(line_no, key, value)?),
            ("model", "sign") => {
                model.sign = Some(match value {
                    "attractive" => Sign::Attractive,
                    "repulsive" => Sign::Repulsive,
                    other => {
                        return Err(err(
                            line_no,
                            format!("sign: expected attractive|repulsive, got `{other}`"),
                        ))
                    }
                })
            }
            ("geometry.radial", "r_max") => {
                if let Some(GeometryConfig::Radial { ref mut r_max, .. }) = geometry {
                    *r_max = parse_f64(line_no, key, value)?;
                }
            }
            ("geometry.radial", "cells") => {
                if let Some(GeometryConfig::Radial { ref mut cells, .. }) = geometry {
                    *cells = parse_usize(line_no, key, value)?;
                }
            }
            ("geometry.box", "extent") => {
                if let Some(GeometryConfig::Box { ref mut extent, .. }) = geometry {
                    *extent = parse_f64(line_no, key, value)?;
                }
            }
            ("geometry.box", "points_per_axis") => {
                if let Some(GeometryConfig::Box {
                    ref mut points_per_axis,
                    ..
                }) = geometry
                {
                    *points_per_axis = parse_usize(line_no, key, value)?;
                }
            }
            ("initial_data", "family") => {
                family = Some(match value {
                    "gaussian" => Family::Gaussian,
                    "uniform_ball" => Family::UniformBall,
                    other => {
                        return Err(err(
                            line_no,
                            format!("family: expected gaussian|uniform_ball, got `{other}`"),
                        ))
                    }
                })
            }
            ("initial_data", "mass") => mass = Some(parse_f64(line_no, key, value)?),
            ("initial_data", "width") => width = Some(parse_f64(line_no, key, value)?),
            ("initial_data", "center") => {
                let coords = parse_list(line_no, key, value)?;
                if coords.len() != 3 {
                    return Err(err(line_no, "center: expected three comma-separated values"));
                }
                center = [coords[0], coords[1], coords[2]];
            }
            ("solver", "t_end") => solver.t_end = parse_f64(line_no, key, value)?,
            ("solver", "dt_init") => solver.dt_init = parse_f64(line_no, key, value)?,
            ("solver", "dt_min") => solver.dt_min = parse_f64(line_no, key, value)?,
            ("solver", "cfl_safety") => solver.cfl_safety = parse_f64(line_no, key, value)?,
            ("solver", "eps") => solver.eps = parse_f64(line_no, key, value)?,
            ("solver", "blowup_linf_threshold") => {
                solver.blowup_linf_threshold = Some(parse_f64(line_no, key, value)?)
            }
            ("solver", "scheme") => {
                scheme_given = true;
                solver.scheme = match value {
                    "explicit_radial" => Scheme::ExplicitRadial,
                    "semi_implicit_box" => Scheme::SemiImplicitBox,
                    other => {
                        return Err(err(
                            line_no,
                            format!(
                                "scheme: expected explicit_radial|semi_implicit_box, got `{other}`"
                            ),
                        ))
                    }
                }
            }
            ("outputs", "directory") => outputs.directory = value.to_string(),
            ("outputs", "cadence") => outputs.cadence = parse_f64(line_no, key, value)?,
            ("outputs", "p_list") => outputs.p_list = parse_list(line_no, key, value)?,
            ("outputs", "identity_p") => outputs.identity_p = Some(parse_f64(line_no, key, value)?),
            ("sweep", "parallelism") => parallelism = parse_usize(line_no, key, value)?,
            ("sweep.axis1", _) | ("sweep.axis2", _) => {
                let axis = if section == "sweep.axis1" {
                    &mut axis1
                } else {
                    &mut axis2
                };
                match key {
                    "param" => {
                        axis.param = Some(SweepParam::parse(value).ok_or_else(|| {
                            err(
                                line_no,
                                format!("param: expected one of m|alpha|beta|eta|a|b|mass, got `{value}`"),
                            )
                        })?)
                    }
                    "values" => axis.values = Some(parse_list(line_no, key, value)?),
                    "min" => axis.min = Some(parse_f64(line_no, key, value)?),
                    "max" => axis.max = Some(parse_f64(line_no, key, value)?),
                    "count" => axis.count = Some(parse_usize(line_no, key, value)?),
                    other => return Err(err(line_no, format!("unknown key `{other}` in [{section}]"))),
                }
            }
            (sec, other) => {
                return Err(err(
                    line_no,
                    format!("unknown key `{other}` in section [{sec}]"),
                ))
            }
        }
    }

    let require = |line: usize, what: &str, ok: bool| -> Result<(), ConfigError> {
        if ok {
            Ok(())
        } else {
            Err(err(line, format!("missing required key {what}")))
        }
    };
    require(0, "[model] n", model.n.is_some())?;
    require(0, "[model] m", model.m.is_some())?;
    require(0, "[model] alpha", model.alpha.is_some())?;
    require(0, "[model] beta", model.beta.is_some())?;
    require(0, "[model] eta", model.eta.is_some())?;
    let params = ModelParams::new(
        model.n.unwrap(),
        model.m.unwrap(),
        model.a.unwrap_or(1.0),
        model.b.unwrap_or(1.0),
        model.alpha.unwrap(),
        model.beta.unwrap(),
        model.eta.unwrap(),
        model.sign.unwrap_or(Sign::Attractive),
    )
    .map_err(|e| err(0, e.to_string()))?;

    let geometry = geometry.ok_or_else(|| err(0, "missing [geometry.radial] or [geometry.box]"))?;
    if !scheme_given {
        solver.scheme = geometry.default_scheme();
    }
    let initial = InitialData {
        family: family.ok_or_else(|| err(0, "missing [initial_data] family"))?,
        mass: mass.ok_or_else(|| err(0, "missing [initial_data] mass"))?,
        width: width.ok_or_else(|| err(0, "missing [initial_data] width"))?,
        center,
    };

    let sweep = if sweep_seen {
        let mut axes = vec![axis1.finish("axis1")?];
        if axis2_seen {
            axes.push(axis2.finish("axis2")?);
        }
        Some(SweepSettings { parallelism, axes })
    } else {
        None
    };

    Ok(ExperimentConfig {
        seed,
        model: params,
        geometry,
        initial,
        solver,
        outputs,
        sweep,
    })
}

/// Canonical serializer; floats use the shortest representation that parses
/// back to the same f64, so parse(serialize(parse(x))) == parse(x).
pub fn serialize(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("seed = {}", cfg.seed));
    push(&mut out, "".into());
    push(&mut out, "[model]".into());
    push(&mut out, format!("n = {}", cfg.model.n));
    push(&mut out, format!("m = {}", cfg.model.m));
    push(&mut out, format!("a = {}", cfg.model.a));
    push(&mut out, format!("b = {}", cfg.model.b));
    push(&mut out, format!("alpha = {}", cfg.model.alpha));
    push(&mut out, format!("beta = {}", cfg.model.beta));
    push(&mut out, format!("eta = {}", cfg.model.eta));
    push(&mut out, format!("sign = {}", cfg.model.sign.as_str()));
    push(&mut out, "".into());
    match cfg.geometry {
        GeometryConfig::Radial { r_max, cells } => {
            push(&mut out, "[geometry.radial]".into());
            push(&mut out, format!("r_max = {r_max}"));
            push(&mut out, format!("cells = {cells}"));
        }
        GeometryConfig::Box {
            extent,
            points_per_axis,
        } => {
            push(&mut out, "[geometry.box]".into());
            push(&mut out, format!("extent = {extent}"));
            push(&mut out, format!("points_per_axis = {points_per_axis}"));
        }
    }
    push(&mut out, "".into());
    push(&mut out, "[initial_data]".into());
    push(&mut out, format!("family = {}", cfg.initial.family.as_str()));
    push(&mut out, format!("mass = {}", cfg.initial.mass));
    push(&mut out, format!("width = {}", cfg.initial.width));
    push(
        &mut out,
        format!(
            "center = {},{},{}",
            cfg.initial.center[0], cfg.initial.center[1], cfg.initial.center[2]
        ),
    );
    push(&mut out, "".into());
    push(&mut out, "[solver]".into());
    push(&mut out, format!("t_end = {}", cfg.solver.t_end));
    push(&mut out, format!("dt_init = {}", cfg.solver.dt_init));
    push(&mut out, format!("dt_min = {}", cfg.solver.dt_min));
    push(&mut out, format!("cfl_safety = {}", cfg.solver.cfl_safety));
    push(&mut out, format!("eps = {}", cfg.solver.eps));
    if let Some(threshold) = cfg.solver.blowup_linf_threshold {
        push(&mut out, format!("blowup_linf_threshold = {threshold}"));
    }
    push(&mut out, format!("scheme = {}", cfg.solver.scheme.as_str()));
    push(&mut out, "".into());
    push(&mut out, "[outputs]".into());
    push(&mut out, format!("directory = {}", cfg.outputs.directory));
    push(&mut out, format!("cadence = {}", cfg.outputs.cadence));
    let p_list: Vec<String> = cfg.outputs.p_list.iter().map(|p| p.to_string()).collect();
    push(&mut out, format!("p_list = {}", p_list.join(",")));
    if let Some(p) = cfg.outputs.identity_p {
        push(&mut out, format!("identity_p = {p}"));
    }
    if let Some(sweep) = &cfg.sweep {
        push(&mut out, "".into());
        push(&mut out, "[sweep]".into());
        push(&mut out, format!("parallelism = {}", sweep.parallelism));
        for (i, axis) in sweep.axes.iter().enumerate() {
            push(&mut out, format!("[sweep.axis{}]", i + 1));
            push(&mut out, format!("param = {}", axis.param.as_str()));
            let values: Vec<String> = axis.values.iter().map(|v| v.to_string()).collect();
            push(&mut out, format!("values = {}", values.join(",")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(super) const SAMPLE: &str = r#"
seed = 7

[model]
n = 3
m = 1.0
a = 1.0
b = 1.0
alpha = 2.0
beta = 2.0
eta = 1.0
sign = attractive

[geometry.radial]
r_max = 4.0
cells = 128

[initial_data]
family = gaussian
mass = 1.5
width = 0.5
center = 0,0,0

[solver]
t_end = 0.5
dt_init = 1e-3
dt_min = 1e-12
cfl_safety = 0.9
eps = 1e-8
scheme = explicit_radial

[outputs]
directory = out/test
cadence = 0.01
p_list = 1,2,3
identity_p = 2
"#;

    #[test]
    fn parses_sample() {
        let cfg = parse(SAMPLE).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.model.n, 3);
        assert_eq!(cfg.model.sign, Sign::Attractive);
        assert_eq!(
            cfg.geometry,
            GeometryConfig::Radial {
                r_max: 4.0,
                cells: 128
            }
        );
        assert_eq!(cfg.initial.family, Family::Gaussian);
        assert_eq!(cfg.outputs.p_list, vec![1.0, 2.0, 3.0]);
        assert_eq!(cfg.outputs.identity_p, Some(2.0));
        assert!(cfg.sweep.is_none());
    }

    #[test]
    fn round_trip_is_identity() {
        let cfg = parse(SAMPLE).unwrap();
        let text = serialize(&cfg);
        let cfg2 = parse(&text).unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn sweep_axes_parse_and_expand() {
        let text = format!(
            "{SAMPLE}\n[sweep]\nparallelism = 4\n[sweep.axis1]\nparam = alpha\nmin = 1\nmax = 3\ncount = 5\n[sweep.axis2]\nparam = beta\nvalues = 1,2,3\n"
        );
        let cfg = parse(&text).unwrap();
        let sweep = cfg.sweep.as_ref().unwrap();
        assert_eq!(sweep.parallelism, 4);
        assert_eq!(sweep.axes.len(), 2);
        assert_eq!(sweep.axes[0].values, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(sweep.axes[1].values, vec![1.0, 2.0, 3.0]);
        // expanded form round-trips as values
        let cfg2 = parse(&serialize(&cfg)).unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let bad = SAMPLE.replace("cells = 128", "cell_count = 128");
        assert!(parse(&bad).is_err());
        let bad = SAMPLE.replace("n = 3", "n = 2");
        let e = parse(&bad).unwrap_err();
        assert!(e.to_string().contains("DimensionTooLow"), "{e}");
        let bad = SAMPLE.replace("beta = 2.0", "beta = 0.5");
        let e = parse(&bad).unwrap_err();
        assert!(e.to_string().contains("BetaBelowOne"), "{e}");
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = format!("# leading comment\n{SAMPLE}\n; trailing comment\n");
        assert!(parse(&text).is_ok());
    }
}
