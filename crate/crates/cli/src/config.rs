//! Run configurations: the JSON schema, builtin bodies and groups, and
//! per-command defaults.

use std::path::{Path, PathBuf};

use hilbert_kit::body::json::BodySpec;
use hilbert_kit::dynamics::groups::{build_simplex_diagonal_group, build_triangle_reflection_group, GroupSpec};
use hilbert_kit::dynamics::probes::default_radius_grid;
use hilbert_kit::dynamics::{invariance_defect, GroupExample};
use hilbert_kit::facts::BallRatio;
use hilbert_kit::omega_f::{GrainConfig, StepFunction, StepFunctionSpec};
use hilbert_kit::ConvexBody;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "hilbert-kit/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Distance,
    Face,
    Ball,
    Shadow,
    Limitset,
    Coverage,
    VerifyFacts,
    GrainProbe,
    OmegafBuild,
    ShadowLemma,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Distance => "distance",
            Command::Face => "face",
            Command::Ball => "ball",
            Command::Shadow => "shadow",
            Command::Limitset => "limitset",
            Command::Coverage => "coverage",
            Command::VerifyFacts => "verify-facts",
            Command::GrainProbe => "grain-probe",
            Command::OmegafBuild => "omegaf-build",
            Command::ShadowLemma => "shadow-lemma",
        }
    }
}

/// Where a body comes from: a builtin name, a JSON file, or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodySource {
    Builtin(String),
    File {
        file: PathBuf,
    },
    Inline(BodySpec),
}

/// Where a group comes from. Files and inline specs also need `body`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    /// `"simplex-diagonal"` or `"triangle-334"`.
    Builtin(String),
    /// Triangle reflection group; orders of 0 stand for ∞.
    Triangle {
        triangle: [u32; 3],
        t: f64,
    },
    File {
        file: PathBuf,
    },
    Inline(GroupSpec),
}

pub const BUILTIN_BODIES: &[&str] = &["unit-disk", "square", "triangle", "unit-ball-3", "cube"];
pub const BUILTIN_GROUPS: &[&str] = &["simplex-diagonal", "triangle-334", "triangle-334-deformed"];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_function: Option<StepFunctionSpec>,
    /// First point, light source, or anchor (chart coordinates).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    /// Second point or ball centre (chart coordinates).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_radius: Option<f64>,
    /// Maximal word length `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<usize>>,
    /// Radius grid of the shadow lemma probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configurations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariance_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<BallRatio>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grain: Option<GrainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            schema: SCHEMA.into(),
            command: Some(command),
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        if cfg.schema != SCHEMA {
            return Err(config_err(format!("schema must be {SCHEMA:?}, got {:?}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn command(&self) -> Result<Command, CliError> {
        self.command.ok_or_else(|| config_err("no command given"))
    }

    /// Fills in every default the command uses and validates the result,
    /// so that the returned config describes the run completely.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let command = self.command()?;
        if self.schema != SCHEMA {
            return Err(config_err(format!("schema must be {SCHEMA:?}")));
        }
        let need = |field: &str, present: bool| {
            if present {
                Ok(())
            } else {
                Err(config_err(format!("{} needs `{field}`", command.name())))
            }
        };
        match command {
            Command::Distance => {
                self.body.get_or_insert_with(|| BodySource::Builtin("unit-disk".into()));
                need("x", self.x.is_some())?;
                need("y", self.y.is_some())?;
            }
            Command::Face => {
                self.body.get_or_insert_with(|| BodySource::Builtin("square".into()));
                need("x", self.x.is_some())?;
            }
            Command::Ball => {
                self.body.get_or_insert_with(|| BodySource::Builtin("unit-disk".into()));
                need("x", self.x.is_some())?;
                need("radius", self.radius.is_some())?;
                self.samples.get_or_insert(256);
            }
            Command::Shadow => {
                self.body.get_or_insert_with(|| BodySource::Builtin("unit-disk".into()));
                need("x", self.x.is_some())?;
                need("y", self.y.is_some())?;
                need("radius", self.radius.is_some())?;
                self.samples.get_or_insert(720);
            }
            Command::Limitset => {
                need("group", self.group.is_some())?;
                self.length.get_or_insert(8);
            }
            Command::Coverage => {
                need("group", self.group.is_some())?;
                self.lengths.get_or_insert_with(|| (2..=10).collect());
                self.samples.get_or_insert(720);
            }
            Command::VerifyFacts => {
                self.configurations.get_or_insert(1000);
                self.samples.get_or_insert(64);
                self.ratio.get_or_insert(BallRatio::Stated);
                self.tol.get_or_insert(1e-6);
            }
            Command::GrainProbe => {
                self.step_function
                    .get_or_insert_with(|| StepFunction::constant(1.0).expect("valid constant").to_spec());
                self.grain.get_or_insert_with(|| GrainConfig {
                    theta: 0.0,
                    z: 0.0,
                    r: 0.3,
                    big_r: 1.0,
                    halfwidth: 0.1,
                    delta: 1e-3,
                    samples: 16,
                    u_grid: 41,
                });
            }
            Command::OmegafBuild => {
                need("step_function", self.step_function.is_some())?;
                self.grid_n.get_or_insert(720);
            }
            Command::ShadowLemma => {
                self.group.get_or_insert_with(|| GroupSource::Builtin("triangle-334".into()));
                self.length.get_or_insert(8);
                self.radii.get_or_insert_with(default_radius_grid);
                self.trials.get_or_insert(100);
            }
        }
        for (name, v) in [("tol", self.tol), ("invariance_tol", self.invariance_tol)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(config_err(format!("{name} must be positive, got {v}")));
                }
            }
        }
        for (name, v) in [("radius", self.radius), ("big_radius", self.big_radius)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(config_err(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let Some(radii) = &self.radii {
            if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                return Err(config_err("radii must be a non-empty list of positive numbers"));
            }
        }
        if matches!(self.samples, Some(0)) || matches!(self.trials, Some(0)) {
            return Err(config_err("samples and trials must be positive"));
        }
        Ok(self)
    }

    pub fn load_body(&self) -> Result<ConvexBody, CliError> {
        let source = self.body.as_ref().ok_or_else(|| config_err("no body given"))?;
        load_body(source)
    }

    pub fn load_group(&self) -> Result<GroupExample, CliError> {
        let source = self.group.as_ref().ok_or_else(|| config_err("no group given"))?;
        match source {
            GroupSource::Builtin(name) => match name.as_str() {
                "simplex-diagonal" => Ok(build_simplex_diagonal_group()),
                "triangle-334" => Ok(triangle([3, 3, 4], 1.0)?),
                "triangle-334-deformed" => Ok(triangle([3, 3, 4], 2.0)?),
                other => Err(config_err(format!(
                    "unknown builtin group {other:?} (expected one of {BUILTIN_GROUPS:?})"
                ))),
            },
            GroupSource::Triangle { triangle: m, t } => triangle(*m, *t),
            GroupSource::File { file } => {
                let text =
                    std::fs::read_to_string(file).map_err(|e| config_err(format!("{}: {e}", file.display())))?;
                let spec: GroupSpec = serde_json::from_str(&text).map_err(|e| config_err(e.to_string()))?;
                self.custom_group(&spec, &file.display().to_string())
            }
            GroupSource::Inline(spec) => self.custom_group(spec, "inline group"),
        }
    }

    fn custom_group(&self, spec: &GroupSpec, id: &str) -> Result<GroupExample, CliError> {
        let body = self.load_body()?;
        let generators = spec.transforms().map_err(|e| config_err(e.to_string()))?;
        let defect = invariance_defect(&body, &generators, 256);
        Ok(GroupExample {
            id: id.into(),
            involutions: spec.involution_flags(),
            generators,
            body,
            invariance_defect: defect,
        })
    }

    /// The invariance tolerance for limit set runs of `group`.
    pub fn invariance_tol_for(&self, group: &GroupExample) -> f64 {
        self.invariance_tol.unwrap_or(match self.group {
            Some(GroupSource::File { .. }) | Some(GroupSource::Inline(_)) => 1e-6,
            _ => group.invariance_tol(),
        })
    }
}

fn triangle(m: [u32; 3], t: f64) -> Result<GroupExample, CliError> {
    let order = |k: u32| if k == 0 { None } else { Some(k) };
    build_triangle_reflection_group(order(m[0]), order(m[1]), order(m[2]), t).map_err(CliError::Compute)
}

pub fn load_body(source: &BodySource) -> Result<ConvexBody, CliError> {
    let body = match source {
        BodySource::Builtin(name) => match name.as_str() {
            "unit-disk" => Ok(ConvexBody::unit_ball(2)),
            "square" => ConvexBody::square(1.0),
            "triangle" => Ok(ConvexBody::simplex(2)),
            "unit-ball-3" => Ok(ConvexBody::unit_ball(3)),
            "cube" => ConvexBody::hpolytope(
                nalgebra::DMatrix::from_row_slice(
                    6,
                    3,
                    &[
                        1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0,
                    ],
                ),
                nalgebra::DVector::from_element(6, 1.0),
            ),
            other => {
                return Err(config_err(format!(
                    "unknown builtin body {other:?} (expected one of {BUILTIN_BODIES:?})"
                )))
            }
        },
        BodySource::File { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| config_err(format!("{}: {e}", file.display())))?;
            BodySpec::from_json(&text)
                .map_err(|e| config_err(e.to_string()))?
                .build()
        }
        BodySource::Inline(spec) => spec.build(),
    };
    body.map_err(|e| config_err(e.to_string()))
}
