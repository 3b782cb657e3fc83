//! Run configuration in TOML syntax with sections `[mesh] [bc] [time]
//! [output] [study]`.
//!
//! ```toml
//! [mesh]
//! generator = "scattering"
//! h = 0.05
//!
//! [bc]
//! left = "demo_left_pulse"
//! ball = "zero"
//! other = "natural"
//!
//! [time]
//! t_end = 5.0
//! cfl_safety = 0.9
//!
//! [output]
//! directory = "out"
//! times = [2.3, 5.0]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::expressions::Expression;
use crate::error::{Error, Result};
use crate::mesh::{BoundaryTag, BoundingBox, SplitDirection, DEMO_BALL_RADIUS};
use crate::timestepping::{OutputSchedule, StepSize, DEFAULT_CFL_SAFETY};
use crate::verification::{MeshFamily, StudyConfig};

/// Target edge length of the scattering preset.
pub const DEMO_PRESET_H: f64 = 0.05;

/// Snapshot times of the scattering preset.
pub const DEMO_MEASURE_TIMES: [f64; 2] = [2.3, 5.0];

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mesh: Option<RawMesh>,
    #[serde(default)]
    bc: BTreeMap<String, String>,
    time: Option<RawTime>,
    output: Option<RawOutput>,
    study: Option<RawStudy>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawMesh {
    generator: Option<String>,
    file: Option<PathBuf>,
    h: Option<f64>,
    n_circle: Option<usize>,
    nx: Option<usize>,
    ny: Option<usize>,
    /// `[x0, x1, y0, y1]`.
    bbox: Option<[f64; 4]>,
    split: Option<String>,
    rect_columns: Option<usize>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_end: Option<f64>,
    dt: Option<f64>,
    cfl_safety: Option<f64>,
    source: Option<String>,
    initial: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<PathBuf>,
    prefix: Option<String>,
    cadence: Option<f64>,
    times: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    family: Option<String>,
    levels: Option<usize>,
    n_coarse: Option<usize>,
    t_end: Option<f64>,
    cfl_safety: Option<f64>,
    csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshGenerator {
    Scattering {
        h: f64,
        n_circle: usize,
    },
    Rect {
        nx: usize,
        ny: usize,
        bbox: BoundingBox,
    },
    Tri {
        nx: usize,
        ny: usize,
        bbox: BoundingBox,
        split: SplitDirection,
    },
    Hybrid {
        nx: usize,
        ny: usize,
        bbox: BoundingBox,
        rect_columns: usize,
        split: SplitDirection,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshSource {
    Generator(MeshGenerator),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// `n x curl E = 0`, imposed weakly.
    Natural,
    /// Prescribed tangential trace.
    Essential(Expression),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSettings {
    pub t_end: f64,
    pub step: StepSize,
    pub source: Expression,
    pub initial: Expression,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSettings {
    pub directory: PathBuf,
    pub prefix: String,
    pub schedule: OutputSchedule,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("output"),
            prefix: "snapshot".into(),
            schedule: OutputSchedule::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudySettings {
    pub study: StudyConfig,
    pub csv: Option<PathBuf>,
}

/// Fully validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mesh: MeshSource,
    /// Tags not listed are natural.
    pub bc: BTreeMap<BoundaryTag, BoundaryCondition>,
    pub time: TimeSettings,
    pub output: OutputSettings,
    pub study: Option<StudySettings>,
}

impl RunConfig {
    /// The scattering experiment: pulse on the left boundary, perfectly
    /// conducting hole, natural condition elsewhere, snapshots at 2.3 and 5.
    pub fn scattering_preset(h: f64, t_end: f64) -> Self {
        let n_circle = ((2.0 * std::f64::consts::PI * DEMO_BALL_RADIUS / h).ceil() as usize).max(8);
        let bc = BTreeMap::from([
            (
                BoundaryTag::Left,
                BoundaryCondition::Essential(Expression::DemoLeftPulse),
            ),
            (BoundaryTag::Ball, BoundaryCondition::Essential(Expression::Zero)),
            (BoundaryTag::Other, BoundaryCondition::Natural),
        ]);
        Self {
            mesh: MeshSource::Generator(MeshGenerator::Scattering { h, n_circle }),
            bc,
            time: TimeSettings {
                t_end,
                step: StepSize::Cfl {
                    safety: DEFAULT_CFL_SAFETY,
                },
                source: Expression::Zero,
                initial: Expression::Zero,
            },
            output: OutputSettings {
                directory: PathBuf::from("output"),
                prefix: "scattering".into(),
                schedule: OutputSchedule::Times(DEMO_MEASURE_TIMES.to_vec()),
            },
            study: None,
        }
    }

    /// Tags with an essential condition.
    pub fn essential_tags(&self) -> Vec<BoundaryTag> {
        self.bc
            .iter()
            .filter(|(_, c)| matches!(c, BoundaryCondition::Essential(_)))
            .map(|(&t, _)| t)
            .collect()
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;

    let mut missing = Vec::new();
    let mesh_given = raw
        .mesh
        .as_ref()
        .is_some_and(|m| m.generator.is_some() || m.file.is_some());
    if !mesh_given {
        missing.push("[mesh] generator or file");
    }
    let t_end = raw.time.as_ref().and_then(|t| t.t_end);
    if t_end.is_none() {
        missing.push("[time] t_end");
    }
    if !missing.is_empty() {
        return Err(Error::Config(format!("missing required keys: {}", missing.join(", "))));
    }

    let mesh = mesh_source(raw.mesh.unwrap_or_default())?;
    let bc = boundary_conditions(&raw.bc)?;
    let time = time_settings(raw.time.unwrap_or_default())?;
    let output = output_settings(raw.output.unwrap_or_default())?;
    let study = raw.study.map(study_settings).transpose()?;
    Ok(RunConfig {
        mesh,
        bc,
        time,
        output,
        study,
    })
}

fn config_err(section: &str, key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("[{section}] {key}: {msg}"))
}

fn mesh_source(m: RawMesh) -> Result<MeshSource> {
    let allowed: &[&str] = match (&m.generator, &m.file) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "[mesh]: give exactly one mesh source, `generator` or `file`".into(),
            ))
        }
        (None, Some(path)) => {
            check_unused(&m, &[])?;
            return Ok(MeshSource::File(path.clone()));
        }
        (Some(g), None) => match g.as_str() {
            "scattering" => &["h", "n_circle"],
            "rect" => &["nx", "ny", "bbox"],
            "tri" => &["nx", "ny", "bbox", "split"],
            "hybrid" => &["nx", "ny", "bbox", "split", "rect_columns"],
            other => {
                return Err(config_err(
                    "mesh",
                    "generator",
                    format!("unknown generator `{other}` (expected scattering, rect, tri or hybrid)"),
                ))
            }
        },
        (None, None) => unreachable!("checked by the caller"),
    };
    check_unused(&m, allowed)?;

    let generator = m.generator.as_deref().unwrap_or_default();
    if generator == "scattering" {
        let h = m.h.unwrap_or(DEMO_PRESET_H);
        if !(h > 0.0 && h < DEMO_BALL_RADIUS) {
            return Err(config_err(
                "mesh",
                "h",
                format!("must lie in (0, {DEMO_BALL_RADIUS}), got {h}"),
            ));
        }
        let default_circle = RunConfig::scattering_preset(h, 0.0).mesh;
        let n_circle = match (m.n_circle, default_circle) {
            (Some(n), _) => n,
            (None, MeshSource::Generator(MeshGenerator::Scattering { n_circle, .. })) => n_circle,
            _ => unreachable!(),
        };
        return Ok(MeshSource::Generator(MeshGenerator::Scattering { h, n_circle }));
    }

    let nx =
        m.nx.ok_or_else(|| config_err("mesh", "nx", "required for this generator"))?;
    let ny = m.ny.unwrap_or(nx);
    let bbox = match m.bbox {
        Some([x0, x1, y0, y1]) => BoundingBox::new(x0, x1, y0, y1).map_err(|e| config_err("mesh", "bbox", e))?,
        None => BoundingBox::unit(),
    };
    let split = match &m.split {
        Some(s) => s.parse().map_err(|e| config_err("mesh", "split", e))?,
        None => SplitDirection::Right,
    };
    Ok(MeshSource::Generator(match generator {
        "rect" => MeshGenerator::Rect { nx, ny, bbox },
        "tri" => MeshGenerator::Tri { nx, ny, bbox, split },
        _ => MeshGenerator::Hybrid {
            nx,
            ny,
            bbox,
            rect_columns: m.rect_columns.unwrap_or(nx / 2),
            split,
        },
    }))
}

fn check_unused(m: &RawMesh, allowed: &[&str]) -> Result<()> {
    let given = [
        ("h", m.h.is_some()),
        ("n_circle", m.n_circle.is_some()),
        ("nx", m.nx.is_some()),
        ("ny", m.ny.is_some()),
        ("bbox", m.bbox.is_some()),
        ("split", m.split.is_some()),
        ("rect_columns", m.rect_columns.is_some()),
    ];
    match given.iter().find(|(k, set)| *set && !allowed.contains(k)) {
        Some((k, _)) => Err(config_err("mesh", k, "not used by this mesh source")),
        None => Ok(()),
    }
}

fn boundary_conditions(raw: &BTreeMap<String, String>) -> Result<BTreeMap<BoundaryTag, BoundaryCondition>> {
    let mut out = BTreeMap::new();
    for (key, value) in raw {
        let tag: BoundaryTag = key.parse().map_err(|e| config_err("bc", key, e))?;
        if !tag.is_boundary() {
            return Err(config_err(
                "bc",
                key,
                "`interface` marks interior edges and takes no boundary condition",
            ));
        }
        let cond = if value == "natural" {
            BoundaryCondition::Natural
        } else {
            let expr: Expression = value.parse().map_err(|e: Error| config_err("bc", key, strip(e)))?;
            let _ = expr.trace().map_err(|e| config_err("bc", key, strip(e)))?;
            BoundaryCondition::Essential(expr)
        };
        out.insert(tag, cond);
    }
    Ok(out)
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn expression(section: &str, key: &str, value: Option<String>) -> Result<Expression> {
    value.map_or(Ok(Expression::Zero), |v| {
        v.parse().map_err(|e: Error| config_err(section, key, strip(e)))
    })
}

fn time_settings(t: RawTime) -> Result<TimeSettings> {
    let t_end = t.t_end.expect("checked by the caller");
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(config_err(
            "time",
            "t_end",
            format!("must be non-negative, got {t_end}"),
        ));
    }
    let step = match (t.dt, t.cfl_safety) {
        (Some(_), Some(_)) => return Err(config_err("time", "dt", "give either `dt` or `cfl_safety`, not both")),
        (Some(dt), None) if dt > 0.0 && dt.is_finite() => StepSize::Fixed(dt),
        (Some(dt), None) => return Err(config_err("time", "dt", format!("must be positive, got {dt}"))),
        (None, Some(s)) if s > 0.0 && s <= 1.0 => StepSize::Cfl { safety: s },
        (None, Some(s)) => return Err(config_err("time", "cfl_safety", format!("must lie in (0, 1], got {s}"))),
        (None, None) => StepSize::Cfl {
            safety: DEFAULT_CFL_SAFETY,
        },
    };
    let source = expression("time", "source", t.source)?;
    source.source().map_err(|e| config_err("time", "source", strip(e)))?;
    let initial = expression("time", "initial", t.initial)?;
    initial
        .initial_data()
        .map_err(|e| config_err("time", "initial", strip(e)))?;
    Ok(TimeSettings {
        t_end,
        step,
        source,
        initial,
    })
}

fn output_settings(o: RawOutput) -> Result<OutputSettings> {
    let defaults = OutputSettings::default();
    let schedule = match (o.cadence, o.times) {
        (Some(_), Some(_)) => {
            return Err(config_err(
                "output",
                "cadence",
                "give either `cadence` or `times`, not both",
            ))
        }
        (Some(c), None) if c > 0.0 && c.is_finite() => OutputSchedule::Cadence(c),
        (Some(c), None) => return Err(config_err("output", "cadence", format!("must be positive, got {c}"))),
        (None, Some(ts)) => {
            if let Some(t) = ts.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                return Err(config_err("output", "times", format!("must be non-negative, got {t}")));
            }
            OutputSchedule::Times(ts)
        }
        (None, None) => OutputSchedule::None,
    };
    Ok(OutputSettings {
        directory: o.directory.unwrap_or(defaults.directory),
        prefix: o.prefix.unwrap_or(defaults.prefix),
        schedule,
    })
}

fn study_settings(s: RawStudy) -> Result<StudySettings> {
    let family: MeshFamily = match &s.family {
        Some(f) => f.parse().map_err(|e| config_err("study", "family", strip(e)))?,
        None => return Err(config_err("study", "family", "required")),
    };
    let mut study = StudyConfig::standard(family);
    if let Some(l) = s.levels {
        study.levels = l;
    }
    if let Some(n) = s.n_coarse {
        study.n_coarse = n;
    }
    if let Some(t) = s.t_end {
        study.t_end = t;
    }
    if let Some(c) = s.cfl_safety {
        study.cfl_safety = c;
    }
    if study.levels < 3 {
        return Err(config_err(
            "study",
            "levels",
            format!("need at least 3, got {}", study.levels),
        ));
    }
    Ok(StudySettings { study, csv: s.csv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_lists_required_keys() {
        let msg = parse_config_str("").unwrap_err().to_string();
        assert!(msg.contains("[mesh] generator or file"), "{msg}");
        assert!(msg.contains("[time] t_end"), "{msg}");
    }

    #[test]
    fn unknown_key_reports_location() {
        let msg = parse_config_str("[mesh]\ngenerator = \"rect\"\nnx = 2\n[time]\nt_end = 1\nt_ned = 2\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("t_ned") && msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn unknown_tag_names_valid_tags() {
        let msg = parse_config_str("[mesh]\ngenerator = \"rect\"\nnx = 2\n[bc]\nlfet = \"zero\"\n[time]\nt_end = 1\n")
            .unwrap_err()
            .to_string();
        assert!(
            msg.contains("[bc] lfet") && msg.contains(&BoundaryTag::valid_names()),
            "{msg}"
        );
    }

    #[test]
    fn both_mesh_sources_rejected() {
        let err = parse_config_str("[mesh]\ngenerator = \"rect\"\nfile = \"a.mesh\"\n[time]\nt_end = 1\n");
        assert!(err.unwrap_err().to_string().contains("exactly one"));
    }

    #[test]
    fn preset_text_matches_constructor() {
        let text = "[mesh]\ngenerator = \"scattering\"\n[bc]\nleft = \"demo_left_pulse\"\nball = \"zero\"\nother = \"natural\"\n\
                    [time]\nt_end = 5.0\n[output]\nprefix = \"scattering\"\ntimes = [2.3, 5.0]\n";
        assert_eq!(
            parse_config_str(text).unwrap(),
            RunConfig::scattering_preset(DEMO_PRESET_H, 5.0)
        );
    }

    #[test]
    fn trace_role_is_checked() {
        let err = parse_config_str(
            "[mesh]\ngenerator = \"rect\"\nnx = 2\n[bc]\nleft = \"standing_mode\"\n[time]\nt_end = 1\n",
        );
        assert!(err.unwrap_err().to_string().contains("boundary trace"));
    }
}
