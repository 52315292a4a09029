//! Experiment configuration: a command plus a flat map of named parameters,
//! merged from an optional JSON file and command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Band,
    Winding,
    PhaseDiagram,
    Walk,
    LzScan,
    Revival,
    CqedWigner,
    Phases,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Band,
        Command::Winding,
        Command::PhaseDiagram,
        Command::Walk,
        Command::LzScan,
        Command::Revival,
        Command::CqedWigner,
        Command::Phases,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Band => "band",
            Command::Winding => "winding",
            Command::PhaseDiagram => "phase-diagram",
            Command::Walk => "walk",
            Command::LzScan => "lz-scan",
            Command::Revival => "revival",
            Command::CqedWigner => "cqed-wigner",
            Command::Phases => "phases",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|c| c.name() == name).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|c| c.name()).collect();
            CliError::Validation(format!("unknown command `{name}`; expected one of {}", names.join(", ")))
        })
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Band => "Quasienergy band and spinor texture over the Brillouin zone",
            Command::Winding => "Winding number of the band texture",
            Command::PhaseDiagram => "Refocusing fidelity, winding and gap over a (theta1, theta2) grid",
            Command::Walk => "Position-space Bloch-oscillating walk from a localized spin",
            Command::LzScan => "Interband leakage of the single-step walk as theta1 varies",
            Command::Revival => "Deviation of the single-step walk from its predicted revival",
            Command::CqedWigner => "Cavity Wigner function after the circuit-QED walk, with fringe phase",
            Command::Phases => "Dynamical and geometric phase of the + band along the kicked path",
        }
    }

    pub fn keys(self) -> Vec<Key> {
        let mut keys = Vec::new();
        let walk = [
            Key::new("theta1", Kind::Angle, Need::Required, "first coin angle"),
            Key::new("theta2", Kind::Angle, Need::Computed, "second coin angle (split-step only)"),
            Key::new(
                "protocol",
                Kind::Choice(&["split-step", "single-step"]),
                Need::Default("split-step"),
                "walk protocol",
            ),
            Key::new(
                "frame",
                Kind::Choice(&["standard", "symmetric"]),
                Need::Default("standard"),
                "time frame of the step",
            ),
        ];
        match self {
            Command::Band | Command::Winding => {
                keys.extend(walk);
                keys.push(Key::new("nk", Kind::Count, Need::Default("1024"), "momentum grid size"));
            }
            Command::PhaseDiagram => keys.extend([
                Key::new("n", Kind::Count, Need::Default("30"), "steps per traversal"),
                Key::new("grid", Kind::Count, Need::Default("48"), "grid points per axis"),
                Key::new("traversals", Kind::Count, Need::Default("1"), "Brillouin-zone sweeps"),
                Key::new(
                    "frame",
                    Kind::Choice(&["standard", "symmetric"]),
                    Need::Default("standard"),
                    "time frame of the step",
                ),
                Key::new("theta_min", Kind::Angle, Need::Default("0"), "lower edge of both angle axes"),
                Key::new("theta_max", Kind::Angle, Need::Default("pi"), "upper edge of both angle axes"),
                Key::new("nk", Kind::Count, Need::Default("1024"), "momentum grid for winding and gap"),
                Key::new("nk_mean", Kind::Count, Need::Default("4096"), "momentum grid for the mean quasienergy"),
            ]),
            Command::Walk => {
                keys.extend(walk);
                keys.extend([
                    Key::new("n", Kind::Count, Need::Required, "steps per traversal"),
                    Key::new("traversals", Kind::Count, Need::Default("1"), "Brillouin-zone sweeps"),
                    Key::new("kick", Kind::Angle, Need::Computed, "momentum kick per step (default 2pi/n)"),
                    Key::new("spin", Kind::Choice(&["up", "down"]), Need::Default("up"), "initial spin"),
                    Key::new("lattice", Kind::Count, Need::Computed, "ring size (default 2*n*traversals + 2)"),
                ]);
            }
            Command::LzScan => keys.extend([
                Key::new("theta_min", Kind::Angle, Need::Default("0.2pi"), "first theta1"),
                Key::new("theta_max", Kind::Angle, Need::Default("0.9pi"), "last theta1"),
                Key::new("points", Kind::Count, Need::Default("15"), "scan points"),
                Key::new("n", Kind::Count, Need::Default("50"), "steps per sweep"),
                Key::new("k0", Kind::Angle, Need::Default("-pi"), "starting momentum"),
            ]),
            Command::Revival => keys.extend([
                Key::new("theta", Kind::Angle, Need::Required, "coin angle"),
                Key::new("m", Kind::Count, Need::Required, "steps per traversal"),
                Key::new("traversals", Kind::Count, Need::Computed, "1 for even m, 2 for odd m"),
                Key::new("nk", Kind::Count, Need::Default("1024"), "momentum grid size"),
            ]),
            Command::CqedWigner => {
                keys.extend(walk);
                keys.extend([
                    Key::new("n", Kind::Count, Need::Default("20"), "steps per traversal"),
                    Key::new("traversals", Kind::Count, Need::Default("1"), "Brillouin-zone sweeps"),
                    Key::new("alpha", Kind::Real, Need::Default("3"), "real part of the coherent amplitude"),
                    Key::new("alpha_im", Kind::Real, Need::Default("0"), "imaginary part of the coherent amplitude"),
                    Key::new("sites", Kind::Count, Need::Computed, "phase-space lattice sites (default n)"),
                    Key::new("cutoff", Kind::Count, Need::Computed, "Fock cutoff (default ceil(|a|^2 + 6|a| + 10))"),
                    Key::new(
                        "mode",
                        Kind::Choice(&["trace", "project-g"]),
                        Need::Default("trace"),
                        "how the qutrit is removed",
                    ),
                    Key::new(
                        "disentangle",
                        Kind::Flag,
                        Need::Default("true"),
                        "swap the f reference back before readout",
                    ),
                    Key::new("half_width", Kind::Real, Need::Computed, "grid half-width (default |alpha| + 3)"),
                    Key::new("spacing", Kind::Real, Need::Default("0.05"), "grid spacing"),
                ]);
            }
            Command::Phases => {
                keys.extend(walk);
                keys.extend([
                    Key::new("n", Kind::Count, Need::Default("100"), "steps per traversal"),
                    Key::new("traversals", Kind::Count, Need::Default("1"), "Brillouin-zone sweeps"),
                    Key::new("kick", Kind::Angle, Need::Computed, "momentum kick per step (default 2pi/n)"),
                    Key::new("k0", Kind::Angle, Need::Default("0"), "starting momentum"),
                    Key::new(
                        "gauge_trials",
                        Kind::Count,
                        Need::Default("8"),
                        "random gauges used to check the geometric phase",
                    ),
                ]);
            }
        }
        keys
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    /// Radians, or a multiple of pi such as "0.25pi", "3pi/4", "-pi".
    Angle,
    Real,
    Count,
    Choice(&'static [&'static str]),
    Flag,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Need {
    Required,
    Default(&'static str),
    /// Derived from other parameters when absent.
    Computed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub need: Need,
    pub help: &'static str,
}

impl Key {
    const fn new(name: &'static str, kind: Kind, need: Need, help: &'static str) -> Self {
        Self { name, kind, need, help }
    }

    /// Long flag spelling: underscores become hyphens.
    pub fn flag(&self) -> String {
        self.name.replace('_', "-")
    }

    fn parse(&self, raw: &Json) -> Result<Value, String> {
        let bad = |what: &str| format!("parameter `{}`: {what}", self.name);
        match (self.kind, raw) {
            (Kind::Angle, Json::Number(n)) => n.as_f64().map(Value::Real).ok_or_else(|| bad("not a number")),
            (Kind::Angle, Json::String(s)) => parse_angle(s).map(Value::Real).map_err(|e| bad(&e)),
            (Kind::Real, Json::Number(n)) => n.as_f64().map(Value::Real).ok_or_else(|| bad("not a number")),
            (Kind::Real, Json::String(s)) => match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Value::Real(v)),
                _ => Err(bad(&format!("malformed number `{s}`"))),
            },
            (Kind::Count, Json::Number(n)) => {
                n.as_u64().map(Value::Count).ok_or_else(|| bad(&format!("expected a non-negative integer, got {n}")))
            }
            (Kind::Count, Json::String(s)) => s
                .trim()
                .parse::<u64>()
                .map(Value::Count)
                .map_err(|_| bad(&format!("expected a non-negative integer, got `{s}`"))),
            (Kind::Choice(options), Json::String(s)) if options.contains(&s.as_str()) => Ok(Value::Text(s.clone())),
            (Kind::Choice(options), other) => Err(bad(&format!("expected one of {}, got {other}", options.join(", ")))),
            (Kind::Flag, Json::Bool(b)) => Ok(Value::Bool(*b)),
            (Kind::Flag, Json::String(s)) => match s.trim() {
                "true" | "yes" => Ok(Value::Bool(true)),
                "false" | "no" => Ok(Value::Bool(false)),
                _ => Err(bad(&format!("expected true or false, got `{s}`"))),
            },
            (_, other) => Err(bad(&format!("unexpected value {other}"))),
        }
    }
}

/// Parses radians, or a multiple of π written as "pi", "-pi", "0.25pi",
/// "3pi/4" or "3*pi/4".
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let lower = text.trim().to_ascii_lowercase();
    let malformed = || format!("malformed angle `{text}` (use radians or a multiple of pi such as 0.25pi or 3pi/4)");
    let value = match lower.split_once("pi") {
        Some((pre, post)) => {
            let pre = pre.trim().trim_end_matches('*').trim();
            let coef = match pre {
                "" | "+" => 1.0,
                "-" => -1.0,
                p => p.parse::<f64>().map_err(|_| malformed())?,
            };
            let post = post.trim();
            let div = if post.is_empty() {
                1.0
            } else {
                post.strip_prefix('/').and_then(|d| d.trim().parse::<f64>().ok()).ok_or_else(malformed)?
            };
            if div == 0.0 {
                return Err(malformed());
            }
            coef * PI / div
        }
        None => lower.parse::<f64>().map_err(|_| malformed())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(malformed())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Count(u64),
    Real(f64),
    Text(String),
}

/// On-disk form of a configuration; also the `config` echo in meta.json.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, Json>,
}

impl ConfigFile {
    /// Reads a configuration file. A meta.json written by a previous run is
    /// accepted too; its `config` echo is used.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        let mut json: Json =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config is not valid JSON: {e}")))?;
        if let Some(inner) = json.get_mut("config").filter(|c| c.is_object()) {
            json = inner.take();
        }
        serde_json::from_value(json).map_err(|e| CliError::Validation(format!("bad config layout: {e}")))
    }
}

/// A parameter given both in the file and on the command line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Override {
    pub key: String,
    pub file: Json,
    pub flag: Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    /// Every parameter after defaults are applied; computed ones are absent.
    pub params: BTreeMap<String, Value>,
    pub overrides: Vec<Override>,
}

impl ExperimentConfig {
    pub fn real(&self, key: &str) -> Option<f64> {
        match self.params.get(key)? {
            Value::Real(v) => Some(*v),
            Value::Count(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        match self.params.get(key)? {
            Value::Count(v) => Some(*v as usize),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key)? {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.params.get(key)? {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

/// Merges the file and flag parameters (flags win), then validates every
/// key against the command's schema and fills in defaults.
pub fn parse_config(
    command: &str,
    flags: &[(String, String)],
    file: Option<ConfigFile>,
    seed_flag: Option<u64>,
) -> Result<ExperimentConfig, CliError> {
    let command = Command::from_name(command)?;
    let file = file.unwrap_or_default();
    if let Some(file_command) = &file.command {
        if file_command != command.name() {
            return Err(CliError::Validation(format!(
                "config file is for `{file_command}` but the command is `{}`",
                command.name()
            )));
        }
    }

    let mut raw = file.params;
    let mut overrides = Vec::new();
    for (key, text) in flags {
        let flag = Json::String(text.clone());
        if let Some(previous) = raw.insert(key.clone(), flag.clone()) {
            if previous != flag {
                overrides.push(Override { key: key.clone(), file: previous, flag });
            }
        }
    }
    let seed = match (file.seed, seed_flag) {
        (Some(f), Some(s)) => {
            if f != s {
                overrides.push(Override { key: "seed".into(), file: f.into(), flag: s.into() });
            }
            s
        }
        (f, s) => s.or(f).unwrap_or(0),
    };

    let keys = command.keys();
    if let Some(unknown) = raw.keys().find(|k| !keys.iter().any(|key| key.name == k.as_str())) {
        let names: Vec<_> = keys.iter().map(|k| k.name).collect();
        return Err(CliError::Validation(format!(
            "unknown parameter `{unknown}` for `{}`; valid parameters are {}",
            command.name(),
            names.join(", ")
        )));
    }

    let mut params = BTreeMap::new();
    for key in &keys {
        let value = match (raw.get(key.name), key.need) {
            (Some(v), _) => key.parse(v).map_err(CliError::Validation)?,
            (None, Need::Default(d)) => key.parse(&Json::String(d.into())).expect("schema defaults parse"),
            (None, Need::Computed) => continue,
            (None, Need::Required) => {
                return Err(CliError::Validation(format!(
                    "missing required parameter `{}` for `{}` (pass --{} or set params.{} in the config file)",
                    key.name,
                    command.name(),
                    key.flag(),
                    key.name
                )))
            }
        };
        params.insert(key.name.to_string(), value);
    }
    Ok(ExperimentConfig { command, seed, params, overrides })
}
