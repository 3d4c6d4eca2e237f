//! Flat key-value run configuration.
//!
//! The document is a TOML subset: one `key = value` per line, `#` comments,
//! quoted strings, no tables or arrays. Every key a command understands has a
//! default, so a resolved [`RunConfig`] always carries the full set.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use blowuplab_core::corrections::min_depth_for_j;
use blowuplab_core::spectra::SelfSimilarMode;
use blowuplab_core::ModelParams;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Profiles,
    SpectrumBall,
    SpectrumSelfsimilar,
    Match,
    Corrections,
    Ansatz,
    Simulate,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Profiles,
        Command::SpectrumBall,
        Command::SpectrumSelfsimilar,
        Command::Match,
        Command::Corrections,
        Command::Ansatz,
        Command::Simulate,
        Command::Verify,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Profiles => "profiles",
            Command::SpectrumBall => "spectrum-ball",
            Command::SpectrumSelfsimilar => "spectrum-selfsimilar",
            Command::Match => "match",
            Command::Corrections => "corrections",
            Command::Ansatz => "ansatz",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.as_str() == name)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ParseError {
    fn at(text: &str, key: &str, message: impl Into<String>) -> Self {
        ParseError { line: line_of(text, key), key: Some(key.to_string()), message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

/// A resolved setting. Serialized without a tag so the manifest shows plain values.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Setting {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: u32,
    pub q: f64,
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(rename = "T")]
    pub t: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Command-specific tolerances, grid sizes and options.
    pub settings: BTreeMap<String, Setting>,
}

impl RunConfig {
    /// Parameter tuple; fails for inadmissible `n` or `q`.
    pub fn params(&self) -> blowuplab_core::Result<ModelParams> {
        ModelParams::new(self.n, self.q, self.j, self.t)
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.settings.get(key) {
            Some(Setting::Float(v)) => *v,
            Some(Setting::Int(v)) => *v as f64,
            other => panic!("setting `{key}` is not numeric: {other:?}"),
        }
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.settings.get(key) {
            Some(Setting::Int(v)) => *v,
            other => panic!("setting `{key}` is not an integer: {other:?}"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.int(key) as usize
    }

    pub fn text(&self, key: &str) -> &str {
        match self.settings.get(key) {
            Some(Setting::Text(v)) => v,
            other => panic!("setting `{key}` is not text: {other:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Float,
    Int,
    Choice(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
enum Default {
    Float(f64),
    Int(i64),
    Text(&'static str),
    /// Filled from the model parameters after parsing.
    Derived,
}

struct Key {
    name: &'static str,
    kind: Kind,
    default: Default,
}

const fn float(name: &'static str, v: f64) -> Key {
    Key { name, kind: Kind::Float, default: Default::Float(v) }
}

const fn int(name: &'static str, v: i64) -> Key {
    Key { name, kind: Kind::Int, default: Default::Int(v) }
}

const fn derived_int(name: &'static str) -> Key {
    Key { name, kind: Kind::Int, default: Default::Derived }
}

const fn choice(name: &'static str, options: &'static [&'static str], v: &'static str) -> Key {
    Key { name, kind: Kind::Choice(options), default: Default::Text(v) }
}

const PROFILES: &[Key] = &[
    float("r_max", 200.0),
    float("tol", 1e-10),
    float("talenti_r_max", 100.0),
    int("talenti_samples", 10_001),
];

const SPECTRUM_BALL: &[Key] = &[
    float("radius", 10.0),
    int("doublings", 3),
    int("count", 3),
    float("tol", 1e-11),
    float("fd_spacing", 0.05),
    int("fd_levels", 4),
    float("fd_max_radius", 20.0),
];

const SPECTRUM_SELFSIMILAR: &[Key] = &[
    int("modes", 5),
    float("z_max", 40.0),
    float("shooting_s_max", 60.0),
    int("samples", 401),
    float("plot_z_max", 10.0),
];

const MATCH: &[Key] = &[
    choice("case", &["II", "I"], "II"),
    float("r_max", 200.0),
    float("tol", 1e-10),
    float("b", 0.01),
    Key { name: "d_j", kind: Kind::Float, default: Default::Derived },
];

const CORRECTIONS: &[Key] = &[
    derived_int("depth"),
    derived_int("taylor_order"),
    int("k_min", 2),
    int("k_max", 5),
    float("z_lo", 0.5),
    float("z_hi", 2.0),
];

const ANSATZ: &[Key] = &[
    float("r_max", 4.0),
    int("samples", 400),
    int("k_min", 2),
    int("k_max", 5),
    float("profile_r_max", 400.0),
    float("tol", 1e-10),
    float("b", 0.01),
    float("r0", 0.1),
    float("r3", 0.5),
    derived_int("depth"),
    derived_int("taylor_order"),
];

pub const PRESETS: &[&str] = &["extinction", "blowup", "gaussian"];

const SIMULATE: &[Key] = &[
    choice("preset", PRESETS, "extinction"),
    choice("mode", &["ode", "pde"], "ode"),
    choice("initial", &["constant", "gaussian"], "constant"),
    float("amplitude", 0.5),
    float("width", 1.0),
    float("horizon", 3.0),
    choice("scheme", &["imex", "explicit-rk"], "imex"),
    choice("boundary", &["dirichlet", "neumann"], "dirichlet"),
    float("r_max", 20.0),
    int("nodes", 2000),
    float("grading", 4.0),
    float("cfl", 0.4),
    float("rtol", 1e-10),
    float("atol", 1e-14),
    float("dt_init", 1e-6),
    float("dt_min", 1e-15),
    float("m_blow", 1e8),
    float("eps_ext", 1e-10),
    int("max_steps", 5_000_000),
];

/// Preset overrides for `simulate`, applied before explicit keys.
fn preset_defaults(preset: &str) -> Vec<(&'static str, Setting)> {
    let text = |s: &str| Setting::Text(s.to_string());
    match preset {
        "extinction" => vec![
            ("mode", text("ode")),
            ("scheme", text("explicit-rk")),
            ("amplitude", Setting::Float(0.5)),
            ("horizon", Setting::Float(3.0)),
        ],
        "blowup" => vec![
            ("mode", text("ode")),
            ("scheme", text("explicit-rk")),
            ("amplitude", Setting::Float(10.0)),
            ("horizon", Setting::Float(1.0)),
        ],
        "gaussian" => vec![
            ("mode", text("pde")),
            ("initial", text("gaussian")),
            ("amplitude", Setting::Float(0.5)),
            ("horizon", Setting::Float(2.0)),
            ("rtol", Setting::Float(1e-6)),
        ],
        _ => Vec::new(),
    }
}

fn command_keys(command: Command) -> &'static [Key] {
    match command {
        Command::Profiles => PROFILES,
        Command::SpectrumBall => SPECTRUM_BALL,
        Command::SpectrumSelfsimilar => SPECTRUM_SELFSIMILAR,
        Command::Match => MATCH,
        Command::Corrections => CORRECTIONS,
        Command::Ansatz => ANSATZ,
        Command::Simulate => SIMULATE,
        Command::Verify => &[],
    }
}

const COMMON: &[&str] = &["command", "n", "q", "J", "T", "seed", "output_dir"];

fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn type_name(v: &toml::Value) -> &'static str {
    match v {
        toml::Value::String(_) => "string",
        toml::Value::Integer(_) => "integer",
        toml::Value::Float(_) => "float",
        toml::Value::Boolean(_) => "boolean",
        toml::Value::Datetime(_) => "datetime",
        toml::Value::Array(_) => "array",
        toml::Value::Table(_) => "table",
    }
}

fn describe(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => format!("string {s:?}"),
        other => type_name(other).to_string(),
    }
}

fn as_float(text: &str, key: &str, v: &toml::Value) -> Result<f64, ParseError> {
    match v {
        toml::Value::Float(x) if x.is_finite() => Ok(*x),
        toml::Value::Float(_) => Err(ParseError::at(text, key, "expected a finite number")),
        toml::Value::Integer(i) => Ok(*i as f64),
        other => Err(ParseError::at(text, key, format!("expected a number, found {}", describe(other)))),
    }
}

fn as_int(text: &str, key: &str, v: &toml::Value) -> Result<i64, ParseError> {
    match v {
        toml::Value::Integer(i) => Ok(*i),
        other => Err(ParseError::at(text, key, format!("expected an integer, found {}", describe(other)))),
    }
}

fn as_text<'a>(text: &str, key: &str, v: &'a toml::Value) -> Result<&'a str, ParseError> {
    match v {
        toml::Value::String(s) => Ok(s),
        other => Err(ParseError::at(text, key, format!("expected a string, found {}", describe(other)))),
    }
}

fn as_u32(text: &str, key: &str, v: &toml::Value) -> Result<u32, ParseError> {
    let i = as_int(text, key, v)?;
    u32::try_from(i).map_err(|_| ParseError::at(text, key, format!("{i} is out of range")))
}

/// Parses a configuration document; the command must be given by the `command` key.
pub fn parse_config(text: &str) -> Result<RunConfig, ParseError> {
    parse_config_for(text, None)
}

/// Parses a configuration document for `command`. A `command` key in the
/// document must agree with it.
pub fn parse_config_for(text: &str, command: Option<Command>) -> Result<RunConfig, ParseError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ParseError {
        line: e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1),
        key: None,
        message: e.message().trim().to_string(),
    })?;
    for (key, value) in &table {
        if matches!(value, toml::Value::Table(_) | toml::Value::Array(_)) {
            return Err(ParseError::at(text, key, format!("{} values are not supported", type_name(value))));
        }
    }

    let from_doc = match table.get("command") {
        Some(v) => {
            let name = as_text(text, "command", v)?;
            Some(Command::from_name(name).ok_or_else(|| {
                ParseError::at(text, "command", format!("unknown command {name:?}"))
            })?)
        }
        None => None,
    };
    let command = match (command, from_doc) {
        (Some(a), Some(b)) if a != b => {
            return Err(ParseError::at(text, "command", format!("document says {b}, command line says {a}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(ParseError { line: None, key: Some("command".into()), message: "no command given".into() }),
    };

    let keys = command_keys(command);
    for key in table.keys() {
        if !COMMON.contains(&key.as_str()) && !keys.iter().any(|k| k.name == key) {
            return Err(ParseError::at(text, key, format!("unknown key for command {command}")));
        }
    }

    let get = |key: &str| table.get(key);
    let n = get("n").map(|v| as_u32(text, "n", v)).transpose()?.unwrap_or(5);
    let t = get("T").map(|v| as_float(text, "T", v)).transpose()?.unwrap_or(1.0);
    let (q, j) = if command == Command::Verify {
        let q = get("q").map(|v| as_float(text, "q", v)).transpose()?.unwrap_or(0.5);
        let j = get("J").map(|v| as_u32(text, "J", v)).transpose()?.unwrap_or(1);
        (q, j)
    } else {
        let q = get("q").ok_or_else(|| ParseError { line: None, key: Some("q".into()), message: "required key missing".into() })?;
        let j = get("J").ok_or_else(|| ParseError { line: None, key: Some("J".into()), message: "required key missing".into() })?;
        (as_float(text, "q", q)?, as_u32(text, "J", j)?)
    };
    let seed = match get("seed") {
        Some(v) => {
            let s = as_int(text, "seed", v)?;
            u64::try_from(s).map_err(|_| ParseError::at(text, "seed", "seed must be nonnegative"))?
        }
        None => 0,
    };
    let output_dir = get("output_dir").map(|v| as_text(text, "output_dir", v)).transpose()?.unwrap_or("out");

    let mut settings = BTreeMap::new();
    for k in keys {
        let resolved = match get(k.name) {
            Some(v) => Some(match k.kind {
                Kind::Float => Setting::Float(as_float(text, k.name, v)?),
                Kind::Int => Setting::Int(as_int(text, k.name, v)?),
                Kind::Choice(options) => {
                    let s = as_text(text, k.name, v)?;
                    if !options.contains(&s) {
                        return Err(ParseError::at(text, k.name, format!("{s:?} is not one of {options:?}")));
                    }
                    Setting::Text(s.to_string())
                }
            }),
            None => match k.default {
                Default::Float(v) => Some(Setting::Float(v)),
                Default::Int(v) => Some(Setting::Int(v)),
                Default::Text(v) => Some(Setting::Text(v.to_string())),
                Default::Derived => None,
            },
        };
        if let Some(s) = resolved {
            settings.insert(k.name.to_string(), s);
        }
    }
    if command == Command::Simulate {
        let preset = match settings.get("preset") {
            Some(Setting::Text(p)) => p.clone(),
            _ => unreachable!("preset has a default"),
        };
        for (key, value) in preset_defaults(&preset) {
            if !table.contains_key(key) {
                settings.insert(key.to_string(), value);
            }
        }
    }

    let mut cfg = RunConfig { command, n, q, j, t, seed, output_dir: PathBuf::from(output_dir), settings };
    fill_derived(&mut cfg);
    Ok(cfg)
}

/// Defaults that depend on the model parameters. Left unset when the
/// parameters are inadmissible; the run then stops with a domain error.
fn fill_derived(cfg: &mut RunConfig) {
    let Ok(params) = cfg.params() else { return };
    let keys = command_keys(cfg.command);
    let has = |name: &str| keys.iter().any(|k| k.name == name);
    if has("depth") && !cfg.settings.contains_key("depth") {
        let depth = min_depth_for_j(&params, params.j().max(1)) as i64;
        cfg.settings.insert("depth".into(), Setting::Int(depth));
    }
    if has("taylor_order") && !cfg.settings.contains_key("taylor_order") {
        let depth = cfg.int("depth");
        cfg.settings.insert("taylor_order".into(), Setting::Int(depth + 3));
    }
    if has("d_j") && !cfg.settings.contains_key("d_j") {
        let dj = SelfSimilarMode::new(&params, params.j() as usize).d_coefficient();
        cfg.settings.insert("d_j".into(), Setting::Float(dj));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_command_name_round_trips() {
        for c in Command::ALL {
            assert_eq!(Command::from_name(c.as_str()), Some(c));
        }
    }

    #[test]
    fn line_lookup_skips_prefixes() {
        let text = "qq = 1\n  q = 2\n";
        assert_eq!(line_of(text, "q"), Some(2));
    }
}
