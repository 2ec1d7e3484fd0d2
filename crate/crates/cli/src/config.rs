//! Flat run configuration with dotted keys.
//!
//! Every key has a type, a default and a section. A command only accepts the
//! keys of the sections it uses. Values are layered: defaults, then a preset,
//! then a config file, then `--set` pairs, then the shorthand flags.

use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    /// Float or `null`.
    OptFloat,
    Count,
    Seed,
    Text(&'static [&'static str]),
    Flag,
}

pub struct KeySpec {
    pub key: &'static str,
    pub kind: Kind,
    pub default: fn() -> Value,
    pub help: &'static str,
}

macro_rules! spec {
    ($key:literal, $kind:expr, $default:expr, $help:literal) => {
        KeySpec { key: $key, kind: $kind, default: || Value::from($default), help: $help }
    };
}

const AXES: &[&str] = &["none", "beta", "b", "omega"];
const DIAGRAM_AXES: &[&str] = &["beta", "b", "omega"];
const SCENARIO_AXES: &[&str] = &["none", "beta", "omega"];
const TARGETS: &[&str] = &["all", "unbiased", "low", "high"];
const DATA: &[&str] = &["plus", "minus"];
const TRAJECTORY_DATA: &[&str] = &["plus", "minus", "explicit"];

pub static KEYS: &[KeySpec] = &[
    spec!("model.A", Kind::Float, 15.0, "autonomous expenditure"),
    spec!("model.c", Kind::Float, 0.38, "marginal propensity to consume"),
    spec!("model.gamma", Kind::Float, 0.8, "accelerator"),
    spec!("model.omega", Kind::Float, 1.0, "interaction degree"),
    spec!("model.h", Kind::Float, 0.38, "investment out of stock wealth"),
    spec!("model.sigma", Kind::Float, 3.0, "market-maker reactivity"),
    spec!("model.mu", Kind::Float, 1.0, "demand reactivity"),
    spec!("model.F_star", Kind::Float, 15.0, "fundamental value"),
    spec!("model.d", Kind::Float, 0.38, "income-to-fundamental linkage"),
    spec!("model.b", Kind::Float, 0.5, "bias"),
    spec!("model.beta", Kind::Float, 1.0, "intensity of choice"),
    spec!("model.sig_I.a1", Kind::OptFloat, Value::Null, "investment upper bound (null: scaled)"),
    spec!("model.sig_I.a2", Kind::OptFloat, Value::Null, "investment lower bound (null: scaled)"),
    spec!("model.sig_P.a1", Kind::OptFloat, Value::Null, "price upper bound (null: scaled)"),
    spec!("model.sig_P.a2", Kind::OptFloat, Value::Null, "price lower bound (null: scaled)"),
    spec!("sweep.axis", Kind::Text(AXES), "none", "steady-state sweep axis"),
    spec!("sweep.from", Kind::Float, 0.0, "first sweep value"),
    spec!("sweep.to", Kind::Float, 5.0, "last sweep value"),
    spec!("sweep.points", Kind::Count, 101u64, "sweep points"),
    spec!("stability.target", Kind::Text(TARGETS), "all", "steady state to analyse"),
    spec!("stability.axis", Kind::Text(SCENARIO_AXES), "none", "scenario scan axis"),
    spec!("stability.from", Kind::Float, 0.0, "scan start"),
    spec!("stability.to", Kind::Float, 1.0, "scan end"),
    spec!("stability.points", Kind::Count, 401u64, "scan grid points"),
    spec!("stability.tol", Kind::Float, 1e-6, "threshold bisection tolerance"),
    spec!("grid.beta_min", Kind::Float, 0.0, "grid beta start"),
    spec!("grid.beta_max", Kind::Float, 5.0, "grid beta end"),
    spec!("grid.beta_points", Kind::Count, 101u64, "grid beta points"),
    spec!("grid.omega_min", Kind::Float, 0.0, "grid omega start"),
    spec!("grid.omega_max", Kind::Float, 1.0, "grid omega end"),
    spec!("grid.omega_points", Kind::Count, 51u64, "grid omega points"),
    spec!("orbit.transient", Kind::Count, 10_000u64, "discarded iterations"),
    spec!("orbit.sample", Kind::Count, 512u64, "sampled iterations"),
    spec!("orbit.divergence_cutoff", Kind::Float, 1e9, "divergence magnitude"),
    spec!("orbit.match_tol", Kind::OptFloat, Value::Null, "period matching tolerance (null: 1e-6 (1 + |P*|))"),
    spec!("bifurcate.mode", Kind::Text(&["1d", "2d"]), "2d", "diagram type"),
    spec!("bifurcate.axis", Kind::Text(DIAGRAM_AXES), "beta", "1d axis"),
    spec!("bifurcate.from", Kind::Float, 0.0, "1d start (may exceed end)"),
    spec!("bifurcate.to", Kind::Float, 5.0, "1d end"),
    spec!("bifurcate.points", Kind::Count, 400u64, "1d points"),
    spec!("bifurcate.seeding", Kind::Text(&["follow", "fixed"]), "follow", "1d seeding"),
    spec!("bifurcate.initial", Kind::Text(DATA), "plus", "initial datum"),
    spec!("basin.resolution", Kind::Count, 512u64, "cells per axis"),
    spec!("basin.y_min", Kind::OptFloat, Value::Null, "income range start (null: Y* - 10)"),
    spec!("basin.y_max", Kind::OptFloat, Value::Null, "income range end (null: Y* + 10)"),
    spec!("basin.p_min", Kind::OptFloat, Value::Null, "price range start (null: P* - 10)"),
    spec!("basin.p_max", Kind::OptFloat, Value::Null, "price range end (null: P* + 10)"),
    spec!("trajectory.initial", Kind::Text(TRAJECTORY_DATA), "plus", "initial datum"),
    spec!("trajectory.y0", Kind::OptFloat, Value::Null, "explicit initial income"),
    spec!("trajectory.p0", Kind::OptFloat, Value::Null, "explicit initial price"),
    spec!("trajectory.z0", Kind::OptFloat, Value::Null, "explicit initial lagged income"),
    spec!("trajectory.lyapunov_steps", Kind::Count, 0u64, "Lyapunov iterations (0: skip)"),
    spec!("trajectory.renorm", Kind::Count, 1u64, "Lyapunov renormalization interval"),
    spec!("stochastic.mode", Kind::Text(&["path", "kurtosis", "acf"]), "path", "output"),
    spec!("stochastic.s", Kind::OptFloat, Value::Null, "absolute shock deviation (null: s_rel P*/F*)"),
    spec!("stochastic.s_rel", Kind::Float, 0.15, "shock deviation relative to P*/F*"),
    spec!("stochastic.seed", Kind::Seed, 0u64, "generator seed"),
    spec!("stochastic.length", Kind::Count, 200_000u64, "total steps"),
    spec!("stochastic.burn_in", Kind::Count, 10_000u64, "discarded steps"),
    spec!("stochastic.max_lag", Kind::Count, 50u64, "largest autocorrelation lag"),
    spec!("stochastic.absolute", Kind::Flag, true, "autocorrelation of absolute returns"),
];

pub fn spec_for(key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.key == key)
}

fn section(key: &str) -> &str {
    key.split('.').next().unwrap_or("")
}

/// Sections consulted by each command.
pub fn sections(command: &str) -> &'static [&'static str] {
    match command {
        "steady" => &["model", "sweep"],
        "stability" => &["model", "stability"],
        "region" => &["model", "grid"],
        "bifurcate" => &["model", "grid", "orbit", "bifurcate"],
        "basin" => &["model", "orbit", "basin"],
        "orbit" => &["model", "orbit", "trajectory"],
        "stochastic" => &["model", "grid", "stochastic"],
        _ => &[],
    }
}

/// Fully resolved configuration of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub command: String,
    values: Map<String, Value>,
}

fn canonical(spec: &KeySpec, value: &Value) -> Result<Value, CliError> {
    let bad = |what: &str| CliError::Config(format!("`{}` expects {what}, got {value}", spec.key));
    match spec.kind {
        Kind::Float => value.as_f64().filter(|v| v.is_finite()).map(Value::from).ok_or_else(|| bad("a number")),
        Kind::OptFloat => match value {
            Value::Null => Ok(Value::Null),
            v => v.as_f64().filter(|v| v.is_finite()).map(Value::from).ok_or_else(|| bad("a number or null")),
        },
        Kind::Count | Kind::Seed => {
            if let Some(n) = value.as_u64() {
                return Ok(Value::from(n));
            }
            match value.as_f64() {
                Some(f) if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 => Ok(Value::from(f as u64)),
                _ => Err(bad("a non-negative integer")),
            }
        }
        Kind::Text(choices) => match value.as_str() {
            Some(s) if choices.contains(&s) => Ok(Value::from(s)),
            _ => Err(bad(&format!("one of {}", choices.join(", ")))),
        },
        Kind::Flag => match value {
            Value::Bool(b) => Ok(Value::Bool(*b)),
            Value::String(s) if s == "true" || s == "false" => Ok(Value::Bool(s == "true")),
            _ => Err(bad("true or false")),
        },
    }
}

impl Config {
    pub fn defaults(command: &str) -> Self {
        let wanted = sections(command);
        let values = KEYS
            .iter()
            .filter(|k| wanted.contains(&section(k.key)))
            .map(|k| (k.key.to_string(), (k.default)()))
            .collect();
        Self { command: command.to_string(), values }
    }

    /// Sets a key supplied by the user; keys of other commands are errors.
    pub fn set(&mut self, key: &str, value: &Value) -> Result<(), CliError> {
        let spec = spec_for(key).ok_or_else(|| CliError::Config(format!("unknown key `{key}`")))?;
        if !self.values.contains_key(key) {
            return Err(CliError::Config(format!("key `{key}` does not apply to `{}`", self.command)));
        }
        self.values.insert(key.to_string(), canonical(spec, value)?);
        Ok(())
    }

    /// Sets a key from a preset; keys of other commands are skipped.
    pub fn set_lenient(&mut self, key: &str, value: &Value) -> Result<(), CliError> {
        if self.values.contains_key(key) {
            self.set(key, value)
        } else if spec_for(key).is_some() {
            Ok(())
        } else {
            Err(CliError::Config(format!("unknown key `{key}`")))
        }
    }

    /// Applies a flat or nested JSON object.
    pub fn merge_json(&mut self, object: &Map<String, Value>) -> Result<(), CliError> {
        let mut flat = Vec::new();
        flatten("", object, &mut flat);
        for (key, value) in flat {
            if key == "command" {
                if value.as_str() != Some(self.command.as_str()) {
                    return Err(CliError::Config(format!("configuration was written for `{value}`, not `{}`", self.command)));
                }
                continue;
            }
            self.set(&key, &value)?;
        }
        Ok(())
    }

    pub fn value(&self, key: &str) -> &Value {
        self.values.get(key).unwrap_or_else(|| panic!("key `{key}` not resolved for `{}`", self.command))
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.value(key).as_f64().expect("validated number")
    }

    pub fn opt_f64(&self, key: &str) -> Option<f64> {
        self.value(key).as_f64()
    }

    pub fn count(&self, key: &str) -> usize {
        self.value(key).as_u64().expect("validated count") as usize
    }

    pub fn seed(&self, key: &str) -> u64 {
        self.value(key).as_u64().expect("validated seed")
    }

    pub fn text(&self, key: &str) -> &str {
        self.value(key).as_str().expect("validated text")
    }

    pub fn flag(&self, key: &str) -> bool {
        self.value(key).as_bool().expect("validated flag")
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Single-line JSON record, command first.
    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        map.insert("command".into(), Value::from(self.command.clone()));
        for (k, v) in &self.values {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map).to_string()
    }
}

fn flatten(prefix: &str, object: &Map<String, Value>, out: &mut Vec<(String, Value)>) {
    for (k, v) in object {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(inner) if spec_for(&key).is_none() => flatten(&key, inner, out),
            _ => out.push((key, v.clone())),
        }
    }
}

/// Value of a `--set key=value` pair: JSON when it parses, a string otherwise.
pub fn parse_assignment(text: &str) -> Result<(String, Value), CliError> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("expected key=value, got `{text}`")))?;
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::from(raw.trim()));
    Ok((key.trim().to_string(), value))
}

/// Reads a configuration from a JSON file or from the header of an output file.
pub fn read_config_source(text: &str) -> Result<Map<String, Value>, CliError> {
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(text) {
        return Ok(map);
    }
    for line in text.lines() {
        if let Some(json) = line.strip_prefix("# config: ") {
            return match serde_json::from_str::<Value>(json) {
                Ok(Value::Object(map)) => Ok(map),
                _ => Err(CliError::Config("malformed configuration header".into())),
            };
        }
        if !line.starts_with('#') {
            break;
        }
    }
    Err(CliError::Config("file is neither a JSON object nor an output with a configuration header".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_sections() {
        let c = Config::defaults("steady");
        assert!(c.contains("model.beta") && c.contains("sweep.axis"));
        assert!(!c.contains("orbit.transient"));
    }

    #[test]
    fn rejects_unknown_and_foreign_keys() {
        let mut c = Config::defaults("steady");
        assert!(c.set("model.zeta", &Value::from(1.0)).is_err());
        assert!(c.set("basin.resolution", &Value::from(8)).is_err());
        assert!(c.set_lenient("basin.resolution", &Value::from(8)).is_ok());
        assert!(c.set("sweep.axis", &Value::from("gamma")).is_err());
        assert!(c.set("sweep.points", &Value::from(-1)).is_err());
    }

    #[test]
    fn canonical_numbers() {
        let mut c = Config::defaults("basin");
        c.set("basin.resolution", &Value::from(64.0)).unwrap();
        assert_eq!(c.value("basin.resolution"), &Value::from(64u64));
        c.set("model.beta", &Value::from(2u64)).unwrap();
        assert_eq!(c.to_json().contains("\"model.beta\":2.0"), true);
    }

    #[test]
    fn json_round_trip() {
        let mut c = Config::defaults("orbit");
        c.set("model.beta", &Value::from(0.1 + 0.2)).unwrap();
        let text = format!("# regimes x\n# config: {}\nt,Y,P,Z\n", c.to_json());
        let mut d = Config::defaults("orbit");
        d.merge_json(&read_config_source(&text).unwrap()).unwrap();
        assert_eq!(c, d);
        let mut e = Config::defaults("steady");
        assert!(e.merge_json(&read_config_source(&text).unwrap()).is_err());
    }

    #[test]
    fn nested_objects_flatten() {
        let map = read_config_source(r#"{"model": {"beta": 3, "sig_P": {"a1": 2, "a2": 4}}}"#).unwrap();
        let mut c = Config::defaults("steady");
        c.merge_json(&map).unwrap();
        assert_eq!(c.f64("model.beta"), 3.0);
        assert_eq!(c.opt_f64("model.sig_P.a2"), Some(4.0));
    }

    #[test]
    fn assignments() {
        assert_eq!(parse_assignment("sweep.axis=beta").unwrap(), ("sweep.axis".into(), Value::from("beta")));
        assert_eq!(parse_assignment("model.beta=2.5").unwrap().1, Value::from(2.5));
        assert_eq!(parse_assignment("model.sig_P.a1=null").unwrap().1, Value::Null);
        assert!(parse_assignment("nothing").is_err());
    }
}
