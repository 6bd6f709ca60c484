use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Roots,
    Constants,
    Steinberg,
    Conjcalc,
    Commcalc,
    Relcalc,
    Audit,
    Verify3c,
    Verify4c,
    Width,
    Normality,
    Thm2,
    Thm8,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Roots => "roots",
            Command::Constants => "constants",
            Command::Steinberg => "steinberg",
            Command::Conjcalc => "conjcalc",
            Command::Commcalc => "commcalc",
            Command::Relcalc => "relcalc",
            Command::Audit => "audit",
            Command::Verify3c => "verify3c",
            Command::Verify4c => "verify4c",
            Command::Width => "width",
            Command::Normality => "normality",
            Command::Thm2 => "thm2",
            Command::Thm8 => "thm8",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepChoice {
    Default,
    Natural,
    Adjoint,
}

/// Everything a run depends on. Echoed verbatim into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub system: String,
    pub ring: Option<String>,
    /// One generator list per ideal.
    pub ideals: Vec<Vec<String>>,
    pub representation: RepChoice,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub h: Option<u32>,
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub r: Option<u32>,
    pub s: Option<String>,
    pub cap: Option<usize>,
    pub pair_cap: Option<u64>,
    pub samples: Option<usize>,
    /// Largest exponent of the audit grid.
    pub grid: Option<u32>,
    pub seed: u64,
    pub sequential: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(command: Command, system: &str) -> Self {
        ExperimentConfig {
            command,
            system: system.to_string(),
            ring: None,
            ideals: Vec::new(),
            representation: RepChoice::Default,
            alpha: None,
            beta: None,
            p: None,
            q: None,
            h: None,
            k: None,
            m: None,
            r: None,
            s: None,
            cap: None,
            pair_cap: None,
            samples: None,
            grid: None,
            seed: DEFAULT_SEED,
            sequential: false,
            out: None,
            format: Format::Json,
        }
    }

    pub fn ring(mut self, ring: &str) -> Self {
        self.ring = Some(ring.to_string());
        self
    }

    pub fn ideal(mut self, gens: &[&str]) -> Self {
        self.ideals.push(gens.iter().map(|g| g.to_string()).collect());
        self
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for {key}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true).map_err(|_| CliError::Config(format!("invalid value `{value}` for {key}")))
}

/// Builds a configuration from `key=value` settings applied in order; later
/// settings win and every `ideal` adds one ideal.
pub fn from_pairs(pairs: &[(String, String)]) -> Result<ExperimentConfig, CliError> {
    let command = pairs
        .iter()
        .rev()
        .find(|(k, _)| k == "command")
        .ok_or_else(|| CliError::Config("no command given".into()))?;
    let mut cfg = ExperimentConfig::new(parse_enum(&command.0, &command.1)?, "A2");
    for (key, value) in pairs {
        let v = value.as_str();
        match key.as_str() {
            "command" => {}
            "system" => cfg.system = v.to_string(),
            "ring" => cfg.ring = Some(v.to_string()),
            "ideal" => cfg.ideals.push(split_ideal(v)),
            "rep" | "representation" => cfg.representation = parse_enum(key, v)?,
            "alpha" => cfg.alpha = Some(v.to_string()),
            "beta" => cfg.beta = Some(v.to_string()),
            "p" => cfg.p = Some(parse_value(key, v)?),
            "q" => cfg.q = Some(parse_value(key, v)?),
            "h" => cfg.h = Some(parse_value(key, v)?),
            "k" => cfg.k = Some(parse_value(key, v)?),
            "m" => cfg.m = Some(parse_value(key, v)?),
            "r" => cfg.r = Some(parse_value(key, v)?),
            "s" => cfg.s = Some(v.to_string()),
            "cap" => cfg.cap = Some(parse_value(key, v)?),
            "pair-cap" => cfg.pair_cap = Some(parse_value(key, v)?),
            "samples" => cfg.samples = Some(parse_value(key, v)?),
            "grid" => cfg.grid = Some(parse_value(key, v)?),
            "seed" => cfg.seed = parse_value(key, v)?,
            "sequential" => cfg.sequential = parse_value(key, v)?,
            "out" => cfg.out = Some(PathBuf::from(v)),
            "format" => cfg.format = parse_enum(key, v)?,
            other => return Err(CliError::Config(format!("unknown setting `{other}`"))),
        }
    }
    Ok(cfg)
}

/// Raw `key=value` settings, in file order. Blank lines and lines starting
/// with `#` are skipped.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_key_values(&text)
}

pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
        out.push((k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

/// Splits `2,3` into generators of one ideal.
pub fn split_ideal(text: &str) -> Vec<String> {
    text.split(',').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_lines() {
        let kv = parse_key_values("# grid\ncommand = verify4c\n\nideal=2\npair_cap = 5\n").unwrap();
        assert_eq!(
            kv,
            vec![
                ("command".into(), "verify4c".into()),
                ("ideal".into(), "2".into()),
                ("pair-cap".into(), "5".into())
            ]
        );
        assert!(parse_key_values("nonsense").is_err());
        assert_eq!(split_ideal(" 2, 3 ,"), vec!["2", "3"]);
    }

    #[test]
    fn pairs_build_a_config() {
        let kv = parse_key_values("system=B2\ncommand=verify4c\nring=Z/6\nideal=2\nideal=3\nseed=9\nformat=csv").unwrap();
        let cfg = from_pairs(&kv).unwrap();
        assert_eq!(cfg.command, Command::Verify4c);
        assert_eq!(cfg.system, "B2");
        assert_eq!(cfg.ideals, vec![vec!["2".to_string()], vec!["3".to_string()]]);
        assert_eq!((cfg.seed, cfg.format), (9, Format::Csv));
        assert!(from_pairs(&[("system".into(), "A2".into())]).is_err());
        assert!(from_pairs(&[("command".into(), "roots".into()), ("bogus".into(), "1".into())]).is_err());
        assert!(from_pairs(&[("command".into(), "roots".into()), ("p".into(), "x".into())]).is_err());
    }
}
