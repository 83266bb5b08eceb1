//! Run settings: defaults, then the config file, then the command line.

use std::path::Path;

use matbeta::integrate::Engine;
use matbeta::registry::RunOptions;

use crate::args::Cli;
use crate::error::CliError;

/// Options that may appear without a value.
const FLAGS: &[&str] = &["json", "lhs"];

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub engine: Engine,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub json: bool,
    /// Identity parameters in the order given, config entries first.
    pub params: Vec<(String, String)>,
    /// Command-specific options found among the trailing arguments.
    pub extra: Vec<(String, Option<String>)>,
}

impl Default for Settings {
    fn default() -> Self {
        let o = RunOptions::default();
        Self {
            engine: o.engine,
            samples: o.samples,
            seed: o.seed,
            tol: o.rel_tol,
            json: false,
            params: Vec::new(),
            extra: Vec::new(),
        }
    }
}

impl Settings {
    /// Resolves settings for a command whose own options are `local`.
    pub fn resolve(cli: &Cli, rest: &[String], local: &[&str]) -> Result<Self, CliError> {
        let mut s = Settings::default();
        let trailing = split_options(rest)?;
        let config_path = trailing
            .iter()
            .rev()
            .find(|(k, _)| k == "config")
            .and_then(|(_, v)| v.clone())
            .or_else(|| cli.config.as_ref().map(|p| p.display().to_string()));
        if let Some(path) = config_path {
            for (k, v) in read_config(Path::new(&path))? {
                s.apply(&k, Some(v), local)?;
            }
        }
        if let Some(e) = cli.engine {
            s.engine = e;
        }
        if let Some(n) = cli.samples {
            s.samples = n;
        }
        if let Some(seed) = cli.seed {
            s.seed = seed;
        }
        if let Some(t) = cli.tol {
            s.tol = t;
        }
        s.json |= cli.json;
        for (k, v) in trailing {
            s.apply(&k, v, local)?;
        }
        s.validate()?;
        Ok(s)
    }

    fn apply(&mut self, key: &str, value: Option<String>, local: &[&str]) -> Result<(), CliError> {
        let need = |v: Option<String>| v.ok_or_else(|| CliError::usage(format!("--{key} needs a value")));
        match key {
            "config" => {}
            "json" => {
                self.json = match value.as_deref() {
                    None | Some("true") | Some("1") => true,
                    Some("false") | Some("0") => false,
                    Some(other) => return Err(CliError::usage(format!("json must be true or false, got `{other}`"))),
                }
            }
            "seed" => self.seed = parse_number(key, &need(value)?)?,
            "samples" => self.samples = parse_number(key, &need(value)?)?,
            "tol" => self.tol = parse_number(key, &need(value)?)?,
            "engine" => self.engine = need(value)?.parse()?,
            k if local.contains(&k) => self.extra.push((k.to_string(), value)),
            k => {
                let v = need(value)?;
                self.params.retain(|(name, _)| name != k);
                self.params.push((k.to_string(), v));
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.samples < 1 {
            return Err(CliError::usage("samples must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::usage(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            engine: self.engine,
            samples: self.samples,
            seed: self.seed,
            rel_tol: self.tol,
            ..RunOptions::default()
        }
    }

    /// Values of command-specific option `key`, in order.
    pub fn extra_values<'a>(&'a self, key: &'a str) -> impl Iterator<Item = Option<&'a str>> + 'a {
        self.extra.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_deref())
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("--{key}: cannot parse `{v}`")))
}

/// Splits `--name value`, `--name=value` and bare flags.
pub fn split_options(rest: &[String]) -> Result<Vec<(String, Option<String>)>, CliError> {
    let mut out = Vec::new();
    let mut it = rest.iter().peekable();
    while let Some(tok) = it.next() {
        let body = match tok.as_str() {
            "-o" => Some("output"),
            t => t.strip_prefix("--"),
        };
        let Some(body) = body else {
            return Err(CliError::usage(format!("unexpected argument `{tok}` (parameters are --name value)")));
        };
        if body.is_empty() {
            continue;
        }
        if let Some((k, v)) = body.split_once('=') {
            out.push((k.to_string(), Some(v.to_string())));
            continue;
        }
        let takes_value = !FLAGS.contains(&body);
        let value = match it.peek() {
            Some(next) if takes_value && !is_option(next) => it.next().cloned(),
            _ if takes_value => return Err(CliError::usage(format!("--{body} needs a value"))),
            _ => None,
        };
        out.push((body.to_string(), value));
    }
    Ok(out)
}

/// `--x` starts an option; `-3` or `-0.5,1` is a value.
fn is_option(tok: &str) -> bool {
    tok.starts_with("--") || tok == "-o"
}

/// Reads a flat key=value file. Blank lines and `#` comments are skipped.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!("config line {}: expected key=value", lineno + 1)));
        };
        let k = k.trim();
        if k.is_empty() {
            return Err(CliError::usage(format!("config line {}: empty key", lineno + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn options_and_negative_values() {
        let o = split_options(&strings(&["--alpha", "-2.5", "--s=1,0.2", "--json", "--beta", "3"])).unwrap();
        assert_eq!(
            o,
            vec![
                ("alpha".into(), Some("-2.5".into())),
                ("s".into(), Some("1,0.2".into())),
                ("json".into(), None),
                ("beta".into(), Some("3".into())),
            ]
        );
        assert!(split_options(&strings(&["alpha", "2"])).is_err());
        assert!(split_options(&strings(&["--alpha"])).is_err());
        assert_eq!(split_options(&strings(&["-o", "t.csv"])).unwrap(), vec![("output".into(), Some("t.csv".into()))]);
    }

    #[test]
    fn config_format() {
        let c = parse_config("# run\nseed = 7\n\nalpha=2\n").unwrap();
        assert_eq!(c, vec![("seed".into(), "7".into()), ("alpha".into(), "2".into())]);
        assert!(parse_config("seed 7").is_err());
        assert!(parse_config("=7").is_err());
    }
}
