//! Resolution of flags, environment and an optional TOML file into one
//! validated [`ExperimentConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{CommonArgs, Engine, Format, Mode};

pub const MAX_MOMENTS: usize = 10;
pub const DEFAULT_MOMENTS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Point {
    pub x: u64,
    pub y: u64,
}

/// Everything that shapes an experiment's output, plus where to run it.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub points: Vec<Point>,
    pub fixed_u: Option<f64>,
    pub trunc_exponent: Option<f64>,
    pub moments: usize,
    pub seed: u64,
    pub format: Format,
    pub mode: Mode,
    pub engine: Engine,
    /// Subcommand-specific settings.
    pub extra: BTreeMap<String, serde_json::Value>,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

/// A rejected setting, with the file line when it came from `--config`.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<(PathBuf, usize)>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: `{}`", self.field)?;
        if let Some((path, line)) = &self.line {
            write!(f, " ({}:{line})", path.display())?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

/// Settings read from the TOML file, each remembered with its line.
struct FileSettings {
    path: PathBuf,
    text: String,
    table: toml::Table,
}

impl FileSettings {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            field: "config".into(),
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
            ConfigError {
                field: "config".into(),
                line: line.map(|l| (path.to_path_buf(), l)),
                message: e.message().to_string(),
            }
        })?;
        Ok(FileSettings {
            path: path.to_path_buf(),
            text,
            table,
        })
    }

    fn line_of(&self, key: &str) -> Option<(PathBuf, usize)> {
        self.text.lines().enumerate().find_map(|(i, l)| {
            let rest = l.trim_start().strip_prefix(key)?;
            rest.trim_start()
                .starts_with('=')
                .then(|| (self.path.clone(), i + 1))
        })
    }

    fn error(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            field: key.into(),
            line: self.line_of(key),
            message: message.into(),
        }
    }

    /// A value as the string a flag would carry; arrays become comma lists.
    fn string(&self, key: &str) -> Result<Option<String>> {
        let Some(v) = self.table.get(key) else {
            return Ok(None);
        };
        let scalar = |v: &toml::Value| match v {
            toml::Value::String(s) => Ok(s.clone()),
            toml::Value::Integer(i) => Ok(i.to_string()),
            toml::Value::Float(f) => Ok(f.to_string()),
            _ => Err(self.error(key, "expected a number or string")),
        };
        match v {
            toml::Value::Array(items) => Ok(Some(
                items.iter().map(scalar).collect::<Result<Vec<_>>>()?.join(","),
            )),
            other => scalar(other).map(Some),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(f)) => Ok(Some(*f)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(self.error(key, "expected a number")),
        }
    }

    fn integer(&self, key: &str) -> Result<Option<u64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(self.error(key, "expected a nonnegative integer")),
        }
    }

    fn choice<T: clap::ValueEnum>(&self, key: &str) -> Result<Option<T>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => T::from_str(s, true)
                .map(Some)
                .map_err(|_| self.error(key, format!("unknown value {s:?}"))),
            Some(_) => Err(self.error(key, "expected a string")),
        }
    }

    fn check_keys(&self) -> Result<()> {
        const KNOWN: [&str; 13] = [
            "x",
            "y",
            "x_grid",
            "y_grid",
            "fixed_u",
            "trunc_exponent",
            "moments",
            "seed",
            "threads",
            "format",
            "cache_dir",
            "mode",
            "engine",
        ];
        match self.table.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            Some(k) => Err(self.error(k, "unknown setting")),
            None => Ok(()),
        }
    }
}

/// Parses `100000000`, `1e8`, `10^8` or `1_000_000`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    if let Some((b, e)) = t.split_once('^') {
        let base: u64 = b.trim().parse().map_err(|_| format!("bad base in {s:?}"))?;
        let exp: u32 = e.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| format!("{s:?} overflows 64 bits"));
    }
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f < 1.8e19) {
        return Err(format!("{s:?} is not a nonnegative integer"));
    }
    Ok(f as u64)
}

fn parse_list(field: &str, s: &str, line: Option<(PathBuf, usize)>) -> Result<Vec<u64>> {
    let values: std::result::Result<Vec<u64>, String> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_count)
        .collect();
    let values = values.map_err(|message| ConfigError {
        field: field.into(),
        line: line.clone(),
        message,
    })?;
    if values.is_empty() {
        return Err(ConfigError {
            field: field.into(),
            line,
            message: "grid is empty".into(),
        });
    }
    Ok(values)
}

fn plain(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.into(),
        line: None,
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn resolve(args: &CommonArgs, extra: BTreeMap<String, serde_json::Value>) -> Result<Self> {
        let file = args.config.as_deref().map(FileSettings::load).transpose()?;
        if let Some(f) = &file {
            f.check_keys()?;
        }
        let line = |key: &str| file.as_ref().and_then(|f| f.line_of(key));

        // Flag (or environment) first, then the file.
        macro_rules! pick {
            ($flag:expr, $key:literal, $getter:ident) => {
                match $flag.clone() {
                    Some(v) => Some(v),
                    None => match &file {
                        Some(f) => f.$getter($key)?,
                        None => None,
                    },
                }
            };
        }
        let x: Option<String> = pick!(args.x, "x", string);
        let y: Option<String> = pick!(args.y, "y", string);
        let x_grid: Option<String> = pick!(args.x_grid, "x_grid", string);
        let y_grid: Option<String> = pick!(args.y_grid, "y_grid", string);
        let fixed_u: Option<f64> = pick!(args.fixed_u, "fixed_u", float);
        let trunc_exponent: Option<f64> = pick!(args.trunc_exponent, "trunc_exponent", float);
        let moments = match args.moments {
            Some(m) => Some(m as u64),
            None => file.as_ref().map(|f| f.integer("moments")).transpose()?.flatten(),
        };
        let seed: Option<u64> = pick!(args.seed, "seed", integer);
        let threads = match args.threads {
            Some(t) => Some(t as u64),
            None => file.as_ref().map(|f| f.integer("threads")).transpose()?.flatten(),
        };
        let format: Option<Format> = pick!(args.format, "format", choice);
        let mode: Option<Mode> = pick!(args.mode, "mode", choice);
        let engine: Option<Engine> = pick!(args.engine, "engine", choice);
        let cache_dir = args.cache_dir.clone().or(file
            .as_ref()
            .map(|f| f.string("cache_dir"))
            .transpose()?
            .flatten()
            .map(PathBuf::from));

        let ys = match (&y_grid, &y) {
            (Some(g), _) => parse_list("y_grid", g, line("y_grid"))?,
            (None, Some(v)) => parse_list("y", v, line("y"))?,
            (None, None) => return Err(plain("y", "no y given (use --y or --y-grid)")),
        };
        let points: Vec<Point> = if let Some(u) = fixed_u {
            if !(u.is_finite() && u >= 1.0) {
                return Err(ConfigError {
                    field: "fixed_u".into(),
                    line: line("fixed_u"),
                    message: format!("u must be at least 1, got {u}"),
                });
            }
            if x.is_some() || x_grid.is_some() {
                return Err(plain("fixed_u", "cannot be combined with --x or --x-grid"));
            }
            ys.iter()
                .map(|&y| {
                    let x = (y as f64).powf(u).round();
                    if x >= 1.8e19 {
                        Err(plain("fixed_u", format!("y^u overflows 64 bits for y = {y}")))
                    } else {
                        Ok(Point { x: x as u64, y })
                    }
                })
                .collect::<Result<_>>()?
        } else {
            let xs = match (&x_grid, &x) {
                (Some(g), _) => parse_list("x_grid", g, line("x_grid"))?,
                (None, Some(v)) => parse_list("x", v, line("x"))?,
                (None, None) => return Err(plain("x", "no x given (use --x, --x-grid or --fixed-u)")),
            };
            xs.iter()
                .flat_map(|&x| ys.iter().map(move |&y| Point { x, y }))
                .collect()
        };
        for p in &points {
            if p.y < 2 {
                let key = if y_grid.is_some() { "y_grid" } else { "y" };
                return Err(ConfigError {
                    field: key.into(),
                    line: line(key),
                    message: format!("y must be at least 2, got {}", p.y),
                });
            }
            if p.x < p.y {
                let key = if x_grid.is_some() { "x_grid" } else { "x" };
                return Err(ConfigError {
                    field: key.into(),
                    line: line(key),
                    message: format!("need x >= y, got x = {} < y = {}", p.x, p.y),
                });
            }
        }
        if let Some(t) = trunc_exponent {
            if !(t > 0.0 && t <= 1.0) {
                return Err(ConfigError {
                    field: "trunc_exponent".into(),
                    line: line("trunc_exponent"),
                    message: format!("must lie in (0, 1], got {t}"),
                });
            }
        }
        let moments = moments.unwrap_or(DEFAULT_MOMENTS as u64) as usize;
        if !(1..=MAX_MOMENTS).contains(&moments) {
            return Err(ConfigError {
                field: "moments".into(),
                line: line("moments"),
                message: format!("K must lie in 1..={MAX_MOMENTS}, got {moments}"),
            });
        }
        if threads == Some(0) {
            return Err(ConfigError {
                field: "threads".into(),
                line: line("threads"),
                message: "need at least one thread".into(),
            });
        }
        Ok(ExperimentConfig {
            points,
            fixed_u,
            trunc_exponent,
            moments,
            seed: seed.unwrap_or(0),
            format: format.unwrap_or(Format::Json),
            mode: mode.unwrap_or(Mode::Exact),
            engine: engine.unwrap_or(Engine::Auto),
            extra,
            threads: threads.map(|t| t as usize),
            cache_dir,
        })
    }

    /// SHA-256 over the canonical JSON of every output-affecting field.
    pub fn hash(&self, command: &str) -> String {
        let body = serde_json::to_string(&(command, self)).expect("config serialises");
        let digest = Sha256::digest(body.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> CommonArgs {
        CommonArgs::default()
    }

    #[test]
    fn number_forms() {
        assert_eq!(parse_count("100000000"), Ok(100_000_000));
        assert_eq!(parse_count("1e8"), Ok(100_000_000));
        assert_eq!(parse_count("10^8"), Ok(100_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("10^30").is_err());
        assert!(parse_count("abc").is_err());
    }

    #[test]
    fn fixed_u_grid() {
        let a = CommonArgs {
            y_grid: Some("1e3,1e4".into()),
            fixed_u: Some(2.0),
            ..args()
        };
        let c = ExperimentConfig::resolve(&a, BTreeMap::new()).unwrap();
        assert_eq!(
            c.points,
            vec![Point { x: 1_000_000, y: 1000 }, Point { x: 100_000_000, y: 10_000 }]
        );
    }

    #[test]
    fn rejects_x_below_y() {
        let a = CommonArgs {
            x: Some("10".into()),
            y: Some("100".into()),
            ..args()
        };
        let e = ExperimentConfig::resolve(&a, BTreeMap::new()).unwrap_err();
        assert_eq!(e.field, "x");
    }

    #[test]
    fn moment_cap() {
        let a = CommonArgs {
            x: Some("100".into()),
            y: Some("10".into()),
            moments: Some(11),
            ..args()
        };
        assert_eq!(ExperimentConfig::resolve(&a, BTreeMap::new()).unwrap_err().field, "moments");
    }

    #[test]
    fn file_values_and_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "# experiment\nx = \"1e6\"\ny_grid = [100, 1000]\nmoments = 12\n").unwrap();
        let a = CommonArgs {
            config: Some(path.clone()),
            ..args()
        };
        let e = ExperimentConfig::resolve(&a, BTreeMap::new()).unwrap_err();
        assert_eq!(e.field, "moments");
        assert_eq!(e.line, Some((path.clone(), 4)));

        let a = CommonArgs {
            config: Some(path),
            moments: Some(4),
            ..args()
        };
        let c = ExperimentConfig::resolve(&a, BTreeMap::new()).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.moments, 4);
    }

    #[test]
    fn hash_tracks_output_fields_only() {
        let base = CommonArgs {
            x: Some("1e6".into()),
            y: Some("1e3".into()),
            ..args()
        };
        let h = |a: &CommonArgs| ExperimentConfig::resolve(a, BTreeMap::new()).unwrap().hash("count");
        let same = CommonArgs {
            threads: Some(3),
            ..base.clone()
        };
        let other = CommonArgs {
            seed: Some(9),
            ..base.clone()
        };
        assert_eq!(h(&base), h(&same));
        assert_ne!(h(&base), h(&other));
        let c = ExperimentConfig::resolve(&base, BTreeMap::new()).unwrap();
        assert_ne!(c.hash("count"), c.hash("saddle"));
    }
}
