use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rug::Rational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::moments::MomentKind;
use crate::symbols::parse_decimal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Moments,
    Outbed,
    Orthopoly,
    ToeplitzSpectrum,
    Asymfit,
    Capacity,
    LandauReport,
    Selftest,
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every command. Numeric values stay strings until parsed
/// at full precision.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RawConfig {
    /// JSON file with the same keys as the long flags; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Symbol JSON: {"terms": [{"center": [x, y], "radius": r, "weight": w}]}
    #[arg(long, global = true)]
    pub symbol: Option<PathBuf>,
    /// Spectrum JSON written by toeplitz-spectrum (asymfit input).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub precision_bits: Option<String>,
    #[arg(long, global = true)]
    pub degree: Option<String>,
    /// Comma-separated truncation degrees, e.g. "10,15,20".
    #[arg(long, global = true)]
    pub degree_ladder: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// json or csv
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub memory_budget_mb: Option<String>,
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    #[arg(long, global = true)]
    pub a: Option<String>,
    /// Comma-separated λ values, e.g. "1e-5,1e-10".
    #[arg(long, global = true)]
    pub lambda_grid: Option<String>,
    /// "lo,hi"; hi may be "inf".
    #[arg(long, global = true)]
    pub interval: Option<String>,
    /// 1-based fit window "lo,hi".
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Evaluation point "x,y".
    #[arg(long, global = true)]
    pub point: Option<String>,
    /// gram, weighted-lebesgue, weighted-gaussian or fock-toeplitz
    #[arg(long, global = true)]
    pub kind: Option<String>,
}

impl RawConfig {
    /// Fields set here win over `base`.
    fn over(self, base: RawConfig) -> RawConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RawConfig { config: None, $($f: self.$f.or(base.$f)),* } };
        }
        pick!(symbol, input, precision_bits, degree, degree_ladder, out, format, memory_budget_mb, epsilon, a, lambda_grid, interval, window, point, kind)
    }
}

/// Validated job description.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: CommandName,
    pub symbol: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub precision_bits: Option<u32>,
    pub degree: Option<usize>,
    pub ladder: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub memory_budget_mb: Option<u64>,
    pub epsilon: Option<Rational>,
    pub a: Option<Rational>,
    /// Kept as text; parsed at the job's precision.
    pub lambda_grid: Option<Vec<String>>,
    pub interval: Option<(String, String)>,
    pub window: Option<(usize, usize)>,
    pub point: Option<(Rational, Rational)>,
    pub kind: Option<MomentKind>,
}

fn config_error(key: &str, value: &str, why: impl fmt::Display) -> Error {
    Error::Config(format!("--{key} {value:?}: {why}"))
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e| config_error(key, value, e))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim)
}

fn pair(key: &str, value: &str) -> Result<(String, String)> {
    match list(value).collect::<Vec<_>>()[..] {
        [x, y] if !x.is_empty() && !y.is_empty() => Ok((x.to_string(), y.to_string())),
        _ => Err(config_error(key, value, "expected two comma-separated values")),
    }
}

fn rational(key: &str, value: &str) -> Result<Rational> {
    parse_decimal(value.trim()).map_err(|e| config_error(key, value, e))
}

impl JobConfig {
    pub fn from_raw(command: CommandName, raw: RawConfig) -> Result<Self> {
        let raw = match &raw.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let file: RawConfig =
                    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                raw.over(file)
            }
            None => raw,
        };
        let ladder = raw
            .degree_ladder
            .as_deref()
            .map(|v| list(v).map(|d| integer("degree-ladder", d)).collect::<Result<Vec<usize>>>())
            .transpose()?;
        let format = match raw.format.as_deref() {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => return Err(config_error("format", other, "expected json or csv")),
        };
        let kind = raw
            .kind
            .as_deref()
            .map(|k| match k {
                "gram" => Ok(MomentKind::LebesgueGram),
                "weighted-lebesgue" => Ok(MomentKind::WeightedLebesgue),
                "weighted-gaussian" => Ok(MomentKind::WeightedGaussian),
                "fock-toeplitz" => Ok(MomentKind::FockToeplitz),
                other => Err(config_error("kind", other, "unknown moment kind")),
            })
            .transpose()?;
        let window = raw
            .window
            .as_deref()
            .map(|w| {
                let (lo, hi) = pair("window", w)?;
                Ok::<_, Error>((integer("window", &lo)?, integer("window", &hi)?))
            })
            .transpose()?;
        let point = raw
            .point
            .as_deref()
            .map(|p| {
                let (x, y) = pair("point", p)?;
                Ok::<_, Error>((rational("point", &x)?, rational("point", &y)?))
            })
            .transpose()?;
        Ok(JobConfig {
            command,
            symbol: raw.symbol,
            input: raw.input,
            precision_bits: raw.precision_bits.as_deref().map(|b| integer("precision-bits", b)).transpose()?,
            degree: raw.degree.as_deref().map(|d| integer("degree", d)).transpose()?,
            ladder,
            out: raw.out,
            format,
            memory_budget_mb: raw.memory_budget_mb.as_deref().map(|m| integer("memory-budget-mb", m)).transpose()?,
            epsilon: raw.epsilon.as_deref().map(|e| rational("epsilon", e)).transpose()?,
            a: raw.a.as_deref().map(|a| rational("a", a)).transpose()?,
            lambda_grid: raw.lambda_grid.as_deref().map(|g| list(g).map(str::to_string).collect()),
            interval: raw.interval.as_deref().map(|i| pair("interval", i)).transpose()?,
            window,
            point,
            kind,
        })
    }

    pub fn require<'a, T>(&self, value: &'a Option<T>, key: &str) -> Result<&'a T> {
        value.as_ref().ok_or_else(|| Error::Config(format!("{} needs --{key}", self.command)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_file_keys() {
        let ok: RawConfig = serde_json::from_str(r#"{"degree": "12", "lambda-grid": "1e-3,1e-6"}"#).unwrap();
        assert_eq!(ok.degree.as_deref(), Some("12"));
        assert!(serde_json::from_str::<RawConfig>(r#"{"degre": "12"}"#).is_err());
    }

    #[test]
    fn parsing() {
        let raw = RawConfig {
            degree_ladder: Some("10, 15,20".into()),
            epsilon: Some("0.1".into()),
            interval: Some("0.5,inf".into()),
            ..Default::default()
        };
        let job = JobConfig::from_raw(CommandName::ToeplitzSpectrum, raw).unwrap();
        assert_eq!(job.ladder, Some(vec![10, 15, 20]));
        assert_eq!(job.epsilon, Some(Rational::from((1, 10))));
        assert_eq!(job.interval, Some(("0.5".into(), "inf".into())));
        let bad = RawConfig { format: Some("xml".into()), ..Default::default() };
        assert!(matches!(JobConfig::from_raw(CommandName::Moments, bad), Err(Error::Config(_))));
        let bad = RawConfig { degree: Some("-1".into()), ..Default::default() };
        assert_eq!(JobConfig::from_raw(CommandName::Moments, bad).unwrap_err().exit_code(), 2);
    }
}
