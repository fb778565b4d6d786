//! Sweep configuration files.
//!
//! ```toml
//! measures = ["beta: c=1 s=2", "atoms: (0.5, 1)"]
//! alphas = [1.0, 2.0]
//! ps = [1.0, 2.0]
//! degrees = [256, 512, 1024]
//! output = "sweep.csv"
//! format = "csv"
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::text::parse_measure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub measures: Vec<String>,
    pub alphas: Vec<f64>,
    pub ps: Vec<f64>,
    pub degrees: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ExperimentConfig {
    /// Parses and validates a TOML document. `max_degree` caps every degree.
    pub fn parse(text: &str, max_degree: usize) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map_or((1, 1), |span| line_column(text, span.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        cfg.validate(max_degree)?;
        Ok(cfg)
    }

    pub fn validate(&self, max_degree: usize) -> Result<()> {
        if self.measures.is_empty() || self.alphas.is_empty() || self.ps.is_empty() {
            return Err(Error::Input("measures, alphas and ps must be nonempty".into()));
        }
        for (i, m) in self.measures.iter().enumerate() {
            parse_measure(m).map_err(|e| Error::Input(format!("measures[{i}]: {e}")))?;
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(Error::Input(format!("alpha = {a} must be positive")));
        }
        if let Some(p) = self.ps.iter().find(|p| !(**p >= 1.0) || !p.is_finite()) {
            return Err(Error::Input(format!("p = {p} must be >= 1")));
        }
        if self.degrees.is_empty() || self.degrees.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("degrees must be nonempty and strictly ascending".into()));
        }
        if self.degrees[0] < 2 {
            return Err(Error::Input("degrees must be at least 2".into()));
        }
        let top = *self.degrees.last().unwrap();
        if top > max_degree {
            return Err(Error::Input(format!(
                "degree {top} exceeds the maximum {max_degree}"
            )));
        }
        Ok(())
    }

    pub fn parsed_measures(&self) -> Result<Vec<Measure>> {
        self.measures.iter().map(|m| parse_measure(m)).collect()
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Input(e.to_string()))
    }
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..text.floor_char_boundary(offset)];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
measures = ["beta: c=1 s=2", "atoms: (0.5, 1)"]
alphas = [1.0, 2.0]
ps = [1.0, 2.0]
degrees = [256, 512, 1024]
output = "sweep.json"
format = "json"
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::parse(GOOD, 1 << 14).unwrap();
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.parsed_measures().unwrap().len(), 2);
        let again = ExperimentConfig::parse(&cfg.to_toml().unwrap(), 1 << 14).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn format_defaults_to_csv() {
        let cfg = ExperimentConfig::parse(
            "measures = [\"beta: s=2\"]\nalphas = [1]\nps = [2.0]\ndegrees = [64]\n",
            1 << 14,
        )
        .unwrap();
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.output, None);
    }

    #[test]
    fn rejects_bad_configs() {
        let unsorted = GOOD.replace("[256, 512, 1024]", "[512, 256]");
        assert!(matches!(ExperimentConfig::parse(&unsorted, 1 << 14), Err(Error::Input(_))));
        assert!(ExperimentConfig::parse(GOOD, 512).is_err());
        let bad_measure = GOOD.replace("beta: c=1 s=2", "beta: c=1 s=-2");
        let e = ExperimentConfig::parse(&bad_measure, 1 << 14).unwrap_err();
        assert!(e.to_string().contains("measures[0]"), "{e}");
        let bad_p = GOOD.replace("ps = [1.0, 2.0]", "ps = [0.5]");
        assert!(ExperimentConfig::parse(&bad_p, 1 << 14).is_err());
        let unknown = format!("{GOOD}extra = 1\n");
        assert!(ExperimentConfig::parse(&unknown, 1 << 14).is_err());
    }

    #[test]
    fn toml_errors_have_positions() {
        let text = "measures = [\"beta: s=2\"]\nalphas = [1.0\nps = [2.0]\n";
        match ExperimentConfig::parse(text, 1 << 14).unwrap_err() {
            Error::Parse { line, .. } => assert!(line >= 2, "line {line}"),
            e => panic!("{e:?}"),
        }
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        assert_eq!(line_column("", 10), (1, 1));
    }
}
