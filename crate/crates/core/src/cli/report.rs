use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(CliError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Output of one command. `results` holds the structured payload; `csv` the
/// tabular view, when the command has one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_echo: String,
    pub results: Value,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub csv: Option<String>,
    #[serde(skip)]
    pub summary: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs_echo: String) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_echo,
            results: Value::Null,
            warnings: Vec::new(),
            csv: None,
            summary: Vec::new(),
        }
    }
}

/// Serializes a report. Output is deterministic: maps are ordered and floats
/// print in shortest round-trip form.
pub fn emit_report(report: &RunReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => report
            .csv
            .clone()
            .ok_or_else(|| CliError::UnsupportedFormat(format!("csv (no tabular output for '{}')", report.command))),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "command: {}", report.command).unwrap();
            for line in &report.summary {
                writeln!(s, "{line}").unwrap();
            }
            for w in &report.warnings {
                writeln!(s, "warning: {w}").unwrap();
            }
            Ok(s)
        }
    }
}
