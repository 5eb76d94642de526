//! The report every subcommand produces, its two renderings, and exit codes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Computed,
    Refuted,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Computed => 0,
            Status::Refuted => 1,
            Status::Unknown => 2,
        }
    }

    pub fn from_tristate<W, R>(t: &remono::TriState<W, R>) -> Self {
        match t {
            remono::TriState::Yes(_) => Status::Computed,
            remono::TriState::No(_) => Status::Refuted,
            remono::TriState::Unknown => Status::Unknown,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Computed
        } else {
            Status::Refuted
        }
    }
}

/// The machine document: one JSON object per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub result: Value,
}

/// A report plus the rows shown in human mode.
#[derive(Debug, Clone)]
pub struct Output {
    pub status: Status,
    pub result: Value,
    summary: Vec<String>,
    rows: Vec<(String, String)>,
    text: Option<String>,
}

impl Output {
    pub fn new(status: Status, result: impl Serialize) -> Self {
        let result = serde_json::to_value(result).expect("results serialize");
        Output {
            status,
            result,
            summary: Vec::new(),
            rows: Vec::new(),
            text: None,
        }
    }

    /// A line printed above the table.
    pub fn summary(mut self, line: impl Into<String>) -> Self {
        self.summary.push(line.into());
        self
    }

    pub fn row(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    pub fn with_result(mut self, result: impl Serialize) -> Self {
        self.result = serde_json::to_value(result).expect("results serialize");
        self
    }

    /// Free text printed after the table, such as a graph file.
    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn render_human(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|(k, _)| k.chars().count())
            .max()
            .unwrap_or(0);
        let mut s = String::new();
        for line in &self.summary {
            writeln!(s, "{line}").expect("writing to a string");
        }
        for (k, v) in &self.rows {
            let pad = width - k.chars().count();
            writeln!(s, "{k}{}  {v}", " ".repeat(pad)).expect("writing to a string");
        }
        if let Some(t) = &self.text {
            s.push_str(t);
            if !t.ends_with('\n') {
                s.push('\n');
            }
        }
        s
    }

    pub fn render_machine(&self, command: &str) -> String {
        let report = Report {
            command: command.to_string(),
            status: self.status,
            result: self.result.clone(),
        };
        remono::formats::to_json(&report)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Malformed input, with the file (or argument) and 1-based line when known.
    #[error("{origin}: {}{message}", if *line > 0 { format!("line {line}: ") } else { String::new() })]
    Input {
        origin: String,
        line: usize,
        message: String,
    },
    /// Well-formed input that the operation cannot accept.
    #[error("{0}")]
    Data(String),
    /// A size guard stopped the computation.
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn input(origin: impl Into<String>, line: usize, message: impl ToString) -> Self {
        CliError::Input {
            origin: origin.into(),
            line,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Input { .. } | CliError::Data(_) => 65,
            CliError::Guard(_) => 2,
        }
    }
}

pub type CliResult = Result<Output, CliError>;

/// Displays a list as `{1,2,4}`.
pub fn braces<T: ToString>(items: &[T]) -> String {
    format!(
        "{{{}}}",
        items
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )
}
