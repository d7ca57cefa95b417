//! CLI error envelope: classifies failures for the exit-code contract and
//! renders them as structured JSON on standard error.

use std::fmt;

/// Failure classes. `Config` and `Domain` come from the configuration
/// document (exit code 2); `Numerical` and `Io` happen at run time
/// (exit code 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Domain,
    Numerical,
    Io,
}

impl ErrorClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorClass::Config => "config",
            ErrorClass::Domain => "domain",
            ErrorClass::Numerical => "numerical",
            ErrorClass::Io => "io",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
    /// 1-based config line for syntax errors.
    pub line: Option<usize>,
    /// Offending field for domain errors.
    pub field: Option<String>,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Config,
            message: message.into(),
            line: None,
            field: None,
        }
    }

    pub fn config_at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            ..Self::config(message)
        }
    }

    pub fn domain(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Domain,
            message: message.into(),
            line: None,
            field: Some(field.into()),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Numerical,
            message: message.into(),
            line: None,
            field: None,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Io,
            message: message.into(),
            line: None,
            field: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Config | ErrorClass::Domain => 2,
            ErrorClass::Numerical | ErrorClass::Io => 1,
        }
    }

    /// Single-line JSON rendering for standard error.
    pub fn to_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "class".into(),
            serde_json::Value::String(self.class.as_str().into()),
        );
        obj.insert(
            "message".into(),
            serde_json::Value::String(self.message.clone()),
        );
        if let Some(line) = self.line {
            obj.insert("line".into(), serde_json::Value::from(line));
        }
        if let Some(field) = &self.field {
            obj.insert("field".into(), serde_json::Value::String(field.clone()));
        }
        serde_json::Value::Object(obj).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.class.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<optomech_core::Error> for CliError {
    fn from(err: optomech_core::Error) -> Self {
        use optomech_core::Error as E;
        match &err {
            E::InvalidParameter { field, .. } => CliError::domain(*field, err.to_string()),
            E::Domain { .. } => CliError {
                class: ErrorClass::Domain,
                message: err.to_string(),
                line: None,
                field: None,
            },
            E::UnknownPreset { .. } => CliError::config(err.to_string()),
            _ => CliError::numerical(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::io(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::io(format!("serialization failed: {err}"))
    }
}
