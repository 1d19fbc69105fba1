use std::fmt;

use manifold_tv::{Error, ErrorClass};
use serde_json::{Map, Value};

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Usage => EXIT_USAGE,
            ErrorClass::Data => EXIT_DATA,
            ErrorClass::Numerical => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Resolved parameters and results of one run.
pub struct Report {
    command: &'static str,
    params: Map<String, Value>,
    results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self { command, params: Map::new(), results: Map::new() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), value.into());
        self
    }

    pub fn print(&self, json: bool) {
        if json {
            let doc = serde_json::json!({
                "command": self.command,
                "params": self.params,
                "results": self.results,
            });
            println!("{doc}");
            return;
        }
        println!("manifold-tv {}", self.command);
        for (k, v) in &self.params {
            println!("  {k} = {}", plain(v));
        }
        for (k, v) in &self.results {
            println!("{k}: {}", plain(v));
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
