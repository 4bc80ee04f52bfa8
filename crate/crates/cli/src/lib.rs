//! Command-line verbs and the local HTTP service around `satmod`.

use std::fmt;
use std::path::Path;

use satmod::{catalog, ExchangeMatrix};

pub mod cli;
pub mod service;

/// Exit status for a relation that is not a trivial loop.
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
/// Exit status for malformed input and other errors.
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT_ERROR,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<satmod::Error> for Failure {
    fn from(e: satmod::Error) -> Self {
        Failure::input(e.to_string())
    }
}

/// Reads a file, naming it in the error.
pub fn read_text(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))
}

/// Quiver from a catalog name or a JSON file. Parse errors are prefixed by
/// the file name and carry line and column.
pub fn load_quiver(arg: &str) -> Result<ExchangeMatrix, Failure> {
    if let Some(m) = catalog::get(arg) {
        if !Path::new(arg).exists() {
            return Ok(m);
        }
    }
    let text = read_text(arg)?;
    ExchangeMatrix::from_json_str(&text).map_err(|e| Failure::input(format!("{arg}: {e}")))
}
