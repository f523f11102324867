use std::path::Path;

use serde::Serialize;

use crate::args::Format;

pub const OK: i32 = 0;
pub const NEGATIVE: i32 = 1;
pub const INPUT: i32 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: INPUT, message: message.into() }
    }

    pub fn negative(message: impl Into<String>) -> Self {
        Self { code: NEGATIVE, message: message.into() }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::input(e.to_string())
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

pub fn csv<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// Prints `json` or `text`; commands without a table reject CSV.
pub fn emit<T: Serialize>(format: Option<Format>, value: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    match format.unwrap_or(Format::Json) {
        Format::Json => println!("{}", json(value)),
        Format::Text => println!("{}", text()),
        Format::Csv => return Err(Failure::input("csv output is not available for this command")),
    }
    Ok(())
}

pub fn write_to(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, format!("{body}\n")).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}
