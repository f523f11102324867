//! `batch`: one fiber check per grid line. Lines read `q N a_1;...;a_n`;
//! blank lines and lines starting with `#` are skipped.

use std::path::Path;

use serde::Serialize;

use smyth::engine::{check_criteria, fiber_table};

use crate::args::{Common, Format};
use crate::output::{self, Failure, INPUT, NEGATIVE, OK};
use crate::run::{fiber_formula, parse_fqt, search_config};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Error,
}

#[derive(Debug, Serialize)]
pub struct Row {
    line: usize,
    q: String,
    #[serde(rename = "N")]
    n_box: String,
    coeffs: String,
    status: Status,
    formula: Option<u128>,
    fiber_min: Option<u64>,
    fiber_max: Option<u64>,
    message: String,
}

#[derive(Serialize)]
struct Summary<'a> {
    rows: &'a [Row],
    not_applicable: usize,
    failed: usize,
    errors: usize,
}

fn run_row(line: usize, text: &str, common: &Common) -> Row {
    let mut parts = text.split_whitespace();
    let q = parts.next().unwrap_or_default().to_string();
    let n_box = parts.next().unwrap_or_default().to_string();
    let coeffs = parts.collect::<Vec<_>>().join("");
    let mut row = Row {
        line,
        q: q.clone(),
        n_box: n_box.clone(),
        coeffs: coeffs.clone(),
        status: Status::Error,
        formula: None,
        fiber_min: None,
        fiber_max: None,
        message: String::new(),
    };
    let parsed = (|| -> Result<_, Failure> {
        let q: u64 = q.parse().map_err(|e| Failure::input(format!("q {q:?}: {e}")))?;
        let n_box: usize = n_box.parse().map_err(|e| Failure::input(format!("N {n_box:?}: {e}")))?;
        if coeffs.is_empty() {
            return Err(Failure::input("missing coefficients"));
        }
        Ok((parse_fqt(q, &coeffs)?, n_box))
    })();
    let (a, n_box) = match parsed {
        Ok(v) => v,
        Err(e) => {
            row.message = e.message;
            return row;
        }
    };
    if let Some(w) = check_criteria(&a).witness {
        row.status = Status::NotApplicable;
        row.message = format!("criteria fail: {}", serde_json::to_string(&w).expect("serializes"));
        return row;
    }
    row.formula = fiber_formula(&a, n_box);
    match fiber_table(&a, n_box, &search_config(common)) {
        Ok(table) => {
            let all = table.iter().flatten();
            row.fiber_min = all.clone().min().copied();
            row.fiber_max = all.max().copied();
            let ok = row.formula.is_some()
                && row.fiber_min.map(u128::from) == row.formula
                && row.fiber_max.map(u128::from) == row.formula;
            row.status = if ok { Status::Pass } else { Status::Fail };
        }
        Err(e) => row.message = e.to_string(),
    }
    row
}

pub fn run(path: &Path, common: &Common) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let rows: Vec<Row> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| run_row(i + 1, l, common))
        .collect();
    if rows.is_empty() {
        return Err(Failure::input(format!("{}: grid has no rows", path.display())));
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let (not_applicable, failed, errors) = (count(Status::NotApplicable), count(Status::Fail), count(Status::Error));
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => print!("{}", output::csv(&rows)?),
        Format::Json => println!("{}", output::json(&Summary { rows: &rows, not_applicable, failed, errors })),
        Format::Text => {
            for r in &rows {
                println!("line {}: {:?} {}", r.line, r.status, r.message);
            }
        }
    }
    for r in rows.iter().filter(|r| r.status == Status::Error) {
        eprintln!("line {}: {}", r.line, r.message);
    }
    if not_applicable > 0 {
        eprintln!("flag: {not_applicable} row(s) not applicable (criteria fail)");
    }
    Ok(if errors > 0 {
        INPUT
    } else if failed > 0 {
        NEGATIVE
    } else {
        OK
    })
}
