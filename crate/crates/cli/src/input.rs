use std::io::Read;

use plane_sheaves::exact::Form;
use plane_sheaves::{PointConfig, Presentation};
use serde::Deserialize;

use crate::Failure;

/// `-` reads stdin, text starting with `{` is inline JSON, anything else a path.
pub fn read(input: &str) -> Result<String, Failure> {
    let trimmed = input.trim_start();
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::new(2, format!("stdin: {}", e)))?;
        Ok(s)
    } else if trimmed.starts_with('{') {
        Ok(input.to_string())
    } else {
        std::fs::read_to_string(input).map_err(|e| Failure::new(2, format!("{}: {}", input, e)))
    }
}

pub fn presentation(input: &str) -> Result<Presentation, Failure> {
    Ok(Presentation::from_json(&read(input)?)?)
}

pub fn points(input: &str) -> Result<PointConfig, Failure> {
    Ok(PointConfig::from_json(&read(input)?)?)
}

#[derive(Deserialize)]
struct LinearRows {
    rows: Vec<Vec<String>>,
}

pub fn linear_matrix(input: &str) -> Result<Vec<Vec<Form>>, Failure> {
    let text = read(input)?;
    let m: LinearRows = serde_json::from_str(&text).map_err(|e| Failure::new(2, e.to_string()))?;
    let mut out = Vec::new();
    for row in &m.rows {
        let mut r = Vec::new();
        for s in row {
            r.push(plane_sheaves::exact::parse_form(s, Some(1))?);
        }
        out.push(r);
    }
    Ok(out)
}
