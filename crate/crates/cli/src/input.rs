use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use signgate::Dataset;

fn parse_value(text: &str, row: usize) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| anyhow!("row {row}: `{}` is not a number", text.trim()))?;
    if !v.is_finite() {
        bail!("row {row}: value `{}` is not finite", text.trim());
    }
    Ok(v)
}

/// One statistic per line; blank lines are ignored. Rows are 1-based line numbers.
fn read_lines(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_value(l, i + 1))
        .collect()
}

/// A CSV column chosen by header name, or by 1-based position in a file
/// without a header when `column` is a number.
fn read_csv_column(text: &str, column: &str) -> Result<Vec<f64>> {
    let by_index = column.parse::<usize>().ok();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(by_index.is_none())
        .from_reader(text.as_bytes());
    let (idx, first_row) = match by_index {
        Some(0) => bail!("CSV columns are numbered from 1"),
        Some(n) => (n - 1, 1),
        None => {
            let headers = reader.headers().context("cannot read CSV header")?;
            let idx = headers
                .iter()
                .position(|h| h.trim() == column)
                .ok_or_else(|| anyhow!("CSV has no column named `{column}`"))?;
            (idx, 2)
        }
    };
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let row = first_row + i;
            let rec = rec.with_context(|| format!("row {row}: malformed CSV"))?;
            let field = rec
                .get(idx)
                .ok_or_else(|| anyhow!("row {row}: no column {}", idx + 1))?;
            parse_value(field, row)
        })
        .collect()
}

pub fn read_dataset(path: &Path, csv_column: Option<&str>) -> Result<Dataset> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let values = match csv_column {
        Some(col) => read_csv_column(&text, col)?,
        None => read_lines(&text)?,
    };
    if values.is_empty() {
        bail!("{} contains no statistics", path.display());
    }
    Ok(Dataset::new(values)?)
}
