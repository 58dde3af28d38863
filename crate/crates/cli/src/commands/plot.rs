//! `repulse plot`: render a CSV table as an SVG scatter or line chart.

use clap::{Args as ClapArgs, ValueEnum};
use std::path::PathBuf;

use crate::common::write_text;
use crate::errors::{input_err, CliResult};
use crate::svg;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    /// Columns: x, y, and an optional integer class column for color.
    Scatter,
    /// Columns: x, then one numeric series per remaining column.
    Lines,
}

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Input CSV with a header row.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

fn read_table(path: &PathBuf) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        let row: Vec<f64> = record
            .iter()
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|_| {
                    input_err(format!("{}: value '{tok}' is not numeric", path.display()))
                })
            })
            .collect::<CliResult<_>>()?;
        rows.push(row);
    }
    Ok((headers, rows))
}

pub fn run(args: &Args) -> CliResult<()> {
    eprintln!(
        "[config] plot input={} kind={:?} out={}",
        args.input.display(),
        args.kind,
        args.out.display()
    );
    let (headers, rows) = read_table(&args.input)?;
    if rows.is_empty() {
        return Err(input_err(format!(
            "{}: no data rows to plot",
            args.input.display()
        )));
    }
    let content = match args.kind {
        Kind::Scatter => {
            if !(2..=3).contains(&headers.len()) {
                return Err(input_err(format!(
                    "scatter needs 2 columns (x, y) plus an optional class column, found {}",
                    headers.len()
                )));
            }
            let points: Vec<(f64, f64, usize)> = rows
                .iter()
                .map(|row| {
                    let class = if row.len() > 2 {
                        row[2].max(0.0) as usize
                    } else {
                        0
                    };
                    (row[0], row[1], class)
                })
                .collect();
            svg::scatter(&points, &headers[0], &headers[1])
        }
        Kind::Lines => {
            if headers.len() < 2 {
                return Err(input_err(format!(
                    "lines needs an x column plus at least one series, found {} column(s)",
                    headers.len()
                )));
            }
            let x: Vec<f64> = rows.iter().map(|row| row[0]).collect();
            let series: Vec<(String, Vec<f64>)> = (1..headers.len())
                .map(|col| {
                    (
                        headers[col].clone(),
                        rows.iter().map(|row| row[col]).collect(),
                    )
                })
                .collect();
            svg::lines(&x, &series, &headers[0])
        }
    };
    write_text(&args.out, &content)
}
