//! Shared flag parsing and dataset loading for the subcommands.

use std::path::Path;

use repulse_core::sampling::Radius;
use repulse_core::train::LrSchedule;
use repulse_core::Dataset;

use crate::errors::{input_err, CliResult};

/// `auto` or a non-negative number.
pub fn parse_radius(raw: &str) -> CliResult<Radius> {
    if raw == "auto" {
        return Ok(Radius::Auto);
    }
    let value: f64 = raw
        .parse()
        .map_err(|_| input_err(format!("--radius must be 'auto' or a number, got '{raw}'")))?;
    Ok(Radius::Fixed(value))
}

/// Comma-separated non-negative weights.
pub fn parse_pi(raw: &str) -> CliResult<Vec<f64>> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| input_err(format!("--pi entry '{tok}' is not a number")))
        })
        .collect()
}

/// Comma-separated positive integers.
pub fn parse_usize_list(raw: &str, flag: &str) -> CliResult<Vec<usize>> {
    let values: Vec<usize> = raw
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| input_err(format!("{flag} entry '{tok}' is not a positive integer")))
        })
        .collect::<CliResult<_>>()?;
    if values.is_empty() {
        return Err(input_err(format!("{flag} must not be empty")));
    }
    Ok(values)
}

/// A constant rate (`0.1`) or a step schedule (`step:0.5,0.5,500`).
pub fn parse_lr(raw: &str) -> CliResult<LrSchedule> {
    if let Some(rest) = raw.strip_prefix("step:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(input_err(
                "--lr step schedule must be step:<initial>,<factor>,<every>",
            ));
        }
        let initial: f64 = parts[0]
            .parse()
            .map_err(|_| input_err(format!("bad step initial rate '{}'", parts[0])))?;
        let factor: f64 = parts[1]
            .parse()
            .map_err(|_| input_err(format!("bad step factor '{}'", parts[1])))?;
        let every: usize = parts[2]
            .parse()
            .map_err(|_| input_err(format!("bad step interval '{}'", parts[2])))?;
        Ok(LrSchedule::Step {
            initial,
            factor,
            every,
        })
    } else {
        let rate: f64 = raw
            .parse()
            .map_err(|_| input_err(format!("--lr must be a number or step:..., got '{raw}'")))?;
        Ok(LrSchedule::Constant(rate))
    }
}

/// Loads a dataset from a CSV path or an IDX `images:labels` path pair.
pub fn load_dataset(raw: &str, idx_limit: usize) -> CliResult<Dataset> {
    if let Some((images, labels)) = raw.split_once(':') {
        Ok(repulse_core::io::load_idx(images, labels, idx_limit)?)
    } else {
        Ok(repulse_core::io::load_csv(raw)?)
    }
}

pub fn write_text(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|e| crate::errors::write_err(path, e))
}
