//! Parsing of scalar values and grids given on the command line.
//!
//! A grid is either `start:stop:points` (endpoints included) or a comma
//! separated list. Values may be written with `pi`, e.g. `pi/2` or `0.25pi`.

use std::f64::consts::PI;

use lscat_core::limits::linspace;

use crate::CliError;

pub fn parse_value(raw: &str) -> Result<f64, CliError> {
    let s = raw.trim();
    let bad = || CliError::Usage(format!("cannot parse {raw:?} as a number"));
    let value = if let Some(rest) = s.strip_prefix("pi") {
        match rest.strip_prefix('/') {
            Some(div) => PI / div.trim().parse::<f64>().map_err(|_| bad())?,
            None if rest.is_empty() => PI,
            None => return Err(bad()),
        }
    } else if let Some(coef) = s.strip_suffix("pi") {
        coef.trim().trim_end_matches('*').parse::<f64>().map_err(|_| bad())? * PI
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn parse_grid(raw: &str) -> Result<Vec<f64>, CliError> {
    let s = raw.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(CliError::Usage(format!("range {raw:?} must be start:stop:points")));
        };
        let points: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad point count in {raw:?}")))?;
        if points == 0 {
            return Err(CliError::Usage(format!("range {raw:?} has no points")));
        }
        let (lo, hi) = (parse_value(lo)?, parse_value(hi)?);
        return Ok(linspace(lo, hi, points));
    }
    let values = s.split(',').map(parse_value).collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    Ok(values)
}

pub fn parse_counts(raw: &str) -> Result<Vec<usize>, CliError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("expected a positive integer, got {s:?}")))
        })
        .collect()
}
