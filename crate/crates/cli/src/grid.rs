//! Threshold grids given on the command line.

use crate::CliError;

/// Parses `start:stop:step` (inclusive) or a comma-separated list. The
/// result must be strictly ascending.
pub fn parse_grid(what: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |detail: String| CliError::Config(format!("--{what} `{text}`: {detail}"));
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| bad(e.to_string())))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step".into()));
        };
        if !(step > 0.0) || !(stop >= start) {
            return Err(bad("need step > 0 and stop >= start".into()));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(bad(format!("{count} points is too many")));
        }
        (0..count).map(|k| start + k as f64 * step).collect()
    } else {
        text.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| bad(e.to_string()))).collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite and non-empty".into()));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("values must be strictly ascending".into()));
    }
    Ok(values)
}

/// Parses a comma-separated list of element counts.
pub fn parse_counts(what: &str, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| CliError::Config(format!("--{what} `{text}`: {e}"))))
        .collect()
}
