//! Grid syntax for numeric flags.
//!
//! A grid is a comma-separated list of items. An item is a scalar, or
//! `start:stop:count` for `count` evenly spaced points including both ends.
//! Scalars are plain numbers or multiples of pi: `pi`, `pi/2`, `2pi/3`,
//! `0.5*pi`, `-pi/4`. Integer grids also accept `a..b` for every integer
//! from a to b inclusive.

use crate::error::CliError;

/// Largest number of points a single grid may expand to.
pub const MAX_GRID_POINTS: usize = 100_000;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number(text: &str) -> Result<f64, CliError> {
    let x: f64 = text
        .parse()
        .map_err(|_| usage(format!("`{text}` is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("`{text}` is not finite")))
    }
}

pub fn parse_scalar(text: &str) -> Result<f64, CliError> {
    let t = text.trim().to_ascii_lowercase();
    let Some(at) = t.find("pi") else {
        return number(&t);
    };
    let (coef, rest) = (t[..at].trim_end_matches('*').trim(), &t[at + 2..]);
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => number(c)?,
    };
    let denom = match rest.trim() {
        "" => 1.0,
        r => match r.strip_prefix('/') {
            Some(d) => number(d.trim())?,
            None => return Err(usage(format!("cannot read `{text}`"))),
        },
    };
    if denom == 0.0 {
        return Err(usage(format!("`{text}` divides by zero")));
    }
    Ok(coef * std::f64::consts::PI / denom)
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(usage(format!("empty item in grid `{text}`")));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(parse_scalar(x)?),
            [a, b, k] => {
                let (a, b) = (parse_scalar(a)?, parse_scalar(b)?);
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("`{k}` is not a point count")))?;
                if k == 0 || k > MAX_GRID_POINTS {
                    return Err(usage(format!(
                        "point count {k} outside 1..={MAX_GRID_POINTS}"
                    )));
                }
                if k == 1 {
                    out.push(a);
                } else {
                    let step = (b - a) / (k - 1) as f64;
                    out.extend((0..k).map(|i| if i + 1 == k { b } else { a + step * i as f64 }));
                }
            }
            _ => return Err(usage(format!("cannot read grid item `{item}`"))),
        }
        if out.len() > MAX_GRID_POINTS {
            return Err(usage(format!(
                "grid has more than {MAX_GRID_POINTS} points"
            )));
        }
    }
    Ok(out)
}

pub fn parse_count_grid(text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if let Some((a, b)) = item.split_once("..") {
            let (a, b) = (count(a)?, count(b)?);
            if b < a || b - a >= MAX_GRID_POINTS {
                return Err(usage(format!("bad range `{item}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(count(item)?);
        }
        if out.len() > MAX_GRID_POINTS {
            return Err(usage(format!(
                "grid has more than {MAX_GRID_POINTS} points"
            )));
        }
    }
    Ok(out)
}

fn count(text: &str) -> Result<usize, CliError> {
    text.trim()
        .parse()
        .map_err(|_| usage(format!("`{}` is not a nonnegative integer", text.trim())))
}

/// `key=value,key=value` with scalar values.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, f64)>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| usage(format!("expected key=value, got `{pair}`")))?;
            Ok((k.trim().to_owned(), parse_scalar(v)?))
        })
        .collect()
}
