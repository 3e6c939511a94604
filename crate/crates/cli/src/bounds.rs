//! Closed-form and eigen-derived security bounds over parameter grids.

use mistrust::bitwise::{bob_entropy, cheat_bound, min_n_for};
use mistrust::codebook::multistring_bound;
use mistrust::qmath::binary_entropy;

use crate::error::CliError;
use crate::table::{Cell, Table};

/// One row per θ:
/// θ, 1 + sin θ, H₂((1 + sin θ)/2), n − S(ρ) for each n, the smallest n
/// hiding r bits (empty when none exists), and 1 + (r₂ − 1)ε for each r₂.
/// ε defaults to sin θ.
pub fn bounds_table(
    thetas: &[f64],
    ns: &[usize],
    r: usize,
    epsilon: Option<f64>,
    r2s: &[usize],
) -> Result<Table, CliError> {
    if thetas.is_empty() || ns.is_empty() || r2s.is_empty() {
        return Err(CliError::Usage("grids must be nonempty".into()));
    }
    if let Some(e) = epsilon {
        if !(e > 0.0 && e <= 1.0) {
            return Err(CliError::Usage(format!("epsilon {e} outside (0, 1]")));
        }
    }
    let mut columns = vec![
        "theta".to_owned(),
        "cheat_bound".to_owned(),
        "entropy_per_qubit".to_owned(),
    ];
    columns.extend(ns.iter().map(|n| format!("hidden_bits_n{n}")));
    columns.push(format!("min_n_r{r}"));
    columns.extend(r2s.iter().map(|r2| format!("multistring_bound_r{r2}")));
    let mut table = Table::new(columns);
    for &theta in thetas {
        let mut row: Vec<Cell> = vec![
            theta.into(),
            cheat_bound(theta)?.into(),
            binary_entropy((1.0 + theta.sin()) / 2.0)?.into(),
        ];
        for &n in ns {
            row.push((n as f64 - bob_entropy(n, theta)?).into());
        }
        row.push(match min_n_for(r, theta) {
            Ok(n) => n.into(),
            Err(mistrust::Error::Unbounded) => Cell::Empty,
            Err(e) => return Err(e.into()),
        });
        let eps = epsilon.unwrap_or_else(|| theta.sin());
        for &r2 in r2s {
            if r2 == 0 {
                return Err(CliError::Usage("r2 values must be at least 1".into()));
            }
            row.push(multistring_bound(r2, eps).into());
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn right_angle_row() {
        let t = bounds_table(&[FRAC_PI_2], &[1, 4], 1, None, &[1, 3]).unwrap();
        assert_eq!(t.rows.len(), 1);
        let row = &t.rows[0];
        assert_eq!(row[1], Cell::Float(2.0));
        assert_eq!(row[2], Cell::Float(0.0));
        assert_eq!(row[3], Cell::Float(1.0));
        assert_eq!(row[4], Cell::Float(4.0));
        assert_eq!(row[5], Cell::Int(2));
        assert_eq!(row[6], Cell::Float(1.0));
        assert_eq!(row[7], Cell::Float(3.0));
    }

    #[test]
    fn row_per_theta_and_domain_errors() {
        let t = bounds_table(&[0.1, 0.2, 0.3], &[8], 2, Some(0.2), &[1]).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows.iter().all(|r| r.last() == Some(&Cell::Float(1.0))));
        assert!(bounds_table(&[2.0], &[8], 2, None, &[1]).is_err());
        assert!(bounds_table(&[], &[8], 2, None, &[1]).is_err());
        assert!(bounds_table(&[0.3], &[8], 2, Some(1.5), &[1]).is_err());
    }
}
