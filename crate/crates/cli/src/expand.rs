//! Polynomial feature expansion for the application pipeline.

use nalgebra::DMatrix;

use crate::CliError;

/// A column removed during expansion and the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dropped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expanded {
    pub x: DMatrix<f64>,
    pub names: Vec<String>,
    pub dropped: Vec<Dropped>,
}

/// Degree 1 keeps the columns; degree 2 appends every product `a*b` with
/// `i <= j` (squares included). Constant columns and exact duplicates of an
/// earlier column are dropped and reported.
pub fn expand_interactions(
    x: &DMatrix<f64>,
    names: &[String],
    degree: u8,
) -> Result<Expanded, CliError> {
    if !(1..=2).contains(&degree) {
        return Err(CliError::Usage(format!("degree must be 1 or 2, got {degree}")));
    }
    if names.len() != x.ncols() {
        return Err(CliError::Usage(format!(
            "{} names for {} columns",
            names.len(),
            x.ncols()
        )));
    }
    if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
        let (row, col) = (pos % x.nrows(), pos / x.nrows());
        return Err(CliError::Data(format!(
            "non-finite value in column `{}` row {}",
            names[col],
            row + 1
        )));
    }
    let n = x.nrows();
    let p = x.ncols();
    let mut raw: Vec<(String, Vec<f64>)> = (0..p)
        .map(|j| (names[j].clone(), x.column(j).iter().copied().collect()))
        .collect();
    if degree == 2 {
        for i in 0..p {
            for j in i..p {
                let col = (0..n).map(|r| x[(r, i)] * x[(r, j)]).collect();
                raw.push((format!("{}*{}", names[i], names[j]), col));
            }
        }
    }

    let mut kept: Vec<(String, Vec<f64>)> = Vec::with_capacity(raw.len());
    let mut dropped = Vec::new();
    for (name, col) in raw {
        if let Some(bad) = col.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Data(format!("column `{name}` overflows ({bad})")));
        }
        if col.iter().all(|&v| v == col[0]) {
            dropped.push(Dropped {
                name,
                reason: "constant".into(),
            });
        } else if let Some((earlier, _)) = kept.iter().find(|(_, k)| *k == col) {
            dropped.push(Dropped {
                reason: format!("duplicate of `{earlier}`"),
                name,
            });
        } else {
            kept.push((name, col));
        }
    }
    let x = DMatrix::from_fn(n, kept.len(), |r, c| kept[c].1[r]);
    let names = kept.into_iter().map(|(name, _)| name).collect();
    Ok(Expanded { x, names, dropped })
}
