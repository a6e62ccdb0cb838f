//! Wide-format curve files: the first column holds the argument `t`, the remaining
//! columns one curve each, or blocks of `dim` adjacent columns for multivariate curves.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use depthkit::functional::{Curve, FunctionalSample};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub sample: FunctionalSample,
    /// Header of the first column of each curve block.
    pub names: Vec<String>,
}

pub fn load_curves(path: &Path, dim: usize) -> CliResult<CurveSet> {
    let mut text = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut text))
        .map_err(|e| CliError::io(path, e))?;
    parse_curves(&text[..], dim, &path.display().to_string())
}

pub fn parse_curves(input: impl Read, dim: usize, name: &str) -> CliResult<CurveSet> {
    if dim == 0 {
        return Err(CliError::Usage("curve dimension must be positive".into()));
    }
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Parse {
            row: 1,
            column: 0,
            reason: e.to_string(),
        })?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    let width = header.len();
    if width < 2 || !(width - 1).is_multiple_of(dim) {
        return Err(CliError::Parse {
            row: 1,
            column: 0,
            reason: format!("{} value columns do not form blocks of {dim}", width.saturating_sub(1)),
        });
    }
    let count = (width - 1) / dim;
    let mut grid = Vec::new();
    let mut rows: Vec<Vec<Vec<f64>>> = vec![Vec::new(); count];
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Parse {
            row: e.position().map_or(0, |p| p.line() as usize),
            column: 0,
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != width {
            return Err(CliError::Parse {
                row: line,
                column: 0,
                reason: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        let values: Vec<f64> = rec
            .iter()
            .enumerate()
            .map(|(c, f)| match f.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Parse {
                    row: line,
                    column: c + 1,
                    reason: format!("'{f}' is not a finite number"),
                }),
            })
            .collect::<CliResult<_>>()?;
        grid.push(values[0]);
        for (k, block) in values[1..].chunks(dim).enumerate() {
            rows[k].push(block.to_vec());
        }
    }
    if grid.is_empty() {
        return Err(CliError::EmptyDataset(name.to_string()));
    }
    let curves = rows.into_iter().map(Curve::new).collect::<Result<Vec<_>, _>>()?;
    let names = (0..count).map(|k| header[1 + k * dim].clone()).collect();
    Ok(CurveSet {
        sample: FunctionalSample::new(grid, curves)?,
        names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_curves() {
        let set = parse_curves("t,a,b\n0,1,2\n0.5,3,4\n1,5,6\n".as_bytes(), 1, "t").unwrap();
        assert_eq!(set.names, ["a", "b"]);
        assert_eq!(set.sample.grid(), &[0.0, 0.5, 1.0]);
        assert_eq!(set.sample.curves()[1], Curve::scalar(&[2.0, 4.0, 6.0]).unwrap());
    }

    #[test]
    fn bivariate_blocks() {
        let set = parse_curves("t,a1,a2,b1,b2\n0,1,2,3,4\n1,5,6,7,8\n".as_bytes(), 2, "t").unwrap();
        assert_eq!(set.names, ["a1", "b1"]);
        assert_eq!(set.sample.curves()[1].at(1), &[7.0, 8.0]);
        let e = parse_curves("t,a,b,c\n0,1,2,3\n".as_bytes(), 2, "t").unwrap_err();
        assert_eq!(e.code(), "PARSE_ERROR");
    }

    #[test]
    fn grid_outside_unit_interval() {
        let e = parse_curves("t,a\n0,1\n2,1\n".as_bytes(), 1, "t").unwrap_err();
        assert_eq!(e.code(), "INVALID_DATA");
        let e = parse_curves("t,a\n".as_bytes(), 1, "t").unwrap_err();
        assert_eq!(e.code(), "EMPTY_DATASET");
    }
}
