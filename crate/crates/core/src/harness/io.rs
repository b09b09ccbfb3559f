//! Plain-text data matrix files.
//!
//! Line 1: `bhm-data v1; kind; excitation; N_rows; N_cols; kappa; nu; R_r; R_s`.
//! Then one entry per line, `row col re im` (or `row col value` for magnitudes),
//! numbers in 17-significant-digit scientific notation.
//!
//! The header carries two point counts. On load, the count the matrix does not
//! index (e.g. receivers for far-field rows) is set equal to the indexed one.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::{DataKind, DataMatrix, Excitation};
use crate::geometry::ArrayGeometry;
use crate::specfun::WaveParams;

const MAGIC: &str = "bhm-data v1";

pub fn format_matrix(data: &DataMatrix) -> String {
    let mut s = String::with_capacity(64 * (data.values.len() + 1));
    let _ = writeln!(
        s,
        "{MAGIC}; {}; {}; {}; {}; {:.16e}; {:.16e}; {:.16e}; {:.16e}",
        data.kind.tag(),
        data.excitation.tag(),
        data.rows,
        data.cols,
        data.params.kappa,
        data.params.nu,
        data.array.receiver_radius,
        data.array.source_radius
    );
    for r in 0..data.rows {
        for c in 0..data.cols {
            let v = data.get(r, c);
            if data.kind.is_real() {
                let _ = writeln!(s, "{r} {c} {:.16e}", v.re);
            } else {
                let _ = writeln!(s, "{r} {c} {:.16e} {:.16e}", v.re, v.im);
            }
        }
    }
    s
}

pub fn save_matrix(data: &DataMatrix, path: &Path) -> Result<()> {
    fs::write(path, format_matrix(data)).map_err(|e| Error::io(path, e))
}

pub fn load_matrix(path: &Path) -> Result<DataMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.trim().parse::<T>().map_err(|_| parse_err(line, format!("{what}: cannot parse '{}'", field.trim())))
}

fn finite(field: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = number(field, line, what)?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what} is not finite")));
    }
    Ok(v)
}

pub fn parse_matrix(text: &str) -> Result<DataMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let fields: Vec<&str> = header.split(';').map(str::trim).collect();
    if fields.len() != 9 || fields[0] != MAGIC {
        return Err(parse_err(1, format!("header must be '{MAGIC}; kind; excitation; N_rows; N_cols; kappa; nu; R_r; R_s'")));
    }
    let at_header = |e: Error| match e {
        Error::Parse { message, .. } => parse_err(1, message),
        other => other,
    };
    let kind = DataKind::from_tag(fields[1]).map_err(at_header)?;
    let excitation = Excitation::from_tag(fields[2]).map_err(at_header)?;
    let rows: usize = number(fields[3], 1, "N_rows")?;
    let cols: usize = number(fields[4], 1, "N_cols")?;
    let kappa = finite(fields[5], 1, "kappa")?;
    let nu = finite(fields[6], 1, "nu")?;
    let rr = finite(fields[7], 1, "R_r")?;
    let rs = finite(fields[8], 1, "R_s")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(1, "matrix dimensions must be positive"));
    }
    let params = WaveParams::new(kappa, nu).map_err(|e| parse_err(1, e.to_string()))?;
    let far = kind.is_farfield();
    let plane = excitation == Excitation::PlaneWave;
    let directions = if far { rows } else if plane { cols } else { rows };
    let receivers = if far { if plane { rows } else { cols } } else { rows };
    let sources = if plane { rows } else { cols };
    let array = ArrayGeometry::new(rr, rs, receivers, sources, directions).map_err(|e| parse_err(1, e.to_string()))?;
    DataMatrix::check_kind_excitation(kind, excitation).map_err(|e| parse_err(1, e.to_string()))?;

    let width = if kind.is_real() { 3 } else { 4 };
    let mut values = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut seen = vec![false; rows * cols];
    let mut last = 1;
    for (n, line) in lines {
        last = n;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != width {
            return Err(parse_err(n, format!("expected {width} fields, found {}", f.len())));
        }
        let r: usize = number(f[0], n, "row")?;
        let c: usize = number(f[1], n, "col")?;
        if r >= rows || c >= cols {
            return Err(parse_err(n, format!("entry ({r}, {c}) outside {rows}×{cols}")));
        }
        let re = finite(f[2], n, "value")?;
        let im = if width == 4 { finite(f[3], n, "imaginary part")? } else { 0.0 };
        if kind.is_real() && re < 0.0 {
            return Err(parse_err(n, "magnitude must be nonnegative"));
        }
        let k = r * cols + c;
        if seen[k] {
            return Err(parse_err(n, format!("duplicate entry ({r}, {c})")));
        }
        seen[k] = true;
        values[k] = Complex64::new(re, im);
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(parse_err(
            last + 1,
            format!("file ends early: entry ({}, {}) missing, {} of {} present", k / cols, k % cols, seen.iter().filter(|s| **s).count(), rows * cols),
        ));
    }
    DataMatrix::new(kind, excitation, values, params, array)
}
