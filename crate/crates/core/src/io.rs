//! Frame and vector files.
//!
//! Frames are JSON `{"n", "m", "field", "columns": [[[re, im], ...], ...]}`
//! (columns outer) or CSV with one matrix row per line of `re+imj` tokens.
//! Vectors are JSON `{"len", "values": [[re, im], ...]}` or a single CSV
//! line of the same tokens. Writers emit 17 significant digits, which
//! round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{FrameError, Result};
use crate::frame::{CMatrix, Field, FrameMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` selects CSV, anything else JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }

    /// JSON if the first non-blank character opens an object or array.
    pub fn sniff(text: &str) -> Format {
        match text.trim_start().chars().next() {
            Some('{') | Some('[') => Format::Json,
            _ => Format::Csv,
        }
    }
}

fn num(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(FrameError::Parse(format!("cannot serialize non-finite value {x}")));
    }
    Ok(format!("{x:.16e}"))
}

fn pair(z: Complex64) -> Result<String> {
    Ok(format!("[{}, {}]", num(z.re)?, num(z.im)?))
}

fn token(z: Complex64) -> Result<String> {
    let re = num(z.re)?;
    let im = num(z.im)?;
    let sign = if im.starts_with('-') { "" } else { "+" };
    Ok(format!("{re}{sign}{im}j"))
}

pub fn frame_to_json(phi: &FrameMatrix) -> Result<String> {
    let field = match phi.field() {
        Field::Real => "real",
        Field::Complex => "complex",
    };
    let mut out = format!(
        "{{\n  \"n\": {},\n  \"m\": {},\n  \"field\": \"{field}\",\n  \"columns\": [\n",
        phi.n(),
        phi.m()
    );
    for k in 0..phi.m() {
        let entries = phi
            .column(k)
            .into_iter()
            .map(pair)
            .collect::<Result<Vec<_>>>()?;
        let sep = if k + 1 < phi.m() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", entries.join(", "));
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

pub fn frame_to_csv(phi: &FrameMatrix) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    for r in 0..phi.n() {
        let row = (0..phi.m())
            .map(|c| token(phi.matrix()[(r, c)]))
            .collect::<Result<Vec<_>>>()?;
        writer.write_record(&row)?;
    }
    let bytes = writer.into_inner().map_err(|e| FrameError::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| FrameError::Parse(e.to_string()))
}

pub fn write_frame(phi: &FrameMatrix, format: Format) -> Result<String> {
    match format {
        Format::Json => frame_to_json(phi),
        Format::Csv => frame_to_csv(phi),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    n: usize,
    m: usize,
    field: Field,
    columns: Vec<Vec<[f64; 2]>>,
}

pub fn frame_from_json(text: &str) -> Result<FrameMatrix> {
    let file: FrameFile = serde_json::from_str(text)?;
    if file.columns.len() != file.m {
        return Err(FrameError::Parse(format!(
            "declared m = {} but found {} columns",
            file.m,
            file.columns.len()
        )));
    }
    let columns: Vec<Vec<Complex64>> = file
        .columns
        .iter()
        .enumerate()
        .map(|(k, col)| {
            if col.len() != file.n {
                return Err(FrameError::Parse(format!(
                    "column {} has {} entries, expected n = {}",
                    k + 1,
                    col.len(),
                    file.n
                )));
            }
            Ok(col.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        })
        .collect::<Result<_>>()?;
    let phi = FrameMatrix::from_columns(file.n, &columns)?;
    FrameMatrix::with_field(phi.into_matrix(), file.field)
}

/// Parses `a`, `a+bj`, `a-bj`, `bj` (also `i` for the imaginary unit).
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t = token.trim();
    let bad = || FrameError::Parse(format!("cannot parse complex number {token:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['j', 'i', 'J', 'I']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn csv_rows(text: &str) -> Result<Vec<Vec<Complex64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(record.iter().map(parse_complex).collect::<Result<Vec<_>>>()?);
    }
    Ok(rows)
}

pub fn frame_from_csv(text: &str) -> Result<FrameMatrix> {
    let rows = csv_rows(text)?;
    let n = rows.len();
    if n == 0 {
        return Err(FrameError::Parse("empty frame file".into()));
    }
    let m = rows[0].len();
    let data = CMatrix::from_fn(n, m, |r, c| rows[r][c]);
    FrameMatrix::new(data)
}

pub fn read_frame(text: &str, format: Format) -> Result<FrameMatrix> {
    match format {
        Format::Json => frame_from_json(text),
        Format::Csv => frame_from_csv(text),
    }
}

pub fn load_frame(path: &Path) -> Result<FrameMatrix> {
    read_frame(&std::fs::read_to_string(path)?, Format::from_path(path))
}

pub fn vector_to_json(values: &[Complex64]) -> Result<String> {
    let entries = values.iter().map(|&z| pair(z)).collect::<Result<Vec<_>>>()?;
    Ok(format!(
        "{{\n  \"len\": {},\n  \"values\": [{}]\n}}\n",
        values.len(),
        entries.join(", ")
    ))
}

pub fn vector_to_csv(values: &[Complex64]) -> Result<String> {
    let tokens = values.iter().map(|&z| token(z)).collect::<Result<Vec<_>>>()?;
    Ok(tokens.join(",") + "\n")
}

pub fn write_vector(values: &[Complex64], format: Format) -> Result<String> {
    match format {
        Format::Json => vector_to_json(values),
        Format::Csv => vector_to_csv(values),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorFile {
    Tagged { len: usize, values: Vec<Scalar> },
    Bare(Vec<Scalar>),
}

/// Accepts the tagged object or a bare array; entries may be real numbers
/// or `[re, im]` pairs.
pub fn vector_from_json(text: &str) -> Result<Vec<Complex64>> {
    let (len, values) = match serde_json::from_str::<VectorFile>(text)? {
        VectorFile::Tagged { len, values } => (Some(len), values),
        VectorFile::Bare(values) => (None, values),
    };
    let out: Vec<Complex64> = values
        .into_iter()
        .map(|s| match s {
            Scalar::Real(re) => Complex64::new(re, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect();
    if let Some(len) = len {
        if len != out.len() {
            return Err(FrameError::Parse(format!(
                "declared len = {len} but found {} values",
                out.len()
            )));
        }
    }
    Ok(out)
}

/// All tokens of the file in reading order.
pub fn vector_from_csv(text: &str) -> Result<Vec<Complex64>> {
    Ok(csv_rows(text)?.into_iter().flatten().collect())
}

pub fn read_vector(text: &str, format: Format) -> Result<Vec<Complex64>> {
    match format {
        Format::Json => vector_from_json(text),
        Format::Csv => vector_from_csv(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{htf, HtfParams};

    #[test]
    fn json_round_trip_is_bit_exact() {
        let phi = htf(&HtfParams::new(3, 7, 0.3).unwrap()).unwrap();
        let back = frame_from_json(&frame_to_json(&phi).unwrap()).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let phi = htf(&HtfParams::unit(2, 5)).unwrap();
        let back = frame_from_csv(&frame_to_csv(&phi).unwrap()).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn real_field_survives() {
        let phi = FrameMatrix::identity(2);
        let back = frame_from_json(&frame_to_json(&phi).unwrap()).unwrap();
        assert_eq!(back.field(), Field::Real);
    }

    #[test]
    fn complex_tokens() {
        let cases = [
            ("1", Complex64::new(1.0, 0.0)),
            ("1+2j", Complex64::new(1.0, 2.0)),
            ("-1.5e-3-2.0E+2j", Complex64::new(-1.5e-3, -200.0)),
            ("-2j", Complex64::new(0.0, -2.0)),
            ("j", Complex64::new(0.0, 1.0)),
            ("3-i", Complex64::new(3.0, -1.0)),
        ];
        for (t, z) in cases {
            assert_eq!(parse_complex(t).unwrap(), z, "{t}");
        }
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn vectors() {
        let v = vec![Complex64::new(0.1, -0.2), Complex64::new(3.0, 0.0)];
        assert_eq!(vector_from_json(&vector_to_json(&v).unwrap()).unwrap(), v);
        assert_eq!(vector_from_csv(&vector_to_csv(&v).unwrap()).unwrap(), v);
        assert_eq!(
            vector_from_json("[1, [0, 1]]").unwrap(),
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
        );
        assert!(vector_from_json("{\"len\": 3, \"values\": [1]}").is_err());
    }

    #[test]
    fn malformed_frames() {
        assert!(frame_from_json("{\"n\": 2, \"m\": 1, \"field\": \"real\", \"columns\": [[[1, 0]]]}").is_err());
        assert!(frame_from_csv("").is_err());
        assert!(frame_from_csv("1,2\n3\n").is_err());
    }
}
