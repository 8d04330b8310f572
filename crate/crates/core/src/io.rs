//! `t,re,im` signal files.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{FrftError, Result};
use crate::signal::{Signal, UniformGrid};

/// Relative tolerance on the spacing of abscissae read from a file.
pub const SPACING_TOLERANCE: f64 = 1e-9;

pub fn write_signal<W: Write>(writer: W, signal: &Signal) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "re", "im"]).map_err(csv_err)?;
    for (t, z) in signal.grid().points().zip(signal.samples()) {
        w.write_record([fmt(t), fmt(z.re), fmt(z.im)]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal<R: Read>(reader: R) -> Result<Signal> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = r.headers().map_err(csv_err)?.clone();
    if headers.len() != 3 || &headers[0] != "t" || &headers[1] != "re" || &headers[2] != "im" {
        return Err(FrftError::Io(format!(
            "expected header 't,re,im', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut ts = Vec::new();
    let mut zs = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.len() != 3 {
            return Err(FrftError::Io(format!("row {}: expected 3 fields", row + 1)));
        }
        let field = |k: usize| -> Result<f64> {
            record[k].parse::<f64>().map_err(|_| FrftError::Io(format!("row {}: bad number '{}'", row + 1, &record[k])))
        };
        ts.push(field(0)?);
        zs.push(Complex64::new(field(1)?, field(2)?));
    }
    let grid = infer_grid(&ts)?;
    Signal::new(grid, zs)
}

pub fn write_signal_file<P: AsRef<Path>>(path: P, signal: &Signal) -> Result<()> {
    let file =
        std::fs::File::create(path.as_ref()).map_err(|e| FrftError::Io(format!("{}: {e}", path.as_ref().display())))?;
    write_signal(std::io::BufWriter::new(file), signal)
}

pub fn read_signal_file<P: AsRef<Path>>(path: P) -> Result<Signal> {
    let file =
        std::fs::File::open(path.as_ref()).map_err(|e| FrftError::Io(format!("{}: {e}", path.as_ref().display())))?;
    read_signal(std::io::BufReader::new(file))
}

/// Recovers the uniform grid behind a column of abscissae.
fn infer_grid(ts: &[f64]) -> Result<UniformGrid> {
    match ts.len() {
        0 => Err(FrftError::Io("signal file has no rows".into())),
        1 => UniformGrid::new(ts[0], 1.0, 1),
        n => {
            let step = (ts[n - 1] - ts[0]) / (n - 1) as f64;
            if !(step > 0.0) {
                return Err(FrftError::Io("abscissae are not increasing".into()));
            }
            for (i, &t) in ts.iter().enumerate() {
                let expected = ts[0] + i as f64 * step;
                if (t - expected).abs() > SPACING_TOLERANCE * step.max(expected.abs()) {
                    return Err(FrftError::Io(format!("row {}: non-uniform spacing at t = {t}", i + 1)));
                }
            }
            UniformGrid::new(ts[0], step, n)
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> FrftError {
    FrftError::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::make_signal;

    #[test]
    fn header_and_precision() {
        let grid = UniformGrid::new(-1.0, 1.0 / 3.0, 4).unwrap();
        let s = make_signal(grid, |t| Complex64::new(t.sin(), t.cos())).unwrap();
        let mut buf = Vec::new();
        write_signal(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,re,im\n"));
        let back = read_signal(buf.as_slice()).unwrap();
        assert!(back.grid().coincides(s.grid()));
        assert_eq!(back.samples(), s.samples());
    }

    #[test]
    fn rejects_non_uniform_rows() {
        let text = "t,re,im\n0,1,0\n1,1,0\n2.5,1,0\n";
        assert!(matches!(read_signal(text.as_bytes()), Err(FrftError::Io(_))));
    }

    #[test]
    fn rejects_wrong_header() {
        let text = "x,y\n0,1\n";
        assert!(read_signal(text.as_bytes()).is_err());
    }
}
