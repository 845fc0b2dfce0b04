//! Sample and band file formats.
//!
//! Sample files hold one decimal float per line; blank lines and anything
//! after `#` are ignored. Band files are CSV with header `knot,lower,upper`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{CdfBand, StepCdf};

pub fn parse_sample(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: f64 = body.parse().map_err(|e| Error::Parse {
            line: idx + 1,
            msg: format!("`{body}`: {e}"),
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn read_sample(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_sample(&fs::read_to_string(path)?)
}

pub fn write_sample<W: Write>(mut out: W, values: &[f64]) -> Result<()> {
    for v in values {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

pub fn read_band_from<R: Read>(input: R) -> Result<CdfBand> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["knot", "lower", "upper"] {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header `knot,lower,upper`".into(),
        });
    }
    let mut knots = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = idx + 2;
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let field = |i: usize| -> Result<f64> {
            record[i].parse::<f64>().map_err(|e| Error::Parse {
                line,
                msg: format!("`{}`: {e}", &record[i]),
            })
        };
        knots.push(field(0)?);
        lower.push(field(1)?);
        upper.push(field(2)?);
    }
    if knots.is_empty() {
        return Err(Error::EmptyInput);
    }
    CdfBand::new(
        StepCdf::new(knots.clone(), lower)?,
        StepCdf::new(knots, upper)?,
    )
}

pub fn read_band(path: impl AsRef<Path>) -> Result<CdfBand> {
    read_band_from(fs::File::open(path)?)
}

/// Writes both edges on the merged knot grid. `f64`'s `Display` is the
/// shortest representation that round-trips, so reloading is exact.
pub fn write_band<W: Write>(out: W, band: &CdfBand) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["knot", "lower", "upper"])?;
    for k in band.knots() {
        writer.write_record([
            k.to_string(),
            band.lower().eval_right(k).to_string(),
            band.upper().eval_right(k).to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_comments_and_blanks() {
        let v = parse_sample("# header\n1.5\n\n-2 # trailing\n3e-1\n").unwrap();
        assert_eq!(v, vec![1.5, -2.0, 0.3]);
        assert!(matches!(
            parse_sample("1\nabc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_sample("# nothing\n"),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn band_round_trip() {
        let lower = StepCdf::new(vec![0.1, 0.7], vec![0.2, 0.9]).unwrap();
        let upper = StepCdf::new(vec![-0.3, 0.5], vec![0.4, 1.0]).unwrap();
        let band = CdfBand::new(lower, upper).unwrap();
        let mut buf = Vec::new();
        write_band(&mut buf, &band).unwrap();
        let back = read_band_from(buf.as_slice()).unwrap();
        for k in band.knots() {
            assert_eq!(back.lower().eval_right(k), band.lower().eval_right(k));
            assert_eq!(back.upper().eval_right(k), band.upper().eval_right(k));
            assert_eq!(back.lower().eval_left(k), band.lower().eval_left(k));
            assert_eq!(back.upper().eval_left(k), band.upper().eval_left(k));
        }
    }

    #[test]
    fn vacuous_band_survives_the_file_format() {
        let mut buf = Vec::new();
        write_band(&mut buf, &CdfBand::vacuous()).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "knot,lower,upper\n-inf,0,1\n"
        );
        let back = read_band_from(buf.as_slice()).unwrap();
        assert_eq!(back.upper().eval_right(-1e9), 1.0);
        assert_eq!(back.lower().eval_right(1e9), 0.0);
    }

    #[test]
    fn band_file_errors() {
        assert!(read_band_from("a,b,c\n0,0,1\n".as_bytes()).is_err());
        assert!(read_band_from("knot,lower,upper\n0,0.5,0.4\n".as_bytes()).is_err());
        assert!(read_band_from("knot,lower,upper\n1,0,1\n0,0,1\n".as_bytes()).is_err());
    }
}
