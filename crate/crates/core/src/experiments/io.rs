//! Report serialization.
//!
//! The CSV layout has one row per evaluation point followed by one summary
//! row per report. Pointwise rows leave the summary columns empty, summary
//! rows leave `xi` and `pointwise_error` empty. Floats are written with 17
//! significant digits so that every value round-trips.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::ErrorReport;
use crate::error::Result;

pub const CSV_COLUMNS: [&str; 14] = [
    "example_id",
    "node_family",
    "d",
    "n",
    "q",
    "mu",
    "alpha",
    "omega",
    "xi",
    "pointwise_error",
    "mean_error",
    "cond",
    "residual",
    "runtime_ms",
];

/// `x` with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn opt_int(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv_to<W: Write>(reports: &[ErrorReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in reports {
        let c = &r.config;
        let head = [
            c.example_id.to_string(),
            c.node_family.to_string(),
            c.d.to_string(),
            r.resolved.n.to_string(),
            opt_int(r.resolved.q),
            c.mu.to_string(),
            fmt_float(c.alpha),
            opt_float(c.omega),
        ];
        for p in &r.pointwise {
            let mut row = head.to_vec();
            row.extend([fmt_float(p.xi), fmt_float(p.error)]);
            row.extend(std::iter::repeat_n(String::new(), 4));
            w.write_record(&row)?;
        }
        let mut row = head.to_vec();
        row.extend([String::new(), String::new()]);
        row.extend([fmt_float(r.mean_error), opt_float(r.cond), opt_float(r.residual), opt_float(r.runtime_ms)]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(reports: &[ErrorReport], path: impl AsRef<Path>) -> Result<()> {
    write_csv_to(reports, BufWriter::new(File::create(path)?))
}

/// Pretty-printed JSON array of reports. Non-finite optional values are
/// written as `null`.
pub fn write_json_to<W: Write>(reports: &[ErrorReport], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn write_json(reports: &[ErrorReport], path: impl AsRef<Path>) -> Result<()> {
    write_json_to(reports, BufWriter::new(File::create(path)?))
}

pub fn read_json_from<R: Read>(input: R) -> Result<Vec<ErrorReport>> {
    Ok(serde_json::from_reader(input)?)
}

pub fn read_json(path: impl AsRef<Path>) -> Result<Vec<ErrorReport>> {
    read_json_from(BufReader::new(File::open(path)?))
}

/// Serde helpers writing `f64` fields with 17 significant digits.
pub(crate) mod sig17 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::value::RawValue;

    fn raw<S: Serializer>(x: f64, s: S) -> Result<S::Ok, S::Error> {
        if !x.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(super::fmt_float(x)).map_err(serde::ser::Error::custom)?.serialize(s)
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        raw(*x, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => raw(*v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Option::<f64>::deserialize(d)
        }
    }
}
