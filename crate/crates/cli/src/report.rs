//! JSON reports (`schema: "qham/1"`) with every float written to 17
//! significant digits, and CSV sample dumps.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "qham/1";

/// Published JSON Schema of the reports.
pub const SCHEMA_JSON: &str = include_str!("../schema/qham-1.schema.json");

/// Work counters by default, so that reports are reproducible byte for byte;
/// elapsed seconds only on request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub mode: &'static str,
    pub counters: BTreeMap<&'static str, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Timings {
    pub fn new(counters: BTreeMap<&'static str, u64>, seconds: Option<f64>) -> Self {
        Self {
            mode: if seconds.is_some() { "wall_clock" } else { "work_counters" },
            counters,
            seconds,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<'a, R: Serialize, S: Serialize> {
    pub schema: &'static str,
    pub config_echo: &'a RunConfig,
    pub results: R,
    pub residuals: S,
    pub timings: Timings,
}

/// Pretty printer writing floats as `d.ddddddddddddddddde±x`.
struct SignificantDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let bytes = to_json(value).map_err(io::Error::other)?;
    std::fs::write(path, bytes)
}

/// One row per sample: `lambda_1 … lambda_n, source`.
pub fn write_samples_csv<'a>(
    path: &Path,
    n: usize,
    rows: impl IntoIterator<Item = (&'a [f64], &'a str)>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=n).map(|k| format!("lambda_{k}")).collect();
    header.push("source".into());
    w.write_record(&header)?;
    for (angles, source) in rows {
        let mut record: Vec<String> = angles.iter().map(|a| format!("{a:.16e}")).collect();
        record.push(source.to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
