//! JSON output with fixed 17-significant-digit floats and a schema version.

use std::io;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::GbssSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// Pretty-printing formatter that writes every f64 as `{:.16e}`.
/// Non-finite values never reach it; serde_json emits `null` for them.
pub struct PreciseFormatter {
    inner: PrettyFormatter<'static>,
}

impl Default for PreciseFormatter {
    fn default() -> Self {
        Self {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Wraps a report with the top-level `schema` field.
#[derive(Serialize)]
pub struct Versioned<'a, T: Serialize> {
    pub schema: u32,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter::default());
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn versioned<T: Serialize>(command: &str, body: &T) -> String {
    to_string(&Versioned {
        schema: SCHEMA_VERSION,
        command,
        body,
    })
}

/// Matrix as an array of rows, each entry a `[re, im]` pair.
pub fn serialize_matrix<S: Serializer>(m: &CMatrix, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let mut rows = serializer.serialize_seq(Some(m.nrows()))?;
    for r in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect();
        rows.serialize_element(&row)?;
    }
    rows.end()
}

pub fn serialize_matrices<S: Serializer>(ms: &[CMatrix], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Wrapped<'a>(#[serde(serialize_with = "serialize_matrix")] &'a CMatrix);
    serializer.collect_seq(ms.iter().map(Wrapped))
}

/// Parses a `{n, m, t, x?, y?}` descriptor; missing x / y default to zero.
pub fn parse_state(text: &str) -> Result<GbssSpec> {
    let spec: GbssSpec = serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
    spec.normalized()
}
