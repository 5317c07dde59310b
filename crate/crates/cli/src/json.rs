//! JSON output with every float written to 17 significant digits, which
//! round-trips binary64 exactly.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `d.dddddddddddddddde±x`, 17 significant digits.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    value.serialize(&mut Serializer::with_formatter(&mut out, FullPrecision))?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}
