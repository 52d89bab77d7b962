use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

/// Writes every float with 17 significant digits so that output is both
/// lossless and byte-stable.
struct SigFigs;

impl Formatter for SigFigs {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Serializes with [`SigFigs`] and a trailing newline. Non-finite floats
/// become `null`.
pub fn to_string<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigs);
    value.serialize(&mut ser).expect("report serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}
