use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use std::io::{self, Write};
use std::path::Path;

use crate::Failure;

/// Compact JSON with every float written to 17 significant digits.
struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt_f64(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser).map_err(|e| Failure::Io(e.to_string()))?;
    buf.push(b'\n');
    Ok(buf)
}

/// Write to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut so = io::stdout().lock();
            so.write_all(bytes)
                .and_then(|_| so.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

/// CSV table preceded by a `#` line holding the resolved config.
pub fn to_csv<C: Serialize>(config: &C, header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>, Failure> {
    let mut buf = b"# config: ".to_vec();
    buf.extend(to_json(config)?);
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).map_err(|e| Failure::Io(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| Failure::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(buf)
}
