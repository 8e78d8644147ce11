//! Deterministic JSON output: floats always carry 17 significant digits,
//! non-finite values become `null`.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Pretty-printing formatter with fixed-precision floats.
pub struct FixedFloat<'a>(PrettyFormatter<'a>);

impl Default for FixedFloat<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::with_indent(b"  "))
    }
}

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
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

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloat::default());
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Envelope shared by all command reports.
#[derive(Serialize)]
pub struct Report<'a, I: Serialize, R: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config: &'a crate::config::RunConfig,
    pub input: I,
    pub result: R,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_fixed_precision() {
        let s = to_json(&[0.1, 1.0 / 3.0, f64::INFINITY, f64::NAN]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0].as_f64(), Some(0.1));
        assert_eq!(v[1].as_f64(), Some(1.0 / 3.0));
        assert!(v[2].is_null() && v[3].is_null());
        assert!(s.contains("1.0000000000000001e-1") || s.contains("1.0000000000000000e-1"));
    }

    #[test]
    fn round_trip_is_exact() {
        for x in [std::f64::consts::PI, 1e-300, -2.5e17, 5e-324] {
            let s = to_json(&x).unwrap();
            assert_eq!(s.trim().parse::<f64>().unwrap(), x);
        }
    }
}
