//! JSON text format for polynomials and ideals.
//!
//! ```json
//! {"vars": ["z1", "z2"],
//!  "terms": [{"a": 2, "b": 0, "re": "1", "im": "0"},
//!            {"a": 0, "b": 1, "re": "-1/2", "im": "0.25"}]}
//! ```
//!
//! `re`/`im` accept `"n"`, `"n/d"` or decimal strings (converted exactly);
//! a missing `im` means zero. Output always uses the canonical `"n"`/`"n/d"`
//! form with terms sorted by `(a, b)`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gauss::{format_rational, parse_rational};
use super::{BiPoly, GaussRational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub a: u32,
    pub b: u32,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyRecord {
    #[serde(default = "default_vars")]
    pub vars: Vec<String>,
    pub terms: Vec<TermRecord>,
}

fn default_vars() -> Vec<String> {
    vec!["z1".into(), "z2".into()]
}

/// An ideal file is either `{"generators": [poly, ...]}`, a bare array of
/// polynomials, or a single polynomial (principal ideal).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum IdealRecord {
    Generators { generators: Vec<PolyRecord> },
    List(Vec<PolyRecord>),
    Single(PolyRecord),
}

impl PolyRecord {
    pub fn to_poly(&self) -> Result<BiPoly> {
        if self.vars != default_vars() {
            return Err(Error::Parse(format!(
                "\"vars\" must be [\"z1\", \"z2\"], got {:?}",
                self.vars
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let name = |part: &str, e: Error| {
                let detail = e.parse_detail();
                Error::Parse(format!("term #{k} (a={}, b={}) field \"{part}\": {detail}", t.a, t.b))
            };
            let re = parse_rational(&t.re).map_err(|e| name("re", e))?;
            let im = parse_rational(&t.im).map_err(|e| name("im", e))?;
            terms.push((t.a, t.b, GaussRational::new(re, im)));
        }
        Ok(BiPoly::from_terms(terms))
    }

    pub fn from_poly(p: &BiPoly) -> Self {
        Self {
            vars: default_vars(),
            terms: p
                .terms()
                .map(|(&(a, b), c)| TermRecord {
                    a,
                    b,
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }
}

impl IdealRecord {
    pub fn into_generators(self) -> Result<Vec<BiPoly>> {
        let recs = match self {
            IdealRecord::Generators { generators } => generators,
            IdealRecord::List(v) => v,
            IdealRecord::Single(p) => vec![p],
        };
        recs.iter()
            .enumerate()
            .map(|(i, r)| {
                r.to_poly()
                    .map_err(|e| Error::Parse(format!("generator #{i}: {}", e.parse_detail())))
            })
            .collect()
    }
}

pub fn parse_poly(json: &str) -> Result<BiPoly> {
    let rec: PolyRecord =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
    rec.to_poly()
}

pub fn parse_ideal(json: &str) -> Result<Vec<BiPoly>> {
    let rec: IdealRecord =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("ideal JSON: {e}")))?;
    rec.into_generators()
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRecord::from_poly(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = PolyRecord::deserialize(d)?;
        rec.to_poly().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction_terms() {
        let p = parse_poly(
            r#"{"vars":["z1","z2"],"terms":[{"a":1,"b":0,"re":"1","im":"0"},{"a":0,"b":0,"re":"-0.5","im":"0"}]}"#,
        )
        .unwrap();
        let expect = BiPoly::z1().sub(&BiPoly::constant(GaussRational::from_ratio(1, 2)));
        assert_eq!(p, expect);
    }

    #[test]
    fn error_names_offending_term() {
        let err = parse_poly(r#"{"terms":[{"a":0,"b":0,"re":"1"},{"a":3,"b":1,"re":"x/2"}]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("term #1") && err.contains("a=3, b=1"), "{err}");
    }

    #[test]
    fn ideal_shapes() {
        let one = r#"{"terms":[{"a":1,"b":0,"re":"1"}]}"#;
        assert_eq!(parse_ideal(one).unwrap().len(), 1);
        let list = format!("[{one},{one}]");
        assert_eq!(parse_ideal(&list).unwrap().len(), 2);
        let obj = format!("{{\"generators\":[{one}]}}");
        assert_eq!(parse_ideal(&obj).unwrap().len(), 1);
    }
}
