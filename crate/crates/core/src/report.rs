//! Report serialization: complex numbers as `{re, im}`, JSON and CSV writers.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Serialized form of a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// `#[serde(with = "complex")]` for `Complex64` fields.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexValue::from(*z).serialize(s)
    }
}

/// `#[serde(with = "complex_opt")]` for `Option<Complex64>` fields.
pub mod complex_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        z: &Option<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        z.map(ComplexValue::from).serialize(s)
    }
}

/// `#[serde(with = "complex_vec")]` for `Vec<Complex64>` fields.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(z: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(z.iter().map(|v| ComplexValue::from(*v)))
    }
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Format(format!("json: {e}")))?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    write_json(value, &mut buf)?;
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

/// Shortest round-trip decimal form, independent of locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        #[serde(with = "complex")]
        z: Complex64,
        #[serde(with = "complex_opt")]
        w: Option<Complex64>,
        #[serde(with = "complex_vec")]
        v: Vec<Complex64>,
    }

    #[test]
    fn complex_as_object() {
        let r = Row {
            z: Complex64::new(1.5, -2.0),
            w: None,
            v: vec![Complex64::new(0.0, 1.0)],
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"z":{"re":1.5,"im":-2.0},"w":null,"v":[{"re":0.0,"im":1.0}]}"#);
        assert_eq!(fmt_f64(0.1), "0.1");
    }
}
