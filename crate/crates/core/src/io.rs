//! JSON and CSV interchange formats.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::HalfPlaneSamples;
use crate::mellin::LineSample;

pub const SCHEMA: &str = "mellin-pw/1";

/// A complex number as a `{"re": .., "im": ..}` object.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Serde adapter writing `Complex64` as `{"re", "im"}`.
pub mod complex_obj {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        ComplexJson::deserialize(d).map(Into::into)
    }
}

/// Serde adapter for `Vec<Complex64>`.
pub mod complex_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<ComplexJson> = v.iter().map(|z| (*z).into()).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        Vec::<ComplexJson>::deserialize(d).map(|v| v.into_iter().map(Into::into).collect())
    }
}

/// Serde adapter for `Option<Complex64>`.
pub mod complex_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.map(ComplexJson::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Complex64>, D::Error> {
        Option::<ComplexJson>::deserialize(d).map(|v| v.map(Into::into))
    }
}

/// Serde adapter writing infinite floats as `null`.
pub mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            Some(*v).serialize(s)
        } else {
            None::<f64>.serialize(s)
        }
    }

    /// `null` reads back as `+inf`; negative infinities are restored by the caller.
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// A JSON document `{"schema": "mellin-pw/1", "kind": .., "data": ..}`.
pub fn document<T: Serialize>(kind: &str, data: &T) -> Result<serde_json::Value> {
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "kind": kind,
        "data": serde_json::to_value(data)?,
    }))
}

/// The `data` member of a document of the given kind.
pub fn from_document<T: for<'de> Deserialize<'de>>(kind: &str, doc: &serde_json::Value) -> Result<T> {
    if doc.get("schema").and_then(|s| s.as_str()) != Some(SCHEMA) {
        return Err(Error::Parse(format!("missing or unknown schema, expected {SCHEMA}")));
    }
    if doc.get("kind").and_then(|s| s.as_str()) != Some(kind) {
        return Err(Error::Parse(format!("expected a document of kind `{kind}`")));
    }
    let data = doc.get("data").cloned().ok_or_else(|| Error::Parse("document has no data".into()))?;
    Ok(serde_json::from_value(data)?)
}

#[derive(Serialize, Deserialize)]
struct LineRow {
    eta: f64,
    re: f64,
    im: f64,
}

/// Line samples as CSV with columns `eta,re,im`.
pub fn write_line_csv<W: Write>(w: W, samples: &[LineSample]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in samples {
        out.serialize(LineRow {
            eta: s.eta,
            re: s.value.re,
            im: s.value.im,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Line samples from CSV; the error column is not stored and reads as zero.
pub fn read_line_csv<R: Read>(r: R) -> Result<Vec<LineSample>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| {
            let row: LineRow = row?;
            Ok(LineSample {
                eta: row.eta,
                value: Complex64::new(row.re, row.im),
                error: 0.0,
            })
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct PlaneRow {
    xi: f64,
    eta: f64,
    re: f64,
    im: f64,
}

/// Half-plane samples as CSV with columns `xi,eta,re,im`, where the point
/// is `ξ - iη`.
pub fn write_half_plane_csv<W: Write>(w: W, samples: &HalfPlaneSamples) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (z, v) in samples.points.iter().zip(&samples.values) {
        out.serialize(PlaneRow {
            xi: z.re,
            eta: -z.im,
            re: v.re,
            im: v.im,
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_half_plane_csv<R: Read>(r: R) -> Result<HalfPlaneSamples> {
    let mut points = Vec::new();
    let mut values = Vec::new();
    for row in csv::Reader::from_reader(r).deserialize() {
        let row: PlaneRow = row?;
        points.push(Complex64::new(row.xi, -row.eta));
        values.push(Complex64::new(row.re, row.im));
    }
    HalfPlaneSamples::new(points, values)
}

#[derive(Serialize)]
struct PointRow {
    re_z: f64,
    im_z: f64,
    re: f64,
    im: f64,
}

/// Values at arbitrary complex points as CSV with columns `re_z,im_z,re,im`.
pub fn write_points_csv<W: Write>(w: W, points: &[Complex64], values: &[Complex64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (z, v) in points.iter().zip(values) {
        out.serialize(PointRow {
            re_z: z.re,
            im_z: z.im,
            re: v.re,
            im: v.im,
        })?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_csv_round_trip() {
        let samples = vec![
            LineSample {
                eta: -1.5,
                value: Complex64::new(0.25, -3.0),
                error: 0.0,
            },
            LineSample {
                eta: 2.0,
                value: Complex64::new(1e-300, 7.5),
                error: 0.0,
            },
        ];
        let mut buf = Vec::new();
        write_line_csv(&mut buf, &samples).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("eta,re,im\n"));
        assert_eq!(read_line_csv(&buf[..]).unwrap(), samples);
    }

    #[test]
    fn half_plane_csv_round_trip() {
        let s = HalfPlaneSamples::new(
            vec![Complex64::new(3.0, -0.5), Complex64::new(-10.0, 0.0)],
            vec![Complex64::new(1.0, 2.0), Complex64::new(-0.125, 0.0)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_half_plane_csv(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("xi,eta,re,im\n3.0,0.5,"), "{text}");
        assert_eq!(read_half_plane_csv(&buf[..]).unwrap(), s);
    }

    #[test]
    fn document_checks_schema_and_kind() {
        let doc = document("strip", &[1.0, 2.0]).unwrap();
        assert_eq!(doc["schema"], SCHEMA);
        let v: Vec<f64> = from_document("strip", &doc).unwrap();
        assert_eq!(v, vec![1.0, 2.0]);
        assert!(from_document::<Vec<f64>>("other", &doc).is_err());
    }
}
