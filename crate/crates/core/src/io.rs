//! JSON distribution files, CSV sample files, and canonical serialization.
//!
//! Distribution file:
//!
//! ```json
//! { "alphabets": {"x": ["0","1"], "y": ["0","1"], "z": ["0","1"]},
//!   "probs": [[[0.25, 0.0], [0.0, 0.25]], [[0.0, 0.25], [0.25, 0.0]]] }
//! ```
//!
//! `probs` may be replaced by a sparse `entries` list of
//! `{"x": .., "y": .., "z": .., "p": ..}` records. Floats are always written
//! with 17 significant digits so doubles round-trip exactly.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::error::{PidError, Result};
use crate::prob::{Alphabet, JointDist3, Observation, SampleTable, Var};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Alphabets {
    pub x: Alphabet,
    pub y: Alphabet,
    pub z: Alphabet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryRecord {
    pub x: String,
    pub y: String,
    pub z: String,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub alphabets: Alphabets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryRecord>>,
}

impl DistFile {
    pub fn from_dist(d: &JointDist3) -> Self {
        let [nx, ny, _] = d.shape();
        let probs = (0..nx)
            .map(|x| {
                (0..ny)
                    .map(|y| (0..d.shape()[2]).map(|z| d.prob(x, y, z)).collect())
                    .collect()
            })
            .collect();
        DistFile {
            alphabets: Alphabets {
                x: d.alphabet(Var::X).clone(),
                y: d.alphabet(Var::Y).clone(),
                z: d.alphabet(Var::Z).clone(),
            },
            probs: Some(probs),
            entries: None,
        }
    }

    pub fn into_dist(self) -> Result<JointDist3> {
        let Alphabets { x, y, z } = self.alphabets;
        match (self.probs, self.entries) {
            (Some(probs), None) => JointDist3::from_nested(x, y, z, &probs),
            (None, Some(entries)) => JointDist3::from_entries(
                x,
                y,
                z,
                entries
                    .iter()
                    .map(|e| (e.x.as_str(), e.y.as_str(), e.z.as_str(), e.p)),
            ),
            (Some(_), Some(_)) => Err(PidError::Parse(
                "give either \"probs\" or \"entries\", not both".into(),
            )),
            (None, None) => Err(PidError::Parse("missing \"probs\" or \"entries\"".into())),
        }
    }
}

pub fn parse_distribution(text: &str) -> Result<JointDist3> {
    let file: DistFile = serde_json::from_str(text)?;
    file.into_dist()
}

pub fn read_distribution<R: Read>(mut reader: R) -> Result<JointDist3> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_distribution(&text)
}

/// Dense JSON rendering of a distribution.
pub fn distribution_to_json(d: &JointDist3) -> String {
    to_json_string(&DistFile::from_dist(d))
}

/// Pretty JSON with every float printed to 17 significant digits.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    write_json(&mut buf, value).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(writer: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, FullPrecision::default());
    value.serialize(&mut ser)?;
    Ok(())
}

/// Compact canonical JSON of the dense form; the basis for fingerprints.
fn canonical_bytes(d: &JointDist3) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecisionCompact);
    DistFile::from_dist(d)
        .serialize(&mut ser)
        .expect("in-memory serialization");
    buf
}

/// Hex SHA-256 of the canonical serialization.
pub fn fingerprint(d: &JointDist3) -> String {
    hex::encode(Sha256::digest(canonical_bytes(d)))
}

pub fn fingerprint_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_f64_17<W: ?Sized + Write>(writer: &mut W, value: f64) -> io::Result<()> {
    write!(writer, "{value:.16e}")
}

#[derive(Default)]
struct FullPrecisionCompact;

impl Formatter for FullPrecisionCompact {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_f64_17(writer, value)
    }
}

#[derive(Default)]
struct FullPrecision<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_f64_17(writer, value)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Reads `x,y,z` observations. The header row is required.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<SampleTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.as_slice() != ["x", "y", "z"] {
        return Err(PidError::Parse(format!(
            "expected CSV header x,y,z, found {}",
            names.join(",")
        )));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != 3 {
            return Err(PidError::Parse(format!(
                "expected 3 fields, found {}",
                record.len()
            )));
        }
        let row: Observation = [
            record[0].to_string(),
            record[1].to_string(),
            record[2].to_string(),
        ];
        rows.push(row);
    }
    Ok(SampleTable::new(rows))
}

/// Sorted distinct labels observed in one column of the sample table.
pub fn observed_alphabet(table: &SampleTable, var: Var) -> Result<Alphabet> {
    let mut labels: Vec<String> = table.rows.iter().map(|r| r[var.axis()].clone()).collect();
    labels.sort();
    labels.dedup();
    if labels.is_empty() {
        return Err(PidError::EmptyInput);
    }
    Alphabet::new(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    const XOR_ENTRIES: &str = r#"{
        "alphabets": {"x": ["0","1"], "y": ["0","1"], "z": ["0","1"]},
        "entries": [
            {"x": "0", "y": "0", "z": "0", "p": 0.25},
            {"x": "0", "y": "1", "z": "1", "p": 0.25},
            {"x": "1", "y": "0", "z": "1", "p": 0.25},
            {"x": "1", "y": "1", "z": "0", "p": 0.25}
        ]
    }"#;

    #[test]
    fn entries_and_dense_forms_agree() {
        let sparse = parse_distribution(XOR_ENTRIES).unwrap();
        let dense = parse_distribution(&distribution_to_json(&sparse)).unwrap();
        assert_eq!(sparse, dense);
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let d = parse_distribution(XOR_ENTRIES).unwrap();
        let json = distribution_to_json(&d);
        assert!(json.contains("2.5000000000000000e-1"));
        assert!(json.contains("0.0000000000000000e0"));
    }

    #[test]
    fn rejects_both_or_neither_payload() {
        let neither = r#"{"alphabets": {"x": ["0"], "y": ["0"], "z": ["0"]}}"#;
        assert!(matches!(
            parse_distribution(neither),
            Err(PidError::Parse(_))
        ));
        let both = r#"{"alphabets": {"x": ["0"], "y": ["0"], "z": ["0"]}, "probs": [[[1.0]]], "entries": []}"#;
        assert!(matches!(parse_distribution(both), Err(PidError::Parse(_))));
    }

    #[test]
    fn validation_errors_surface() {
        let bad =
            r#"{"alphabets": {"x": ["0"], "y": ["0"], "z": ["0","1"]}, "probs": [[[0.5, 0.4]]]}"#;
        assert!(matches!(
            parse_distribution(bad),
            Err(PidError::NotNormalized { .. })
        ));
        let dup = r#"{"alphabets": {"x": ["0","0"], "y": ["0"], "z": ["0"]}, "probs": [[[0.5]],[[0.5]]]}"#;
        assert!(matches!(parse_distribution(dup), Err(PidError::Parse(_))));
    }

    #[test]
    fn fingerprint_is_content_addressed() {
        let a = parse_distribution(XOR_ENTRIES).unwrap();
        let b = parse_distribution(&distribution_to_json(&a)).unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&b));
        assert_eq!(fingerprint(&a).len(), 64);
        let c = JointDist3::uniform(Alphabet::binary(), Alphabet::binary(), Alphabet::binary());
        assert_ne!(fingerprint(&a), fingerprint(&c));
    }

    #[test]
    fn csv_samples() {
        let t = read_samples_csv("x,y,z\n0,0,0\n0,1,1\n".as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.rows[1], ["0", "1", "1"].map(String::from));
        assert_eq!(observed_alphabet(&t, Var::Z).unwrap().labels(), ["0", "1"]);
        assert!(read_samples_csv("a,b,c\n0,0,0\n".as_bytes()).is_err());
        let empty = read_samples_csv("x,y,z\n".as_bytes()).unwrap();
        assert!(empty.is_empty());
    }
}
