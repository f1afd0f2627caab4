//! The on-disk matrix format: one named matrix per JSON document, with big
//! integers written as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use stationary_af::matops::{CompanionSpec, IntMatrix};

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Number(serde_json::Number),
}

impl Entry {
    fn parse(&self) -> Result<BigInt, String> {
        match self {
            Entry::Text(s) => s.trim().parse().map_err(|_| format!("not an integer: {s:?}")),
            Entry::Number(n) => n.to_string().parse().map_err(|_| format!("not an integer: {n}")),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: String,
    matrix: Vec<Vec<Entry>>,
    #[serde(default)]
    companion_spec: Option<Vec<Entry>>,
}

#[derive(Serialize)]
struct CanonicalDocument {
    name: String,
    matrix: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    companion_spec: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDocument {
    pub name: String,
    pub matrix: IntMatrix,
    pub companion_spec: Option<CompanionSpec>,
}

impl MatrixDocument {
    /// Records the companion spec whenever the matrix has companion form.
    pub fn new(name: &str, matrix: IntMatrix) -> Self {
        let companion_spec = CompanionSpec::from_matrix(&matrix).ok();
        MatrixDocument { name: name.to_string(), matrix, companion_spec }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if raw.matrix.is_empty() || raw.matrix[0].is_empty() {
            return Err("matrix must be nonempty".into());
        }
        let cols = raw.matrix[0].len();
        let mut data = Vec::with_capacity(raw.matrix.len() * cols);
        for (i, row) in raw.matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(format!("row {i} has {} entries, expected {cols}", row.len()));
            }
            for e in row {
                let x = e.parse()?;
                if x.sign() == num_bigint::Sign::Minus {
                    return Err(format!("negative entry {x} in row {i}"));
                }
                data.push(x);
            }
        }
        let matrix = IntMatrix::new(raw.matrix.len(), cols, data).map_err(|e| e.to_string())?;
        let companion_spec = match raw.companion_spec {
            None => None,
            Some(entries) => {
                let m = entries.iter().map(Entry::parse).collect::<Result<Vec<_>, _>>()?;
                let spec = CompanionSpec::new(m).map_err(|e| e.to_string())?;
                if spec.matrix() != matrix {
                    return Err("companion_spec does not regenerate the matrix".into());
                }
                Some(spec)
            }
        };
        Ok(MatrixDocument { name: raw.name, matrix, companion_spec })
    }

    /// Pretty-printed JSON with a trailing newline; parsing it back gives
    /// the same document.
    pub fn to_canonical(&self) -> String {
        let doc = CanonicalDocument {
            name: self.name.clone(),
            matrix: self
                .matrix
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            companion_spec: self
                .companion_spec
                .as_ref()
                .map(|s| s.coeffs().iter().map(ToString::to_string).collect()),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_numbers_and_strings() {
        let d = MatrixDocument::parse(r#"{"name":"j","matrix":[["4",1],["32","0"]]}"#).unwrap();
        assert_eq!(d.matrix, IntMatrix::from_i64_rows(&[&[4, 1], &[32, 0]]));
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            r#"{"name":"j","matrix":[["1","2"],["3"]]}"#,
            r#"{"name":"j","matrix":[["-1"]]}"#,
            r#"{"name":"j","matrix":[["x"]]}"#,
            r#"{"name":"j","matrix":[]}"#,
            r#"{"name":"j","matrix":[["4","1"],["32","0"]],"companion_spec":["6","16"]}"#,
            r#"{"name":"j","matrix":[["1"]],"extra":1}"#,
        ] {
            assert!(MatrixDocument::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_round_trip() {
        let d = MatrixDocument::parse(
            r#"{"name":"j","matrix":[[4,1],[32,0]],"companion_spec":[4,32]}"#,
        )
        .unwrap();
        let text = d.to_canonical();
        let again = MatrixDocument::parse(&text).unwrap();
        assert_eq!(again, d);
        assert_eq!(again.to_canonical(), text);
    }
}
