//! Tuple file format (format_version 1) and report documents. Complex
//! entries are stored as [re, im] pairs; an absent weight matrix means the
//! identity. Serialization is byte-stable: parse . serialize is the
//! identity on produced files.

use crate::linalg::Matrix;
use crate::tuples::{CheckReport, CommutingTuple, TupleError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

/// Row-major matrix with [re, im] entries.
pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    VersionUnsupported(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error(transparent)]
    Tuple(#[from] TupleError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub format_version: u32,
    pub d: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixData>,
    pub operators: Vec<MatrixData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

pub fn matrix_to_data(m: &Matrix) -> MatrixData {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn data_to_matrix(data: &MatrixData, what: &str) -> Result<Matrix, IoError> {
    let cols = data.first().map(|r| r.len()).unwrap_or(0);
    if data.iter().any(|r| r.len() != cols) {
        return Err(IoError::Dimension(format!("{what} has ragged rows")));
    }
    for row in data {
        for &[re, im] in row {
            if !re.is_finite() || !im.is_finite() {
                return Err(IoError::NonFinite(what.to_string()));
            }
        }
    }
    Matrix::from_rows(
        &data
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect::<Vec<Vec<Complex64>>>(),
    )
    .map_err(|e| IoError::Dimension(format!("{what}: {e}")))
}

impl TupleFile {
    /// Package a tuple, an optional weight, and free-form metadata.
    pub fn from_parts(
        t: &CommutingTuple,
        a: Option<&Matrix>,
        metadata: BTreeMap<String, String>,
    ) -> Self {
        TupleFile {
            format_version: FORMAT_VERSION,
            d: t.d(),
            n: t.dim(),
            a: a.map(matrix_to_data),
            operators: t.ops().iter().map(matrix_to_data).collect(),
            metadata,
        }
    }

    fn validate(&self) -> Result<(), IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::VersionUnsupported(self.format_version));
        }
        if self.operators.len() != self.d {
            return Err(IoError::Dimension(format!(
                "file declares d = {} but contains {} operators",
                self.d,
                self.operators.len()
            )));
        }
        for (idx, op) in self.operators.iter().enumerate() {
            let rows = op.len();
            let cols = op.first().map(|r| r.len()).unwrap_or(0);
            if rows != self.n || cols != self.n || op.iter().any(|r| r.len() != self.n) {
                return Err(IoError::Dimension(format!(
                    "operator {idx} is {rows}x{cols}, expected {n}x{n}",
                    n = self.n
                )));
            }
        }
        if let Some(a) = &self.a {
            let rows = a.len();
            let cols = a.first().map(|r| r.len()).unwrap_or(0);
            if rows != self.n || cols != self.n || a.iter().any(|r| r.len() != self.n) {
                return Err(IoError::Dimension(format!(
                    "weight matrix is {rows}x{cols}, expected {n}x{n}",
                    n = self.n
                )));
            }
        }
        Ok(())
    }

    /// The commuting tuple described by the file (validates commutation).
    pub fn to_tuple(&self) -> Result<CommutingTuple, IoError> {
        let ops: Result<Vec<Matrix>, IoError> = self
            .operators
            .iter()
            .enumerate()
            .map(|(i, data)| data_to_matrix(data, &format!("operator {i}")))
            .collect();
        Ok(CommutingTuple::new(ops?)?)
    }

    /// The weight matrix, defaulting to the identity when absent.
    pub fn a_or_identity(&self) -> Result<Matrix, IoError> {
        match &self.a {
            Some(data) => data_to_matrix(data, "weight matrix"),
            None => Ok(Matrix::identity(self.n)),
        }
    }
}

/// Parse and validate a tuple file document.
pub fn parse_tuple_file(text: &str) -> Result<TupleFile, IoError> {
    let file: TupleFile = serde_json::from_str(text)?;
    file.validate()?;
    Ok(file)
}

/// Canonical serialization: pretty-printed with a trailing newline.
/// Deterministic for a given TupleFile value.
pub fn serialize_tuple_file(file: &TupleFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("tuple files always serialize");
    s.push('\n');
    s
}

/// One named residual record inside a report document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckDoc {
    pub fn from_check(name: impl Into<String>, c: &CheckReport) -> Self {
        CheckDoc {
            name: name.into(),
            passed: c.passed,
            residual: c.residual,
            tolerance: c.tolerance_used,
            detail: c.detail.clone(),
        }
    }
}

/// Machine-readable command report, emitted on standard output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDoc {
    pub command: String,
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifacts: Option<serde_json::Value>,
}

impl ReportDoc {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Plain-text table rendering for --human.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "command: {}\nstatus:  {}\n",
            self.command,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        if !self.checks.is_empty() {
            out.push_str(&format!(
                "{:<44} {:>6} {:>12} {:>12}\n",
                "check", "pass", "residual", "tolerance"
            ));
            for c in &self.checks {
                out.push_str(&format!(
                    "{:<44} {:>6} {:>12.3e} {:>12.3e}\n",
                    c.name,
                    if c.passed { "yes" } else { "NO" },
                    c.residual,
                    c.tolerance
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn richter_file() -> TupleFile {
        let t = CommutingTuple::new(vec![
            Matrix::identity(2),
            Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]),
        ])
        .unwrap();
        TupleFile::from_parts(&t, None, BTreeMap::new())
    }

    #[test]
    fn minimal_document_parses_with_identity_weight() {
        let text = r#"{"format_version":1,"d":1,"n":1,"operators":[[[[1.0,0.0]]]]}"#;
        let f = parse_tuple_file(text).unwrap();
        assert_eq!(f.d, 1);
        assert!(f.a.is_none());
        let a = f.a_or_identity().unwrap();
        assert!((&a - &Matrix::identity(1)).norm_fro() == 0.0);
        let t = f.to_tuple().unwrap();
        assert_eq!(t.dim(), 1);
    }

    #[test]
    fn round_trip_is_identity() {
        let f = richter_file();
        let text = serialize_tuple_file(&f);
        let g = parse_tuple_file(&text).unwrap();
        assert_eq!(f, g);
        // Byte-identical re-serialization.
        assert_eq!(text, serialize_tuple_file(&g));
    }

    #[test]
    fn parsed_block_file_is_2_isometric() {
        let f = richter_file();
        let text = serialize_tuple_file(&f);
        let t = parse_tuple_file(&text).unwrap().to_tuple().unwrap();
        let chk =
            crate::tuples::check_a_m_isometric(&t, &Matrix::identity(2), 2, 1e-10).unwrap();
        assert!(chk.passed);
    }

    #[test]
    fn dimension_error_names_operator() {
        let text = r#"{"format_version":1,"d":1,"n":2,
            "operators":[[[[1.0,0.0],[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0],[0.0,0.0]]]]}"#;
        let err = parse_tuple_file(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("operator 0"), "message was: {msg}");
    }

    #[test]
    fn unsupported_version_rejected() {
        let text = r#"{"format_version":2,"d":1,"n":1,"operators":[[[[1.0,0.0]]]]}"#;
        assert!(matches!(
            parse_tuple_file(text),
            Err(IoError::VersionUnsupported(2))
        ));
    }

    #[test]
    fn wrong_operator_count_rejected() {
        let text = r#"{"format_version":1,"d":2,"n":1,"operators":[[[[1.0,0.0]]]]}"#;
        assert!(matches!(parse_tuple_file(text), Err(IoError::Dimension(_))));
    }

    #[test]
    fn non_finite_entry_rejected() {
        let f = TupleFile {
            format_version: 1,
            d: 1,
            n: 1,
            a: None,
            operators: vec![vec![vec![[f64::NAN, 0.0]]]],
            metadata: BTreeMap::new(),
        };
        assert!(matches!(f.to_tuple(), Err(IoError::NonFinite(_))));
    }

    #[test]
    fn metadata_round_trips() {
        let mut meta = BTreeMap::new();
        meta.insert("family".to_string(), "block".to_string());
        meta.insert("seed".to_string(), "42".to_string());
        let t = CommutingTuple::identity(1, 1);
        let f = TupleFile::from_parts(&t, Some(&Matrix::identity(1)), meta.clone());
        let g = parse_tuple_file(&serialize_tuple_file(&f)).unwrap();
        assert_eq!(g.metadata, meta);
        assert!(g.a.is_some());
    }

    #[test]
    fn report_doc_renders() {
        let rep = ReportDoc {
            command: "check".into(),
            passed: true,
            checks: vec![CheckDoc {
                name: "m-isometry residual".into(),
                passed: true,
                residual: 1.5e-12,
                tolerance: 1e-9,
                detail: "".into(),
            }],
            artifacts: None,
        };
        let j = rep.to_json();
        assert!(j.contains("\"passed\": true"));
        let h = rep.to_human();
        assert!(h.contains("PASS"));
        let back: ReportDoc = serde_json::from_str(&j).unwrap();
        assert_eq!(back.checks.len(), 1);
    }
}
