//! Versioned JSON file format for presentations.

use serde::{Deserialize, Serialize};

use super::{Presentation, PresentationError, TwistVector};
use crate::algebra::{Field, Form, PolyMatrix};
use crate::sampler::SampleMetadata;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format_version: u32,
    field: Field,
    source_twists: Vec<i32>,
    target_twists: Vec<i32>,
    matrix: Vec<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<SampleMetadata>,
}

/// A presentation together with the optional sampler metadata block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub metadata: Option<SampleMetadata>,
}

impl PresentationFile {
    pub fn new(presentation: Presentation) -> Self {
        PresentationFile {
            presentation,
            metadata: None,
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        let p = &self.presentation;
        let raw = RawFile {
            format_version: FORMAT_VERSION,
            field: p.field(),
            source_twists: p.source().as_slice().to_vec(),
            target_twists: p.target().as_slice().to_vec(),
            matrix: (0..p.matrix().rows())
                .map(|i| (0..p.matrix().cols()).map(|j| p.entry(i, j).to_json()).collect())
                .collect(),
            metadata: self.metadata.clone(),
        };
        serde_json::to_value(raw).expect("presentation serializes")
    }

    /// Canonical text: pretty-printed JSON with a trailing newline. Reading
    /// and re-writing a canonical file reproduces it byte for byte.
    pub fn to_json_string(&self) -> String {
        let raw: RawFile = serde_json::from_value(self.to_value()).expect("own encoding");
        let mut s = serde_json::to_string_pretty(&raw).expect("presentation serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self, PresentationError> {
        let raw: RawFile =
            serde_json::from_str(s).map_err(|e| PresentationError::Malformed(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_value(v: serde_json::Value) -> Result<Self, PresentationError> {
        let raw: RawFile =
            serde_json::from_value(v).map_err(|e| PresentationError::Malformed(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawFile) -> Result<Self, PresentationError> {
        if raw.format_version != FORMAT_VERSION {
            return Err(PresentationError::Malformed(format!(
                "unsupported format_version {}",
                raw.format_version
            )));
        }
        if let Field::Prime { p } = raw.field {
            Field::prime(p)?;
        }
        let source = TwistVector::new(raw.source_twists)?;
        let target = TwistVector::new(raw.target_twists)?;
        if raw.matrix.len() != target.len() {
            return Err(PresentationError::Malformed(format!(
                "matrix has {} rows, target has {} summands",
                raw.matrix.len(),
                target.len()
            )));
        }
        let mut rows = Vec::with_capacity(raw.matrix.len());
        for (i, row) in raw.matrix.iter().enumerate() {
            if row.len() != source.len() {
                return Err(PresentationError::Malformed(format!(
                    "row {i} has {} entries, source has {} summands",
                    row.len(),
                    source.len()
                )));
            }
            let mut forms = Vec::with_capacity(row.len());
            for (j, cell) in row.iter().enumerate() {
                let d = target.as_slice()[i] as i64 - source.as_slice()[j] as i64;
                let form = Form::from_json(raw.field, cell, Some(d.max(0) as u32))
                    .map_err(|e| PresentationError::Malformed(format!("entry ({i},{j}): {e}")))?;
                forms.push(form);
            }
            rows.push(forms);
        }
        let matrix = PolyMatrix::from_rows(raw.field, rows)?;
        Ok(PresentationFile {
            presentation: Presentation::new(source, target, matrix)?,
            metadata: raw.metadata,
        })
    }
}
