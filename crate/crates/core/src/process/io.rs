use serde::{Deserialize, Serialize};

use super::{ProcessMatrix, Slot, Witness};
use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub label: String,
    pub dim: usize,
}

/// Serialized operator: slot labels and dimensions, row-major entries as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub kind: String,
    pub slots: Vec<SlotRecord>,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixRecord {
    fn from_parts(kind: &str, matrix: &ComplexMatrix, slots: &[Slot]) -> Self {
        Self {
            kind: kind.to_string(),
            slots: slots
                .iter()
                .map(|s| SlotRecord {
                    label: s.label.clone(),
                    dim: s.dim,
                })
                .collect(),
            entries: matrix.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    fn into_parts(self, kind: &str) -> Result<(ComplexMatrix, Vec<Slot>)> {
        if self.kind != kind {
            return Err(Error::Serialization(format!("expected a {kind}, found a {}", self.kind)));
        }
        let slots: Vec<Slot> = self
            .slots
            .into_iter()
            .map(|s| Slot { label: s.label, dim: s.dim })
            .collect();
        let n: usize = slots.iter().map(|s| s.dim).product();
        let data = self.entries.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        Ok((ComplexMatrix::from_vec(n, n, data)?, slots))
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Serialization(e.to_string()))
}

fn from_json(s: &str) -> Result<MatrixRecord> {
    serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
}

impl ProcessMatrix {
    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord::from_parts("process", &self.matrix, &self.slots)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(&self.to_record())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let (m, slots) = from_json(s)?.into_parts("process")?;
        Self::new(m, slots)
    }
}

impl Witness {
    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord::from_parts("witness", &self.matrix, &self.slots)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(&self.to_record())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let (m, slots) = from_json(s)?.into_parts("witness")?;
        Self::new(m, slots)
    }
}
