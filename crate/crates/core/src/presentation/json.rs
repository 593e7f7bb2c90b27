use serde::{Deserialize, Serialize};

use super::Presentation;
use crate::error::{Error, Result};
use crate::exact::parse_form;

/// Wire format: matrix indexed target row × source column, entries as polynomial text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub matrix: Vec<Vec<String>>,
}

impl PresentationJson {
    pub fn to_presentation(&self) -> Result<Presentation> {
        if self.matrix.len() != self.target.len() || self.matrix.iter().any(|r| r.len() != self.source.len()) {
            return Err(Error::Shape(format!(
                "matrix must be {} x {}",
                self.target.len(),
                self.source.len()
            )));
        }
        let mut matrix = Vec::with_capacity(self.target.len());
        for row in &self.matrix {
            let mut out = Vec::with_capacity(row.len());
            for text in row {
                out.push(parse_form(text, None)?);
            }
            matrix.push(out);
        }
        Presentation::new(self.source.clone(), self.target.clone(), matrix)
    }
}

impl From<&Presentation> for PresentationJson {
    fn from(p: &Presentation) -> Self {
        PresentationJson {
            source: p.source().to_vec(),
            target: p.target().to_vec(),
            matrix: p
                .matrix()
                .iter()
                .map(|r| r.iter().map(|f| f.to_string()).collect())
                .collect(),
        }
    }
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self> {
        let j: PresentationJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        j.to_presentation()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PresentationJson::from(self)).expect("serializable")
    }
}
