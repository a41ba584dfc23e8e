use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Wire form of an operator: `{"dim": d, "re": [[…]], "im": [[…]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl<R: Real> From<&Operator<R>> for OperatorJson {
    fn from(op: &Operator<R>) -> Self {
        let d = op.dim();
        let part = |f: fn(crate::scalar::C<R>) -> R| -> Vec<Vec<f64>> {
            (0..d).map(|i| (0..d).map(|j| f(op.entry(i, j)).as_f64()).collect()).collect()
        };
        Self { dim: d, re: part(|z| z.re), im: part(|z| z.im) }
    }
}

impl<R: Real> TryFrom<OperatorJson> for Operator<R> {
    type Error = Error;

    fn try_from(doc: OperatorJson) -> Result<Self> {
        let op = Operator::from_parts(&doc.re, &doc.im)?;
        if op.dim() != doc.dim {
            return Err(Error::DimensionMismatch { expected: doc.dim, found: op.dim() });
        }
        Ok(op)
    }
}

impl<R: Real> Operator<R> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&OperatorJson::from(self)).expect("operator json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OperatorJson = serde_json::from_str(text)?;
        doc.try_into()
    }
}

impl<R: Real> Serialize for Operator<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorJson::from(self).serialize(s)
    }
}

impl<'de, R: Real> Deserialize<'de> for Operator<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = OperatorJson::deserialize(d)?;
        Operator::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Axis;

    #[test]
    fn json_layout_is_row_major() {
        let y = Operator::<f64>::pauli(Axis::Y);
        let v: serde_json::Value = serde_json::from_str(&y.to_json()).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["im"][0][1], -1.0);
        assert_eq!(v["im"][1][0], 1.0);
        assert_eq!(Operator::<f64>::from_json(&y.to_json()).unwrap(), y);
    }

    #[test]
    fn json_rejects_inconsistent_dim() {
        let text = r#"{"dim": 3, "re": [[1,0],[0,1]], "im": [[0,0],[0,0]]}"#;
        assert!(Operator::<f64>::from_json(text).is_err());
        let ragged = r#"{"dim": 2, "re": [[1,0],[0]], "im": [[0,0],[0,0]]}"#;
        assert!(Operator::<f64>::from_json(ragged).is_err());
    }
}
