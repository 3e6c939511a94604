//! JSON form of a codebook.
//!
//! ```json
//! {"version":1,"dim":2,"epsilon":0.9,"construction":"random","seed":7,
//!  "vectors":[[[re,im],[re,im]], ...]}
//! ```
//!
//! Floats are written with 17 significant digits, so export followed by
//! import reproduces every amplitude bit for bit. Import re-certifies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Codebook, Construction};
use crate::fmt::to_json;
use crate::qmath::StateVector;
use crate::{Error, Result};

pub const CODEBOOK_FORMAT_VERSION: u32 = 1;
const MAX_IMPORT_DIM: usize = 4096;
const MAX_IMPORT_COUNT: usize = 4096;
const MAX_IMPORT_AMPLITUDES: usize = 1 << 22;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    dim: usize,
    epsilon: f64,
    construction: Construction,
    #[serde(default)]
    seed: Option<u64>,
    vectors: Vec<Vec<[f64; 2]>>,
}

impl Codebook {
    pub fn to_json(&self) -> String {
        let doc = Document {
            version: CODEBOOK_FORMAT_VERSION,
            dim: self.dim,
            epsilon: self.epsilon,
            construction: self.construction,
            seed: self.seed,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                .collect(),
        };
        to_json(&doc).expect("codebook documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document =
            serde_json::from_str(text).map_err(|e| Error::Deserialize(format!("codebook: {e}")))?;
        if doc.version != CODEBOOK_FORMAT_VERSION {
            return Err(Error::Deserialize(format!(
                "codebook: unsupported version {}",
                doc.version
            )));
        }
        if doc.dim == 0 || doc.dim > MAX_IMPORT_DIM {
            return Err(Error::InvalidCodebook(format!(
                "dimension {} outside 1..={MAX_IMPORT_DIM}",
                doc.dim
            )));
        }
        if doc.vectors.len() > MAX_IMPORT_COUNT
            || doc.vectors.len().saturating_mul(doc.dim) > MAX_IMPORT_AMPLITUDES
        {
            return Err(Error::TooLarge {
                what: "codebook",
                size: doc.vectors.len(),
                limit: MAX_IMPORT_COUNT.min(MAX_IMPORT_AMPLITUDES / doc.dim),
            });
        }
        let vectors = doc
            .vectors
            .into_iter()
            .map(|amps| {
                if amps.len() != doc.dim {
                    return Err(Error::DimMismatch {
                        expected: doc.dim,
                        actual: amps.len(),
                    });
                }
                StateVector::from_unit(
                    amps.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Codebook::new(vectors, doc.epsilon, doc.construction, doc.seed)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let text =
            std::str::from_utf8(bytes).map_err(|e| Error::Deserialize(format!("codebook: {e}")))?;
        Self::from_json(text)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{random_codebook, simplex_codebook};
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let cb = random_codebook(6, 10, 0.6, 11, 5).unwrap();
        let back = Codebook::from_json(&cb.to_json()).unwrap();
        assert_eq!(back, cb);
        let s = simplex_codebook(4).unwrap();
        assert_eq!(Codebook::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn import_recertifies() {
        let text = r#"{"version":1,"dim":2,"epsilon":0.5,"construction":"random",
            "vectors":[[[1,0],[0,0]],[[0.6,0],[0.8,0]]]}"#;
        assert!(matches!(
            Codebook::from_json(text),
            Err(Error::InvalidCodebook(_))
        ));
        let ok = text.replace("0.5", "0.7");
        assert_eq!(Codebook::from_json(&ok).unwrap().count(), 2);
    }

    #[test]
    fn import_rejects_malformed() {
        for bad in [
            "",
            "{}",
            r#"{"version":2,"dim":1,"epsilon":1,"construction":"random","vectors":[]}"#,
            r#"{"version":1,"dim":2,"epsilon":1,"construction":"random","vectors":[[[1,0]],[[0,1]]]}"#,
            r#"{"version":1,"dim":2,"epsilon":1,"construction":"random","vectors":[[[2,0],[0,0]],[[0,0],[1,0]]]}"#,
            r#"{"version":1,"dim":0,"epsilon":1,"construction":"random","vectors":[]}"#,
        ] {
            assert!(Codebook::from_json(bad).is_err(), "{bad}");
        }
    }
}
