//! Pair files and the textual signature grammar.
//!
//! A pair file is `{"dim": 2n, "J0": [[…]], "J1": [[…]]}` with row-major
//! entries. A signature spec is `theta:mult[,theta:mult…];l=L;s=S`, angles in
//! radians; the angle list may be empty.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::structures::{AngleBlock, PairSignature, StructurePair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub dim: usize,
    #[serde(rename = "J0")]
    pub j0: Mat,
    #[serde(rename = "J1")]
    pub j1: Mat,
}

impl PairFile {
    pub fn from_pair(pair: &StructurePair) -> Self {
        PairFile { dim: pair.dim(), j0: pair.j0.matrix().clone(), j1: pair.j1.matrix().clone() }
    }

    pub fn into_pair(self) -> Result<StructurePair> {
        for (name, m) in [("J0", &self.j0), ("J1", &self.j1)] {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{} but dim is {}",
                    m.rows(),
                    m.cols(),
                    self.dim
                )));
            }
        }
        StructurePair::from_matrices(self.j0, self.j1)
    }
}

pub fn parse_pair(text: &str) -> Result<StructurePair> {
    let file: PairFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_pair()
}

pub fn pair_to_json(pair: &StructurePair) -> String {
    serde_json::to_string_pretty(&PairFile::from_pair(pair)).expect("pair serialises")
}

pub fn parse_signature_spec(spec: &str) -> Result<PairSignature> {
    let parts: Vec<&str> = spec.trim().split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected 'thetas;l=L;s=S', got {spec:?}")));
    }
    let mut blocks = Vec::new();
    if !parts[0].is_empty() {
        for item in parts[0].split(',') {
            let (t, m) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("angle entry {item:?} is not theta:mult")))?;
            let theta: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("bad angle {t:?}")))?;
            let mult: usize = m.trim().parse().map_err(|_| Error::Parse(format!("bad multiplicity {m:?}")))?;
            blocks.push(AngleBlock { theta, mult });
        }
    }
    let count = |part: &str, key: &str| -> Result<usize> {
        let v = part
            .strip_prefix(key)
            .and_then(|r| r.trim_start().strip_prefix('='))
            .ok_or_else(|| Error::Parse(format!("expected {key}=..., got {part:?}")))?;
        v.trim().parse().map_err(|_| Error::Parse(format!("bad count {v:?}")))
    };
    let l = count(parts[1], "l")?;
    let s = count(parts[2], "s")?;
    PairSignature::new(blocks, l, s)
}

pub fn format_signature_spec(sig: &PairSignature) -> String {
    let thetas: Vec<String> = sig.blocks.iter().map(|b| format!("{}:{}", b.theta, b.mult)).collect();
    format!("{};l={};s={}", thetas.join(","), sig.l, sig.s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{construct_canonical_pair, standard_j};

    #[test]
    fn pair_round_trip() {
        let pair = StructurePair::new(standard_j(2), standard_j(2)).unwrap();
        let text = pair_to_json(&pair);
        assert_eq!(parse_pair(&text).unwrap(), pair);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 4);
        assert_eq!(v["J0"][1][0], 1.0);
    }

    #[test]
    fn pair_errors() {
        assert!(matches!(parse_pair("{"), Err(Error::Parse(_))));
        let bad_dim = r#"{"dim": 2, "J0": [[0,-1],[1,0]], "J1": [[0,-1,0],[1,0,0],[0,0,1]]}"#;
        assert!(parse_pair(bad_dim).is_err());
        let not_j = r#"{"dim": 2, "J0": [[0,-1],[1,0]], "J1": [[1,0],[0,1]]}"#;
        assert!(matches!(parse_pair(not_j), Err(Error::NotComplexStructure(_))));
    }

    #[test]
    fn signature_grammar() {
        let sig = parse_signature_spec("1.5707963267948966:1,0.5:2;l=1;s=0").unwrap();
        assert_eq!(sig.blocks.len(), 2);
        assert_eq!(sig.blocks[0].theta, 0.5);
        assert_eq!(sig.n(), 7);
        assert_eq!(parse_signature_spec(&format_signature_spec(&sig)).unwrap(), sig);
        let empty = parse_signature_spec(";l=2;s=0").unwrap();
        assert!(empty.blocks.is_empty());
        assert_eq!(construct_canonical_pair(&empty).unwrap().dim(), 4);
        for bad in ["", "l=1;s=1", "1.0;l=1;s=0", "1.0:1;l=x;s=0", "4.0:1;l=0;s=0", ";l=0;s=0"] {
            assert!(parse_signature_spec(bad).is_err(), "{bad:?}");
        }
    }
}
