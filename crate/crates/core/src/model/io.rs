//! JSON instance files.
//!
//! ```text
//! {
//!   "format": "maxsum-instance/1",
//!   "n": 3,
//!   "lambda": 0.2,
//!   "quality": {"kind": "modular", "payload": {"weights": [0.5, 0.1, 0.9]}},
//!   "dist": [d(1,0), d(2,0), d(2,1)],
//!   "matroid": {"kind": "uniform", "payload": {"n": 3, "capacity": 2}}
//! }
//! ```
//!
//! `dist` is the strict lower triangle in row order, `n(n−1)/2` entries.
//! Coverage quality uses `{"kind": "coverage", "payload": {"element_weights":
//! [...], "items": [[element ids], ...]}}`. `matroid` is optional. Numbers are
//! written in shortest round-trip form, so read followed by write reproduces
//! the file byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DistanceMatrix, Instance, Quality};
use crate::error::{Error, Result};
use crate::matroid::Matroid;

pub const FORMAT_TAG: &str = "maxsum-instance/1";

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    format: String,
    n: usize,
    lambda: f64,
    quality: QualityDoc,
    dist: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matroid: Option<Matroid>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
enum QualityDoc {
    Modular {
        weights: Vec<f64>,
    },
    Coverage {
        element_weights: Vec<f64>,
        items: Vec<Vec<usize>>,
    },
}

pub fn write_instance(inst: &Instance, matroid: Option<&Matroid>) -> Result<String> {
    let quality = match inst.quality() {
        Quality::Modular(w) => QualityDoc::Modular { weights: w.clone() },
        Quality::Coverage(c) => QualityDoc::Coverage {
            element_weights: c.element_weights().to_vec(),
            items: c.item_sets(),
        },
        Quality::Oracle(_) => return Err(Error::invalid("oracle quality functions cannot be serialized")),
    };
    let doc = InstanceDoc {
        format: FORMAT_TAG.to_string(),
        n: inst.n(),
        lambda: inst.lambda(),
        quality,
        dist: inst.dist().lower_triangle(),
        matroid: matroid.cloned(),
    };
    let mut text = serde_json::to_string(&doc)?;
    text.push('\n');
    Ok(text)
}

pub fn read_instance(text: &str) -> Result<(Instance, Option<Matroid>)> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    if doc.format != FORMAT_TAG {
        return Err(Error::invalid(format!("unsupported format tag {:?}", doc.format)));
    }
    let quality = match doc.quality {
        QualityDoc::Modular { weights } => Quality::modular(weights)?,
        QualityDoc::Coverage { element_weights, items } => Quality::coverage(element_weights, &items)?,
    };
    let dist = DistanceMatrix::from_lower_triangle(doc.n, &doc.dist)?;
    let inst = Instance::new(dist, quality, doc.lambda)?;
    if let Some(m) = &doc.matroid {
        if m.n() != inst.n() {
            return Err(Error::invalid(format!(
                "matroid universe has {} items, instance has {}",
                m.n(),
                inst.n()
            )));
        }
    }
    Ok((inst, doc.matroid))
}

pub fn save_instance(path: &Path, inst: &Instance, matroid: Option<&Matroid>) -> Result<()> {
    std::fs::write(path, write_instance(inst, matroid)?).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<(Instance, Option<Matroid>)> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_instance(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_parses() {
        let text = r#"{"format":"maxsum-instance/1","n":3,"lambda":0.2,
            "quality":{"kind":"modular","payload":{"weights":[0.5,0.1,0.9]}},
            "dist":[1.5,1.25,1.0],
            "matroid":{"kind":"uniform","payload":{"n":3,"capacity":2}}}"#;
        let (inst, m) = read_instance(text).unwrap();
        assert_eq!(inst.d(2, 0), 1.25);
        assert_eq!(inst.d(1, 2), 1.0);
        assert_eq!(m.unwrap().rank(), 2);
    }

    #[test]
    fn write_read_write_is_byte_stable() {
        let dist = DistanceMatrix::from_fn(5, |i, j| 1.0 + 1.0 / (1 + i * 5 + j) as f64);
        let q = Quality::coverage(vec![0.1, 1.0 / 3.0], &[vec![0], vec![1], vec![0, 1], vec![], vec![1]]).unwrap();
        let inst = Instance::new(dist, q, 0.3).unwrap();
        let first = write_instance(&inst, None).unwrap();
        let (back, m) = read_instance(&first).unwrap();
        assert!(m.is_none());
        assert_eq!(write_instance(&back, None).unwrap(), first);
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let text = r#"{"format":"maxsum-instance/1","n":3,"lambda":0.2,
            "quality":{"kind":"modular","payload":{"weights":[0.5,0.1,0.9]}},"dist":[1.0]}"#;
        assert!(read_instance(text).is_err());
        let text = r#"{"format":"other","n":1,"lambda":0.2,
            "quality":{"kind":"modular","payload":{"weights":[0.5]}},"dist":[]}"#;
        assert!(read_instance(text).is_err());
    }
}
