//! Ranked-document ("LETOR") files and cosine-distance instances built from them.
//!
//! One document per line:
//!
//! ```text
//! <relevance> qid:<id> <index>:<value> <index>:<value> ... [# comment]
//! ```
//!
//! `relevance` is an integer in `0..=5`, feature indices start at 1 and must
//! be strictly increasing within a line. Missing indices read as 0, and every
//! vector is padded to the largest index seen in the file. Blank lines and
//! lines starting with `#` are skipped.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DistanceMatrix, Instance, MetricReport, Quality};

pub const MAX_RELEVANCE: u8 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub query_id: String,
    pub relevance: u8,
    pub features: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryGroup {
    pub query_id: String,
    pub docs: Vec<DocumentRecord>,
}

pub fn parse_letor(path: &Path) -> Result<Vec<QueryGroup>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_letor_str(&text)
}

// qid, relevance, sparse features, comment
type RawLine = (String, u8, Vec<(usize, f64)>, Option<String>);

/// Groups appear in order of their first document.
pub fn parse_letor_str(text: &str) -> Result<Vec<QueryGroup>> {
    let mut errors = Vec::new();
    let mut parsed: Vec<RawLine> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_line(line) {
            Ok(rec) => parsed.push(rec),
            Err(msg) => errors.push((i + 1, msg)),
        }
    }
    if !errors.is_empty() {
        return Err(Error::Parse { errors });
    }

    let dim = parsed
        .iter()
        .filter_map(|(_, _, f, _)| f.last().map(|&(idx, _)| idx))
        .max()
        .unwrap_or(0);
    let mut groups: Vec<QueryGroup> = Vec::new();
    for (query_id, relevance, sparse, comment) in parsed {
        let mut features = vec![0.0; dim];
        for (idx, value) in sparse {
            features[idx - 1] = value;
        }
        let doc = DocumentRecord {
            query_id,
            relevance,
            features,
            comment,
        };
        match groups.iter_mut().find(|g| g.query_id == doc.query_id) {
            Some(g) => g.docs.push(doc),
            None => groups.push(QueryGroup {
                query_id: doc.query_id.clone(),
                docs: vec![doc],
            }),
        }
    }
    Ok(groups)
}

type ParsedLine = (String, u8, Vec<(usize, f64)>, Option<String>);

fn parse_line(line: &str) -> std::result::Result<ParsedLine, String> {
    let (body, comment) = match line.split_once('#') {
        Some((b, c)) => (b, Some(c.trim().to_string())),
        None => (line, None),
    };
    let mut tokens = body.split_whitespace();
    let rel_tok = tokens.next().ok_or("missing relevance label")?;
    let relevance: u8 = rel_tok
        .parse()
        .map_err(|_| format!("relevance `{rel_tok}` is not an integer in 0..={MAX_RELEVANCE}"))?;
    if relevance > MAX_RELEVANCE {
        return Err(format!("relevance {relevance} exceeds {MAX_RELEVANCE}"));
    }
    let qid_tok = tokens.next().ok_or("missing qid token")?;
    let query_id = match qid_tok.strip_prefix("qid:") {
        Some(q) if !q.is_empty() => q.to_string(),
        _ => return Err(format!("expected `qid:<id>`, found `{qid_tok}`")),
    };
    let mut features: Vec<(usize, f64)> = Vec::new();
    for tok in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| format!("feature `{tok}` is not index:value"))?;
        let idx: usize = idx.parse().map_err(|_| format!("bad feature index in `{tok}`"))?;
        if idx == 0 {
            return Err("feature indices start at 1".into());
        }
        let val: f64 = val.parse().map_err(|_| format!("bad feature value in `{tok}`"))?;
        if !val.is_finite() {
            return Err(format!("non-finite feature value in `{tok}`"));
        }
        if features.last().is_some_and(|&(prev, _)| prev >= idx) {
            return Err(format!("feature index {idx} is not increasing"));
        }
        features.push((idx, val));
    }
    Ok((query_id, relevance, features, comment))
}

/// Writes every feature densely, so parsing the output reproduces `groups`.
pub fn write_letor(groups: &[QueryGroup]) -> String {
    let mut out = String::new();
    for doc in groups.iter().flat_map(|g| &g.docs) {
        let _ = write!(out, "{} qid:{}", doc.relevance, doc.query_id);
        for (i, v) in doc.features.iter().enumerate() {
            let _ = write!(out, " {}:{:?}", i + 1, v);
        }
        if let Some(c) = &doc.comment {
            let _ = write!(out, " # {c}");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    /// `1 − cos(u,v)`; not always a metric.
    #[default]
    OneMinusCosine,
    /// `arccos(cos(u,v)) / π`; always a metric.
    Angular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    None,
    /// Rescale each feature to `[0,1]` over the selected documents. Constant
    /// features become 0.
    MinMax,
}

#[derive(Debug, Clone)]
pub struct CosineInstance {
    pub instance: Instance,
    /// Positions in the input slice of the selected documents, in item order.
    pub doc_indices: Vec<usize>,
    pub metric: MetricReport,
}

/// Quality is the relevance score; distances come from cosine similarity of
/// the feature vectors. The `top_n` most relevant documents are kept, ties
/// broken by input order. Triangle violations are reported, not rejected.
pub fn build_cosine_instance(
    docs: &[DocumentRecord],
    top_n: usize,
    lambda: f64,
    mode: DistanceMode,
    normalization: Normalization,
) -> Result<CosineInstance> {
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.sort_by(|&a, &b| docs[b].relevance.cmp(&docs[a].relevance));
    order.truncate(top_n);
    if order.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 documents, got {}", order.len())));
    }
    let dim = docs[order[0]].features.len();
    if let Some(&bad) = order.iter().find(|&&i| docs[i].features.len() != dim) {
        return Err(Error::invalid(format!(
            "document {} has {} features, expected {dim}",
            doc_label(&docs[bad], bad),
            docs[bad].features.len()
        )));
    }

    let mut vectors: Vec<Vec<f64>> = order.iter().map(|&i| docs[i].features.clone()).collect();
    if normalization == Normalization::MinMax {
        for k in 0..dim {
            let lo = vectors.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min);
            let hi = vectors.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max);
            for v in &mut vectors {
                v[k] = if hi > lo { (v[k] - lo) / (hi - lo) } else { 0.0 };
            }
        }
    }
    let norms: Vec<f64> = vectors.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    if let Some(pos) = norms.iter().position(|&n| n == 0.0) {
        return Err(Error::DegenerateVector {
            doc: doc_label(&docs[order[pos]], order[pos]),
        });
    }

    let dist = DistanceMatrix::from_fn(vectors.len(), |i, j| {
        let dot: f64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
        let cos = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
        match mode {
            DistanceMode::OneMinusCosine => 1.0 - cos,
            DistanceMode::Angular => cos.acos() / std::f64::consts::PI,
        }
    });
    let weights = order.iter().map(|&i| docs[i].relevance as f64).collect();
    let instance = Instance::new(dist, Quality::modular(weights)?, lambda)?;
    let metric = instance.dist().validate();
    Ok(CosineInstance {
        instance,
        doc_indices: order,
        metric,
    })
}

fn doc_label(doc: &DocumentRecord, pos: usize) -> String {
    match &doc.comment {
        Some(c) if !c.is_empty() => format!("#{pos} (qid {}, {c})", doc.query_id),
        _ => format!("#{pos} (qid {})", doc.query_id),
    }
}
