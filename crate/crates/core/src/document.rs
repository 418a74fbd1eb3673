//! On-disk graph format: a JSON object with the component count, the edge
//! list (1-based endpoint pairs) and optional component labels.
//!
//! The canonical serialization orders each edge with its smaller endpoint
//! first, sorts the edge list lexicographically, keeps the field order
//! `components`, `edges`, `labels`, and emits no insignificant whitespace.
//! Canonical documents round-trip byte-identically.

use serde::{Deserialize, Serialize};

use crate::{DualGraph, Error};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub components: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed graph document at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph document: {0}")]
    Validation(#[from] Error),
    #[error("labels field has {got} entries for {expected} components")]
    LabelCount { expected: usize, got: usize },
}

impl GraphDocument {
    pub fn from_graph(g: &DualGraph) -> GraphDocument {
        GraphDocument {
            components: g.components(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            labels: None,
        }
    }

    /// Validates the document and builds the dual graph. Edge indices
    /// follow the document's edge order.
    pub fn to_graph(&self) -> Result<DualGraph, DocumentError> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.components {
                return Err(DocumentError::LabelCount {
                    expected: self.components,
                    got: labels.len(),
                });
            }
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        Ok(DualGraph::new(self.components, &edges)?)
    }

    /// Copy with each edge ordered and the edge list sorted.
    pub fn canonical(&self) -> GraphDocument {
        let mut edges: Vec<[usize; 2]> = self
            .edges
            .iter()
            .map(|&[a, b]| if a <= b { [a, b] } else { [b, a] })
            .collect();
        edges.sort_unstable();
        GraphDocument {
            components: self.components,
            edges,
            labels: self.labels.clone(),
        }
    }

    /// Canonical compact JSON encoding.
    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(&self.canonical()).expect("document serialization cannot fail")
    }
}

/// Parses a graph document and validates it into a dual graph.
pub fn parse_graph_document(input: &str) -> Result<(DualGraph, GraphDocument), DocumentError> {
    let doc: GraphDocument = serde_json::from_str(input).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let graph = doc.to_graph()?;
    Ok((graph, doc))
}

/// Canonical encoding of a bare graph (no labels).
pub fn canonical_string(g: &DualGraph) -> String {
    GraphDocument::from_graph(g).to_canonical_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_fixture_documents() {
        let (g, _) = parse_graph_document(r#"{"components":2,"edges":[[1,2]]}"#).unwrap();
        assert_eq!(g, fixtures::bridge());

        let (g, _) = parse_graph_document(
            r#"{"components":4,"edges":[[1,2],[1,2],[1,3],[1,3],[2,4],[3,4]]}"#,
        )
        .unwrap();
        assert_eq!(g, fixtures::doubled_cycle());
    }

    #[test]
    fn rejects_disconnected_documents() {
        let err = parse_graph_document(r#"{"components":3,"edges":[[1,2]]}"#).unwrap_err();
        assert_eq!(err, DocumentError::Validation(Error::Disconnected));
    }

    #[test]
    fn reports_parse_locus() {
        let err = parse_graph_document(r#"{"components":2,"edges":[[1,"#).unwrap_err();
        assert!(matches!(err, DocumentError::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_label_mismatch() {
        let err = parse_graph_document(
            r#"{"components":2,"edges":[[1,2]],"labels":["only one"]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            DocumentError::LabelCount {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let canonical = r#"{"components":4,"edges":[[1,2],[1,2],[1,3],[1,3],[2,4],[3,4]]}"#;
        let (_, doc) = parse_graph_document(canonical).unwrap();
        assert_eq!(doc.to_canonical_string(), canonical);

        // Unsorted input normalizes to the same bytes.
        let scrambled = r#"{"components":4,"edges":[[4,2],[1,2],[3,1],[1,2],[1,3],[3,4]]}"#;
        let (_, doc) = parse_graph_document(scrambled).unwrap();
        assert_eq!(doc.to_canonical_string(), canonical);

        let labeled = r#"{"components":2,"edges":[[1,2]],"labels":["a","b"]}"#;
        let (_, doc) = parse_graph_document(labeled).unwrap();
        assert_eq!(doc.to_canonical_string(), labeled);
    }
}
