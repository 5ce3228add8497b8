//! The on-disk graph format: a UTF-8 JSON document with named vertices,
//! gain-labeled edges, and optional lattice and surface fields. This is the
//! only untrusted-input decoder in the system; everything it accepts has
//! been validated into a well-formed [`GainGraph`].

use crate::gaingraph::{GainGraph, GraphError};
use crate::oracle::{Lattice, OracleError};
use crate::verdict::Surface;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("edge references unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("k must be 0, 1 or 2, got {0}")]
    BadK(usize),
    #[error("lattice must be a 2 x {expected} array of rationals, got {got} rows")]
    BadLatticeShape { expected: usize, got: usize },
    #[error("bad rational {0:?} in lattice")]
    BadRational(String),
    #[error("lattice error: {0}")]
    Lattice(#[from] OracleError),
    #[error("unknown surface {0:?} (expected \"cylinder\" or \"torus\")")]
    BadSurface(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeDoc {
    pub tail: String,
    pub head: String,
    pub gain: Vec<i64>,
}

/// Serialized form of a gain graph. Vertex indices follow the order of the
/// `vertices` array; edge ids follow the order of the `edges` array.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates the document into a gain graph. The companion vertex-name
    /// list maps graph indices back to document names.
    pub fn to_graph(&self) -> Result<GainGraph, DocError> {
        if self.k > 2 {
            return Err(DocError::BadK(self.k));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, name) in self.vertices.iter().enumerate() {
            if index.insert(name, i).is_some() {
                return Err(DocError::DuplicateVertex(name.clone()));
            }
        }
        let mut triples = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let &tail = index
                .get(e.tail.as_str())
                .ok_or_else(|| DocError::UnknownVertex(e.tail.clone()))?;
            let &head = index
                .get(e.head.as_str())
                .ok_or_else(|| DocError::UnknownVertex(e.head.clone()))?;
            triples.push((tail, head, e.gain.clone()));
        }
        Ok(GainGraph::from_edges(self.k, self.vertices.len(), triples)?)
    }

    /// The document's lattice, defaulting to the identity columns.
    pub fn lattice(&self) -> Result<Lattice, DocError> {
        let Some(rows) = &self.lattice else {
            return Ok(Lattice::identity(self.k));
        };
        if rows.len() != 2 || rows.iter().any(|r| r.len() != self.k) {
            return Err(DocError::BadLatticeShape {
                expected: self.k,
                got: rows.len(),
            });
        }
        let mut cols = Vec::with_capacity(self.k);
        for j in 0..self.k {
            let mut col = [BigRational::default(), BigRational::default()];
            for (i, slot) in col.iter_mut().enumerate() {
                *slot = BigRational::from_str(rows[i][j].trim())
                    .map_err(|_| DocError::BadRational(rows[i][j].clone()))?;
            }
            cols.push(col);
        }
        Ok(Lattice::new(cols)?)
    }

    pub fn surface(&self) -> Result<Option<Surface>, DocError> {
        match self.surface.as_deref() {
            None => Ok(None),
            Some("cylinder") => Ok(Some(Surface::Cylinder)),
            Some("torus") => Ok(Some(Surface::Torus)),
            Some(other) => Err(DocError::BadSurface(other.to_string())),
        }
    }

    /// Rebuilds a document from a graph and its vertex names.
    pub fn from_graph(g: &GainGraph, names: &[String]) -> Self {
        GraphDocument {
            k: g.k(),
            vertices: names.to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    tail: names[e.tail].clone(),
                    head: names[e.head].clone(),
                    gain: e.gain.coords().to_vec(),
                })
                .collect(),
            lattice: None,
            surface: None,
        }
    }
}

/// End-to-end entry point for untrusted bytes: parse, validate, and touch
/// the derived accessors. Used directly by the fuzz harness.
pub fn parse_and_validate(bytes: &[u8]) -> Result<(GraphDocument, GainGraph), DocError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| DocError::Json(serde_json::Error::io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            e,
        ))))?;
    let doc = GraphDocument::parse(text)?;
    let graph = doc.to_graph()?;
    let _ = doc.lattice()?;
    let _ = doc.surface()?;
    Ok((doc, graph))
}
