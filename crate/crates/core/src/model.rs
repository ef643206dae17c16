//! On-disk JSON model format.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dimer::{Color, DimerModel, Edge, Node};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub name: String,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
    /// Counterclockwise cyclic order of edge ids around each node.
    pub rotation: BTreeMap<String, Vec<String>>,
    /// Face index of the normalizing vertex; defaults to 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub black: String,
    pub white: String,
    /// Deck translation from the black endpoint's copy to the white one's.
    pub winding: [i64; 2],
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(file.format_version));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Resolves ids. Colors are checked here only as far as needed to build
    /// the structure; everything else is left to validation.
    pub fn to_model(&self) -> Result<DimerModel> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(self.format_version));
        }
        let mut node_index = BTreeMap::new();
        let mut nodes = Vec::new();
        for n in &self.nodes {
            if node_index.insert(n.id.clone(), nodes.len()).is_some() {
                return Err(Error::DuplicateId(n.id.clone()));
            }
            nodes.push(Node {
                id: n.id.clone(),
                color: n.color,
            });
        }
        let mut edge_index = BTreeMap::new();
        let mut edges = Vec::new();
        for e in &self.edges {
            if edge_index.insert(e.id.clone(), edges.len()).is_some() || node_index.contains_key(&e.id) {
                return Err(Error::DuplicateId(e.id.clone()));
            }
            let lookup = |id: &String| node_index.get(id).copied().ok_or_else(|| Error::UnknownNode(id.clone()));
            edges.push(Edge {
                id: e.id.clone(),
                black: lookup(&e.black)?,
                white: lookup(&e.white)?,
                winding: e.winding,
            });
        }
        let mut rotation = vec![Vec::new(); nodes.len()];
        for (id, order) in &self.rotation {
            let v = *node_index.get(id).ok_or_else(|| Error::UnknownNode(id.clone()))?;
            let mut seen = BTreeSet::new();
            for eid in order {
                let e = *edge_index.get(eid).ok_or_else(|| Error::InvalidRotation {
                    node: id.clone(),
                    reason: format!("unknown edge `{eid}`"),
                })?;
                if !seen.insert(e) {
                    return Err(Error::InvalidRotation {
                        node: id.clone(),
                        reason: format!("edge `{eid}` listed twice"),
                    });
                }
                rotation[v].push(e);
            }
        }
        Ok(DimerModel {
            name: self.name.clone(),
            nodes,
            edges,
            rotation,
            v0: self.v0,
        })
    }

    pub fn from_model(model: &DimerModel) -> ModelFile {
        ModelFile {
            format_version: FORMAT_VERSION,
            name: model.name.clone(),
            nodes: model
                .nodes
                .iter()
                .map(|n| NodeSpec {
                    id: n.id.clone(),
                    color: n.color,
                })
                .collect(),
            edges: model
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    black: model.nodes[e.black].id.clone(),
                    white: model.nodes[e.white].id.clone(),
                    winding: e.winding,
                })
                .collect(),
            rotation: model
                .nodes
                .iter()
                .zip(&model.rotation)
                .map(|(n, r)| (n.id.clone(), r.iter().map(|&e| model.edges[e].id.clone()).collect()))
                .collect(),
            v0: model.v0,
        }
    }
}
