//! JSON encodings of trees and interleavings.
//!
//! Heights are strings (`"3"`, `"7/2"`, `"inf"`). A point is
//! `{"carrier": id, "height": h}`; the root point has `"carrier": null`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::height::Height;
use crate::interleaving::{AnchoredInterleaving, Arrow, Direction, PartialInterleaving, TreePair};
use crate::tree::{MergeTree, Node, Point};

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    height: String,
    parent: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct PointDoc {
    carrier: Option<usize>,
    height: String,
}

#[derive(Serialize, Deserialize)]
struct ArrowDoc {
    src: PointDoc,
    tgt: PointDoc,
}

#[derive(Serialize, Deserialize)]
struct InterleavingDoc {
    forward: Vec<ArrowDoc>,
    backward: Vec<ArrowDoc>,
}

fn parse_height(text: &str) -> Result<Height> {
    Ok(text.parse::<Height>()?)
}

pub fn tree_to_json(tree: &MergeTree) -> String {
    let doc = TreeDoc {
        nodes: tree
            .nodes()
            .iter()
            .map(|n| NodeDoc { id: n.id, height: n.height.to_string(), parent: n.parent })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Parses and validates a tree.
pub fn tree_from_json(text: &str) -> Result<MergeTree> {
    let doc: TreeDoc = serde_json::from_str(text)?;
    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| Ok(Node { id: n.id, height: parse_height(&n.height)?, parent: n.parent }))
        .collect::<Result<Vec<_>>>()?;
    MergeTree::new(nodes)
}

/// Parses a node list without validating it, so that a broken tree can be
/// reported violation by violation.
pub fn nodes_from_json(text: &str) -> Result<Vec<Node>> {
    let doc: TreeDoc = serde_json::from_str(text)?;
    doc.nodes
        .into_iter()
        .map(|n| Ok(Node { id: n.id, height: parse_height(&n.height)?, parent: n.parent }))
        .collect()
}

fn point_doc(p: &Point) -> PointDoc {
    PointDoc { carrier: (!p.is_root()).then(|| p.carrier()), height: p.height().to_string() }
}

fn point_from_doc(tree: &MergeTree, doc: &PointDoc) -> Result<Point> {
    let height = parse_height(&doc.height)?;
    match doc.carrier {
        Some(carrier) => tree.point(carrier, height),
        None if height.is_infinite() => Ok(tree.root_point()),
        None => Err(Error::InvalidPoint(format!("a point without carrier must be the root, got height {height}"))),
    }
}

pub fn interleaving_to_json(p: &PartialInterleaving) -> String {
    let arrows = |direction: Direction| {
        p.map(direction).arrows().iter().map(|a| ArrowDoc { src: point_doc(&a.src), tgt: point_doc(&a.tgt) }).collect()
    };
    let doc = InterleavingDoc { forward: arrows(Direction::Forward), backward: arrows(Direction::Backward) };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Parses and validates a partial interleaving between the trees of `pair`.
pub fn interleaving_from_json(pair: &TreePair, text: &str) -> Result<PartialInterleaving> {
    let doc: InterleavingDoc = serde_json::from_str(text)?;
    let arrows = |direction: Direction, docs: &[ArrowDoc]| -> Result<Vec<Arrow>> {
        docs.iter()
            .map(|a| {
                Ok(Arrow::new(
                    point_from_doc(pair.source(direction), &a.src)?,
                    point_from_doc(pair.target(direction), &a.tgt)?,
                ))
            })
            .collect()
    };
    PartialInterleaving::new(pair, arrows(Direction::Forward, &doc.forward)?, arrows(Direction::Backward, &doc.backward)?)
}

pub fn anchored_from_json(pair: &TreePair, text: &str) -> Result<AnchoredInterleaving> {
    AnchoredInterleaving::new(pair, interleaving_from_json(pair, text)?)
}
