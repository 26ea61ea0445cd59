//! Merge trees over exact heights and points on their topological realization.
//!
//! A point is stored as the lower endpoint of the edge it lies on (its
//! *carrier*) together with its exact height, so two points are equal exactly
//! when their fields are. The root sits at `+inf` and is the only point whose
//! carrier is the root node.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result, Violation};
use crate::height::Height;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub height: Height,
    pub parent: Option<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    carrier: NodeId,
    height: Height,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            f.write_str("root")
        } else {
            write!(f, "{}@{}", self.carrier, self.height)
        }
    }
}

impl Point {
    pub fn carrier(&self) -> NodeId {
        self.carrier
    }

    pub fn height(&self) -> &Height {
        &self.height
    }

    pub fn is_root(&self) -> bool {
        self.height.is_infinite()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeTree {
    nodes: Vec<Node>,
    root: NodeId,
    children: Vec<Vec<NodeId>>,
    preorder: Vec<NodeId>,
    preorder_pos: Vec<usize>,
    postorder_pos: Vec<usize>,
}

/// Checks every merge-tree invariant and reports the first one violated.
///
/// Nodes may be listed in any order but their ids must be exactly `0..n`.
pub fn validate(nodes: &[Node]) -> Result<(), Violation> {
    if nodes.is_empty() {
        return Err(Violation::Empty);
    }
    let mut ids: Vec<NodeId> = nodes.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    for (expected, &found) in ids.iter().enumerate() {
        if expected != found {
            return Err(Violation::NonDenseIds { expected, found });
        }
    }
    let n = nodes.len();
    let mut by_id: Vec<&Node> = nodes.iter().collect();
    by_id.sort_by_key(|node| node.id);
    for node in &by_id {
        if let Some(parent) = node.parent {
            if parent >= n {
                return Err(Violation::UnknownParent { node: node.id, parent });
            }
        }
    }
    let mut roots = by_id.iter().filter(|node| node.parent.is_none()).map(|node| node.id);
    let root = roots.next().ok_or(Violation::NoRoot)?;
    if let Some(second) = roots.next() {
        return Err(Violation::MultipleRoots { first: root, second });
    }
    // every walk towards the root must reach it within n steps
    for node in &by_id {
        let mut current = node.id;
        let mut steps = 0;
        while let Some(parent) = by_id[current].parent {
            current = parent;
            steps += 1;
            if steps > n {
                return Err(Violation::Cycle { node: node.id });
            }
        }
    }
    if by_id[root].height.is_finite() {
        return Err(Violation::RootNotInfinite { node: root });
    }
    for node in &by_id {
        if node.id != root && node.height.is_infinite() {
            return Err(Violation::InfiniteNonRoot { node: node.id });
        }
    }
    for node in &by_id {
        if let Some(parent) = node.parent {
            let parent_height = &by_id[parent].height;
            if node.height >= *parent_height {
                return Err(Violation::NonIncreasing {
                    node: node.id,
                    height: node.height.clone(),
                    parent,
                    parent_height: parent_height.clone(),
                });
            }
        }
    }
    Ok(())
}

impl MergeTree {
    pub fn new(mut nodes: Vec<Node>) -> Result<Self> {
        validate(&nodes)?;
        nodes.sort_by_key(|node| node.id);
        let n = nodes.len();
        let root = nodes.iter().position(|node| node.parent.is_none()).expect("validated");
        let mut children = vec![Vec::new(); n];
        for node in &nodes {
            if let Some(parent) = node.parent {
                children[parent].push(node.id);
            }
        }
        let mut preorder = Vec::with_capacity(n);
        let mut postorder = Vec::with_capacity(n);
        let mut stack = vec![(root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                postorder.push(node);
                continue;
            }
            preorder.push(node);
            stack.push((node, true));
            for &child in children[node].iter().rev() {
                stack.push((child, false));
            }
        }
        let mut preorder_pos = vec![0; n];
        let mut postorder_pos = vec![0; n];
        for (i, &node) in preorder.iter().enumerate() {
            preorder_pos[node] = i;
        }
        for (i, &node) in postorder.iter().enumerate() {
            postorder_pos[node] = i;
        }
        Ok(MergeTree { nodes, root, children, preorder, preorder_pos, postorder_pos })
    }

    /// Builds a tree from `(height, parent)` pairs indexed by node id.
    pub fn from_parents(entries: Vec<(Height, Option<NodeId>)>) -> Result<Self> {
        let nodes = entries
            .into_iter()
            .enumerate()
            .map(|(id, (height, parent))| Node { id, height, parent })
            .collect();
        MergeTree::new(nodes)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn height(&self, node: NodeId) -> &Height {
        &self.nodes[node].height
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.nodes[node].parent
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.children[node]
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.children[node].is_empty()
    }

    /// Finite-height vertices in DFS pre-order (children visited by id).
    pub fn finite_vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.preorder.iter().copied().filter(move |&v| v != self.root)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.finite_vertices().filter(move |&v| self.is_leaf(v))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    pub fn vertex_point(&self, node: NodeId) -> Point {
        Point { carrier: node, height: self.nodes[node].height.clone() }
    }

    pub fn root_point(&self) -> Point {
        Point { carrier: self.root, height: Height::Infinite }
    }

    /// The point at `height` on the edge above `carrier`.
    pub fn point(&self, carrier: NodeId, height: Height) -> Result<Point> {
        if carrier >= self.nodes.len() {
            return Err(Error::InvalidPoint(format!("unknown carrier {carrier}")));
        }
        if carrier == self.root {
            if height.is_infinite() {
                return Ok(self.root_point());
            }
            return Err(Error::InvalidPoint(format!("root carrier needs height inf, got {height}")));
        }
        let parent = self.nodes[carrier].parent.expect("non-root has a parent");
        if height < self.nodes[carrier].height || height >= self.nodes[parent].height {
            return Err(Error::InvalidPoint(format!(
                "height {height} is outside the edge [{}, {}) above node {carrier}",
                self.nodes[carrier].height, self.nodes[parent].height
            )));
        }
        Ok(Point { carrier, height })
    }

    pub fn is_vertex(&self, point: &Point) -> bool {
        point.height == self.nodes[point.carrier].height
    }

    /// The unique ancestor of `x` at height `h`.
    pub fn ancestor_at(&self, x: &Point, h: &Height) -> Result<Point> {
        if *h < x.height {
            return Err(Error::Precondition(format!(
                "ancestor height {h} lies below the point height {}",
                x.height
            )));
        }
        if h.is_infinite() {
            return Ok(self.root_point());
        }
        Ok(Point { carrier: self.climb(x.carrier, h), height: h.clone() })
    }

    /// Highest vertex on the path up from `node` whose height is at most `h`.
    fn climb(&self, mut node: NodeId, h: &Height) -> NodeId {
        while let Some(parent) = self.nodes[node].parent {
            if self.nodes[parent].height <= *h {
                node = parent;
            } else {
                break;
            }
        }
        node
    }

    /// `x1 ⪯ x2`: there is a monotonically increasing path from `x1` to `x2`.
    pub fn is_descendant(&self, x1: &Point, x2: &Point) -> bool {
        if x2.is_root() {
            return true;
        }
        if x1.is_root() || x1.height > x2.height {
            return false;
        }
        self.climb(x1.carrier, &x2.height) == x2.carrier
    }

    /// One point per edge whose half-open height interval contains `h`, in
    /// DFS order of the carriers.
    pub fn points_at_height(&self, h: &Height) -> Vec<Point> {
        if h.is_infinite() {
            return vec![self.root_point()];
        }
        self.finite_vertices()
            .filter(|&v| {
                let parent = self.nodes[v].parent.expect("finite vertex has a parent");
                self.nodes[v].height <= *h && *h < self.nodes[parent].height
            })
            .map(|v| Point { carrier: v, height: h.clone() })
            .collect()
    }

    /// DFS (pre-order) position of a node.
    pub fn preorder_position(&self, node: NodeId) -> usize {
        self.preorder_pos[node]
    }

    /// Deterministic point order: DFS position of the carrier, then height.
    pub fn dfs_cmp(&self, a: &Point, b: &Point) -> Ordering {
        self.preorder_pos[a.carrier]
            .cmp(&self.preorder_pos[b.carrier])
            .then_with(|| a.height.cmp(&b.height))
    }

    /// Order in which every point comes after all of its strict descendants.
    pub fn bottom_up_cmp(&self, a: &Point, b: &Point) -> Ordering {
        self.postorder_pos[a.carrier]
            .cmp(&self.postorder_pos[b.carrier])
            .then_with(|| a.height.cmp(&b.height))
    }

    pub fn max_finite_height(&self) -> Option<&Height> {
        self.finite_vertices().map(|v| &self.nodes[v].height).max()
    }
}
