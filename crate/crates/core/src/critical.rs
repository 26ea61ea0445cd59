//! Critical values, critical points and critical pairs.
//!
//! The interleaving distance between two merge trees is always one of
//! finitely many *critical values*: a height difference between a vertex of
//! one tree and a vertex of the other, or half the height difference between
//! two vertices of the same tree. With a constraint interleaving `P`, the
//! endpoints of `P`'s arrows join the vertices as *critical points* and the
//! cross-tree differences range over those instead.
//!
//! The root at infinity never takes part: differences against it are
//! undefined.

use std::fmt;

use crate::error::{Error, Result};
use crate::height::Height;
use crate::interleaving::{Direction, PartialInterleaving, TreePair};
use crate::tree::{MergeTree, NodeId, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `src` and `tgt` are critical points in the source and target tree of
    /// `direction`.
    Arrow { direction: Direction, src: Point, tgt: Point },
    /// Two vertices of the source tree of `direction`: the pair is used when
    /// the `direction` map sends `lower` to some `y` and the reverse map
    /// sends `y` to `upper`.
    Zigzag { direction: Direction, lower: NodeId, upper: NodeId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub kind: PairKind,
    pub value: Height,
}

impl fmt::Display for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PairKind::Arrow { direction, src, tgt } => write!(f, "arrow {direction} ({src}, {tgt}) = {}", self.value),
            PairKind::Zigzag { direction, lower, upper } => {
                write!(f, "zigzag {direction} ({lower}, {upper}) = {}", self.value)
            }
        }
    }
}

fn sorted_dedup(mut values: Vec<Height>) -> Vec<Height> {
    values.sort();
    values.dedup();
    values
}

fn vertex_heights(tree: &MergeTree) -> Vec<&Height> {
    tree.finite_vertices().map(|v| tree.height(v)).collect()
}

fn abs_differences(a: &[&Height], b: &[&Height]) -> Vec<Height> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.abs_diff(y).expect("finite heights"));
        }
    }
    out
}

fn half_differences(tree: &MergeTree) -> Vec<Height> {
    let heights = vertex_heights(tree);
    abs_differences(&heights, &heights).into_iter().map(|d| d.half()).collect()
}

/// The critical values `Δ(T1, T2)` in ascending order, without duplicates.
pub fn critical_values(pair: &TreePair) -> Vec<Height> {
    residual_critical_values(pair, &PartialInterleaving::empty())
}

/// Critical points of both trees: every finite vertex plus every finite
/// endpoint of an arrow of `constraints`, each in DFS order.
pub fn critical_points(pair: &TreePair, constraints: &PartialInterleaving) -> (Vec<Point>, Vec<Point>) {
    let collect = |direction: Direction| {
        let tree = pair.source(direction);
        let mut points: Vec<Point> = tree.finite_vertices().map(|v| tree.vertex_point(v)).collect();
        points.extend(constraints.map(direction).domain().cloned());
        points.extend(constraints.map(direction.reverse()).arrows().iter().map(|a| a.tgt.clone()));
        points.retain(|p| !p.is_root());
        points.sort_by(|a, b| tree.dfs_cmp(a, b));
        points.dedup();
        points
    };
    (collect(Direction::Forward), collect(Direction::Backward))
}

/// `Δ[P]`: cross-tree differences between critical points together with the
/// half differences of vertex heights within each tree.
pub fn residual_critical_values(pair: &TreePair, constraints: &PartialInterleaving) -> Vec<Height> {
    let (c1, c2) = critical_points(pair, constraints);
    let h1: Vec<&Height> = c1.iter().map(Point::height).collect();
    let h2: Vec<&Height> = c2.iter().map(Point::height).collect();
    let mut values = abs_differences(&h1, &h2);
    values.extend(half_differences(&pair.first));
    values.extend(half_differences(&pair.second));
    sorted_dedup(values)
}

/// Every critical pair: forward arrow pairs, backward arrow pairs, then
/// zigzag pairs on the first and on the second tree, each in DFS order.
pub fn critical_pairs(pair: &TreePair, constraints: &PartialInterleaving) -> Vec<CriticalPair> {
    let (c1, c2) = critical_points(pair, constraints);
    let mut out = Vec::new();
    for (direction, sources, targets) in [(Direction::Forward, &c1, &c2), (Direction::Backward, &c2, &c1)] {
        for src in sources {
            for tgt in targets {
                if src.height() <= tgt.height() {
                    let value = tgt.height().checked_sub(src.height()).expect("finite heights");
                    out.push(CriticalPair {
                        kind: PairKind::Arrow { direction, src: src.clone(), tgt: tgt.clone() },
                        value,
                    });
                }
            }
        }
    }
    for direction in Direction::BOTH {
        let tree = pair.source(direction);
        for lower in tree.finite_vertices() {
            for upper in tree.finite_vertices() {
                if tree.height(lower) <= tree.height(upper) {
                    let value = tree.height(upper).checked_sub(tree.height(lower)).expect("finite heights").half();
                    out.push(CriticalPair { kind: PairKind::Zigzag { direction, lower, upper }, value });
                }
            }
        }
    }
    out
}

/// The critical pairs whose value is exactly `delta`.
pub fn realizing_pairs(pair: &TreePair, constraints: &PartialInterleaving, delta: &Height) -> Result<Vec<CriticalPair>> {
    let pairs: Vec<CriticalPair> =
        critical_pairs(pair, constraints).into_iter().filter(|p| p.value == *delta).collect();
    if pairs.is_empty() {
        return Err(Error::NotCritical(delta.clone()));
    }
    Ok(pairs)
}

/// Whether `maps` uses the critical pair.
pub fn pair_is_used(pair: &TreePair, maps: &PartialInterleaving, critical: &CriticalPair) -> bool {
    match &critical.kind {
        PairKind::Arrow { direction, src, tgt } => maps.map(*direction).get(src) == Some(tgt),
        PairKind::Zigzag { direction, lower, upper } => {
            let tree = pair.source(*direction);
            let Some(y) = maps.map(*direction).get(&tree.vertex_point(*lower)) else {
                return false;
            };
            *y.height() == tree.height(*lower) + &critical.value
                && maps.map(direction.reverse()).get(y) == Some(&tree.vertex_point(*upper))
        }
    }
}
