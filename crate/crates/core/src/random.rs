//! Seeded generators of small random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::height::Height;
use crate::interleaving::{Arrow, Direction, PartialInterleaving, TreePair, UpMap};
use crate::tree::{MergeTree, Point};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random merge tree with between 1 and `max_leaves` leaves and integer
/// heights in `0..=16`.
///
/// Leaves start at heights up to 4; components merge pairwise, each merge
/// 1 to 3 above the higher of its two parts. Occasionally a degree-two vertex
/// is inserted on an edge.
pub fn random_tree(rng: &mut impl Rng, max_leaves: usize) -> MergeTree {
    let leaves = rng.gen_range(1..=max_leaves.max(1));
    // (height, parent) per node; components are (node, top height)
    let mut raw: Vec<(i64, Option<usize>)> = Vec::new();
    let mut tops: Vec<usize> = Vec::new();
    for _ in 0..leaves {
        raw.push((rng.gen_range(0..=4), None));
        tops.push(raw.len() - 1);
    }
    while tops.len() > 1 {
        tops.shuffle(rng);
        let a = tops.pop().expect("two components");
        let b = tops.pop().expect("two components");
        let height = raw[a].0.max(raw[b].0) + rng.gen_range(1..=3);
        raw.push((height, None));
        let merged = raw.len() - 1;
        raw[a].1 = Some(merged);
        raw[b].1 = Some(merged);
        tops.push(merged);
    }
    let top = tops[0];
    let mut nodes: Vec<(Height, Option<usize>)> =
        raw.iter().map(|&(h, parent)| (Height::from_int(h), parent)).collect();
    nodes.push((Height::Infinite, None));
    let root = nodes.len() - 1;
    nodes[top].1 = Some(root);
    if rng.gen_bool(0.2) {
        insert_chain_vertex(rng, &mut nodes);
    }
    MergeTree::from_parents(nodes).expect("generated trees are valid")
}

/// Splits a random finite edge with a gap of at least 2 at an integer height.
fn insert_chain_vertex(rng: &mut impl Rng, nodes: &mut Vec<(Height, Option<usize>)>) {
    let root = nodes.len() - 1;
    let mut edges: Vec<(usize, i64, i64)> = Vec::new();
    for (child, (h, parent)) in nodes.iter().enumerate() {
        if let Some(p) = *parent {
            if p != root {
                let lo = integer(h);
                let hi = integer(&nodes[p].0);
                if hi - lo >= 2 {
                    edges.push((child, lo, hi));
                }
            }
        }
    }
    if let Some(&(child, lo, hi)) = edges.choose(rng) {
        let parent = nodes[child].1;
        nodes.push((Height::from_int(rng.gen_range(lo + 1..hi)), parent));
        let new = nodes.len() - 1;
        nodes[child].1 = Some(new);
    }
}

fn integer(h: &Height) -> i64 {
    let r = h.as_rational().expect("finite");
    r.to_integer().try_into().expect("small heights")
}

pub fn random_pair(rng: &mut impl Rng, max_leaves: usize) -> TreePair {
    TreePair::new(random_tree(rng, max_leaves), random_tree(rng, max_leaves))
}

/// A random point with integer height: a vertex, or a point inside a finite
/// edge.
pub fn random_point(rng: &mut impl Rng, tree: &MergeTree) -> Point {
    let vertices: Vec<usize> = tree.finite_vertices().collect();
    let v = *vertices.choose(rng).expect("trees have a finite vertex");
    let lo = integer(tree.height(v));
    let parent = tree.parent(v).expect("finite vertices have parents");
    let hi = if parent == tree.root() { lo + 6 } else { integer(tree.height(parent)) };
    tree.point(v, Height::from_int(rng.gen_range(lo..hi))).expect("height inside the edge")
}

/// A random arrow out of `source` with a target up to `max_shift` higher.
pub fn random_arrow(rng: &mut impl Rng, pair: &TreePair, direction: Direction, max_shift: i64) -> Arrow {
    let src = random_point(rng, pair.source(direction));
    let target = pair.target(direction);
    loop {
        let level = src.height() + &Height::from_int(rng.gen_range(0..=max_shift));
        let options = target.points_at_height(&level);
        if let Some(tgt) = options.choose(rng) {
            return Arrow::new(src, tgt.clone());
        }
        // nothing at this height: every tree reaches arbitrarily high
        if rng.gen_bool(0.1) {
            let highest = target.max_finite_height().expect("finite vertex").clone();
            let level = if highest > *src.height() { highest } else { src.height().clone() };
            let tgt = target.points_at_height(&level).into_iter().next().expect("root edge");
            return Arrow::new(src, tgt);
        }
    }
}

/// A random valid partial interleaving with at most `max_arrows` arrows,
/// built by rejection: candidate arrows that would break validity are
/// discarded.
pub fn random_partial_interleaving(rng: &mut impl Rng, pair: &TreePair, max_arrows: usize) -> PartialInterleaving {
    let wanted = rng.gen_range(0..=max_arrows);
    let mut p = PartialInterleaving::empty();
    for _ in 0..wanted * 4 {
        if p.len() == wanted {
            break;
        }
        let direction = if rng.gen_bool(0.5) { Direction::Forward } else { Direction::Backward };
        let arrow = random_arrow(rng, pair, direction, 8);
        if p.map(direction).get(&arrow.src).is_some() {
            continue;
        }
        let mut next = p.clone();
        next.map_mut(direction).insert_keep_higher(pair, arrow);
        if next.validate(pair).is_ok() {
            p = next;
        }
    }
    p
}

/// A random valid partial up-map with at most `max_arrows` arrows.
pub fn random_up_map(rng: &mut impl Rng, pair: &TreePair, direction: Direction, max_arrows: usize) -> UpMap {
    let wanted = rng.gen_range(0..=max_arrows);
    let mut map = UpMap::empty(direction);
    for _ in 0..wanted * 4 {
        if map.len() == wanted {
            break;
        }
        let arrow = random_arrow(rng, pair, direction, 8);
        if map.get(&arrow.src).is_some() {
            continue;
        }
        let mut next = map.clone();
        next.insert_keep_higher(pair, arrow);
        if next.validate(pair).is_ok() {
            map = next;
        }
    }
    map
}
