//! Small hand-built tree pairs used by tests, examples and the CLI demos.
//!
//! All heights are integers. Node ids are listed next to each tree.

use crate::height::Height;
use crate::interleaving::{AnchoredInterleaving, Arrow, PartialInterleaving, TreePair};
use crate::tree::MergeTree;

fn tree(entries: &[(Option<i64>, Option<usize>)]) -> MergeTree {
    MergeTree::from_parents(
        entries.iter()
            .map(|&(h, parent)| (h.map(Height::from_int).unwrap_or(Height::Infinite), parent))
            .collect(),
    )
    .expect("fixture trees are valid")
}

fn h(v: i64) -> Height {
    Height::from_int(v)
}

/// A single leaf at 0 (`ℓ`, id 0).
pub fn single_leaf_at_zero() -> MergeTree {
    tree(&[(Some(0), Some(1)), (None, None)])
}

/// `ℓ@0` (id 0) versus `m@4` (id 0).
pub fn fix_a() -> TreePair {
    TreePair::new(single_leaf_at_zero(), tree(&[(Some(4), Some(1)), (None, None)]))
}

/// Leaves `u1@0` (0) and `u2@0` (1) merging at `s@6` (2), versus `ℓ@0` (0).
pub fn fix_b_vs_a() -> TreePair {
    TreePair::new(
        tree(&[(Some(0), Some(2)), (Some(0), Some(2)), (Some(6), Some(3)), (None, None)]),
        single_leaf_at_zero(),
    )
}

/// `p@0` (0), `q@0` (1), `s@8` (2) versus `p'@0` (0), `q'@2` (1), `s'@8` (2).
pub fn fix_c() -> TreePair {
    TreePair::new(
        tree(&[(Some(0), Some(2)), (Some(0), Some(2)), (Some(8), Some(3)), (None, None)]),
        tree(&[(Some(0), Some(2)), (Some(2), Some(2)), (Some(8), Some(3)), (None, None)]),
    )
}

/// The single constraint `q@0 → q'@2` on [`fix_c`].
pub fn fix_c_constraint(pair: &TreePair) -> PartialInterleaving {
    PartialInterleaving::from_arrows(
        pair,
        vec![Arrow::new(pair.first.vertex_point(1), pair.second.vertex_point(1))],
        vec![],
    )
}

/// The zigzag augmentation of the empty constraint on [`fix_b_vs_a`]:
/// `u1, u2 ↦ ℓ@3` and `ℓ@3 ↦ s`.
pub fn fix_b_augmentation(pair: &TreePair) -> PartialInterleaving {
    let l3 = pair.second.point(0, h(3)).expect("on the edge above ℓ");
    PartialInterleaving::from_arrows(
        pair,
        vec![
            Arrow::new(pair.first.vertex_point(0), l3.clone()),
            Arrow::new(pair.first.vertex_point(1), l3.clone()),
        ],
        vec![Arrow::new(l3, pair.first.vertex_point(2))],
    )
}

/// Arrows given as `(source carrier, source height, target carrier, target
/// height)` in the first and second tree; the root is written with height
/// `None`.
type AnchorRow = (usize, i64, usize, Option<i64>);

fn anchored(pair: &TreePair, forward: &[AnchorRow], backward: &[AnchorRow]) -> AnchoredInterleaving {
    let arrows = |from: &MergeTree, to: &MergeTree, anchors: &[AnchorRow]| -> Vec<Arrow> {
        anchors
            .iter()
            .map(|&(sc, sh, tc, th)| {
                let src = from.point(sc, h(sh)).expect("fixture point");
                let tgt = match th {
                    Some(th) => to.point(tc, h(th)).expect("fixture point"),
                    None => to.root_point(),
                };
                Arrow::new(src, tgt)
            })
            .collect()
    };
    let anchors = PartialInterleaving::from_arrows(
        pair,
        arrows(&pair.first, &pair.second, forward),
        arrows(&pair.second, &pair.first, backward),
    );
    AnchoredInterleaving::new(pair, anchors).expect("fixture anchors cover all vertices")
}

/// An optimal interleaving of [`fix_c`] that is not locally correct: `p` is
/// sent up to height 2 on the `p'` branch although `p'` itself is free.
pub fn fix_c_loose(pair: &TreePair) -> AnchoredInterleaving {
    anchored(
        pair,
        &[(0, 0, 0, Some(2)), (1, 0, 1, Some(2)), (2, 8, 2, Some(10))],
        &[(0, 0, 0, Some(2)), (1, 2, 1, Some(4)), (2, 8, 2, Some(10))],
    )
}

/// A tree pair with a deliberately loose optimal interleaving.
pub struct HandInstance {
    pub name: &'static str,
    pub pair: TreePair,
    pub distance: Height,
    pub loose: AnchoredInterleaving,
}

/// Three instances whose distance is realized by an arrow pair, a zigzag
/// pair, and both. Each loose interleaving shifts every point by the
/// distance, including points that could stay put.
pub fn hand_instances() -> Vec<HandInstance> {
    // p@0 (0), q@1 (1), s@10 (2) versus p'@0 (0), q'@5 (1), s'@10 (2)
    let arrow = TreePair::new(
        tree(&[(Some(0), Some(2)), (Some(1), Some(2)), (Some(10), Some(3)), (None, None)]),
        tree(&[(Some(0), Some(2)), (Some(5), Some(2)), (Some(10), Some(3)), (None, None)]),
    );
    let arrow_loose = anchored(
        &arrow,
        &[(0, 0, 0, Some(4)), (1, 1, 1, Some(5)), (2, 10, 2, Some(14))],
        &[(0, 0, 0, Some(4)), (1, 5, 1, Some(9)), (2, 10, 2, Some(14))],
    );

    // u1@0 (0), u2@0 (1), s@6 (2), w@0 (3), t@20 (4) versus ℓ@0 (0), w'@0 (1), t'@20 (2)
    let zigzag = TreePair::new(
        tree(&[
            (Some(0), Some(2)),
            (Some(0), Some(2)),
            (Some(6), Some(4)),
            (Some(0), Some(4)),
            (Some(20), Some(5)),
            (None, None),
        ]),
        tree(&[(Some(0), Some(2)), (Some(0), Some(2)), (Some(20), Some(3)), (None, None)]),
    );
    let zigzag_loose = anchored(
        &zigzag,
        &[(0, 0, 0, Some(3)), (1, 0, 0, Some(3)), (2, 6, 0, Some(9)), (3, 0, 1, Some(3)), (4, 20, 2, Some(23))],
        &[(0, 0, 0, Some(3)), (0, 3, 2, Some(6)), (1, 0, 3, Some(3)), (2, 20, 4, Some(23))],
    );

    // u1@0 (0), u2@0 (1), s@6 (2), q@0 (3), t@20 (4) versus ℓ@0 (0), q'@3 (1), t'@20 (2)
    let mixed = TreePair::new(
        tree(&[
            (Some(0), Some(2)),
            (Some(0), Some(2)),
            (Some(6), Some(4)),
            (Some(0), Some(4)),
            (Some(20), Some(5)),
            (None, None),
        ]),
        tree(&[(Some(0), Some(2)), (Some(3), Some(2)), (Some(20), Some(3)), (None, None)]),
    );
    let mixed_loose = anchored(
        &mixed,
        &[(0, 0, 0, Some(3)), (1, 0, 0, Some(3)), (2, 6, 0, Some(9)), (3, 0, 1, Some(3)), (4, 20, 2, Some(23))],
        &[(0, 0, 0, Some(3)), (0, 3, 2, Some(6)), (1, 3, 3, Some(6)), (2, 20, 4, Some(23))],
    );

    vec![
        HandInstance { name: "arrow pair", pair: arrow, distance: h(4), loose: arrow_loose },
        HandInstance { name: "zigzag pair", pair: zigzag, distance: h(3), loose: zigzag_loose },
        HandInstance { name: "mixed", pair: mixed, distance: h(3), loose: mixed_loose },
    ]
}
