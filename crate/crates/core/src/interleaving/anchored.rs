//! Finite representation of complete interleavings.
//!
//! A complete up-map is stored through anchor arrows whose sources include
//! every finite vertex. Any other point `x` is evaluated from the highest
//! anchor `v_x` on its own edge below it:
//! `eval(x) = an(tgt(v_x), max(f(x), f(tgt(v_x))))`. Because every edge has an
//! anchor at its lower vertex, `v_x` always exists.
//!
//! For a point `x` above anchor `v` with target `w`, the arrow `(x, eval(x))`
//! either has shift zero or equals `(x, w)`, whose shift is below that of
//! `(v, w)`; and if `(v, w)` lies in a fan then so does `(x, w)`. So the
//! supremum of (residual) shifts over all points is attained at anchors, and
//! anchor-level checks of ancestor preservation and round trips extend to
//! every point.

use std::fmt;

use crate::error::{Error, Result};
use crate::height::Height;
use crate::interleaving::{check_delta, Arrow, Direction, PartialInterleaving, TreePair};
use crate::tree::{NodeId, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredInterleaving {
    anchors: PartialInterleaving,
}

/// Reason an anchored interleaving fails to represent a complete interleaving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletenessViolation {
    MissingVertexAnchor { direction: Direction, node: NodeId },
    NotAncestorPreserving { direction: Direction, lower: Arrow, upper: Arrow },
    CrossCondition { forward: Arrow, backward: Arrow },
    RoundTrip { direction: Direction, source: Point, image: Point },
}

impl fmt::Display for CompletenessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletenessViolation::MissingVertexAnchor { direction, node } => {
                write!(f, "{direction} map has no anchor at vertex {node}")
            }
            CompletenessViolation::NotAncestorPreserving { direction, lower, upper } => {
                write!(f, "{direction} map does not preserve ancestors: {lower} vs {upper}")
            }
            CompletenessViolation::CrossCondition { forward, backward } => {
                write!(f, "cross-condition fails between forward {forward} and backward {backward}")
            }
            CompletenessViolation::RoundTrip { direction, source, image } => {
                write!(f, "round trip of {direction} anchor {source} lands at {image}, which is not an ancestor")
            }
        }
    }
}

impl std::error::Error for CompletenessViolation {}

impl AnchoredInterleaving {
    /// Wraps anchor arrows; checks point validity and that every finite
    /// vertex is anchored. Completeness is checked by
    /// [`verify_complete`](Self::verify_complete).
    pub fn new(pair: &TreePair, anchors: PartialInterleaving) -> Result<Self> {
        anchors.forward.validate_structure(pair)?;
        anchors.backward.validate_structure(pair)?;
        let result = AnchoredInterleaving { anchors };
        if let Some((direction, node)) = result.missing_vertex(pair) {
            return Err(Error::InvalidInterleaving(format!("{direction} map has no anchor at vertex {node}")));
        }
        Ok(result)
    }

    pub fn anchors(&self) -> &PartialInterleaving {
        &self.anchors
    }

    pub fn into_anchors(self) -> PartialInterleaving {
        self.anchors
    }

    pub fn arrows(&self) -> impl Iterator<Item = (Direction, &Arrow)> {
        self.anchors.arrows()
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    fn missing_vertex(&self, pair: &TreePair) -> Option<(Direction, NodeId)> {
        Direction::BOTH.into_iter().find_map(|direction| {
            let source = pair.source(direction);
            let map = self.anchors.map(direction);
            source
                .finite_vertices()
                .find(|&v| map.get(&source.vertex_point(v)).is_none())
                .map(|v| (direction, v))
        })
    }

    /// Highest anchor on the edge of `x` at or below `x`.
    fn anchor_below(&self, direction: Direction, x: &Point) -> Option<&Arrow> {
        self.anchors
            .map(direction)
            .arrows()
            .iter()
            .filter(|a| a.src.carrier() == x.carrier() && a.src.height() <= x.height())
            .max_by(|a, b| a.src.height().cmp(b.src.height()))
    }

    /// Image of `x` under the complete map in `direction`.
    pub fn eval(&self, pair: &TreePair, direction: Direction, x: &Point) -> Result<Point> {
        let target = pair.target(direction);
        if x.is_root() {
            return Ok(target.root_point());
        }
        let anchor = self
            .anchor_below(direction, x)
            .ok_or_else(|| Error::InvalidInterleaving(format!("no {direction} anchor below {x}")))?;
        let level = x.height().max(anchor.tgt.height()).clone();
        target.ancestor_at(&anchor.tgt, &level)
    }

    /// Checks that the anchors represent a complete interleaving: vertex
    /// coverage, ancestor preservation, `eval ∘ eval ⪰ id` at every anchor
    /// source in both directions, and the cross-condition between anchors.
    pub fn verify_complete(&self, pair: &TreePair) -> Result<(), CompletenessViolation> {
        if let Some((direction, node)) = self.missing_vertex(pair) {
            return Err(CompletenessViolation::MissingVertexAnchor { direction, node });
        }
        for direction in Direction::BOTH {
            if let Some((lower, upper)) = self.anchors.map(direction).ancestor_violation(pair) {
                return Err(CompletenessViolation::NotAncestorPreserving {
                    direction,
                    lower: lower.clone(),
                    upper: upper.clone(),
                });
            }
        }
        for direction in Direction::BOTH {
            let source = pair.source(direction);
            for anchor in self.anchors.map(direction).arrows() {
                let image = self.eval(pair, direction.reverse(), &anchor.tgt).expect("vertices are anchored");
                if !source.is_descendant(&anchor.src, &image) {
                    return Err(CompletenessViolation::RoundTrip { direction, source: anchor.src.clone(), image });
                }
            }
        }
        if let Some((forward, backward)) = self.anchors.cross_violation(pair) {
            return Err(CompletenessViolation::CrossCondition { forward: forward.clone(), backward: backward.clone() });
        }
        Ok(())
    }

    /// Largest plain shift over the anchor arrows.
    pub fn shift(&self) -> Height {
        self.anchors.shift()
    }

    /// Residual shift relative to `constraints`, i.e. the maximum over anchor
    /// arrows (see the module docs for why anchors attain the supremum).
    pub fn residual_shift(&self, pair: &TreePair, constraints: &PartialInterleaving) -> Height {
        self.anchors.residual_shift(constraints, pair)
    }

    pub fn extends(&self, pair: &TreePair, constraints: &PartialInterleaving) -> bool {
        self.anchors.extends(constraints, pair)
    }

    /// Lifts every anchor target to height at least `f(src) + δ`.
    pub fn lift(&self, pair: &TreePair, delta: &Height) -> Result<AnchoredInterleaving> {
        Ok(AnchoredInterleaving { anchors: self.anchors.lift(pair, delta)? })
    }

    /// Image of `x` under the uniform-shift rule `an(tgt(v_x), f(x) + δ)`;
    /// `None` when the anchor target already lies above that height.
    fn eval_uniform(&self, pair: &TreePair, direction: Direction, x: &Point, delta: &Height) -> Option<Point> {
        let target = pair.target(direction);
        if x.is_root() {
            return Some(target.root_point());
        }
        let anchor = self.anchor_below(direction, x)?;
        target.ancestor_at(&anchor.tgt, &(x.height() + delta)).ok()
    }

    /// Whether the anchors describe `δ`-compatible maps: every anchor arrow
    /// has shift exactly `δ`, and each round trip (with the uniform-shift
    /// rule at non-anchor points) ends exactly at `an(v, f(v) + 2δ)`.
    pub fn is_delta_compatible(&self, pair: &TreePair, delta: &Height) -> bool {
        if check_delta(delta).is_err() {
            return false;
        }
        if self.anchors.arrows().any(|(_, a)| a.shift() != *delta) {
            return false;
        }
        let twice = delta + delta;
        for direction in Direction::BOTH {
            let source = pair.source(direction);
            for anchor in self.anchors.map(direction).arrows() {
                let Some(back) = self.eval_uniform(pair, direction.reverse(), &anchor.tgt, delta) else {
                    return false;
                };
                let expected = source.ancestor_at(&anchor.src, &(anchor.src.height() + &twice)).expect("upward");
                if back != expected {
                    return false;
                }
            }
        }
        true
    }
}
