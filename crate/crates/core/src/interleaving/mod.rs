//! Arrows, partial up-maps and partial interleavings between two merge trees.
//!
//! An arrow is a pair of points `(x, y)` in opposite trees with `f(x) ≤ f(y)`;
//! a partial up-map is a finite, ancestor-preserving set of arrows with
//! distinct sources, and a partial interleaving pairs one such map in each
//! direction subject to the cross-condition. Fans and residual shifts measure
//! how far a candidate map strays from a fixed set of constraint arrows.

mod anchored;

use std::cmp::Ordering;
use std::fmt;

pub use anchored::{AnchoredInterleaving, CompletenessViolation};

use crate::error::{Error, Result};
use crate::height::Height;
use crate::tree::{MergeTree, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// From the first tree to the second.
    Forward,
    /// From the second tree to the first.
    Backward,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Backward];

    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Forward => f.write_str("forward"),
            Direction::Backward => f.write_str("backward"),
        }
    }
}

/// The two merge trees being compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePair {
    pub first: MergeTree,
    pub second: MergeTree,
}

impl TreePair {
    pub fn new(first: MergeTree, second: MergeTree) -> Self {
        TreePair { first, second }
    }

    /// The tree holding the sources of arrows in `direction`.
    pub fn source(&self, direction: Direction) -> &MergeTree {
        match direction {
            Direction::Forward => &self.first,
            Direction::Backward => &self.second,
        }
    }

    /// The tree holding the targets of arrows in `direction`.
    pub fn target(&self, direction: Direction) -> &MergeTree {
        self.source(direction.reverse())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub src: Point,
    pub tgt: Point,
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.src, self.tgt)
    }
}

impl Arrow {
    pub fn new(src: Point, tgt: Point) -> Self {
        Arrow { src, tgt }
    }

    /// Height difference between target and source. An arrow from the root
    /// can only point at the root and has shift zero.
    pub fn shift(&self) -> Height {
        if self.src.is_root() {
            return Height::zero();
        }
        self.tgt.height().checked_sub(self.src.height()).expect("finite source")
    }

    pub fn is_valid(&self) -> bool {
        self.src.height() <= self.tgt.height()
    }

    /// Same source and a target at or above `other`'s target.
    pub fn extends(&self, other: &Arrow, target_tree: &MergeTree) -> bool {
        self.src == other.src && target_tree.is_descendant(&other.tgt, &self.tgt)
    }

    pub fn uses(&self, other: &Arrow) -> bool {
        self == other
    }
}

/// A finite partial up-map: arrows with pairwise distinct sources, kept in
/// DFS order of their sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpMap {
    direction: Direction,
    arrows: Vec<Arrow>,
}

impl UpMap {
    pub fn empty(direction: Direction) -> Self {
        UpMap { direction, arrows: Vec::new() }
    }

    /// Builds a map after checking point validity, heights, distinct sources
    /// and ancestor preservation.
    pub fn new(pair: &TreePair, direction: Direction, arrows: Vec<Arrow>) -> Result<Self> {
        let map = UpMap::from_arrows(pair, direction, arrows);
        map.validate(pair)?;
        Ok(map)
    }

    /// Sorts the arrows into canonical order without validating them.
    pub fn from_arrows(pair: &TreePair, direction: Direction, mut arrows: Vec<Arrow>) -> Self {
        let source = pair.source(direction);
        arrows.sort_by(|a, b| source.dfs_cmp(&a.src, &b.src).then_with(|| a.tgt.cmp(&b.tgt)));
        UpMap { direction, arrows }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn get(&self, src: &Point) -> Option<&Point> {
        self.arrows.iter().find(|a| a.src == *src).map(|a| &a.tgt)
    }

    pub fn contains(&self, arrow: &Arrow) -> bool {
        self.get(&arrow.src) == Some(&arrow.tgt)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Point> {
        self.arrows.iter().map(|a| &a.src)
    }

    /// Largest arrow shift; zero for the empty map.
    pub fn shift(&self) -> Height {
        self.arrows.iter().map(Arrow::shift).max().unwrap_or_else(Height::zero)
    }

    pub fn validate(&self, pair: &TreePair) -> Result<()> {
        self.validate_structure(pair)?;
        if let Some((a, b)) = self.ancestor_violation(pair) {
            return Err(Error::InvalidInterleaving(format!(
                "{} map does not preserve ancestors: {a} and {b}",
                self.direction
            )));
        }
        Ok(())
    }

    /// Point validity, upward arrows, finite and distinct sources.
    pub(crate) fn validate_structure(&self, pair: &TreePair) -> Result<()> {
        let source = pair.source(self.direction);
        let target = pair.target(self.direction);
        for arrow in &self.arrows {
            let src = source
                .point(arrow.src.carrier(), arrow.src.height().clone())
                .map_err(|e| Error::InvalidInterleaving(format!("{} source {}: {e}", self.direction, arrow.src)))?;
            if src.is_root() {
                return Err(Error::InvalidInterleaving(format!(
                    "{} arrow {arrow} starts at the root",
                    self.direction
                )));
            }
            target
                .point(arrow.tgt.carrier(), arrow.tgt.height().clone())
                .map_err(|e| Error::InvalidInterleaving(format!("{} target {}: {e}", self.direction, arrow.tgt)))?;
            if !arrow.is_valid() {
                return Err(Error::InvalidInterleaving(format!(
                    "{} arrow {arrow} points downwards",
                    self.direction
                )));
            }
        }
        for pair_of in self.arrows.windows(2) {
            if pair_of[0].src == pair_of[1].src {
                return Err(Error::InvalidInterleaving(format!(
                    "{} map has two arrows from {}",
                    self.direction, pair_of[0].src
                )));
            }
        }
        Ok(())
    }

    /// First pair of arrows `(a, b)` with `src(a) ⪯ src(b)` but
    /// `tgt(a) ⋠ tgt(b)`.
    pub(crate) fn ancestor_violation(&self, pair: &TreePair) -> Option<(&Arrow, &Arrow)> {
        let source = pair.source(self.direction);
        let target = pair.target(self.direction);
        for a in &self.arrows {
            for b in &self.arrows {
                if source.is_descendant(&a.src, &b.src) && !target.is_descendant(&a.tgt, &b.tgt) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Every arrow of `other` has the same source here with a target at or
    /// above it.
    pub fn extends(&self, other: &UpMap, pair: &TreePair) -> bool {
        let target = pair.target(self.direction);
        other
            .arrows
            .iter()
            .all(|b| self.get(&b.src).is_some_and(|tgt| target.is_descendant(&b.tgt, tgt)))
    }

    pub fn uses(&self, other: &UpMap) -> bool {
        other.arrows.iter().all(|b| self.contains(b))
    }

    /// Inserts `arrow`, keeping the higher target when the source is already
    /// mapped.
    pub fn insert_keep_higher(&mut self, pair: &TreePair, arrow: Arrow) {
        if let Some(existing) = self.arrows.iter_mut().find(|a| a.src == arrow.src) {
            if arrow.tgt.height() > existing.tgt.height() {
                existing.tgt = arrow.tgt;
            }
            return;
        }
        self.arrows.push(arrow);
        let source = pair.source(self.direction);
        self.arrows.sort_by(|a, b| source.dfs_cmp(&a.src, &b.src));
    }

    pub fn remove(&mut self, src: &Point) -> Option<Arrow> {
        let idx = self.arrows.iter().position(|a| a.src == *src)?;
        Some(self.arrows.remove(idx))
    }

    /// Lift: each target is raised to `max(f(src) + δ, f(tgt))`.
    pub fn lift(&self, pair: &TreePair, delta: &Height) -> Result<UpMap> {
        check_delta(delta)?;
        let target = pair.target(self.direction);
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                let level = (a.src.height() + delta).max(a.tgt.height().clone());
                Ok(Arrow::new(a.src.clone(), target.ancestor_at(&a.tgt, &level)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UpMap { direction: self.direction, arrows })
    }

    /// Whether `arrow` lies in the fan of one of this map's arrows: some
    /// `(x, y)` here with the same target `y`, `x ⪯ src(arrow)` and
    /// `f(src(arrow)) ≤ f(y)`.
    pub fn fan_contains(&self, arrow: &Arrow, pair: &TreePair) -> bool {
        let source = pair.source(self.direction);
        self.arrows.iter().any(|a| {
            a.tgt == arrow.tgt && arrow.src.height() <= a.tgt.height() && source.is_descendant(&a.src, &arrow.src)
        })
    }

    /// Residual shift of a single arrow: zero inside the fan, its shift
    /// otherwise.
    pub fn residual_shift_of(&self, arrow: &Arrow, pair: &TreePair) -> Height {
        if arrow.src.is_root() || self.fan_contains(arrow, pair) {
            Height::zero()
        } else {
            arrow.shift()
        }
    }

    /// Maximal residual shift of the arrows of `candidate` relative to this map.
    pub fn residual_shift_of_map(&self, candidate: &UpMap, pair: &TreePair) -> Height {
        candidate
            .arrows
            .iter()
            .map(|a| self.residual_shift_of(a, pair))
            .max()
            .unwrap_or_else(Height::zero)
    }

    fn filtered(&self, keep: impl Fn(&Arrow) -> bool) -> UpMap {
        UpMap { direction: self.direction, arrows: self.arrows.iter().filter(|a| keep(a)).cloned().collect() }
    }
}

pub(crate) fn check_delta(delta: &Height) -> Result<()> {
    if delta.is_infinite() || delta.is_negative() {
        return Err(Error::Precondition(format!("delta must be finite and nonnegative, got {delta}")));
    }
    Ok(())
}

/// A pair of partial up-maps, one per direction, satisfying the
/// cross-condition: `φ(x) ⪯ y ⇒ ψ(y) ⪰ x` and `ψ(y) ⪯ x ⇒ φ(x) ⪰ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialInterleaving {
    pub forward: UpMap,
    pub backward: UpMap,
}

impl PartialInterleaving {
    pub fn empty() -> Self {
        PartialInterleaving { forward: UpMap::empty(Direction::Forward), backward: UpMap::empty(Direction::Backward) }
    }

    pub fn new(pair: &TreePair, forward: Vec<Arrow>, backward: Vec<Arrow>) -> Result<Self> {
        let p = PartialInterleaving::from_arrows(pair, forward, backward);
        p.validate(pair)?;
        Ok(p)
    }

    pub fn from_arrows(pair: &TreePair, forward: Vec<Arrow>, backward: Vec<Arrow>) -> Self {
        PartialInterleaving {
            forward: UpMap::from_arrows(pair, Direction::Forward, forward),
            backward: UpMap::from_arrows(pair, Direction::Backward, backward),
        }
    }

    pub fn map(&self, direction: Direction) -> &UpMap {
        match direction {
            Direction::Forward => &self.forward,
            Direction::Backward => &self.backward,
        }
    }

    pub fn map_mut(&mut self, direction: Direction) -> &mut UpMap {
        match direction {
            Direction::Forward => &mut self.forward,
            Direction::Backward => &mut self.backward,
        }
    }

    /// All arrows, forward ones first.
    pub fn arrows(&self) -> impl Iterator<Item = (Direction, &Arrow)> {
        self.forward
            .arrows
            .iter()
            .map(|a| (Direction::Forward, a))
            .chain(self.backward.arrows.iter().map(|a| (Direction::Backward, a)))
    }

    pub fn len(&self) -> usize {
        self.forward.len() + self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shift(&self) -> Height {
        self.forward.shift().max(self.backward.shift())
    }

    pub fn validate(&self, pair: &TreePair) -> Result<()> {
        if self.forward.direction != Direction::Forward || self.backward.direction != Direction::Backward {
            return Err(Error::InvalidInterleaving("maps have the wrong directions".into()));
        }
        self.forward.validate(pair)?;
        self.backward.validate(pair)?;
        if let Some((a, b)) = self.cross_violation(pair) {
            return Err(Error::InvalidInterleaving(format!(
                "cross-condition fails between forward {a} and backward {b}"
            )));
        }
        Ok(())
    }

    /// First forward/backward arrow pair breaking the cross-condition.
    pub(crate) fn cross_violation(&self, pair: &TreePair) -> Option<(&Arrow, &Arrow)> {
        for a in &self.forward.arrows {
            for b in &self.backward.arrows {
                // a = (x, φ(x)), b = (y, ψ(y))
                let forward_below = pair.second.is_descendant(&a.tgt, &b.src);
                if forward_below && !pair.first.is_descendant(&a.src, &b.tgt) {
                    return Some((a, b));
                }
                let backward_below = pair.first.is_descendant(&b.tgt, &a.src);
                if backward_below && !pair.second.is_descendant(&b.src, &a.tgt) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn extends(&self, other: &PartialInterleaving, pair: &TreePair) -> bool {
        self.forward.extends(&other.forward, pair) && self.backward.extends(&other.backward, pair)
    }

    pub fn uses(&self, other: &PartialInterleaving) -> bool {
        self.forward.uses(&other.forward) && self.backward.uses(&other.backward)
    }

    /// `P`-residual shift of this (candidate) interleaving: the larger of the
    /// two one-sided residual shifts.
    pub fn residual_shift(&self, constraints: &PartialInterleaving, pair: &TreePair) -> Height {
        constraints
            .forward
            .residual_shift_of_map(&self.forward, pair)
            .max(constraints.backward.residual_shift_of_map(&self.backward, pair))
    }

    pub fn lift(&self, pair: &TreePair, delta: &Height) -> Result<PartialInterleaving> {
        Ok(PartialInterleaving { forward: self.forward.lift(pair, delta)?, backward: self.backward.lift(pair, delta)? })
    }

    /// Keeps only the arrows whose sources lie in `first_sources` (forward)
    /// and `second_sources` (backward). Every listed source must be mapped.
    pub fn restriction(&self, first_sources: &[Point], second_sources: &[Point]) -> Result<PartialInterleaving> {
        for (map, sources) in [(&self.forward, first_sources), (&self.backward, second_sources)] {
            if let Some(missing) = sources.iter().find(|s| map.get(s).is_none()) {
                return Err(Error::Precondition(format!(
                    "{missing} is not in the domain of the {} map",
                    map.direction
                )));
            }
        }
        Ok(PartialInterleaving {
            forward: self.forward.filtered(|a| first_sources.contains(&a.src)),
            backward: self.backward.filtered(|a| second_sources.contains(&a.src)),
        })
    }

    /// `self ∖ other`: the arrows of `self` whose source `other` leaves
    /// unmapped or maps elsewhere.
    pub fn relative_difference(&self, other: &PartialInterleaving) -> PartialInterleaving {
        PartialInterleaving {
            forward: self.forward.filtered(|a| !other.forward.contains(a)),
            backward: self.backward.filtered(|a| !other.backward.contains(a)),
        }
    }

    pub fn contains(&self, direction: Direction, arrow: &Arrow) -> bool {
        self.map(direction).contains(arrow)
    }

    /// Adds an arrow, keeping the higher target on a source collision.
    pub fn insert_keep_higher(&mut self, pair: &TreePair, direction: Direction, arrow: Arrow) {
        self.map_mut(direction).insert_keep_higher(pair, arrow);
    }

    /// Canonical ordering key for deterministic iteration over all arrows.
    pub fn arrow_cmp(pair: &TreePair, a: (Direction, &Arrow), b: (Direction, &Arrow)) -> Ordering {
        a.0.cmp(&b.0).then_with(|| pair.source(a.0).dfs_cmp(&a.1.src, &b.1.src))
    }
}
